#include <iostream>
#include <string>
#include <vector>

#include "ipslab/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ipslab::cli::run_cli(args, std::cout, std::cerr);
}
