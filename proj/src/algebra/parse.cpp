#include "ipslab/algebra/parse.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ipslab/errors.hpp"

namespace ipslab {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, const Field& field, const VarTablePtr& vars)
      : text_(text), field_(field), vars_(vars) {}

  SparsePoly parse() {
    SparsePoly p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

  // Names only, for building a table.
  static std::vector<std::string> scan_names(std::string_view text) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < text.size();) {
      if (name_start(text[i])) {
        std::size_t j = read_name_end(text, i);
        names.emplace_back(text.substr(i, j - i));
        i = j;
      } else {
        ++i;
      }
    }
    return names;
  }

 private:
  static std::size_t read_name_end(std::string_view text, std::size_t i) {
    while (i < text.size() && name_char(text[i])) {
      if (text[i] == '_' && i + 1 < text.size() && text[i + 1] == '{') {
        const std::size_t close = text.find('}', i);
        if (close == std::string_view::npos) return text.size();
        i = close + 1;
      } else {
        ++i;
      }
    }
    return i;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DomainError("parse error at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "': " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  SparsePoly expr() {
    skip();
    SparsePoly acc(field_, vars_);
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    SparsePoly t = term();
    acc = negate ? -t : t;
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  SparsePoly term() {
    SparsePoly acc = power();
    for (;;) {
      if (accept('*')) {
        acc *= power();
      } else if (accept('/')) {
        SparsePoly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division only by nonzero constants");
        acc = acc.scale(field_.inv(d.constant_term()));
      } else {
        skip();
        // implicit multiplication: "2x1" or "x1 x2" or "(..)(..)"
        if (pos_ < text_.size() && (name_start(text_[pos_]) || text_[pos_] == '(')) {
          acc *= power();
        } else {
          return acc;
        }
      }
    }
  }

  SparsePoly power() {
    SparsePoly base = atom();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  SparsePoly atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      SparsePoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (c == '[') {
      const std::size_t close = text_.find(']', pos_);
      if (close == std::string_view::npos) fail("unterminated '['");
      Scalar s = field_.parse_scalar(text_.substr(pos_, close - pos_ + 1));
      pos_ = close + 1;
      return SparsePoly::constant(field_, vars_, s);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return SparsePoly::constant(field_, vars_, field_.parse_scalar(text_.substr(start, pos_ - start)));
    }
    if (name_start(c)) {
      const std::size_t end = read_name_end(text_, pos_);
      const std::string name(text_.substr(pos_, end - pos_));
      pos_ = end;
      return SparsePoly::variable(field_, vars_, vars_->id(name));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const Field& field_;
  const VarTablePtr& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      const std::string na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

SparsePoly parse_poly(std::string_view text, const Field& field, const VarTablePtr& vars) {
  return Parser(text, field, vars).parse();
}

SparsePoly parse_poly(std::string_view text, const Field& field) {
  std::set<std::string> uniq;
  for (auto& n : Parser::scan_names(text)) uniq.insert(std::move(n));
  std::vector<std::string> names(uniq.begin(), uniq.end());
  std::sort(names.begin(), names.end(), natural_less);
  return parse_poly(text, field, VarTable::make(std::move(names)));
}

}  // namespace ipslab
