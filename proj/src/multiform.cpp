#include "flatdetect/multiform.hpp"

#include "flatdetect/error.hpp"

#include <bit>
#include <cctype>

namespace flatdetect {

int degree(Monomial m) { return std::popcount(m); }

MonomialProduct multiply(Monomial a, Monomial b) {
  if ((a & b) != 0) return {0, 0};
  // Count pairs (i in a, j in b) with i > j: the transpositions needed to sort a.b.
  int swaps = 0;
  Monomial rest = b;
  while (rest != 0) {
    const int j = std::countr_zero(rest);
    rest &= rest - 1;
    const Monomial above = (j == 63) ? 0 : (~Monomial{0} << (j + 1));
    swaps += std::popcount(a & above);
  }
  return {(swaps % 2 == 0) ? 1 : -1, a | b};
}

bool MonomialOrder::operator()(Monomial a, Monomial b) const noexcept {
  const int da = std::popcount(a);
  const int db = std::popcount(b);
  if (da != db) return da < db;
  if (a == b) return false;
  const Monomial diff = a ^ b;
  const Monomial lowest = diff & (~diff + 1);
  return (a & lowest) != 0;
}

std::string monomial_label(Monomial m) {
  if (m == 0) return "1";
  std::string out;
  for (int i = 0; i < 64; ++i) {
    if ((m & (Monomial{1} << i)) == 0) continue;
    if (!out.empty()) out += '^';
    out += (i < 32) ? "z" + std::to_string(i + 1) : "x" + std::to_string(i - 32 + 1);
  }
  return out;
}

void MultiForm::check_space(LabelSpace space) {
  if (space.base < 0 || space.param < 0 || space.base > kMaxLabels || space.param > kMaxLabels)
    throw InvalidInput("label space out of range (at most 32 base and 32 parameter labels)");
}

void MultiForm::check_monomial(Monomial m) const {
  const std::uint32_t base_allowed = space_.base == 32 ? 0xFFFFFFFFu : ((1u << space_.base) - 1u);
  const std::uint32_t param_allowed = space_.param == 32 ? 0xFFFFFFFFu : ((1u << space_.param) - 1u);
  if ((base_part(m) & ~base_allowed) != 0 || (param_part(m) & ~param_allowed) != 0)
    throw InvalidInput("monomial " + monomial_label(m) + " uses labels outside the form's label space");
}

MultiForm MultiForm::scalar(LabelSpace space, const Rational& value) {
  MultiForm f(space);
  f.add_term(0, value);
  return f;
}

MultiForm MultiForm::base_generator(LabelSpace space, int i) {
  if (i < 0 || i >= space.base) throw InvalidInput("base label index out of range");
  return monomial(space, base_bit(i));
}

MultiForm MultiForm::param_generator(LabelSpace space, int j) {
  if (j < 0 || j >= space.param) throw InvalidInput("parameter label index out of range");
  return monomial(space, param_bit(j));
}

MultiForm MultiForm::monomial(LabelSpace space, Monomial m, const Rational& coeff) {
  MultiForm f(space);
  f.add_term(m, coeff);
  return f;
}

Rational MultiForm::coefficient(Monomial m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultiForm::add_term(Monomial m, const Rational& c) {
  if (c == 0) return;
  check_monomial(m);
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiForm& MultiForm::operator+=(const MultiForm& rhs) {
  if (!(space_ == rhs.space_)) throw InvalidInput("adding forms over different label spaces");
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

MultiForm MultiForm::operator+(const MultiForm& rhs) const {
  MultiForm out = *this;
  out += rhs;
  return out;
}

MultiForm MultiForm::operator-() const {
  MultiForm out(space_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

MultiForm MultiForm::operator-(const MultiForm& rhs) const { return *this + (-rhs); }

MultiForm MultiForm::operator*(const Rational& s) const {
  MultiForm out(space_);
  if (s == 0) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
  return out;
}

MultiForm MultiForm::degree_part(int deg) const {
  MultiForm out(space_);
  for (const auto& [m, c] : terms_)
    if (degree(m) == deg) out.terms_.emplace(m, c);
  return out;
}

bool MultiForm::is_homogeneous(int* deg) const {
  int d = terms_.empty() ? 0 : degree(terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (degree(m) != d) return false;
  if (deg != nullptr) *deg = d;
  return true;
}

MultiForm MultiForm::embed(LabelSpace target, int base_offset, int param_offset) const {
  if (base_offset < 0 || param_offset < 0 || base_offset + space_.base > target.base ||
      param_offset + space_.param > target.param)
    throw InvalidInput("embedding does not fit the target label space");
  MultiForm out(target);
  for (const auto& [m, c] : terms_) {
    const Monomial shifted = make_monomial(base_part(m) << base_offset, param_part(m) << param_offset);
    out.terms_.emplace(shifted, c);
  }
  return out;
}

MultiForm MultiForm::restrict_params(const std::vector<int>& keep) const {
  MultiForm out(LabelSpace{space_.base, static_cast<int>(keep.size())});
  std::uint32_t keep_mask = 0;
  for (int k : keep) {
    if (k < 0 || k >= space_.param) throw InvalidInput("restriction keeps a parameter label outside the space");
    keep_mask |= 1u << k;
  }
  for (const auto& [m, c] : terms_) {
    const std::uint32_t p = param_part(m);
    if ((p & ~keep_mask) != 0) continue;
    std::uint32_t renumbered = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
      if ((p >> keep[i]) & 1u) renumbered |= 1u << i;
    out.add_term(make_monomial(base_part(m), renumbered), c);
  }
  return out;
}

MultiForm MultiForm::exp() const {
  if (scalar_part() != 0) throw InvalidInput("exp of a form with a nonzero scalar part");
  MultiForm result = scalar(space_, 1);
  MultiForm power = scalar(space_, 1);
  Rational factorial = 1;
  for (int k = 1;; ++k) {
    power = wedge(power, *this);
    if (power.is_zero()) break;
    factorial *= k;
    result += power * (Rational(1) / factorial);
  }
  return result;
}

std::string MultiForm::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m == 0) {
      out += flatdetect::to_string(mag);
    } else {
      if (mag != 1) out += flatdetect::to_string(mag) + " ";
      out += monomial_label(m);
    }
  }
  return out;
}

MultiForm wedge(const MultiForm& a, const MultiForm& b) {
  if (!(a.space() == b.space())) throw InvalidInput("wedge of forms over different label spaces");
  MultiForm out(a.space());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      const MonomialProduct p = multiply(ma, mb);
      if (p.sign == 0) continue;
      out.add_term(p.monomial, p.sign > 0 ? Rational(ca * cb) : Rational(-(ca * cb)));
    }
  return out;
}

namespace {

// Parses into a "wide" space (32/32) then shrinks to the requested one.
class FormParser {
 public:
  explicit FormParser(const std::string& text) : text_(text) {}

  MultiForm parse() {
    MultiForm f = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

  int max_base = 0;
  int max_param = 0;

 private:
  static constexpr LabelSpace kWide{kMaxLabels, kMaxLabels};

  MultiForm expr() {
    MultiForm acc = term();
    while (true) {
      skip();
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc += -term();
      } else {
        return acc;
      }
    }
  }

  MultiForm term() {
    skip();
    bool negate = false;
    while (peek('-') || peek('+')) {
      if (text_[pos_] == '-') negate = !negate;
      ++pos_;
      skip();
    }
    MultiForm acc = factor();
    while (true) {
      skip();
      if (peek('*') || peek('^')) {
        ++pos_;
        acc = wedge(acc, factor());
      } else if (pos_ < text_.size() && starts_factor(text_[pos_])) {
        acc = wedge(acc, factor());
      } else {
        break;
      }
    }
    return negate ? -acc : acc;
  }

  static bool starts_factor(char c) {
    return c == '(' || c == 'z' || c == 'x' || std::isdigit(static_cast<unsigned char>(c));
  }

  MultiForm factor() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of form");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      MultiForm inner = expr();
      skip();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == 'z' || c == 'x') {
      ++pos_;
      const long idx = number();
      if (idx < 1 || idx > kMaxLabels) fail("label index out of range");
      const int i = static_cast<int>(idx) - 1;
      if (c == 'z') {
        max_base = std::max(max_base, i + 1);
        return MultiForm::base_generator(kWide, i);
      }
      max_param = std::max(max_param, i + 1);
      return MultiForm::param_generator(kWide, i);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (peek('/')) {
        ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected denominator");
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
      return MultiForm::scalar(kWide, parse_rational(text_.substr(start, pos_ - start)));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  long number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a label index");
    return std::stol(text_.substr(start, pos_ - start));
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, static_cast<int>(pos_) + 1);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

MultiForm shrink(const MultiForm& wide, LabelSpace space) {
  MultiForm out(space);
  for (const auto& [m, c] : wide.terms()) out.add_term(m, c);
  return out;
}

}  // namespace

MultiForm parse_form(const std::string& text) {
  FormParser p(text);
  const MultiForm wide = p.parse();
  return shrink(wide, LabelSpace{p.max_base, p.max_param});
}

MultiForm parse_form(const std::string& text, LabelSpace space) {
  FormParser p(text);
  return shrink(p.parse(), space);
}

}  // namespace flatdetect
