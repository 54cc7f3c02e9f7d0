#pragma once

#include "flatdetect/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace flatdetect {

// Generators of the exterior algebra: `base` labels z1..zb (directions of the classifying
// space, one per group generator) and `param` labels x1..xp (directions of the parameter
// torus). Every label has degree 1.
struct LabelSpace {
  int base = 0;
  int param = 0;

  bool operator==(const LabelSpace&) const = default;
};

inline constexpr int kMaxLabels = 32;

// A monomial is a set of labels: bit i (< 32) is z_{i+1}, bit 32 + j is x_{j+1}. The bit
// order is the canonical label order, base labels before parameter labels.
using Monomial = std::uint64_t;

inline constexpr Monomial base_bit(int i) { return Monomial{1} << i; }
inline constexpr Monomial param_bit(int j) { return Monomial{1} << (32 + j); }
inline constexpr Monomial kBaseMask = 0xFFFFFFFFull;
inline constexpr std::uint32_t base_part(Monomial m) { return static_cast<std::uint32_t>(m & kBaseMask); }
inline constexpr std::uint32_t param_part(Monomial m) { return static_cast<std::uint32_t>(m >> 32); }
inline constexpr Monomial make_monomial(std::uint32_t base, std::uint32_t param) {
  return Monomial{base} | (Monomial{param} << 32);
}

int degree(Monomial m);

// Sign and product of two monomials in the exterior algebra: sign is 0 when they share a
// label, otherwise (-1)^(number of label pairs that must be swapped to sort the concatenation).
struct MonomialProduct {
  int sign;
  Monomial monomial;
};
MonomialProduct multiply(Monomial a, Monomial b);

// Lower degree first, then lexicographic in the canonical label order.
struct MonomialOrder {
  bool operator()(Monomial a, Monomial b) const noexcept;
};

std::string monomial_label(Monomial m);

// Element of the exterior algebra over Q on a fixed LabelSpace. Coefficients are exact and
// zero terms are never stored.
class MultiForm {
 public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  MultiForm() = default;
  explicit MultiForm(LabelSpace space) : space_(space) { check_space(space); }

  static MultiForm scalar(LabelSpace space, const Rational& value);
  static MultiForm base_generator(LabelSpace space, int i);   // z_{i+1}
  static MultiForm param_generator(LabelSpace space, int j);  // x_{j+1}
  static MultiForm monomial(LabelSpace space, Monomial m, const Rational& coeff = 1);

  const LabelSpace& space() const noexcept { return space_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Rational coefficient(Monomial m) const;
  // Adds c * m; drops the term if the result is zero.
  void add_term(Monomial m, const Rational& c);

  MultiForm operator+(const MultiForm& rhs) const;
  MultiForm operator-(const MultiForm& rhs) const;
  MultiForm operator-() const;
  MultiForm operator*(const Rational& s) const;
  MultiForm& operator+=(const MultiForm& rhs);
  bool operator==(const MultiForm& rhs) const { return space_ == rhs.space_ && terms_ == rhs.terms_; }

  // Homogeneous component of the given total degree.
  MultiForm degree_part(int deg) const;
  // Degree-0 coefficient.
  Rational scalar_part() const { return coefficient(0); }
  // True when every term has the same degree; `deg` receives it (0 for the zero form).
  bool is_homogeneous(int* deg = nullptr) const;

  // Re-expresses the form in a larger label space, shifting base labels by base_offset
  // and parameter labels by param_offset.
  MultiForm embed(LabelSpace target, int base_offset, int param_offset) const;

  // Pullback along the inclusion of the coordinate sub-torus spanned by `keep` (sorted
  // parameter indices): the other parameter labels map to zero, the kept ones are renumbered.
  MultiForm restrict_params(const std::vector<int>& keep) const;

  // exp(w) for a form with no degree-0 part; the series terminates by nilpotency.
  MultiForm exp() const;

  // "1 + z1^x1 - 1/2 z1^z2^x1^x2"; "0" for the zero form.
  std::string to_string() const;

 private:
  static void check_space(LabelSpace space);
  void check_monomial(Monomial m) const;

  LabelSpace space_{};
  Terms terms_;
};

// Graded-anticommutative product. Throws InvalidInput when the label spaces differ.
MultiForm wedge(const MultiForm& a, const MultiForm& b);

// Parses sums of products like "(1 + z1 x1) * (1 + z2 x2) - 1/2 z1^x1". Juxtaposition,
// `^` and `*` all denote the wedge product. The label space is the smallest one covering
// the labels used unless `space` is given.
MultiForm parse_form(const std::string& text);
MultiForm parse_form(const std::string& text, LabelSpace space);

}  // namespace flatdetect
