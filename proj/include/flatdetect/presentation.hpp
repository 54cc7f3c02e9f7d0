#pragma once

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace flatdetect {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct Letter {
  std::size_t generator = 0;
  bool inverse = false;

  auto operator<=>(const Letter&) const = default;
};

// A word in the free group on the generators of some presentation, one letter per entry.
struct Word {
  std::vector<Letter> letters;

  bool empty() const noexcept { return letters.empty(); }
  std::size_t size() const noexcept { return letters.size(); }

  Word inverse() const;
  Word operator*(const Word& rhs) const;
  bool operator==(const Word&) const = default;

  static Word generator(std::size_t index, bool inverse = false) { return Word{{Letter{index, inverse}}}; }
};

// Returns the unique freely reduced word equal to w.
Word free_reduce(const Word& w);

bool is_freely_reduced(const Word& w);

// A finitely presented group: ordered generator names plus freely reduced relators.
// Immutable once built.
class GroupPresentation {
 public:
  GroupPresentation() = default;
  // Throws InvalidInput for duplicate/empty/malformed generator names or out-of-range letters.
  GroupPresentation(std::vector<std::string> generators, std::vector<Word> relators);

  const std::vector<std::string>& generators() const noexcept { return generators_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }
  std::size_t generator_count() const noexcept { return generators_.size(); }

  // Index of a generator by name; throws InvalidInput when undeclared.
  std::size_t index_of(std::string_view name) const;
  bool has_generator(std::string_view name) const;

  // Canonical text form, re-parseable by parse_presentation.
  std::string to_text() const;
  std::string format_word(const Word& w) const;

  bool operator==(const GroupPresentation&) const = default;

 private:
  std::vector<std::string> generators_;
  std::vector<Word> relators_;
};

// Grammar: `gens: <id> ... ; rels: <word> , <word> ... ;` with letters `<id>` or `<id>^-1`
// and `#` comments. Relators come back freely reduced; relators reducing to the empty
// word are dropped. Throws ParseError with line/column.
GroupPresentation parse_presentation(std::string_view text);
GroupPresentation load_presentation(const std::string& path);

// Parses a whitespace-separated word against the generators of g. The tokens `e` and `1`
// (when not declared as generators) and the empty string denote the identity.
Word parse_word(std::string_view text, const GroupPresentation& g);

bool is_identifier(std::string_view s);

// Matrix assignment to each generator, indexed like GroupPresentation::generators().
struct RepPoint {
  std::vector<Matrix> matrices;

  std::size_t generator_count() const noexcept { return matrices.size(); }
  // Dimension of the first matrix, 0 when there are no generators.
  Eigen::Index dimension() const noexcept { return matrices.empty() ? 0 : matrices.front().rows(); }
};

// Product of the assigned matrices (adjoints for inverse letters), identity for the empty
// word (sized by the point's first matrix). Throws InvalidInput on mismatched or
// non-square matrices.
Matrix evaluate_word(const Word& w, const RepPoint& point);

}  // namespace flatdetect
