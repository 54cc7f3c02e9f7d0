#pragma once

#include "flatdetect/presentation.hpp"
#include "flatdetect/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flatdetect {

// x -> linear * x + translation on Q^d.
struct AffineMap {
  RationalMatrix linear;
  RationalMatrix translation;  // d x 1

  static AffineMap identity(std::size_t d);
  std::size_t dim() const noexcept { return linear.rows(); }
  AffineMap compose(const AffineMap& inner) const;  // this o inner
  AffineMap inverse() const;
  bool is_identity() const;
  bool is_translation() const;
  bool operator==(const AffineMap&) const = default;
};

// A finite-index subgroup G0 of a group G, described structurally:
//  - a faithful affine model of G (one affine map per generator), in which membership in G0
//    is decidable;
//  - generators of G0 as words in G, whose images must be linearly independent translations
//    spanning a full lattice (so G0 is free abelian of rank d);
//  - coset representatives t_0, ..., t_{m-1} as words in G.
// Membership of g in G0: the image of g is a translation lying on the lattice. The integer
// lattice coordinates express g as a word in the G0 generators.
class SubgroupCover {
 public:
  // Validates the model (relators map to the identity), the lattice, and the coset system.
  // Throws InvalidInput, in particular when some g t_j hits no listed coset.
  SubgroupCover(GroupPresentation group, std::vector<AffineMap> model, std::vector<Word> subgroup_generators,
                std::vector<Word> cosets, std::vector<std::string> subgroup_names = {});

  const GroupPresentation& group() const noexcept { return group_; }
  // Free abelian presentation of the subgroup, generators in lattice order.
  const GroupPresentation& subgroup() const noexcept { return subgroup_; }
  const std::vector<Word>& subgroup_generators() const noexcept { return subgroup_generators_; }
  const std::vector<Word>& cosets() const noexcept { return cosets_; }
  std::size_t index() const noexcept { return cosets_.size(); }
  std::size_t lattice_rank() const noexcept { return lattice_.cols(); }
  // Columns are the translations of the subgroup generators.
  const RationalMatrix& lattice() const noexcept { return lattice_; }

  AffineMap image(const Word& w) const;
  // Lattice coordinates of w when w lies in the subgroup.
  std::optional<std::vector<long>> subgroup_coordinates(const Word& w) const;

  // For generator g and coset j: the coset i with t_i^-1 g t_j in G0, and that element's
  // lattice coordinates.
  struct CosetStep {
    std::size_t target = 0;
    std::vector<long> coords;
  };
  const CosetStep& action(std::size_t generator, std::size_t coset) const { return action_.at(generator).at(coset); }

  // True when G is Z^n with the model sending generator i to the translation by e_i. Then the
  // cover of classifying spaces is the torus cover T^n -> T^n with matrix lattice().
  bool free_abelian_model() const noexcept { return free_abelian_; }

  std::string describe() const;

 private:
  GroupPresentation group_;
  GroupPresentation subgroup_;
  std::vector<AffineMap> model_;
  std::vector<Word> subgroup_generators_;
  std::vector<Word> cosets_;
  RationalMatrix lattice_;
  RationalMatrix lattice_inverse_;
  std::vector<std::vector<CosetStep>> action_;
  bool free_abelian_ = false;
};

// k Z <= Z = <e1>, cosets e, e1, ..., e1^{k-1}.
SubgroupCover circle_cover(int k);
// M Z^n <= Z^n = <e1, ..., en> for an integer matrix M with nonzero determinant; columns of M generate the
// sublattice. Coset representatives are the first |det M| pairwise inequivalent points of the
// box [0, |det M|)^n in lexicographic order.
SubgroupCover torus_cover(const RationalMatrix& m);
// Z^2 = <a, b^2> <= Klein bottle group <a, b | a b a b^-1>, cosets e, b.
SubgroupCover klein_cover();

// JSON cover description:
// {"group": "<presentation text>", "model": {"<gen>": {"linear": [["1","0"],["0","1"]],
//  "translation": ["1","0"]}, ...}, "subgroup": ["a", "b b"], "cosets": ["", "b"],
//  "subgroup_names": ["s1", "s2"]}
SubgroupCover parse_cover_json(const std::string& text);
SubgroupCover load_cover(const std::string& path);

}  // namespace flatdetect
