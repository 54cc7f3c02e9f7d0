#pragma once

#include "flatdetect/cover.hpp"
#include "flatdetect/multiform.hpp"
#include "flatdetect/presentation.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace flatdetect {

// One connected component of a parameter space: a torus with the given grid resolution per
// axis (no axes for a point).
struct ParamComponent {
  std::vector<int> resolutions;

  int dim() const noexcept { return static_cast<int>(resolutions.size()); }
  bool operator==(const ParamComponent&) const = default;
};

struct ParamPoint {
  std::size_t component = 0;
  std::vector<double> coords;  // each in [0, 1)
};

// Structured parameter space X: tori, finite point sets, and their products and disjoint
// unions. Value type; shares immutable nodes.
class ParameterSpace {
 public:
  enum class Kind { Torus, Points, Product, DisjointUnion };
  struct Node {
    Kind kind = Kind::Points;
    int dim = 0;         // Torus
    int resolution = 0;  // Torus
    int count = 0;       // Points
    std::vector<ParameterSpace> children;  // Product, DisjointUnion: left, right
  };

  static ParameterSpace torus(int dim, int resolution);
  static ParameterSpace points(int count);
  static ParameterSpace product(const ParameterSpace& left, const ParameterSpace& right);
  static ParameterSpace disjoint_union(const ParameterSpace& left, const ParameterSpace& right);

  const Node& node() const { return *node_; }
  // Components in canonical order: products enumerate left-major, unions left first.
  const std::vector<ParamComponent>& components() const noexcept { return components_; }
  std::string describe() const;
  bool operator==(const ParameterSpace& other) const;

 private:
  explicit ParameterSpace(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
  std::vector<ParamComponent> components_;
};

// A family of representations rho: X -> Hom(G, U(k)). Carries the build tree (as text) and,
// when the combinators that produced it support it, the exact Chern character of the
// associated bundle per component of X, as a MultiForm over (z1..z_|gens|, x1..x_dim).
class Family {
 public:
  using Evaluator = std::function<RepPoint(const ParamPoint&)>;

  // Throws InvalidInput when the fiber dimensions or Chern data do not match the space, or
  // when a Chern character's degree-0 part differs from the fiber dimension.
  Family(GroupPresentation group, ParameterSpace space, std::vector<int> fiber_dims, Evaluator evaluate,
         std::string structure, std::optional<std::vector<MultiForm>> chern = std::nullopt);

  const GroupPresentation& group() const noexcept { return group_; }
  const ParameterSpace& space() const noexcept { return space_; }
  const std::vector<ParamComponent>& components() const noexcept { return space_.components(); }
  const std::vector<int>& fiber_dims() const noexcept { return fiber_dims_; }
  const std::string& structure() const noexcept { return structure_; }
  bool has_chern() const noexcept { return chern_.has_value(); }
  // Throws InvalidInput when absent.
  const std::vector<MultiForm>& chern() const;
  const std::optional<std::vector<MultiForm>>& chern_if_present() const noexcept { return chern_; }

  // Throws InvalidInput for a point outside the space.
  RepPoint evaluate(const ParamPoint& p) const;

  // Grid nodes of every component; components with more than max_per_component nodes are
  // subsampled on a coarser sub-grid.
  std::vector<ParamPoint> sample_points(std::size_t max_per_component = 4096) const;

 private:
  GroupPresentation group_;
  ParameterSpace space_;
  std::vector<int> fiber_dims_;
  Evaluator evaluate_;
  std::string structure_;
  std::optional<std::vector<MultiForm>> chern_;
};

struct FamilyCheck {
  double max_defect = 0.0;
  double max_unitarity = 0.0;
  std::size_t points = 0;
  bool passed = true;
};

// Evaluates at the sample points and checks verify_homomorphism at tol.
FamilyCheck verify_family(const Family& f, double tol = 1e-8, std::size_t max_per_component = 4096);

GroupPresentation free_abelian_group(int n);         // gens e1..en, commutator relators
GroupPresentation free_group(int m);                 // gens a1..am, no relators
GroupPresentation surface_group(int genus);          // gens a1 b1 .. ag bg, product of commutators
GroupPresentation klein_bottle_group();              // gens a b, relator a b a b^-1
// G1 x G2: generators of G1 then G2 (renamed with a `_2` suffix on collision), both relator
// sets, and commutators between every generator of G1 and every generator of G2.
GroupPresentation direct_product(const GroupPresentation& g1, const GroupPresentation& g2);
// G1 * G2: the same generator list and renaming, both relator sets, nothing else.
GroupPresentation free_product(const GroupPresentation& g1, const GroupPresentation& g2);

// Family over T^d for Z^n with rho_x(e_j) = exp(2 pi i sum_k W_jk x_k); W is n x d integral.
// Chern data: exp(sum_jk W_jk z_j ^ x_k).
Family character_family(const std::vector<std::vector<int>>& windings, int resolution);
// The identity-winding case: rho_x(e_j) = e^{2 pi i x_j}; Chern data prod_j (1 + z_j ^ x_j).
Family character_family_Zn(int n, int resolution);

// Constant trivial family of the given dimension; Chern data is the rank.
Family trivial_family(const GroupPresentation& group, int dim, const ParameterSpace& space);

// Pointwise Kronecker product rho1(g1) (x) rho2(g2) over X1 x X2 for G1 x G2 (left factor
// first). Chern data: the wedge product of the embedded factors.
Family tensor_families(const Family& f, const Family& g);

// Pointwise induction from the subgroup of `cover` (f must be a family for a group with the
// subgroup's generator count) to cover.group(). Block (i, j) of the image of generator g is
// rho(t_i^-1 g t_j) when that element lies in the subgroup, zero otherwise. Exact Chern data is
// propagated through the cohomology transfer when the cover is a torus cover of Z^n.
Family induce_family(const Family& f, const SubgroupCover& cover);

// Restriction of a family for cover.group() to the subgroup (pullback along the cover).
// Exact Chern data is pulled back when the cover is a torus cover of Z^n.
Family restrict_family(const Family& f, const SubgroupCover& cover);

// Extends a family for G1 to G = G1 * G2 by sending the remaining generators to the
// identity. `placement` names, in order, the generator of G that each generator of f's group
// becomes; empty means "same names". Every relator of G must only involve generators of one
// factor, and the G1-relators must be f's relators.
Family extend_free_product(const Family& f, const GroupPresentation& g,
                           const std::vector<std::string>& placement = {});

// Family over X1 disjoint-union X2; Chern data concatenates per component.
Family disjoint_union(const Family& f, const Family& g);

// Blockwise direct sum over a common parameter space; fiber dimensions and Chern data add.
Family direct_sum(const Family& f, const Family& g);

// Exact cohomology maps for a torus cover pi: T^d -> T^n given by SubgroupCover with
// free_abelian_model(). Base labels of the subgroup side are the lattice directions.
//   pullback: pi^*(z_S) = sum_T det(M[S, T]) w_T
//   transfer: t(w_T) = |det M| sum_S det(M^-1[T, S]) z_S
MultiForm pullback_along_cover(const MultiForm& form, const SubgroupCover& cover);
MultiForm transfer_along_cover(const MultiForm& form, const SubgroupCover& cover);

}  // namespace flatdetect
