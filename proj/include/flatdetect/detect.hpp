#pragma once

#include "flatdetect/cover.hpp"
#include "flatdetect/families.hpp"
#include "flatdetect/multiform.hpp"
#include "flatdetect/presentation.hpp"
#include "flatdetect/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flatdetect {

// Rational homology supplied by the caller for a finite-index supergroup.
struct HomologyTable {
  std::vector<int> betti;
  // Representative words of a basis of H_1, in the supergroup's generators.
  std::vector<std::string> h1_words;
};

class GroupClassDescriptor {
 public:
  enum class Kind { Free, FreeAbelian, SurfaceClosed, FreeProduct, DirectProduct, FiniteIndexSuper };

  static GroupClassDescriptor free(int rank);
  static GroupClassDescriptor free_abelian(int rank);
  static GroupClassDescriptor surface(int genus);
  static GroupClassDescriptor free_product(const GroupClassDescriptor& left, const GroupClassDescriptor& right);
  static GroupClassDescriptor direct_product(const GroupClassDescriptor& left, const GroupClassDescriptor& right);
  // `group` is the supergroup's presentation; the table may be omitted, in which case
  // rational_homology throws.
  static GroupClassDescriptor finite_index_super(const GroupClassDescriptor& sub, int index, std::string label,
                                                 GroupPresentation group,
                                                 std::optional<HomologyTable> table = std::nullopt);

  Kind kind() const noexcept { return kind_; }
  int rank() const noexcept { return rank_; }
  int index() const noexcept { return rank_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<GroupClassDescriptor>& children() const noexcept { return children_; }
  const std::optional<HomologyTable>& table() const noexcept { return table_; }

  // The model presentation whose generators are the base labels z1, z2, ... in order.
  const GroupPresentation& presentation() const noexcept { return presentation_; }
  std::string describe() const;

 private:
  GroupClassDescriptor() = default;

  Kind kind_ = Kind::Free;
  int rank_ = 0;  // rank, genus, or index
  std::string label_;
  std::vector<GroupClassDescriptor> children_;
  std::optional<HomologyTable> table_;
  GroupPresentation presentation_;
};

// A basis class of H_q(BG; Q), given by its pairing with base monomials (degree-q subsets of
// z labels). Degree-1 classes also carry a representative loop as a word.
struct HomologyClass {
  int degree = 0;
  std::string label;
  std::vector<std::pair<std::uint32_t, Rational>> functional;  // empty when only the rank is known
  std::optional<Word> representative;
  bool functional_known = true;
};

struct HomologyBasis {
  std::vector<HomologyClass> classes;  // sorted by degree
  std::vector<int> betti() const;
};

// Throws InvalidInput for a finite-index supergroup without a homology table.
HomologyBasis rational_homology(const GroupClassDescriptor& d);

// Contraction of ch (on base x parameter labels) against a homology class: the x-form
// sum over terms c z_S x_P of c <S, class> x_P. Monomials are stored base-first, so no
// further reordering sign appears. Throws InvalidInput when the class's functional is unknown
// or uses labels outside ch's base space.
MultiForm slant_contract(const MultiForm& ch, const HomologyClass& cls);

// Pushforward of a homology class of the covering torus to the base torus for a torus cover:
// pi_*[w_T] = sum_S det(M[S, T]) [z_S].
HomologyClass pushforward_class(const HomologyClass& cls, const SubgroupCover& cover);

enum class Verdict { FdCertified, Undetected, Obstructed };
std::string to_string(Verdict v);

struct DetectionColumn {
  std::size_t family = 0;
  std::size_t component = 0;
  std::uint32_t x_monomial = 0;
  std::string label;
};

struct DetectionReport {
  std::string group;
  std::vector<std::string> families;
  std::vector<std::string> row_labels;
  std::vector<int> row_degrees;
  std::vector<DetectionColumn> columns;
  // Null entries could not be determined (numeric pairing beyond degree 2).
  std::vector<std::vector<std::optional<Rational>>> matrix;
  std::vector<bool> detected;
  Verdict verdict = Verdict::Undetected;
  std::vector<std::string> undetected;
  bool numeric = false;
  std::string scope;
  std::vector<std::string> sign_conventions;
};

// Exact pairing of every basis class with the Chern data of every family component. Throws
// InvalidInput when a family lacks exact Chern data or is built for a different group.
DetectionReport detection_matrix(const GroupClassDescriptor& d, const std::vector<Family>& fams);

// Numeric pairing for families without exact Chern data: rank in degree (0,0), zero by
// parity, triviality over a point, or flatness, and determinant windings for degree (1,1).
// Other entries are null.
DetectionReport numeric_detection_matrix(const GroupClassDescriptor& d, const std::vector<Family>& fams);

struct TransferCheck {
  bool passed = false;
  std::size_t index = 0;
  std::size_t exact_entries = 0;
  std::size_t numeric_entries = 0;
  std::string detail;
};

// Restricts f (a family for cover.group()) to the subgroup and induces back, then checks that
// every exact detection entry scales by the index, and that the numerically computable
// entries of the round trip agree with the scaled exact ones.
TransferCheck transfer_scaling_check(const Family& f, const SubgroupCover& cover);

struct BmObstruction {
  Integer g;
  Integer h2_lower_bound;
  bool excluded = false;
};
// Throws InvalidInput unless f >= 2 and index >= 2.
BmObstruction bm_obstruction(const Integer& f, const Integer& index);

struct BettiInequality {
  Integer lhs;
  Integer rhs;
  bool holds = false;
};
// Poincare polynomial of U(n): prod_{i=1..n} (1 + t^{2i-1}), coefficients by degree.
std::vector<Integer> unitary_poincare_polynomial(int n);
BettiInequality betti_inequality_check(int m, int n);

}  // namespace flatdetect
