#ifndef SEIFERT_OBSTRUCTION_HPP
#define SEIFERT_OBSTRUCTION_HPP

// Fiber equations of Abelian components and the certificate that a closed
// strictly diagonally dominant graph manifold has no vertex faithful
// representation into the motion group.
//
// For a block i with neighbours W, b_i = prod_{w in W} b_{w,i}. Summing the
// scaled boundary relations of i gives, in additive notation for the Abelian
// image,
//
//     b_i k_i f_i - sum_{w in W_A} (b_i / b_{w,i}) f_w = sum_{w in W_C} (b_i / b_{w,i}) f_w
//
// where W_A are the neighbours inside the component and W_C the rest. The
// rows over an induced component form the associated matrix equation
// M f_A = R f_C. When det M != 0, det(M) f_A = adj(M) R f_C expresses a
// multiple of every member fiber through the fibers outside the component,
// which are central; every member fiber is then a root of a central element
// and has projectively finite order.

#include "seifert/covers.hpp"
#include "seifert/exact_linalg.hpp"
#include "seifert/manifold.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace seifert {

/// b_v = prod over neighbours w of b_{w,v}. Throws std::invalid_argument for an isolated block.
Integer fiber_product(const GraphManifold& m, BlockId v);

struct AssociatedMatrix {
  std::vector<BlockId> vertices;  ///< row and column order
  std::vector<BlockId> symbols;   ///< blocks outside the component adjacent to it, sorted
  IntMatrix entries;              ///< vertices x vertices
  IntMatrix rhs;                  ///< vertices x symbols
};

/// Throws std::invalid_argument for a component that is not induced (lift it
/// with induce_component_cover first) or not connected.
AssociatedMatrix associated_matrix(const GraphManifold& m, const AbelianComponent& comp);

bool is_sdd_matrix(const IntMatrix& m);

/// Absolute row masses of one row of M f = R c.
struct RowDominance {
  Integer diagonal;      ///< |M_ii|
  Integer off_diagonal;  ///< sum_{j != i} |M_ij|
  Integer rhs_mass;      ///< sum_j |R_ij|

  bool strict() const { return diagonal > off_diagonal; }
  /// The inequality of the obstruction argument: the diagonal beats both masses together.
  bool strict_with_rhs() const { return diagonal > off_diagonal + rhs_mass; }
  friend bool operator==(const RowDominance&, const RowDominance&) = default;
};

std::vector<RowDominance> row_dominance(const AssociatedMatrix& a);

inline Integer exact_det(const IntMatrix& m) { return determinant(m); }
inline IntMatrix exact_adjugate(const IntMatrix& m) { return adjugate(m); }

/// D f_i = sum_j coefficients(i, j) c_j over the symbols of the matrix.
struct FormalFiberSolution {
  Integer determinant;
  IntMatrix adjugate;
  IntMatrix coefficients;  ///< adj(M) * R

  /// Every member fiber is a root of a central element.
  bool projectively_finite() const { return !determinant.is_zero(); }
};

/// Throws std::domain_error when the matrix is singular.
FormalFiberSolution solve_fibers(const AssociatedMatrix& a);

/// M * coefficients == D * R, entrywise and exactly.
bool substitutes_back(const AssociatedMatrix& a, const FormalFiberSolution& s);

struct CertifyOptions {
  std::size_t size_bound = 12;  ///< exhaustive component enumeration up to this many blocks
  std::size_t cut_bound = 12;   ///< exhaustive cut enumeration up to this many internal edges
  unsigned threads = 0;         ///< 0: hardware concurrency
  /// Components analysed when the manifold exceeds size_bound (block id lists).
  std::vector<std::vector<std::string>> components;
};

/// One candidate component around a vertex, realized induced (possibly in a
/// double cover) and solved.
struct ComponentRecord {
  std::vector<std::string> vertices;  ///< base block ids, sorted
  std::vector<std::pair<std::string, std::string>> cut;  ///< cut base edges as (from, to) ids, sorted
  std::string witness;                ///< the neighbour of the vertex inside the component
  std::vector<std::string> rows;      ///< realized block ids (lifted names when a cover was used)
  std::vector<std::string> symbols;   ///< realized external block ids
  IntMatrix matrix;
  IntMatrix rhs;
  std::vector<RowDominance> dominance;
  Integer determinant;
  IntMatrix adjugate;
  IntMatrix solution;
  bool contradiction = false;
};

struct VertexRecord {
  std::string vertex;
  std::vector<std::string> neighbors;
  std::vector<ComponentRecord> components;
};

struct Certificate {
  std::string manifold_hash;
  std::string manifold_text;  ///< canonical serialization
  std::size_t size_bound = 0;
  std::size_t cut_bound = 0;
  bool complete = true;
  std::vector<std::string> gaps;
  std::vector<VertexRecord> vertices;
  bool conclusion = false;  ///< every record reaches the contradiction
};

class CertifyError : public std::runtime_error {
 public:
  enum class Kind { Invalid, NotClosed, NotSdd, BadComponent };
  CertifyError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Runs the obstruction argument at every vertex over every candidate
/// component. Records are ordered by vertex id, then by component vertex set
/// and cut set. Throws CertifyError when the manifold is invalid, not closed
/// or not SDD, or when a user-supplied component is malformed.
Certificate certify_no_vertex_faithful(const GraphManifold& m, const CertifyOptions& options = {});

/// Connected vertex subsets of m minus `v` containing a neighbour of v, each
/// sorted, in lexicographic order. Growth-based enumeration.
std::vector<std::vector<BlockId>> candidate_components(const GraphManifold& m, BlockId v);

}  // namespace seifert

#endif  // SEIFERT_OBSTRUCTION_HPP
