#ifndef SEIFERT_COVERS_HPP
#define SEIFERT_COVERS_HPP

// Graph-level double covers by cut-and-copy, and invariant bookkeeping for
// characteristic covers.
//
// A cut set C of edges defines a Z/2 voltage (1 on C, 0 elsewhere). The cover
// has blocks (v, s) for s in {0, 1}; an uncut edge (u, w) lifts to (u, s)-(w, s)
// and a cut edge to (u, s)-(w, 1 - s). Every lift keeps the base gluing matrix.
// Over a connected base the cover is connected iff the voltage is nonzero on
// some cycle, i.e. iff C is not the coboundary of a 0/1 labelling of blocks.

#include "seifert/manifold.hpp"

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

namespace seifert {

/// A connected set of blocks together with the edges among them that the
/// component uses. Both lists are sorted.
struct AbelianComponent {
  std::vector<BlockId> vertices;
  std::vector<EdgeId> edges;

  /// The component using every edge between its vertices.
  static AbelianComponent induced(const GraphManifold& m, std::vector<BlockId> vertices);

  friend bool operator==(const AbelianComponent&, const AbelianComponent&) = default;
};

/// Edges of m with both endpoints in `vertices` (sorted).
std::vector<EdgeId> internal_edges(const GraphManifold& m, const std::vector<BlockId>& vertices);
/// True iff the component uses every internal edge.
bool is_induced(const GraphManifold& m, const AbelianComponent& comp);
/// True iff the component's own edges connect its vertices.
bool is_connected(const GraphManifold& m, const AbelianComponent& comp);

struct CoverGraph {
  GraphManifold base;
  GraphManifold total;
  std::vector<BlockId> block_projection;  ///< total block -> base block
  std::vector<EdgeId> edge_projection;    ///< total edge -> base edge
  std::vector<int> sheet;                 ///< total block -> 0 or 1

  /// Lift (v, s); block ids of the total space are 2 v + s.
  static BlockId lift(BlockId v, int s) { return 2 * v + static_cast<BlockId>(s); }
};

/// The cover split into two sheets. `potential` labels base blocks with 0/1
/// so that an edge is cut iff its endpoints carry different labels: the
/// witness that the voltage is trivial on every cycle.
struct DisconnectedCover {
  CoverGraph cover;
  std::array<std::vector<BlockId>, 2> components;  ///< total block ids, sorted
  std::vector<int> potential;
};

/// Requires a connected base and cut edges that exist; throws std::invalid_argument otherwise.
std::variant<CoverGraph, DisconnectedCover> double_cover_cut(const GraphManifold& m,
                                                             const std::set<EdgeId>& cut);

/// Every lifted block matches its image: genus, free boundaries, degree,
/// incident gluing matrices, intersection indices, charge and SDD status.
/// Also checks that the projection is 2-to-1 on blocks and edges.
bool cover_invariants_preserved(const CoverGraph& c);

struct ScaledInvariants {
  BlockId block = 0;
  Integer multiplicity;
  Rational scaled_charge;
  Rational scaled_reciprocal_sum;

  bool dominant() const { return abs(scaled_charge) > scaled_reciprocal_sum; }
};

/// Invariants of a lifted block with `multiplicity` lifts of each incident
/// edge. Throws std::invalid_argument unless multiplicity >= 1.
ScaledInvariants scale_invariants(const GraphManifold& m, BlockId v, const Integer& multiplicity);

/// A component realized as an induced component of m or of a double cover of m.
struct InducedComponent {
  GraphManifold manifold;           ///< m itself, or the total space of `cover`
  std::vector<BlockId> vertices;    ///< ids in `manifold`; the induced subgraph is the component
  std::set<EdgeId> cut;             ///< base edges cut; empty when no cover was needed
  std::optional<CoverGraph> cover;
};

class DisconnectedCoverError : public std::runtime_error {
 public:
  explicit DisconnectedCoverError(DisconnectedCover d);
  const DisconnectedCover& certificate() const { return cert_; }

 private:
  DisconnectedCover cert_;
};

/// Identity for an induced component. Otherwise cuts the internal edges the
/// component leaves out, builds the double cover, and returns the sheet-0
/// lift of the component, which is induced upstairs. Throws
/// DisconnectedCoverError if the cover splits, std::invalid_argument if the
/// component is not connected through its own edges.
InducedComponent induce_component_cover(const GraphManifold& m, const AbelianComponent& comp);

}  // namespace seifert

#endif  // SEIFERT_COVERS_HPP
