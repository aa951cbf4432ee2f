#ifndef SEIFERT_MANIFOLD_HPP
#define SEIFERT_MANIFOLD_HPP

// Graph manifolds in normal form: every block is a trivial circle bundle over
// a surface of genus >= 2, the dual graph is simple, and each JSJ torus carries
// a 2x2 integer gluing matrix of determinant -1.
//
// Gluing convention. The edge (v, w) stores G_{v,w}, the map from the torus
// T_{v,w} on the boundary of block v to T_{w,v} on block w:
//
//     f_v |-> a f_w + b z_w
//     z_v |-> c f_w + d z_w
//
// so b is the intersection index of the two fibers. The reverse direction is
// the inverse, G_{w,v} = [[-d, b], [c, -a]], which has the same b.
//
// The charge of v sums the slopes a_{w,v} / b_{w,v} read from G_{w,v}, the
// matrices pointing into v. Free boundary tori contribute nothing.

#include "seifert/numeric.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seifert {

using BlockId = std::size_t;
using EdgeId = std::size_t;

struct GluingMatrix {
  Integer a, b, c, d;

  Integer det() const { return a * d - b * c; }
  /// Inverse of a unimodular matrix. Throws std::domain_error if |det| != 1.
  GluingMatrix inverse() const;

  friend bool operator==(const GluingMatrix&, const GluingMatrix&) = default;
};

/// Row-vector composition: (x * y) applies x first, then y.
GluingMatrix operator*(const GluingMatrix& x, const GluingMatrix& y);

struct SeifertBlock {
  std::string id;
  int genus = 2;
  int free_boundaries = 0;  ///< tori on the boundary of the whole manifold

  friend bool operator==(const SeifertBlock&, const SeifertBlock&) = default;
};

struct Edge {
  BlockId from = 0;
  BlockId to = 0;
  GluingMatrix glue;  ///< G_{from,to}

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  BlockId neighbor;
  EdgeId edge;
};

class GraphManifold {
 public:
  GraphManifold() = default;

  BlockId add_block(SeifertBlock block);
  EdgeId add_edge(BlockId from, BlockId to, GluingMatrix glue);
  /// Replaces the stored matrix of an edge (keeping its direction).
  void set_glue(EdgeId e, GluingMatrix glue);

  const std::vector<SeifertBlock>& blocks() const { return blocks_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t size() const { return blocks_.size(); }

  const SeifertBlock& block(BlockId v) const { return blocks_.at(v); }
  std::optional<BlockId> find(std::string_view id) const;
  /// Throws std::out_of_range for an unknown id.
  BlockId index_of(std::string_view id) const;

  const std::vector<Incidence>& incident(BlockId v) const { return adjacency_.at(v); }
  std::size_t degree(BlockId v) const { return incident(v).size(); }
  std::optional<EdgeId> edge_between(BlockId v, BlockId w) const;

  /// G_{from,to}; throws std::out_of_range if the blocks are not adjacent.
  GluingMatrix glue(BlockId from, BlockId to) const;

  bool is_closed() const;

  friend bool operator==(const GraphManifold& x, const GraphManifold& y) {
    return x.blocks_ == y.blocks_ && x.edges_ == y.edges_;
  }

 private:
  std::vector<SeifertBlock> blocks_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::map<std::string, BlockId, std::less<>> by_id_;
};

struct Violation {
  enum class Kind {
    Empty,
    DuplicateId,
    Determinant,
    ZeroIntersection,
    SelfLoop,
    MultiEdge,
    LowGenus,
    NegativeFreeCount,
    Disconnected,
  };
  Kind kind;
  std::string message;
  std::optional<BlockId> block;  ///< offending block, when there is one
  std::optional<EdgeId> edge;    ///< offending edge, when there is one
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind k) const;
};

ValidationReport validate(const GraphManifold& m);

/// b entry of G_{w,v}; symmetric in (v, w). Throws std::out_of_range without an edge.
Integer intersection_index(const GraphManifold& m, BlockId v, BlockId w);

/// a_{w,v} / b_{w,v}: the slope of the torus of v that faces w.
Rational slope(const GraphManifold& m, BlockId v, BlockId w);

/// k_v, the sum of slopes over glued tori of v.
Rational charge(const GraphManifold& m, BlockId v);

/// sum over neighbours w of 1 / |b_{v,w}|.
Rational reciprocal_index_sum(const GraphManifold& m, BlockId v);

/// |k_v| > sum 1/|b_{v,w}|, strictly.
bool is_sdd_block(const GraphManifold& m, BlockId v);
bool is_sdd(const GraphManifold& m);

/// Edge count of a shortest path. Throws std::invalid_argument if w is unreachable.
std::size_t graph_distance(const GraphManifold& m, BlockId v, BlockId w);

bool is_connected(const GraphManifold& m);
bool is_tree(const GraphManifold& m);

/// Changes the trivialization of block v by z_{v,w} -> z_{v,w} + n_w f_{v,w}
/// for each neighbour w listed in `offsets` (missing neighbours get 0). The
/// offsets must sum to zero. Every slope at v moves by -n_w; the charge does not
/// change. Throws std::invalid_argument on a nonzero sum or a non-neighbour key.
GraphManifold waldhausen_rebase(const GraphManifold& m, BlockId v,
                                const std::map<BlockId, Integer>& offsets);

}  // namespace seifert

#endif  // SEIFERT_MANIFOLD_HPP
