#include "seifert/manifold.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace seifert {

GluingMatrix GluingMatrix::inverse() const {
  const Integer dt = det();
  if (dt == Integer(1)) return {d, -b, -c, a};
  if (dt == Integer(-1)) return {-d, b, c, -a};
  throw std::domain_error("gluing matrix is not unimodular (det " + dt.str() + ")");
}

GluingMatrix operator*(const GluingMatrix& x, const GluingMatrix& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

BlockId GraphManifold::add_block(SeifertBlock block) {
  const BlockId id = blocks_.size();
  by_id_.try_emplace(block.id, id);
  blocks_.push_back(std::move(block));
  adjacency_.emplace_back();
  return id;
}

EdgeId GraphManifold::add_edge(BlockId from, BlockId to, GluingMatrix glue) {
  if (from >= blocks_.size() || to >= blocks_.size()) {
    throw std::out_of_range("edge endpoint is not a block");
  }
  const EdgeId e = edges_.size();
  edges_.push_back({from, to, std::move(glue)});
  adjacency_[from].push_back({to, e});
  if (to != from) adjacency_[to].push_back({from, e});
  return e;
}

void GraphManifold::set_glue(EdgeId e, GluingMatrix glue) { edges_.at(e).glue = std::move(glue); }

std::optional<BlockId> GraphManifold::find(std::string_view id) const {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

BlockId GraphManifold::index_of(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw std::out_of_range("unknown block '" + std::string(id) + "'");
}

std::optional<EdgeId> GraphManifold::edge_between(BlockId v, BlockId w) const {
  for (const auto& inc : incident(v)) {
    if (inc.neighbor == w) return inc.edge;
  }
  return std::nullopt;
}

GluingMatrix GraphManifold::glue(BlockId from, BlockId to) const {
  const auto e = edge_between(from, to);
  if (!e) {
    throw std::out_of_range("no edge between '" + blocks_.at(from).id + "' and '" +
                            blocks_.at(to).id + "'");
  }
  const Edge& edge = edges_[*e];
  return edge.from == from ? edge.glue : edge.glue.inverse();
}

bool GraphManifold::is_closed() const {
  for (const auto& b : blocks_) {
    if (b.free_boundaries != 0) return false;
  }
  return true;
}

bool ValidationReport::has(Violation::Kind k) const {
  for (const auto& v : violations) {
    if (v.kind == k) return true;
  }
  return false;
}

namespace {

std::string edge_name(const GraphManifold& m, const Edge& e) {
  return m.block(e.from).id + " -> " + m.block(e.to).id;
}

}  // namespace

ValidationReport validate(const GraphManifold& m) {
  ValidationReport report;
  auto add = [&](Violation::Kind k, std::string msg, std::optional<BlockId> block = std::nullopt,
                 std::optional<EdgeId> edge = std::nullopt) {
    report.violations.push_back({k, std::move(msg), block, edge});
  };
  if (m.size() == 0) add(Violation::Kind::Empty, "manifold has no blocks");

  std::set<std::string> seen;
  for (BlockId v = 0; v < m.size(); ++v) {
    const auto& b = m.block(v);
    if (!seen.insert(b.id).second) {
      add(Violation::Kind::DuplicateId, "duplicate block id '" + b.id + "'", v);
    }
    if (b.genus < 2) {
      add(Violation::Kind::LowGenus,
          "block '" + b.id + "' has genus " + std::to_string(b.genus) + " < 2", v);
    }
    if (b.free_boundaries < 0) {
      add(Violation::Kind::NegativeFreeCount,
          "block '" + b.id + "' has a negative free boundary count", v);
    }
  }

  std::set<std::pair<BlockId, BlockId>> pairs;
  for (EdgeId id = 0; id < m.edges().size(); ++id) {
    const Edge& e = m.edges()[id];
    const std::string name = edge_name(m, e);
    if (e.from == e.to) {
      add(Violation::Kind::SelfLoop, "self-loop at '" + m.block(e.from).id + "'", std::nullopt, id);
    }
    const auto key = std::minmax(e.from, e.to);
    if (!pairs.insert({key.first, key.second}).second) {
      add(Violation::Kind::MultiEdge,
          "multiple edges between '" + m.block(key.first).id + "' and '" + m.block(key.second).id + "'",
          std::nullopt, id);
    }
    const Integer det = e.glue.det();
    if (det != Integer(-1)) {
      add(Violation::Kind::Determinant, "edge " + name + ": det = " + det.str() + ", expected -1",
          std::nullopt, id);
    }
    if (e.glue.b.is_zero()) {
      add(Violation::Kind::ZeroIntersection, "edge " + name + ": intersection index b = 0",
          std::nullopt, id);
    }
  }

  if (m.size() > 0 && !is_connected(m)) {
    add(Violation::Kind::Disconnected, "dual graph is not connected");
  }
  return report;
}

Integer intersection_index(const GraphManifold& m, BlockId v, BlockId w) {
  return m.glue(w, v).b;
}

Rational slope(const GraphManifold& m, BlockId v, BlockId w) {
  const GluingMatrix g = m.glue(w, v);
  return Rational(g.a, g.b);
}

Rational charge(const GraphManifold& m, BlockId v) {
  Rational k;
  for (const auto& inc : m.incident(v)) k += slope(m, v, inc.neighbor);
  return k;
}

Rational reciprocal_index_sum(const GraphManifold& m, BlockId v) {
  Rational s;
  for (const auto& inc : m.incident(v)) {
    s += Rational(Integer(1), abs(intersection_index(m, v, inc.neighbor)));
  }
  return s;
}

bool is_sdd_block(const GraphManifold& m, BlockId v) {
  return abs(charge(m, v)) > reciprocal_index_sum(m, v);
}

bool is_sdd(const GraphManifold& m) {
  for (BlockId v = 0; v < m.size(); ++v) {
    if (!is_sdd_block(m, v)) return false;
  }
  return true;
}

namespace {

std::vector<std::size_t> bfs_distances(const GraphManifold& m, BlockId source) {
  constexpr auto kUnreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(m.size(), kUnreached);
  std::queue<BlockId> queue;
  dist.at(source) = 0;
  queue.push(source);
  while (!queue.empty()) {
    const BlockId u = queue.front();
    queue.pop();
    for (const auto& inc : m.incident(u)) {
      if (dist[inc.neighbor] == kUnreached) {
        dist[inc.neighbor] = dist[u] + 1;
        queue.push(inc.neighbor);
      }
    }
  }
  return dist;
}

}  // namespace

std::size_t graph_distance(const GraphManifold& m, BlockId v, BlockId w) {
  const auto d = bfs_distances(m, v).at(w);
  if (d == static_cast<std::size_t>(-1)) {
    throw std::invalid_argument("blocks '" + m.block(v).id + "' and '" + m.block(w).id +
                                "' are not connected");
  }
  return d;
}

bool is_connected(const GraphManifold& m) {
  if (m.size() == 0) return true;
  for (auto d : bfs_distances(m, 0)) {
    if (d == static_cast<std::size_t>(-1)) return false;
  }
  return true;
}

bool is_tree(const GraphManifold& m) {
  return m.size() > 0 && m.edges().size() + 1 == m.size() && is_connected(m);
}

GraphManifold waldhausen_rebase(const GraphManifold& m, BlockId v,
                                const std::map<BlockId, Integer>& offsets) {
  Integer total;
  for (const auto& [w, n] : offsets) {
    if (!m.edge_between(v, w)) {
      throw std::invalid_argument("rebase offset for '" + m.block(w).id +
                                  "', which is not a neighbour of '" + m.block(v).id + "'");
    }
    total += n;
  }
  if (!total.is_zero()) throw std::invalid_argument("rebase offsets must sum to zero");

  GraphManifold out = m;
  for (const auto& [w, n] : offsets) {
    // In the new basis z' = z + n f of T_{v,w}, the old z is z' - n f.
    const GluingMatrix into_v = m.glue(w, v);
    const GluingMatrix rebased{into_v.a - into_v.b * n, into_v.b, into_v.c - into_v.d * n, into_v.d};
    const EdgeId e = *m.edge_between(v, w);
    out.set_glue(e, m.edges()[e].to == v ? rebased : rebased.inverse());
  }
  return out;
}

}  // namespace seifert
