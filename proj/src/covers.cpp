#include "seifert/covers.hpp"

#include <algorithm>
#include <queue>

namespace seifert {

AbelianComponent AbelianComponent::induced(const GraphManifold& m, std::vector<BlockId> vertices) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  AbelianComponent c;
  c.edges = internal_edges(m, vertices);
  c.vertices = std::move(vertices);
  return c;
}

std::vector<EdgeId> internal_edges(const GraphManifold& m, const std::vector<BlockId>& vertices) {
  std::vector<bool> member(m.size(), false);
  for (BlockId v : vertices) member.at(v) = true;
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < m.edges().size(); ++e) {
    if (member[m.edges()[e].from] && member[m.edges()[e].to]) out.push_back(e);
  }
  return out;
}

bool is_induced(const GraphManifold& m, const AbelianComponent& comp) {
  std::vector<EdgeId> used = comp.edges;
  std::sort(used.begin(), used.end());
  return used == internal_edges(m, comp.vertices);
}

bool is_connected(const GraphManifold& m, const AbelianComponent& comp) {
  if (comp.vertices.empty()) return false;
  std::map<BlockId, std::vector<BlockId>> adj;
  for (BlockId v : comp.vertices) adj[v];
  for (EdgeId e : comp.edges) {
    const Edge& edge = m.edges().at(e);
    if (!adj.contains(edge.from) || !adj.contains(edge.to)) return false;
    adj[edge.from].push_back(edge.to);
    adj[edge.to].push_back(edge.from);
  }
  std::set<BlockId> seen{comp.vertices.front()};
  std::queue<BlockId> queue;
  queue.push(comp.vertices.front());
  while (!queue.empty()) {
    const BlockId u = queue.front();
    queue.pop();
    for (BlockId w : adj[u]) {
      if (seen.insert(w).second) queue.push(w);
    }
  }
  return seen.size() == adj.size();
}

namespace {

/// Component label of every block, numbered in order of first appearance.
std::vector<int> component_labels(const GraphManifold& g) {
  std::vector<int> label(g.size(), -1);
  int next = 0;
  for (BlockId s = 0; s < g.size(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    std::queue<BlockId> queue;
    queue.push(s);
    while (!queue.empty()) {
      const BlockId u = queue.front();
      queue.pop();
      for (const auto& inc : g.incident(u)) {
        if (label[inc.neighbor] < 0) {
          label[inc.neighbor] = next;
          queue.push(inc.neighbor);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

std::variant<CoverGraph, DisconnectedCover> double_cover_cut(const GraphManifold& m,
                                                             const std::set<EdgeId>& cut) {
  if (m.size() == 0 || !is_connected(m)) {
    throw std::invalid_argument("double cover needs a nonempty connected base");
  }
  for (EdgeId e : cut) {
    if (e >= m.edges().size()) throw std::invalid_argument("cut edge does not exist");
  }

  CoverGraph c;
  c.base = m;
  for (BlockId v = 0; v < m.size(); ++v) {
    for (int s = 0; s < 2; ++s) {
      SeifertBlock b = m.block(v);
      b.id += "." + std::to_string(s);
      c.total.add_block(std::move(b));
      c.block_projection.push_back(v);
      c.sheet.push_back(s);
    }
  }
  for (EdgeId e = 0; e < m.edges().size(); ++e) {
    const Edge& edge = m.edges()[e];
    const int flip = cut.contains(e) ? 1 : 0;
    for (int s = 0; s < 2; ++s) {
      c.total.add_edge(CoverGraph::lift(edge.from, s), CoverGraph::lift(edge.to, s ^ flip), edge.glue);
      c.edge_projection.push_back(e);
    }
  }

  const std::vector<int> label = component_labels(c.total);
  if (std::all_of(label.begin(), label.end(), [](int l) { return l == 0; })) return c;

  DisconnectedCover d;
  for (BlockId u = 0; u < c.total.size(); ++u) d.components.at(label[u]).push_back(u);
  for (BlockId v = 0; v < m.size(); ++v) d.potential.push_back(label[CoverGraph::lift(v, 0)]);
  d.cover = std::move(c);
  return d;
}

bool cover_invariants_preserved(const CoverGraph& c) {
  const GraphManifold& base = c.base;
  const GraphManifold& total = c.total;
  if (total.size() != 2 * base.size() || total.edges().size() != 2 * base.edges().size()) return false;
  if (c.block_projection.size() != total.size() || c.edge_projection.size() != total.edges().size()) {
    return false;
  }

  std::vector<int> block_hits(base.size(), 0);
  for (BlockId u = 0; u < total.size(); ++u) ++block_hits.at(c.block_projection[u]);
  std::vector<int> edge_hits(base.edges().size(), 0);
  for (EdgeId e = 0; e < total.edges().size(); ++e) {
    const BlockId pf = c.block_projection[total.edges()[e].from];
    const BlockId pt = c.block_projection[total.edges()[e].to];
    const Edge& image = base.edges().at(c.edge_projection[e]);
    const bool same = image.from == pf && image.to == pt;
    const bool flipped = image.from == pt && image.to == pf;
    if (!same && !flipped) return false;
    ++edge_hits[c.edge_projection[e]];
  }
  if (std::any_of(block_hits.begin(), block_hits.end(), [](int h) { return h != 2; })) return false;
  if (std::any_of(edge_hits.begin(), edge_hits.end(), [](int h) { return h != 2; })) return false;

  for (BlockId u = 0; u < total.size(); ++u) {
    const BlockId v = c.block_projection[u];
    const SeifertBlock& up = total.block(u);
    const SeifertBlock& down = base.block(v);
    if (up.genus != down.genus || up.free_boundaries != down.free_boundaries) return false;
    if (total.degree(u) != base.degree(v)) return false;
    for (const auto& inc : total.incident(u)) {
      const BlockId w = c.block_projection[inc.neighbor];
      if (!base.edge_between(v, w)) return false;
      if (total.glue(u, inc.neighbor) != base.glue(v, w)) return false;
      if (intersection_index(total, u, inc.neighbor) != intersection_index(base, v, w)) return false;
    }
    if (charge(total, u) != charge(base, v)) return false;
    if (is_sdd_block(total, u) != is_sdd_block(base, v)) return false;
  }
  return true;
}

ScaledInvariants scale_invariants(const GraphManifold& m, BlockId v, const Integer& multiplicity) {
  if (multiplicity < Integer(1)) throw std::invalid_argument("cover multiplicity must be at least 1");
  ScaledInvariants s;
  s.block = v;
  s.multiplicity = multiplicity;
  s.scaled_charge = Rational(multiplicity) * charge(m, v);
  s.scaled_reciprocal_sum = Rational(multiplicity) * reciprocal_index_sum(m, v);
  return s;
}

DisconnectedCoverError::DisconnectedCoverError(DisconnectedCover d)
    : std::runtime_error("double cover is disconnected: the cut set is a coboundary"),
      cert_(std::move(d)) {}

InducedComponent induce_component_cover(const GraphManifold& m, const AbelianComponent& comp) {
  if (!is_connected(m, comp)) {
    throw std::invalid_argument("component is not connected through its own edges");
  }
  InducedComponent out;
  if (is_induced(m, comp)) {
    out.manifold = m;
    out.vertices = comp.vertices;
    return out;
  }

  for (EdgeId e : internal_edges(m, comp.vertices)) {
    if (!std::binary_search(comp.edges.begin(), comp.edges.end(), e)) out.cut.insert(e);
  }
  auto result = double_cover_cut(m, out.cut);
  if (auto* d = std::get_if<DisconnectedCover>(&result)) throw DisconnectedCoverError(std::move(*d));

  // Component edges are uncut, so the component lifts into sheet 0; the cut
  // edges between its vertices cross to sheet 1 and leave the lift induced.
  out.cover = std::move(std::get<CoverGraph>(result));
  out.manifold = out.cover->total;
  for (BlockId v : comp.vertices) out.vertices.push_back(CoverGraph::lift(v, 0));
  return out;
}

}  // namespace seifert
