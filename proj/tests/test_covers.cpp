#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "seifert/covers.hpp"
#include "seifert/manifold_io.hpp"

using namespace seifert;

namespace {

GraphManifold data(const char* name) { return load_manifold(std::string(SEIFERT_DATA_DIR) + "/" + name + ".sm"); }

std::set<EdgeId> cut_of(const GraphManifold& m, const std::string& v, const std::string& w) {
  return {*m.edge_between(m.index_of(v), m.index_of(w))};
}

}  // namespace

TEST_CASE("cutting one triangle edge gives a 6-cycle") {
  const GraphManifold m = data("triangle");
  const auto result = double_cover_cut(m, cut_of(m, "u", "v"));
  REQUIRE(std::holds_alternative<CoverGraph>(result));
  const CoverGraph& c = std::get<CoverGraph>(result);
  CHECK(c.total.size() == 6);
  CHECK(c.total.edges().size() == 6);
  for (BlockId u = 0; u < 6; ++u) CHECK(c.total.degree(u) == 2);
  CHECK(is_connected(c.total));
  const BlockId u0 = CoverGraph::lift(m.index_of("u"), 0), u1 = CoverGraph::lift(m.index_of("u"), 1);
  CHECK(graph_distance(c.total, u0, u1) == 3);
  CHECK(c.total.block(u1).id == "u.1");
  CHECK(cover_invariants_preserved(c));
  CHECK(is_sdd(c.total));
}

TEST_CASE("cutting a square edge gives an 8-cycle") {
  const GraphManifold m = data("square");
  const auto result = double_cover_cut(m, cut_of(m, "p", "q"));
  REQUIRE(std::holds_alternative<CoverGraph>(result));
  const CoverGraph& c = std::get<CoverGraph>(result);
  CHECK(c.total.size() == 8);
  CHECK(graph_distance(c.total, CoverGraph::lift(0, 0), CoverGraph::lift(0, 1)) == 4);
  CHECK(cover_invariants_preserved(c));
}

TEST_CASE("cuts that are coboundaries split the cover") {
  const GraphManifold tree = data("path_tree");
  const auto result = double_cover_cut(tree, cut_of(tree, "l", "m"));
  REQUIRE(std::holds_alternative<DisconnectedCover>(result));
  const auto& d = std::get<DisconnectedCover>(result);
  CHECK(d.components[0].size() == 3);
  CHECK(d.components[1].size() == 3);
  CHECK(d.potential[tree.index_of("l")] != d.potential[tree.index_of("m")]);
  CHECK(d.potential[tree.index_of("m")] == d.potential[tree.index_of("r")]);

  const GraphManifold tri = data("triangle");
  std::set<EdgeId> two_edges = cut_of(tri, "u", "v");
  two_edges.merge(cut_of(tri, "u", "w"));
  CHECK(std::holds_alternative<DisconnectedCover>(double_cover_cut(tri, two_edges)));
  CHECK(std::holds_alternative<DisconnectedCover>(double_cover_cut(tri, {})));
  CHECK_THROWS_AS(double_cover_cut(tri, {17}), std::invalid_argument);
}

TEST_CASE("connectivity matches the voltage oracle on random manifolds") {
  oracle::Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(oracle::uniform(rng, 2, 10));
    const bool dominant = trial % 2 == 0;
    const GraphManifold m = oracle::random_manifold(rng, n, static_cast<std::size_t>(oracle::uniform(rng, 0, 4)), dominant);
    std::set<EdgeId> cut;
    std::vector<oracle::SimpleEdge> simple;
    for (EdgeId e = 0; e < m.edges().size(); ++e) {
      const bool in = oracle::uniform(rng, 0, 2) == 0;
      if (in) cut.insert(e);
      simple.push_back({m.edges()[e].from, m.edges()[e].to, in});
    }
    const auto result = double_cover_cut(m, cut);
    const bool connected = std::holds_alternative<CoverGraph>(result);
    CHECK(connected == oracle::voltage_cover_connected(n, simple));
    if (!connected) continue;
    const CoverGraph& c = std::get<CoverGraph>(result);
    CHECK(cover_invariants_preserved(c));
    for (BlockId u = 0; u < c.total.size(); ++u) CHECK(charge(c.total, u) == charge(m, c.block_projection[u]));
    if (dominant) CHECK(is_sdd(c.total));
  }
}

TEST_CASE("scaling by lift multiplicity keeps strict dominance") {
  oracle::Rng rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const GraphManifold m = oracle::random_manifold(rng, 5, 2, trial % 2 == 0);
    for (BlockId v = 0; v < m.size(); ++v) {
      for (long long k = 1; k <= 5; ++k) {
        const ScaledInvariants s = scale_invariants(m, v, Integer(k));
        CHECK(s.scaled_charge == Rational(k) * charge(m, v));
        CHECK(s.dominant() == is_sdd_block(m, v));
      }
    }
  }
  CHECK_THROWS_AS(scale_invariants(data("two_block"), 0, Integer(0)), std::invalid_argument);
}

TEST_CASE("square minus one edge lifts into the 8-block cover") {
  const GraphManifold m = data("square");
  const BlockId p = m.index_of("p"), q = m.index_of("q"), r = m.index_of("r"), s = m.index_of("s");
  AbelianComponent comp;
  comp.vertices = {p, q, r, s};
  comp.edges = {*m.edge_between(p, q), *m.edge_between(q, r), *m.edge_between(r, s)};
  std::sort(comp.edges.begin(), comp.edges.end());
  const InducedComponent lifted = induce_component_cover(m, comp);
  REQUIRE(lifted.cover);
  CHECK(lifted.manifold.size() == 8);
  CHECK(lifted.vertices.size() == 4);
  CHECK(is_induced(lifted.manifold, AbelianComponent::induced(lifted.manifold, lifted.vertices)));
  CHECK(internal_edges(lifted.manifold, lifted.vertices).size() == 3);
}

TEST_CASE("a component missing an internal edge lifts to an induced one") {
  const GraphManifold m = data("triangle");
  const BlockId u = m.index_of("u"), v = m.index_of("v"), w = m.index_of("w");
  AbelianComponent path;
  path.vertices = {u, v, w};
  path.edges = {*m.edge_between(u, v), *m.edge_between(v, w)};
  std::sort(path.edges.begin(), path.edges.end());
  CHECK_FALSE(is_induced(m, path));
  CHECK(is_connected(m, path));

  const InducedComponent lifted = induce_component_cover(m, path);
  REQUIRE(lifted.cover);
  CHECK(lifted.cut == std::set<EdgeId>{*m.edge_between(w, u)});
  CHECK(is_induced(lifted.manifold, AbelianComponent::induced(lifted.manifold, lifted.vertices)));
  CHECK(internal_edges(lifted.manifold, lifted.vertices).size() == 2);

  const AbelianComponent whole = AbelianComponent::induced(m, {u, v, w});
  const InducedComponent same = induce_component_cover(m, whole);
  CHECK_FALSE(same.cover);
  CHECK(same.vertices == whole.vertices);

  AbelianComponent broken;
  broken.vertices = {u, v};
  CHECK_THROWS_AS(induce_component_cover(m, broken), std::invalid_argument);
}
