#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "seifert/manifold_io.hpp"
#include "seifert/obstruction.hpp"

#include <bit>

using namespace seifert;

namespace {

GraphManifold data(const char* name) { return load_manifold(std::string(SEIFERT_DATA_DIR) + "/" + name + ".sm"); }

IntMatrix mat(std::initializer_list<std::initializer_list<long long>> rows) {
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (long long x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

/// Row i is b_i k_i on the diagonal, -b_i / b_{w,i} towards members and
/// +b_i / b_{w,i} towards outsiders, with k_i summed as a rational.
void oracle_rows(const GraphManifold& m, const std::vector<BlockId>& comp, IntMatrix& entries,
                 std::map<BlockId, std::vector<Integer>>& rhs_by_symbol) {
  const auto n = static_cast<Eigen::Index>(comp.size());
  entries = IntMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const BlockId v = comp[static_cast<std::size_t>(i)];
    oracle::BigRational b_v = 1, k_v = 0;
    for (const auto& inc : m.incident(v)) {
      const GluingMatrix g = m.glue(inc.neighbor, v);
      b_v *= g.b.rep();
      k_v += oracle::ratio(g.a.rep(), g.b.rep());
    }
    entries(i, i) = Integer(boost::multiprecision::numerator(oracle::BigRational(b_v * k_v)));
    for (const auto& inc : m.incident(v)) {
      const oracle::BigRational q = b_v / oracle::BigRational(m.glue(inc.neighbor, v).b.rep());
      const Integer scale(boost::multiprecision::numerator(q));
      const auto it = std::find(comp.begin(), comp.end(), inc.neighbor);
      if (it != comp.end()) {
        entries(i, it - comp.begin()) = -scale;
      } else {
        auto& col = rhs_by_symbol[inc.neighbor];
        col.resize(comp.size());
        col[static_cast<std::size_t>(i)] = scale;
      }
    }
  }
}

}  // namespace

TEST_CASE("fiber products") {
  const GraphManifold star = data("star_tree");
  CHECK(fiber_product(star, star.index_of("hub")) == Integer(2));
  CHECK(fiber_product(star, star.index_of("a")) == Integer(1));
}

TEST_CASE("two-block associated matrices") {
  const GraphManifold m = data("two_block");
  const BlockId v = m.index_of("v"), w = m.index_of("w");
  const AssociatedMatrix at_v = associated_matrix(m, AbelianComponent::induced(m, {w}));
  CHECK(at_v.entries == mat({{-2}}));
  CHECK(at_v.rhs == mat({{1}}));
  CHECK(at_v.symbols == std::vector<BlockId>{v});
  const AssociatedMatrix at_w = associated_matrix(m, AbelianComponent::induced(m, {v}));
  CHECK(at_w.entries == mat({{2}}));
  const FormalFiberSolution s = solve_fibers(at_v);
  CHECK(s.determinant == Integer(-2));
  CHECK(s.coefficients == mat({{1}}));
  CHECK(s.projectively_finite());
  CHECK(substitutes_back(at_v, s));
}

TEST_CASE("solve keeps the signs of a 2x2 system") {
  AssociatedMatrix a;
  a.vertices = {0, 1};
  a.symbols = {2};
  a.entries = mat({{2, -1}, {-1, -2}});
  a.rhs = mat({{1}, {1}});
  const FormalFiberSolution s = solve_fibers(a);
  CHECK(s.determinant == Integer(-5));
  CHECK(s.adjugate == mat({{-2, 1}, {1, 2}}));
  CHECK(s.coefficients == mat({{-1}, {3}}));
  CHECK(substitutes_back(a, s));
  // rhs (c1, 0): -5 f1 = -2 c1 and -5 f2 = +c1; substituting back confirms the sign of f2.
  a.rhs = mat({{1}, {0}});
  const FormalFiberSolution e = solve_fibers(a);
  CHECK(e.coefficients == mat({{-2}, {1}}));
  CHECK(substitutes_back(a, e));
  a.entries = mat({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(solve_fibers(a), std::domain_error);
}

TEST_CASE("associated matrices match the rational oracle on random SDD manifolds") {
  oracle::Rng rng(211);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<std::size_t>(oracle::uniform(rng, 2, 7));
    const GraphManifold m = oracle::random_manifold(rng, n, 2, true);
    const auto v = static_cast<BlockId>(oracle::uniform(rng, 0, static_cast<long long>(n) - 1));
    for (const auto& comp : candidate_components(m, v)) {
      const AbelianComponent c = AbelianComponent::induced(m, comp);
      const AssociatedMatrix a = associated_matrix(m, c);
      IntMatrix expected;
      std::map<BlockId, std::vector<Integer>> rhs;
      oracle_rows(m, comp, expected, rhs);
      CHECK(a.entries == expected);
      REQUIRE(a.symbols.size() == rhs.size());
      std::size_t j = 0;
      for (const auto& [sym, col] : rhs) {
        CHECK(a.symbols[j] == sym);
        for (std::size_t i = 0; i < comp.size(); ++i) CHECK(a.rhs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == col[i]);
        ++j;
      }
      CHECK(is_sdd_matrix(a.entries));
      for (const auto& row : row_dominance(a)) CHECK(row.strict_with_rhs());
      const FormalFiberSolution s = solve_fibers(a);
      CHECK_FALSE(s.determinant.is_zero());
      CHECK(substitutes_back(a, s));
    }
  }
}

TEST_CASE("candidate components match brute-force enumeration") {
  CHECK(candidate_components(data("triangle"), 0).size() == 3);
  CHECK(candidate_components(data("square"), 0).size() == 5);
  oracle::Rng rng(223);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::size_t>(oracle::uniform(rng, 2, 8));
    const GraphManifold m = oracle::random_manifold(rng, n, 3, false);
    const auto v = static_cast<BlockId>(oracle::uniform(rng, 0, static_cast<long long>(n) - 1));
    std::vector<std::vector<BlockId>> expected;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (mask & (1u << v)) continue;
      std::vector<BlockId> set;
      for (BlockId u = 0; u < n; ++u) {
        if (mask & (1u << u)) set.push_back(u);
      }
      bool touches = false;
      for (BlockId u : set) touches = touches || m.edge_between(u, v).has_value();
      if (!touches) continue;
      unsigned seen = 1u << set.front(), frontier = seen;
      while (frontier) {
        unsigned next = 0;
        for (BlockId u = 0; u < n; ++u) {
          if (!(frontier & (1u << u))) continue;
          for (const auto& inc : m.incident(u)) {
            const unsigned bit = 1u << inc.neighbor;
            if ((mask & bit) && !(seen & bit)) next |= bit;
          }
        }
        seen |= next;
        frontier = next;
      }
      if (seen == mask) expected.push_back(set);
    }
    std::sort(expected.begin(), expected.end());
    CHECK(candidate_components(m, v) == expected);
  }
}

TEST_CASE("certify refuses what the argument does not cover") {
  try {
    certify_no_vertex_faithful(data("non_sdd"));
    FAIL("expected a refusal");
  } catch (const CertifyError& e) {
    CHECK(e.kind() == CertifyError::Kind::NotSdd);
  }
  try {
    certify_no_vertex_faithful(data("path_tree"));
    FAIL("expected a refusal");
  } catch (const CertifyError& e) {
    CHECK(e.kind() == CertifyError::Kind::NotClosed);
  }
}

TEST_CASE("certify reaches the contradiction everywhere on SDD examples") {
  for (const char* name : {"two_block", "triangle", "square"}) {
    CAPTURE(name);
    const Certificate c = certify_no_vertex_faithful(data(name));
    CHECK(c.conclusion);
    CHECK(c.complete);
    CHECK(c.gaps.empty());
    for (const auto& v : c.vertices) {
      CHECK_FALSE(v.components.empty());
      for (const auto& r : v.components) {
        CHECK(r.contradiction);
        CHECK_FALSE(r.determinant.is_zero());
      }
    }
  }
  const Certificate tri = certify_no_vertex_faithful(data("triangle"));
  for (const auto& v : tri.vertices) CHECK(v.components.size() == 3);
}

TEST_CASE("certify over a size bound uses the given components") {
  CertifyOptions opts;
  opts.size_bound = 2;
  const Certificate none = certify_no_vertex_faithful(data("square"), opts);
  CHECK_FALSE(none.complete);
  CHECK_FALSE(none.conclusion);
  opts.components = {{"q"}, {"nosuch"}};
  CHECK_THROWS_AS(certify_no_vertex_faithful(data("square"), opts), CertifyError);
}

TEST_CASE("random SDD manifolds are certified") {
  oracle::Rng rng(227);
  for (int trial = 0; trial < 15; ++trial) {
    const GraphManifold m = oracle::random_manifold(rng, static_cast<std::size_t>(oracle::uniform(rng, 2, 6)), 2, true);
    CertifyOptions opts;
    opts.threads = 2;
    CHECK(certify_no_vertex_faithful(m, opts).conclusion);
  }
}
