#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "seifert/manifold_io.hpp"
#include "seifert/rep_builder.hpp"

#include <cstring>
#include <numbers>

using namespace seifert;

namespace {

GraphManifold data(const char* name) { return load_manifold(std::string(SEIFERT_DATA_DIR) + "/" + name + ".sm"); }

/// Smallest distance to the identity over reduced words of length 1..max_len.
double min_word_distance(const std::vector<ProjClass>& gens, int max_len) {
  std::vector<ProjClass> letters;
  for (const auto& g : gens) {
    letters.push_back(g);
    letters.push_back(inverse(g));
  }
  double best = std::numeric_limits<double>::infinity();
  const auto walk = [&](auto&& self, const ProjClass& acc, int last, int depth) -> void {
    for (int k = 0; k < static_cast<int>(letters.size()); ++k) {
      if (last >= 0 && (k ^ 1) == last) continue;
      const ProjClass next = acc * letters[static_cast<std::size_t>(k)];
      best = std::min(best, distance(next, ProjClass::identity()));
      if (depth + 1 < max_len) self(self, next, k, depth + 1);
    }
  };
  walk(walk, ProjClass::identity(), -1, 0);
  return best;
}

std::vector<ProjClass> projections(const std::vector<MotionElement>& xs) {
  std::vector<ProjClass> out;
  for (const auto& x : xs) out.push_back(x.proj());
  return out;
}

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

}  // namespace

TEST_CASE("presentations order glued tori by neighbour then free ones") {
  const GraphManifold m = data("star_tree");
  const BlockPresentation hub = presentation_of(m, m.index_of("hub"));
  REQUIRE(hub.boundary_count() == 3);
  CHECK(*hub.boundaries[0] == "a");
  CHECK(*hub.boundaries[2] == "c");
  CHECK(hub.free_rank() == 6);
  const BlockPresentation b = presentation_of(m, m.index_of("b"));
  CHECK(b.boundary_count() == 3);
  CHECK_FALSE(b.boundaries[1].has_value());
  CHECK(b.boundary_facing("hub") == 0);
  CHECK(b.generator_names().size() == 2 * 3 + 3 + 1);
}

TEST_CASE("seed is a Schottky image with a central fiber") {
  const GraphManifold m = data("path_tree");
  const BlockRep seed = seed_faithful_rep(presentation_of(m, m.index_of("m")));
  REQUIRE(seed.ping_pong);
  const auto gens = seed.free_generators();
  CHECK(gens.size() == 5);
  CHECK(seed.ping_pong->margin > 1e-6);
  CHECK(ping_pong_margin(projections(gens), *seed.ping_pong) == doctest::Approx(seed.ping_pong->margin));
  for (const auto& g : gens) CHECK(classify(g) == ElementClass::Hyperbolic);
  CHECK(classify(seed.fiber) == ElementClass::Central);
  CHECK(min_word_distance(projections(gens), 4) >= 1e-6);
}

TEST_CASE("a wrong certificate has negative slack") {
  const GraphManifold m = data("path_tree");
  const BlockRep seed = seed_faithful_rep(presentation_of(m, m.index_of("l")));
  PingPongCertificate swapped = *seed.ping_pong;
  std::swap(swapped.attracting, swapped.repelling);
  CHECK(ping_pong_margin(projections(seed.free_generators()), swapped) < 0.0);
  std::vector<ProjClass> identity(seed.free_generators().size(), ProjClass::identity());
  CHECK(ping_pong_margin(identity, *seed.ping_pong) < 0.0);
}

TEST_CASE("seed parameters are validated") {
  BlockPresentation p;
  p.id = "x";
  p.genus = 2;
  p.boundaries = {std::nullopt};
  SeedParams bad;
  bad.fiber_central = 0.0;
  CHECK_THROWS_AS(seed_faithful_rep(p, bad), std::invalid_argument);
  bad = {};
  bad.spread = 1.0;
  CHECK_THROWS_AS(seed_faithful_rep(p, bad), std::invalid_argument);
  BlockPresentation closed = p;
  closed.boundaries.clear();
  CHECK_THROWS_AS(seed_faithful_rep(closed), std::invalid_argument);
  SeedParams strict;
  strict.min_margin = 1.0;
  CHECK_THROWS_AS(seed_faithful_rep(p, strict), RepBuildError);
}

TEST_CASE("transport applies the gluing matrix to the torus images") {
  const MotionElement f = MotionElement::central(1.0);
  const MotionElement z(ProjClass::diagonal(1.7), 0.0);
  const TorusImages t = transport({f, z}, {2, 1, 5, 2});
  CHECK(approx_equal(t.f, mot_mul(mot_pow(f, 2), z), 1e-12));
  CHECK(approx_equal(t.z, mot_mul(mot_pow(f, 5), mot_pow(z, 2)), 1e-12));
}

TEST_CASE("extend_abelian closes the relation and rejects foreign choices") {
  BlockPresentation child;
  child.id = "x";
  child.genus = 2;
  child.boundaries = {std::string("p"), std::nullopt, std::nullopt};
  const TorusImages on_parent{MotionElement(ProjClass::diagonal(2.0), 0.0), MotionElement(ProjClass::diagonal(3.0), 1.0)};
  const BlockRep rep = extend_abelian(on_parent, child, 0);
  CHECK(rep.closing == 2);
  CHECK(approx_equal(commuting_product({{rep.c[0], 1}, {rep.c[1], 1}, {rep.c[2], 1}}), MotionElement::identity(), 1e-9));
  const MotionElement foreign(ProjClass::rotation(0.3), 0.0);
  CHECK_THROWS_AS(extend_abelian(on_parent, child, 0, {foreign}), std::invalid_argument);
  CHECK_THROWS_AS(extend_abelian(on_parent, child, 0, {foreign, foreign}), std::invalid_argument);
  BlockPresentation lonely = child;
  lonely.boundaries = {std::string("p")};
  CHECK_THROWS_AS(extend_abelian(on_parent, lonely, 0), RepBuildError);
}

TEST_CASE("every root of the example trees extends and verifies") {
  for (const char* name : {"path_tree", "star_tree"}) {
    const GraphManifold m = data(name);
    for (BlockId root = 0; root < m.size(); ++root) {
      CAPTURE(name);
      CAPTURE(m.block(root).id);
      const Representation rep = extend_along_tree(m, root);
      CHECK(rep.blocks.size() == m.size());
      CHECK(rep.blocks.front().root);
      const VerificationReport report = verify_rep(m, rep);
      for (const auto& c : report.checks) {
        CAPTURE(c.name);
        CHECK(c.passed);
      }
      CHECK(report.checks.size() == 6);
    }
  }
}

TEST_CASE("extension preconditions") {
  CHECK_THROWS_AS(extend_along_tree(data("triangle"), 0), RepBuildError);
  CHECK_THROWS_AS(extend_along_tree(data("two_block"), 0), RepBuildError);
}

TEST_CASE("perturbations are caught by the named check") {
  const GraphManifold m = data("path_tree");
  const Representation good = extend_along_tree(m, m.index_of("m"));
  Representation bad = good;
  BlockRep& root = bad.blocks.front();
  const std::size_t j = *root.presentation.boundary_facing("l");
  root.c[j] = MotionElement(root.c[j].proj() * ProjClass::rotation(1e-3 / std::numbers::pi), root.c[j].central_coord());
  const VerificationReport report = verify_rep(m, bad);
  CHECK_FALSE(report.ok());
  CHECK_FALSE(report.check("edges").passed);

  Representation twisted = good;
  twisted.blocks.back().a[0] = MotionElement(ProjClass::rotation(0.25), 0.0);
  CHECK_FALSE(verify_rep(m, twisted).check("abelian").passed);

  Representation flat = good;
  flat.blocks.front().fiber = MotionElement::identity();
  CHECK_FALSE(verify_rep(m, flat).check("faithful").passed);
}

TEST_CASE("representation JSON round trips bit for bit") {
  const GraphManifold m = data("star_tree");
  const Representation rep = extend_along_tree(m, m.index_of("hub"));
  const std::string text = dump_representation(rep);
  const Representation back = parse_representation(text);
  CHECK(dump_representation(back) == text);
  REQUIRE(back.blocks.size() == rep.blocks.size());
  for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
    const auto& x = rep.blocks[i];
    const auto& y = back.blocks[i];
    REQUIRE(x.c.size() == y.c.size());
    for (std::size_t j = 0; j < x.c.size(); ++j) {
      for (int e = 0; e < 4; ++e) CHECK(same_bits(x.c[j].proj().matrix()(e / 2, e % 2), y.c[j].proj().matrix()(e / 2, e % 2)));
      CHECK(same_bits(x.c[j].central_coord(), y.c[j].central_coord()));
    }
  }
  CHECK(verify_rep(m, back).ok());
  CHECK_THROWS_AS(parse_representation("{}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_representation("[1, 2"), std::invalid_argument);
}
