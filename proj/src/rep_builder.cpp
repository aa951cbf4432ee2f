#include "seifert/rep_builder.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <queue>

namespace seifert {

namespace {

constexpr double kPi = std::numbers::pi;

double mod_pi(double x) {
  double r = std::fmod(x, kPi);
  if (r < 0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

Eigen::Matrix2d rotation_matrix(double angle) {
  Eigen::Matrix2d m;
  m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return m;
}

Eigen::Matrix2d diagonal_matrix(double x) {
  Eigen::Matrix2d m;
  m << x, 0.0, 0.0, 1.0 / x;
  return m;
}

/// Slack of h(closure of the complement of `from`) inside `into`; negative
/// when the inclusion fails.
double inclusion_slack(const ProjClass& h, const Arc& from, const Arc& into) {
  const double outside = kPi - from.length;
  const double q = from.start + from.length;
  const double u = into.offset(act_on_direction(h, mod_pi(q)));
  const double mid = into.offset(act_on_direction(h, mod_pi(q + outside / 2.0)));
  const double w = into.offset(act_on_direction(h, mod_pi(from.start)));
  if (!(u <= mid && mid <= w && w <= into.length)) return -1.0;
  return std::min(u, into.length - w);
}

MotionElement product(const std::vector<MotionElement>& xs) {
  MotionElement acc = MotionElement::identity();
  for (const auto& x : xs) acc = mot_mul(acc, x);
  return acc;
}

MotionElement commutator_product(const BlockRep& r) {
  MotionElement acc = MotionElement::identity();
  for (std::size_t i = 0; i < r.a.size(); ++i) acc = mot_mul(acc, mot_commutator(r.a[i], r.b[i]));
  return acc;
}

}  // namespace

std::optional<std::size_t> BlockPresentation::boundary_facing(std::string_view neighbor) const {
  for (std::size_t j = 0; j < boundaries.size(); ++j) {
    if (boundaries[j] && *boundaries[j] == neighbor) return j;
  }
  return std::nullopt;
}

std::vector<std::string> BlockPresentation::generator_names() const {
  std::vector<std::string> names;
  for (int i = 1; i <= genus; ++i) {
    names.push_back("a" + std::to_string(i));
    names.push_back("b" + std::to_string(i));
  }
  for (std::size_t j = 1; j <= boundaries.size(); ++j) names.push_back("c" + std::to_string(j));
  names.emplace_back("f");
  return names;
}

BlockPresentation presentation_of(const GraphManifold& m, BlockId v) {
  BlockPresentation p;
  p.id = m.block(v).id;
  p.genus = m.block(v).genus;
  std::vector<std::string> glued;
  for (const auto& inc : m.incident(v)) glued.push_back(m.block(inc.neighbor).id);
  std::sort(glued.begin(), glued.end());
  for (auto& id : glued) p.boundaries.emplace_back(std::move(id));
  for (int k = 0; k < m.block(v).free_boundaries; ++k) p.boundaries.emplace_back(std::nullopt);
  return p;
}

double Arc::offset(double theta) const { return mod_pi(theta - start); }

double ping_pong_margin(const std::vector<ProjClass>& generators, const PingPongCertificate& cert) {
  const std::size_t r = generators.size();
  if (r == 0 || cert.attracting.size() != r || cert.repelling.size() != r) return -1.0;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r; ++k) {
    margin = std::min(margin, inclusion_slack(generators[k], cert.repelling[k], cert.attracting[k]));
    margin = std::min(margin, inclusion_slack(inverse(generators[k]), cert.attracting[k], cert.repelling[k]));
  }

  std::vector<Arc> arcs = cert.attracting;
  arcs.insert(arcs.end(), cert.repelling.begin(), cert.repelling.end());
  for (auto& a : arcs) a.start = mod_pi(a.start);
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& cur = arcs[i];
    const double next_start = i + 1 < arcs.size() ? arcs[i + 1].start : arcs.front().start + kPi;
    margin = std::min(margin, next_start - (cur.start + cur.length));
  }
  return margin;
}

std::vector<MotionElement> BlockRep::free_generators() const {
  std::vector<MotionElement> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(a[i]);
    out.push_back(b[i]);
  }
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j != closing) out.push_back(c[j]);
  }
  return out;
}

const BlockRep* Representation::find(std::string_view id) const {
  for (const auto& b : blocks) {
    if (b.presentation.id == id) return &b;
  }
  return nullptr;
}

BlockRep seed_faithful_rep(const BlockPresentation& block, const SeedParams& params) {
  if (params.fiber_central == 0.0) {
    throw std::invalid_argument("the fiber image must be a nontrivial central element");
  }
  if (!(params.spread > 1.0)) throw std::invalid_argument("spread must exceed 1");
  if (block.boundaries.empty()) {
    throw std::invalid_argument("block '" + block.id + "' has no boundary; its surface group is not free");
  }
  if (block.genus < 1) throw std::invalid_argument("block genus must be positive");

  // 2r arcs of half width t centred at j*pi/(2r); generator k attracts to
  // the arc at k and repels from the one at k + r, a quarter turn away, so
  // g_k = Rot(phi_k) diag(l, 1/l) Rot(-phi_k) with orthogonal eigenvectors.
  // diag(l, 1/l) maps |theta| <= pi/2 - t into |theta| < t iff l > cot t.
  const std::size_t r = block.free_rank();
  const double spacing = kPi / static_cast<double>(2 * r);
  const double half = 0.4 * spacing;
  const double lambda = params.spread / std::tan(half);
  const Eigen::Matrix2d D = diagonal_matrix(lambda);

  std::size_t closing = block.boundaries.size() - 1;
  for (std::size_t j = 0; j < block.boundaries.size(); ++j) {
    if (!block.boundaries[j]) closing = j;
  }
  const auto names = block.generator_names();
  const auto g = static_cast<std::size_t>(block.genus);
  std::vector<std::string> order;
  for (std::size_t k = 0; k < 2 * g; ++k) order.push_back(names[k]);
  for (std::size_t j = 0; j < block.boundaries.size(); ++j) {
    if (j != closing) order.push_back(names[2 * g + j]);
  }

  PingPongCertificate cert;
  std::vector<ProjClass> projective;
  for (std::size_t k = 0; k < r; ++k) {
    const double phi = spacing * static_cast<double>(k);
    projective.push_back(ProjClass::from_matrix(rotation_matrix(phi) * D * rotation_matrix(-phi)));
    cert.generators.push_back(order[k]);
    cert.attracting.push_back({mod_pi(phi - half), 2.0 * half});
    cert.repelling.push_back({mod_pi(phi + kPi / 2.0 - half), 2.0 * half});
  }
  cert.margin = ping_pong_margin(projective, cert);
  if (!(cert.margin >= params.min_margin)) {
    throw RepBuildError("ping-pong slack " + std::to_string(cert.margin) + " below " +
                        std::to_string(params.min_margin) + "; increase the spread");
  }

  BlockRep rep;
  rep.presentation = block;
  rep.root = true;
  rep.closing = closing;
  for (std::size_t i = 0; i < g; ++i) {
    rep.a.emplace_back(projective[2 * i], 0.0);
    rep.b.emplace_back(projective[2 * i + 1], 0.0);
  }
  rep.c.assign(block.boundaries.size(), MotionElement::identity());
  std::size_t next = 2 * g;
  for (std::size_t j = 0; j < block.boundaries.size(); ++j) {
    if (j != closing) rep.c[j] = MotionElement(projective[next++], 0.0);
  }
  // c_closing solves prod [a_i, b_i] = c_1 ... c_l.
  std::vector<MotionElement> before(rep.c.begin(), rep.c.begin() + static_cast<std::ptrdiff_t>(closing));
  std::vector<MotionElement> after(rep.c.begin() + static_cast<std::ptrdiff_t>(closing) + 1, rep.c.end());
  rep.c[closing] = mot_mul(mot_mul(mot_inv(product(before)), commutator_product(rep)), mot_inv(product(after)));
  rep.fiber = MotionElement::central(params.fiber_central);
  rep.ping_pong = std::move(cert);
  return rep;
}

TorusImages transport(const TorusImages& parent, const GluingMatrix& g) {
  auto word = [&](const Integer& x, const Integer& y) {
    return commuting_word(parent.f, x.to_int64(), parent.z, y.to_int64());
  };
  return {word(g.a, g.b), word(g.c, g.d)};
}

BlockRep extend_abelian(const TorusImages& determined, const BlockPresentation& child,
                        std::size_t parent_boundary, const std::vector<MotionElement>& free_choices) {
  const std::size_t l = child.boundaries.size();
  if (parent_boundary >= l) throw std::invalid_argument("parent boundary index out of range");

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < l; ++j) {
    if (j != parent_boundary) others.push_back(j);
  }
  if (others.empty()) {
    throw RepBuildError("block '" + child.id + "' has no boundary besides the parent torus to close the relation");
  }
  std::size_t closing = others.back();
  for (std::size_t j : others) {
    if (!child.boundaries[j]) closing = j;
  }
  if (!free_choices.empty() && free_choices.size() != others.size() - 1) {
    throw std::invalid_argument("expected " + std::to_string(others.size() - 1) + " free boundary choices");
  }

  BlockRep rep;
  rep.presentation = child;
  rep.parent_boundary = parent_boundary;
  rep.fiber = determined.f;
  rep.a.assign(static_cast<std::size_t>(child.genus), MotionElement::identity());
  rep.b.assign(static_cast<std::size_t>(child.genus), MotionElement::identity());
  rep.c.assign(l, MotionElement::identity());
  rep.c[parent_boundary] = determined.z;

  std::optional<ProjClass> axis;
  if (!is_identity(determined.f.proj())) {
    axis = determined.f.proj();
  } else if (!is_identity(determined.z.proj())) {
    axis = determined.z.proj();
  }

  std::size_t k = 0;
  for (std::size_t j : others) {
    if (j == closing) continue;
    MotionElement x = MotionElement::identity();
    if (!free_choices.empty()) {
      x = free_choices[k];
    } else if (axis) {
      x = MotionElement(centralizer_family(*axis, 0.5 * static_cast<double>(k + 1)), 0.0);
    }
    if (!commutes(x, determined.f) || !commutes(x, determined.z)) {
      throw std::invalid_argument("choice for boundary c" + std::to_string(j + 1) + " of '" + child.id +
                                  "' is outside the centralizer of the torus images");
    }
    rep.c[j] = x;
    ++k;
  }

  std::vector<std::pair<MotionElement, std::int64_t>> rest;
  for (std::size_t j = 0; j < l; ++j) {
    if (j != closing) rest.emplace_back(rep.c[j], 1);
  }
  rep.c[closing] = mot_inv(commuting_product(rest));
  rep.closing = closing;
  return rep;
}

Representation extend_along_tree(const GraphManifold& m, BlockId root, const SeedParams& params) {
  if (const auto report = validate(m); !report.ok()) {
    throw RepBuildError("invalid manifold: " + report.violations.front().message);
  }
  if (root >= m.size()) throw RepBuildError("root block does not exist");
  if (!is_tree(m)) throw RepBuildError("dual graph is not a tree");
  for (BlockId v = 0; v < m.size(); ++v) {
    if (v != root && m.degree(v) <= 1 && m.block(v).free_boundaries < 1) {
      throw RepBuildError("leaf block '" + m.block(v).id + "' has no free boundary torus");
    }
  }
  if (m.degree(root) + static_cast<std::size_t>(std::max(0, m.block(root).free_boundaries)) == 0) {
    throw RepBuildError("root block '" + m.block(root).id + "' has no boundary torus");
  }

  Representation rep;
  rep.root = m.block(root).id;
  rep.fiber_central = params.fiber_central;
  rep.spread = params.spread;
  try {
    rep.blocks.push_back(seed_faithful_rep(presentation_of(m, root), params));
  } catch (const std::invalid_argument& e) {
    throw RepBuildError(std::string("seed failed: ") + e.what());
  }

  std::vector<std::size_t> slot(m.size(), static_cast<std::size_t>(-1));
  slot[root] = 0;
  std::queue<BlockId> queue;
  queue.push(root);
  while (!queue.empty()) {
    const BlockId t = queue.front();
    queue.pop();
    std::vector<BlockId> children;
    for (const auto& inc : m.incident(t)) {
      if (slot[inc.neighbor] == static_cast<std::size_t>(-1)) children.push_back(inc.neighbor);
    }
    std::sort(children.begin(), children.end(),
              [&](BlockId x, BlockId y) { return m.block(x).id < m.block(y).id; });
    for (BlockId u : children) {
      const BlockRep& parent = rep.blocks[slot[t]];
      const TorusImages parent_torus{parent.fiber,
                                     parent.c[*parent.presentation.boundary_facing(m.block(u).id)]};
      const BlockPresentation p = presentation_of(m, u);
      TorusImages determined;
      try {
        determined = transport(parent_torus, m.glue(u, t));
      } catch (const std::domain_error& e) {
        throw RepBuildError("images of '" + p.id + "' leave double range: " + e.what());
      }
      BlockRep child;
      try {
        child = extend_abelian(determined, p, *p.boundary_facing(m.block(t).id));
      } catch (const std::domain_error& e) {
        throw RepBuildError("images of '" + p.id + "' leave double range: " + e.what());
      }
      slot[u] = rep.blocks.size();
      rep.blocks.push_back(std::move(child));
      queue.push(u);
    }
  }
  return rep;
}

bool VerificationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerificationCheck& c) { return c.passed; });
}

const VerificationCheck& VerificationReport::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named '" + std::string(name) + "'");
}

VerificationReport verify_rep(const GraphManifold& m, const Representation& r, double eps) {
  Tolerances tol;
  tol.comm = eps;
  auto named = [](const char* n) {
    VerificationCheck c;
    c.name = n;
    return c;
  };
  VerificationCheck structure = named("structure"), relation = named("relation"), fiber = named("fiber"),
                    edges = named("edges"), abelian = named("abelian"), faithful = named("faithful");
  auto fail = [](VerificationCheck& c, std::string msg) {
    c.passed = false;
    c.failures.push_back(std::move(msg));
  };

  std::vector<const BlockRep*> of(m.size(), nullptr);
  for (BlockId v = 0; v < m.size(); ++v) {
    of[v] = r.find(m.block(v).id);
    if (!of[v]) {
      fail(structure, "no images for block '" + m.block(v).id + "'");
      continue;
    }
    const BlockRep& b = *of[v];
    const BlockPresentation expected = presentation_of(m, v);
    if (b.presentation.genus != expected.genus || b.presentation.boundaries != expected.boundaries ||
        b.a.size() != static_cast<std::size_t>(expected.genus) || b.b.size() != b.a.size() ||
        b.c.size() != expected.boundaries.size() || b.closing >= b.c.size()) {
      fail(structure, "images of '" + expected.id + "' do not match its presentation");
      of[v] = nullptr;
    }
  }
  if (r.blocks.size() != m.size()) fail(structure, "representation has a different number of blocks");

  for (BlockId v = 0; v < m.size(); ++v) {
    if (!of[v]) continue;
    const BlockRep& b = *of[v];
    const std::string& id = b.presentation.id;
    // Boundary images of an Abelian block are evaluated on their common axis.
    MotionElement boundary_product = MotionElement::identity();
    if (b.root) {
      boundary_product = product(b.c);
    } else {
      std::vector<std::pair<MotionElement, std::int64_t>> factors;
      for (const auto& c : b.c) factors.emplace_back(c, 1);
      boundary_product = commuting_product(factors);
    }
    if (!approx_equal(commutator_product(b), boundary_product, eps)) {
      fail(relation, "'" + id + "': prod [a_i, b_i] differs from c_1 ... c_l");
    }

    std::vector<MotionElement> gens = b.a;
    gens.insert(gens.end(), b.b.begin(), b.b.end());
    gens.insert(gens.end(), b.c.begin(), b.c.end());
    for (const auto& x : gens) {
      if (!commutes(b.fiber, x, tol)) {
        fail(fiber, "'" + id + "': fiber image does not commute with every generator");
        break;
      }
    }

    if (!b.root) {
      gens.push_back(b.fiber);
      bool all = true;
      for (std::size_t i = 0; i < gens.size() && all; ++i) {
        for (std::size_t j = i + 1; j < gens.size() && all; ++j) all = commutes(gens[i], gens[j], tol);
      }
      if (!all) fail(abelian, "'" + id + "': generator images do not commute");
    }
  }

  for (const Edge& e : m.edges()) {
    const BlockRep* rv = of[e.from];
    const BlockRep* rw = of[e.to];
    if (!rv || !rw) continue;
    const std::string vid = m.block(e.from).id;
    const std::string wid = m.block(e.to).id;
    const MotionElement& zv = rv->c[*rv->presentation.boundary_facing(wid)];
    const MotionElement& zw = rw->c[*rw->presentation.boundary_facing(vid)];
    const TorusImages expected = transport({rw->fiber, zw}, e.glue);
    if (!approx_equal(rv->fiber, expected.f, eps)) fail(edges, vid + " -> " + wid + ": fiber images disagree");
    if (!approx_equal(zv, expected.z, eps)) fail(edges, vid + " -> " + wid + ": section images disagree");
  }

  const BlockRep* root = r.find(r.root);
  std::size_t roots = 0;
  for (const auto& b : r.blocks) roots += b.root ? 1 : 0;
  if (!root || !root->root || roots != 1) {
    fail(faithful, "no unique root block '" + r.root + "'");
  } else if (!root->ping_pong) {
    fail(faithful, "root has no ping-pong certificate");
  } else {
    std::vector<ProjClass> gens;
    for (const auto& x : root->free_generators()) gens.push_back(x.proj());
    const double margin = ping_pong_margin(gens, *root->ping_pong);
    if (!(margin > 0.0)) fail(faithful, "ping-pong inclusions fail (slack " + std::to_string(margin) + ")");
    if (classify(root->fiber, tol) != ElementClass::Central || root->fiber.central_coord() == 0.0) {
      fail(faithful, "root fiber image is not a nontrivial central element");
    }
  }

  VerificationReport report;
  report.checks = {structure, relation, fiber, edges, abelian, faithful};
  return report;
}

namespace {

using nlohmann::json;

constexpr const char* kRepresentationSchema = "seifert-obstruct/representation";

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double unhex(const json& j) {
  if (!j.is_string()) throw std::invalid_argument("expected a hex float string");
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw std::invalid_argument("bad real '" + s + "'");
  }
  return x;
}

json element_json(const MotionElement& x) {
  const auto& m = x.proj().matrix();
  json out = {{"matrix", {hex(m(0, 0)), hex(m(0, 1)), hex(m(1, 0)), hex(m(1, 1))}},
              {"central", hex(x.central_coord())},
              {"exact", nullptr}};
  if (const auto& e = x.exact_coords()) out["exact"] = {{"rotation", e->rotation.str()}, {"central", e->central.str()}};
  return out;
}

MotionElement element_from(const json& j) {
  if (const auto& e = j.at("exact"); !e.is_null()) {
    return MotionElement::exact(Rational::parse(e.at("rotation").get<std::string>()),
                                Rational::parse(e.at("central").get<std::string>()));
  }
  const json& m = j.at("matrix");
  if (!m.is_array() || m.size() != 4) throw std::invalid_argument("matrix must have four entries");
  Eigen::Matrix2d a;
  a << unhex(m[0]), unhex(m[1]), unhex(m[2]), unhex(m[3]);
  return MotionElement(ProjClass::from_normalized(a), unhex(j.at("central")));
}

json elements_json(const std::vector<MotionElement>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(element_json(x));
  return out;
}

std::vector<MotionElement> elements_from(const json& j) {
  std::vector<MotionElement> out;
  for (const auto& x : j) out.push_back(element_from(x));
  return out;
}

json arcs_json(const std::vector<Arc>& arcs) {
  json out = json::array();
  for (const auto& a : arcs) out.push_back({hex(a.start), hex(a.length)});
  return out;
}

std::vector<Arc> arcs_from(const json& j) {
  std::vector<Arc> out;
  for (const auto& a : j) {
    if (!a.is_array() || a.size() != 2) throw std::invalid_argument("arc must be [start, length]");
    out.push_back({unhex(a[0]), unhex(a[1])});
  }
  return out;
}

}  // namespace

std::string dump_representation(const Representation& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    json boundaries = json::array();
    for (const auto& n : b.presentation.boundaries) boundaries.push_back(n ? json(*n) : json(nullptr));
    json block = {{"id", b.presentation.id},
                  {"genus", b.presentation.genus},
                  {"boundaries", std::move(boundaries)},
                  {"root", b.root},
                  {"parent_boundary", b.parent_boundary ? json(*b.parent_boundary) : json(nullptr)},
                  {"closing", b.closing},
                  {"a", elements_json(b.a)},
                  {"b", elements_json(b.b)},
                  {"c", elements_json(b.c)},
                  {"fiber", element_json(b.fiber)},
                  {"ping_pong", nullptr}};
    if (b.ping_pong) {
      block["ping_pong"] = {{"generators", b.ping_pong->generators},
                            {"attracting", arcs_json(b.ping_pong->attracting)},
                            {"repelling", arcs_json(b.ping_pong->repelling)},
                            {"margin", hex(b.ping_pong->margin)}};
    }
    blocks.push_back(std::move(block));
  }
  const json doc = {{"schema", kRepresentationSchema},
                    {"schema_version", 1},
                    {"root", r.root},
                    {"fiber_central", hex(r.fiber_central)},
                    {"spread", hex(r.spread)},
                    {"blocks", std::move(blocks)}};
  return doc.dump(2) + "\n";
}

Representation parse_representation(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("schema") != kRepresentationSchema) throw std::invalid_argument("unknown representation schema");
    if (doc.at("schema_version") != 1) throw std::invalid_argument("unsupported representation schema version");
    Representation r;
    r.root = doc.at("root").get<std::string>();
    r.fiber_central = unhex(doc.at("fiber_central"));
    r.spread = unhex(doc.at("spread"));
    for (const auto& jb : doc.at("blocks")) {
      BlockRep b;
      b.presentation.id = jb.at("id").get<std::string>();
      b.presentation.genus = jb.at("genus").get<int>();
      for (const auto& n : jb.at("boundaries")) {
        b.presentation.boundaries.push_back(n.is_null() ? std::nullopt
                                                        : std::optional<std::string>(n.get<std::string>()));
      }
      b.root = jb.at("root").get<bool>();
      if (const auto& pb = jb.at("parent_boundary"); !pb.is_null()) b.parent_boundary = pb.get<std::size_t>();
      b.closing = jb.at("closing").get<std::size_t>();
      b.a = elements_from(jb.at("a"));
      b.b = elements_from(jb.at("b"));
      b.c = elements_from(jb.at("c"));
      b.fiber = element_from(jb.at("fiber"));
      if (const auto& pp = jb.at("ping_pong"); !pp.is_null()) {
        PingPongCertificate cert;
        cert.generators = pp.at("generators").get<std::vector<std::string>>();
        cert.attracting = arcs_from(pp.at("attracting"));
        cert.repelling = arcs_from(pp.at("repelling"));
        cert.margin = unhex(pp.at("margin"));
        b.ping_pong = std::move(cert);
      }
      r.blocks.push_back(std::move(b));
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed representation: ") + e.what());
  }
}

}  // namespace seifert
