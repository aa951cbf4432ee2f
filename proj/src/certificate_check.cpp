// Independent replay of certificate documents. Deliberately shares nothing
// with the certifier beyond the manifold parser and the scalar types.

#include "seifert/certificate.hpp"
#include "seifert/manifold_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace seifert {

namespace {

using nlohmann::json;
using Mask = std::uint64_t;
using Grid = std::vector<std::vector<Integer>>;

/// One glued torus of a block, seen from that block: the matrix entries a, b
/// of the gluing map pointing into it.
struct Half {
  int neighbor;
  int edge;
  Integer a, b;
};

struct Base {
  std::vector<std::string> names;
  std::vector<std::vector<Half>> halves;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> free;
};

Base read_base(const GraphManifold& m) {
  Base g;
  for (const auto& b : m.blocks()) {
    g.names.push_back(b.id);
    g.free.push_back(b.free_boundaries);
  }
  g.halves.resize(m.size());
  for (std::size_t e = 0; e < m.edges().size(); ++e) {
    const Edge& edge = m.edges()[e];
    const auto f = static_cast<int>(edge.from);
    const auto t = static_cast<int>(edge.to);
    const GluingMatrix& G = edge.glue;
    g.edges.emplace_back(f, t);
    g.halves[t].push_back({f, static_cast<int>(e), G.a, G.b});
    // Reverse map: for det -1 the inverse is [[-d, b], [c, -a]].
    g.halves[f].push_back({t, static_cast<int>(e), -G.d, G.b});
  }
  return g;
}

bool connected(const Base& g, Mask vertices, const std::vector<int>& allowed_edges) {
  if (vertices == 0) return false;
  int start = 0;
  while (!((vertices >> start) & 1u)) ++start;
  Mask seen = Mask{1} << start;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int e : allowed_edges) {
      const auto [x, y] = g.edges[e];
      const bool hx = (seen >> x) & 1u;
      const bool hy = (seen >> y) & 1u;
      if (hx != hy) {
        seen |= (Mask{1} << x) | (Mask{1} << y);
        grew = true;
      }
    }
  }
  return seen == vertices;
}

std::vector<int> internal(const Base& g, Mask vertices) {
  std::vector<int> out;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (((vertices >> g.edges[e].first) & 1u) && ((vertices >> g.edges[e].second) & 1u)) {
      out.push_back(static_cast<int>(e));
    }
  }
  return out;
}

Integer divide(const Integer& p, const Integer& q) {
  if (!(p % q).is_zero()) throw std::domain_error("inexact division in fiber equation");
  return p / q;
}

Rational rational_det(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k].sign() == 0) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      std::swap(a[p], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational factor = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= factor * a[k][j];
    }
  }
  return det;
}

Integer det_of(const Grid& m) {
  std::vector<std::vector<Rational>> r;
  for (const auto& row : m) r.emplace_back(row.begin(), row.end());
  const Rational d = rational_det(std::move(r));
  if (!d.is_integer()) throw std::domain_error("non-integral determinant");
  return d.num();
}

Grid cofactor_adjugate(const Grid& m) {
  const std::size_t n = m.size();
  Grid adj(n, std::vector<Integer>(n));
  if (n == 1) {
    adj[0][0] = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Grid minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Integer> row;
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) row.push_back(m[r][c]);
        }
        minor.push_back(std::move(row));
      }
      const Integer c = det_of(minor);
      adj[i][j] = (i + j) % 2 == 0 ? c : -c;
    }
  }
  return adj;
}

Grid multiply(const Grid& x, const Grid& y, std::size_t inner, std::size_t cols) {
  Grid out(x.size(), std::vector<Integer>(cols));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < inner; ++k) out[i][j] += x[i][k] * y[k][j];
    }
  }
  return out;
}

Grid read_grid(const json& j) {
  Grid out;
  for (const auto& row : j) {
    std::vector<Integer> r;
    for (const auto& x : row) r.push_back(Integer::parse(x.get<std::string>()));
    out.push_back(std::move(r));
  }
  return out;
}

/// What the checker derives for one (vertex, component, cut) triple.
struct Expected {
  std::vector<std::string> rows;
  std::vector<std::string> symbols;
  Grid matrix, rhs;
  std::string witness;
};

Expected derive(const Base& g, int vertex, Mask subset, Mask cut_edges) {
  Expected x;
  const bool covered = cut_edges != 0;
  auto name = [&](int u, int sheet) {
    return covered ? g.names[u] + "." + std::to_string(sheet) : g.names[u];
  };

  std::vector<int> members;
  for (int u = 0; u < static_cast<int>(g.names.size()); ++u) {
    if ((subset >> u) & 1u) members.push_back(u);
  }
  // The component sits in sheet 0; a cut edge leads to sheet 1.
  std::set<std::pair<int, int>> outside;
  for (int u : members) {
    for (const Half& h : g.halves[u]) {
      const int sheet = ((cut_edges >> h.edge) & 1u) ? 1 : 0;
      if (!(sheet == 0 && ((subset >> h.neighbor) & 1u))) outside.insert({h.neighbor, sheet});
    }
  }
  for (int u : members) x.rows.push_back(name(u, 0));
  std::vector<std::pair<int, int>> symbols(outside.begin(), outside.end());
  for (const auto& [w, s] : symbols) x.symbols.push_back(name(w, s));

  x.matrix.assign(members.size(), std::vector<Integer>(members.size()));
  x.rhs.assign(members.size(), std::vector<Integer>(symbols.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    const int u = members[i];
    Integer bu(1);
    for (const Half& h : g.halves[u]) bu *= h.b;
    for (const Half& h : g.halves[u]) {
      const Integer scale = divide(bu, h.b);
      x.matrix[i][i] += scale * h.a;
      const int sheet = ((cut_edges >> h.edge) & 1u) ? 1 : 0;
      if (sheet == 0 && ((subset >> h.neighbor) & 1u)) {
        const auto j = static_cast<std::size_t>(
            std::find(members.begin(), members.end(), h.neighbor) - members.begin());
        x.matrix[i][j] -= scale;
      } else {
        const auto j = static_cast<std::size_t>(
            std::find(symbols.begin(), symbols.end(), std::pair(h.neighbor, sheet)) - symbols.begin());
        x.rhs[i][j] += scale;
      }
    }
  }

  for (const Half& h : g.halves[vertex]) {
    if (((subset >> h.neighbor) & 1u) && (x.witness.empty() || g.names[h.neighbor] < x.witness)) {
      x.witness = g.names[h.neighbor];
    }
  }
  return x;
}

using Key = std::pair<std::vector<std::string>, std::vector<std::pair<std::string, std::string>>>;

Key key_of(const Base& g, Mask subset, Mask cut_edges) {
  Key k;
  for (std::size_t u = 0; u < g.names.size(); ++u) {
    if ((subset >> u) & 1u) k.first.push_back(g.names[u]);
  }
  std::sort(k.first.begin(), k.first.end());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if ((cut_edges >> e) & 1u) {
      std::string x = g.names[g.edges[e].first];
      std::string y = g.names[g.edges[e].second];
      if (y < x) std::swap(x, y);
      k.second.emplace_back(x, y);
    }
  }
  std::sort(k.second.begin(), k.second.end());
  return k;
}

struct Candidate {
  Mask subset;
  Mask cut;
};

class Replay {
 public:
  Replay(const json& doc, const GraphManifold* external) : doc_(doc), external_(external) {}

  CheckReport run() {
    try {
      check_document();
    } catch (const json::exception& e) {
      fail(std::string("malformed certificate: ") + e.what());
    } catch (const std::exception& e) {
      fail(std::string("certificate replay failed: ") + e.what());
    }
    return report_;
  }

 private:
  void fail(std::string msg) { report_.failures.push_back(std::move(msg)); }

  void check_document() {
    if (doc_.at("schema").get<std::string>() != kCertificateSchema) fail("unknown schema");
    if (doc_.at("schema_version").get<int>() != kCertificateSchemaVersion) fail("unsupported schema version");

    const std::string text = doc_.at("manifold").at("text").get<std::string>();
    const std::string stated_hash = doc_.at("manifold").at("sha256").get<std::string>();
    const GraphManifold m = parse_manifold(text);
    if (serialize_manifold(canonical_form(m)) != text) fail("embedded manifold text is not canonical");
    if (manifold_hash(m) != stated_hash) fail("embedded manifold text does not match its hash");
    if (external_ && manifold_hash(*external_) != stated_hash) {
      fail("certificate was issued for a different manifold");
    }
    const Base g = read_base(m);
    if (g.names.size() > 63) {
      fail("checker supports at most 63 blocks");
      return;
    }
    check_preconditions(g);

    const std::size_t size_bound = std::stoul(doc_.at("options").at("size_bound").get<std::string>());
    const std::size_t cut_bound = std::stoul(doc_.at("options").at("cut_bound").get<std::string>());
    const bool exhaustive = g.names.size() <= size_bound;

    const json& vertices = doc_.at("vertices");
    std::vector<int> order(g.names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return g.names[x] < g.names[y]; });
    if (vertices.size() != order.size()) {
      fail("certificate lists " + std::to_string(vertices.size()) + " vertices, manifold has " +
           std::to_string(order.size()));
      return;
    }

    std::size_t gaps = exhaustive ? 0 : 1;
    bool conclusion = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int v = order[k];
      const json& rec = vertices[k];
      const std::string vname = g.names[v];
      if (rec.at("vertex").get<std::string>() != vname) {
        fail("vertex record " + std::to_string(k) + " should be '" + vname + "'");
        continue;
      }
      std::vector<std::string> neighbors;
      for (const Half& h : g.halves[v]) neighbors.push_back(g.names[h.neighbor]);
      std::sort(neighbors.begin(), neighbors.end());
      if (rec.at("neighbors").get<std::vector<std::string>>() != neighbors) fail(vname + ": wrong neighbour list");

      std::map<Key, Candidate> expected;
      if (exhaustive) {
        gaps += enumerate(g, v, cut_bound, expected);
      } else {
        gaps += supplied(g, v, cut_bound, rec.at("components"), expected);
      }

      std::map<Key, const json*> listed;
      for (const auto& c : rec.at("components")) {
        Key key;
        key.first = c.at("vertices").get<std::vector<std::string>>();
        for (const auto& pair : c.at("cut")) {
          key.second.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
        }
        if (!listed.emplace(key, &c).second) fail(vname + ": duplicate component record");
      }
      for (const auto& [key, cand] : expected) {
        if (!listed.contains(key)) fail(vname + ": missing component record {" + join(key.first) + "}");
      }
      for (const auto& [key, c] : listed) {
        if (!expected.contains(key)) fail(vname + ": unexpected component record {" + join(key.first) + "}");
      }
      if (expected.empty()) conclusion = false;

      std::vector<Key> record_order;
      for (const auto& c : rec.at("components")) {
        Key key;
        key.first = c.at("vertices").get<std::vector<std::string>>();
        for (const auto& pair : c.at("cut")) {
          key.second.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
        }
        record_order.push_back(std::move(key));
      }
      if (!std::is_sorted(record_order.begin(), record_order.end())) fail(vname + ": records not in canonical order");

      for (const auto& [key, cand] : expected) {
        const auto it = listed.find(key);
        if (it == listed.end()) {
          conclusion = false;
          continue;
        }
        conclusion = check_component(g, v, cand, *it->second) && conclusion;
        ++report_.records_checked;
      }
    }

    const bool complete = gaps == 0;
    report_.complete = complete;
    report_.conclusion = conclusion;
    if (doc_.at("complete").get<bool>() != complete) fail("completeness flag does not match");
    if (doc_.at("gaps").size() != gaps) fail("gap list has the wrong length");
    const std::string stated = doc_.at("conclusion").get<std::string>();
    const std::string derived = conclusion ? "no vertex faithful representation" : "inconclusive";
    if (stated != derived) fail("stated conclusion '" + stated + "' but replay gives '" + derived + "'");
  }

  void check_preconditions(const Base& g) {
    for (std::size_t u = 0; u < g.names.size(); ++u) {
      if (g.free[u] != 0) fail("block '" + g.names[u] + "' has free boundary tori");
      Rational k;
      Rational reciprocal;
      for (const Half& h : g.halves[u]) {
        k += Rational(h.a, h.b);
        reciprocal += Rational(Integer(1), abs(h.b));
      }
      if (!(abs(k) > reciprocal)) fail("block '" + g.names[u] + "' is not strictly diagonally dominant");
    }
  }

  /// Adds every (subset, cut) candidate for v; returns the number of gaps.
  std::size_t enumerate(const Base& g, int v, std::size_t cut_bound, std::map<Key, Candidate>& out) {
    const std::size_t n = g.names.size();
    Mask around = 0;
    for (const Half& h : g.halves[v]) around |= Mask{1} << h.neighbor;
    std::size_t gaps = 0;
    for (Mask s = 1; s < (Mask{1} << n); ++s) {
      if (((s >> v) & 1u) || !(s & around)) continue;
      gaps += add_cuts(g, s, cut_bound, out);
    }
    return gaps;
  }

  std::size_t supplied(const Base& g, int v, std::size_t cut_bound, const json& comps,
                       std::map<Key, Candidate>& out) {
    std::set<Mask> subsets;
    for (const auto& c : comps) {
      Mask s = 0;
      for (const auto& id : c.at("vertices")) {
        const auto it = std::find(g.names.begin(), g.names.end(), id.get<std::string>());
        if (it == g.names.end()) throw std::invalid_argument("unknown block in component record");
        s |= Mask{1} << (it - g.names.begin());
      }
      bool touches = false;
      for (const Half& h : g.halves[v]) touches = touches || ((s >> h.neighbor) & 1u);
      if (((s >> v) & 1u) || !touches) fail(g.names[v] + ": supplied component does not qualify");
      subsets.insert(s);
    }
    std::size_t gaps = 0;
    for (Mask s : subsets) gaps += add_cuts(g, s, cut_bound, out);
    return gaps;
  }

  std::size_t add_cuts(const Base& g, Mask s, std::size_t cut_bound, std::map<Key, Candidate>& out) {
    const std::vector<int> inner = internal(g, s);
    if (!connected(g, s, inner)) return 0;
    const bool capped = inner.size() > cut_bound;
    const Mask limit = capped ? 1 : (Mask{1} << inner.size());
    for (Mask c = 0; c < limit; ++c) {
      std::vector<int> kept;
      Mask cut_edges = 0;
      for (std::size_t k = 0; k < inner.size(); ++k) {
        if ((c >> k) & 1u) {
          cut_edges |= Mask{1} << inner[k];
        } else {
          kept.push_back(inner[k]);
        }
      }
      if (connected(g, s, kept)) out.emplace(key_of(g, s, cut_edges), Candidate{s, cut_edges});
    }
    return capped ? 1 : 0;
  }

  bool check_component(const Base& g, int v, const Candidate& cand, const json& c) {
    const Expected x = derive(g, v, cand.subset, cand.cut);
    const std::string where = g.names[v] + " / {" + join(key_of(g, cand.subset, cand.cut).first) + "}";
    const std::size_t before = report_.failures.size();

    if (c.at("rows").get<std::vector<std::string>>() != x.rows) fail(where + ": rows differ");
    if (c.at("symbols").get<std::vector<std::string>>() != x.symbols) fail(where + ": symbols differ");
    if (c.at("witness").get<std::string>() != x.witness) fail(where + ": witness differs");
    const Grid matrix = read_grid(c.at("matrix"));
    const Grid rhs = read_grid(c.at("rhs"));
    if (matrix != x.matrix) fail(where + ": associated matrix differs");
    if (rhs != x.rhs) fail(where + ": right-hand side differs");
    if (report_.failures.size() != before) return false;

    const std::size_t n = x.matrix.size();
    const Integer det = det_of(x.matrix);
    if (Integer::parse(c.at("determinant").get<std::string>()) != det) fail(where + ": determinant differs");

    const Grid adj = cofactor_adjugate(x.matrix);
    const Grid stated_adj = read_grid(c.at("adjugate"));
    if (stated_adj != adj) fail(where + ": adjugate differs");
    Grid scaled_identity(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i) scaled_identity[i][i] = det;
    if (multiply(x.matrix, adj, n, n) != scaled_identity || multiply(adj, x.matrix, n, n) != scaled_identity) {
      fail(where + ": adjugate identity fails");
    }

    const Grid solution = read_grid(c.at("solution"));
    const std::size_t symbols = x.symbols.size();
    Grid expected_solution = det.is_zero() ? Grid(n, std::vector<Integer>(symbols))
                                           : multiply(adj, x.rhs, n, symbols);
    if (solution != expected_solution) fail(where + ": fiber solution differs");
    Grid det_rhs = x.rhs;
    for (auto& row : det_rhs) {
      for (auto& e : row) e *= det;
    }
    const bool substitutes = multiply(x.matrix, expected_solution, n, symbols) == det_rhs;

    bool dominant = true;
    const json& rows = c.at("dominance");
    if (rows.size() != n) fail(where + ": dominance rows missing");
    for (std::size_t i = 0; i < n && i < rows.size(); ++i) {
      Integer off, mass;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) off += abs(x.matrix[i][j]);
      }
      for (std::size_t j = 0; j < symbols; ++j) mass += abs(x.rhs[i][j]);
      const Integer diag = abs(x.matrix[i][i]);
      const bool strict = diag > off + mass;
      dominant = dominant && strict;
      if (Integer::parse(rows[i].at("diagonal").get<std::string>()) != diag ||
          Integer::parse(rows[i].at("off_diagonal").get<std::string>()) != off ||
          Integer::parse(rows[i].at("rhs_mass").get<std::string>()) != mass ||
          rows[i].at("strict").get<bool>() != strict) {
        fail(where + ": dominance row " + std::to_string(i) + " differs");
      }
    }

    const bool contradiction = dominant && !det.is_zero() && substitutes && !x.witness.empty();
    if (c.at("contradiction").get<bool>() != contradiction) fail(where + ": contradiction flag differs");
    if (c.at("witness_fiber").at("projectively_finite").get<bool>() != !det.is_zero()) {
      fail(where + ": finiteness flag differs");
    }
    return contradiction && report_.failures.size() == before;
  }

  static std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
    return out;
  }

  const json& doc_;
  const GraphManifold* external_;
  CheckReport report_;
};

}  // namespace

CheckReport check_certificate(const std::string& document, const GraphManifold* manifold) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    CheckReport r;
    r.failures.push_back(std::string("certificate is not valid JSON: ") + e.what());
    return r;
  }
  return Replay(doc, manifold).run();
}

}  // namespace seifert
