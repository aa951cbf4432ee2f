#include "seifert/obstruction.hpp"

#include "seifert/manifold_io.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace seifert {

Integer fiber_product(const GraphManifold& m, BlockId v) {
  if (m.degree(v) == 0) {
    throw std::invalid_argument("block '" + m.block(v).id + "' has no glued neighbour");
  }
  Integer p(1);
  for (const auto& inc : m.incident(v)) p *= intersection_index(m, v, inc.neighbor);
  return p;
}

AssociatedMatrix associated_matrix(const GraphManifold& m, const AbelianComponent& comp) {
  if (!is_connected(m, comp)) throw std::invalid_argument("component is not connected");
  if (!is_induced(m, comp)) {
    throw std::invalid_argument(
        "component is not induced; realize it in a double cover with induce_component_cover");
  }
  AssociatedMatrix a;
  a.vertices = comp.vertices;
  std::map<BlockId, Eigen::Index> row_of;
  for (std::size_t i = 0; i < a.vertices.size(); ++i) row_of[a.vertices[i]] = static_cast<Eigen::Index>(i);

  std::set<BlockId> outside;
  for (BlockId v : a.vertices) {
    for (const auto& inc : m.incident(v)) {
      if (!row_of.contains(inc.neighbor)) outside.insert(inc.neighbor);
    }
  }
  a.symbols.assign(outside.begin(), outside.end());
  std::map<BlockId, Eigen::Index> col_of;
  for (std::size_t j = 0; j < a.symbols.size(); ++j) col_of[a.symbols[j]] = static_cast<Eigen::Index>(j);

  const auto n = static_cast<Eigen::Index>(a.vertices.size());
  a.entries = IntMatrix::Zero(n, n);
  a.rhs = IntMatrix::Zero(n, static_cast<Eigen::Index>(a.symbols.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const BlockId v = a.vertices[static_cast<std::size_t>(i)];
    const Integer bv = fiber_product(m, v);
    Integer diagonal;
    for (const auto& inc : m.incident(v)) {
      const GluingMatrix into = m.glue(inc.neighbor, v);
      const Integer scale = exact_div(bv, into.b);  // b_v / b_{w,v}
      diagonal += scale * into.a;
      if (auto it = row_of.find(inc.neighbor); it != row_of.end()) {
        a.entries(i, it->second) = -scale;
      } else {
        a.rhs(i, col_of.at(inc.neighbor)) = scale;
      }
    }
    a.entries(i, i) = diagonal;
  }
  return a;
}

bool is_sdd_matrix(const IntMatrix& m) { return is_strictly_diagonally_dominant(m); }

std::vector<RowDominance> row_dominance(const AssociatedMatrix& a) {
  std::vector<RowDominance> rows;
  for (Eigen::Index i = 0; i < a.entries.rows(); ++i) {
    RowDominance r;
    r.diagonal = abs(a.entries(i, i));
    for (Eigen::Index j = 0; j < a.entries.cols(); ++j) {
      if (j != i) r.off_diagonal += abs(a.entries(i, j));
    }
    for (Eigen::Index j = 0; j < a.rhs.cols(); ++j) r.rhs_mass += abs(a.rhs(i, j));
    rows.push_back(r);
  }
  return rows;
}

FormalFiberSolution solve_fibers(const AssociatedMatrix& a) {
  FormalFiberSolution s;
  s.determinant = exact_det(a.entries);
  if (s.determinant.is_zero()) throw std::domain_error("associated matrix is singular");
  s.adjugate = exact_adjugate(a.entries);
  s.coefficients = s.adjugate * a.rhs;
  return s;
}

bool substitutes_back(const AssociatedMatrix& a, const FormalFiberSolution& s) {
  const IntMatrix lhs = a.entries * s.coefficients;
  const IntMatrix rhs = a.rhs * s.determinant;
  return lhs == rhs;
}

namespace {

using Mask = std::uint64_t;
constexpr std::size_t kMaxMaskBits = 63;

Mask bit(BlockId v) { return Mask{1} << v; }

std::vector<BlockId> members(Mask mask) {
  std::vector<BlockId> out;
  for (BlockId v = 0; mask != 0; ++v, mask >>= 1) {
    if (mask & 1u) out.push_back(v);
  }
  return out;
}

std::string edge_label_from(const GraphManifold& m, EdgeId e) { return m.block(m.edges()[e].from).id; }
std::string edge_label_to(const GraphManifold& m, EdgeId e) { return m.block(m.edges()[e].to).id; }

/// Analyses one realized component and fills the numeric part of the record.
ComponentRecord analyse(const GraphManifold& m, BlockId vertex, const AbelianComponent& comp) {
  ComponentRecord rec;
  for (BlockId u : comp.vertices) rec.vertices.push_back(m.block(u).id);
  std::sort(rec.vertices.begin(), rec.vertices.end());

  std::string witness;
  for (BlockId u : comp.vertices) {
    if (m.edge_between(vertex, u) && (witness.empty() || m.block(u).id < witness)) witness = m.block(u).id;
  }
  rec.witness = witness;

  const InducedComponent realized = induce_component_cover(m, comp);
  for (EdgeId e : realized.cut) {
    std::string x = edge_label_from(m, e);
    std::string y = edge_label_to(m, e);
    if (y < x) std::swap(x, y);
    rec.cut.emplace_back(std::move(x), std::move(y));
  }
  std::sort(rec.cut.begin(), rec.cut.end());

  const GraphManifold& up = realized.manifold;
  const AssociatedMatrix a = associated_matrix(up, AbelianComponent::induced(up, realized.vertices));
  for (BlockId u : a.vertices) rec.rows.push_back(up.block(u).id);
  for (BlockId u : a.symbols) rec.symbols.push_back(up.block(u).id);
  rec.matrix = a.entries;
  rec.rhs = a.rhs;
  rec.dominance = row_dominance(a);

  const bool dominant = std::all_of(rec.dominance.begin(), rec.dominance.end(),
                                    [](const RowDominance& r) { return r.strict_with_rhs(); });
  rec.determinant = exact_det(a.entries);
  rec.adjugate = exact_adjugate(a.entries);
  if (!rec.determinant.is_zero()) {
    const FormalFiberSolution s = solve_fibers(a);
    rec.solution = s.coefficients;
    rec.contradiction = dominant && s.projectively_finite() && substitutes_back(a, s) && !witness.empty();
  } else {
    rec.solution = IntMatrix::Zero(a.entries.rows(), a.rhs.cols());
  }
  return rec;
}

struct VertexWork {
  VertexRecord record;
  std::vector<std::string> gaps;
};

/// Every cut subset C of the internal edges with (S, internal \ C) connected,
/// or only C = {} when there are more than cut_bound internal edges.
void analyse_subset(const GraphManifold& m, BlockId vertex, const std::vector<BlockId>& subset,
                    const CertifyOptions& options, VertexWork& work) {
  const std::vector<EdgeId> internal = internal_edges(m, subset);
  std::size_t cut_bits = internal.size();
  if (cut_bits > options.cut_bound || cut_bits > kMaxMaskBits) {
    std::string names;
    for (BlockId u : subset) names += (names.empty() ? "" : ",") + m.block(u).id;
    work.gaps.push_back("vertex " + m.block(vertex).id + ": component {" + names + "} has " +
                        std::to_string(internal.size()) + " internal edges, above the cut bound " +
                        std::to_string(options.cut_bound) + "; only the induced component analysed");
    cut_bits = 0;
  }
  for (Mask cut = 0; cut < (Mask{1} << cut_bits); ++cut) {
    AbelianComponent comp;
    comp.vertices = subset;
    for (std::size_t k = 0; k < internal.size(); ++k) {
      if (!(cut_bits > 0 && (cut >> k) & 1u)) comp.edges.push_back(internal[k]);
    }
    if (!is_connected(m, comp)) continue;
    try {
      work.record.components.push_back(analyse(m, vertex, comp));
    } catch (const DisconnectedCoverError&) {
      work.gaps.push_back("vertex " + m.block(vertex).id + ": a cut of the component at " +
                          m.block(subset.front()).id + " gave a disconnected cover");
    }
  }
}

unsigned worker_count(const CertifyOptions& options, std::size_t jobs) {
  unsigned n = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  n = std::max(1u, n);
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs)));
}

}  // namespace

std::vector<std::vector<BlockId>> candidate_components(const GraphManifold& m, BlockId v) {
  if (m.size() > kMaxMaskBits) throw std::invalid_argument("too many blocks for exhaustive enumeration");
  std::vector<Mask> neighbors(m.size(), 0);
  for (BlockId u = 0; u < m.size(); ++u) {
    for (const auto& inc : m.incident(u)) {
      if (inc.neighbor != v) neighbors[u] |= bit(inc.neighbor);
    }
  }

  // Grow connected sets one adjacent block at a time from every seed.
  std::set<Mask> seen;
  std::vector<Mask> frontier;
  for (BlockId u = 0; u < m.size(); ++u) {
    if (u != v && seen.insert(bit(u)).second) frontier.push_back(bit(u));
  }
  while (!frontier.empty()) {
    std::vector<Mask> next;
    for (Mask s : frontier) {
      Mask boundary = 0;
      for (BlockId u : members(s)) boundary |= neighbors[u];
      boundary &= ~s;
      for (BlockId w : members(boundary)) {
        if (seen.insert(s | bit(w)).second) next.push_back(s | bit(w));
      }
    }
    frontier = std::move(next);
  }

  Mask around = 0;
  for (const auto& inc : m.incident(v)) around |= bit(inc.neighbor);
  std::vector<std::vector<BlockId>> out;
  for (Mask s : seen) {
    if (s & around) out.push_back(members(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Certificate certify_no_vertex_faithful(const GraphManifold& input, const CertifyOptions& options) {
  // Canonical block order fixes row and symbol order in every record.
  const GraphManifold m = canonical_form(input);
  const ValidationReport report = validate(m);
  if (!report.ok()) {
    throw CertifyError(CertifyError::Kind::Invalid, "invalid manifold: " + report.violations.front().message);
  }
  if (!m.is_closed()) throw CertifyError(CertifyError::Kind::NotClosed, "not closed: the manifold has free boundary tori");
  for (BlockId v = 0; v < m.size(); ++v) {
    if (!is_sdd_block(m, v)) {
      throw CertifyError(CertifyError::Kind::NotSdd,
                         "not SDD: block '" + m.block(v).id + "' has |k| = " + abs(charge(m, v)).str() +
                             " <= " + reciprocal_index_sum(m, v).str());
    }
  }

  Certificate cert;
  cert.manifold_hash = manifold_hash(m);
  cert.manifold_text = serialize_manifold(m);
  cert.size_bound = options.size_bound;
  cert.cut_bound = options.cut_bound;

  const bool exhaustive = m.size() <= options.size_bound && m.size() <= kMaxMaskBits;
  std::vector<std::vector<BlockId>> supplied;
  if (!exhaustive) {
    cert.gaps.push_back("exhaustive enumeration skipped: " + std::to_string(m.size()) +
                        " blocks exceed the size bound " + std::to_string(options.size_bound) +
                        "; only supplied components analysed");
    for (const auto& ids : options.components) {
      std::vector<BlockId> vs;
      for (const auto& id : ids) {
        const auto found = m.find(id);
        if (!found) throw CertifyError(CertifyError::Kind::BadComponent, "unknown block '" + id + "' in component");
        vs.push_back(*found);
      }
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      if (!is_connected(m, AbelianComponent::induced(m, vs))) {
        throw CertifyError(CertifyError::Kind::BadComponent, "supplied component is not connected");
      }
      supplied.push_back(std::move(vs));
    }
  }

  std::vector<BlockId> order(m.size());
  for (BlockId v = 0; v < m.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](BlockId x, BlockId y) { return m.block(x).id < m.block(y).id; });

  std::vector<VertexWork> work(m.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t k = next++; k < order.size(); k = next++) {
      try {
        const BlockId v = order[k];
        VertexWork& w = work[k];
        w.record.vertex = m.block(v).id;
        for (const auto& inc : m.incident(v)) w.record.neighbors.push_back(m.block(inc.neighbor).id);
        std::sort(w.record.neighbors.begin(), w.record.neighbors.end());

        std::vector<std::vector<BlockId>> subsets;
        if (exhaustive) {
          subsets = candidate_components(m, v);
        } else {
          for (const auto& s : supplied) {
            const bool excludes_v = !std::binary_search(s.begin(), s.end(), v);
            const bool touches = std::any_of(s.begin(), s.end(), [&](BlockId u) { return m.edge_between(v, u).has_value(); });
            if (excludes_v && touches) subsets.push_back(s);
          }
        }
        for (const auto& s : subsets) analyse_subset(m, v, s, options, w);
        std::sort(w.record.components.begin(), w.record.components.end(),
                  [](const ComponentRecord& x, const ComponentRecord& y) {
                    return std::tie(x.vertices, x.cut) < std::tie(y.vertices, y.cut);
                  });
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = worker_count(options, order.size());
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  cert.conclusion = true;
  for (auto& w : work) {
    for (auto& g : w.gaps) cert.gaps.push_back(std::move(g));
    if (w.record.components.empty()) cert.conclusion = false;
    for (const auto& c : w.record.components) cert.conclusion = cert.conclusion && c.contradiction;
    cert.vertices.push_back(std::move(w.record));
  }
  cert.complete = cert.gaps.empty();
  return cert;
}

}  // namespace seifert
