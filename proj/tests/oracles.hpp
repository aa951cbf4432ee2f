#ifndef SEIFERT_TESTS_ORACLES_HPP
#define SEIFERT_TESTS_ORACLES_HPP

// Reference computations that share no code with the library, and seeded
// generators for property tests.

#include "seifert/manifold.hpp"

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using Grid = std::vector<std::vector<BigInt>>;

/// p / q for any nonzero q; Boost's two-argument constructor wants q > 0.
inline BigRational ratio(BigInt p, BigInt q) {
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return BigRational(p, q);
}

/// Gaussian elimination over the rationals with partial pivoting on nonzero.
inline BigInt rational_det(const Grid& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<BigRational>> a(n, std::vector<BigRational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = BigRational(m[i][j]);
  }
  BigRational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const BigRational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return boost::multiprecision::numerator(det);
}

/// Sum over permutations; for n <= 7.
inline BigInt leibniz_det(const Grid& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BigInt total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    }
    BigInt term = inversions % 2 == 0 ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

struct SimpleEdge {
  std::size_t u, v;
  bool cut;
};

/// The cut-and-copy double cover is connected iff some cycle crosses the cut
/// an odd number of times: propagate Z/2 potentials along a BFS tree and
/// look for an inconsistent edge.
inline bool voltage_cover_connected(std::size_t n, const std::vector<SimpleEdge>& edges) {
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back({e.v, e.cut ? 1 : 0});
    adj[e.v].push_back({e.u, e.cut ? 1 : 0});
  }
  std::vector<int> pot(n, -1);
  pot[0] = 0;
  std::queue<std::size_t> q;
  q.push(0);
  while (!q.empty()) {
    const std::size_t x = q.front();
    q.pop();
    for (const auto& [y, w] : adj[x]) {
      if (pot[y] < 0) {
        pot[y] = pot[x] ^ w;
        q.push(y);
      }
    }
  }
  return std::any_of(edges.begin(), edges.end(),
                     [&](const SimpleEdge& e) { return (pot[e.u] ^ pot[e.v] ^ (e.cut ? 1 : 0)) != 0; });
}

/// All-pairs hop distances by Floyd-Warshall; unreachable pairs stay at n.
inline std::vector<std::vector<std::size_t>> all_distances(std::size_t n,
                                                           const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, n));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& [u, v] : edges) d[u][v] = d[v][u] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

/// Direction of M e_theta in turns of RP^1, in [0, 1).
inline double direction_turns(const Eigen::Matrix2d& m, double theta) {
  const Eigen::Vector2d v = m * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  double y = std::atan2(v.y(), v.x()) / M_PI;
  y -= std::floor(y);
  return y >= 1.0 ? 0.0 : y;
}

/// Lift of M on R evaluated at y in [0, 1): start from the direction of M e_0
/// and follow the image continuously while the input sweeps from 0 to y.
inline double swept_lift(const Eigen::Matrix2d& m, double y, int steps = 4000) {
  double value = direction_turns(m, 0.0);
  double prev = value;
  for (int k = 1; k <= steps; ++k) {
    const double cur = direction_turns(m, M_PI * y * k / steps);
    double step = cur - prev;
    step -= std::round(step);
    value += step;
    prev = cur;
  }
  return value;
}

/// Integer cocycle of two det-1 matrices through swept lifts.
inline long long swept_cocycle(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  const double y = direction_turns(b, 0.0);
  return std::llround(swept_lift(a, y) - direction_turns(a * b, 0.0));
}

// ---------------------------------------------------------------- generators

using Rng = std::mt19937_64;

inline long long uniform(Rng& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Det-1 matrix with entries of moderate size.
inline Eigen::Matrix2d random_sl2(Rng& rng, double bound = 2.5) {
  for (;;) {
    Eigen::Matrix2d m;
    m << uniform_real(rng, -bound, bound), uniform_real(rng, -bound, bound), uniform_real(rng, -bound, bound),
        uniform_real(rng, -bound, bound);
    const double det = m.determinant();
    if (det > 0.05) return m / std::sqrt(det);
  }
}

/// Integer matrix with det -1 and b != 0: the swap matrix times a few
/// elementary SL(2, Z) factors.
inline seifert::GluingMatrix random_glue(Rng& rng, long long bound = 3) {
  for (;;) {
    long long a = 0, b = 1, c = 1, d = 0;
    const int steps = static_cast<int>(uniform(rng, 1, 4));
    for (int s = 0; s < steps; ++s) {
      const long long k = uniform(rng, -bound, bound);
      if (uniform(rng, 0, 1) == 0) {
        b += k * a;
        d += k * c;
      } else {
        a += k * b;
        c += k * d;
      }
    }
    if (b != 0) return {a, b, c, d};
  }
}

/// Det -1 glue [[a, 1], [a d + 1, d]] with a >= lo and d <= -lo: both slopes
/// it contributes are at least lo, so charges dominate reciprocal sums.
inline seifert::GluingMatrix dominant_glue(Rng& rng, long long lo = 3, long long hi = 9) {
  const long long a = uniform(rng, lo, hi);
  const long long d = -uniform(rng, lo, hi);
  return {a, 1, a * d + 1, d};
}

/// Random connected simple graph on n vertices: a random tree plus extras.
inline std::vector<std::pair<std::size_t, std::size_t>> random_connected_graph(Rng& rng, std::size_t n,
                                                                               std::size_t extra) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(v) - 1));
    edges.insert({u, v});
  }
  for (std::size_t tries = 0; tries < 4 * extra && edges.size() < n - 1 + extra; ++tries) {
    auto u = static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(n) - 1));
    auto v = static_cast<std::size_t>(uniform(rng, 0, static_cast<long long>(n) - 1));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    edges.insert({u, v});
  }
  std::vector<std::pair<std::size_t, std::size_t>> out(edges.begin(), edges.end());
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline std::string block_name(std::size_t i) { return "b" + std::to_string(i); }

/// Valid closed manifold with n blocks; `dominant` selects SDD gluings.
inline seifert::GraphManifold random_manifold(Rng& rng, std::size_t n, std::size_t extra, bool dominant) {
  seifert::GraphManifold m;
  for (std::size_t i = 0; i < n; ++i) {
    m.add_block({block_name(i), static_cast<int>(uniform(rng, 2, 4)), 0});
  }
  for (const auto& [u, v] : random_connected_graph(rng, n, extra)) {
    const bool flip = uniform(rng, 0, 1) == 1;
    m.add_edge(flip ? v : u, flip ? u : v, dominant ? dominant_glue(rng) : random_glue(rng));
  }
  return m;
}

}  // namespace oracle

#endif  // SEIFERT_TESTS_ORACLES_HPP
