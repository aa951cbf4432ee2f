#include "seifert/motion_group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace seifert {

namespace {

double max_abs(const Eigen::Matrix2d& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::Matrix2d sign_normalized(Eigen::Matrix2d m) {
  const double threshold = 1e-12 * std::max(1.0, max_abs(m));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (std::abs(m(i, j)) > threshold) {
        if (m(i, j) < 0) m = -m;
        return m;
      }
    }
  }
  return m;
}

/// Below this size ad - bc is accurate to about 1e-12; above it, cancellation
/// leaves the computed determinant meaningless.
bool determinant_reliable(const Eigen::Matrix2d& m) {
  return std::abs(m(0, 0) * m(1, 1)) + std::abs(m(0, 1) * m(1, 0)) <= 1e4;
}

/// Traceless part as a vector of sl(2,R): ((a - d) / 2, b, c).
Eigen::Vector3d traceless_part(const Eigen::Matrix2d& m) {
  return {(m(0, 0) - m(1, 1)) / 2.0, m(0, 1), m(1, 0)};
}

}  // namespace

ProjClass ProjClass::from_matrix(const Eigen::Matrix2d& m) {
  if (!m.allFinite()) throw std::domain_error("matrix has non-finite entries");
  const double det = m.determinant();
  if (!(det > 0.0)) throw std::domain_error("matrix does not have positive determinant");
  return ProjClass(sign_normalized(m / std::sqrt(det)));
}

ProjClass ProjClass::from_normalized(const Eigen::Matrix2d& m) {
  if (m.allFinite() && sign_normalized(m) == m &&
      (!determinant_reliable(m) || std::abs(m.determinant() - 1.0) <= 1e-9)) {
    return ProjClass(m);
  }
  return from_matrix(m);
}

ProjClass ProjClass::rotation(double r) {
  const double c = std::cos(std::numbers::pi * r);
  const double s = std::sin(std::numbers::pi * r);
  Eigen::Matrix2d m;
  m << c, -s, s, c;
  return from_matrix(m);
}

ProjClass ProjClass::diagonal(double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("diagonal entry must be positive");
  Eigen::Matrix2d m;
  m << lambda, 0.0, 0.0, 1.0 / lambda;
  return from_matrix(m);
}

ProjClass operator*(const ProjClass& a, const ProjClass& b) {
  // A product of det-1 factors is not rescaled: for long words ad - bc is
  // dominated by cancellation, and otherwise the drift is a few ulps.
  const Eigen::Matrix2d m = a.rep_ * b.rep_;
  if (!m.allFinite()) throw std::domain_error("product overflows");
  return ProjClass(sign_normalized(m));
}

ProjClass inverse(const ProjClass& a) {
  Eigen::Matrix2d m;
  m << a.rep_(1, 1), -a.rep_(0, 1), -a.rep_(1, 0), a.rep_(0, 0);
  return ProjClass(sign_normalized(m));
}

double distance(const ProjClass& a, const ProjClass& b) {
  const Eigen::Matrix2d& x = a.matrix();
  const Eigen::Matrix2d& y = b.matrix();
  const double d = std::min(max_abs(x - y), max_abs(x + y));
  return d / std::max({1.0, max_abs(x), max_abs(y)});
}

bool is_identity(const ProjClass& a, double eps) {
  return distance(a, ProjClass::identity()) <= eps;
}

double act_on_direction(const ProjClass& a, double theta) {
  const Eigen::Vector2d v = a.matrix() * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  double phi = std::fmod(std::atan2(v.y(), v.x()), std::numbers::pi);
  if (phi < 0) phi += std::numbers::pi;
  if (phi >= std::numbers::pi) phi = 0.0;
  return phi;
}

double lift_at_zero(const ProjClass& a, double eps_angle) {
  const double x = act_on_direction(a, 0.0) / std::numbers::pi;
  return (x >= 1.0 - eps_angle) ? 0.0 : x;
}

double lift_eval(const ProjClass& a, double y, double eps_angle) {
  const double base = lift_at_zero(a, eps_angle);
  if (y == 0.0) return base;
  // a preserves orientation, so the image of the direction at pi*y lies
  // counterclockwise of the image of e_0 by an angle in (0, pi).
  const Eigen::Vector2d v0 = a.matrix().col(0);
  const Eigen::Vector2d vy =
      a.matrix() * Eigen::Vector2d(std::cos(std::numbers::pi * y), std::sin(std::numbers::pi * y));
  const double cross = v0.x() * vy.y() - v0.y() * vy.x();
  const double dot = v0.dot(vy);
  const double delta = std::max(0.0, std::atan2(cross, dot) / std::numbers::pi);
  return base + delta;
}

std::int64_t cocycle(const ProjClass& a, const ProjClass& b, double eps_angle) {
  const double y = lift_at_zero(b, eps_angle);
  const double composed = lift_eval(a, y, eps_angle);
  const double direct = lift_at_zero(a * b, eps_angle);
  return std::llround(composed - direct);
}

ProjClass centralizer_family(const ProjClass& ref, double s) {
  if (is_identity(ref)) throw std::invalid_argument("centralizer of the identity is everything");
  const Eigen::Matrix2d& m = ref.matrix();
  const double half_trace = m.trace() / 2.0;
  const Eigen::Matrix2d traceless = m - half_trace * Eigen::Matrix2d::Identity();
  const double det0 = 1.0 - half_trace * half_trace;  // det of the traceless part
  double alpha = 1.0;
  double beta = s;
  if (std::abs(std::abs(m.trace()) - 2.0) <= kDefaultTolerances.trace) {
    // parabolic: (I + s*N) has det 1 for nilpotent N
  } else if (det0 < 0) {
    alpha = std::cosh(s);
    beta = std::sinh(s) / std::sqrt(-det0);
  } else {
    alpha = std::cos(s);
    beta = std::sin(s) / std::sqrt(det0);
  }
  return ProjClass::from_matrix(alpha * Eigen::Matrix2d::Identity() + beta * traceless);
}

MotionElement MotionElement::central(const Rational& t) { return exact(Rational(0), t); }

MotionElement MotionElement::lifted_rotation(const Rational& r) {
  return exact(r, Rational(r.floor()));
}

MotionElement MotionElement::exact(const Rational& rotation, const Rational& central) {
  MotionElement out;
  const Rational turns = rotation.frac();
  out.proj_ = turns.sign() == 0 ? ProjClass::identity() : ProjClass::rotation(turns.to_double());
  out.central_ = central.to_double();
  out.exact_ = ExactCoords{turns, central};
  return out;
}

ExactTag MotionElement::exact_tag() const {
  if (!exact_) return ExactTag::None;
  return exact_->rotation.sign() == 0 ? ExactTag::ExactCentral : ExactTag::ExactRotation;
}

MotionElement mot_mul(const MotionElement& a, const MotionElement& b, const Tolerances& tol) {
  if (a.exact_coords() && b.exact_coords()) {
    const auto& x = *a.exact_coords();
    const auto& y = *b.exact_coords();
    const Rational turns = x.rotation + y.rotation;
    return MotionElement::exact(turns, x.central + y.central + Rational(turns.floor()));
  }
  const auto c = cocycle(a.proj(), b.proj(), tol.angle);
  return MotionElement(a.proj() * b.proj(),
                       a.central_coord() + b.central_coord() + static_cast<double>(c));
}

MotionElement mot_inv(const MotionElement& a, const Tolerances& tol) {
  if (const auto& x = a.exact_coords()) {
    if (x->rotation.sign() == 0) return MotionElement::exact(Rational(0), -x->central);
    return MotionElement::exact(Rational(1) - x->rotation, -x->central - Rational(1));
  }
  ProjClass inv = inverse(a.proj());
  // c(a, a^-1) = F_a(y) with y = F_{a^-1}(0) in [0, 1). F_a(y) is an integer
  // in [F_a(0), F_a(0) + 1), so it is 0 when y = 0 and 1 otherwise.
  const std::int64_t c = lift_at_zero(inv, tol.angle) == 0.0 ? 0 : 1;
  return MotionElement(std::move(inv), -a.central_coord() - static_cast<double>(c));
}

MotionElement mot_pow(const MotionElement& a, std::int64_t n, const Tolerances& tol) {
  MotionElement base = n < 0 ? mot_inv(a, tol) : a;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1u : static_cast<std::uint64_t>(n);
  MotionElement acc = MotionElement::identity();
  if (a.exact_coords()) acc = MotionElement::central(Rational(0));
  while (e > 0) {
    if (e & 1u) acc = mot_mul(acc, base, tol);
    e >>= 1u;
    if (e > 0) base = mot_mul(base, base, tol);
  }
  return acc;
}

namespace {

/// Eigenvector of m for eigenvalue mu, from whichever row gives the longer vector.
Eigen::Vector2d eigenvector(const Eigen::Matrix2d& m, double mu) {
  const Eigen::Vector2d from_top(m(0, 1), mu - m(0, 0));
  const Eigen::Vector2d from_bottom(mu - m(1, 1), m(1, 0));
  const Eigen::Vector2d v = from_top.norm() >= from_bottom.norm() ? from_top : from_bottom;
  return v / v.norm();
}

/// Eigenvalue of m on the unit vector v, or nullopt if v is not an eigenvector
/// relative to the size of m.
std::optional<double> eigenvalue_on(const Eigen::Matrix2d& m, const Eigen::Vector2d& v) {
  const Eigen::Vector2d w = m * v;
  const double e = w.dot(v);
  if ((w - e * v).norm() > 1e-9 * std::max(1.0, max_abs(m))) return std::nullopt;
  return e;
}

}  // namespace

MotionElement commuting_product(const std::vector<std::pair<MotionElement, std::int64_t>>& factors,
                                const Tolerances& tol) {
  const ProjClass* axis = nullptr;
  for (const auto& [x, n] : factors) {
    if (classify(x.proj(), tol) == ElementClass::Hyperbolic &&
        (!axis || std::abs(x.proj().trace()) > std::abs(axis->trace()))) {
      axis = &x.proj();
    }
  }
  auto plain = [&] {
    MotionElement acc = MotionElement::identity();
    if (!factors.empty() && factors.front().first.exact_coords()) acc = MotionElement::central(Rational(0));
    for (const auto& [x, n] : factors) acc = mot_mul(acc, mot_pow(x, n, tol), tol);
    return acc;
  };
  if (!axis) return plain();

  const Eigen::Matrix2d& h = axis->matrix();
  const double half = h.trace() / 2.0;
  const double mu = half + std::copysign(std::sqrt(half * half - 1.0), half);
  const Eigen::Vector2d up = eigenvector(h, mu);
  const Eigen::Vector2d down = eigenvector(h, 1.0 / mu);
  // Every factor fixes the directions p, q of `up` and `down`. The fixed
  // point lift of such an element keeps 0 between the lifts of p and q
  // around it, so F^0 is that lift plus 0 or 1 turns according to the side
  // on which F^0(0) lands; near a fixed point the nearer side decides.
  // Central coordinate plus that shift is the translation number, which is
  // additive on the axis subgroup.
  auto turns = [](const Eigen::Vector2d& v) {
    double y = std::atan2(v.y(), v.x()) / std::numbers::pi;
    y -= std::floor(y);
    return y >= 1.0 ? 0.0 : y;
  };
  const double lo = std::min(turns(up), turns(down));
  const double hi = std::max(turns(up), turns(down));
  auto shift = [&](const ProjClass& a) -> std::int64_t {
    const double x0 = lift_at_zero(a, tol.angle);
    if (x0 <= lo) return 0;
    if (x0 >= hi) return 1;
    return x0 - lo <= hi - x0 ? 0 : 1;
  };

  // log|eigenvalue| on `up`, read off the eigenvector where |e| >= 1 (the
  // other one is computed with cancellation); signs do not matter in PSL.
  double log_up = 0.0;
  double translation = 0.0;
  for (const auto& [x, n] : factors) {
    const auto e_up = eigenvalue_on(x.proj().matrix(), up);
    const auto e_down = eigenvalue_on(x.proj().matrix(), down);
    if (!e_up || !e_down) return plain();
    const double l = std::abs(*e_up) >= std::abs(*e_down) ? std::log(std::abs(*e_up)) : -std::log(std::abs(*e_down));
    log_up += static_cast<double>(n) * l;
    translation += static_cast<double>(n) * (x.central_coord() + static_cast<double>(shift(x.proj())));
  }
  Eigen::Matrix2d basis;
  basis.col(0) = up;
  basis.col(1) = down;
  const Eigen::Matrix2d diag = Eigen::Vector2d(std::exp(log_up), std::exp(-log_up)).asDiagonal();
  const Eigen::Matrix2d m = basis * diag * basis.inverse();
  if (!m.allFinite()) throw std::domain_error("product overflows");
  const ProjClass result = ProjClass::from_normalized(sign_normalized(m));
  return MotionElement(result, translation - static_cast<double>(shift(result)));
}

MotionElement commuting_word(const MotionElement& x, std::int64_t p, const MotionElement& y, std::int64_t q,
                             const Tolerances& tol) {
  return commuting_product({{x, p}, {y, q}}, tol);
}

MotionElement mot_commutator(const MotionElement& a, const MotionElement& b,
                             const Tolerances& tol) {
  return mot_mul(mot_mul(a, b, tol), mot_mul(mot_inv(a, tol), mot_inv(b, tol), tol), tol);
}

bool approx_equal(const MotionElement& a, const MotionElement& b, double eps) {
  const double scale = std::max({1.0, std::abs(a.central_coord()), std::abs(b.central_coord())});
  return distance(a.proj(), b.proj()) <= eps &&
         std::abs(a.central_coord() - b.central_coord()) <= eps * scale;
}

std::string to_string(ElementClass c) {
  switch (c) {
    case ElementClass::Central: return "central";
    case ElementClass::Elliptic: return "elliptic";
    case ElementClass::Hyperbolic: return "hyperbolic";
    case ElementClass::Parabolic: return "parabolic";
  }
  return "?";
}

ElementClass classify(const ProjClass& a, const Tolerances& tol) {
  if (is_identity(a, tol.comm)) return ElementClass::Central;
  const double t = std::abs(a.trace());
  if (std::abs(t - 2.0) <= tol.trace) return ElementClass::Parabolic;
  return t < 2.0 ? ElementClass::Elliptic : ElementClass::Hyperbolic;
}

ElementClass classify(const MotionElement& a, const Tolerances& tol) {
  return classify(a.proj(), tol);
}

bool commutes(const ProjClass& a, const ProjClass& b, const Tolerances& tol) {
  // AB - BA is the bracket of the traceless parts, which vanishes iff they
  // are parallel. The sine of their angle is relative to each factor alone,
  // so the test stays meaningful for products too large to multiply out.
  const Eigen::Vector3d u = traceless_part(a.matrix());
  const Eigen::Vector3d v = traceless_part(b.matrix());
  if (u.norm() <= tol.comm * std::max(1.0, max_abs(a.matrix())) ||
      v.norm() <= tol.comm * std::max(1.0, max_abs(b.matrix()))) {
    return true;
  }
  return u.cross(v).norm() <= tol.comm * u.norm() * v.norm();
}

bool commutes(const MotionElement& a, const MotionElement& b, const Tolerances& tol) {
  return commutes(a.proj(), b.proj(), tol);
}

MotionElement central_root(const MotionElement& f, std::int64_t m, const Tolerances& tol) {
  if (m < 1) throw std::invalid_argument("root degree must be positive");
  if (classify(f, tol) != ElementClass::Central) {
    throw std::invalid_argument("central_root needs a central element");
  }
  const Rational t = f.exact_coords() ? f.exact_coords()->central
                                      : Rational::from_double(f.central_coord());
  return MotionElement::central(t / Rational(m));
}

ProjectiveOrder projective_order(const MotionElement& a, std::int64_t denominator_bound,
                                 const Tolerances& tol) {
  const ElementClass cls = classify(a, tol);
  if (cls == ElementClass::Central) return ProjectiveOrder::finite(1);
  if (a.exact_tag() == ExactTag::ExactRotation) {
    return ProjectiveOrder::finite(a.exact_coords()->rotation.den().to_int64());
  }
  if (cls == ElementClass::Hyperbolic || cls == ElementClass::Parabolic) {
    return ProjectiveOrder::infinite();
  }
  // Elliptic: conjugate to k(r) with |tr| = 2|cos(pi r)|; k(p/q) has order q.
  const double half = std::min(1.0, std::abs(a.proj().trace()) / 2.0);
  const double r = std::acos(half) / std::numbers::pi;  // in [0, 1/2]
  for (std::int64_t q = 1; q <= denominator_bound; ++q) {
    const double p = std::round(r * static_cast<double>(q));
    if (std::abs(r - p / static_cast<double>(q)) <= tol.rot) return ProjectiveOrder::finite(q);
  }
  return ProjectiveOrder::unknown();
}

}  // namespace seifert
