#ifndef SEIFERT_MOTION_GROUP_HPP
#define SEIFERT_MOTION_GROUP_HPP

// The Seifert motion group, realized as the central extension
//
//     0 -> R -> Mot -> PSL(2,R) -> 1
//
// with elements stored as pairs (A, t), A in PSL(2,R) and t real, and product
//
//     (A, t) * (B, u) = (AB, t + u + c(A, B)),
//
// where c is the integer cocycle measuring how lifts of the circle actions
// compose. The lift of A acting on RP^1 = R/Z (direction angle theta mapped to
// theta/pi) is normalized so that F_A(0) lies in [0, 1). With that
// convention the lift of the rotation k(1) is (identity, 1): one full turn of
// RP^1 is one unit of the center.

#include "seifert/numeric.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace seifert {

struct Tolerances {
  double det = 1e-12;     ///< |det - 1| allowed after renormalization
  double trace = 1e-9;    ///< half-width of the parabolic band around |tr| = 2
  double comm = 1e-9;     ///< commutator / identity distance
  double rot = 1e-9;      ///< rotation-number match for numeric finite order
  double angle = 1e-12;   ///< branch-cut snap for lift normalization
};

inline constexpr Tolerances kDefaultTolerances{};

/// An element of PSL(2,R), stored as a det-1 representative whose first
/// entry (row-major) that is not negligibly small is positive.
class ProjClass {
 public:
  ProjClass() : rep_(Eigen::Matrix2d::Identity()) {}

  /// Rescales to det 1 and normalizes the sign. Throws std::domain_error if
  /// det <= 0 or the entries are not finite.
  static ProjClass from_matrix(const Eigen::Matrix2d& m);
  /// Keeps m bit for bit when it is already a normalized representative
  /// (used when reading stored matrices back); otherwise from_matrix(m).
  static ProjClass from_normalized(const Eigen::Matrix2d& m);
  static ProjClass identity() { return {}; }
  /// k(r): rotation of the plane by pi * r.
  static ProjClass rotation(double r);
  static ProjClass diagonal(double lambda);

  const Eigen::Matrix2d& matrix() const { return rep_; }
  double trace() const { return rep_.trace(); }

 private:
  explicit ProjClass(const Eigen::Matrix2d& m) : rep_(m) {}
  friend ProjClass operator*(const ProjClass& a, const ProjClass& b);
  friend ProjClass inverse(const ProjClass& a);

  Eigen::Matrix2d rep_;
};

ProjClass operator*(const ProjClass& a, const ProjClass& b);
ProjClass inverse(const ProjClass& a);

/// Sign-insensitive max-norm distance, relative to max(1, |a|, |b|).
double distance(const ProjClass& a, const ProjClass& b);
bool is_identity(const ProjClass& a, double eps = kDefaultTolerances.comm);

/// Image of the direction angle theta (mod pi) under a; result in [0, pi).
double act_on_direction(const ProjClass& a, double theta);

/// F_a(0) in [0, 1).
double lift_at_zero(const ProjClass& a, double eps_angle = kDefaultTolerances.angle);
/// F_a(y) for y in [0, 1), consistent with lift_at_zero.
double lift_eval(const ProjClass& a, double y, double eps_angle = kDefaultTolerances.angle);

/// c(a, b) = F_a(F_b(0)) - F_ab(0).
std::int64_t cocycle(const ProjClass& a, const ProjClass& b,
                     double eps_angle = kDefaultTolerances.angle);

/// Element alpha*I + beta*(ref - tr(ref)/2 * I) of det 1, i.e. a point on the
/// one-parameter subgroup of PSL(2,R) that commutes with ref, at parameter s
/// (hyperbolic: cosh/sinh, elliptic: cos/sin, parabolic: 1/s). Requires ref
/// not the identity.
ProjClass centralizer_family(const ProjClass& ref, double s);

/// Exact coordinates of an element (k(rotation), central) with rotation in
/// [0, 1). Carried by elements built symbolically.
struct ExactCoords {
  Rational rotation;
  Rational central;
  friend bool operator==(const ExactCoords&, const ExactCoords&) = default;
};

enum class ExactTag { None, ExactRotation, ExactCentral };

class MotionElement {
 public:
  MotionElement() = default;
  MotionElement(ProjClass proj, double central) : proj_(std::move(proj)), central_(central) {}

  static MotionElement identity() { return {}; }
  /// (identity, t), tagged exact.
  static MotionElement central(const Rational& t);
  static MotionElement central(double t) { return central(Rational::from_double(t)); }
  /// The lift k~(r) = (k(frac r), floor r), tagged exact.
  static MotionElement lifted_rotation(const Rational& r);
  /// (k(rotation), central) with exact coordinates; rotation reduced into [0, 1).
  static MotionElement exact(const Rational& rotation, const Rational& central);

  const ProjClass& proj() const { return proj_; }
  double central_coord() const { return central_; }
  const std::optional<ExactCoords>& exact_coords() const { return exact_; }
  ExactTag exact_tag() const;

 private:
  ProjClass proj_;
  double central_ = 0.0;
  std::optional<ExactCoords> exact_;
};

MotionElement mot_mul(const MotionElement& a, const MotionElement& b,
                      const Tolerances& tol = kDefaultTolerances);
MotionElement mot_inv(const MotionElement& a, const Tolerances& tol = kDefaultTolerances);
MotionElement mot_pow(const MotionElement& a, std::int64_t n,
                      const Tolerances& tol = kDefaultTolerances);
/// x_1^n_1 ... x_k^n_k for pairwise commuting factors. When one of them is
/// hyperbolic the projection is evaluated on the shared eigenbasis, so large
/// powers that cancel keep full relative accuracy; the central coordinate
/// still comes from the integer cocycles of the plain product. Other cases
/// multiply directly.
MotionElement commuting_product(const std::vector<std::pair<MotionElement, std::int64_t>>& factors,
                                const Tolerances& tol = kDefaultTolerances);
/// commuting_product({{x, p}, {y, q}})
MotionElement commuting_word(const MotionElement& x, std::int64_t p, const MotionElement& y, std::int64_t q,
                             const Tolerances& tol = kDefaultTolerances);
/// a b a^-1 b^-1
MotionElement mot_commutator(const MotionElement& a, const MotionElement& b,
                             const Tolerances& tol = kDefaultTolerances);

inline MotionElement operator*(const MotionElement& a, const MotionElement& b) {
  return mot_mul(a, b);
}

/// Projective distance <= eps and |central difference| <= eps * max(1, |t|).
bool approx_equal(const MotionElement& a, const MotionElement& b, double eps);

enum class ElementClass { Central, Elliptic, Hyperbolic, Parabolic };
std::string to_string(ElementClass c);

ElementClass classify(const ProjClass& a, const Tolerances& tol = kDefaultTolerances);
ElementClass classify(const MotionElement& a, const Tolerances& tol = kDefaultTolerances);

/// Commutation in Mot reduces to commutation of the projective parts: the
/// traceless parts are parallel (sine of their angle <= tol.comm), or one is
/// negligible against its matrix.
bool commutes(const ProjClass& a, const ProjClass& b, const Tolerances& tol = kDefaultTolerances);
bool commutes(const MotionElement& a, const MotionElement& b,
              const Tolerances& tol = kDefaultTolerances);

/// The root (identity, t/m) of a central f = (identity, t). The result is
/// exact: its m-th power reproduces f's central coordinate exactly. Throws
/// std::invalid_argument if f is not central or m < 1.
MotionElement central_root(const MotionElement& f, std::int64_t m,
                           const Tolerances& tol = kDefaultTolerances);

struct ProjectiveOrder {
  enum class Kind { Finite, Infinite, UnknownNumeric };
  Kind kind = Kind::UnknownNumeric;
  std::int64_t order = 0;  ///< meaningful for Finite only

  static ProjectiveOrder finite(std::int64_t q) { return {Kind::Finite, q}; }
  static ProjectiveOrder infinite() { return {Kind::Infinite, 0}; }
  static ProjectiveOrder unknown() { return {Kind::UnknownNumeric, 0}; }
  friend bool operator==(const ProjectiveOrder&, const ProjectiveOrder&) = default;
};

ProjectiveOrder projective_order(const MotionElement& a, std::int64_t denominator_bound,
                                 const Tolerances& tol = kDefaultTolerances);

}  // namespace seifert

#endif  // SEIFERT_MOTION_GROUP_HPP
