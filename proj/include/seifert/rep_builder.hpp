#ifndef SEIFERT_REP_BUILDER_HPP
#define SEIFERT_REP_BUILDER_HPP

// Vertex faithful representations of tree-shaped graph manifolds.
//
// A block of genus g with l boundary tori has fundamental group
//
//     < a_1, b_1, ..., a_g, b_g, c_1, ..., c_l, f | prod [a_i, b_i] = c_1 ... c_l, f central >
//
// and the surface part is free of rank 2g + l - 1 when l >= 1. The root block
// gets a Schottky image of that free group, witnessed by a ping-pong
// certificate, and a nonzero central fiber; this is faithful. Every other
// block receives an Abelian image forced on its parent torus by the gluing
// matrix and chosen in a centralizer elsewhere.
//
// The torus of block v facing w has basis (f, z) where z is the boundary
// curve c_j facing w. Edge compatibility under G_{v,w} = [[a, b], [c, d]] is
//
//     rho_v(f) = rho_w(f)^a rho_w(z)^b,    rho_v(z) = rho_w(f)^c rho_w(z)^d.
//
// Boundaries of a block are ordered: glued ones by neighbour id, then free ones.

#include "seifert/manifold.hpp"
#include "seifert/motion_group.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seifert {

struct BlockPresentation {
  std::string id;
  int genus = 2;
  std::vector<std::optional<std::string>> boundaries;  ///< neighbour per c_j; nullopt for a free torus

  std::size_t boundary_count() const { return boundaries.size(); }
  /// Rank of the free surface group; requires at least one boundary.
  std::size_t free_rank() const { return 2 * static_cast<std::size_t>(genus) + boundaries.size() - 1; }
  std::optional<std::size_t> boundary_facing(std::string_view neighbor) const;
  /// a1, b1, ..., ag, bg, c1, ..., cl, f
  std::vector<std::string> generator_names() const;
};

BlockPresentation presentation_of(const GraphManifold& m, BlockId v);

/// Closed arc {start + s : 0 <= s <= length} of RP^1, angles taken mod pi.
struct Arc {
  double start = 0.0;
  double length = 0.0;
  /// Signed position of theta along the arc, in [0, pi).
  double offset(double theta) const;
};

/// Generator k maps the complement of repelling[k] into attracting[k] and its
/// inverse maps the complement of attracting[k] into repelling[k]; all arcs
/// are pairwise disjoint.
struct PingPongCertificate {
  std::vector<std::string> generators;
  std::vector<Arc> attracting;
  std::vector<Arc> repelling;
  double margin = 0.0;  ///< smallest inclusion or separation slack, in radians
};

/// Recomputes the certificate's slack for the given generator images:
/// positive iff every inclusion is strict and the arcs are disjoint.
double ping_pong_margin(const std::vector<ProjClass>& generators, const PingPongCertificate& cert);

struct BlockRep {
  BlockPresentation presentation;
  std::vector<MotionElement> a, b, c;
  MotionElement fiber;
  bool root = false;
  std::optional<std::size_t> parent_boundary;  ///< index into c of the torus facing the parent
  std::size_t closing = 0;                     ///< index into c of the boundary solved from the relation
  std::optional<PingPongCertificate> ping_pong;

  /// The generators checked by the ping-pong certificate: a, b interleaved,
  /// then every c_j except the closing one.
  std::vector<MotionElement> free_generators() const;
};

struct Representation {
  std::string root;
  double fiber_central = 0.0;
  double spread = 0.0;
  std::vector<BlockRep> blocks;  ///< root first, then in extension order

  const BlockRep* find(std::string_view id) const;
};

class RepBuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedParams {
  double fiber_central = 1.0;
  /// Seed eigenvalue over the least eigenvalue for which the ping-pong
  /// inclusions hold; must exceed 1.
  double spread = 2.0;
  /// Minimum ping-pong slack accepted by the seed.
  double min_margin = 1e-6;
};

/// Faithful image of a block with at least one boundary. The closing boundary
/// is the last free one, else the last one, so glued tori carry single free
/// generators whenever a free torus exists. Throws
/// std::invalid_argument for a zero fiber, spread <= 1 or no boundary, and
/// RepBuildError when the ping-pong slack is below params.min_margin.
BlockRep seed_faithful_rep(const BlockPresentation& block, const SeedParams& params = {});

/// Images of the child's own torus basis on the shared torus.
struct TorusImages {
  MotionElement f, z;
};

/// Applies G_{child,parent} (the gluing matrix pointing into the parent) to
/// the parent's torus images.
TorusImages transport(const TorusImages& parent, const GluingMatrix& child_to_parent);

/// Abelian image of a child block. `determined` are its images on the parent
/// torus (boundary `parent_boundary`). Surface generators go to the identity;
/// boundaries other than the parent's and the closing one take
/// `free_choices` in order, or members of the centralizer of the fiber image
/// when none are given; the closing boundary (the last free one, else the
/// last remaining one) is the inverse of the product of the others. Throws
/// std::invalid_argument if a free choice does not commute with the fiber
/// image or the count is wrong, RepBuildError if no boundary can close.
BlockRep extend_abelian(const TorusImages& determined, const BlockPresentation& child,
                        std::size_t parent_boundary, const std::vector<MotionElement>& free_choices = {});

/// Seeds the root and extends Abelianly along the tree. Requires a valid
/// manifold whose dual graph is a tree, a root with at least one boundary and
/// a free boundary at every other leaf; throws RepBuildError otherwise.
Representation extend_along_tree(const GraphManifold& m, BlockId root, const SeedParams& params = {});

struct VerificationCheck {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;  ///< relation, fiber, edges, abelian, faithful
  bool ok() const;
  const VerificationCheck& check(std::string_view name) const;
};

/// Checks the representation against m within eps (relative):
/// relation - prod [a_i, b_i] = c_1 ... c_l at every block;
/// fiber - the fiber image commutes with every generator image;
/// edges - gluing compatibility on every edge, both basis vectors;
/// abelian - all generator images commute on non-root blocks;
/// faithful - root ping-pong slack positive and fiber central coordinate nonzero.
VerificationReport verify_rep(const GraphManifold& m, const Representation& r, double eps = 1e-9);

/// JSON with reals as hex floats, so reading it back is exact.
std::string dump_representation(const Representation& r);
/// Throws std::invalid_argument on malformed input.
Representation parse_representation(const std::string& text);

}  // namespace seifert

#endif  // SEIFERT_REP_BUILDER_HPP
