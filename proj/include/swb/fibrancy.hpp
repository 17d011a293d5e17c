#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "swb/expr.hpp"
#include "swb/realize.hpp"
#include "swb/report.hpp"
#include "swb/rng.hpp"

namespace swb::fibrancy {

using StructureError = expr::StructureError;

/// A diffeology presented by a generating family of plots into a fixed
/// carrier R^d. The flag records whether the family presents a subspace of
/// the carrier or the quotient of the disjoint plot domains; no sampled
/// check in this workbench distinguishes the two, so it is carried as
/// metadata only.
struct GeneratedDiffeology {
  std::string name;
  int carrier_dim = 0;
  std::vector<expr::SmoothMap> generators;
  bool sub_presentation = false;

  /// Every generator must land in the carrier.
  void validate() const;
};

/// R^n with the diffeology generated by the coordinate m-plane inclusions,
/// one per m-element subset of the coordinates.
GeneratedDiffeology coordinate_plane_diffeology(int n, int m);

/// The half line [0, inf) presented by the single plot x -> |x|^2 on R^n.
GeneratedDiffeology squared_norm_halfline(int n);

/// Boundary data on the union of coordinate hyperplanes of R^n: piece i
/// (0-based) is a smooth map on {x_{i+1} = 0}, parametrized by the
/// remaining coordinates in their original order. A smooth map off the
/// glued union is exactly such a family agreeing on the pairwise
/// intersections.
struct HornData {
  int n = 0;
  std::vector<expr::SmoothMap> pieces;

  int out_dim() const;
  /// Piece count, arities and output dimensions must match n.
  void validate() const;
};

/// The affine chart of the i-th coordinate hyperplane: inserts a zero in
/// slot i (0-based).
expr::SmoothMap hyperplane_inclusion(int n, int i);

/// The hyperplane restrictions of a map defined on all of R^n.
HornData restrict_to_horn(const expr::SmoothMap& g);

/// Sample each pairwise intersection {x_i = x_j = 0} and compare the two
/// pieces meeting there.
VerificationReport check_horn_compat(const HornData& f, Rng rng, int samples = 200,
                                     double tol = 1e-12);

/// The signed inclusion-exclusion extension of compatible horn data: a sum
/// over the proper coordinate subsets S of (-1)^{n-|S|+1} times the data
/// evaluated after zeroing every coordinate outside S. Its restriction to
/// each hyperplane reproduces the given piece. Incompatible data is
/// rejected up front.
expr::SmoothMap abelian_horn_filler(const HornData& f, Rng rng = Rng(2026),
                                    double tol = 1e-12);

nlohmann::json to_json(const HornData& f);
HornData horn_from_json(const nlohmann::json& j);

/// Two triangles glued along their slanted edges into a circle, with one
/// chart map per triangle onto the unit circle in R^2. Chart a winds the
/// left triangle through the lower half turn, chart b continues through
/// the upper one; they agree on both glued edges.
struct CircleModel {
  realize::CellComplex complex;
  expr::SmoothMap chart_a;
  expr::SmoothMap chart_b;
  sset::SimplexRef triangle_a;
  sset::SimplexRef triangle_b;

  /// Chart value at a point of the realization, lifted into a triangle
  /// chart when the point sits on a vertex or an edge.
  std::vector<double> value(const realize::RealPoint& p) const;
};

CircleModel circle_model();

/// Chart components of the section branch over one triangle: a curve in
/// theta with components (x, y, z) summing to one. The middle component
/// blends between the edge-riding line 1 - |theta| near the slanted edges
/// and the constant 1/2 near theta = 0; blend=false keeps the raw line,
/// which rides the same edges but kinks at zero.
expr::SmoothMap section_branch(double epsilon, bool blend = true);

/// The section of the circle charts: a point of triangle a for theta in
/// [-1/2, 1/2], of triangle b for theta in [1/2, 3/2], theta reduced mod 2.
realize::RealPoint circle_section(double theta, double epsilon);

/// Checks that the section splits the chart maps: chart(section(theta))
/// returns the circle point of theta at every sample, the branch switches
/// land in the same glued class, the section rides the slanted edges
/// exactly near the switches, one-sided first derivatives agree across
/// them, and the curve passes a finite-difference smoothness probe.
/// blend=false runs the same checks on the kinked section and fails.
VerificationReport verify_circle_retract(double epsilon, int budget, Rng rng,
                                         bool blend = true);

/// Forced second-order data at the origin for a non-negative extension of
/// the squared-difference boundary family, and the diagonal composite it
/// contradicts.
struct HalflineObstruction {
  Eigen::VectorXd forced_gradient;
  Eigen::MatrixXd forced_hessian;
  long long diag_second_exact = 0;  // second derivative of t -> F(t,t,t) at 0
  double diag_second_jets = 0.0;    // the same number assembled from piece jets
  bool extension_impossible = false;
  VerificationReport report;
};

/// A smooth non-negative function restricting to (x_j - x_k)^2 on the three
/// coordinate hyperplanes of R^3 would have a strictly negative second
/// derivative along the diagonal at the origin; the report carries the
/// exact and the sampled arithmetic plus a reference candidate realizing
/// the boundary data with the forced negativity.
HalflineObstruction halfline_obstruction();

/// Jacobian rank analysis of a filler candidate for a diffeology whose
/// plots factor through dimension m: agreeing with the identity on every
/// hyperplane forces full rank at the origin, while the factorization caps
/// the rank at m.
struct RankObstruction {
  Eigen::MatrixXd jacobian;
  std::vector<double> singular_values;
  int measured_rank = 0;
  int required_rank = 0;
  int factor_bound = -1;  // -1 when no factorization is declared
  bool boundary_identity_holds = false;
  bool contradiction = false;
  VerificationReport report;
};

/// Pass m < 0 when the candidate does not claim any factorization.
RankObstruction rank_obstruction(const expr::SmoothMap& F,
                                 const GeneratedDiffeology& plots, int n, int m,
                                 Rng rng = Rng(7), int samples = 200);

/// One full turn: t -> (cos 2 pi t, sin 2 pi t).
expr::SmoothMap winding_projection();

/// Filling circle-valued boundary data through the winding projection.
/// Pieces are given by phase representatives measured in full turns;
/// honest circle data agrees on intersections up to whole turns, so each
/// piece is shifted by an integer to agree with the others at the origin
/// before the vector-valued filler runs. Non-integer mismatches are
/// rejected.
struct BundleLift {
  expr::SmoothMap phase{0, {}};
  expr::SmoothMap circle_map{0, {}};
  std::vector<long long> shifts;
  VerificationReport report;
};

BundleLift lift_horn_through_bundle(const HornData& phases, Rng rng,
                                    int samples = 1000);

/// Retraction of R^n onto the neighbourhood V = {prod x_i^2 < delta^2} of
/// the coordinate hyperplanes: scales each point by one minus a cutoff of
/// prod x_i^2 / delta^2. The scale is exactly one on the hyperplanes and
/// the image of every point lands back in V or at the origin.
struct DopenRetraction {
  expr::SmoothMap map{0, {}};
  expr::SmoothMap scale{0, {}};
  double delta = 0.0;
  VerificationReport report;
};

DopenRetraction dopen_retraction(int n, double delta, double epsilon, Rng rng,
                                 int samples = 10000);

/// The standard profile for the loop retract: phi(2t) phi(2 - 2t), exactly
/// one at t = 1/2 and exactly zero outside (0, 1).
expr::SmoothMap loop_bump(double epsilon = 0.25);

/// Check that y -> (t -> psi(t) y) embeds the hyperplane arrangement into
/// based loops and that evaluation at 1/2 undoes it: H(y)(1/2) = y for
/// sampled y on each hyperplane and H(y)(0) = H(y)(1) = 0. Throws when psi
/// breaks its own contract.
VerificationReport loop_retract_H(int n, const expr::SmoothMap& psi, Rng rng,
                                  int samples = 1000);

}  // namespace swb::fibrancy
