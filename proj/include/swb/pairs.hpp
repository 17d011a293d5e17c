#pragma once

#include <string>
#include <vector>

#include "swb/report.hpp"
#include "swb/rng.hpp"
#include "swb/smoothcalc.hpp"

namespace swb::pairs {

using expr::SmoothMap;
using smoothcalc::PairSpec;

/// A two-sided deformation equivalence between pair charts: maps both ways,
/// their composites as single expression DAGs, and straight or radial
/// homotopies contracting each composite to the identity.
///
/// Both homotopies run from the composite at time 0 to the identity at
/// time 1, and both slide through maps of the respective pair the whole way.
struct Equivalence {
  std::string name;
  PairSpec src, dst;
  SmoothMap fwd;            // src chart to dst chart
  SmoothMap bwd;            // dst chart to src chart
  SmoothMap composite_src;  // bwd after fwd
  SmoothMap composite_dst;  // fwd after bwd
  SmoothMap homotopy_src;   // on src, last coordinate is time
  SmoothMap homotopy_dst;   // on dst
  std::vector<std::string> notes;

  Equivalence() : fwd(0, {}), bwd(0, {}), composite_src(0, {}), composite_dst(0, {}),
                  homotopy_src(0, {}), homotopy_dst(0, {}) {}
};

/// Walls of the plane against the thickened walls: inclusion one way, the
/// coordinatewise cutoff back, straight-line homotopies.
Equivalence equidef_walls_collar(int n, double eps);

/// Cube boundary against the thickened plane walls.
Equivalence equidef_cube_boundary_collar(int n, double eps);

/// Thickened cube boundary against the thickened plane walls.
Equivalence equidef_cube_collar_collar(int n, double eps);

/// Thickened barycentric chart against the thickened plane: a dilation about
/// the barycenter forward, the affine section back. Requires
/// eps_plane <= eps_simplex < 1/(n+1).
Equivalence equidef_simplex_collar_plane(int n, double eps_simplex, double eps_plane);

/// Barycentric boundary against its own thickening: inclusion forward,
/// cutoff-and-renormalize back. Requires eps < 1/(n+1) - 4e-3 so the largest
/// coordinate always clears the cutoff's flat zone.
Equivalence equidef_simplex_boundary_collar(int n, double eps);

/// Thickened disk boundary against the thickened plane: an affine blowup
/// forward, a scaled radial compression back, straight-line homotopies
/// (the inward composite is a positive radial multiple).
Equivalence equidef_disk_collar_plane(int n, double eps_disk, double eps_plane);

/// Disk with its boundary sphere against the disk with a boundary collar:
/// inclusion forward, radial retraction of the collar onto the sphere back.
Equivalence equidef_disk_sphere_collar(int n, double eps);

/// Sphere with closed upper hemisphere against sphere with the pole: the
/// equator raise collapses the hemisphere to the pole, sliding along a
/// flat-ended schedule.
Equivalence equator_raise(int n);

/// Thickened plane against a bounded chart of the sphere minus its pole,
/// via scaled stereographic projection.
Equivalence stereographic(int n, double eps);

/// The two sampled legs connecting the sphere-with-pole pair to the
/// thickened plane, with the intermediate restriction step recorded as a
/// note on the second leg.
std::vector<Equivalence> sphere_pole_chain(int n, double eps);

/// Run every layer of checks on one equivalence: both maps respect the
/// pairs, both homotopies end where they claim and stay maps of pairs on
/// every time slice.
VerificationReport verify_equivalence(const Equivalence& e, Rng rng, int samples,
                                      double tol = 1e-9);

/// Embed a chart into the next one up by inserting a zero coordinate at
/// `slot`.
SmoothMap face_embedding(int chart_dim, int slot);

/// Split the last chart coordinate by time: (x, t) keeps x_0..x_{d-2} and
/// replaces x_{d-1} by the pair (t x_{d-1}, (1-t) x_{d-1}). At the exact
/// time endpoints this is a face embedding, bit for bit.
SmoothMap prism_split(int chart_dim);

/// Paste two maps of equal shape into one map on the next chart up, split
/// along the locus where the two new coordinates agree. When all
/// coordinates are nonnegative, inserting a zero in the second-to-last
/// original slot recovers f exactly and inserting one at the end recovers
/// g exactly; off that region the recovery genuinely fails.
SmoothMap paste(const SmoothMap& f, const SmoothMap& g);

/// Interpolate f toward the constant basepoint map: exactly constant
/// wherever any coordinate sits at or below eps, full strength once every
/// coordinate reaches 3 eps.
SmoothMap basepoint_masked(const SmoothMap& f, double eps,
                           const std::vector<double>& basepoint);

}  // namespace swb::pairs
