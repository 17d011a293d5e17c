#pragma once

#include <functional>
#include <string>
#include <vector>

#include "swb/expr.hpp"
#include "swb/report.hpp"
#include "swb/rng.hpp"

namespace swb::smoothcalc {

using expr::Expr;
using expr::SmoothMap;

/// Smooth step that is exactly 0 on (-inf, eps] and exactly 1 on
/// [1-eps, inf), built from two flat bumps. Exactness holds in floating
/// point, not just on paper: past either shoulder one bump vanishes and the
/// quotient collapses to 0/positive or positive/positive-equal.
SmoothMap make_cutoff(double eps);

/// The same step applied to an arbitrary scalar argument.
Expr cutoff_expr(const Expr& t, double eps);

/// A pair (ambient space, distinguished subspace) presented in one chart.
///
/// Membership is scored by violation functions that return 0 inside and a
/// distance-like positive number outside, so verification can report how
/// badly a point misses. Samplers draw ambient points and subspace points;
/// subspace sampling is stratified over the natural strata (walls, faces,
/// collar depths) including exact boundary values.
struct PairSpec {
  std::string name;
  int dim = 0;       // coordinates of the chart
  double eps = 0.0;  // collar width when the pair is thickened, else 0
  std::function<double(const std::vector<double>&)> total_violation;
  std::function<double(const std::vector<double>&)> sub_violation;
  std::function<std::vector<double>(Rng&)> sample_total;
  std::function<std::vector<double>(Rng&)> sample_sub;
};

PairSpec pair_plane_walls(int n);                  // R^n with the walls x_i in {0,1}
PairSpec pair_plane_collar(int n, double eps);     // R^n with both collars per axis
PairSpec pair_cube_boundary(int n);                // [0,1]^n with its boundary
PairSpec pair_cube_collar(int n, double eps);      // [0,1]^n with a boundary collar
PairSpec pair_simplex_boundary(int n);             // plane sum x = 1 with min x_i = 0
PairSpec pair_simplex_collar(int n, double eps);   // plane sum x = 1 with min x_i <= eps
PairSpec pair_disk_sphere(int n);                  // unit ball with its sphere
PairSpec pair_disk_collar(int n, double eps);      // unit ball with radius >= 1 - eps
PairSpec pair_sphere_pole(int n);                  // unit sphere in R^{n+1} with the pole
PairSpec pair_sphere_hemisphere(int n);            // unit sphere with last coord >= 0

/// Check that f maps src's ambient space into dst's and src's subspace into
/// dst's, sampling both kinds of points.
VerificationReport verify_map_of_pairs(const SmoothMap& f, const PairSpec& src,
                                       const PairSpec& dst, Rng rng, int samples,
                                       double tol = 1e-9);

/// Check that f collapses src's subspace to one point.
VerificationReport verify_map_sends_sub_to_point(const SmoothMap& f, const PairSpec& src,
                                                 const std::vector<double>& basepoint,
                                                 Rng rng, int samples, double tol = 1e-9);

/// Check that H (last input coordinate is time) restricts to f at time 0 and
/// g at time 1, and that every time slice on a 33-point grid maps the pair
/// into the pair.
VerificationReport verify_homotopy(const SmoothMap& H, const PairSpec& src,
                                   const PairSpec& dst, const SmoothMap& f,
                                   const SmoothMap& g, Rng rng, int samples,
                                   double tol = 1e-9);

/// Sample near the agreement loci of every piecewise node in f and check the
/// two branches carry equal value, gradient, and Hessian there. Points come
/// from locus_sampler; a point counts for a node when its gate is within
/// locus_band of zero. Fails if no locus was ever hit.
VerificationReport verify_piecewise_agreement(
    const SmoothMap& f, const std::function<std::vector<double>(Rng&)>& locus_sampler,
    Rng rng, int samples, double locus_band = 1e-12, double tol = 1e-12);

}  // namespace swb::smoothcalc
