#include "swb/pairs.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "swb/expr.hpp"

namespace swb::pairs {
namespace {

using expr::Expr;
using expr::StructureError;
using smoothcalc::cutoff_expr;

Expr sum(const std::vector<Expr>& xs) {
  Expr s = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) s = s + xs[i];
  return s;
}

std::vector<Expr> chart_coords(int n) {
  std::vector<Expr> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs.push_back(Expr::coord(i));
  return xs;
}

/// Straight-line slide from `to` at time 0 back to the identity at time 1.
/// The time coordinate sits after the chart coordinates. At t = 0 the mix is
/// 0*x + 1*to(x) and at t = 1 it is 1*x + 0*to(x), so both endpoints
/// reproduce their target bitwise, not just within tolerance.
SmoothMap line_to_identity(const SmoothMap& to) {
  const int n = to.arity();
  const Expr t = Expr::coord(n);
  const Expr r = Expr(1.0) - t;
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(to.out_dim()));
  for (int i = 0; i < to.out_dim(); ++i)
    comps.push_back(t * Expr::coord(i) + r * to.component(i));
  return SmoothMap(n + 1, comps);
}

double doubling_search(const std::string& what, const std::function<bool(double)>& ok) {
  for (double v = 2.0; v <= 1048576.0; v *= 2.0)
    if (ok(v)) return v;
  throw StructureError(what + ": no power of two up to 2^20 suffices");
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void fill_composites_and_lines(Equivalence& e) {
  e.composite_src = e.bwd.compose(e.fwd);
  e.composite_dst = e.fwd.compose(e.bwd);
  e.homotopy_src = line_to_identity(e.composite_src);
  e.homotopy_dst = line_to_identity(e.composite_dst);
}

/// Inclusion one way, coordinatewise cutoff back. Shared by the three
/// box-flavored retracts: the cutoff pins every coordinate at or below the
/// low shoulder to exactly 0 and at or above the high shoulder to exactly 1,
/// so thickened walls land on the honest walls with zero residual.
Equivalence cutoff_retract(std::string name, PairSpec src, PairSpec dst, int n,
                           double eps) {
  Equivalence e;
  e.name = std::move(name);
  e.src = std::move(src);
  e.dst = std::move(dst);
  e.fwd = SmoothMap::identity(n);
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) comps.push_back(cutoff_expr(Expr::coord(i), eps));
  e.bwd = SmoothMap(n, comps);
  fill_composites_and_lines(e);
  e.notes.push_back("coordinatewise cutoff lands shoulder coordinates on 0 and 1 exactly");
  e.notes.push_back("straight-line homotopies; each coordinate moves within its own collar");
  return e;
}

}  // namespace

Equivalence equidef_walls_collar(int n, double eps) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  return cutoff_retract("walls-vs-collar-" + std::to_string(n),
                        smoothcalc::pair_plane_walls(n),
                        smoothcalc::pair_plane_collar(n, eps), n, eps);
}

Equivalence equidef_cube_boundary_collar(int n, double eps) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  return cutoff_retract("cube-boundary-vs-collar-" + std::to_string(n),
                        smoothcalc::pair_cube_boundary(n),
                        smoothcalc::pair_plane_collar(n, eps), n, eps);
}

Equivalence equidef_cube_collar_collar(int n, double eps) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  return cutoff_retract("cube-collar-vs-collar-" + std::to_string(n),
                        smoothcalc::pair_cube_collar(n, eps),
                        smoothcalc::pair_plane_collar(n, eps), n, eps);
}

Equivalence equidef_simplex_collar_plane(int n, double eps_simplex, double eps_plane) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  if (!(eps_plane > 0.0 && eps_plane <= eps_simplex))
    throw StructureError("plane collar must not be wider than the barycentric collar");
  const double bary = 1.0 / (n + 1);
  if (!(eps_simplex < bary))
    throw StructureError("barycentric collar width must stay below 1/(n+1)");

  // The dilation about the barycenter must push a coordinate sitting at the
  // collar threshold low enough that, dropped into the plane chart, it is a
  // collar witness there regardless of which coordinate it was: either it
  // survives as a small coordinate directly, or removing it forces the rest
  // to sum so high that one of them tops the far shoulder.
  const double target = std::min(eps_plane, 1.0 - n * (1.0 - eps_plane));
  const double lam = doubling_search("barycentric dilation", [&](double v) {
    return bary + v * (eps_simplex - bary) <= target;
  });

  Equivalence e;
  e.name = "simplex-collar-vs-plane-" + std::to_string(n);
  e.src = smoothcalc::pair_simplex_collar(n, eps_simplex);
  e.dst = smoothcalc::pair_plane_collar(n, eps_plane);

  std::vector<Expr> fwd_comps;
  fwd_comps.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    fwd_comps.push_back(Expr(bary) + Expr(lam) * (Expr::coord(i) - Expr(bary)));
  e.fwd = SmoothMap(n + 1, fwd_comps);

  std::vector<Expr> bwd_comps;
  bwd_comps.reserve(static_cast<std::size_t>(n) + 1);
  bwd_comps.push_back(Expr(1.0) - sum(chart_coords(n)));
  for (int i = 0; i < n; ++i) bwd_comps.push_back(Expr::coord(i));
  e.bwd = SmoothMap(n, bwd_comps);

  fill_composites_and_lines(e);
  e.notes.push_back("dilation about the barycenter by " + fmt(lam));
  e.notes.push_back("round trips are affine, so the homotopies move along straight lines");
  return e;
}

Equivalence equidef_simplex_boundary_collar(int n, double eps) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  const double bary = 1.0 / (n + 1);
  const double margin = bary - eps;
  if (!(eps > 0.0 && margin >= 4e-3))
    throw StructureError(
        "collar width must sit below 1/(n+1) by a safe margin, or the largest "
        "coordinate cannot clear the cutoff's flat zone");

  Equivalence e;
  e.name = "simplex-boundary-vs-collar-" + std::to_string(n);
  e.src = smoothcalc::pair_simplex_boundary(n);
  e.dst = smoothcalc::pair_simplex_collar(n, eps);
  e.fwd = SmoothMap::identity(n + 1);

  // Cut each coordinate down, then renormalize back onto the plane. A collar
  // coordinate is cut to exactly 0 and division leaves it there, so collar
  // points land on the honest boundary. The denominator never dies: the
  // largest coordinate of a plane point is at least 1/(n+1), which clears
  // the cutoff shoulder by `margin`.
  const auto squash = [&](const std::vector<Expr>& parts) {
    std::vector<Expr> comps;
    comps.reserve(parts.size());
    const Expr s = sum(parts);
    for (const auto& z : parts) comps.push_back(z / s);
    return comps;
  };

  std::vector<Expr> cut;
  cut.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) cut.push_back(cutoff_expr(Expr::coord(i), eps));
  e.bwd = SmoothMap(n + 1, squash(cut));

  const Expr t = Expr::coord(n + 1);
  const Expr r = Expr(1.0) - t;
  std::vector<Expr> slide;
  slide.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i)
    slide.push_back(t * Expr::coord(i) + r * cutoff_expr(Expr::coord(i), eps));
  const SmoothMap H(n + 2, squash(slide));

  e.composite_src = e.bwd.compose(e.fwd);
  e.composite_dst = e.fwd.compose(e.bwd);
  e.homotopy_src = H;
  e.homotopy_dst = H;
  e.notes.push_back("cut-and-renormalize; collar coordinates are cut to exactly 0");
  e.notes.push_back("denominator stays positive: mixing keeps the plane's total at t plus "
                    "a nonnegative cut sum, and at t = 0 the largest coordinate clears the "
                    "shoulder by " + fmt(margin));
  return e;
}

Equivalence equidef_disk_collar_plane(int n, double eps_disk, double eps_plane) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  if (!(eps_disk > 0.0 && eps_disk < 1.0))
    throw StructureError("disk collar width out of range");
  if (!(eps_plane > 0.0 && eps_plane < 0.5))
    throw StructureError("plane collar width out of range");

  const double sqn = std::sqrt(static_cast<double>(n));
  const double c = 1.0 - eps_disk / 4.0;
  const double w_min = 1.0 - 2.0 * eps_plane;

  // Compression strength: centered plane-collar witnesses must land deep in
  // the disk collar, with slack for the homotopy slices.
  const double a = doubling_search("radial compression", [&](double v) {
    return c * v * w_min / std::sqrt(1.0 + v * v * w_min * w_min) >= 1.0 - eps_disk / 2.0;
  });
  // Blowup factor: disk-collar points must reach the plane collar, and the
  // round trip through the compression must stretch every centered
  // coordinate (witnesses stay witnesses along the straight line back).
  // Sampled plane points keep each centered coordinate within [-3, 3].
  const double a_len = 3.0 * sqn;
  const double lam = doubling_search("radial blowup", [&](double v) {
    const bool reaches = (1.0 - v * (1.0 - eps_disk) / sqn) / 2.0 <= eps_plane;
    const bool stretches = v * c * a >= std::sqrt(1.0 + a * a * a_len * a_len);
    return reaches && stretches;
  });

  Equivalence e;
  e.name = "disk-collar-vs-plane-" + std::to_string(n);
  e.src = smoothcalc::pair_disk_collar(n, eps_disk);
  e.dst = smoothcalc::pair_plane_collar(n, eps_plane);

  std::vector<Expr> fwd_comps;
  fwd_comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    fwd_comps.push_back((Expr(lam) * Expr::coord(i) + Expr(1.0)) / Expr(2.0));
  e.fwd = SmoothMap(n, fwd_comps);

  std::vector<Expr> w;
  w.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w.push_back(Expr(2.0) * Expr::coord(i) - Expr(1.0));
  std::vector<Expr> w2;
  w2.reserve(w.size());
  for (const auto& wi : w) w2.push_back(wi * wi);
  const Expr den = sqrt(Expr(1.0) + Expr(a * a) * sum(w2));
  std::vector<Expr> bwd_comps;
  bwd_comps.reserve(w.size());
  for (const auto& wi : w) bwd_comps.push_back(Expr(c * a) * wi / den);
  e.bwd = SmoothMap(n, bwd_comps);

  fill_composites_and_lines(e);
  e.notes.push_back("blowup by " + fmt(lam) + ", compression strength " + fmt(a) +
                    ", compression ceiling " + fmt(c));
  e.notes.push_back("the inward round trip is a positive radial multiple, so the straight "
                    "line stays between the two radii");
  return e;
}

namespace {

/// Radial squeeze of the outer shell onto the unit sphere, graded by
/// `strength`: with strength 1 every radius at or beyond 1 - eps lands on
/// the sphere, with strength 0 nothing moves. Below the split radius the
/// map is literally the constant branch 1, which keeps the inverse square
/// root away from the origin; on the overlap the ramp's dead zone makes the
/// two branches agree identically.
SmoothMap radial_squeeze(int n, double eps, const Expr& strength, int arity) {
  const double b = (1.0 - eps) * (1.0 - eps) / 0.8;
  const double s0 = (1.0 - eps) * (1.0 - eps) / 8.0;
  std::vector<Expr> z2;
  z2.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z2.push_back(Expr::coord(i) * Expr::coord(i));
  const Expr s = sum(z2);
  const Expr phat = cutoff_expr(s / Expr(b), 0.2);
  const Expr ramp = Expr(1.0) / sqrt(s) - Expr(1.0);
  const Expr branch = Expr(1.0) + strength * (phat * ramp);
  const Expr m = Expr::piecewise(s - Expr(s0), branch, Expr(1.0));
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) comps.push_back(Expr::coord(i) * m);
  return SmoothMap(arity, comps);
}

}  // namespace

Equivalence equidef_disk_sphere_collar(int n, double eps) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw StructureError("collar width out of range");

  Equivalence e;
  e.name = "disk-sphere-vs-collar-" + std::to_string(n);
  e.src = smoothcalc::pair_disk_sphere(n);
  e.dst = smoothcalc::pair_disk_collar(n, eps);
  e.fwd = SmoothMap::identity(n);
  e.bwd = radial_squeeze(n, eps, Expr(1.0), n);
  const SmoothMap H = radial_squeeze(n, eps, Expr(1.0) - Expr::coord(n), n + 1);
  e.composite_src = e.bwd.compose(e.fwd);
  e.composite_dst = e.fwd.compose(e.bwd);
  e.homotopy_src = H;
  e.homotopy_dst = H;
  e.notes.push_back("radial squeeze; collar radii reach the sphere exactly because the "
                    "grading saturates outside radius " + fmt(1.0 - eps));
  e.notes.push_back("graded homotopy: radii only grow toward the sphere, never past it");
  return e;
}

namespace {

/// Rotate mass toward the pole: heights at or above the equator rise to
/// h + s(1 - h), heights at or below -0.6 do not move, and the horizontal
/// part is rescaled to keep the point on the sphere. The rescaling ratio is
/// algebraically (1 - tau^2)/(1 - h^2) but is built in three guarded pieces
/// so nothing ever divides by 1 + h near the south pole.
SmoothMap raise_map(int n, double eps_raise, const Expr& strength, int arity) {
  const Expr h = Expr::coord(n);
  const Expr lift = cutoff_expr(h + Expr(0.8), eps_raise);
  const Expr graded = strength * lift;
  const Expr tau = h + graded * (Expr(1.0) - h);

  const Expr one_plus_h = Expr(1.0) + h;
  const Expr mid = (Expr(1.0) - graded) * (Expr(1.0) + tau) / one_plus_h;
  const Expr tau_top = h + strength * (Expr(1.0) - h);
  const Expr top = (Expr(1.0) - strength) * (Expr(1.0) + tau_top) / one_plus_h;
  const Expr ratio =
      Expr::piecewise(h, top, Expr::piecewise(h + Expr(0.6), mid, Expr(1.0)));

  const Expr scale = sqrt(ratio);
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) comps.push_back(Expr::coord(i) * scale);
  comps.push_back(tau);
  return SmoothMap(arity, comps);
}

}  // namespace

Equivalence equator_raise(int n) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  const double eps_raise = 0.2;

  Equivalence e;
  e.name = "hemisphere-vs-pole-" + std::to_string(n);
  e.src = smoothcalc::pair_sphere_hemisphere(n);
  e.dst = smoothcalc::pair_sphere_pole(n);
  e.fwd = raise_map(n, eps_raise, Expr(1.0), n + 1);
  e.bwd = SmoothMap::identity(n + 1);
  e.composite_src = e.bwd.compose(e.fwd);
  e.composite_dst = e.fwd.compose(e.bwd);
  // The schedule runs the strength from 1 at time 0 down to 0 at time 1 and
  // is flat at both ends, so the slide is smooth in time even where the
  // rescaling ratio hits zero.
  const Expr schedule = cutoff_expr(Expr(1.0) - Expr::coord(n + 1), eps_raise);
  const SmoothMap H = raise_map(n, eps_raise, schedule, n + 2);
  e.homotopy_src = H;
  e.homotopy_dst = H;
  e.notes.push_back("full strength collapses the closed upper hemisphere to the pole; "
                    "heights below -0.6 are fixed pointwise");
  e.notes.push_back("the pole is fixed at every time, its height staying exactly 1");
  return e;
}

namespace {

PairSpec punctured_sphere_chart(int n, double h_sample, double h_max) {
  PairSpec p;
  p.name = "sphere-chart-" + std::to_string(n);
  p.dim = n + 1;
  p.total_violation = [n, h_max](const std::vector<double>& x) {
    double q = 0;
    for (int i = 0; i <= n; ++i) q += x[i] * x[i];
    return std::max(std::abs(std::sqrt(q) - 1.0), std::max(0.0, x[n] - h_max));
  };
  p.sub_violation = [tot = p.total_violation, n](const std::vector<double>& x) {
    return std::max(tot(x), std::max(0.0, -x[n]));
  };
  const auto unit = [n](Rng& rng) {
    for (;;) {
      auto u = rng.gaussian(n + 1);
      double q = 0;
      for (double v : u) q += v * v;
      const double r = std::sqrt(q);
      if (r <= 1e-6) continue;
      for (double& v : u) v /= r;
      return u;
    }
  };
  p.sample_total = [n, h_sample, unit](Rng& rng) {
    for (;;) {
      auto u = unit(rng);
      if (u[n] <= h_sample) return u;
    }
  };
  p.sample_sub = [n, h_sample, unit](Rng& rng) {
    if (rng.pick(2) == 0) {
      // equator stratum, height exactly zero
      for (;;) {
        auto z = rng.gaussian(n);
        double q = 0;
        for (double v : z) q += v * v;
        const double r = std::sqrt(q);
        if (r <= 1e-6) continue;
        for (double& v : z) v /= r;
        z.push_back(0.0);
        return z;
      }
    }
    for (;;) {
      auto u = unit(rng);
      u[n] = std::abs(u[n]);
      if (u[n] <= h_sample) return u;
    }
  };
  return p;
}

/// Project away from the pole, scale by `factor`, and project back.
SmoothMap projective_sandwich(int n, const Expr& factor, int arity) {
  std::vector<Expr> u;
  u.reserve(static_cast<std::size_t>(n));
  const Expr h = Expr::coord(n);
  for (int i = 0; i < n; ++i)
    u.push_back(factor * (Expr::coord(i) / (Expr(1.0) - h)));
  std::vector<Expr> u2;
  u2.reserve(u.size());
  for (const auto& ui : u) u2.push_back(ui * ui);
  const Expr q = sum(u2);
  const Expr den = Expr(1.0) + q;
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(n) + 1);
  for (const auto& ui : u) comps.push_back(Expr(2.0) * ui / den);
  comps.push_back((q - Expr(1.0)) / den);
  return SmoothMap(arity, comps);
}

double height_of_radius(double r) { return (r * r - 1.0) / (r * r + 1.0); }

}  // namespace

Equivalence stereographic(int n, double eps) {
  if (n < 1) throw StructureError("chart dimension must be positive");
  if (!(eps > 0.0 && eps < 0.5)) throw StructureError("collar width out of range");

  const double a_out = 2.0 * std::sqrt(static_cast<double>(n));
  const double a_in = (1.0 - 2.0 * eps) / 2.0;
  const double kappa = a_out / a_in;

  // Bound the chart so every sampled point, every image, and every homotopy
  // slice stays well below the pole. Plane samples keep each centered
  // coordinate within [-3, 3]; sphere samples stay below height h_sample and
  // the outward slide scales their projections by at most kappa.
  const double h_sample = 0.9;
  const double r_plane = 3.0 * std::sqrt(static_cast<double>(n)) / a_in;
  const double r_sphere =
      kappa * std::sqrt((1.0 + h_sample) / (1.0 - h_sample));
  const double h_max =
      std::max(height_of_radius(r_plane), height_of_radius(r_sphere)) + 1e-6;

  Equivalence e;
  e.name = "plane-vs-sphere-chart-" + std::to_string(n);
  e.src = smoothcalc::pair_plane_collar(n, eps);
  e.dst = punctured_sphere_chart(n, h_sample, h_max);

  std::vector<Expr> scaled;
  scaled.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    scaled.push_back((Expr(2.0) * Expr::coord(i) - Expr(1.0)) / Expr(a_in));
  std::vector<Expr> scaled2;
  scaled2.reserve(scaled.size());
  for (const auto& yi : scaled) scaled2.push_back(yi * yi);
  const Expr q = sum(scaled2);
  const Expr den = Expr(1.0) + q;
  std::vector<Expr> fwd_comps;
  fwd_comps.reserve(static_cast<std::size_t>(n) + 1);
  for (const auto& yi : scaled) fwd_comps.push_back(Expr(2.0) * yi / den);
  fwd_comps.push_back((q - Expr(1.0)) / den);
  e.fwd = SmoothMap(n, fwd_comps);

  const Expr h = Expr::coord(n);
  std::vector<Expr> bwd_comps;
  bwd_comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    bwd_comps.push_back(
        (Expr(a_out) * (Expr::coord(i) / (Expr(1.0) - h)) + Expr(1.0)) / Expr(2.0));
  e.bwd = SmoothMap(n + 1, bwd_comps);

  e.composite_src = e.bwd.compose(e.fwd);
  e.composite_dst = e.fwd.compose(e.bwd);
  e.homotopy_src = line_to_identity(e.composite_src);
  const Expr t = Expr::coord(n + 1);
  const Expr factor = t + (Expr(1.0) - t) * Expr(kappa);
  e.homotopy_dst = projective_sandwich(n, factor, n + 2);
  e.notes.push_back("projection scales: outward " + fmt(a_out) + ", inward 1/" + fmt(a_in) +
                    ", round trip " + fmt(kappa));
  e.notes.push_back("chart bounded at height " + fmt(h_max) + ", sampled below " +
                    fmt(h_sample));
  e.notes.push_back("the plane-side round trip is an affine stretch about the center, so "
                    "centered witnesses only grow");
  return e;
}

std::vector<Equivalence> sphere_pole_chain(int n, double eps) {
  std::vector<Equivalence> chain;
  chain.push_back(equator_raise(n));
  Equivalence leg = stereographic(n, eps);
  leg.notes.insert(leg.notes.begin(),
                   "joining step: maps out of the sphere rel the pole restrict to maps out "
                   "of the punctured sphere, identified with this chart; that "
                   "identification is structural and carries no samples");
  chain.push_back(std::move(leg));
  return chain;
}

SmoothMap face_embedding(int chart_dim, int slot) {
  if (chart_dim < 0 || slot < 0 || slot > chart_dim)
    throw StructureError("face slot out of range");
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(chart_dim) + 1);
  for (int i = 0; i < slot; ++i) comps.push_back(Expr::coord(i));
  comps.push_back(Expr(0.0));
  for (int i = slot; i < chart_dim; ++i) comps.push_back(Expr::coord(i));
  return SmoothMap(chart_dim, comps);
}

SmoothMap prism_split(int chart_dim) {
  if (chart_dim < 1) throw StructureError("chart dimension must be positive");
  const Expr t = Expr::coord(chart_dim);
  const Expr last = Expr::coord(chart_dim - 1);
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(chart_dim) + 1);
  for (int i = 0; i + 1 < chart_dim; ++i) comps.push_back(Expr::coord(i));
  comps.push_back(t * last);
  comps.push_back((Expr(1.0) - t) * last);
  return SmoothMap(chart_dim + 1, comps);
}

SmoothMap paste(const SmoothMap& f, const SmoothMap& g) {
  const int a = f.arity();
  if (g.arity() != a || a < 2) throw StructureError("pasted maps must share an arity of at least 2");
  if (g.out_dim() != f.out_dim()) throw StructureError("pasted maps must share a target");

  const Expr lo = Expr::coord(a - 2);
  const Expr mid = Expr::coord(a - 1);
  const Expr hi = Expr::coord(a);
  const Expr gate = hi - lo;

  std::vector<Expr> f_args, g_args;
  f_args.reserve(static_cast<std::size_t>(a));
  g_args.reserve(static_cast<std::size_t>(a));
  for (int i = 0; i + 2 < a; ++i) {
    f_args.push_back(Expr::coord(i));
    g_args.push_back(Expr::coord(i));
  }
  f_args.push_back(mid + Expr(2.0) * lo);
  f_args.push_back(hi - lo);
  g_args.push_back(lo - hi);
  g_args.push_back(mid + Expr(2.0) * hi);

  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(f.out_dim()));
  for (int i = 0; i < f.out_dim(); ++i)
    comps.push_back(Expr::piecewise(gate, f.component(i).substitute(f_args),
                                    g.component(i).substitute(g_args)));
  return SmoothMap(a + 1, comps);
}

SmoothMap basepoint_masked(const SmoothMap& f, double eps,
                           const std::vector<double>& basepoint) {
  if (!(eps > 0.0)) throw StructureError("mask width must be positive");
  if (static_cast<int>(basepoint.size()) != f.out_dim())
    throw StructureError("basepoint dimension must match the map's target");
  Expr mask = Expr(1.0);
  for (int i = 0; i < f.arity(); ++i)
    mask = mask * cutoff_expr(Expr::coord(i) / Expr(4.0 * eps), 0.25);
  std::vector<Expr> comps;
  comps.reserve(static_cast<std::size_t>(f.out_dim()));
  for (int i = 0; i < f.out_dim(); ++i)
    comps.push_back(Expr(basepoint[i]) + mask * (f.component(i) - Expr(basepoint[i])));
  return SmoothMap(f.arity(), comps);
}

VerificationReport verify_equivalence(const Equivalence& e, Rng rng, int samples,
                                      double tol) {
  VerificationReport rep;
  rep.name = e.name;
  rep.tolerance = tol;

  const SmoothMap id_src = SmoothMap::identity(e.src.dim);
  const SmoothMap id_dst = SmoothMap::identity(e.dst.dim);

  auto fwd = smoothcalc::verify_map_of_pairs(e.fwd, e.src, e.dst, rng.sub("fwd"), samples, tol);
  fwd.name = "fwd";
  rep.absorb(fwd);

  auto bwd = smoothcalc::verify_map_of_pairs(e.bwd, e.dst, e.src, rng.sub("bwd"), samples, tol);
  bwd.name = "bwd";
  rep.absorb(bwd);

  auto hs = smoothcalc::verify_homotopy(e.homotopy_src, e.src, e.src, e.composite_src,
                                        id_src, rng.sub("homotopy-src"), samples, tol);
  hs.name = "homotopy-src";
  rep.absorb(hs);

  auto hd = smoothcalc::verify_homotopy(e.homotopy_dst, e.dst, e.dst, e.composite_dst,
                                        id_dst, rng.sub("homotopy-dst"), samples, tol);
  hd.name = "homotopy-dst";
  rep.absorb(hd);

  rep.details["notes"] = e.notes;
  return rep;
}

}  // namespace swb::pairs
