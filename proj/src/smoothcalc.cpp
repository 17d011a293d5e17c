#include "swb/smoothcalc.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace swb::smoothcalc {

using expr::Jet2;

SmoothMap make_cutoff(double eps) {
  return SmoothMap(1, {cutoff_expr(Expr::coord(0), eps)});
}

Expr cutoff_expr(const Expr& t, double eps) {
  if (!(eps > 0.0 && eps < 0.49))
    throw expr::StructureError("cutoff shoulder must lie in (0, 0.49)");
  const Expr rising = flat_bump(t - eps);
  const Expr falling = flat_bump((1.0 - eps) - t);
  return rising / (rising + falling);
}

namespace {

double norm(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double sum(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v;
  return s;
}

/// Distance of one coordinate to the closed set [0,1]-complement collar
/// {x <= eps or x >= 1-eps}: positive only strictly between the shoulders.
double collar_gap(double x, double eps) {
  return std::max(0.0, std::min(x - eps, (1.0 - eps) - x));
}

std::vector<double> box_point(Rng& rng, int n, double lo, double hi) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.range(lo, hi);
  return x;
}

std::vector<double> unit_vector(Rng& rng, int n) {
  for (;;) {
    auto u = rng.gaussian(n);
    const double r = norm(u);
    if (r > 1e-6) {
      for (auto& v : u) v /= r;
      return u;
    }
  }
}

int check_wiring(VerificationReport& rep, const SmoothMap& f, int arity, int out) {
  if (f.arity() != arity) {
    rep.fail("map eats " + std::to_string(f.arity()) + " coordinates, chart has " +
             std::to_string(arity));
    return 1;
  }
  if (f.out_dim() != out) {
    rep.fail("map emits " + std::to_string(f.out_dim()) + " coordinates, chart has " +
             std::to_string(out));
    return 1;
  }
  return 0;
}

}  // namespace

PairSpec pair_plane_walls(int n) {
  PairSpec p;
  p.name = "plane-walls-" + std::to_string(n);
  p.dim = n;
  p.total_violation = [](const std::vector<double>&) { return 0.0; };
  p.sub_violation = [](const std::vector<double>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : x) best = std::min({best, std::abs(v), std::abs(v - 1.0)});
    return best;
  };
  p.sample_total = [n](Rng& rng) { return box_point(rng, n, -1.0, 2.0); };
  p.sample_sub = [n](Rng& rng) {
    auto x = box_point(rng, n, -1.0, 2.0);
    x[rng.pick(n)] = static_cast<double>(rng.pick(2));
    return x;
  };
  return p;
}

PairSpec pair_plane_collar(int n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw expr::StructureError("collar width out of range");
  PairSpec p;
  p.name = "plane-collar-" + std::to_string(n);
  p.dim = n;
  p.eps = eps;
  p.total_violation = [](const std::vector<double>&) { return 0.0; };
  p.sub_violation = [eps](const std::vector<double>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : x) best = std::min(best, collar_gap(v, eps));
    return best;
  };
  p.sample_total = [n](Rng& rng) { return box_point(rng, n, -1.0, 2.0); };
  p.sample_sub = [n, eps](Rng& rng) {
    auto x = box_point(rng, n, -1.0, 2.0);
    const int i = rng.pick(n);
    const bool high = rng.pick(2) == 1;
    switch (rng.pick(3)) {
      case 0:
        x[i] = high ? 1.0 : 0.0;
        break;
      case 1:
        x[i] = high ? 1.0 - eps : eps;
        break;
      default:
        x[i] = high ? rng.range(1.0 - eps, 2.0) : rng.range(-1.0, eps);
        break;
    }
    return x;
  };
  return p;
}

PairSpec pair_cube_boundary(int n) {
  PairSpec p;
  p.name = "cube-boundary-" + std::to_string(n);
  p.dim = n;
  p.total_violation = [](const std::vector<double>& x) {
    double worst = 0;
    for (double v : x) worst = std::max({worst, -v, v - 1.0});
    return worst;
  };
  p.sub_violation = [tot = p.total_violation](const std::vector<double>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : x) best = std::min({best, std::abs(v), std::abs(v - 1.0)});
    return std::max(tot(x), best);
  };
  p.sample_total = [n](Rng& rng) { return box_point(rng, n, 0.0, 1.0); };
  p.sample_sub = [n](Rng& rng) {
    auto x = box_point(rng, n, 0.0, 1.0);
    x[rng.pick(n)] = static_cast<double>(rng.pick(2));
    return x;
  };
  return p;
}

PairSpec pair_cube_collar(int n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw expr::StructureError("collar width out of range");
  PairSpec p = pair_cube_boundary(n);
  p.name = "cube-collar-" + std::to_string(n);
  p.eps = eps;
  p.sub_violation = [tot = p.total_violation, eps](const std::vector<double>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : x) best = std::min(best, collar_gap(v, eps));
    return std::max(tot(x), best);
  };
  p.sample_sub = [n, eps](Rng& rng) {
    auto x = box_point(rng, n, 0.0, 1.0);
    const int i = rng.pick(n);
    const bool high = rng.pick(2) == 1;
    switch (rng.pick(3)) {
      case 0:
        x[i] = high ? 1.0 : 0.0;
        break;
      case 1:
        x[i] = high ? 1.0 - eps : eps;
        break;
      default:
        x[i] = high ? rng.range(1.0 - eps, 1.0) : rng.range(0.0, eps);
        break;
    }
    return x;
  };
  return p;
}

namespace {

/// Points of the plane sum x = 1 in R^{n+1}: sample every coordinate except
/// a dependent one, which closes the affine constraint.
std::vector<double> plane_point(Rng& rng, int n, int forced, double forced_value) {
  const int dim = n + 1;
  int dependent = rng.pick(dim);
  if (dependent == forced) dependent = (dependent + 1) % dim;
  std::vector<double> x(dim);
  for (int i = 0; i < dim; ++i)
    if (i != dependent) x[i] = rng.range(-0.5, 1.5);
  if (forced >= 0) x[forced] = forced_value;
  double rest = 0;
  for (int i = 0; i < dim; ++i)
    if (i != dependent) rest += x[i];
  x[dependent] = 1.0 - rest;
  return x;
}

}  // namespace

PairSpec pair_simplex_boundary(int n) {
  PairSpec p;
  p.name = "simplex-boundary-" + std::to_string(n);
  p.dim = n + 1;
  p.total_violation = [](const std::vector<double>& x) { return std::abs(sum(x) - 1.0); };
  p.sub_violation = [tot = p.total_violation](const std::vector<double>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : x) best = std::min(best, std::abs(v));
    return std::max(tot(x), best);
  };
  p.sample_total = [n](Rng& rng) { return plane_point(rng, n, -1, 0.0); };
  p.sample_sub = [n](Rng& rng) { return plane_point(rng, n, rng.pick(n + 1), 0.0); };
  return p;
}

PairSpec pair_simplex_collar(int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0 / (n + 1)))
    throw expr::StructureError("simplex collar width must stay below 1/(n+1)");
  PairSpec p = pair_simplex_boundary(n);
  p.name = "simplex-collar-" + std::to_string(n);
  p.eps = eps;
  p.sub_violation = [tot = p.total_violation, eps](const std::vector<double>& x) {
    double best = std::numeric_limits<double>::infinity();
    for (double v : x) best = std::min(best, std::max(0.0, v - eps));
    return std::max(tot(x), best);
  };
  p.sample_sub = [n, eps](Rng& rng) {
    const int i = rng.pick(n + 1);
    switch (rng.pick(3)) {
      case 0:
        return plane_point(rng, n, i, 0.0);
      case 1:
        return plane_point(rng, n, i, eps);
      default:
        return plane_point(rng, n, i, rng.range(-0.5, eps));
    }
  };
  return p;
}

PairSpec pair_disk_sphere(int n) {
  PairSpec p;
  p.name = "disk-sphere-" + std::to_string(n);
  p.dim = n;
  p.total_violation = [](const std::vector<double>& x) {
    return std::max(0.0, norm(x) - 1.0);
  };
  p.sub_violation = [](const std::vector<double>& x) { return std::abs(norm(x) - 1.0); };
  p.sample_total = [n](Rng& rng) {
    auto u = unit_vector(rng, n);
    const double r = std::pow(rng.unit(), 1.0 / n);
    for (auto& v : u) v *= r;
    return u;
  };
  p.sample_sub = [n](Rng& rng) { return unit_vector(rng, n); };
  return p;
}

PairSpec pair_disk_collar(int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw expr::StructureError("collar width out of range");
  PairSpec p = pair_disk_sphere(n);
  p.name = "disk-collar-" + std::to_string(n);
  p.eps = eps;
  p.sub_violation = [tot = p.total_violation, eps](const std::vector<double>& x) {
    return std::max(tot(x), std::max(0.0, (1.0 - eps) - norm(x)));
  };
  p.sample_sub = [n, eps](Rng& rng) {
    auto u = unit_vector(rng, n);
    double r = 1.0;
    switch (rng.pick(3)) {
      case 0:
        r = 1.0;
        break;
      case 1:
        r = 1.0 - eps;
        break;
      default:
        r = rng.range(1.0 - eps, 1.0);
        break;
    }
    for (auto& v : u) v *= r;
    return u;
  };
  return p;
}

PairSpec pair_sphere_pole(int n) {
  PairSpec p;
  p.name = "sphere-pole-" + std::to_string(n);
  p.dim = n + 1;
  p.total_violation = [](const std::vector<double>& x) { return std::abs(norm(x) - 1.0); };
  p.sub_violation = [n](const std::vector<double>& x) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += x[i] * x[i];
    const double dh = x[n] - 1.0;
    return std::sqrt(s + dh * dh);
  };
  p.sample_total = [n](Rng& rng) { return unit_vector(rng, n + 1); };
  p.sample_sub = [n](Rng&) {
    std::vector<double> north(n + 1, 0.0);
    north[n] = 1.0;
    return north;
  };
  return p;
}

PairSpec pair_sphere_hemisphere(int n) {
  PairSpec p = pair_sphere_pole(n);
  p.name = "sphere-hemisphere-" + std::to_string(n);
  p.sub_violation = [tot = p.total_violation, n](const std::vector<double>& x) {
    return std::max(tot(x), std::max(0.0, -x[n]));
  };
  p.sample_sub = [n](Rng& rng) {
    if (rng.pick(2) == 0) {
      // equator stratum, height exactly zero
      auto z = unit_vector(rng, n);
      z.push_back(0.0);
      return z;
    }
    auto u = unit_vector(rng, n + 1);
    u[n] = std::abs(u[n]);
    return u;
  };
  return p;
}

VerificationReport verify_map_of_pairs(const SmoothMap& f, const PairSpec& src,
                                       const PairSpec& dst, Rng rng, int samples,
                                       double tol) {
  VerificationReport rep;
  rep.name = "pairs:" + src.name + "->" + dst.name;
  rep.tolerance = tol;
  if (check_wiring(rep, f, src.dim, dst.dim)) return rep;
  Rng rt = rng.sub("total"), rs = rng.sub("sub");
  for (int k = 0; k < samples; ++k) {
    const auto x = src.sample_total(rt);
    rep.sample(dst.total_violation(f.eval(x)), x, "ambient image escapes");
    const auto a = src.sample_sub(rs);
    rep.sample(dst.sub_violation(f.eval(a)), a, "subspace image escapes");
  }
  return rep;
}

VerificationReport verify_map_sends_sub_to_point(const SmoothMap& f, const PairSpec& src,
                                                 const std::vector<double>& basepoint,
                                                 Rng rng, int samples, double tol) {
  VerificationReport rep;
  rep.name = "collapse:" + src.name;
  rep.tolerance = tol;
  if (check_wiring(rep, f, src.dim, static_cast<int>(basepoint.size()))) return rep;
  Rng rs = rng.sub("sub");
  for (int k = 0; k < samples; ++k) {
    const auto a = src.sample_sub(rs);
    const auto y = f.eval(a);
    double worst = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
      worst = std::max(worst, std::abs(y[i] - basepoint[i]));
    rep.sample(worst, a, "subspace image away from basepoint");
  }
  return rep;
}

VerificationReport verify_homotopy(const SmoothMap& H, const PairSpec& src,
                                   const PairSpec& dst, const SmoothMap& f,
                                   const SmoothMap& g, Rng rng, int samples, double tol) {
  VerificationReport rep;
  rep.name = "homotopy:" + src.name + "->" + dst.name;
  rep.tolerance = tol;
  if (check_wiring(rep, H, src.dim + 1, dst.dim)) return rep;
  if (check_wiring(rep, f, src.dim, dst.dim)) return rep;
  if (check_wiring(rep, g, src.dim, dst.dim)) return rep;

  Rng re = rng.sub("ends");
  for (int k = 0; k < samples; ++k) {
    auto x = src.sample_total(re);
    const auto f0 = f.eval(x), g1 = g.eval(x);
    auto xe = x;
    xe.push_back(0.0);
    auto h0 = H.eval(xe);
    xe.back() = 1.0;
    auto h1 = H.eval(xe);
    double worst0 = 0, worst1 = 0;
    for (int i = 0; i < dst.dim; ++i) {
      worst0 = std::max(worst0, std::abs(h0[i] - f0[i]));
      worst1 = std::max(worst1, std::abs(h1[i] - g1[i]));
    }
    rep.sample(worst0, x, "time zero differs from the first map");
    rep.sample(worst1, x, "time one differs from the second map");
  }

  Rng rm = rng.sub("slices");
  const int per_slice = std::max(8, samples / 8);
  for (int step = 0; step <= 32; ++step) {
    const double t = step / 32.0;
    for (int k = 0; k < per_slice; ++k) {
      auto x = src.sample_total(rm);
      x.push_back(t);
      rep.sample(dst.total_violation(H.eval(x)), x, "slice leaves the ambient space");
      auto a = src.sample_sub(rm);
      a.push_back(t);
      rep.sample(dst.sub_violation(H.eval(a)), a, "slice leaves the subspace");
    }
  }
  return rep;
}

VerificationReport verify_piecewise_agreement(
    const SmoothMap& f, const std::function<std::vector<double>(Rng&)>& locus_sampler,
    Rng rng, int samples, double locus_band, double tol) {
  VerificationReport rep;
  rep.name = "piecewise-agreement";
  rep.tolerance = tol;

  std::vector<expr::PiecewiseSite> sites;
  std::set<const void*> seen;
  for (int c = 0; c < f.out_dim(); ++c)
    for (auto& site : expr::piecewise_sites(f.component(c)))
      if (seen.insert(site.gate.node()).second) sites.push_back(site);
  rep.details["sites"] = sites.size();
  if (sites.empty()) {
    rep.fail("no piecewise nodes to check");
    return rep;
  }

  std::vector<long> hits(sites.size(), 0);
  Rng rs = rng.sub("locus");
  for (int k = 0; k < samples; ++k) {
    const auto x = locus_sampler(rs);
    for (std::size_t s = 0; s < sites.size(); ++s) {
      double gate = 0;
      try {
        gate = sites[s].gate.eval(x);
      } catch (const expr::EvalError&) {
        continue;  // gate undefined here, so the node never fires at x
      }
      if (std::abs(gate) > locus_band) continue;
      ++hits[s];
      try {
        const Jet2 a = sites[s].if_nonneg.jet(x);
        const Jet2 b = sites[s].if_neg.jet(x);
        rep.sample(std::abs(a.value - b.value), x, "branch values split");
        rep.sample((a.grad - b.grad).cwiseAbs().maxCoeff(), x, "branch gradients split");
        rep.sample((a.hess - b.hess).cwiseAbs().maxCoeff(), x, "branch curvatures split");
      } catch (const expr::EvalError& e) {
        rep.fail(std::string("branch evaluation failed on the locus: ") + e.what());
      }
    }
  }
  long total_hits = 0;
  for (std::size_t s = 0; s < sites.size(); ++s) total_hits += hits[s];
  rep.details["locus_hits"] = hits;
  if (total_hits == 0) rep.fail("sampler never reached an agreement locus");
  return rep;
}

}  // namespace swb::smoothcalc
