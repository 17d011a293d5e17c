#include <doctest.h>

#include <cmath>
#include <vector>

#include "swb/smoothcalc.hpp"

using namespace swb;
using namespace swb::smoothcalc;
using expr::Expr;
using expr::SmoothMap;

namespace {
double phi(const SmoothMap& c, double t) { return c.eval({t})[0]; }
}  // namespace

TEST_CASE("cutoff is exactly flat outside its ramp") {
  for (double eps : {0.1, 0.2, 0.25, 0.3}) {
    const auto c = make_cutoff(eps);
    for (double t : {-1.0, 0.0, eps / 2, eps}) CHECK(phi(c, t) == 0.0);
    for (double t : {1.0 - eps, 1.0 - eps / 2, 1.0, 2.0}) CHECK(phi(c, t) == 1.0);
  }

  SUBCASE("midpoint value") {
    CHECK(phi(make_cutoff(0.25), 0.5) == 0.5);  // dyadic shoulder, both bumps identical
    for (double eps : {0.1, 0.2, 0.3})
      CHECK(std::abs(phi(make_cutoff(eps), 0.5) - 0.5) <= 1e-15);
  }

  SUBCASE("monotone and within the unit interval") {
    const auto c = make_cutoff(0.2);
    double prev = -1.0;
    for (int i = 0; i <= 240; ++i) {
      const double v = phi(c, -0.1 + i * 0.005);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v >= prev);
      prev = v;
    }
  }

  SUBCASE("the flat zones end asymmetrically past the shoulders") {
    // Near the lower shoulder the small bump sits in the numerator, so the
    // value leaves zero as soon as exp(-1/d) stops underflowing (d about
    // 2e-3). Near the upper shoulder it sits in a sum with the large bump
    // and is absorbed until it clears one ulp of it, which takes d about
    // 0.03. Anything relying on strict interior values must respect both.
    const auto c = make_cutoff(0.1);
    CHECK(phi(c, 0.1 + 1e-3) == 0.0);
    CHECK(phi(c, 0.1 + 2e-3) > 0.0);
    CHECK(phi(c, 0.9 - 2e-3) == 1.0);
    CHECK(phi(c, 0.9 - 0.05) < 1.0);
  }

  SUBCASE("jets agree with finite differences across the ramp") {
    const auto rep =
        expr::check_jets_fd(make_cutoff(0.1), {{0.15}, {0.3}, {0.5}, {0.7}, {0.85}});
    CHECK(rep.pass);
  }

  SUBCASE("shoulder validation") {
    CHECK_THROWS_AS(make_cutoff(0.0), expr::StructureError);
    CHECK_THROWS_AS(make_cutoff(0.49), expr::StructureError);
  }
}

TEST_CASE("pair charts score membership and sample consistently") {
  SUBCASE("hand points") {
    const auto cube = pair_cube_boundary(3);
    CHECK(cube.sub_violation({0.0, 0.5, 1.0}) == 0.0);
    CHECK(cube.sub_violation({0.5, 0.5, 0.5}) == 0.5);
    CHECK(cube.total_violation({1.2, 0.0, 0.0}) == doctest::Approx(0.2));

    const auto collar = pair_plane_collar(2, 0.1);
    CHECK(collar.sub_violation({0.05, 0.5}) == 0.0);
    CHECK(collar.sub_violation({0.5, 0.5}) == doctest::Approx(0.4));
    CHECK(collar.sub_violation({0.95, 0.5}) == 0.0);

    const auto splx = pair_simplex_boundary(2);
    CHECK(splx.sub_violation({0.0, 0.3, 0.7}) == 0.0);
    CHECK(splx.sub_violation({1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
          doctest::Approx(1.0 / 3).epsilon(1e-12));

    const auto pole = pair_sphere_pole(2);
    CHECK(pole.sub_violation({0.0, 0.0, 1.0}) == 0.0);
    CHECK(pole.sub_violation({1.0, 0.0, 0.0}) == doctest::Approx(std::sqrt(2.0)));

    const auto hemi = pair_sphere_hemisphere(2);
    CHECK(hemi.sub_violation({0.6, 0.0, 0.8}) == 0.0);
    CHECK(hemi.sub_violation({0.6, 0.0, -0.8}) == doctest::Approx(0.8));
  }

  SUBCASE("samplers land where their violations vanish") {
    std::vector<PairSpec> specs = {
        pair_plane_walls(2),          pair_plane_collar(2, 0.15),
        pair_cube_boundary(3),        pair_cube_collar(2, 0.2),
        pair_simplex_boundary(2),     pair_simplex_collar(2, 0.2),
        pair_disk_sphere(2),          pair_disk_collar(3, 0.1),
        pair_sphere_pole(1),          pair_sphere_hemisphere(2),
    };
    Rng rng(101);
    for (const auto& spec : specs) {
      Rng r = rng.sub(spec.name);
      for (int k = 0; k < 200; ++k) {
        const auto x = spec.sample_total(r);
        CHECK(static_cast<int>(x.size()) == spec.dim);
        CHECK(spec.total_violation(x) <= 1e-12);
        const auto a = spec.sample_sub(r);
        CHECK(spec.sub_violation(a) <= 1e-12);
      }
    }
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(pair_simplex_collar(2, 0.4), expr::StructureError);
    CHECK_THROWS_AS(pair_plane_collar(2, 0.7), expr::StructureError);
  }
}

TEST_CASE("maps of pairs") {
  const auto cube = pair_cube_boundary(2);
  const auto collar = pair_plane_collar(2, 0.2);

  SUBCASE("the chart inclusion respects both layers") {
    const auto rep = verify_map_of_pairs(SmoothMap::identity(2), cube, collar, Rng(5), 200);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
  }

  SUBCASE("the coordinatewise cutoff crushes the collar onto the walls") {
    const SmoothMap snap(2, {cutoff_expr(Expr::coord(0), 0.2),
                             cutoff_expr(Expr::coord(1), 0.2)});
    const auto rep = verify_map_of_pairs(snap, collar, cube, Rng(6), 200);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
  }

  SUBCASE("a constant interior map is no map of pairs") {
    const auto rep = verify_map_of_pairs(SmoothMap::constant(2, {0.5, 0.5}), cube, cube,
                                         Rng(7), 50);
    CHECK_FALSE(rep.pass);
    CHECK(rep.witness.has_value());
  }

  SUBCASE("collapse onto a basepoint") {
    const Expr hat0 = cutoff_expr(Expr::coord(0), 0.2) *
                      cutoff_expr(1.0 - Expr::coord(0), 0.2);
    const Expr hat1 = cutoff_expr(Expr::coord(1), 0.2) *
                      cutoff_expr(1.0 - Expr::coord(1), 0.2);
    const SmoothMap mask(2, {hat0 * hat1});
    const auto cc = pair_cube_collar(2, 0.2);
    const auto rep = verify_map_sends_sub_to_point(mask, cc, {0.0}, Rng(8), 200);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
    CHECK_FALSE(verify_map_sends_sub_to_point(mask, cc, {0.5}, Rng(8), 50).pass);
  }
}

TEST_CASE("homotopies through pair maps") {
  const auto collar1 = pair_plane_collar(1, 0.2);
  const Expr x = Expr::coord(0), t = Expr::coord(1);

  SUBCASE("straight line from the cutoff to the identity stays in the pair") {
    const SmoothMap H(2, {t * x + (1.0 - t) * cutoff_expr(x, 0.2)});
    const SmoothMap f(1, {cutoff_expr(Expr::coord(0), 0.2)});
    const auto rep =
        verify_homotopy(H, collar1, collar1, f, SmoothMap::identity(1), Rng(9), 160);
    CHECK(rep.pass);
  }

  SUBCASE("an endpoint mismatch is caught") {
    const SmoothMap H(2, {x});
    const auto rep = verify_homotopy(H, collar1, collar1, SmoothMap::identity(1),
                                     SmoothMap::constant(1, {0.0}), Rng(10), 60);
    CHECK_FALSE(rep.pass);
  }

  SUBCASE("a slice that bulges out of the subspace is caught") {
    const SmoothMap H(2, {x + 2.0 * t * (1.0 - t)});
    const auto rep = verify_homotopy(H, collar1, collar1, SmoothMap::identity(1),
                                     SmoothMap::identity(1), Rng(11), 60);
    CHECK_FALSE(rep.pass);
  }
}

TEST_CASE("piecewise branches must agree where they meet") {
  const Expr x = Expr::coord(0);
  // The cubic's branches agree to third order only, so their Hessians drift
  // apart at 12|x|; stay within 1e-14 of the locus to keep that below tol.
  auto near_zero = [](Rng& r) {
    return std::vector<double>{r.pick(2) ? 0.0 : r.range(-1e-14, 1e-14)};
  };

  SUBCASE("an odd cubic split at zero") {
    const SmoothMap f(1, {Expr::piecewise(x, x * x * x, 0.0 - x * x * x)});
    const auto rep = verify_piecewise_agreement(f, near_zero, Rng(12), 100);
    CHECK(rep.pass);
    CHECK(rep.samples_used > 0);
  }

  SUBCASE("a kink hiding behind a declared agreement") {
    const SmoothMap vee(1, {Expr::piecewise(x, 1.0 - x, 1.0 + x)});
    const auto rep = verify_piecewise_agreement(vee, near_zero, Rng(13), 100);
    CHECK_FALSE(rep.pass);
  }

  SUBCASE("a sampler that never finds the locus fails loudly") {
    const SmoothMap f(1, {Expr::piecewise(x, x * x * x, 0.0 - x * x * x)});
    auto far = [](Rng&) { return std::vector<double>{5.0}; };
    const auto rep = verify_piecewise_agreement(f, far, Rng(14), 50);
    CHECK_FALSE(rep.pass);
  }
}
