#include <doctest.h>

#include <cmath>
#include <vector>

#include "swb/fibrancy.hpp"
#include "swb/simplicial.hpp"
#include "swb/smoothcalc.hpp"

using namespace swb;
using namespace swb::fibrancy;
using expr::Expr;
using expr::Poly;
using expr::SmoothMap;

namespace {

const Expr x0 = Expr::coord(0);
const Expr x1 = Expr::coord(1);
const Expr x2 = Expr::coord(2);

double diff_norm(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("generating families") {
  const auto half = squared_norm_halfline(3);
  CHECK(half.carrier_dim == 1);
  REQUIRE(half.generators.size() == 1);
  CHECK(half.generators[0].arity() == 3);
  CHECK(half.generators[0].eval({1.0, 2.0, 2.0})[0] == 9.0);
  CHECK_FALSE(half.sub_presentation);

  const auto planes = coordinate_plane_diffeology(3, 2);
  CHECK(planes.carrier_dim == 3);
  REQUIRE(planes.generators.size() == 3);
  for (const auto& g : planes.generators) {
    CHECK(g.arity() == 2);
    CHECK(g.out_dim() == 3);
  }
  CHECK(planes.generators[0].eval({0.3, 0.7}) == std::vector<double>{0.3, 0.7, 0.0});

  const auto lines = coordinate_plane_diffeology(2, 1);
  CHECK(lines.generators.size() == 2);
  CHECK(lines.generators[1].eval({0.4}) == std::vector<double>{0.0, 0.4});

  GeneratedDiffeology bad;
  bad.name = "broken";
  bad.carrier_dim = 2;
  bad.generators.push_back(SmoothMap(1, {x0}));
  CHECK_THROWS_AS(bad.validate(), StructureError);
}

TEST_CASE("horn data shape and compatibility") {
  const SmoothMap g(3, {x0 * x1 + x2 * x2 - 2.0 * x0});
  const HornData f = restrict_to_horn(g);
  CHECK(f.n == 3);
  CHECK(f.out_dim() == 1);
  for (const auto& p : f.pieces) CHECK(p.arity() == 2);
  CHECK(f.pieces[0].eval({0.5, 0.25})[0] == g.eval({0.0, 0.5, 0.25})[0]);
  CHECK(f.pieces[2].eval({0.5, 0.25})[0] == g.eval({0.5, 0.25, 0.0})[0]);

  const auto rep = check_horn_compat(f, Rng(11), 100, 1e-12);
  CHECK(rep.pass);
  CHECK(rep.max_residual <= 1e-12);

  SUBCASE("disagreeing pieces are caught") {
    HornData bad;
    bad.n = 2;
    bad.pieces.push_back(SmoothMap(1, {Expr(0.0)}));
    bad.pieces.push_back(SmoothMap(1, {Expr(0.5)}));
    const auto r = check_horn_compat(bad, Rng(3), 16, 1e-12);
    CHECK_FALSE(r.pass);
    CHECK_THROWS_AS(abelian_horn_filler(bad), StructureError);
  }

  SUBCASE("malformed data is rejected") {
    HornData bad;
    bad.n = 3;
    bad.pieces.assign(2, SmoothMap(2, {x0}));
    CHECK_THROWS_AS(bad.validate(), StructureError);
    bad.pieces.assign(3, SmoothMap(1, {x0}));
    CHECK_THROWS_AS(bad.validate(), StructureError);
  }
}

TEST_CASE("inclusion-exclusion filler") {
  SUBCASE("one piece gives the constant at the origin") {
    HornData f;
    f.n = 1;
    f.pieces.push_back(SmoothMap(0, {Expr(2.5)}));
    const auto filler = abelian_horn_filler(f);
    CHECK(filler.arity() == 1);
    CHECK(filler.eval({17.0})[0] == 2.5);
  }

  SUBCASE("the two dimensional closed form") {
    const Expr ge = 3.0 * x0 * x0 * x1 - 2.0 * x0 * x1 + x0 - 7.0 * x1 + 5.0;
    const auto filler = abelian_horn_filler(restrict_to_horn(SmoothMap(2, {ge})));
    const Poly g = to_polynomial(ge, 2);
    const Poly zero2 = Poly::constant(2, 0);
    const Poly xonly = g.substitute({Poly::coordinate(2, 0), zero2});
    const Poly yonly = g.substitute({zero2, Poly::coordinate(2, 1)});
    const Poly corner = g.substitute({zero2, zero2});
    CHECK(to_polynomial(filler.component(0), 2) == xonly + yonly - corner);
  }

  SUBCASE("restriction reproduces every piece") {
    Rng rng(29);
    for (int n = 2; n <= 4; ++n) {
      Expr g = 1.0;
      Rng coef = rng.sub("coefficients " + std::to_string(n));
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          g = g + std::floor(coef.range(-3.0, 4.0)) * Expr::coord(i) * Expr::coord(j);
      const HornData f = restrict_to_horn(SmoothMap(n, {g}));
      const auto filler = abelian_horn_filler(f);
      const HornData back = restrict_to_horn(filler);
      Rng probe = rng.sub("probe " + std::to_string(n));
      double worst = 0.0;
      for (int s = 0; s < 300; ++s) {
        const auto x = probe.box(n - 1, -2.0, 2.0);
        for (int i = 0; i < n; ++i)
          worst = std::max(worst, diff_norm(back.pieces[i].eval(x), f.pieces[i].eval(x)));
      }
      CHECK(worst < 1e-9);
    }
  }

  SUBCASE("terms that each miss a coordinate are reproduced exactly") {
    const Expr g2 = x0 + 3.0 * x1 - 1.0;
    const auto f2 = abelian_horn_filler(restrict_to_horn(SmoothMap(2, {g2})));
    const Expr g3 = x0 * x1 + x1 * x2 + x0 - 2.0 * x2 + 7.0;
    const auto f3 = abelian_horn_filler(restrict_to_horn(SmoothMap(3, {g3})));
    for (double u = -1.5; u <= 1.5; u += 0.25)
      for (double v = -1.5; v <= 1.5; v += 0.25) {
        CHECK(f2.eval({u, v})[0] == g2.eval({u, v}));
        CHECK(f3.eval({u, v, 0.75})[0] == g3.eval({u, v, 0.75}));
      }
  }

  SUBCASE("vector valued data fills componentwise") {
    const SmoothMap g(2, {x0 * x1 + x0, x1 - 2.0});
    const auto filler = abelian_horn_filler(restrict_to_horn(g));
    CHECK(filler.out_dim() == 2);
    CHECK(filler.eval({0.5, 0.0}) == g.eval({0.5, 0.0}));
    CHECK(filler.eval({0.0, -0.75}) == g.eval({0.0, -0.75}));
  }
}

TEST_CASE("horn data serializes") {
  HornData f;
  f.n = 2;
  f.pieces.push_back(SmoothMap(1, {sin(x0) + 0.5}));
  f.pieces.push_back(SmoothMap(1, {exp(x0 * x0) - 0.5}));
  const HornData back = horn_from_json(to_json(f));
  CHECK(back.n == 2);
  for (int i = 0; i < 2; ++i)
    for (double t : {-0.8, 0.0, 1.3})
      CHECK(back.pieces[i].eval({t}) == f.pieces[i].eval({t}));
  CHECK_THROWS(horn_from_json(nlohmann::json{{"n", 2}}));
}

TEST_CASE("two triangle circle") {
  const CircleModel m = circle_model();
  CHECK(sset::check_identities(m.complex.source()).pass);
  CHECK(m.complex.cell_counts() == std::vector<int>{2, 4, 2});
  CHECK(m.complex.maximal_cells().size() == 2);

  const auto seams = realize::seam_set(m.complex);
  REQUIRE(seams.seams.size() == 2);
  for (const auto& s : seams.seams) {
    CHECK(s.cell.degree == 1);
    CHECK(s.incident.size() == 2);
  }
  CHECK(realize::check_gluing(m.complex, Rng(5)).pass);

  SUBCASE("chart values at the vertices") {
    const auto left = m.chart_a.eval({1.0, 0.0, 0.0});
    CHECK(std::abs(left[0] + 1.0) <= 1e-12);
    CHECK(std::abs(left[1]) <= 1e-12);
    CHECK(m.chart_a.eval({0.0, 1.0, 0.0}) == std::vector<double>{1.0, 0.0});
    const auto far_b = m.chart_b.eval({0.0, 0.0, 1.0});
    CHECK(std::abs(far_b[0] - 1.0) <= 1e-12);
  }

  SUBCASE("the charts agree along both glued edges") {
    for (int k = 0; k <= 40; ++k) {
      const double s = k / 40.0;
      const auto a1 = m.chart_a.eval({1.0 - s, s, 0.0});
      const auto a2 = m.chart_b.eval({0.0, 1.0 - s, s});
      CHECK(diff_norm(a1, a2) <= 1e-12);
      const std::vector<double> wa{std::cos(M_PI * (s - 1.0)), std::sin(M_PI * (s - 1.0))};
      CHECK(diff_norm(a1, wa) <= 1e-12);
      const auto b1 = m.chart_a.eval({0.0, 1.0 - s, s});
      const auto b2 = m.chart_b.eval({1.0 - s, s, 0.0});
      CHECK(diff_norm(b1, b2) <= 1e-12);
      const std::vector<double> wb{std::cos(M_PI * s), std::sin(M_PI * s)};
      CHECK(diff_norm(b1, wb) <= 1e-12);
    }
  }

  SUBCASE("the chart value only depends on the glued class") {
    const auto via_a = m.value({m.triangle_a, {1.0, 0.0, 0.0}});
    const auto via_b = m.value({m.triangle_b, {0.0, 1.0, 0.0}});
    CHECK(via_a == via_b);
    const auto edge_a = m.value({m.triangle_a, {0.6, 0.4, 0.0}});
    const auto edge_b = m.value({m.triangle_b, {0.0, 0.6, 0.4}});
    CHECK(diff_norm(edge_a, edge_b) == 0.0);
  }
}

TEST_CASE("section curve") {
  const SmoothMap c = section_branch(0.2);

  SUBCASE("the blend pins the middle height at both anchors") {
    CHECK(c.eval({0.0})[1] == 0.5);
    CHECK(c.eval({0.5})[1] == 0.5);
    CHECK(c.eval({0.5}) == std::vector<double>{0.0, 0.5, 0.5});
    CHECK(c.eval({-0.5}) == std::vector<double>{0.5, 0.5, 0.0});
  }

  SUBCASE("coordinates sum to one") {
    for (double t = -0.5; t <= 0.5; t += 0.01) {
      const auto v = c.eval({t});
      CHECK(std::abs(v[0] + v[1] + v[2] - 1.0) <= 1e-12);
    }
  }

  SUBCASE("the curve rides the glued edges exactly") {
    CHECK(c.eval({0.4375}) == std::vector<double>{0.0, 0.5625, 0.4375});
    for (double t : {0.41, 0.43, 0.46, 0.49, 0.5}) {
      CHECK(c.eval({t})[0] == 0.0);
      CHECK(c.eval({-t})[2] == 0.0);
    }
  }

  SUBCASE("section points wrap and split between the triangles") {
    const CircleModel m = circle_model();
    const auto p = circle_section(0.25, 0.2);
    CHECK(p.cell == m.triangle_a);
    CHECK(p.coords == c.eval({0.25}));
    const auto q = circle_section(0.75, 0.2);
    CHECK(q.cell == m.triangle_b);
    CHECK(q.coords == c.eval({-0.25}));
    const auto w = circle_section(0.25 + 2.0, 0.2);
    CHECK(w.cell == p.cell);
    CHECK(w.coords == p.coords);
    const auto e = circle_section(1.5, 0.2);
    CHECK(e.cell == m.triangle_a);
    CHECK(e.coords == c.eval({-0.5}));
  }

  SUBCASE("branch switch lands in one glued class") {
    const CircleModel m = circle_model();
    const auto na = realize::normal_form(m.complex, {m.triangle_a, c.eval({0.5})});
    const auto nb = realize::normal_form(m.complex, {m.triangle_b, c.eval({-0.5})});
    CHECK(na.cell == nb.cell);
    CHECK(na.cell == *m.complex.source().find("b"));
    CHECK(na.coords == nb.coords);
    CHECK(na.coords == std::vector<double>{0.5, 0.5});
  }
}

TEST_CASE("circle retract verification") {
  for (double eps : {0.1, 0.2, 0.3}) {
    const auto rep = verify_circle_retract(eps, 2000, Rng(17));
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-9);
    CHECK(rep.details.at("seam_jet_gap").get<double>() <= 1e-6);
  }

  SUBCASE("the unblended section is rejected for its kink") {
    const auto rep = verify_circle_retract(0.2, 500, Rng(17), false);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_residual <= 1e-9);  // the retract identity itself still holds
    CHECK(rep.details.at("seam_jet_gap").get<double>() <= 1e-6);
    CHECK(rep.details.at("exact_edge_zeros").get<int>() == 50);
    bool kink = false;
    for (const auto& f : rep.failures) kink |= f.find("kink") != std::string::npos;
    CHECK(kink);
  }
}

TEST_CASE("half line obstruction") {
  const auto out = halfline_obstruction();
  CHECK(out.diag_second_exact == -6);
  CHECK(std::abs(out.diag_second_jets - (-6.0)) <= 1e-9);
  CHECK(out.forced_hessian(0, 0) == 2.0);
  CHECK(out.forced_hessian(1, 1) == 2.0);
  CHECK(out.forced_hessian(0, 1) == -2.0);
  CHECK(out.forced_hessian(2, 0) == -2.0);
  CHECK(out.forced_gradient.norm() == 0.0);
  CHECK(out.extension_impossible);
  CHECK(out.report.pass);
  CHECK(out.report.failures.empty());
}

TEST_CASE("rank analysis") {
  SUBCASE("a candidate factoring through a line cannot restrict to the identity") {
    const SmoothMap cand(2, {x0, Expr(0.0)});
    const auto out = rank_obstruction(cand, coordinate_plane_diffeology(2, 1), 2, 1);
    CHECK(out.measured_rank == 1);
    CHECK(out.required_rank == 2);
    CHECK(out.contradiction);
    CHECK_FALSE(out.boundary_identity_holds);
    CHECK_FALSE(out.report.pass);
  }

  SUBCASE("the identity with no declared factorization raises nothing") {
    const auto out =
        rank_obstruction(SmoothMap::identity(2), coordinate_plane_diffeology(2, 1), 2, -1);
    CHECK(out.measured_rank == 2);
    CHECK_FALSE(out.contradiction);
    CHECK(out.boundary_identity_holds);
    CHECK(out.report.pass);
    CHECK(out.factor_bound == -1);
  }

  SUBCASE("coordinate planes in three dimensions") {
    const SmoothMap cand(3, {x0, x1, Expr(0.0)});
    const auto out = rank_obstruction(cand, coordinate_plane_diffeology(3, 2), 3, 2);
    CHECK(out.measured_rank == 2);
    CHECK(out.required_rank == 3);
    CHECK(out.contradiction);
  }

  SUBCASE("plots wider than the declared dimension are rejected") {
    CHECK_THROWS_AS(rank_obstruction(SmoothMap::identity(3), coordinate_plane_diffeology(3, 2),
                                     3, 1),
                    StructureError);
  }
}

TEST_CASE("lifting circle data through the winding projection") {
  SUBCASE("constant data fills as a constant") {
    HornData f;
    f.n = 2;
    f.pieces.assign(2, SmoothMap(1, {Expr(0.25)}));
    const auto out = lift_horn_through_bundle(f, Rng(23));
    CHECK(out.report.pass);
    CHECK(out.shifts == std::vector<long long>{0, 0});
    CHECK(out.phase.eval({3.0, -1.0})[0] == 0.25);
    const auto v = out.circle_map.eval({3.0, -1.0});
    CHECK(std::abs(v[0]) <= 1e-12);
    CHECK(std::abs(v[1] - 1.0) <= 1e-12);
  }

  SUBCASE("affine phases differing by whole turns are unwound") {
    HornData f;
    f.n = 2;
    f.pieces.push_back(SmoothMap(1, {x0}));
    f.pieces.push_back(SmoothMap(1, {x0 + 3.0}));
    const auto out = lift_horn_through_bundle(f, Rng(23));
    CHECK(out.report.pass);
    CHECK(out.report.max_residual < 1e-9);
    CHECK(out.shifts == std::vector<long long>{0, 3});
    CHECK(out.phase.eval({0.5, 0.25})[0] == doctest::Approx(0.75).epsilon(1e-12));
  }

  SUBCASE("three dimensional affine data round trips") {
    const Expr phase = 0.25 + x0 + 2.0 * x1 - x2;
    HornData f = restrict_to_horn(SmoothMap(3, {phase}));
    f.pieces[1] = SmoothMap(2, {f.pieces[1].component(0) - 2.0});
    f.pieces[2] = SmoothMap(2, {f.pieces[2].component(0) + 5.0});
    const auto out = lift_horn_through_bundle(f, Rng(23));
    CHECK(out.report.pass);
    CHECK(out.report.max_residual < 1e-9);
    CHECK(out.shifts == std::vector<long long>{0, -2, 5});
  }

  SUBCASE("fractional basepoint mismatch is rejected") {
    HornData f;
    f.n = 2;
    f.pieces.push_back(SmoothMap(1, {x0}));
    f.pieces.push_back(SmoothMap(1, {x0 + 0.5}));
    CHECK_THROWS_AS(lift_horn_through_bundle(f, Rng(23)), StructureError);
  }

  SUBCASE("drift along an intersection is rejected") {
    HornData f;
    f.n = 3;
    f.pieces.push_back(SmoothMap(2, {x1}));
    f.pieces.push_back(SmoothMap(2, {1.5 * x1}));
    f.pieces.push_back(SmoothMap(2, {x0 + x1}));
    CHECK_THROWS_AS(lift_horn_through_bundle(f, Rng(23)), StructureError);
  }

  SUBCASE("only the small horn sizes are wired up") {
    HornData f;
    f.n = 4;
    f.pieces.assign(4, SmoothMap(3, {Expr(0.0)}));
    CHECK_THROWS_AS(lift_horn_through_bundle(f, Rng(23)), StructureError);
  }
}

TEST_CASE("retraction onto the hyperplane neighbourhood") {
  for (int n : {1, 2, 3}) {
    const auto out = dopen_retraction(n, 0.5, 0.2, Rng(31), 2000);
    CHECK(out.report.pass);
    CHECK(out.report.failures.empty());
  }

  const auto out = dopen_retraction(2, 0.5, 0.2, Rng(31), 500);
  SUBCASE("hyperplane points are bitwise fixed") {
    CHECK(out.map.eval({0.7, 0.0}) == std::vector<double>{0.7, 0.0});
    CHECK(out.map.eval({0.0, -2.3}) == std::vector<double>{0.0, -2.3});
    CHECK(out.scale.eval({0.7, 0.0})[0] == 1.0);
  }
  SUBCASE("small products stay inside the flat zone") {
    CHECK(out.map.eval({0.1, 0.1}) == std::vector<double>{0.1, 0.1});
  }
  SUBCASE("far points collapse to the origin") {
    CHECK(out.map.eval({3.0, 3.0}) == std::vector<double>{0.0, 0.0});
    CHECK(out.scale.eval({3.0, 3.0})[0] == 0.0);
  }
  SUBCASE("parameters are validated") {
    CHECK_THROWS_AS(dopen_retraction(0, 0.5, 0.2, Rng(1), 10), StructureError);
    CHECK_THROWS_AS(dopen_retraction(2, -1.0, 0.2, Rng(1), 10), StructureError);
    CHECK_THROWS_AS(dopen_retraction(2, 0.5, 0.7, Rng(1), 10), StructureError);
  }
}

TEST_CASE("loop retract") {
  const SmoothMap psi = loop_bump();
  CHECK(psi.eval({0.5})[0] == 1.0);
  CHECK(psi.eval({0.25})[0] == 0.5);
  CHECK(psi.eval({0.0})[0] == 0.0);
  CHECK(psi.eval({1.0})[0] == 0.0);
  CHECK(psi.eval({-0.3})[0] == 0.0);
  CHECK(psi.eval({1.4})[0] == 0.0);

  for (int n : {2, 3}) {
    const auto rep = loop_retract_H(n, psi, Rng(41), 300);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
  }

  SUBCASE("profiles that break the contract are rejected") {
    const Expr t = Expr::coord(0);
    const SmoothMap open_end(1, {smoothcalc::cutoff_expr(2.0 * t, 0.25)});
    CHECK_THROWS_AS(loop_retract_H(2, open_end, Rng(41)), StructureError);
    CHECK_THROWS_AS(loop_retract_H(2, SmoothMap(1, {Expr(0.0)}), Rng(41)), StructureError);
    CHECK_THROWS_AS(loop_retract_H(0, psi, Rng(41)), StructureError);
  }
}
