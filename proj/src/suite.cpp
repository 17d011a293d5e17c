#include "swb/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "swb/fibrancy.hpp"
#include "swb/pairs.hpp"
#include "swb/realize.hpp"
#include "swb/simplicial.hpp"
#include "swb/smoothcalc.hpp"

namespace swb::suite {

namespace {

using expr::Expr;
using expr::Poly;
using expr::SmoothMap;

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

VerificationReport check_simplicial_identities(const CheckContext&) {
  VerificationReport rep;
  rep.name = "simplicial-identities";
  auto take = [&](const std::string& label, const sset::SimplicialSet& a) {
    auto sub = sset::check_identities(a);
    rep.sample(sub.max_residual, {}, label);
    if (!sub.pass) rep.fail("identities fail on " + label);
  };
  for (int n = 0; n <= 4; ++n) take("delta(" + std::to_string(n) + ")", sset::delta(n));
  for (int n = 1; n <= 4; ++n)
    take("boundary(" + std::to_string(n) + ")", sset::boundary_delta(n));
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k <= n; ++k)
      take("horn(" + std::to_string(n) + "," + std::to_string(k) + ")", sset::horn(n, k));
  take("square", sset::product(sset::delta(1, 2), sset::delta(1, 2)).set());
  rep.details["shapes_checked"] = rep.samples_used;
  return rep;
}

VerificationReport check_homology_tables(const CheckContext&) {
  VerificationReport rep;
  rep.name = "homology-and-counts";
  auto expect = [&](const std::string& label, const HomologySummary& h, int free_rank) {
    if (h.free_rank != free_rank || !h.torsion.empty())
      rep.fail(label + ": free rank " + std::to_string(h.free_rank) + " with " +
               std::to_string(h.torsion.size()) + " torsion factors");
    else
      rep.sample(0.0, {}, label);
  };
  for (int n = 1; n <= 4; ++n) {
    const auto d = sset::delta(n);
    expect("H0 of delta(" + std::to_string(n) + ")", sset::homology(d, 0), 1);
    for (int q = 1; q <= n; ++q)
      expect("H" + std::to_string(q) + " of delta(" + std::to_string(n) + ")",
             sset::homology(d, q), 0);
  }
  for (int n = 2; n <= 3; ++n) {
    const auto b = sset::boundary_delta(n);
    expect("H0 of boundary(" + std::to_string(n) + ")", sset::homology(b, 0), 1);
    for (int q = 1; q < n; ++q)
      expect("H" + std::to_string(q) + " of boundary(" + std::to_string(n) + ")",
             sset::homology(b, q), q == n - 1 ? 1 : 0);
  }
  const auto square = sset::product(sset::delta(1, 2), sset::delta(1, 2)).set();
  const std::vector<int> counts = square.counts();
  rep.details["square_counts"] = counts;
  if (counts != std::vector<int>{4, 5, 2})
    rep.fail("square generator counts off");
  else
    rep.sample(0.0, {}, "square counts");
  return rep;
}

VerificationReport check_missing_horn_filler(const CheckContext&) {
  VerificationReport rep;
  rep.name = "missing-horn-filler";
  const auto b = sset::boundary_delta(2, 2);
  const std::vector<sset::SimplexRef> images{*b.find("1.2"), sset::SimplexRef{},
                                             *b.find("0.1")};
  const auto res = sset::find_horn_filler(b, 2, 1, images);
  rep.details["candidates_examined"] = res.candidates_examined;
  if (res.filler.has_value())
    rep.fail("the hollow triangle reports an inner filler: " + b.describe(*res.filler));
  else
    rep.sample(0.0, {}, "hollow triangle has no inner filler");

  const auto d = sset::delta(2);
  const sset::SimplexRef top{2, 0, {}};
  const auto found =
      sset::find_horn_filler(d, 2, 1, {d.face(top, 0), sset::SimplexRef{}, d.face(top, 2)});
  if (!found.filler.has_value() || *found.filler != top)
    rep.fail("the solid triangle fails to fill its own horn");
  else
    rep.sample(0.0, {}, "solid triangle fills");
  return rep;
}

VerificationReport check_pair_composites(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "pair-composites";
  rep.tolerance = ctx.tol;
  auto take = [&](pairs::Equivalence e, int n) {
    const std::string label = e.name + " [n=" + std::to_string(n) + "]";
    auto sub = pairs::verify_equivalence(e, ctx.rng.sub(label), ctx.budget, ctx.tol);
    sub.name = label;
    rep.absorb(sub);
  };
  for (int n = 1; n <= 3; ++n) {
    take(pairs::equidef_walls_collar(n, 0.2), n);
    take(pairs::equidef_cube_boundary_collar(n, 0.2), n);
    take(pairs::equidef_cube_collar_collar(n, 0.2), n);
    take(pairs::equidef_simplex_collar_plane(n, n < 3 ? 0.25 : 0.22, 0.2), n);
    take(pairs::equidef_simplex_boundary_collar(n, 0.2), n);
    take(pairs::equidef_disk_collar_plane(n, 0.2, 0.2), n);
    take(pairs::equidef_disk_sphere_collar(n, 0.2), n);
  }
  for (int n = 1; n <= 2; ++n) {
    take(pairs::equator_raise(n), n);
    take(pairs::stereographic(n, 0.2), n);
    for (auto& leg : pairs::sphere_pole_chain(n, 0.2)) take(leg, n);
  }
  return rep;
}

VerificationReport check_jet_corpus(const CheckContext&) {
  VerificationReport rep;
  rep.name = "jet-corpus";
  rep.tolerance = 1.0;  // residuals are ratios against the per-entry allowance
  for (const auto& entry : expression_corpus()) {
    auto sub = expr::check_jets_fd(entry.map, entry.points);
    sub.name = entry.name;
    rep.absorb(sub);
  }
  return rep;
}

VerificationReport check_horn_cell_counts(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "horn-cell-counts";
  rep.tolerance = ctx.tol;
  for (int n = 2; n <= 4; ++n) {
    for (int k = 0; k <= n; ++k) {
      const std::string label = "horn(" + std::to_string(n) + "," + std::to_string(k) + ")";
      const realize::CellComplex cx(sset::horn(n, k));
      const auto maximal = cx.maximal_cells();
      bool tops_ok = static_cast<int>(maximal.size()) == n;
      for (const auto& m : maximal) tops_ok = tops_ok && m.degree == n - 1;
      const auto sr = realize::seam_set(cx);
      bool seams_ok = sr.total() == n * (n - 1) / 2;
      for (const auto& s : sr.seams)
        seams_ok = seams_ok && s.cell.degree == n - 2 && s.incident.size() >= 2;
      if (!tops_ok)
        rep.fail(label + ": expected " + std::to_string(n) + " top cells");
      else if (!seams_ok)
        rep.fail(label + ": expected " + std::to_string(n * (n - 1) / 2) + " seams one" +
                 " dimension down");
      else
        rep.sample(0.0, {}, label);
      rep.details[label] = {{"maximal", maximal.size()}, {"seams", sr.total()}};
      const auto glue = realize::check_gluing(cx, ctx.rng.sub(label));
      rep.sample(glue.max_residual, {}, label + " gluing");
      if (!glue.pass) rep.fail(label + ": gluing checks fail");
    }
  }
  return rep;
}

VerificationReport check_square_seam(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "square-seam";
  rep.tolerance = ctx.tol;
  const realize::CellComplex cx(sset::product(sset::delta(1, 2), sset::delta(1, 2)).set());
  if (cx.cell_counts() != std::vector<int>{4, 5, 2}) rep.fail("square cell counts off");
  if (cx.maximal_cells().size() != 2) rep.fail("square should have two top cells");
  const auto sr = realize::seam_set(cx);
  rep.details["seam_count"] = sr.total();
  if (sr.total() != 1 || sr.seams[0].cell.degree != 1 || sr.seams[0].incident.size() != 2)
    rep.fail("the two triangles should share exactly one interior edge");
  else
    rep.sample(0.0, {}, "one diagonal seam");
  auto glue = realize::check_gluing(cx, ctx.rng.sub("gluing"));
  glue.name = "gluing";
  rep.absorb(glue);
  auto lines = realize::boundary_lines_pairwise_meet(cx);
  lines.name = "boundary-lines";
  rep.absorb(lines);
  return rep;
}

VerificationReport check_product_map_probe(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "product-map-probe";
  rep.tolerance = ctx.tol;
  const auto ab = sset::product(sset::delta(1, 2), sset::delta(1, 2));
  const sset::SimplexRef a = *ab.left().find("0.1");
  const sset::SimplexRef b = *ab.right().find("0.1");
  const sset::SimplexRef sig1 =
      ab.pair(sset::apply_degeneracy(a, 0), sset::apply_degeneracy(b, 1));
  const sset::SimplexRef sig2 =
      ab.pair(sset::apply_degeneracy(a, 1), sset::apply_degeneracy(b, 0));
  const realize::CellComplex cx(ab.set());
  const realize::CellComplex ca(ab.left());
  const realize::CellComplex cb(ab.right());

  // two distinct glued classes whose projection images coincide
  const realize::RealPoint p1{sig1, {0.0, 1.0, 0.0}};
  const realize::RealPoint p2{sig2, {1.0, -1.0, 1.0}};
  const auto n1 = realize::normal_form(cx, p1);
  const auto n2 = realize::normal_form(cx, p2);
  const auto [l1, r1] = realize::natural_product_map(ab, p1);
  const auto [l2, r2] = realize::natural_product_map(ab, p2);
  const bool distinct = !(n1.cell == n2.cell);
  const bool same_images = l1.cell == l2.cell && r1.cell == r2.cell &&
                           l1.coords == l2.coords && r1.coords == r2.coords;
  rep.details["witness_first"] = {{"cell", ab.set().describe(sig1)}, {"coords", p1.coords}};
  rep.details["witness_second"] = {{"cell", ab.set().describe(sig2)}, {"coords", p2.coords}};
  if (!distinct || !same_images)
    rep.fail("witness pair fails: distinct classes with equal projections expected");
  else
    rep.sample(0.0, p2.coords, "non-injectivity witness");

  // closed-form preimage sweep covering the grid of projection targets
  const sset::SimplexRef aa = *ab.left().find("0.1");
  const sset::SimplexRef bb = *ab.right().find("0.1");
  int hits = 0;
  for (int ki = 0; ki < 32; ++ki) {
    for (int kj = 0; kj < 32; ++kj) {
      const double u = -1.5 + 0.125 * ki;
      const double v = -1.5 + 0.125 * kj;
      const realize::RealPoint probe{sig1, {1.0 - v, v - u, u}};
      const auto [lu, rv] = realize::natural_product_map(ab, probe);
      const auto want_l = realize::normal_form(ca, {aa, {1.0 - u, u}});
      const auto want_r = realize::normal_form(cb, {bb, {1.0 - v, v}});
      if (lu.cell == want_l.cell && rv.cell == want_r.cell) {
        rep.sample(std::max(max_diff(lu.coords, want_l.coords),
                            max_diff(rv.coords, want_r.coords)),
                   {u, v}, "grid probe");
        ++hits;
      } else {
        rep.fail("projection misses its target at u=" + std::to_string(u) +
                 " v=" + std::to_string(v));
      }
    }
  }
  rep.details["grid_hits"] = hits;
  if (hits != 32 * 32) rep.fail("surjectivity grid incomplete");
  return rep;
}

VerificationReport check_halfline_obstruction(const CheckContext&) {
  auto out = fibrancy::halfline_obstruction();
  VerificationReport rep = out.report;
  rep.name = "halfline-obstruction";
  if (out.diag_second_exact != -6)
    rep.fail("diagonal second derivative should be exactly -6, got " +
             std::to_string(out.diag_second_exact));
  const bool forced_ok = out.forced_hessian(0, 0) == 2.0 && out.forced_hessian(1, 1) == 2.0 &&
                         out.forced_hessian(2, 2) == 2.0 && out.forced_hessian(0, 1) == -2.0 &&
                         out.forced_hessian(1, 2) == -2.0 && out.forced_hessian(0, 2) == -2.0;
  if (!forced_ok) rep.fail("forced second derivatives off the book values 2 and -2");
  if (out.forced_gradient.norm() != 0.0) rep.fail("forced gradient should vanish");
  return rep;
}

VerificationReport check_abelian_filler(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "abelian-filler";
  rep.tolerance = ctx.tol;
  const int instances = 50;
  for (int n = 1; n <= 4; ++n) {
    Rng stream = ctx.rng.sub("n=" + std::to_string(n));
    const int per_stratum = std::max(1, (ctx.budget + 150 * n - 1) / (150 * n));
    for (int inst = 0; inst < instances; ++inst) {
      Rng coef = stream.sub("coefficients " + std::to_string(inst));
      Expr g = std::floor(coef.range(-3.0, 4.0));
      for (int i = 0; i < n; ++i) {
        g = g + std::floor(coef.range(-3.0, 4.0)) * Expr::coord(i);
        for (int j = i; j < n; ++j)
          g = g + std::floor(coef.range(-3.0, 4.0)) * Expr::coord(i) * Expr::coord(j);
      }
      const fibrancy::HornData f = fibrancy::restrict_to_horn(SmoothMap(n, {g}));
      const SmoothMap filler =
          fibrancy::abelian_horn_filler(f, stream.sub("fill " + std::to_string(inst)));
      const fibrancy::HornData back = fibrancy::restrict_to_horn(filler);
      Rng probe = stream.sub("probe " + std::to_string(inst));
      for (int s = 0; s < 3; ++s) {
        const double radius = 0.5 * (1 << s);
        for (int q = 0; q < per_stratum; ++q) {
          const auto x = probe.box(std::max(0, n - 1), -radius, radius);
          for (int i = 0; i < n; ++i)
            rep.sample(max_diff(back.pieces[i].eval(x), f.pieces[i].eval(x)), x,
                       "piece " + std::to_string(i) + " at n=" + std::to_string(n));
        }
      }
      if (n == 2) {
        const Poly gp = to_polynomial(g, 2);
        const Poly zero = Poly::constant(2, 0);
        const Poly want = gp.substitute({Poly::coordinate(2, 0), zero}) +
                          gp.substitute({zero, Poly::coordinate(2, 1)}) -
                          gp.substitute({zero, zero});
        if (!(to_polynomial(filler.component(0), 2) == want))
          rep.fail("closed form mismatch in the plane, instance " + std::to_string(inst));
      }
    }
  }
  rep.details["instances_per_size"] = instances;
  return rep;
}

VerificationReport check_circle_retract(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "circle-retract";
  rep.tolerance = ctx.tol;
  for (double eps : {0.1, 0.2, 0.3}) {
    std::ostringstream label;
    label << "eps=" << eps;
    auto sub = fibrancy::verify_circle_retract(eps, ctx.budget, ctx.rng.sub(label.str()));
    sub.name = label.str();
    rep.absorb(sub);
  }
  return rep;
}

VerificationReport check_winding_lift(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "winding-lift";
  rep.tolerance = ctx.tol;
  const Expr t = Expr::coord(0);

  fibrancy::HornData affine;
  affine.n = 2;
  affine.pieces.push_back(SmoothMap(1, {t}));
  affine.pieces.push_back(SmoothMap(1, {t + 3.0}));
  auto out = fibrancy::lift_horn_through_bundle(affine, ctx.rng.sub("affine"));
  out.report.name = "affine-plane";
  rep.absorb(out.report);
  if (out.shifts != std::vector<long long>{0, 3})
    rep.fail("whole-turn shifts misread on the plane data");

  const Expr phase =
      0.25 + Expr::coord(0) + 2.0 * Expr::coord(1) - Expr::coord(2);
  fibrancy::HornData spatial = fibrancy::restrict_to_horn(SmoothMap(3, {phase}));
  spatial.pieces[1] = SmoothMap(2, {spatial.pieces[1].component(0) - 2.0});
  spatial.pieces[2] = SmoothMap(2, {spatial.pieces[2].component(0) + 5.0});
  auto big = fibrancy::lift_horn_through_bundle(spatial, ctx.rng.sub("spatial"));
  big.report.name = "affine-space";
  rep.absorb(big.report);
  if (big.shifts != std::vector<long long>{0, -2, 5})
    rep.fail("whole-turn shifts misread on the space data");

  fibrancy::HornData crooked;
  crooked.n = 2;
  crooked.pieces.push_back(SmoothMap(1, {t}));
  crooked.pieces.push_back(SmoothMap(1, {t + 0.5}));
  try {
    fibrancy::lift_horn_through_bundle(crooked, ctx.rng.sub("crooked"));
    rep.fail("a half-turn basepoint mismatch slipped through");
  } catch (const StructureError&) {
    rep.sample(0.0, {}, "half-turn mismatch rejected");
  }

  fibrancy::HornData drifting;
  drifting.n = 3;
  drifting.pieces.push_back(SmoothMap(2, {Expr::coord(1)}));
  drifting.pieces.push_back(SmoothMap(2, {1.5 * Expr::coord(1)}));
  drifting.pieces.push_back(SmoothMap(2, {Expr::coord(0) + Expr::coord(1)}));
  try {
    fibrancy::lift_horn_through_bundle(drifting, ctx.rng.sub("drifting"));
    rep.fail("drifting pieces slipped through");
  } catch (const StructureError&) {
    rep.sample(0.0, {}, "drift rejected");
  }
  return rep;
}

VerificationReport check_dopen_retraction(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "dopen-retraction";
  for (int n : {1, 2, 3}) {
    const std::string label = "n=" + std::to_string(n);
    auto out = fibrancy::dopen_retraction(n, 0.5, 0.2, ctx.rng.sub(label), ctx.budget);
    out.report.name = label;
    rep.absorb(out.report);
  }
  return rep;
}

VerificationReport check_rank_obstruction(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "rank-obstruction";
  auto record = [&](const std::string& label, const fibrancy::RankObstruction& out,
                    bool want_contradiction) {
    rep.details[label] = {{"measured_rank", out.measured_rank},
                         {"required_rank", out.required_rank},
                         {"factor_bound", out.factor_bound},
                         {"contradiction", out.contradiction}};
    if (out.contradiction != want_contradiction)
      rep.fail(label + ": expected contradiction=" + (want_contradiction ? "yes" : "no"));
    else
      rep.sample(0.0, {}, label);
  };
  const SmoothMap flat2(2, {Expr::coord(0), Expr(0.0)});
  record("project-through-line",
         fibrancy::rank_obstruction(flat2, fibrancy::coordinate_plane_diffeology(2, 1), 2, 1,
                                    ctx.rng.sub("line"), 200),
         true);
  record("identity-unconstrained",
         fibrancy::rank_obstruction(SmoothMap::identity(2),
                                    fibrancy::coordinate_plane_diffeology(2, 1), 2, -1,
                                    ctx.rng.sub("identity"), 200),
         false);
  const SmoothMap flat3(3, {Expr::coord(0), Expr::coord(1), Expr(0.0)});
  record("project-through-plane",
         fibrancy::rank_obstruction(flat3, fibrancy::coordinate_plane_diffeology(3, 2), 3, 2,
                                    ctx.rng.sub("plane"), 200),
         true);
  return rep;
}

VerificationReport check_loop_retract(const CheckContext& ctx) {
  VerificationReport rep;
  rep.name = "loop-retract";
  const SmoothMap psi = fibrancy::loop_bump();
  if (psi.eval({0.5})[0] != 1.0) rep.fail("profile misses full strength at the midpoint");
  if (psi.eval({0.0})[0] != 0.0 || psi.eval({1.0})[0] != 0.0)
    rep.fail("profile fails to vanish at the endpoints");
  for (int n : {2, 3}) {
    auto sub = fibrancy::loop_retract_H(n, psi, ctx.rng.sub("n=" + std::to_string(n)),
                                        ctx.budget);
    sub.name = "n=" + std::to_string(n);
    rep.absorb(sub);
  }
  return rep;
}

std::vector<Check> build_registry() {
  std::vector<Check> reg;
  reg.push_back({"simplicial-identities", "simplicial", 0, 0.0, check_simplicial_identities});
  reg.push_back({"homology-and-counts", "simplicial", 0, 0.0, check_homology_tables});
  reg.push_back({"missing-horn-filler", "simplicial", 0, 0.0, check_missing_horn_filler});
  reg.push_back({"pair-composites", "equidef", 500, 1e-9, check_pair_composites});
  reg.push_back({"jet-corpus", "equidef", 0, 1.0, check_jet_corpus});
  reg.push_back({"horn-cell-counts", "realization", 1000, 1e-9, check_horn_cell_counts});
  reg.push_back({"square-seam", "realization", 1000, 1e-9, check_square_seam});
  reg.push_back({"product-map-probe", "realization", 1024, 1e-12, check_product_map_probe});
  reg.push_back({"halfline-obstruction", "fibrancy", 0, 1e-9, check_halfline_obstruction});
  reg.push_back({"abelian-filler", "fibrancy", 1000, 1e-9, check_abelian_filler});
  reg.push_back({"circle-retract", "fibrancy", 10000, 1e-9, check_circle_retract});
  reg.push_back({"winding-lift", "fibrancy", 1000, 1e-9, check_winding_lift});
  reg.push_back({"dopen-retraction", "fibrancy", 10000, 0.0, check_dopen_retraction});
  reg.push_back({"rank-obstruction", "fibrancy", 200, 1e-9, check_rank_obstruction});
  reg.push_back({"loop-retract", "fibrancy", 1000, 0.0, check_loop_retract});
  return reg;
}

std::string json_number(double v) { return nlohmann::json(v).dump(); }

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

}  // namespace

const std::vector<Check>& check_registry() {
  static const std::vector<Check> reg = build_registry();
  return reg;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& c : check_registry())
    if (std::find(names.begin(), names.end(), c.group) == names.end())
      names.push_back(c.group);
  names.push_back("all");
  return names;
}

SuiteRun run_suite(const SuiteConfig& config) {
  std::vector<const Check*> picked;
  for (const auto& c : check_registry())
    if (config.suite == "all" || config.suite == c.group) picked.push_back(&c);
  if (picked.empty()) {
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw StructureError("unknown suite '" + config.suite + "' (known: " + known + ")");
  }

  SuiteRun run;
  run.results.resize(picked.size());
  const Rng master(config.seed);
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (size_t i = cursor.fetch_add(1); i < picked.size(); i = cursor.fetch_add(1)) {
      const Check& c = *picked[i];
      CheckResult& slot = run.results[i];
      slot.name = c.name;
      slot.group = c.group;
      slot.budget = config.budget > 0 ? config.budget : c.default_budget;
      slot.tol = config.tol > 0.0 ? config.tol : c.default_tol;
      CheckContext ctx{master.sub(c.name), slot.budget, slot.tol};
      try {
        slot.report = c.run(ctx);
      } catch (const std::exception& ex) {
        slot.report = VerificationReport{};
        slot.report.name = c.name;
        slot.report.fail(std::string("check threw: ") + ex.what());
      }
    }
  };
  const int jobs = std::clamp(config.jobs, 1, static_cast<int>(picked.size()));
  std::vector<std::future<void>> pool;
  for (int j = 1; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();

  nlohmann::json lines = nlohmann::json::array();
  std::vector<std::string> failing;
  for (const auto& r : run.results) {
    run.all_passed = run.all_passed && r.report.pass;
    if (!r.report.pass) failing.push_back(r.name);
    run.documents[r.name] = {{"name", r.name},       {"group", r.group},
                             {"seed", config.seed},  {"budget", r.budget},
                             {"tolerance", r.tol},   {"report", r.report.to_json()}};
    lines.push_back({{"name", r.name},
                     {"group", r.group},
                     {"pass", r.report.pass},
                     {"max_residual", r.report.max_residual},
                     {"samples", r.report.samples_used},
                     {"budget", r.budget},
                     {"tolerance", r.tol}});
  }
  run.documents["summary"] = {{"suite", config.suite}, {"seed", config.seed},
                              {"budget", config.budget}, {"tolerance", config.tol},
                              {"checks", lines},       {"all_passed", run.all_passed},
                              {"failing", failing}};

  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    for (const auto& [stem, doc] : run.documents) {
      std::ofstream out(config.out_dir / (stem + ".json"));
      if (!out) throw StructureError("cannot write into " + config.out_dir.string());
      out << doc.dump(2) << '\n';
    }
  }
  return run;
}

PlotTable sample_curve(const std::string& curve, double eps, int samples) {
  if (samples < 2) throw StructureError("a curve needs at least two samples");
  PlotTable t;
  t.name = curve;
  auto grid = [&](double lo, double hi, int k) {
    return lo + (hi - lo) * (static_cast<double>(k) / (samples - 1));
  };
  if (curve == "cutoff") {
    const SmoothMap phi = smoothcalc::make_cutoff(eps);
    t.columns = {"t", "value"};
    for (int k = 0; k < samples; ++k) {
      const double x = grid(0.0, 1.0, k);
      t.rows.push_back({x, phi.eval({x})[0]});
    }
  } else if (curve == "section-height" || curve == "section-coords") {
    const SmoothMap branch = fibrancy::section_branch(eps);
    if (curve == "section-height") {
      t.columns = {"theta", "height"};
      for (int k = 0; k < samples; ++k) {
        const double th = grid(-0.5, 0.5, k);
        t.rows.push_back({th, branch.eval({th})[1]});
      }
    } else {
      t.columns = {"theta", "w0", "w1", "w2"};
      for (int k = 0; k < samples; ++k) {
        const double th = grid(-0.5, 0.5, k);
        const auto v = branch.eval({th});
        t.rows.push_back({th, v[0], v[1], v[2]});
      }
    }
  } else if (curve == "obstruction-diagonal") {
    Expr cand = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const Expr d = Expr::coord(i) - Expr::coord(j);
        cand = cand + d * d;
      }
      cand = cand - Expr::coord(i) * Expr::coord(i);
    }
    const Expr u = Expr::coord(0);
    const SmoothMap h = SmoothMap(3, {cand}).compose(SmoothMap(1, {u, u, u}));
    t.columns = {"t", "h"};
    for (int k = 0; k < samples; ++k) {
      const double x = grid(-1.0, 1.0, k);
      t.rows.push_back({x, h.eval({x})[0]});
    }
  } else {
    throw StructureError("unknown curve '" + curve +
                         "' (cutoff, section-height, section-coords, obstruction-diagonal)");
  }
  return t;
}

void write_csv(const PlotTable& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StructureError("cannot write " + path.string());
  for (size_t c = 0; c < t.columns.size(); ++c)
    out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << json_number(row[c]);
    out << '\n';
  }
}

void write_svg(const PlotTable& t, const std::filesystem::path& path) {
  if (t.rows.empty() || t.columns.size() < 2)
    throw StructureError("a drawable curve needs rows and at least two columns");
  const double W = 720, H = 440, L = 70, R = 24, T = 44, B = 52;
  double xmin = t.rows.front()[0], xmax = xmin;
  double ymin = t.rows.front()[1], ymax = ymin;
  for (const auto& row : t.rows) {
    xmin = std::min(xmin, row[0]);
    xmax = std::max(xmax, row[0]);
    for (size_t c = 1; c < row.size(); ++c) {
      ymin = std::min(ymin, row[c]);
      ymax = std::max(ymax, row[c]);
    }
  }
  if (xmax == xmin) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  double pad = 0.05 * (ymax - ymin);
  if (pad == 0.0) pad = 1.0;
  ymin -= pad;
  ymax += pad;
  auto X = [&](double v) { return L + (v - xmin) / (xmax - xmin) * (W - L - R); };
  auto Y = [&](double v) { return T + (ymax - v) / (ymax - ymin) * (H - T - B); };
  char buf[160];
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 720 440\" "
       "font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"440\" fill=\"#ffffff\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
                "stroke=\"#555555\"/>\n",
                L, T, W - L - R, H - T - B);
  s += buf;
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#555555\"/>\n",
                  X(xv), H - B, X(xv), H - B + 5);
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%.4g</text>\n", X(xv),
                  H - B + 18, xv);
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#555555\"/>\n",
                  L - 5, Y(yv), L, Y(yv));
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n", L - 8,
                  Y(yv) + 4, yv);
    s += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.2f\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">%s</text>\n",
                W / 2, escape_xml(t.name).c_str());
  s += buf;
  static const char* palette[] = {"#1b6ca8", "#c0392b", "#1e8449", "#8e44ad"};
  for (size_t c = 1; c < t.columns.size(); ++c) {
    const char* color = palette[(c - 1) % 4];
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" fill=\"%s\">%s</text>\n",
                  L + 10 + 130.0 * (c - 1), T - 8, color, escape_xml(t.columns[c]).c_str());
    s += buf;
    s += "<polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : t.rows) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(row[0]), Y(row[c]));
      s += buf;
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  std::ofstream out(path);
  if (!out) throw StructureError("cannot write " + path.string());
  out << s;
}

std::pair<std::filesystem::path, std::filesystem::path> emit_plot(
    const PlotTable& t, const std::filesystem::path& stem) {
  std::filesystem::path csv = stem;
  csv += ".csv";
  std::filesystem::path svg = stem;
  svg += ".svg";
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  write_csv(t, csv);
  write_svg(t, svg);
  return {csv, svg};
}

std::vector<CorpusEntry> expression_corpus() {
  const Expr x = Expr::coord(0);
  const Expr y = Expr::coord(1);
  std::vector<CorpusEntry> corpus;

  corpus.push_back({"polynomial-surface",
                    SmoothMap(2, {3.0 * x * x * y - 2.0 * x * y + x - 7.0 * y + 5.0,
                                  x * x * x - y}),
                    {{-1.5, 0.5}, {-0.5, -1.0}, {0.25, 1.25}, {1.0, -0.75}, {2.0, 2.0}}});
  corpus.push_back({"rational-blend",
                    SmoothMap(2, {(x * x + 1.0) / (y * y + 2.0) + y / (x * x + 4.0)}),
                    {{-1.2, 0.3}, {0.0, 0.0}, {0.8, -1.6}, {2.5, 1.1}}});
  corpus.push_back({"exp-radical",
                    SmoothMap(2, {exp(0.0 - x * x - y * y) * sqrt(1.0 + x * x + y * y)}),
                    {{-1.0, 0.5}, {0.2, -0.3}, {1.4, 1.2}, {0.0, 2.0}}});
  corpus.push_back({"flat-bump-composite",
                    SmoothMap(2, {flat_bump(1.0 - x * x - y * y) + flat_bump(x) * flat_bump(y)}),
                    {{0.3, 0.4}, {1.2, 0.1}, {0.9, 0.5}, {0.1, 0.2}, {-0.6, -0.2}}});
  corpus.push_back({"cutoff-chain",
                    SmoothMap(2, {smoothcalc::cutoff_expr(x * x + y * y, 0.2) *
                                  smoothcalc::cutoff_expr(1.0 - x, 0.3)}),
                    {{0.3, 0.3}, {0.55, 0.1}, {-0.4, 0.6}, {0.15, -0.75}}});
  corpus.push_back({"trig-wave",
                    SmoothMap(2, {sin(x * y) * cos(x - y) + cos(sin(x))}),
                    {{-0.9, 0.4}, {0.5, 0.5}, {1.3, -0.7}, {2.2, 1.9}}});
  corpus.push_back({"circle-charts", fibrancy::circle_model().chart_a,
                    {{0.2, 0.3, 0.5}, {1.0, 0.0, 0.0}, {0.1, 0.8, 0.1}, {-0.2, 0.7, 0.5}}});
  corpus.push_back({"section-curve", fibrancy::section_branch(0.2),
                    {{-0.45}, {-0.3}, {-0.12}, {0.04}, {0.2}, {0.33}, {0.48}}});
  corpus.push_back({"masked-map",
                    pairs::basepoint_masked(SmoothMap(2, {x + y, x * y}), 0.1, {0.25, 0.25}),
                    {{0.05, 0.5}, {0.35, 0.6}, {0.2, 0.4}, {0.5, 0.05}}});
  corpus.push_back({"prism-split", pairs::prism_split(3),
                    {{0.3, 0.4, 0.6, 0.5}, {0.1, 0.9, 0.2, 0.0}, {-0.5, 0.3, 0.8, 1.0}}});
  corpus.push_back(
      {"filler-output",
       fibrancy::abelian_horn_filler(fibrancy::restrict_to_horn(
           SmoothMap(3, {Expr::coord(0) * Expr::coord(1) + Expr::coord(2) * Expr::coord(2) -
                         2.0 * Expr::coord(0)}))),
       {{0.4, -0.2, 0.7}, {1.1, 0.6, -0.4}, {0.0, 0.0, 0.0}}});
  corpus.push_back({"piecewise-branches",
                    SmoothMap(2, {Expr::piecewise(x - y, x * x * y, x * x * x + y)}),
                    {{1.0, 0.3}, {0.8, -0.4}, {-0.5, 0.6}, {0.2, 0.9}}});
  return corpus;
}

}  // namespace swb::suite
