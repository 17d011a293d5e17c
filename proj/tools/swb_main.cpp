#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "swb/fibrancy.hpp"
#include "swb/pairs.hpp"
#include "swb/realize.hpp"
#include "swb/simplicial.hpp"
#include "swb/suite.hpp"

namespace {

using namespace swb;
using expr::Expr;
using expr::SmoothMap;

struct Globals {
  std::uint64_t seed = 2026;
  int budget = 0;
  double tol = 0.0;
  int jobs = 1;
  std::string out;

  int pick_budget(int fallback) const { return budget > 0 ? budget : fallback; }
  double pick_tol(double fallback) const { return tol > 0.0 ? tol : fallback; }
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw suite::StructureError("cannot read " + path);
  return nlohmann::json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw suite::StructureError("cannot write " + path);
  out << text;
}

sset::SimplicialSet parse_shape(const std::string& s) {
  if (s == "square") return sset::product(sset::delta(1, 2), sset::delta(1, 2)).set();
  int n = 0, k = 0;
  if (std::sscanf(s.c_str(), "delta(%d)", &n) == 1) return sset::delta(n);
  if (std::sscanf(s.c_str(), "boundary(%d)", &n) == 1) return sset::boundary_delta(n);
  if (std::sscanf(s.c_str(), "horn(%d,%d)", &n, &k) == 2) return sset::horn(n, k);
  throw suite::StructureError("unknown shape '" + s +
                              "' (delta(n), boundary(n), horn(n,k), square)");
}

pairs::Equivalence make_pair_case(const std::string& name, int n, double eps) {
  if (name == "walls-collar") return pairs::equidef_walls_collar(n, eps);
  if (name == "cube-boundary-collar") return pairs::equidef_cube_boundary_collar(n, eps);
  if (name == "cube-collar-collar") return pairs::equidef_cube_collar_collar(n, eps);
  if (name == "simplex-collar-plane") {
    const double cap = 1.0 / (n + 1) - 0.03;
    return pairs::equidef_simplex_collar_plane(n, std::min(eps + 0.05, cap), eps);
  }
  if (name == "simplex-boundary-collar") return pairs::equidef_simplex_boundary_collar(n, eps);
  if (name == "disk-collar-plane") return pairs::equidef_disk_collar_plane(n, eps, eps);
  if (name == "disk-sphere-collar") return pairs::equidef_disk_sphere_collar(n, eps);
  if (name == "equator-raise") return pairs::equator_raise(n);
  if (name == "stereographic") return pairs::stereographic(n, eps);
  throw suite::StructureError(
      "unknown pair case '" + name +
      "' (walls-collar, cube-boundary-collar, cube-collar-collar, simplex-collar-plane, "
      "simplex-boundary-collar, disk-collar-plane, disk-sphere-collar, equator-raise, "
      "stereographic)");
}

const suite::Check& find_check(const std::string& name) {
  for (const auto& c : suite::check_registry())
    if (c.name == name) return c;
  throw suite::StructureError("no registered check named '" + name + "'");
}

int report_exit(const VerificationReport& rep, const Globals& g) {
  std::cout << rep.to_text() << "\n";
  if (!g.out.empty()) {
    write_text_file(g.out, rep.to_json().dump(2) + "\n");
    std::cout << "report written to " << g.out << "\n";
  }
  return rep.pass ? 0 : 1;
}

int cmd_suite(const Globals& g, const std::string& name) {
  suite::SuiteConfig cfg;
  cfg.suite = name;
  cfg.seed = g.seed;
  cfg.budget = g.budget;
  cfg.tol = g.tol;
  cfg.jobs = g.jobs;
  cfg.out_dir = g.out;
  const auto run = suite::run_suite(cfg);
  for (const auto& r : run.results) {
    std::printf("%s %-24s (%s)  residual=%.3g  samples=%ld\n",
                r.report.pass ? "[pass]" : "[FAIL]", r.name.c_str(), r.group.c_str(),
                r.report.max_residual, r.report.samples_used);
    for (const auto& f : r.report.failures) std::printf("       %s\n", f.c_str());
  }
  std::printf("suite %s: %zu checks, %s\n", name.c_str(), run.results.size(),
              run.all_passed ? "all passing" : "FAILURES PRESENT");
  if (!g.out.empty()) std::printf("reports written to %s\n", g.out.c_str());
  return run.all_passed ? 0 : 1;
}

int cmd_verify_circle(const Globals& g, double eps, bool unblended) {
  auto rep = fibrancy::verify_circle_retract(eps, g.pick_budget(10000),
                                             Rng(g.seed).sub("circle-retract"), !unblended);
  return report_exit(rep, g);
}

int cmd_verify_pair(const Globals& g, const std::string& name, int n, double eps) {
  const auto e = make_pair_case(name, n, eps);
  auto rep = pairs::verify_equivalence(e, Rng(g.seed).sub(name), g.pick_budget(200),
                                       g.pick_tol(1e-9));
  rep.name = e.name;
  return report_exit(rep, g);
}

int cmd_fill(const Globals& g, const std::string& input, const std::string& output) {
  const auto horn = fibrancy::horn_from_json(read_json_file(input));
  const auto compat = fibrancy::check_horn_compat(horn, Rng(g.seed).sub("compat"), 200,
                                                  g.pick_tol(1e-12));
  std::cerr << compat.to_text() << "\n";
  const auto filler =
      fibrancy::abelian_horn_filler(horn, Rng(g.seed).sub("fill"), g.pick_tol(1e-12));
  const std::string text = expr::to_json(filler).dump(2) + "\n";
  if (output.empty())
    std::cout << text;
  else {
    write_text_file(output, text);
    std::cout << "filler written to " << output << "\n";
  }
  return 0;
}

int cmd_obstruction_halfline(const Globals& g) {
  const auto out = fibrancy::halfline_obstruction();
  std::cout << out.report.to_text() << "\n";
  std::cout << "second derivative along the diagonal: exact " << out.diag_second_exact
            << ", via jets " << out.diag_second_jets << "\n";
  std::cout << (out.extension_impossible
                    ? "conclusion: the boundary data admits no smooth global extension\n"
                    : "conclusion: no obstruction detected\n");
  if (!g.out.empty()) write_text_file(g.out, out.report.to_json().dump(2) + "\n");
  return out.report.pass ? 0 : 1;
}

int cmd_obstruction_rank(const Globals& g, int n, int m) {
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i) comps.push_back(i < m ? Expr::coord(i) : Expr(0.0));
  const SmoothMap candidate(n, comps);
  const auto res = fibrancy::rank_obstruction(candidate,
                                              fibrancy::coordinate_plane_diffeology(n, m), n,
                                              m, Rng(g.seed).sub("rank"),
                                              g.pick_budget(200));
  std::cout << "rank at the origin: " << res.measured_rank << " (needs " << res.required_rank
            << ", factoring bound " << res.factor_bound << ")\n";
  std::cout << res.report.to_text() << "\n";
  std::cout << (res.contradiction
                    ? "conclusion: no candidate through the declared factor can work\n"
                    : "conclusion: no rank contradiction\n");
  if (!g.out.empty()) write_text_file(g.out, res.report.to_json().dump(2) + "\n");
  return res.contradiction ? 0 : 1;
}

int cmd_realize(const Globals& g, const std::string& shape, const std::string& input,
                const std::string& what) {
  sset::SimplicialSet src =
      input.empty() ? parse_shape(shape) : sset::simplicial_from_json(read_json_file(input));
  if (what == "product-probe") {
    if (!input.empty() || shape != "square")
      throw suite::StructureError("the product probe runs on the built-in square");
    const auto& check = find_check("product-map-probe");
    suite::CheckContext ctx{Rng(g.seed).sub(check.name), g.pick_budget(check.default_budget),
                            g.pick_tol(check.default_tol)};
    return report_exit(check.run(ctx), g);
  }
  const realize::CellComplex cx(src);
  if (what == "cells") {
    const auto counts = cx.cell_counts();
    std::cout << "top dimension " << cx.top_dim() << "\ncells by dimension:";
    for (size_t d = 0; d < counts.size(); ++d) std::cout << " " << counts[d];
    std::cout << "\nmaximal cells:\n";
    for (const auto& m : cx.maximal_cells())
      std::cout << "  " << src.describe(m) << " (dim " << m.degree << ")\n";
    if (!g.out.empty()) {
      write_text_file(g.out, realize::to_json(cx).dump(2) + "\n");
      std::cout << "complex written to " << g.out << "\n";
    }
    return 0;
  }
  if (what == "seams") {
    const auto sr = realize::seam_set(cx);
    std::cout << sr.total() << " seam(s)\n";
    for (const auto& s : sr.seams) {
      std::cout << "  " << src.describe(s.cell) << " (dim " << s.cell.degree << ") between";
      for (const auto& inc : s.incident) std::cout << " " << src.describe(inc.maximal);
      std::cout << "\n";
    }
    auto rep = realize::check_gluing(cx, Rng(g.seed).sub("gluing"));
    return report_exit(rep, g);
  }
  throw suite::StructureError("unknown realize report '" + what +
                              "' (cells, seams, product-probe)");
}

int cmd_lift(const Globals& g, const std::string& input) {
  fibrancy::HornData horn;
  if (input.empty()) {
    // built-in demonstration: affine phases one whole turn apart
    const Expr t = Expr::coord(0);
    horn.n = 2;
    horn.pieces.push_back(SmoothMap(1, {t}));
    horn.pieces.push_back(SmoothMap(1, {t + 3.0}));
    std::cout << "no input given, lifting the built-in affine example\n";
  } else {
    horn = fibrancy::horn_from_json(read_json_file(input));
  }
  const auto out = fibrancy::lift_horn_through_bundle(horn, Rng(g.seed).sub("lift"),
                                                      g.pick_budget(1000));
  std::cout << "whole-turn shifts:";
  for (auto s : out.shifts) std::cout << " " << s;
  std::cout << "\n" << out.report.to_text() << "\n";
  if (!g.out.empty()) {
    nlohmann::json doc{{"phase", expr::to_json(out.phase)},
                       {"circle_map", expr::to_json(out.circle_map)},
                       {"shifts", out.shifts},
                       {"report", out.report.to_json()}};
    write_text_file(g.out, doc.dump(2) + "\n");
    std::cout << "lift written to " << g.out << "\n";
  }
  return out.report.pass ? 0 : 1;
}

int cmd_retract_dopen(const Globals& g, int n, double delta, double eps) {
  const auto out = fibrancy::dopen_retraction(n, delta, eps, Rng(g.seed).sub("dopen"),
                                              g.pick_budget(10000));
  return report_exit(out.report, g);
}

int cmd_retract_loop(const Globals& g, int n, double eps) {
  auto rep = fibrancy::loop_retract_H(n, fibrancy::loop_bump(eps), Rng(g.seed).sub("loop"),
                                      g.pick_budget(1000));
  return report_exit(rep, g);
}

int cmd_plot(const Globals& g, const std::string& curve, double eps, int samples) {
  const auto table = suite::sample_curve(curve, eps, samples);
  const std::string stem = g.out.empty() ? curve : g.out;
  const auto [csv, svg] = suite::emit_plot(table, stem);
  std::cout << "wrote " << csv.string() << " and " << svg.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for smooth homotopy constructions on glued charts"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read option defaults from a TOML-style file");

  Globals g;
  app.add_option("--seed", g.seed, "master random seed");
  app.add_option("--budget", g.budget, "sample budget override (0 keeps per-check defaults)");
  app.add_option("--tol", g.tol, "tolerance override (0 keeps per-check defaults)");
  app.add_option("--jobs", g.jobs, "worker threads for suite runs");
  app.add_option("--out", g.out, "output directory (suite) or file/stem (other commands)");

  auto* suite_cmd = app.add_subcommand("suite", "run a named check suite");
  suite_cmd->fallthrough();
  std::string suite_name = "all";
  suite_cmd->add_option("name", suite_name,
                        "simplicial, equidef, realization, fibrancy or all");

  auto* verify_cmd = app.add_subcommand("verify", "verify one construction end to end");
  verify_cmd->fallthrough();
  std::string verify_target;
  double verify_eps = 0.2;
  int verify_n = 2;
  std::string pair_case = "walls-collar";
  bool unblended = false;
  verify_cmd->add_option("target", verify_target, "circle-retract or pair")->required();
  verify_cmd->add_option("--eps", verify_eps, "thickening parameter");
  verify_cmd->add_option("--n", verify_n, "dimension (pair target)");
  verify_cmd->add_option("--case", pair_case, "pair case name (pair target)");
  verify_cmd->add_flag("--unblended", unblended,
                       "drop the blend from the circle section (fails the smoothness probe)");

  auto* fill_cmd = app.add_subcommand("fill", "fill compatible horn data");
  fill_cmd->fallthrough();
  std::string fill_kind, fill_input, fill_output;
  fill_cmd->add_option("kind", fill_kind, "abelian")->required();
  fill_cmd->add_option("--input", fill_input, "horn data JSON file")->required();
  fill_cmd->add_option("--output", fill_output, "write the filler map here (default stdout)");

  auto* obstruction_cmd = app.add_subcommand("obstruction", "run a no-go computation");
  obstruction_cmd->fallthrough();
  std::string obstruction_kind;
  int rank_n = 2, rank_m = 1;
  obstruction_cmd->add_option("kind", obstruction_kind, "halfline or rank")->required();
  obstruction_cmd->add_option("--n", rank_n, "ambient dimension (rank)");
  obstruction_cmd->add_option("--m", rank_m, "declared factoring dimension (rank)");

  auto* realize_cmd = app.add_subcommand("realize", "realize a shape and inspect it");
  realize_cmd->fallthrough();
  std::string shape = "square", realize_input, realize_report = "cells";
  realize_cmd->add_option("--shape", shape, "delta(n), boundary(n), horn(n,k) or square");
  realize_cmd->add_option("--input", realize_input, "simplicial set JSON file");
  realize_cmd->add_option("--report", realize_report, "cells, seams or product-probe");

  auto* lift_cmd = app.add_subcommand("lift", "lift horn data through the winding projection");
  lift_cmd->fallthrough();
  std::string lift_target, lift_input;
  lift_cmd->add_option("target", lift_target, "s1-horn")->required();
  lift_cmd->add_option("--input", lift_input, "phase horn data JSON file");

  auto* retract_cmd = app.add_subcommand("retract", "build and verify a retraction");
  retract_cmd->fallthrough();
  std::string retract_kind;
  int retract_n = 2;
  double retract_delta = 0.5, retract_eps = 0.2, loop_eps = 0.25;
  retract_cmd->add_option("kind", retract_kind, "dopen or loop")->required();
  retract_cmd->add_option("--n", retract_n, "dimension");
  retract_cmd->add_option("--delta", retract_delta, "neighbourhood size (dopen)");
  retract_cmd->add_option("--eps", retract_eps, "blend width (dopen)");
  retract_cmd->add_option("--profile-eps", loop_eps, "bump profile width (loop)");

  auto* plot_cmd = app.add_subcommand("plot", "sample a curve to CSV and SVG");
  plot_cmd->fallthrough();
  std::string curve;
  double plot_eps = 0.2;
  int plot_samples = 1001;
  plot_cmd->add_option("curve", curve,
                       "cutoff, section-height, section-coords or obstruction-diagonal")
      ->required();
  plot_cmd->add_option("--eps", plot_eps, "thickening parameter");
  plot_cmd->add_option("--samples", plot_samples, "sample count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (suite_cmd->parsed()) return cmd_suite(g, suite_name);
    if (verify_cmd->parsed()) {
      if (verify_target == "circle-retract") return cmd_verify_circle(g, verify_eps, unblended);
      if (verify_target == "pair") return cmd_verify_pair(g, pair_case, verify_n, verify_eps);
      throw suite::StructureError("unknown verify target '" + verify_target +
                                  "' (circle-retract, pair)");
    }
    if (fill_cmd->parsed()) {
      if (fill_kind != "abelian")
        throw suite::StructureError("unknown fill kind '" + fill_kind + "' (abelian)");
      return cmd_fill(g, fill_input, fill_output);
    }
    if (obstruction_cmd->parsed()) {
      if (obstruction_kind == "halfline") return cmd_obstruction_halfline(g);
      if (obstruction_kind == "rank") return cmd_obstruction_rank(g, rank_n, rank_m);
      throw suite::StructureError("unknown obstruction '" + obstruction_kind +
                                  "' (halfline, rank)");
    }
    if (realize_cmd->parsed()) return cmd_realize(g, shape, realize_input, realize_report);
    if (lift_cmd->parsed()) {
      if (lift_target != "s1-horn")
        throw suite::StructureError("unknown lift target '" + lift_target + "' (s1-horn)");
      return cmd_lift(g, lift_input);
    }
    if (retract_cmd->parsed()) {
      if (retract_kind == "dopen")
        return cmd_retract_dopen(g, retract_n, retract_delta, retract_eps);
      if (retract_kind == "loop") return cmd_retract_loop(g, retract_n, loop_eps);
      throw suite::StructureError("unknown retract kind '" + retract_kind +
                                  "' (dopen, loop)");
    }
    if (plot_cmd->parsed()) return cmd_plot(g, curve, plot_eps, plot_samples);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
