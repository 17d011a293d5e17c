#include "swb/fibrancy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <utility>

#include "swb/smoothcalc.hpp"

namespace swb::fibrancy {

using expr::Expr;
using expr::SmoothMap;

namespace {

std::vector<double> zeros(int k) { return std::vector<double>(static_cast<size_t>(k), 0.0); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

void GeneratedDiffeology::validate() const {
  if (carrier_dim < 0) throw StructureError("carrier dimension must be non-negative");
  for (const auto& g : generators)
    if (g.out_dim() != carrier_dim)
      throw StructureError("a generator of '" + name + "' does not land in the carrier");
}

GeneratedDiffeology coordinate_plane_diffeology(int n, int m) {
  if (n < 1 || m < 0 || m > n)
    throw StructureError("coordinate plane family needs 0 <= m <= n and n >= 1");
  GeneratedDiffeology d;
  d.name = "coordinate " + std::to_string(m) + "-planes in R^" + std::to_string(n);
  d.carrier_dim = n;
  std::vector<int> subset(m);
  for (int i = 0; i < m; ++i) subset[i] = i;
  while (true) {
    std::vector<Expr> comps;
    for (int j = 0; j < n; ++j) {
      const auto pos = std::find(subset.begin(), subset.end(), j);
      comps.push_back(pos == subset.end()
                          ? Expr(0.0)
                          : Expr::coord(static_cast<int>(pos - subset.begin())));
    }
    d.generators.emplace_back(m, std::move(comps));
    int i = m - 1;
    while (i >= 0 && subset[i] == n - m + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int k = i + 1; k < m; ++k) subset[k] = subset[k - 1] + 1;
  }
  d.validate();
  return d;
}

GeneratedDiffeology squared_norm_halfline(int n) {
  if (n < 1) throw StructureError("the squared norm plot needs n >= 1");
  GeneratedDiffeology d;
  d.name = "half line from the squared norm on R^" + std::to_string(n);
  d.carrier_dim = 1;
  Expr s = Expr::coord(0) * Expr::coord(0);
  for (int i = 1; i < n; ++i) s = s + Expr::coord(i) * Expr::coord(i);
  d.generators.emplace_back(n, std::vector<Expr>{s});
  return d;
}

int HornData::out_dim() const { return pieces.empty() ? 0 : pieces.front().out_dim(); }

void HornData::validate() const {
  if (n < 1) throw StructureError("horn data needs n >= 1");
  if (static_cast<int>(pieces.size()) != n)
    throw StructureError("horn data needs one piece per coordinate hyperplane");
  for (const auto& p : pieces) {
    if (p.arity() != n - 1)
      throw StructureError("every horn piece must be a map on R^(n-1)");
    if (p.out_dim() != out_dim())
      throw StructureError("horn pieces must share one output dimension");
  }
}

SmoothMap hyperplane_inclusion(int n, int i) {
  if (n < 1 || i < 0 || i >= n) throw StructureError("hyperplane index out of range");
  std::vector<Expr> comps;
  for (int j = 0; j < n; ++j) {
    if (j == i)
      comps.push_back(Expr(0.0));
    else
      comps.push_back(Expr::coord(j < i ? j : j - 1));
  }
  return SmoothMap(n - 1, std::move(comps));
}

HornData restrict_to_horn(const SmoothMap& g) {
  HornData f;
  f.n = g.arity();
  for (int i = 0; i < f.n; ++i) f.pieces.push_back(g.compose(hyperplane_inclusion(f.n, i)));
  f.validate();
  return f;
}

VerificationReport check_horn_compat(const HornData& f, Rng rng, int samples, double tol) {
  f.validate();
  VerificationReport rep;
  rep.name = "horn boundary compatibility";
  rep.tolerance = tol;
  rep.details["n"] = f.n;
  if (f.n == 1) {
    rep.details["note"] = "a single piece has no intersections to match";
    return rep;
  }
  for (int i = 0; i < f.n; ++i)
    for (int j = i + 1; j < f.n; ++j) {
      // Both pieces restricted to {x_{i+1} = x_{j+1} = 0}, charted by the
      // remaining coordinates. In piece i's chart the second zero sits at
      // slot j-1, in piece j's chart the first sits at slot i.
      const SmoothMap ri = f.pieces[i].compose(hyperplane_inclusion(f.n - 1, j - 1));
      const SmoothMap rj = f.pieces[j].compose(hyperplane_inclusion(f.n - 1, i));
      Rng sub = rng.sub("pair " + std::to_string(i) + "," + std::to_string(j));
      const std::string label =
          "pieces " + std::to_string(i) + " and " + std::to_string(j) + " on their intersection";
      for (int s = 0; s < samples; ++s) {
        const auto x = sub.box(f.n - 2, -2.0, 2.0);
        rep.sample(max_abs_diff(ri.eval(x), rj.eval(x)), x, label);
      }
    }
  return rep;
}

SmoothMap abelian_horn_filler(const HornData& f, Rng rng, double tol) {
  f.validate();
  const auto compat = check_horn_compat(f, rng, 200, tol);
  if (!compat.pass)
    throw StructureError("horn pieces disagree on an intersection: " + compat.witness_desc);
  const int n = f.n;
  const int m = f.out_dim();
  std::vector<Expr> acc;
  const unsigned full = (1u << n) - 1u;
  for (unsigned mask = 0; mask < full; ++mask) {
    const int kept = std::popcount(mask);
    const bool positive = (n - kept + 1) % 2 == 0;
    int lead = 0;  // smallest zeroed coordinate picks the piece reading the term
    while (mask & (1u << lead)) ++lead;
    std::vector<Expr> inner;
    for (int j = 0; j < n; ++j) {
      if (j == lead) continue;
      inner.push_back((mask & (1u << j)) ? Expr::coord(j) : Expr(0.0));
    }
    const SmoothMap term = f.pieces[lead].compose(SmoothMap(n, std::move(inner)));
    if (acc.empty()) {
      for (int c = 0; c < m; ++c)
        acc.push_back(positive ? term.component(c) : -term.component(c));
    } else {
      for (int c = 0; c < m; ++c)
        acc[c] = positive ? acc[c] + term.component(c) : acc[c] - term.component(c);
    }
  }
  if (acc.empty()) throw StructureError("horn data produced no terms");
  return SmoothMap(n, std::move(acc));
}

nlohmann::json to_json(const HornData& f) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : f.pieces) pieces.push_back(expr::to_json(p));
  return {{"n", f.n}, {"pieces", pieces}};
}

HornData horn_from_json(const nlohmann::json& j) {
  HornData f;
  f.n = j.at("n").get<int>();
  for (const auto& p : j.at("pieces")) f.pieces.push_back(expr::smooth_map_from_json(p));
  f.validate();
  return f;
}

namespace {

constexpr double kPi = std::numbers::pi;

sset::SimplicialSet circle_source() {
  sset::SimplicialSet s(2);
  const int x = s.add_generator(0, "x");
  const int y = s.add_generator(0, "y");
  const sset::SimplexRef rx{0, x, {}}, ry{0, y, {}};
  const int bot = s.add_generator(1, "bot", {rx, rx});
  const int a = s.add_generator(1, "a", {ry, rx});
  const int b = s.add_generator(1, "b", {rx, ry});
  const int top = s.add_generator(1, "top", {ry, ry});
  const sset::SimplexRef rbot{1, bot, {}}, ra{1, a, {}}, rb{1, b, {}}, rtop{1, top, {}};
  s.add_generator(2, "A", {rb, rbot, ra});
  s.add_generator(2, "B", {ra, rtop, rb});
  return s;
}

SmoothMap phase_chart(double offset) {
  const Expr phase = offset + (Expr::coord(2) - Expr::coord(0));
  return SmoothMap(3, {cos(kPi * phase), sin(kPi * phase)});
}

}  // namespace

CircleModel circle_model() {
  sset::SimplicialSet s = circle_source();
  const sset::SimplexRef ta = *s.find("A");
  const sset::SimplexRef tb = *s.find("B");
  return CircleModel{realize::CellComplex(std::move(s)), phase_chart(0.0), phase_chart(1.0),
                     ta, tb};
}

std::vector<double> CircleModel::value(const realize::RealPoint& p) const {
  const realize::RealPoint q = realize::normal_form(complex, p);
  const std::string& name = complex.source().generator(q.cell).name;
  const auto& c = q.coords;
  if (name == "A") return chart_a.eval(c);
  if (name == "B") return chart_b.eval(c);
  if (name == "bot") return chart_a.eval({c[0], 0.0, c[1]});
  if (name == "a") return chart_a.eval({c[0], c[1], 0.0});
  if (name == "b") return chart_a.eval({0.0, c[0], c[1]});
  if (name == "top") return chart_b.eval({c[0], 0.0, c[1]});
  if (name == "x") return chart_a.eval({1.0, 0.0, 0.0});
  return chart_a.eval({0.0, 1.0, 0.0});
}

SmoothMap section_branch(double epsilon, bool blend) {
  if (epsilon <= 0.0 || epsilon >= 0.5)
    throw StructureError("section blending needs epsilon in (0, 1/2)");
  const Expr th = Expr::coord(0);
  const Expr pos = 1.0 - th;  // shared, so edge riding cancels bitwise
  const Expr neg = 1.0 + th;
  Expr mid = Expr::piecewise(th, pos, neg);  // 1 - |theta|
  if (blend) {
    const Expr right = smoothcalc::cutoff_expr(2.0 * th, epsilon);
    const Expr left = smoothcalc::cutoff_expr(-2.0 * th, epsilon);
    mid = Expr::piecewise(th, right * pos + (1.0 - right) * 0.5,
                          left * neg + (1.0 - left) * 0.5);
  }
  const Expr first = (pos - mid) * 0.5;
  const Expr third = (neg - mid) * 0.5;
  return SmoothMap(1, {first, mid, third});
}

namespace {

// Reduce to the fundamental window [-1/2, 3/2) of the two chart branches.
double wrap_parameter(double theta) {
  double t = std::fmod(theta + 0.5, 2.0);
  if (t < 0.0) t += 2.0;
  return t - 0.5;
}

}  // namespace

realize::RealPoint circle_section(double theta, double epsilon) {
  static const CircleModel model = circle_model();
  const SmoothMap branch = section_branch(epsilon, true);
  const double t = wrap_parameter(theta);
  if (t <= 0.5) return {model.triangle_a, branch.eval({t})};
  return {model.triangle_b, branch.eval({t - 1.0})};
}

VerificationReport verify_circle_retract(double epsilon, int budget, Rng rng, bool blend) {
  const CircleModel model = circle_model();
  const SmoothMap branch = section_branch(epsilon, blend);
  VerificationReport rep;
  rep.name = "circle chart section";
  rep.tolerance = 1e-9;
  rep.details["epsilon"] = epsilon;
  rep.details["budget"] = budget;
  rep.details["blend"] = blend;

  const auto section_point = [&](double t) -> realize::RealPoint {
    if (t <= 0.5) return {model.triangle_a, branch.eval({t})};
    return {model.triangle_b, branch.eval({t - 1.0})};
  };
  const auto chart_value = [&](const realize::RealPoint& p) {
    return (p.cell == model.triangle_a ? model.chart_a : model.chart_b).eval(p.coords);
  };

  Rng retract = rng.sub("retract");
  for (int k = 0; k < budget; ++k) {
    const double t = -0.5 + 2.0 * (k + retract.unit()) / budget;
    const auto got = chart_value(section_point(t));
    const std::vector<double> want{std::cos(kPi * t), std::sin(kPi * t)};
    rep.sample(max_abs_diff(got, want), {t}, "chart of the section against the circle point");
  }

  // Where both branch formulas ride a glued edge they must name the same
  // class of the realization.
  const double ride_lo = 0.5 * (1.0 - epsilon) + 0.01;
  Rng seams = rng.sub("seams");
  const int seam_samples = 64;
  for (int k = 0; k <= seam_samples; ++k) {
    const double t = ride_lo + (0.5 - ride_lo) * k / seam_samples;
    const auto na = realize::normal_form(model.complex, {model.triangle_a, branch.eval({t})});
    const auto nb =
        realize::normal_form(model.complex, {model.triangle_b, branch.eval({t - 1.0})});
    if (na.cell != nb.cell) {
      rep.fail("branch switch lands on different cells at parameter " + std::to_string(t));
      continue;
    }
    rep.sample(max_abs_diff(na.coords, nb.coords), {t}, "glued class at the branch switch");
    const double u = -t;  // mirrored band across the wrap at -1/2
    const auto ma = realize::normal_form(model.complex, {model.triangle_a, branch.eval({u})});
    const auto mb =
        realize::normal_form(model.complex, {model.triangle_b, branch.eval({u + 1.0})});
    if (ma.cell != mb.cell) {
      rep.fail("wrap switch lands on different cells at parameter " + std::to_string(u));
      continue;
    }
    rep.sample(max_abs_diff(ma.coords, mb.coords), {u}, "glued class at the wrap");
  }

  // The riding itself is exact: the chart coordinate facing the glued edge
  // is the float zero, not merely small.
  Rng riding = rng.sub("riding");
  int exact_zeros = 0;
  for (int k = 0; k < 50; ++k) {
    const double t = riding.range(ride_lo, 0.5);
    const double first = branch.eval({t})[0];
    const double third = branch.eval({-t})[2];
    if (first != 0.0)
      rep.fail("first coordinate drifts off the edge at parameter " + std::to_string(t));
    else if (third != 0.0)
      rep.fail("third coordinate drifts off the edge at parameter " + std::to_string(-t));
    else
      ++exact_zeros;
  }
  rep.details["exact_edge_zeros"] = exact_zeros;

  // One-sided first derivatives across the glued edges, read through the
  // edge charts. The two triangles meet both edges with mirrored component
  // pairs, so one comparison covers both seams.
  const auto ja = branch.jet({0.5});
  const auto jb = branch.jet({-0.5});
  const double seam_gap = std::max(std::abs(ja[1].grad(0) - jb[0].grad(0)),
                                   std::abs(ja[2].grad(0) - jb[1].grad(0)));
  rep.details["seam_jet_gap"] = seam_gap;
  if (seam_gap > 1e-6) rep.fail("one-sided derivatives disagree across a glued edge");

  // Finite differences catch a kink that the branch-aware jets would not.
  const std::vector<std::vector<double>> probes{{0.0},  {0.12},  {-0.12}, {0.3},
                                                {-0.3}, {0.44}, {-0.44}};
  const auto fd = expr::check_jets_fd(branch, probes);
  rep.details["smoothness_ratio"] = fd.max_residual;
  if (!fd.pass) rep.fail("finite differences expose a kink in the section curve");
  return rep;
}

HalflineObstruction halfline_obstruction() {
  using expr::Poly;
  HalflineObstruction out;
  VerificationReport& rep = out.report;
  rep.name = "half line obstruction";
  rep.tolerance = 1e-9;

  // Exact path: every hyperplane carries the squared difference of the two
  // surviving coordinates, so its chart polynomial is the same for all
  // three faces.
  const Poly u = Poly::coordinate(2, 0), v = Poly::coordinate(2, 1);
  const Poly face_poly = (u - v) * (u - v);
  out.forced_gradient = Eigen::VectorXd::Zero(3);
  out.forced_hessian = Eigen::MatrixXd::Zero(3, 3);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(3, 3);
  for (int k = 0; k < 3; ++k) {
    const int p = k == 0 ? 1 : 0;
    const int q = k == 2 ? 1 : 2;
    const std::vector<long long> origin{0, 0};
    const long long gp = face_poly.derivative(0).eval(origin);
    const long long gq = face_poly.derivative(1).eval(origin);
    if (gp != 0 || gq != 0) throw StructureError("face gradients fail to vanish at the origin");
    const long long hpp = face_poly.derivative(0).derivative(0).eval(origin);
    const long long hqq = face_poly.derivative(1).derivative(1).eval(origin);
    const long long hpq = face_poly.derivative(0).derivative(1).eval(origin);
    const auto place = [&](int r, int c, long long val) {
      if (seen(r, c) && out.forced_hessian(r, c) != static_cast<double>(val))
        throw StructureError("faces force conflicting second derivatives");
      seen(r, c) = 1;
      out.forced_hessian(r, c) = static_cast<double>(val);
    };
    place(p, p, hpp);
    place(q, q, hqq);
    place(p, q, hpq);
    place(q, p, hpq);
  }
  long long total = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) total += static_cast<long long>(out.forced_hessian(i, j));
  out.diag_second_exact = total;

  // Jet path: the same assembly through floating point second derivatives.
  const Expr eu = Expr::coord(0), ev = Expr::coord(1);
  const SmoothMap face_map(2, {(eu - ev) * (eu - ev)});
  const auto fj = face_map.jet({0.0, 0.0});
  // Three diagonal entries and six mixed ones, each read off one face chart.
  const double total_jets = 3.0 * fj[0].hess(0, 0) + 6.0 * fj[0].hess(0, 1);
  out.diag_second_jets = total_jets;
  rep.sample(std::abs(total_jets - static_cast<double>(total)), zeros(3),
             "diagonal second derivative, jets against exact");
  rep.details["diagonal_second_derivative"] = total;
  rep.details["forced_diagonal_entry"] = out.forced_hessian(0, 0);
  rep.details["forced_mixed_entry"] = out.forced_hessian(0, 1);

  // A reference candidate meeting the boundary exactly and showing the
  // forced negativity: sum of squared differences minus the squared norm.
  const auto x3 = [](int i) { return Poly::coordinate(3, i); };
  Poly cand = Poly::constant(3, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) cand = cand + (x3(i) - x3(j)) * (x3(i) - x3(j));
  for (int i = 0; i < 3; ++i) cand = cand - x3(i) * x3(i);
  for (int k = 0; k < 3; ++k) {
    std::vector<Poly> repl(3, Poly::constant(2, 0));
    int slot = 0;
    for (int j = 0; j < 3; ++j)
      if (j != k) repl[j] = Poly::coordinate(2, slot++);
    if (!(cand.substitute(repl) - face_poly).is_zero())
      rep.fail("candidate misses the boundary data on face " + std::to_string(k));
  }
  const Poly t1 = Poly::coordinate(1, 0);
  const Poly diag = cand.substitute({t1, t1, t1});
  const Poly want_diag = Poly::constant(1, -3) * t1 * t1;
  if (!(diag - want_diag).is_zero())
    rep.fail("candidate diagonal is not the expected parabola");
  rep.details["candidate_diagonal"] = "-3 t^2";

  out.extension_impossible = out.diag_second_exact < 0;
  if (!out.extension_impossible)
    rep.fail("diagonal second derivative fails to be negative");
  return out;
}

RankObstruction rank_obstruction(const SmoothMap& F, const GeneratedDiffeology& plots, int n,
                                 int m, Rng rng, int samples) {
  plots.validate();
  if (F.arity() != n || F.out_dim() != n)
    throw StructureError("the candidate must be a map from R^n to itself");
  if (m >= 0)
    for (const auto& g : plots.generators)
      if (g.arity() > m)
        throw StructureError("plots of '" + plots.name +
                             "' do not factor through the declared dimension");
  RankObstruction out;
  VerificationReport& rep = out.report;
  rep.name = "rank analysis of a filler candidate";
  rep.tolerance = 1e-9;
  rep.details["plots"] = plots.name;
  out.required_rank = n;
  out.factor_bound = m < 0 ? -1 : m;

  Rng bnd = rng.sub("boundary");
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const SmoothMap incl = hyperplane_inclusion(n, i);
    const SmoothMap fi = F.compose(incl);
    for (int s = 0; s < samples; ++s) {
      const auto x = bnd.box(n - 1, -2.0, 2.0);
      const double r = max_abs_diff(fi.eval(x), incl.eval(x));
      worst = std::max(worst, r);
      rep.sample(r, x, "candidate against the identity on hyperplane " + std::to_string(i));
    }
  }
  out.boundary_identity_holds = worst <= rep.tolerance;

  const auto jets = F.jet(zeros(n));
  out.jacobian = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.jacobian(i, j) = jets[i].grad(j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.jacobian);
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i) out.singular_values.push_back(sv(i));
  const double gate = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  out.measured_rank =
      static_cast<int>(std::count_if(out.singular_values.begin(), out.singular_values.end(),
                                     [&](double s) { return s > gate; }));

  out.contradiction = out.factor_bound >= 0 && out.factor_bound < out.required_rank;
  rep.details["measured_rank"] = out.measured_rank;
  rep.details["required_rank"] = out.required_rank;
  rep.details["factor_bound"] = out.factor_bound;
  rep.details["contradiction"] = out.contradiction;
  rep.details["singular_values"] = out.singular_values;
  return out;
}

SmoothMap winding_projection() {
  const Expr turn = (2.0 * kPi) * Expr::coord(0);
  return SmoothMap(1, {cos(turn), sin(turn)});
}

BundleLift lift_horn_through_bundle(const HornData& phases, Rng rng, int samples) {
  phases.validate();
  if (phases.n < 2 || phases.n > 3)
    throw StructureError("lifting through the winding projection is set up for n = 2 and 3");
  if (phases.out_dim() != 1)
    throw StructureError("circle data must be given by scalar phase pieces");
  const int n = phases.n;

  BundleLift out;
  VerificationReport& rep = out.report;
  rep.name = "horn fill through the winding projection";
  rep.tolerance = 1e-9;
  rep.details["n"] = n;

  // Shift every piece by whole turns so all agree with piece zero at the
  // origin; fractional mismatches mean the phases never described one
  // circle-valued boundary.
  const double base = phases.pieces[0].eval(zeros(n - 1))[0];
  HornData shifted;
  shifted.n = n;
  for (int i = 0; i < n; ++i) {
    const double vi = phases.pieces[i].eval(zeros(n - 1))[0];
    const long long turns = std::llround(vi - base);
    if (std::abs(vi - base - static_cast<double>(turns)) > 1e-9)
      throw StructureError("piece " + std::to_string(i) +
                           " misses the basepoint by a fraction of a turn");
    out.shifts.push_back(turns);
    shifted.pieces.emplace_back(
        n - 1, std::vector<Expr>{phases.pieces[i].component(0) -
                                 Expr(static_cast<double>(turns))});
  }
  const auto compat = check_horn_compat(shifted, rng.sub("compat"), 200, 1e-9);
  if (!compat.pass)
    throw StructureError("shifted phases drift apart on an intersection: " +
                         compat.witness_desc);

  out.phase = abelian_horn_filler(shifted, rng.sub("fill"), 1e-9);
  out.circle_map = winding_projection().compose(out.phase);

  Rng res = rng.sub("residual");
  for (int i = 0; i < n; ++i) {
    const SmoothMap filled = out.circle_map.compose(hyperplane_inclusion(n, i));
    const SmoothMap given = winding_projection().compose(phases.pieces[i]);
    for (int s = 0; s < samples / n + 1; ++s) {
      const auto x = res.box(n - 1, -2.0, 2.0);
      rep.sample(max_abs_diff(filled.eval(x), given.eval(x)), x,
                 "circle values on hyperplane " + std::to_string(i));
    }
  }
  return out;
}

DopenRetraction dopen_retraction(int n, double delta, double epsilon, Rng rng, int samples) {
  if (n < 1) throw StructureError("the retraction needs n >= 1");
  if (delta <= 0.0) throw StructureError("delta must be positive");
  if (epsilon <= 0.0 || epsilon >= 0.5)
    throw StructureError("the cutoff parameter must sit in (0, 1/2)");

  DopenRetraction out;
  out.delta = delta;
  Expr prod = Expr::coord(0) * Expr::coord(0);
  for (int i = 1; i < n; ++i) prod = prod * (Expr::coord(i) * Expr::coord(i));
  const Expr scale = 1.0 - smoothcalc::cutoff_expr(prod / Expr(delta * delta), epsilon);
  out.scale = SmoothMap(n, {scale});
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i) comps.push_back(scale * Expr::coord(i));
  out.map = SmoothMap(n, std::move(comps));

  VerificationReport& rep = out.report;
  rep.name = "retraction onto the hyperplane neighbourhood";
  rep.tolerance = 0.0;  // every claim below is exact
  rep.details["n"] = n;
  rep.details["delta"] = delta;
  rep.details["epsilon"] = epsilon;

  const auto sq_prod = [&](const std::vector<double>& x) {
    double p = 1.0;
    for (double c : x) p *= c * c;
    return p;
  };

  Rng flat = rng.sub("hyperplanes");
  for (int s = 0; s < samples / 10 + 1; ++s) {
    auto x = flat.box(n, -3.0, 3.0);
    x[flat.pick(n)] = 0.0;
    const auto hx = out.map.eval(x);
    const auto hhx = out.map.eval(hx);
    if (hx != x) {
      rep.fail("the retraction moves a hyperplane point");
      rep.sample(max_abs_diff(hx, x), x, "hyperplane identity");
    } else if (hhx != hx) {
      rep.fail("the retraction is not idempotent on a hyperplane point");
    } else {
      rep.sample(0.0, x, "hyperplane identity");
    }
  }

  Rng inside = rng.sub("containment");
  for (int s = 0; s < samples; ++s) {
    auto x = inside.box(n, -3.0, 3.0);
    if (s % 2 == 0) {
      // Rescale half the stream into the blending shell around V's boundary.
      const double have = sq_prod(x);
      if (have > 0.0) {
        const double want = inside.range(0.5 * epsilon, 1.5) * delta * delta;
        const double lam = std::pow(want / have, 1.0 / (2.0 * n));
        for (double& c : x) c *= lam;
      }
    }
    const auto hx = out.map.eval(x);
    const double p = sq_prod(hx);
    const bool fixed_zero = std::all_of(hx.begin(), hx.end(), [](double c) { return c == 0.0; });
    if (!fixed_zero && p >= delta * delta)
      rep.fail("image point escapes the neighbourhood");
    else
      rep.sample(0.0, x, "image containment");
  }
  rep.details["checks"] = "identity and idempotence on the hyperplanes, image containment";
  return out;
}

SmoothMap loop_bump(double epsilon) {
  const Expr t = Expr::coord(0);
  return SmoothMap(1, {smoothcalc::cutoff_expr(2.0 * t, epsilon) *
                       smoothcalc::cutoff_expr(2.0 - 2.0 * t, epsilon)});
}

VerificationReport loop_retract_H(int n, const SmoothMap& psi, Rng rng, int samples) {
  if (n < 1) throw StructureError("the loop retract needs n >= 1");
  if (psi.arity() != 1 || psi.out_dim() != 1)
    throw StructureError("the profile must be a scalar curve");
  const auto psi_at = [&](double t) { return psi.eval({t})[0]; };
  if (std::abs(psi_at(0.5) - 1.0) > 1e-12)
    throw StructureError("the profile misses value one at one half");
  Rng outside = rng.sub("outside");
  for (int s = 0; s < 64; ++s) {
    const double lo = -2.0 + outside.unit() * 2.0;   // t <= 0
    const double hi = 1.0 + outside.unit() * 2.0;    // t >= 1
    if (std::abs(psi_at(lo)) > 1e-12 || std::abs(psi_at(hi)) > 1e-12 ||
        psi_at(0.0) != 0.0 || psi_at(1.0) != 0.0)
      throw StructureError("the profile fails to vanish outside the unit interval");
  }

  VerificationReport rep;
  rep.name = "loops retract onto the hyperplanes";
  rep.tolerance = 0.0;
  rep.details["n"] = n;
  const double half = psi_at(0.5);
  const double end0 = psi_at(0.0), end1 = psi_at(1.0);
  Rng pts = rng.sub("points");
  for (int i = 0; i < n; ++i) {
    const SmoothMap incl = hyperplane_inclusion(n, i);
    for (int s = 0; s < samples / n + 1; ++s) {
      const auto y = incl.eval(pts.box(n - 1, -2.0, 2.0));
      double worst = 0.0, ends = 0.0;
      for (double c : y) {
        worst = std::max(worst, std::abs(half * c - c));
        ends = std::max({ends, std::abs(end0 * c), std::abs(end1 * c)});
      }
      rep.sample(worst, y, "evaluation at one half returns the point");
      rep.sample(ends, y, "loops stay based at both ends");
    }
  }
  return rep;
}

}  // namespace swb::fibrancy
