// Final acceptance gate. Runs ten independent end-to-end checks against the
// built library, one line of output each, and exits 0 only if every single
// one passes. Budgets and tolerances are pinned here on purpose: this binary
// is the contract, not a tunable harness.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "swb/fibrancy.hpp"
#include "swb/pairs.hpp"
#include "swb/report.hpp"
#include "swb/rng.hpp"
#include "swb/smoothcalc.hpp"
#include "swb/suite.hpp"

namespace {

using swb::Rng;
using swb::VerificationReport;

constexpr std::uint64_t kSeed = 2026;

const swb::suite::Check& find_check(const std::string& name) {
  for (const auto& c : swb::suite::check_registry())
    if (c.name == name) return c;
  std::fprintf(stderr, "no registered check named %s\n", name.c_str());
  std::exit(2);
}

VerificationReport run_check(const std::string& name, int budget, double tol) {
  const auto& c = find_check(name);
  return c.run({Rng(kSeed).sub(name), budget, tol});
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

// 1. A smooth nonnegative extension of (x_j - x_k)^2 off the coordinate
//    hyperplanes of R^3 cannot exist: the faces force the full 2-jet at the
//    origin, and the forced data drives F(t,t,t) to -3t^2. The integer path
//    must say exactly -6, the floating jet path the same to 1e-9, and the
//    reference candidate must match the boundary as a polynomial identity.
Outcome halfline() {
  const auto out = swb::fibrancy::halfline_obstruction();
  bool ok = out.report.pass && out.extension_impossible;
  ok = ok && out.diag_second_exact == -6;
  const double jet_gap = std::abs(out.diag_second_jets - (-6.0));
  ok = ok && jet_gap <= 1e-9;
  for (int i = 0; i < 3; ++i) {
    ok = ok && out.forced_gradient(i) == 0.0;
    for (int j = 0; j < 3; ++j)
      ok = ok && out.forced_hessian(i, j) == (i == j ? 2.0 : -2.0);
  }
  return {ok, fmt("h''(0) = %lld exact, jet path gap %.1e, candidate diagonal -3t^2",
                  static_cast<long long>(out.diag_second_exact), jet_gap)};
}

// 2. Inclusion-exclusion fills every compatible horn family: 50 random
//    integer-coefficient instances per dimension 1..4, each probed on three
//    radius strata. Budget 1000 yields at least 1050 samples per dimension
//    (4800 total); the n=2 closed form is matched as an exact polynomial
//    identity inside the check.
Outcome abelian() {
  const auto rep = run_check("abelian-filler", 1000, 1e-9);
  const bool ok = rep.pass && rep.samples_used >= 4 * 1050 && rep.max_residual < 1e-9;
  return {ok, fmt("restriction residual %.2e over %ld stratified samples",
                  rep.max_residual, rep.samples_used)};
}

// 3. The circle retract sigma round-trips the section to 1e-9 at 10^4 angles
//    for three collar widths, agrees across the seam in both chart classes,
//    and the section's first coordinate is exactly zero on the riding edge.
Outcome circle() {
  const auto rep = run_check("circle-retract", 10000, 1e-9);
  bool ok = rep.pass && rep.samples_used >= 30000;
  std::vector<long long> zeros;
  for (const char* key : {"eps=0.1", "eps=0.2", "eps=0.3"}) {
    if (!rep.details.contains(key)) {
      ok = false;
      continue;
    }
    const auto& sub = rep.details.at(key).at("details");
    const long long z = sub.at("exact_edge_zeros").get<long long>();
    zeros.push_back(z);
    ok = ok && z > 0;
  }
  std::ostringstream edge;
  for (std::size_t i = 0; i < zeros.size(); ++i)
    edge << (i ? "/" : "") << zeros[i];
  return {ok, fmt("retract gap %.2e at %ld samples, exact edge zeros %s",
                  rep.max_residual, rep.samples_used, edge.str().c_str())};
}

// 4. Every chart-pair equivalence verifies end to end: both composites
//    homotopic to the identity with endpoint residual < 1e-9 at 500 samples
//    and every one of the 33 homotopy time slices staying inside the target
//    pair. On top of that, the cut-and-renormalize homotopy's denominator is
//    sampled directly and must stay strictly positive.
Outcome pair_equivalences() {
  const auto rep = run_check("pair-composites", 500, 1e-9);
  bool ok = rep.pass && rep.max_residual < 1e-9;

  const auto cut = swb::smoothcalc::make_cutoff(0.2);
  double min_den = std::numeric_limits<double>::infinity();
  long guarded = 0;
  for (int n = 1; n <= 3; ++n) {
    const auto e = swb::pairs::equidef_simplex_boundary_collar(n, 0.2);
    Rng rg = Rng(kSeed).sub("positivity-guard").sub(std::to_string(n));
    for (int k = 0; k < 500; ++k) {
      const auto x = (k % 2 == 0) ? e.src.sample_total(rg) : e.src.sample_sub(rg);
      for (int step = 0; step <= 32; ++step) {
        const double t = step / 32.0;
        double den = 0.0;
        for (double xi : x) den += t * xi + (1.0 - t) * cut.eval({xi})[0];
        min_den = std::min(min_den, den);
        ++guarded;
        ok = ok && den > 0.0;
      }
    }
  }
  return {ok, fmt("composites residual %.2e; mixing denominator > 0 at %ld slice "
                  "samples (min %.3f)",
                  rep.max_residual, guarded, min_den)};
}

// 5. The simplicial engine: face/degeneracy identities exhaustively on the
//    standard family and the square, nondegenerate counts (4,5,2) for the
//    square, the homology table, and a certified missing inner-horn filler
//    in the boundary of the triangle.
Outcome simplicial() {
  const auto a = run_check("simplicial-identities", 0, 0.0);
  const auto b = run_check("homology-and-counts", 0, 0.0);
  const auto c = run_check("missing-horn-filler", 0, 0.0);
  const bool ok = a.pass && b.pass && c.pass;
  return {ok, fmt("identities / homology / filler search: %s, %s, %s",
                  a.pass ? "pass" : "FAIL", b.pass ? "pass" : "FAIL",
                  c.pass ? "pass" : "FAIL")};
}

// 6. Realization: horn cell counts (n maximal cells over C(n,2) seams one
//    dimension down) for n = 2,3,4, exactly one seam segment in the glued
//    square, and the natural map to the product verified non-injective by a
//    concrete witness pair yet surjective on a 32x32 probe grid.
Outcome realization() {
  const auto a = run_check("horn-cell-counts", 1000, 1e-9);
  const auto b = run_check("square-seam", 1000, 1e-9);
  const auto c = run_check("product-map-probe", 1024, 1e-12);
  const bool ok = a.pass && b.pass && c.pass && c.samples_used >= 1000;
  return {ok, fmt("cells / seam / product probe: %s, %s, %s (%ld grid points)",
                  a.pass ? "pass" : "FAIL", b.pass ? "pass" : "FAIL",
                  c.pass ? "pass" : "FAIL", c.samples_used)};
}

// 7. Lifting horn data through the winding projection: affine phases lift
//    with residual < 1e-9 and whole-turn shifts read off exactly, while
//    engineered half-turn mismatches are rejected.
Outcome winding() {
  const auto rep = run_check("winding-lift", 1000, 1e-9);
  return {rep.pass, fmt("lift residual %.2e over %ld samples, mismatches rejected",
                        rep.max_residual, rep.samples_used)};
}

// 8. The thickened-hyperplane retraction fixes the hyperplanes bitwise and
//    lands every point of its support inside the open neighbourhood, probed
//    at 10^4 samples per dimension.
Outcome dopen() {
  const auto rep = run_check("dopen-retraction", 10000, 0.0);
  const bool ok = rep.pass && rep.samples_used >= 3 * 10000;
  return {ok, fmt("identity-and-support residual %.1e at %ld samples",
                  rep.max_residual, rep.samples_used)};
}

// 9. Derivatives across the whole expression corpus, flat bumps included,
//    agree with central finite differences inside the per-entry allowance
//    max(1e-6, 1e-4 * |value|); residuals are reported as ratios of that
//    allowance, so the bar is 1.
Outcome jets() {
  const auto rep = run_check("jet-corpus", 0, 1.0);
  const auto& corpus = swb::suite::expression_corpus();
  bool has_bump = false;
  for (const auto& entry : corpus)
    has_bump = has_bump || entry.name.find("flat-bump") != std::string::npos;
  const bool ok = rep.pass && corpus.size() >= 10 && has_bump;
  return {ok, fmt("worst gradient/Hessian ratio %.3f of allowance across %zu maps",
                  rep.max_residual, corpus.size())};
}

// 10. Same configuration, same bytes: a full batch run is repeated with a
//     different worker count and every emitted document must compare equal
//     byte for byte.
Outcome determinism() {
  swb::suite::SuiteConfig cfg;
  cfg.suite = "all";
  cfg.seed = kSeed;
  cfg.jobs = 1;
  const auto first = swb::suite::run_suite(cfg);
  cfg.jobs = 4;
  const auto second = swb::suite::run_suite(cfg);
  bool ok = first.all_passed && second.all_passed;
  ok = ok && first.documents.size() == second.documents.size();
  std::size_t matched = 0;
  for (const auto& [stem, doc] : first.documents) {
    const auto it = second.documents.find(stem);
    if (it != second.documents.end() && doc.dump(2) == it->second.dump(2)) ++matched;
  }
  ok = ok && matched == first.documents.size();
  return {ok, fmt("%zu of %zu documents byte-identical across reruns",
                  matched, first.documents.size())};
}

}  // namespace

int main() {
  struct Row {
    const char* label;
    Outcome (*run)();
  };
  const Row rows[] = {
      {"half-line obstruction", halfline},
      {"abelian horn filler", abelian},
      {"circle retract", circle},
      {"pair equivalences", pair_equivalences},
      {"simplicial engine", simplicial},
      {"realization gluing", realization},
      {"winding lift", winding},
      {"d-open retraction", dopen},
      {"jet integrity", jets},
      {"determinism", determinism},
  };

  int passed = 0;
  const int total = static_cast<int>(std::size(rows));
  for (int i = 0; i < total; ++i) {
    Outcome out;
    try {
      out = rows[i].run();
    } catch (const std::exception& ex) {
      out = {false, std::string("threw: ") + ex.what()};
    }
    if (out.ok) ++passed;
    std::printf("%2d/10  %s  %-24s  %s\n", i + 1, out.ok ? "pass" : "FAIL",
                rows[i].label, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%d passed\n", passed, total);
  return passed == total ? 0 : 1;
}
