#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swb/expr.hpp"
#include "swb/report.hpp"
#include "swb/rng.hpp"

namespace swb::suite {

using StructureError = expr::StructureError;

/// Settings for one batch run. A budget or tolerance of zero keeps every
/// check's built-in default; positive values override across the board. The
/// seed and the knobs actually used are recorded in every emitted report,
/// and all randomness flows from the seed, so two runs with the same
/// configuration produce byte-identical output no matter how many worker
/// threads they use.
struct SuiteConfig {
  std::string suite = "all";
  std::uint64_t seed = 2026;
  int budget = 0;
  double tol = 0.0;
  int jobs = 1;
  std::filesystem::path out_dir;  ///< empty: nothing written to disk
};

/// What a registered check receives: a private random stream derived from
/// the run seed and the check's own name, plus the resolved knobs.
struct CheckContext {
  Rng rng;
  int budget = 0;
  double tol = 0.0;
};

struct Check {
  std::string name;   ///< kebab case; doubles as the report file stem
  std::string group;  ///< owning suite
  int default_budget = 0;
  double default_tol = 0.0;
  std::function<VerificationReport(const CheckContext&)> run;
};

/// Every registered check in a fixed order. Groups: simplicial, equidef,
/// realization, fibrancy.
const std::vector<Check>& check_registry();

/// The valid arguments to run_suite, in registry order plus "all".
std::vector<std::string> suite_names();

struct CheckResult {
  std::string name;
  std::string group;
  int budget = 0;
  double tol = 0.0;
  VerificationReport report;
};

struct SuiteRun {
  std::vector<CheckResult> results;  ///< registry order
  bool all_passed = true;
  /// One JSON document per check plus "summary", keyed by file stem.
  std::map<std::string, nlohmann::json> documents;
};

/// Run the named suite. Throws StructureError for an unknown suite name;
/// file system errors propagate. A check that throws is converted into a
/// failing report rather than aborting the run.
SuiteRun run_suite(const SuiteConfig& config);

/// A sampled curve: one abscissa column followed by value columns.
struct PlotTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Known curves: "cutoff" (the saturating ramp), "section-height" (the
/// middle barycentric weight of the section), "section-coords" (all three
/// weights), "obstruction-diagonal" (the candidate extension along the
/// diagonal).
PlotTable sample_curve(const std::string& curve, double eps = 0.2,
                       int samples = 1001);

void write_csv(const PlotTable& t, const std::filesystem::path& path);
void write_svg(const PlotTable& t, const std::filesystem::path& path);

/// CSV plus SVG side by side; returns the two paths written.
std::pair<std::filesystem::path, std::filesystem::path> emit_plot(
    const PlotTable& t, const std::filesystem::path& stem);

/// One derivative-check subject: a map and the points to probe.
struct CorpusEntry {
  std::string name;
  expr::SmoothMap map{0, {}};
  std::vector<std::vector<double>> points;
};

/// Fixed zoo of expression shapes exercised by the derivative cross-check:
/// polynomials, rational and radical compositions, flat bumps, cutoff
/// chains, trigonometric charts, piecewise maps and the construction
/// outputs of the other modules.
std::vector<CorpusEntry> expression_corpus();

}  // namespace swb::suite
