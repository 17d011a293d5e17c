#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "swb/suite.hpp"

using namespace swb;
using namespace swb::suite;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("registry shape") {
  const auto& reg = check_registry();
  CHECK(reg.size() >= 12);
  std::set<std::string> names, groups;
  for (const auto& c : reg) {
    CHECK(names.insert(c.name).second);
    groups.insert(c.group);
    CHECK(bool(c.run));
  }
  CHECK(groups ==
        std::set<std::string>{"simplicial", "equidef", "realization", "fibrancy"});
  const auto suites = suite_names();
  CHECK(suites.back() == "all");
  CHECK(suites.size() == 5);
}

TEST_CASE("suite selection and failure plumbing") {
  SuiteConfig cfg;
  cfg.suite = "simplicial";
  cfg.seed = 7;
  const auto run = run_suite(cfg);
  CHECK(run.results.size() == 3);
  CHECK(run.all_passed);
  CHECK(run.documents.count("summary") == 1);
  CHECK(run.documents.size() == 4);
  CHECK(run.documents.at("summary").at("all_passed") == true);
  for (const auto& r : run.results) CHECK(r.group == "simplicial");

  SUBCASE("unknown names are rejected") {
    cfg.suite = "everything";
    CHECK_THROWS_AS(run_suite(cfg), StructureError);
  }

  SUBCASE("an impossible tolerance override surfaces as named failures") {
    cfg.suite = "equidef";
    cfg.tol = 1e-30;
    cfg.budget = 40;
    const auto broken = run_suite(cfg);
    CHECK_FALSE(broken.all_passed);
    const auto failing = broken.documents.at("summary").at("failing");
    CHECK(std::find(failing.begin(), failing.end(), "pair-composites") != failing.end());
  }
}

TEST_CASE("full run is deterministic") {
  SuiteConfig cfg;
  cfg.suite = "all";
  cfg.seed = 7;
  cfg.budget = 50;
  const auto first = run_suite(cfg);
  CHECK(first.all_passed);
  CHECK(first.results.size() == check_registry().size());

  cfg.jobs = 4;
  const auto second = run_suite(cfg);
  REQUIRE(second.documents.size() == first.documents.size());
  for (const auto& [stem, doc] : first.documents)
    CHECK(doc.dump(2) == second.documents.at(stem).dump(2));

  SUBCASE("reports carry the run configuration verbatim") {
    for (const auto& r : first.results) {
      const auto& doc = first.documents.at(r.name);
      CHECK(doc.at("seed") == 7);
      CHECK(doc.at("budget") == 50);
    }
  }

  SUBCASE("written bundles match the in-memory documents byte for byte") {
    const fs::path dir = fs::temp_directory_path() / "swb-suite-bundle";
    fs::remove_all(dir);
    cfg.jobs = 1;
    cfg.out_dir = dir;
    const auto written = run_suite(cfg);
    for (const auto& [stem, doc] : written.documents)
      CHECK(slurp(dir / (stem + ".json")) == doc.dump(2) + "\n");
    fs::remove_all(dir);
  }
}

TEST_CASE("curve tables") {
  SUBCASE("cutoff ramps from zero to one monotonically") {
    const auto t = sample_curve("cutoff", 0.2, 101);
    CHECK(t.columns == std::vector<std::string>{"t", "value"});
    REQUIRE(t.rows.size() == 101);
    CHECK(t.rows.front() == std::vector<double>{0.0, 0.0});
    CHECK(t.rows.back() == std::vector<double>{1.0, 1.0});
    for (size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][1] >= t.rows[i - 1][1]);
  }

  SUBCASE("section height hits one half at both ends") {
    const auto t = sample_curve("section-height", 0.2, 1001);
    REQUIRE(t.rows.size() == 1001);
    CHECK(t.rows.front() == std::vector<double>{-0.5, 0.5});
    CHECK(t.rows.back() == std::vector<double>{0.5, 0.5});
  }

  SUBCASE("section coordinates ride the edge at the split end") {
    const auto t = sample_curve("section-coords", 0.2, 11);
    CHECK(t.columns.size() == 4);
    CHECK(t.rows.back()[1] == 0.0);
    for (const auto& row : t.rows)
      CHECK(std::abs(row[1] + row[2] + row[3] - 1.0) <= 1e-12);
  }

  SUBCASE("the diagonal of the candidate extension is minus three t squared") {
    const auto t = sample_curve("obstruction-diagonal", 0.2, 201);
    for (const auto& row : t.rows) CHECK(row[1] == -(3.0 * (row[0] * row[0])));
    CHECK(t.rows.front() == std::vector<double>{-1.0, -3.0});
  }

  SUBCASE("unknown curves are rejected") {
    CHECK_THROWS_AS(sample_curve("spiral", 0.2, 10), StructureError);
    CHECK_THROWS_AS(sample_curve("cutoff", 0.2, 1), StructureError);
  }
}

TEST_CASE("plot files") {
  const fs::path dir = fs::temp_directory_path() / "swb-plot-test";
  fs::remove_all(dir);
  const auto table = sample_curve("section-height", 0.2, 11);
  const auto [csv, svg] = emit_plot(table, dir / "height");
  const std::string text = slurp(csv);
  CHECK(text.rfind("theta,height\n", 0) == 0);
  CHECK(text.find("\n-0.5,0.5\n") != std::string::npos);
  CHECK(text.find("\n0.5,0.5\n") != std::string::npos);
  const std::string picture = slurp(svg);
  CHECK(picture.rfind("<svg", 0) == 0);
  CHECK(picture.find("<polyline") != std::string::npos);
  CHECK(picture.find("</svg>") != std::string::npos);

  // same table, same bytes
  const auto [csv2, svg2] = emit_plot(table, dir / "again");
  CHECK(slurp(csv2) == text);
  fs::remove_all(dir);
}

TEST_CASE("derivative corpus") {
  const auto corpus = expression_corpus();
  CHECK(corpus.size() >= 10);
  std::set<std::string> names;
  for (const auto& e : corpus) {
    CHECK(names.insert(e.name).second);
    REQUIRE_FALSE(e.points.empty());
    for (const auto& p : e.points) CHECK(static_cast<int>(p.size()) == e.map.arity());
  }
  bool has_bump = false;
  for (const auto& e : corpus) has_bump |= e.name.find("bump") != std::string::npos;
  CHECK(has_bump);
}
