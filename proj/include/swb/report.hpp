#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace swb {

/// Uniform result record produced by every verification routine.
///
/// Numeric checks track the worst residual seen together with the sample
/// point that produced it; combinatorial checks push human-readable entries
/// onto `failures` instead. `details` carries per-check extras (counts,
/// chosen dilation factors, guard margins) and lands in the JSON output
/// unchanged.
struct VerificationReport {
  std::string name;
  bool pass = true;
  double tolerance = 0.0;
  double max_residual = 0.0;
  long samples_used = 0;
  std::optional<std::vector<double>> witness;
  std::string witness_desc;
  std::vector<std::string> failures;
  nlohmann::json details = nlohmann::json::object();

  /// Record one numeric sample: keeps the worst residual and its location,
  /// and fails the report when the residual exceeds the tolerance.
  void sample(double residual, const std::vector<double>& point,
              const std::string& desc = "");

  /// Record a discrete failure.
  void fail(const std::string& message);

  /// Merge a sub-report: pass/fail, residual maximum, sample count and
  /// failure list all fold in; sub-report details are attached under its name.
  void absorb(const VerificationReport& sub);

  nlohmann::json to_json() const;
  std::string to_text() const;
};

}  // namespace swb
