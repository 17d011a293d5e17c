#include "swb/report.hpp"

#include <cmath>
#include <sstream>

namespace swb {

void VerificationReport::sample(double residual, const std::vector<double>& point,
                                const std::string& desc) {
  ++samples_used;
  if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
  if (residual > max_residual || !witness.has_value()) {
    if (residual > max_residual) {
      max_residual = residual;
      witness = point;
      witness_desc = desc;
    } else if (!witness.has_value()) {
      witness = point;
      witness_desc = desc;
    }
  }
  if (residual > tolerance) pass = false;
}

void VerificationReport::fail(const std::string& message) {
  pass = false;
  failures.push_back(message);
}

void VerificationReport::absorb(const VerificationReport& sub) {
  pass = pass && sub.pass;
  max_residual = std::max(max_residual, sub.max_residual);
  samples_used += sub.samples_used;
  for (const auto& f : sub.failures) failures.push_back(sub.name + ": " + f);
  if (!sub.pass && failures.empty() && sub.failures.empty())
    failures.push_back(sub.name + ": residual " + std::to_string(sub.max_residual) +
                       " above tolerance " + std::to_string(sub.tolerance));
  details[sub.name] = sub.to_json();
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["pass"] = pass;
  j["tolerance"] = tolerance;
  j["max_residual"] = max_residual;
  j["samples_used"] = samples_used;
  if (witness.has_value())
    j["witness"] = *witness;
  else
    j["witness"] = nullptr;
  j["witness_desc"] = witness_desc;
  j["failures"] = failures;
  j["details"] = details;
  return j;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << (pass ? "[pass] " : "[FAIL] ") << name << "  max_residual=" << max_residual
     << " tol=" << tolerance << " samples=" << samples_used;
  for (const auto& f : failures) os << "\n        " << f;
  return os.str();
}

}  // namespace swb
