#pragma once

// Self-check suite run by `mnpq validate`.

#include <string>
#include <vector>

#include "mnpq/config.hpp"

namespace mnpq {

enum class CheckStatus { pass, fail, info };
std::string_view to_string(CheckStatus s);

struct ValidationCheck {
  std::string name;
  CheckStatus status = CheckStatus::info;
  double measured = 0.0;
  double threshold = 0.0;
  std::string summary;
  std::string details_json = "null";  // structured extras
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::string config_hash;
  bool passed() const;
  std::string to_json() const;
};

ValidationReport run_validation(const RunConfig& cfg);

/// Explicit-equation cross-check with the cross-decay rate of the explicit
/// side replaced by `corrupted_cross_decay`; returns the element names whose
/// coefficients newly disagree compared with the uncorrupted check.
std::vector<std::string> fault_injection_elements(const EffectiveParams& eff,
                                                  double corrupted_cross_decay);

}  // namespace mnpq
