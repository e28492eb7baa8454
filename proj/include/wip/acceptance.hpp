#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wip/core.hpp"
#include "wip/gait.hpp"

namespace wip {

struct CriterionResult {
  std::string id;  // stable name, e.g. "CADENCE-ANCHOR"
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240917;
  int stability_runs = 20;
  int oracle_traces = 100;
  // Mutation hook: added to the evaluated cadence law at the anchor point.
  double anchor_perturbation = 0.0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

namespace oracle {

struct OfflineStep {
  double apex_height = 0.0;
  double end = 0.0;
};

/// Brute-force segmentation of one foot: maximal runs of samples above
/// `ground_epsilon` that are followed by a grounded sample, kept when their
/// maximum reaches `min_step_height`. Samples of the other foot are ignored.
std::vector<OfflineStep> offline_steps(std::span<const FootSample> trace, Foot foot,
                                       double ground_epsilon = 0.01,
                                       double min_step_height = 0.03);

/// Band count by direct evaluation of 0.011 e + 0.085 per band.
int band_count_direct(double target_kgf, double extension_cm);

}  // namespace oracle

}  // namespace wip
