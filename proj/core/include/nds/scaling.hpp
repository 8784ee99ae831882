#pragma once

#include <cstdint>
#include <vector>

#include "nds/linalg.hpp"

namespace nds {

/// Parameters of the growth-order comparison between the subsystem-wise
/// pipeline and the lumped pipeline on square models of N subsystems with
/// fixed per-subsystem dimensions.
struct ScalingParams {
  std::vector<int> n_list = {8, 16, 32, 64, 128};
  int dims = 4;  // per-subsystem state dimension (n_x = n_e)
  int repeats = 3;
  std::uint64_t seed = 1;
  Tol tol;
};

struct ScalingRow {
  int n = 0;
  double t_subsystem_ms = 0.0;  // certificates + both affine rank tests
  double t_lumped_ms = 0.0;     // elimination + both lumped rank tests
  bool verdicts_agree = false;  // both pipelines reached the same verdicts
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double slope_subsystem = 0.0;  // fitted log-log slope
  double slope_lumped = 0.0;
  double ratio_at_max = 0.0;  // lumped / subsystem time at the largest N
};

/// Run the comparison. Certificates are recomputed inside every timed
/// repetition; nothing is cached across measurements.
ScalingResult run_scaling(const ScalingParams& params);

}  // namespace nds
