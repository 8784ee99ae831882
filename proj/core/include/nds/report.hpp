#pragma once

#include <Eigen/Core>

#include <vector>

#include "nds/linalg.hpp"

namespace nds {

/// Singular values straddling a rank cut. A large kept/dropped ratio means
/// the verdict is numerically decisive; a small one flags a borderline call.
struct SigmaGap {
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;

  /// kept/dropped ratio; +inf when nothing was dropped.
  double ratio() const;
};

/// Verdict plus certificate for one rank condition test. deficiency is the
/// target dimension (columns for an FCR test, rows for an FRR test) minus
/// the achieved rank, so verdict <=> deficiency == 0.
struct ConditionReport {
  bool verdict = false;
  Eigen::Index test_rows = 0;
  Eigen::Index test_cols = 0;
  Eigen::Index rank = 0;
  Eigen::Index deficiency = 0;
  std::vector<int> reduced_subsystems;  // certified subsystems dropped from the test
  SigmaGap sigma_gap;
};

/// Build a report from an FCR test on m.
ConditionReport fcr_report(const Eigen::MatrixXd& m, const Tol& tol);

/// Build a report from an FRR test on m.
ConditionReport frr_report(const Eigen::MatrixXd& m, const Tol& tol);

}  // namespace nds
