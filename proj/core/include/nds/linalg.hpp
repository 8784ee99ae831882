#pragma once

#include <Eigen/Core>

#include "nds/errors.hpp"

namespace nds {

/// Thresholds for numerical rank decisions. A singular value sigma_i is
/// counted towards the rank when sigma_i > max(rank_atol, rank_rtol * sigma_max).
struct Tol {
  double rank_rtol = 1e-9;
  double rank_atol = 1e-12;
};

/// Full SVD of a matrix split at the numerical rank r:
///   M = [u1 u2] * [diag(sigma) 0; 0 0] * [v1 v2]^T
/// u2 spans the left null space, v2 the right null space. Both are empty
/// when M has full row / column rank respectively.
struct SvdPartition {
  Eigen::MatrixXd u1;      // m x r
  Eigen::MatrixXd u2;      // m x (m-r)
  Eigen::MatrixXd v1;      // n x r
  Eigen::MatrixXd v2;      // n x (n-r)
  Eigen::VectorXd sigma;   // r positive values, nonincreasing
  Eigen::Index rank = 0;
};

/// Outcome of a single rank decision, kept so borderline verdicts can be
/// audited: a small kept/dropped gap means the verdict is fragile.
struct RankDecision {
  Eigen::Index rank = 0;
  double smallest_kept = 0.0;    // sigma_r, 0 when rank == 0
  double largest_dropped = 0.0;  // sigma_{r+1}, 0 when nothing was dropped
  double sigma_max = 0.0;
};

/// Rank of M at tolerance. 0 for empty or all-zero matrices.
/// Throws InvalidInputError on non-finite entries.
Eigen::Index numeric_rank(const Eigen::MatrixXd& m, const Tol& tol = {});

/// numeric_rank plus the singular values straddling the cut.
RankDecision rank_decision(const Eigen::MatrixXd& m, const Tol& tol = {});

/// Full SVD partition at the numerical rank.
SvdPartition svd_partition(const Eigen::MatrixXd& m, const Tol& tol = {});

/// Full column rank. Matrices with zero columns are vacuously FCR.
bool is_fcr(const Eigen::MatrixXd& m, const Tol& tol = {});

/// Full row rank. Matrices with zero rows are vacuously FRR.
bool is_frr(const Eigen::MatrixXd& m, const Tol& tol = {});

/// Orthonormal basis of the right null space, n x (n - rank).
/// Empty when M is FCR.
Eigen::MatrixXd right_null_basis(const Eigen::MatrixXd& m, const Tol& tol = {});

/// Orthonormal-row basis of the left null space, (m - rank) x m.
/// Empty when M is FRR.
Eigen::MatrixXd left_null_basis(const Eigen::MatrixXd& m, const Tol& tol = {});

}  // namespace nds
