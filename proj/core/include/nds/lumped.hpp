#pragma once

#include <cstdint>

#include "nds/model.hpp"
#include "nds/report.hpp"

namespace nds {

/// The network collapsed to a single descriptor system
///   E dx = A x + B u,   y = C x + D u
/// by eliminating the internal channels through the SCM. This is the
/// ground-truth path every subsystem-wise verdict is checked against.
struct LumpedModel {
  Eigen::MatrixXd E;  // n_e x n_x
  Eigen::MatrixXd A;  // n_e x n_x
  Eigen::MatrixXd B;  // n_e x n_u
  Eigen::MatrixXd C;  // n_y x n_x
  Eigen::MatrixXd D;  // n_y x n_u
  /// 2-norm condition estimate of I - A_zv*Phi from the elimination solve.
  double interconnection_cond = 1.0;
};

/// True iff I - A_zv*Phi has full numerical rank, i.e. the interconnection
/// defines unique internal signals.
bool well_posed(const NdsModel& model, const Tol& tol = {});
bool well_posed(const Stacked& st, const Eigen::MatrixXd& phi, const Tol& tol = {});

/// Eliminate v and z:
///   A = A_xx + A_xv*Phi*(I - A_zv*Phi)^{-1}*A_zx, and likewise for B, C, D.
/// The inverse is applied through a factorized solve. Throws IllPosedError
/// when I - A_zv*Phi is numerically singular.
LumpedModel lumped_lft(const NdsModel& model, const Tol& tol = {});
LumpedModel lumped_lft(const Stacked& st, const Eigen::MatrixXd& phi, const Tol& tol = {});

/// Condition I on the lumped pair (E, A): with (u2, v2) from the SVD
/// partition of E, test u2^T*A*v2 for full column rank. Vacuously true when
/// E is FCR (v2 empty).
ConditionReport condition_i_lumped(const LumpedModel& m, const Tol& tol = {});

/// Condition II on the lumped pair (E, B): rank([E B]) == rows(E).
ConditionReport condition_ii_lumped(const LumpedModel& m, const Tol& tol = {});

/// Randomized regularity probe for a square pencil (E, A): samples `trials`
/// values of lambda and reports whether some lambda*E - A reaches full rank.
struct RegularityProbe {
  bool regular = false;
  /// A negative verdict is sampling-based, not a proof; a positive one
  /// exhibits a witness lambda.
  bool probabilistic = false;
  int trials = 0;
};
RegularityProbe regularity_probe(const LumpedModel& m, int trials = 8,
                                 std::uint64_t seed = 0, const Tol& tol = {});

enum class TimeDomain { Continuous, Discrete };

/// Causality/impulse-freeness verdict assembled from the lumped tests.
/// Continuous: impulse free iff n_e >= n_x and Condition I. Discrete: the
/// sufficient path regular AND Condition II AND Condition I; when Condition
/// II fails no claim of non-causality is made, only that this path does not
/// certify causality.
struct OverallVerdict {
  TimeDomain domain = TimeDomain::Continuous;
  int n_e = 0;
  int n_x = 0;
  bool dimension_ok = false;  // n_e >= n_x, necessary in both readings
  bool square = false;
  ConditionReport cond_i;
  ConditionReport cond_ii;
  RegularityProbe regularity;        // meaningful only for the discrete domain
  bool impulse_free = false;         // continuous verdict
  bool causal_sufficient_path = false;  // discrete verdict along the rank-test path
};

OverallVerdict verdict(const NdsModel& model, TimeDomain domain,
                       const Tol& tol = {}, int regularity_trials = 8,
                       std::uint64_t seed = 0);

}  // namespace nds
