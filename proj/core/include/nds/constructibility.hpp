#pragma once

#include <vector>

#include "nds/model.hpp"
#include "nds/scalable.hpp"

namespace nds {

/// Existence primitive: there is an m x p matrix X making A + X*B full
/// column rank iff rows(A) >= cols(A) and [A; B] is FCR. Throws
/// DimensionError when A and B disagree on the column count.
bool fcr_achievable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                    const Tol& tol = {});

/// Can some connection matrix supply the rank this subsystem is missing for
/// Condition I? Tests [U_E2^T A_xx; A_zx; V_E1^T] for FCR. Decisive only
/// for subsystems outside S_I; D_I collects the failures.
bool scm_can_fix_i(const Subsystem& sub, const Tol& tol = {});

/// Condition II counterpart: tests [U_E1, A_xv, B_x] for FRR. D_II collects
/// the failures, and membership in D_II cannot be repaired by any
/// decentralized static output feedback.
bool scm_can_fix_ii(const Subsystem& sub, const Tol& tol = {});

/// Can a local static output feedback (together with some connection
/// matrix) supply the missing rank for Condition I? Tests
/// [U_E2^T A_xx; A_zx; C_x; V_E1^T] for FCR. Implied by scm_can_fix_i,
/// since the stack only gains rows.
bool feedback_can_fix_i_subsystem(const Subsystem& sub, const Tol& tol = {});

/// Rank predicates of an isolated subsystem, exercised by invariant tests:
/// membership in S_I forces the first, membership in S_II forces the second.
struct IsolatedRankChecks {
  bool xx_v1_fcr = false;  // [U_E2^T A_xx; V_E1^T] FCR
  bool u1_bx_frr = false;  // [U_E1, B_x] FRR
};
IsolatedRankChecks isolated_rank_checks(const Subsystem& sub,
                                        const Tol& tol = {});

/// Joint satisfiability of Conditions I and II has no known closed-form
/// certificate; it is only ever confirmed by a successful search.
enum class JointExistence { Unknown, ConfirmedBySearch };

struct SubsystemConstructibility {
  int index = 0;
  bool in_s_i = false;
  bool in_s_ii = false;
  bool scm_ok_i = false;       // per-subsystem Condition I existence test
  bool scm_ok_ii = false;      // per-subsystem Condition II existence test
  bool in_d_i = false;         // == !scm_ok_i
  bool in_d_ii = false;        // == !scm_ok_ii
  bool feedback_ok_i = false;  // feedback-assisted Condition I existence test
};

struct ConstructibilityReport {
  std::vector<SubsystemConstructibility> subsystems;
  /// Some SCM achieves Condition I, i.e. scm_ok_i for every i outside S_I.
  bool exists_phi_for_i = false;
  /// Some SCM achieves Condition II; requires a square stack and scm_ok_ii
  /// for every i outside S_II.
  bool exists_phi_for_ii = false;
  /// Some (feedback, SCM) pair achieves Condition I, i.e. feedback_ok_i for
  /// every i in D_I.
  bool feedback_can_fix_i = false;
  /// False whenever D_II is nonempty: no decentralized static output
  /// feedback can repair Condition II.
  bool feedback_can_fix_ii = false;
  JointExistence joint_existence = JointExistence::Unknown;
};

ConstructibilityReport constructibility_report(const NdsModel& model,
                                               const Tol& tol = {});
ConstructibilityReport constructibility_report(const NdsModel& model,
                                               const AnalysisCerts& certs,
                                               const Tol& tol = {});

}  // namespace nds
