#pragma once

#include <vector>

#include "nds/model.hpp"
#include "nds/report.hpp"

namespace nds {

/// Per-subsystem Condition I certificate. With (u2, v2) from the SVD
/// partition of E(i), the local test matrix is
///   T(i) = u2^T [A_xx(i) v2, A_xv(i)]
/// whose right null basis is split row-wise into an x part (first
/// n_x(i) - r(i) rows) and a v part (last n_v(i) rows). in_s_i records
/// whether T(i) is FCR, i.e. the subsystem never obstructs Condition I.
struct SubsystemCertI {
  SvdPartition svd;      // of E(i)
  Eigen::MatrixXd n_xx;  // (n_x(i) - r(i)) x k_i
  Eigen::MatrixXd n_xv;  // n_v(i) x k_i
  bool in_s_i = false;
};

/// Per-subsystem Condition II certificate, the row dual: the local test is
///   G(i) = [u2^T B_x(i); B_z(i)]
/// whose left null basis is split column-wise into a B_x part (first
/// n_e(i) - r(i) columns) and a B_z part (last n_z(i) columns). in_s_ii
/// records whether G(i) is FRR.
struct SubsystemCertII {
  SvdPartition svd;      // of E(i)
  Eigen::MatrixXd n_bx;  // l_i x (n_e(i) - r(i))
  Eigen::MatrixXd n_bz;  // l_i x n_z(i)
  bool in_s_ii = false;
};

SubsystemCertI cert_i(const Subsystem& sub, const Tol& tol = {});
SubsystemCertII cert_ii(const Subsystem& sub, const Tol& tol = {});

/// All per-subsystem certificates of a model. This is the expensive,
/// connection-independent part: it never has to be recomputed when only
/// Phi changes. Each certificate depends on one subsystem only, so the
/// map is safe to run concurrently.
struct AnalysisCerts {
  std::vector<SubsystemCertI> cond_i;
  std::vector<SubsystemCertII> cond_ii;
};

AnalysisCerts make_certs(const NdsModel& model, const Tol& tol = {});

/// The Phi-affine Condition I test matrix
///   M_I = N_xv - Phi (A_zx V_E2 N_xx + A_zv N_xv)
/// assembled from per-subsystem null bases placed at their global offsets.
/// Subsystems with in_s_i contribute no columns.
Eigen::MatrixXd condition_i_test_matrix(const NdsModel& model,
                                        const std::vector<SubsystemCertI>& certs,
                                        const Eigen::MatrixXd& phi);

/// The Phi-affine Condition II test matrix
///   M_II = N_Bz - (N_Bx U_E2^T A_xv + N_Bz A_zv) Phi
/// assembled row-wise; subsystems with in_s_ii contribute no rows.
Eigen::MatrixXd condition_ii_test_matrix(const NdsModel& model,
                                         const std::vector<SubsystemCertII>& certs,
                                         const Eigen::MatrixXd& phi);

/// Condition I via subsystem-wise certificates: when every subsystem is in
/// S_I the verdict is true for any Phi and no global test is formed;
/// otherwise the verdict is is_fcr(M_I). Well-posedness is not required.
ConditionReport check_condition_i(const NdsModel& model,
                                  const AnalysisCerts& certs,
                                  const Tol& tol = {});
ConditionReport check_condition_i(const NdsModel& model, const Tol& tol = {});

/// Condition II via subsystem-wise certificates; requires an overall square
/// stack (sum n_e == sum n_x), else throws NotApplicableError.
ConditionReport check_condition_ii(const NdsModel& model,
                                   const AnalysisCerts& certs,
                                   const Tol& tol = {});
ConditionReport check_condition_ii(const NdsModel& model, const Tol& tol = {});

/// Same verdicts computed from one monolithic null-space calculation on the
/// stacked matrices, with no per-subsystem shortcut. Used to cross-check
/// that dropping certified subsystems does not change verdicts.
ConditionReport check_condition_i_stacked(const NdsModel& model,
                                          const Tol& tol = {});
ConditionReport check_condition_ii_stacked(const NdsModel& model,
                                           const Tol& tol = {});

/// Sufficient per-subsystem conditions under which the verdicts cannot be
/// changed by any choice of connection matrix.
struct ConnectionIndependence {
  bool cond_i_free = false;   // every E(i) FRR or in_s_i
  bool cond_ii_free = false;  // every subsystem in_s_ii
};
ConnectionIndependence connection_independent(const NdsModel& model,
                                              const Tol& tol = {});

/// The coupled block test matrix
///   Pi = [U_E2^T A_xx V_E2,  U_E2^T A_xv;
///         -Phi A_zx V_E2,    I - Phi A_zv]
/// built from the stacked matrices. FCR(Pi) is equivalent to the Condition I
/// verdict; the equivalence is exercised by tests.
Eigen::MatrixXd pi_matrix(const NdsModel& model, const Tol& tol = {});

/// The eliminated test matrix Omega = U_E2^T A_lumped V_E2 (requires a
/// well-posed model). FCR(Omega) is Condition I by definition.
Eigen::MatrixXd omega_matrix(const NdsModel& model, const Tol& tol = {});

}  // namespace nds
