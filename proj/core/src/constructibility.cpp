#include "nds/constructibility.hpp"

namespace nds {

bool fcr_achievable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                    const Tol& tol) {
  if (a.cols() != b.cols()) {
    throw DimensionError("fcr_achievable: A and B must share a column count");
  }
  if (a.rows() < a.cols()) return false;
  Eigen::MatrixXd stacked(a.rows() + b.rows(), a.cols());
  stacked << a, b;
  return is_fcr(stacked, tol);
}

bool scm_can_fix_i(const Subsystem& sub, const Tol& tol) {
  const SvdPartition p = svd_partition(sub.E, tol);
  const Eigen::Index null_e = sub.dims.n_e - p.rank;
  Eigen::MatrixXd stacked(null_e + sub.dims.n_z + p.rank, sub.dims.n_x);
  stacked << p.u2.transpose() * sub.A_xx, sub.A_zx, p.v1.transpose();
  return is_fcr(stacked, tol);
}

bool scm_can_fix_ii(const Subsystem& sub, const Tol& tol) {
  const SvdPartition p = svd_partition(sub.E, tol);
  Eigen::MatrixXd wide(sub.dims.n_e, p.rank + sub.dims.n_v + sub.dims.n_u);
  wide << p.u1, sub.A_xv, sub.B_x;
  return is_frr(wide, tol);
}

bool feedback_can_fix_i_subsystem(const Subsystem& sub, const Tol& tol) {
  const SvdPartition p = svd_partition(sub.E, tol);
  const Eigen::Index null_e = sub.dims.n_e - p.rank;
  Eigen::MatrixXd stacked(null_e + sub.dims.n_z + sub.dims.n_y + p.rank,
                          sub.dims.n_x);
  stacked << p.u2.transpose() * sub.A_xx, sub.A_zx, sub.C_x, p.v1.transpose();
  return is_fcr(stacked, tol);
}

IsolatedRankChecks isolated_rank_checks(const Subsystem& sub, const Tol& tol) {
  const SvdPartition p = svd_partition(sub.E, tol);
  const Eigen::Index null_e = sub.dims.n_e - p.rank;

  Eigen::MatrixXd col_stack(null_e + p.rank, sub.dims.n_x);
  col_stack << p.u2.transpose() * sub.A_xx, p.v1.transpose();

  Eigen::MatrixXd row_stack(sub.dims.n_e, p.rank + sub.dims.n_u);
  row_stack << p.u1, sub.B_x;

  return {is_fcr(col_stack, tol), is_frr(row_stack, tol)};
}

ConstructibilityReport constructibility_report(const NdsModel& model,
                                               const Tol& tol) {
  return constructibility_report(model, make_certs(model, tol), tol);
}

ConstructibilityReport constructibility_report(const NdsModel& model,
                                               const AnalysisCerts& certs,
                                               const Tol& tol) {
  ConstructibilityReport report;
  report.exists_phi_for_i = true;
  report.feedback_can_fix_i = true;
  report.feedback_can_fix_ii = true;

  const Dims t = total_dims(model);
  bool all_outside_s_ii_ok = true;

  for (int i = 0; i < static_cast<int>(model.subsystems.size()); ++i) {
    const Subsystem& sub = model.subsystems[i];
    SubsystemConstructibility sc;
    sc.index = i;
    sc.in_s_i = certs.cond_i[i].in_s_i;
    sc.in_s_ii = certs.cond_ii[i].in_s_ii;
    // existence predicates are computed for every subsystem for diagnostics;
    // the aggregates below quantify only where the theory does
    sc.scm_ok_i = scm_can_fix_i(sub, tol);
    sc.scm_ok_ii = scm_can_fix_ii(sub, tol);
    sc.in_d_i = !sc.scm_ok_i;
    sc.in_d_ii = !sc.scm_ok_ii;
    sc.feedback_ok_i = feedback_can_fix_i_subsystem(sub, tol);

    if (!sc.in_s_i && !sc.scm_ok_i) report.exists_phi_for_i = false;
    if (!sc.in_s_ii && !sc.scm_ok_ii) all_outside_s_ii_ok = false;
    if (sc.in_d_i && !sc.feedback_ok_i) report.feedback_can_fix_i = false;
    if (sc.in_d_ii) report.feedback_can_fix_ii = false;

    report.subsystems.push_back(sc);
  }

  report.exists_phi_for_ii = (t.n_e == t.n_x) && all_outside_s_ii_ok;
  return report;
}

}  // namespace nds
