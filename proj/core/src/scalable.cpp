#include "nds/scalable.hpp"

#include <numeric>

#include "nds/lumped.hpp"

namespace nds {

SubsystemCertI cert_i(const Subsystem& sub, const Tol& tol) {
  SubsystemCertI c;
  c.svd = svd_partition(sub.E, tol);
  const Eigen::Index null_x = sub.dims.n_x - c.svd.rank;

  Eigen::MatrixXd inner(sub.dims.n_e, null_x + sub.dims.n_v);
  inner << sub.A_xx * c.svd.v2, sub.A_xv;
  const Eigen::MatrixXd test = c.svd.u2.transpose() * inner;

  const Eigen::MatrixXd basis = right_null_basis(test, tol);
  c.n_xx = basis.topRows(null_x);
  c.n_xv = basis.bottomRows(sub.dims.n_v);
  c.in_s_i = (basis.cols() == 0);
  return c;
}

SubsystemCertII cert_ii(const Subsystem& sub, const Tol& tol) {
  SubsystemCertII c;
  c.svd = svd_partition(sub.E, tol);
  const Eigen::Index null_e = sub.dims.n_e - c.svd.rank;

  Eigen::MatrixXd test(null_e + sub.dims.n_z, sub.dims.n_u);
  test << c.svd.u2.transpose() * sub.B_x, sub.B_z;

  const Eigen::MatrixXd basis = left_null_basis(test, tol);
  c.n_bx = basis.leftCols(null_e);
  c.n_bz = basis.rightCols(sub.dims.n_z);
  c.in_s_ii = (basis.rows() == 0);
  return c;
}

AnalysisCerts make_certs(const NdsModel& model, const Tol& tol) {
  AnalysisCerts certs;
  certs.cond_i.reserve(model.subsystems.size());
  certs.cond_ii.reserve(model.subsystems.size());
  for (const Subsystem& sub : model.subsystems) {
    certs.cond_i.push_back(cert_i(sub, tol));
    certs.cond_ii.push_back(cert_ii(sub, tol));
  }
  return certs;
}

Eigen::MatrixXd condition_i_test_matrix(const NdsModel& model,
                                        const std::vector<SubsystemCertI>& certs,
                                        const Eigen::MatrixXd& phi) {
  const Dims t = total_dims(model);
  Eigen::Index k_total = 0;
  for (const SubsystemCertI& c : certs) k_total += c.n_xv.cols();

  // N_xv and W = A_zx V_E2 N_xx + A_zv N_xv, both block-structured: the
  // columns contributed by subsystem i live only in its own v/z rows.
  Eigen::MatrixXd n_xv = Eigen::MatrixXd::Zero(t.n_v, k_total);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(t.n_z, k_total);

  Eigen::Index v_off = 0, z_off = 0, k_off = 0;
  for (size_t i = 0; i < model.subsystems.size(); ++i) {
    const Subsystem& sub = model.subsystems[i];
    const SubsystemCertI& c = certs[i];
    const Eigen::Index k = c.n_xv.cols();
    if (k > 0) {
      if (sub.dims.n_v > 0) {
        n_xv.block(v_off, k_off, sub.dims.n_v, k) = c.n_xv;
      }
      if (sub.dims.n_z > 0) {
        w.block(z_off, k_off, sub.dims.n_z, k) =
            sub.A_zx * (c.svd.v2 * c.n_xx) + sub.A_zv * c.n_xv;
      }
    }
    v_off += sub.dims.n_v;
    z_off += sub.dims.n_z;
    k_off += k;
  }
  return n_xv - phi * w;
}

Eigen::MatrixXd condition_ii_test_matrix(const NdsModel& model,
                                         const std::vector<SubsystemCertII>& certs,
                                         const Eigen::MatrixXd& phi) {
  const Dims t = total_dims(model);
  Eigen::Index l_total = 0;
  for (const SubsystemCertII& c : certs) l_total += c.n_bx.rows();

  Eigen::MatrixXd n_bz = Eigen::MatrixXd::Zero(l_total, t.n_z);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(l_total, t.n_v);

  Eigen::Index v_off = 0, z_off = 0, l_off = 0;
  for (size_t i = 0; i < model.subsystems.size(); ++i) {
    const Subsystem& sub = model.subsystems[i];
    const SubsystemCertII& c = certs[i];
    const Eigen::Index l = c.n_bx.rows();
    if (l > 0) {
      if (sub.dims.n_z > 0) {
        n_bz.block(l_off, z_off, l, sub.dims.n_z) = c.n_bz;
      }
      if (sub.dims.n_v > 0) {
        w.block(l_off, v_off, l, sub.dims.n_v) =
            c.n_bx * (c.svd.u2.transpose() * sub.A_xv) + c.n_bz * sub.A_zv;
      }
    }
    v_off += sub.dims.n_v;
    z_off += sub.dims.n_z;
    l_off += l;
  }
  return n_bz - w * phi;
}

namespace {

std::vector<int> members_i(const std::vector<SubsystemCertI>& certs) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(certs.size()); ++i) {
    if (certs[i].in_s_i) out.push_back(i);
  }
  return out;
}

std::vector<int> members_ii(const std::vector<SubsystemCertII>& certs) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(certs.size()); ++i) {
    if (certs[i].in_s_ii) out.push_back(i);
  }
  return out;
}

ConditionReport always_true_report() {
  ConditionReport r;
  r.verdict = true;
  return r;
}

}  // namespace

ConditionReport check_condition_i(const NdsModel& model,
                                  const AnalysisCerts& certs, const Tol& tol) {
  const std::vector<int> s_i = members_i(certs.cond_i);
  if (s_i.size() == certs.cond_i.size()) {
    // every local test matrix is FCR, so Condition I holds for any Phi
    ConditionReport r = always_true_report();
    r.reduced_subsystems = s_i;
    return r;
  }
  const Eigen::MatrixXd m =
      condition_i_test_matrix(model, certs.cond_i, model.phi.dense());
  ConditionReport r = fcr_report(m, tol);
  r.reduced_subsystems = s_i;
  return r;
}

ConditionReport check_condition_i(const NdsModel& model, const Tol& tol) {
  return check_condition_i(model, make_certs(model, tol), tol);
}

ConditionReport check_condition_ii(const NdsModel& model,
                                   const AnalysisCerts& certs, const Tol& tol) {
  const Dims t = total_dims(model);
  if (t.n_e != t.n_x) {
    throw NotApplicableError(
        "check_condition_ii: requires sum n_e == sum n_x (got " +
        std::to_string(t.n_e) + " vs " + std::to_string(t.n_x) +
        "); use the lumped test instead");
  }
  const std::vector<int> s_ii = members_ii(certs.cond_ii);
  if (s_ii.size() == certs.cond_ii.size()) {
    ConditionReport r = always_true_report();
    r.reduced_subsystems = s_ii;
    return r;
  }
  const Eigen::MatrixXd m =
      condition_ii_test_matrix(model, certs.cond_ii, model.phi.dense());
  ConditionReport r = frr_report(m, tol);
  r.reduced_subsystems = s_ii;
  return r;
}

ConditionReport check_condition_ii(const NdsModel& model, const Tol& tol) {
  return check_condition_ii(model, make_certs(model, tol), tol);
}

ConditionReport check_condition_i_stacked(const NdsModel& model,
                                          const Tol& tol) {
  const Stacked st = stack(model);
  const SvdPartition p = svd_partition(st.E, tol);
  const Eigen::Index null_x = st.dims.n_x - p.rank;

  Eigen::MatrixXd inner(st.dims.n_e, null_x + st.dims.n_v);
  inner << st.A_xx * p.v2, st.A_xv;
  const Eigen::MatrixXd test = p.u2.transpose() * inner;
  if (is_fcr(test, tol)) return always_true_report();

  const Eigen::MatrixXd basis = right_null_basis(test, tol);
  const Eigen::MatrixXd n_xx = basis.topRows(null_x);
  const Eigen::MatrixXd n_xv = basis.bottomRows(st.dims.n_v);
  const Eigen::MatrixXd phi = model.phi.dense();
  const Eigen::MatrixXd m =
      n_xv - phi * (st.A_zx * (p.v2 * n_xx) + st.A_zv * n_xv);
  return fcr_report(m, tol);
}

ConditionReport check_condition_ii_stacked(const NdsModel& model,
                                           const Tol& tol) {
  const Stacked st = stack(model);
  if (st.dims.n_e != st.dims.n_x) {
    throw NotApplicableError(
        "check_condition_ii_stacked: requires sum n_e == sum n_x");
  }
  const SvdPartition p = svd_partition(st.E, tol);
  const Eigen::Index null_e = st.dims.n_e - p.rank;

  Eigen::MatrixXd test(null_e + st.dims.n_z, st.dims.n_u);
  test << p.u2.transpose() * st.B_x, st.B_z;
  if (is_frr(test, tol)) return always_true_report();

  const Eigen::MatrixXd basis = left_null_basis(test, tol);
  const Eigen::MatrixXd n_bx = basis.leftCols(null_e);
  const Eigen::MatrixXd n_bz = basis.rightCols(st.dims.n_z);
  const Eigen::MatrixXd phi = model.phi.dense();
  const Eigen::MatrixXd m =
      n_bz - (n_bx * (p.u2.transpose() * st.A_xv) + n_bz * st.A_zv) * phi;
  return frr_report(m, tol);
}

ConnectionIndependence connection_independent(const NdsModel& model,
                                              const Tol& tol) {
  ConnectionIndependence ci{true, true};
  for (const Subsystem& sub : model.subsystems) {
    const SubsystemCertI ci_cert = cert_i(sub, tol);
    const bool e_frr = (ci_cert.svd.rank == sub.dims.n_e);
    if (!e_frr && !ci_cert.in_s_i) ci.cond_i_free = false;
    if (!cert_ii(sub, tol).in_s_ii) ci.cond_ii_free = false;
  }
  return ci;
}

Eigen::MatrixXd pi_matrix(const NdsModel& model, const Tol& tol) {
  const Stacked st = stack(model);
  const SvdPartition p = svd_partition(st.E, tol);
  const Eigen::MatrixXd phi = model.phi.dense();
  const Eigen::Index null_x = st.dims.n_x - p.rank;
  const Eigen::Index null_e = st.dims.n_e - p.rank;

  Eigen::MatrixXd pi(null_e + st.dims.n_v, null_x + st.dims.n_v);
  pi.topLeftCorner(null_e, null_x) = p.u2.transpose() * st.A_xx * p.v2;
  pi.topRightCorner(null_e, st.dims.n_v) = p.u2.transpose() * st.A_xv;
  pi.bottomLeftCorner(st.dims.n_v, null_x) = -phi * (st.A_zx * p.v2);
  pi.bottomRightCorner(st.dims.n_v, st.dims.n_v) =
      Eigen::MatrixXd::Identity(st.dims.n_v, st.dims.n_v) - phi * st.A_zv;
  return pi;
}

Eigen::MatrixXd omega_matrix(const NdsModel& model, const Tol& tol) {
  const Stacked st = stack(model);
  const LumpedModel lm = lumped_lft(st, model.phi.dense(), tol);
  const SvdPartition p = svd_partition(st.E, tol);
  return p.u2.transpose() * lm.A * p.v2;
}

}  // namespace nds
