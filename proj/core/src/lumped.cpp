#include "nds/lumped.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <limits>
#include <random>

namespace nds {

double SigmaGap::ratio() const {
  if (largest_dropped <= 0.0) return std::numeric_limits<double>::infinity();
  return smallest_kept / largest_dropped;
}

ConditionReport fcr_report(const Eigen::MatrixXd& m, const Tol& tol) {
  const RankDecision d = rank_decision(m, tol);
  ConditionReport r;
  r.test_rows = m.rows();
  r.test_cols = m.cols();
  r.rank = d.rank;
  r.deficiency = m.cols() - d.rank;
  r.verdict = (r.deficiency == 0);
  r.sigma_gap = {d.smallest_kept, d.largest_dropped};
  return r;
}

ConditionReport frr_report(const Eigen::MatrixXd& m, const Tol& tol) {
  const RankDecision d = rank_decision(m, tol);
  ConditionReport r;
  r.test_rows = m.rows();
  r.test_cols = m.cols();
  r.rank = d.rank;
  r.deficiency = m.rows() - d.rank;
  r.verdict = (r.deficiency == 0);
  r.sigma_gap = {d.smallest_kept, d.largest_dropped};
  return r;
}

bool well_posed(const Stacked& st, const Eigen::MatrixXd& phi, const Tol& tol) {
  const Eigen::Index n_z = st.A_zv.rows();
  const Eigen::MatrixXd ip =
      Eigen::MatrixXd::Identity(n_z, n_z) - st.A_zv * phi;
  return numeric_rank(ip, tol) == n_z;
}

bool well_posed(const NdsModel& model, const Tol& tol) {
  return well_posed(stack(model), model.phi.dense(), tol);
}

LumpedModel lumped_lft(const Stacked& st, const Eigen::MatrixXd& phi,
                       const Tol& tol) {
  const Eigen::Index n_z = st.A_zv.rows();
  const Eigen::MatrixXd ip =
      Eigen::MatrixXd::Identity(n_z, n_z) - st.A_zv * phi;

  LumpedModel lm;
  lm.E = st.E;

  if (n_z == 0 || phi.rows() == 0) {
    // no internal coupling survives; the LFT collapses to the direct terms
    lm.A = st.A_xx;
    lm.B = st.B_x;
    lm.C = st.C_x;
    lm.D = st.D_u;
    return lm;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(ip);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = std::max(tol.rank_atol, tol.rank_rtol * sv(0));
  if (sv(sv.size() - 1) <= cut) {
    throw IllPosedError("lumped_lft: I - A_zv*Phi is numerically singular");
  }
  lm.interconnection_cond = sv(0) / sv(sv.size() - 1);

  // factorized solve for (I - A_zv*Phi)^{-1} [A_zx B_z]
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(ip);
  Eigen::MatrixXd rhs(n_z, st.A_zx.cols() + st.B_z.cols());
  rhs << st.A_zx, st.B_z;
  const Eigen::MatrixXd sol = lu.solve(rhs);
  const Eigen::MatrixXd sol_zx = sol.leftCols(st.A_zx.cols());
  const Eigen::MatrixXd sol_bz = sol.rightCols(st.B_z.cols());

  const Eigen::MatrixXd top = st.A_xv * phi;   // n_e x n_z
  const Eigen::MatrixXd bot = st.C_v * phi;    // n_y x n_z
  lm.A = st.A_xx + top * sol_zx;
  lm.B = st.B_x + top * sol_bz;
  lm.C = st.C_x + bot * sol_zx;
  lm.D = st.D_u + bot * sol_bz;
  return lm;
}

LumpedModel lumped_lft(const NdsModel& model, const Tol& tol) {
  return lumped_lft(stack(model), model.phi.dense(), tol);
}

ConditionReport condition_i_lumped(const LumpedModel& m, const Tol& tol) {
  const SvdPartition p = svd_partition(m.E, tol);
  const Eigen::MatrixXd test = p.u2.transpose() * m.A * p.v2;
  return fcr_report(test, tol);
}

ConditionReport condition_ii_lumped(const LumpedModel& m, const Tol& tol) {
  Eigen::MatrixXd eb(m.E.rows(), m.E.cols() + m.B.cols());
  eb << m.E, m.B;
  return frr_report(eb, tol);
}

RegularityProbe regularity_probe(const LumpedModel& m, int trials,
                                 std::uint64_t seed, const Tol& tol) {
  if (m.E.rows() != m.E.cols()) {
    throw DimensionError("regularity_probe: pencil must be square");
  }
  RegularityProbe probe;
  probe.trials = trials;
  const Eigen::Index n = m.E.rows();
  if (n == 0) {
    // empty pencil has determinant 1, never identically zero
    probe.regular = true;
    return probe;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    const double lambda = normal(rng);
    if (numeric_rank(lambda * m.E - m.A, tol) == n) {
      probe.regular = true;
      return probe;
    }
  }
  probe.probabilistic = true;  // no witness found; almost surely singular
  return probe;
}

OverallVerdict verdict(const NdsModel& model, TimeDomain domain,
                       const Tol& tol, int regularity_trials,
                       std::uint64_t seed) {
  const Stacked st = stack(model);
  const Eigen::MatrixXd phi = model.phi.dense();
  const LumpedModel lm = lumped_lft(st, phi, tol);

  OverallVerdict v;
  v.domain = domain;
  v.n_e = st.dims.n_e;
  v.n_x = st.dims.n_x;
  v.dimension_ok = (v.n_e >= v.n_x);
  v.square = (v.n_e == v.n_x);
  v.cond_i = condition_i_lumped(lm, tol);
  v.cond_ii = condition_ii_lumped(lm, tol);

  if (domain == TimeDomain::Continuous) {
    v.impulse_free = v.dimension_ok && v.cond_i.verdict;
    return v;
  }

  if (v.square) {
    v.regularity = regularity_probe(lm, regularity_trials, seed, tol);
  } else {
    // regularity is defined for square pencils only
    v.regularity.regular = false;
    v.regularity.probabilistic = false;
    v.regularity.trials = 0;
  }
  v.causal_sufficient_path =
      v.square && v.regularity.regular && v.cond_ii.verdict && v.cond_i.verdict;
  return v;
}

}  // namespace nds
