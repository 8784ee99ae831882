#include "nds/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <string>

namespace nds {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* who) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(who) + ": matrix has non-finite entries");
  }
}

Eigen::Index count_above_threshold(const Eigen::VectorXd& sv, const Tol& tol) {
  if (sv.size() == 0) return 0;
  const double cut = std::max(tol.rank_atol, tol.rank_rtol * sv(0));
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

}  // namespace

Eigen::Index numeric_rank(const Eigen::MatrixXd& m, const Tol& tol) {
  return rank_decision(m, tol).rank;
}

RankDecision rank_decision(const Eigen::MatrixXd& m, const Tol& tol) {
  require_finite(m, "rank_decision");
  RankDecision d;
  if (m.rows() == 0 || m.cols() == 0) return d;
  // singular values only; full vectors are not needed for a rank decision
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  d.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  d.rank = count_above_threshold(sv, tol);
  if (d.rank > 0) d.smallest_kept = sv(d.rank - 1);
  if (d.rank < sv.size()) d.largest_dropped = sv(d.rank);
  return d;
}

SvdPartition svd_partition(const Eigen::MatrixXd& m, const Tol& tol) {
  require_finite(m, "svd_partition");
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();

  SvdPartition p;
  if (rows == 0 || cols == 0) {
    p.rank = 0;
    p.u1 = Eigen::MatrixXd(rows, 0);
    p.u2 = Eigen::MatrixXd::Identity(rows, rows);
    p.v1 = Eigen::MatrixXd(cols, 0);
    p.v2 = Eigen::MatrixXd::Identity(cols, cols);
    p.sigma = Eigen::VectorXd(0);
    return p;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index r = count_above_threshold(sv, tol);

  p.rank = r;
  p.u1 = svd.matrixU().leftCols(r);
  p.u2 = svd.matrixU().rightCols(rows - r);
  p.v1 = svd.matrixV().leftCols(r);
  p.v2 = svd.matrixV().rightCols(cols - r);
  p.sigma = sv.head(r);
  return p;
}

bool is_fcr(const Eigen::MatrixXd& m, const Tol& tol) {
  if (m.cols() == 0) return true;
  return numeric_rank(m, tol) == m.cols();
}

bool is_frr(const Eigen::MatrixXd& m, const Tol& tol) {
  if (m.rows() == 0) return true;
  return numeric_rank(m, tol) == m.rows();
}

Eigen::MatrixXd right_null_basis(const Eigen::MatrixXd& m, const Tol& tol) {
  return svd_partition(m, tol).v2;
}

Eigen::MatrixXd left_null_basis(const Eigen::MatrixXd& m, const Tol& tol) {
  return svd_partition(m, tol).u2.transpose();
}

}  // namespace nds
