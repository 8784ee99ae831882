#include "nds/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "nds/generator.hpp"
#include "nds/lumped.hpp"
#include "nds/scalable.hpp"

namespace nds {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Fixed-shape square subsystem: one deficiency in E and one internal
/// input/output pair, so every subsystem contributes exactly one column to
/// the affine test and the certificate work stays proportional to N.
Subsystem bench_subsystem(Rng& rng, int dims) {
  Subsystem s;
  std::normal_distribution<double> normal(0.0, 1.0);
  auto randn = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
    }
    return m;
  };
  s.dims = {dims, dims, 1, 1, 1, 1};
  // E of rank dims-1 via an outer-product sum keeps the draw cheap
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dims, dims);
  for (int k = 0; k < dims - 1; ++k) {
    e += randn(dims, 1) * randn(1, dims);
  }
  s.E = e;
  s.A_xx = randn(dims, dims);
  s.A_xv = randn(dims, 1);
  s.B_x = randn(dims, 1);
  s.A_zx = randn(1, dims);
  s.A_zv = randn(1, 1) * 0.3;  // keep the interconnection comfortably well posed
  s.B_z = randn(1, 1);
  s.C_x = randn(1, dims);
  s.C_v = randn(1, 1);
  s.D_u = randn(1, 1);
  return s;
}

NdsModel bench_model(int n, int dims, std::uint64_t seed) {
  Rng rng(seed ^ (0xabcdef12ULL + 31ULL * n));
  NdsModel model;
  model.subsystems.reserve(n);
  for (int i = 0; i < n; ++i) model.subsystems.push_back(bench_subsystem(rng, dims));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int tries = 0; tries < 100; ++tries) {
    Eigen::MatrixXd phi(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) phi(r, c) = normal(rng) * 0.5;
    }
    model.phi = Scm::from_dense(phi);
    if (well_posed(model)) return model;
  }
  throw GenerationError("bench_model: no well-posed Phi found");
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Time fn(), repeating it enough times that one measurement spans at
/// least ~2 ms; returns the per-call time in ms.
template <typename Fn>
double time_call(Fn&& fn) {
  Clock::time_point t0 = Clock::now();
  fn();
  double t = ms_since(t0);
  if (t >= 2.0) return t;
  const int iters = std::max(2, static_cast<int>(std::ceil(2.0 / std::max(t, 1e-6))));
  t0 = Clock::now();
  for (int i = 0; i < iters; ++i) fn();
  return ms_since(t0) / iters;
}

}  // namespace

ScalingResult run_scaling(const ScalingParams& params) {
  ScalingResult result;

  for (int n : params.n_list) {
    const NdsModel model = bench_model(n, params.dims, params.seed);
    const Stacked st = stack(model);
    const Eigen::MatrixXd phi = model.phi.dense();

    bool verdict_i_sub = false, verdict_ii_sub = false;
    bool verdict_i_lum = false, verdict_ii_lum = false;

    std::vector<double> t_sub, t_lum;
    for (int rep = 0; rep < params.repeats; ++rep) {
      t_sub.push_back(time_call([&] {
        const AnalysisCerts certs = make_certs(model, params.tol);
        verdict_i_sub = check_condition_i(model, certs, params.tol).verdict;
        verdict_ii_sub = check_condition_ii(model, certs, params.tol).verdict;
      }));
      t_lum.push_back(time_call([&] {
        const LumpedModel lm = lumped_lft(st, phi, params.tol);
        verdict_i_lum = condition_i_lumped(lm, params.tol).verdict;
        verdict_ii_lum = condition_ii_lumped(lm, params.tol).verdict;
      }));
    }

    ScalingRow row;
    row.n = n;
    row.t_subsystem_ms = median(t_sub);
    row.t_lumped_ms = median(t_lum);
    row.verdicts_agree =
        (verdict_i_sub == verdict_i_lum) && (verdict_ii_sub == verdict_ii_lum);
    result.rows.push_back(row);
  }

  std::vector<double> log_n, log_sub, log_lum;
  for (const ScalingRow& row : result.rows) {
    log_n.push_back(std::log(static_cast<double>(row.n)));
    log_sub.push_back(std::log(std::max(row.t_subsystem_ms, 1e-9)));
    log_lum.push_back(std::log(std::max(row.t_lumped_ms, 1e-9)));
  }
  result.slope_subsystem = fit_slope(log_n, log_sub);
  result.slope_lumped = fit_slope(log_n, log_lum);
  if (!result.rows.empty()) {
    const ScalingRow& last = result.rows.back();
    result.ratio_at_max =
        last.t_subsystem_ms > 0 ? last.t_lumped_ms / last.t_subsystem_ms : 0.0;
  }
  return result;
}

}  // namespace nds
