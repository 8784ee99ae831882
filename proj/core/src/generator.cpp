#include "nds/generator.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cctype>

#include "nds/constructibility.hpp"
#include "nds/lumped.hpp"
#include "nds/scalable.hpp"

namespace nds {

namespace {

constexpr int kRejectionBudget = 1000;

double draw_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

int draw_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(rng);
}

Eigen::MatrixXd randn(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = draw_normal(rng);
  }
  return m;
}

Eigen::MatrixXd random_orthogonal(Rng& rng, Eigen::Index n) {
  if (n == 0) return Eigen::MatrixXd(0, 0);
  const Eigen::MatrixXd g = randn(rng, n, n);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

/// rows x cols matrix of exact rank r with singular values in [0.5, 2.5].
Eigen::MatrixXd rank_matrix(Rng& rng, int rows, int cols, int r) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  if (r == 0) return m;
  const Eigen::MatrixXd u = random_orthogonal(rng, rows);
  const Eigen::MatrixXd v = random_orthogonal(rng, cols);
  Eigen::VectorXd sigma(r);
  for (int i = 0; i < r; ++i) sigma(i) = 0.5 + 2.0 * std::abs(draw_normal(rng));
  return u.leftCols(r) * sigma.asDiagonal() * v.leftCols(r).transpose();
}

void fill_gaussian(Subsystem& s, Rng& rng) {
  const Dims& d = s.dims;
  s.A_xx = randn(rng, d.n_e, d.n_x);
  s.A_xv = randn(rng, d.n_e, d.n_v);
  s.B_x = randn(rng, d.n_e, d.n_u);
  s.A_zx = randn(rng, d.n_z, d.n_x);
  s.A_zv = randn(rng, d.n_z, d.n_v);
  s.B_z = randn(rng, d.n_z, d.n_u);
  s.C_x = randn(rng, d.n_y, d.n_x);
  s.C_v = randn(rng, d.n_y, d.n_v);
  s.D_u = randn(rng, d.n_y, d.n_u);
}

/// Pick a rank for E biased toward deficiency so the interesting code paths
/// are exercised; full rank still appears.
int biased_rank(Rng& rng, int max_rank) {
  if (max_rank == 0) return 0;
  const int roll = draw_int(rng, 0, 9);
  if (roll < 6) return std::max(0, max_rank - 1);
  if (roll < 8) return std::max(0, max_rank - 2);
  return max_rank;
}

Subsystem draw_generic(Rng& rng, int cap, bool force_square,
                       bool force_rectangular) {
  Subsystem s;
  s.dims.n_x = draw_int(rng, 1, cap);
  if (force_square) {
    s.dims.n_e = s.dims.n_x;
  } else if (force_rectangular) {
    s.dims.n_e = draw_int(rng, 1, cap);
  } else {
    s.dims.n_e = (draw_int(rng, 0, 1) == 0) ? s.dims.n_x : draw_int(rng, 1, cap);
  }
  const int chan_cap = std::max(1, cap - 1);
  s.dims.n_v = draw_int(rng, 0, chan_cap);
  s.dims.n_z = draw_int(rng, 0, chan_cap);
  s.dims.n_u = draw_int(rng, 0, chan_cap);
  s.dims.n_y = draw_int(rng, 0, chan_cap);
  const int r = biased_rank(rng, std::min(s.dims.n_e, s.dims.n_x));
  s.E = rank_matrix(rng, s.dims.n_e, s.dims.n_x, r);
  fill_gaussian(s, rng);
  return s;
}

/// Square subsystem with every constructibility certificate passing:
/// deficient E, at least one internal and one external input so generic
/// rank arguments apply.
Subsystem draw_benign_square(Rng& rng, int cap) {
  const GenProfile probe{Profile::Square, cap};
  for (int tries = 0; tries < kRejectionBudget; ++tries) {
    Subsystem s;
    s.dims.n_x = draw_int(rng, 2, std::max(2, cap));
    s.dims.n_e = s.dims.n_x;
    const int chan_cap = std::max(1, cap - 1);
    s.dims.n_v = draw_int(rng, 1, chan_cap);
    s.dims.n_z = draw_int(rng, 1, chan_cap);
    s.dims.n_u = draw_int(rng, 1, chan_cap);
    s.dims.n_y = draw_int(rng, 0, chan_cap);
    const int r = std::max(1, s.dims.n_x - 1);
    s.E = rank_matrix(rng, s.dims.n_e, s.dims.n_x, r);
    fill_gaussian(s, rng);
    if (scm_can_fix_i(s) && scm_can_fix_ii(s)) return s;
  }
  throw GenerationError("gen_subsystem: rejection budget exceeded for "
                        "benign filler (profile " +
                        profile_name(probe.kind) + ")");
}

Subsystem draw_independent_i(Rng& rng, int cap) {
  for (int tries = 0; tries < kRejectionBudget; ++tries) {
    Subsystem s;
    // membership needs n_e >= n_x + n_v so the local test can be tall
    s.dims.n_x = draw_int(rng, 1, std::max(1, cap / 2));
    s.dims.n_v = draw_int(rng, 0, std::max(0, std::min(2, cap - s.dims.n_x)));
    s.dims.n_e = s.dims.n_x + s.dims.n_v + draw_int(rng, 0, 1);
    const int chan_cap = std::max(1, cap - 1);
    s.dims.n_z = draw_int(rng, 0, chan_cap);
    s.dims.n_u = draw_int(rng, 0, chan_cap);
    s.dims.n_y = draw_int(rng, 0, chan_cap);
    const int r = draw_int(rng, 0, s.dims.n_x);
    s.E = rank_matrix(rng, s.dims.n_e, s.dims.n_x, r);
    fill_gaussian(s, rng);
    if (cert_i(s).in_s_i) return s;
  }
  throw GenerationError(
      "gen_subsystem: rejection budget exceeded for profile independent-I");
}

Subsystem draw_independent_ii(Rng& rng, int cap) {
  for (int tries = 0; tries < kRejectionBudget; ++tries) {
    Subsystem s;
    // square so that models built from these support the Condition II test;
    // membership needs n_u >= (n_e - r) + n_z
    s.dims.n_x = draw_int(rng, 1, cap);
    s.dims.n_e = s.dims.n_x;
    const int r = std::max(0, s.dims.n_e - draw_int(rng, 1, 2));
    s.dims.n_z = draw_int(rng, 0, 2);
    s.dims.n_u = (s.dims.n_e - r) + s.dims.n_z + draw_int(rng, 0, 1);
    const int chan_cap = std::max(1, cap - 1);
    s.dims.n_v = draw_int(rng, 0, chan_cap);
    s.dims.n_y = draw_int(rng, 0, chan_cap);
    s.E = rank_matrix(rng, s.dims.n_e, s.dims.n_x, r);
    fill_gaussian(s, rng);
    if (cert_ii(s).in_s_ii) return s;
  }
  throw GenerationError(
      "gen_subsystem: rejection budget exceeded for profile independent-II");
}

/// Rank surgery for the Condition I defect: pick a unit vector w in the
/// null space of E and erase every row block's action on it, so that the
/// per-subsystem existence stack loses column rank at w.
Subsystem draw_d1(Rng& rng, int cap, bool rescuable) {
  for (int tries = 0; tries < kRejectionBudget; ++tries) {
    Subsystem s;
    s.dims.n_x = draw_int(rng, 2, std::max(2, cap));
    s.dims.n_e = s.dims.n_x;
    const int chan_cap = std::max(1, cap - 1);
    s.dims.n_v = draw_int(rng, 0, chan_cap);
    s.dims.n_z = draw_int(rng, 0, chan_cap);
    s.dims.n_u = draw_int(rng, 0, chan_cap);
    s.dims.n_y = rescuable ? draw_int(rng, 1, chan_cap) : draw_int(rng, 0, chan_cap);
    const int r = s.dims.n_x - draw_int(rng, 1, std::min(2, s.dims.n_x));
    s.E = rank_matrix(rng, s.dims.n_e, s.dims.n_x, r);
    fill_gaussian(s, rng);

    const SvdPartition p = svd_partition(s.E);
    const Eigen::VectorXd w = p.v2.col(0);
    // U_E2^T A_xx w = 0 and A_zx w = 0
    s.A_xx -= p.u2 * (p.u2.transpose() * (s.A_xx * w)) * w.transpose();
    s.A_zx -= (s.A_zx * w) * w.transpose();
    if (rescuable) {
      if ((s.C_x * w).norm() < 0.5) {
        s.C_x.row(0) += w.transpose();  // make the output see the lost direction
      }
    } else {
      s.C_x -= (s.C_x * w) * w.transpose();
    }

    const bool d1 = !scm_can_fix_i(s) && !cert_i(s).in_s_i;
    const bool fb = feedback_can_fix_i_subsystem(s);
    if (d1 && fb == rescuable) return s;
  }
  throw GenerationError(std::string("gen_subsystem: rejection budget exceeded "
                                    "for profile ") +
                        (rescuable ? "feedback-rescuable" : "d1-blocked"));
}

/// Condition II defect: erase a left null direction of E from A_xv and B_x
/// so [U_E1, A_xv, B_x] loses row rank.
Subsystem draw_d2(Rng& rng, int cap) {
  for (int tries = 0; tries < kRejectionBudget; ++tries) {
    Subsystem s;
    s.dims.n_x = draw_int(rng, 2, std::max(2, cap));
    s.dims.n_e = s.dims.n_x;
    const int chan_cap = std::max(1, cap - 1);
    s.dims.n_v = draw_int(rng, 0, chan_cap);
    s.dims.n_z = draw_int(rng, 0, chan_cap);
    s.dims.n_u = draw_int(rng, 0, chan_cap);
    s.dims.n_y = draw_int(rng, 0, chan_cap);
    const int r = s.dims.n_e - draw_int(rng, 1, std::min(2, s.dims.n_e));
    s.E = rank_matrix(rng, s.dims.n_e, s.dims.n_x, r);
    fill_gaussian(s, rng);

    const SvdPartition p = svd_partition(s.E);
    const Eigen::VectorXd xi = p.u2.col(0);
    s.A_xv -= xi * (xi.transpose() * s.A_xv);
    s.B_x -= xi * (xi.transpose() * s.B_x);

    if (!scm_can_fix_ii(s) && !cert_ii(s).in_s_ii) return s;
  }
  throw GenerationError(
      "gen_subsystem: rejection budget exceeded for profile d2-blocked");
}

bool is_defect_profile(Profile kind) {
  return kind == Profile::D1Blocked || kind == Profile::FeedbackRescuable ||
         kind == Profile::D2Blocked;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

GenProfile profile_from_name(const std::string& name, int dim_cap) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  GenProfile p;
  p.dim_cap = dim_cap;
  if (lower == "generic") p.kind = Profile::Generic;
  else if (lower == "square") p.kind = Profile::Square;
  else if (lower == "rectangular") p.kind = Profile::Rectangular;
  else if (lower == "independent-i") p.kind = Profile::IndependentI;
  else if (lower == "independent-ii") p.kind = Profile::IndependentII;
  else if (lower == "d1-blocked") p.kind = Profile::D1Blocked;
  else if (lower == "feedback-rescuable") p.kind = Profile::FeedbackRescuable;
  else if (lower == "d2-blocked") p.kind = Profile::D2Blocked;
  else throw GenerationError("unknown profile \"" + name + "\"");
  return p;
}

std::string profile_name(Profile kind) {
  switch (kind) {
    case Profile::Generic: return "generic";
    case Profile::Square: return "square";
    case Profile::Rectangular: return "rectangular";
    case Profile::IndependentI: return "independent-I";
    case Profile::IndependentII: return "independent-II";
    case Profile::D1Blocked: return "d1-blocked";
    case Profile::FeedbackRescuable: return "feedback-rescuable";
    case Profile::D2Blocked: return "d2-blocked";
  }
  return "unknown";
}

Subsystem gen_subsystem(const GenProfile& profile, Rng& rng) {
  const int cap = std::max(1, profile.dim_cap);
  switch (profile.kind) {
    case Profile::Generic: return draw_generic(rng, cap, false, false);
    case Profile::Square: return draw_generic(rng, cap, true, false);
    case Profile::Rectangular: return draw_generic(rng, cap, false, true);
    case Profile::IndependentI: return draw_independent_i(rng, cap);
    case Profile::IndependentII: return draw_independent_ii(rng, cap);
    case Profile::D1Blocked: return draw_d1(rng, cap, false);
    case Profile::FeedbackRescuable: return draw_d1(rng, cap, true);
    case Profile::D2Blocked: return draw_d2(rng, cap);
  }
  throw GenerationError("gen_subsystem: unhandled profile");
}

NdsModel gen_model(int n, const GenProfile& profile, Rng& rng) {
  if (n < 1) throw GenerationError("gen_model: need at least one subsystem");

  NdsModel model;
  model.subsystems.reserve(n);
  if (is_defect_profile(profile.kind)) {
    const int defect_at = draw_int(rng, 0, n - 1);
    for (int i = 0; i < n; ++i) {
      model.subsystems.push_back(i == defect_at
                                     ? gen_subsystem(profile, rng)
                                     : draw_benign_square(rng, profile.dim_cap));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      model.subsystems.push_back(gen_subsystem(profile, rng));
    }
  }

  const Dims t = total_dims(model);
  for (int tries = 0; tries < 100; ++tries) {
    model.phi = Scm::from_dense(randn(rng, t.n_v, t.n_z));
    if (well_posed(model)) return model;
  }
  throw GenerationError("gen_model: could not sample a well-posed Phi");
}

NdsModel gen_model(int n, const GenProfile& profile, std::uint64_t seed) {
  Rng rng(mix(seed, static_cast<std::uint64_t>(profile.kind) * 1000003ULL +
                        static_cast<std::uint64_t>(n)));
  return gen_model(n, profile, rng);
}

}  // namespace nds
