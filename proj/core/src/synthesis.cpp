#include "nds/synthesis.hpp"

#include <Eigen/LU>

#include <random>
#include <sstream>

#include "nds/lumped.hpp"

namespace nds {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 step; decorrelates per-attempt streams
  std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scm sample_phi(std::mt19937_64& rng, int rows, int cols,
               const SynthesisOptions& options) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Scm phi = Scm::zero(rows, cols);
  if (options.support) {
    for (const auto& [r, c] : *options.support) {
      phi.entries.push_back({r, c, normal(rng)});
    }
  } else {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        phi.entries.push_back({r, c, normal(rng)});
      }
    }
  }
  return phi;
}

std::string failing_scm_certificate(const ConstructibilityReport& report,
                                    bool for_cond_i) {
  std::ostringstream oss;
  if (for_cond_i) {
    oss << "no connection matrix can achieve Condition I; failing subsystems:";
    for (const SubsystemConstructibility& s : report.subsystems) {
      if (!s.in_s_i && !s.scm_ok_i) oss << " " << s.index;
    }
  } else {
    oss << "no connection matrix can achieve Condition II; failing subsystems:";
    for (const SubsystemConstructibility& s : report.subsystems) {
      if (!s.in_s_ii && !s.scm_ok_ii) oss << " " << s.index;
    }
  }
  return oss.str();
}

/// Verify the targeted conditions on a concrete model through both the
/// subsystem-wise and the lumped route; accept only when both agree true.
bool verify_draw(const NdsModel& candidate, const AnalysisCerts& certs,
                 const SynthesisTargets& targets, const Tol& tol,
                 ConditionsMet* met) {
  const Stacked st = stack(candidate);
  const Eigen::MatrixXd phi = candidate.phi.dense();
  if (!well_posed(st, phi, tol)) return false;

  const LumpedModel lm = lumped_lft(st, phi, tol);
  const bool lumped_i = condition_i_lumped(lm, tol).verdict;
  const bool lumped_ii = condition_ii_lumped(lm, tol).verdict;

  if (targets.cond_i) {
    if (!check_condition_i(candidate, certs, tol).verdict) return false;
    if (!lumped_i) return false;
  }
  if (targets.cond_ii) {
    if (!check_condition_ii(candidate, certs, tol).verdict) return false;
    if (!lumped_ii) return false;
  }
  if (met) {
    met->cond_i = lumped_i;
    met->cond_ii = lumped_ii;
    met->well_posed = true;
  }
  return true;
}

}  // namespace

SynthesisResult synthesize_phi(const NdsModel& model,
                               const SynthesisTargets& targets, int attempts,
                               std::uint64_t seed, const Tol& tol,
                               const SynthesisOptions& options) {
  SynthesisResult result;
  result.search_only = options.support.has_value();

  const AnalysisCerts certs = make_certs(model, tol);
  const ConstructibilityReport report =
      constructibility_report(model, certs, tol);

  if (!result.search_only) {
    if (targets.cond_i && !report.exists_phi_for_i) {
      result.status = SynthesisStatus::CertifiedImpossible;
      result.certificate = failing_scm_certificate(report, true);
      return result;
    }
    if (targets.cond_ii && !report.exists_phi_for_ii) {
      result.status = SynthesisStatus::CertifiedImpossible;
      const Dims t = total_dims(model);
      result.certificate = (t.n_e != t.n_x)
                               ? "Condition II needs a square stack (sum n_e == sum n_x)"
                               : failing_scm_certificate(report, false);
      return result;
    }
  }

  const Dims t = total_dims(model);
  NdsModel candidate = model;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    bool accepted = false;
    // ill-posed draws are resampled inside the attempt; the failure set has
    // measure zero so this loop essentially never spins
    for (int resample = 0; resample < 16 && !accepted; ++resample) {
      candidate.phi = sample_phi(rng, t.n_v, t.n_z, options);
      if (!well_posed(candidate, tol)) continue;
      accepted = true;
    }
    if (!accepted) continue;

    result.attempts_used = attempt;
    if (verify_draw(candidate, certs, targets, tol, &result.conditions_met)) {
      result.status = SynthesisStatus::Found;
      result.phi = candidate.phi;
      return result;
    }
  }
  result.status = SynthesisStatus::Exhausted;
  result.attempts_used = attempts;
  return result;
}

NdsModel apply_feedback(const NdsModel& model, const FeedbackGain& feedback,
                        const Tol& tol) {
  if (feedback.gains.size() != model.subsystems.size()) {
    throw DimensionError("apply_feedback: one gain per subsystem required");
  }
  NdsModel closed = model;
  for (size_t i = 0; i < model.subsystems.size(); ++i) {
    const Subsystem& s = model.subsystems[i];
    const Eigen::MatrixXd& f = feedback.gains[i];
    if (f.rows() != s.dims.n_u || f.cols() != s.dims.n_y) {
      throw DimensionError("apply_feedback: gain " + std::to_string(i) +
                           " must be " + std::to_string(s.dims.n_u) + "x" +
                           std::to_string(s.dims.n_y));
    }
    const Eigen::MatrixXd ifd =
        Eigen::MatrixXd::Identity(s.dims.n_u, s.dims.n_u) - f * s.D_u;
    if (numeric_rank(ifd, tol) != s.dims.n_u) {
      throw FeedbackError("apply_feedback: I - F*D_u singular for subsystem " +
                          std::to_string(i));
    }
    // G = (I - F D_u)^{-1} F; the new external input is the reference
    // channel, one per measured output
    const Eigen::MatrixXd g = ifd.partialPivLu().solve(f);

    Subsystem& c = closed.subsystems[i];
    c.dims.n_u = s.dims.n_y;
    c.A_xx = s.A_xx + s.B_x * g * s.C_x;
    c.A_xv = s.A_xv + s.B_x * g * s.C_v;
    c.B_x = s.B_x * g;
    c.A_zx = s.A_zx + s.B_z * g * s.C_x;
    c.A_zv = s.A_zv + s.B_z * g * s.C_v;
    c.B_z = s.B_z * g;
    c.C_x = s.C_x + s.D_u * g * s.C_x;
    c.C_v = s.C_v + s.D_u * g * s.C_v;
    c.D_u = s.D_u * g;
  }
  return closed;
}

SynthesisResult synthesize_feedback(const NdsModel& model,
                                    const SynthesisTargets& targets,
                                    int attempts, std::uint64_t seed,
                                    const Tol& tol) {
  SynthesisResult result;
  const ConstructibilityReport report = constructibility_report(model, tol);

  if (targets.cond_ii && !report.feedback_can_fix_ii) {
    result.status = SynthesisStatus::CertifiedImpossible;
    std::ostringstream oss;
    oss << "Condition II is out of reach of any decentralized static output "
           "feedback; subsystems failing the [U_E1, A_xv, B_x] row-rank test:";
    for (const SubsystemConstructibility& s : report.subsystems) {
      if (s.in_d_ii) oss << " " << s.index;
    }
    result.certificate = oss.str();
    return result;
  }
  if (targets.cond_i && !report.feedback_can_fix_i) {
    result.status = SynthesisStatus::CertifiedImpossible;
    std::ostringstream oss;
    oss << "no (feedback, connection) pair can achieve Condition I; "
           "unfixable subsystems:";
    for (const SubsystemConstructibility& s : report.subsystems) {
      if (s.in_d_i && !s.feedback_ok_i) oss << " " << s.index;
    }
    result.certificate = oss.str();
    return result;
  }

  const bool d_i_empty = [&] {
    for (const SubsystemConstructibility& s : report.subsystems) {
      if (s.in_d_i) return false;
    }
    return true;
  }();
  if (d_i_empty) {
    // no subsystem needs feedback; the connection alone can do it
    return synthesize_phi(model, targets, attempts, seed, tol);
  }

  const Dims t = total_dims(model);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    std::mt19937_64 rng(mix_seed(seed, 0x0fedbac0ULL + attempt));

    FeedbackGain fb;
    fb.gains.reserve(model.subsystems.size());
    for (const Subsystem& s : model.subsystems) {
      Eigen::MatrixXd f(s.dims.n_u, s.dims.n_y);
      for (Eigen::Index r = 0; r < f.rows(); ++r) {
        for (Eigen::Index c = 0; c < f.cols(); ++c) f(r, c) = normal(rng);
      }
      fb.gains.push_back(std::move(f));
    }

    NdsModel closed;
    try {
      closed = apply_feedback(model, fb, tol);
    } catch (const FeedbackError&) {
      continue;  // singular I - F D_u draw; measure zero
    }
    const AnalysisCerts closed_certs = make_certs(closed, tol);

    bool accepted = false;
    for (int resample = 0; resample < 16 && !accepted; ++resample) {
      closed.phi = sample_phi(rng, t.n_v, t.n_z, {});
      if (well_posed(closed, tol)) accepted = true;
    }
    if (!accepted) continue;

    result.attempts_used = attempt;
    if (verify_draw(closed, closed_certs, targets, tol,
                    &result.conditions_met)) {
      result.status = SynthesisStatus::Found;
      result.phi = closed.phi;
      result.feedback = std::move(fb);
      return result;
    }
  }
  result.status = SynthesisStatus::Exhausted;
  result.attempts_used = attempts;
  return result;
}

void annotate_joint_existence(ConstructibilityReport& report,
                              const SynthesisResult& result) {
  if (result.status == SynthesisStatus::Found && result.conditions_met.cond_i &&
      result.conditions_met.cond_ii) {
    report.joint_existence = JointExistence::ConfirmedBySearch;
  }
}

}  // namespace nds
