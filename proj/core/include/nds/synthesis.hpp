#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nds/constructibility.hpp"
#include "nds/model.hpp"

namespace nds {

/// One local static output feedback per subsystem, u(i) = F(i) (y(i) + g(i)).
struct FeedbackGain {
  std::vector<Eigen::MatrixXd> gains;  // F(i): n_u(i) x n_y(i)
};

enum class SynthesisStatus { Found, CertifiedImpossible, Exhausted };

struct SynthesisTargets {
  bool cond_i = true;
  bool cond_ii = false;
};

struct ConditionsMet {
  bool cond_i = false;
  bool cond_ii = false;
  bool well_posed = false;
};

struct SynthesisResult {
  SynthesisStatus status = SynthesisStatus::Exhausted;
  Scm phi;                               // valid when status == Found
  std::optional<FeedbackGain> feedback;  // set by the feedback search
  int attempts_used = 0;
  /// Verified on the accepted draw through the lumped path.
  ConditionsMet conditions_met;
  /// For CertifiedImpossible: which per-subsystem certificate rules the
  /// target out.
  std::string certificate;
  /// True when a support constraint disabled the existence certificates and
  /// the outcome is purely a search result.
  bool search_only = false;
};

struct SynthesisOptions {
  /// Restrict sampled Phi to these (row, col) positions. Existence
  /// certificates no longer apply; results are labeled search_only.
  std::optional<std::vector<std::pair<int, int>>> support;
};

/// Randomized search for a connection matrix meeting the targeted
/// conditions. Immediately returns CertifiedImpossible when the
/// per-subsystem existence certificate for a targeted condition fails.
/// Otherwise samples dense standard-normal Phi, skips ill-posed draws, and
/// accepts the first draw that passes the subsystem-wise checks and
/// re-verifies through the lumped model. A joint target can exhaust without
/// disproving anything.
SynthesisResult synthesize_phi(const NdsModel& model,
                               const SynthesisTargets& targets,
                               int attempts = 32, std::uint64_t seed = 0,
                               const Tol& tol = {},
                               const SynthesisOptions& options = {});

/// Closed-loop model under the decentralized feedback: with
/// G(i) = (I - F(i) D_u(i))^{-1} F(i), each subsystem becomes
///   A_xx + B_x G C_x, A_xv + B_x G C_v, B_x G, and analogously for the z
/// and y rows; the external input is renamed to the reference channel g
/// with n_u'(i) = n_y(i). E and Phi are unchanged.
/// Throws FeedbackError naming the subsystem when I - F(i) D_u(i) is
/// numerically singular.
NdsModel apply_feedback(const NdsModel& model, const FeedbackGain& feedback,
                        const Tol& tol = {});

/// Randomized search over (feedback, Phi) pairs for Condition I. Never
/// targets Condition II when D_II is nonempty (no feedback can help there);
/// with an empty D_I the problem reduces to the Phi-only search.
SynthesisResult synthesize_feedback(const NdsModel& model,
                                    const SynthesisTargets& targets,
                                    int attempts = 32, std::uint64_t seed = 0,
                                    const Tol& tol = {});

/// Mark the joint-target outcome on a constructibility report: Unknown
/// unless a search actually exhibited a Phi meeting both conditions.
void annotate_joint_existence(ConstructibilityReport& report,
                              const SynthesisResult& result);

}  // namespace nds
