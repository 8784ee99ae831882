#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "nds/model.hpp"

namespace nds {

/// Instance families with a verified structural property. Generation is
/// rejection sampling: entries are drawn standard normal, rank deficiency
/// is constructed by surgery (it has measure zero otherwise), and every
/// draw is re-checked against the profile predicate before being returned.
enum class Profile {
  Generic,            // mixed shapes and ranks, no property forced
  Square,             // n_e(i) == n_x(i), mostly rank-deficient E
  Rectangular,        // independent n_e(i), n_x(i)
  IndependentI,       // every subsystem in S_I: Condition I holds for any Phi
  IndependentII,      // every subsystem in S_II (square): Condition II ditto
  D1Blocked,          // one subsystem in D_I that no feedback can rescue
  FeedbackRescuable,  // one subsystem in D_I whose C_x restores the rank
  D2Blocked,          // one subsystem in D_II: Condition II unreachable
};

struct GenProfile {
  Profile kind = Profile::Generic;
  int dim_cap = 4;  // upper bound for the per-subsystem channel dimensions
};

/// Parse a profile name as used by the CLI: "generic", "square",
/// "rectangular", "independent-I", "independent-II", "d1-blocked",
/// "feedback-rescuable", "d2-blocked" (case-insensitive).
/// Throws GenerationError on unknown names.
GenProfile profile_from_name(const std::string& name, int dim_cap = 4);
std::string profile_name(Profile kind);

using Rng = std::mt19937_64;

/// One subsystem satisfying the profile contract; the contract is verified
/// on the draw and resampled on failure (budget 1000, then GenerationError).
Subsystem gen_subsystem(const GenProfile& profile, Rng& rng);

/// A full model: N subsystems per the profile plus a dense standard-normal
/// Phi resampled until the interconnection is well posed. Defect profiles
/// place one defective subsystem among benign square fillers.
NdsModel gen_model(int n, const GenProfile& profile, Rng& rng);

/// Deterministic convenience wrapper: identical (n, profile, seed) produce
/// bit-identical models.
NdsModel gen_model(int n, const GenProfile& profile, std::uint64_t seed);

}  // namespace nds
