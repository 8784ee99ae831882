// nds: analyze, synthesize and benchmark networked descriptor-form systems.
//
// Subcommands:
//   analyze    rank-condition verdicts for a model file, optional lumped
//              cross-check (--oracle)
//   construct  search for a connection matrix (and optionally decentralized
//              feedback gains) achieving the targeted conditions
//   benchmark  subsystem-wise vs lumped pipeline timing, CSV on stdout
//   generate   reproducible random model files by profile
//
// Exit codes: 0 done/found, 2 invalid input, 3 certified impossible,
// 4 oracle disagreement, 5 search exhausted.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nds/constructibility.hpp"
#include "nds/generator.hpp"
#include "nds/lumped.hpp"
#include "nds/model_io.hpp"
#include "nds/scalable.hpp"
#include "nds/scaling.hpp"
#include "nds/synthesis.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitImpossible = 3;
constexpr int kExitOracleDisagreement = 4;
constexpr int kExitExhausted = 5;

struct TolFlags {
  std::optional<double> rtol;
  std::optional<double> atol;
};

// Flag beats NDS_TOL beats the built-in default.
nds::Tol resolve_tol(const TolFlags& flags) {
  nds::Tol tol;
  if (const char* env = std::getenv("NDS_TOL")) {
    try {
      tol.rank_rtol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable NDS_TOL=\"" << env << "\"\n";
    }
  }
  if (flags.rtol) tol.rank_rtol = *flags.rtol;
  if (flags.atol) tol.rank_atol = *flags.atol;
  return tol;
}

void add_tol_flags(CLI::App* cmd, TolFlags& flags) {
  cmd->add_option("--rank-rtol", flags.rtol,
                  "relative rank threshold (default 1e-9, env NDS_TOL)");
  cmd->add_option("--rank-atol", flags.atol,
                  "absolute rank threshold (default 1e-12)");
}

json report_to_json(const nds::ConditionReport& r) {
  return json{{"verdict", r.verdict},
              {"test_rows", r.test_rows},
              {"test_cols", r.test_cols},
              {"rank", r.rank},
              {"deficiency", r.deficiency},
              {"reduced_subsystems", r.reduced_subsystems},
              {"sigma_gap",
               {{"smallest_kept", r.sigma_gap.smallest_kept},
                {"largest_dropped", r.sigma_gap.largest_dropped}}}};
}

json scm_to_json(const nds::Scm& phi) {
  json entries = json::array();
  for (const nds::ScmEntry& e : phi.entries) {
    entries.push_back(json::array({e.row, e.col, e.value}));
  }
  return json{{"rows", phi.n_v_total}, {"cols", phi.n_z_total}, {"entries", entries}};
}

json gains_to_json(const nds::FeedbackGain& fb) {
  json out = json::array();
  for (const Eigen::MatrixXd& f : fb.gains) {
    json m = json::array();
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < f.cols(); ++c) row.push_back(f(r, c));
      m.push_back(row);
    }
    out.push_back(m);
  }
  return out;
}

json constructibility_to_json(const nds::ConstructibilityReport& r) {
  json subs = json::array();
  for (const nds::SubsystemConstructibility& s : r.subsystems) {
    subs.push_back({{"index", s.index},
                    {"in_s_i", s.in_s_i},
                    {"in_s_ii", s.in_s_ii},
                    {"scm_ok_i", s.scm_ok_i},
                    {"scm_ok_ii", s.scm_ok_ii},
                    {"in_d_i", s.in_d_i},
                    {"in_d_ii", s.in_d_ii},
                    {"feedback_ok_i", s.feedback_ok_i}});
  }
  return json{{"subsystems", subs},
              {"exists_phi_for_i", r.exists_phi_for_i},
              {"exists_phi_for_ii", r.exists_phi_for_ii},
              {"feedback_can_fix_i", r.feedback_can_fix_i},
              {"feedback_can_fix_ii", r.feedback_can_fix_ii},
              {"joint_existence",
               r.joint_existence == nds::JointExistence::ConfirmedBySearch
                   ? "confirmed-by-search"
                   : "unknown"}};
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

void print_condition(std::ostream& os, const std::string& label,
                     const nds::ConditionReport& r) {
  os << label << ": " << (r.verdict ? "satisfied" : "violated") << "  [test "
     << r.test_rows << "x" << r.test_cols << ", rank " << r.rank
     << ", deficiency " << r.deficiency << ", certified subsystems "
     << r.reduced_subsystems.size() << "]\n";
}

int run_analyze(const std::string& path, bool as_json, bool with_oracle,
                const TolFlags& tol_flags, int trials, std::uint64_t seed) {
  const nds::Tol tol = resolve_tol(tol_flags);

  nds::NdsModel model;
  try {
    model = nds::load_model(path);
  } catch (const nds::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  const nds::Dims dims = nds::total_dims(model);
  const nds::AnalysisCerts certs = nds::make_certs(model, tol);
  const nds::ConditionReport cond_i = nds::check_condition_i(model, certs, tol);
  std::optional<nds::ConditionReport> cond_ii;
  if (dims.n_e == dims.n_x) {
    cond_ii = nds::check_condition_ii(model, certs, tol);
  }
  const nds::ConnectionIndependence indep =
      nds::connection_independent(model, tol);
  const nds::ConstructibilityReport constructibility =
      nds::constructibility_report(model, certs, tol);

  std::vector<std::string> warnings;
  const bool wp = nds::well_posed(model, tol);
  if (!wp) {
    warnings.push_back(
        "model is ill-posed (I - A_zv*Phi singular); lumped quantities are "
        "undefined and subsystem-wise verdicts lose their lumped reading");
  }

  nds::RegularityProbe regularity;
  const bool square = (dims.n_e == dims.n_x);
  std::optional<nds::LumpedModel> lumped;
  if (wp) {
    lumped = nds::lumped_lft(model, tol);
    if (lumped->interconnection_cond > 1e8) {
      warnings.push_back("I - A_zv*Phi condition estimate " +
                         std::to_string(lumped->interconnection_cond) +
                         " exceeds 1e8; verdicts may be fragile");
    }
    if (square) regularity = nds::regularity_probe(*lumped, trials, seed, tol);
  }

  const bool impulse_free = (dims.n_e >= dims.n_x) && cond_i.verdict;
  const bool causal = square && wp && regularity.regular &&
                      cond_ii.has_value() && cond_ii->verdict && cond_i.verdict;

  bool oracle_agrees = true;
  std::optional<nds::ConditionReport> oracle_i, oracle_ii;
  if (with_oracle && wp) {
    oracle_i = nds::condition_i_lumped(*lumped, tol);
    oracle_ii = nds::condition_ii_lumped(*lumped, tol);
    if (oracle_i->verdict != cond_i.verdict) oracle_agrees = false;
    if (cond_ii && oracle_ii->verdict != cond_ii->verdict) oracle_agrees = false;
  }

  if (as_json) {
    json out;
    out["schema_version"] = 1;
    out["model"] = {{"subsystems", model.subsystems.size()},
                    {"dims",
                     {{"n_x", dims.n_x},
                      {"n_e", dims.n_e},
                      {"n_z", dims.n_z},
                      {"n_v", dims.n_v},
                      {"n_u", dims.n_u},
                      {"n_y", dims.n_y}}}};
    out["tolerances"] = {{"rank_rtol", tol.rank_rtol},
                         {"rank_atol", tol.rank_atol}};
    out["well_posed"] = wp;
    out["condition_i"] = report_to_json(cond_i);
    out["condition_ii"] = cond_ii ? report_to_json(*cond_ii) : json("not-applicable");
    out["connection_independent"] = {{"cond_i", indep.cond_i_free},
                                     {"cond_ii", indep.cond_ii_free}};
    out["verdicts"] = {
        {"impulse_free_continuous", impulse_free},
        {"causal_discrete_via_rank_conditions", causal},
        {"dimension_ok", dims.n_e >= dims.n_x},
        {"square", square},
        {"regular_probe", square && wp ? json(regularity.regular) : json()},
        {"regularity_probabilistic", regularity.probabilistic}};
    out["constructibility"] = constructibility_to_json(constructibility);
    if (with_oracle) {
      json oracle;
      oracle["ill_posed"] = !wp;
      if (oracle_i) {
        oracle["condition_i"] = report_to_json(*oracle_i);
        oracle["condition_ii"] = report_to_json(*oracle_ii);
        oracle["agreement"] = oracle_agrees;
      }
      out["oracle"] = oracle;
    }
    out["warnings"] = warnings;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "model: " << model.subsystems.size() << " subsystems, n_x="
              << dims.n_x << " n_e=" << dims.n_e << " n_z=" << dims.n_z
              << " n_v=" << dims.n_v << " n_u=" << dims.n_u
              << " n_y=" << dims.n_y << "\n";
    std::cout << "well-posed: " << yesno(wp) << "\n";
    print_condition(std::cout, "condition I  (subsystem-wise)", cond_i);
    if (cond_ii) {
      print_condition(std::cout, "condition II (subsystem-wise)", *cond_ii);
    } else {
      std::cout << "condition II (subsystem-wise): not applicable "
                   "(sum n_e != sum n_x)\n";
    }
    std::cout << "connection-independent: condition I "
              << yesno(indep.cond_i_free) << ", condition II "
              << yesno(indep.cond_ii_free) << "\n";
    std::cout << "verdicts:\n";
    std::cout << "  impulse-free (continuous): " << yesno(impulse_free) << "\n";
    std::cout << "  causal (discrete, via rank conditions): " << yesno(causal);
    if (square && wp) {
      std::cout << "  [regular probe: " << yesno(regularity.regular) << "]";
    }
    std::cout << "\n";
    std::cout << "constructibility: exists Phi for I " <<
        yesno(constructibility.exists_phi_for_i)
              << ", for II " << yesno(constructibility.exists_phi_for_ii)
              << "; feedback can fix I "
              << yesno(constructibility.feedback_can_fix_i) << ", II "
              << yesno(constructibility.feedback_can_fix_ii) << "\n";
    if (with_oracle && oracle_i) {
      print_condition(std::cout, "oracle condition I  (lumped)", *oracle_i);
      print_condition(std::cout, "oracle condition II (lumped)", *oracle_ii);
      std::cout << "oracle agreement: " << yesno(oracle_agrees) << "\n";
    }
    for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
  }

  if (with_oracle && !oracle_agrees) {
    std::cerr << "error: subsystem-wise and lumped verdicts disagree\n";
    return kExitOracleDisagreement;
  }
  return kExitOk;
}

int run_construct(const std::string& path, const std::string& target,
                  bool feedback, int attempts, std::uint64_t seed,
                  const std::string& out_path, const TolFlags& tol_flags) {
  const nds::Tol tol = resolve_tol(tol_flags);

  nds::NdsModel model;
  try {
    model = nds::load_model(path);
  } catch (const nds::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  nds::SynthesisTargets targets;
  if (target == "i") {
    targets = {true, false};
  } else if (target == "ii") {
    targets = {false, true};
  } else if (target == "both") {
    targets = {true, true};
  } else {
    std::cerr << "error: --target must be i, ii or both\n";
    return kExitInvalid;
  }

  const nds::SynthesisResult result =
      feedback ? nds::synthesize_feedback(model, targets, attempts, seed, tol)
               : nds::synthesize_phi(model, targets, attempts, seed, tol);

  json out;
  out["schema_version"] = 1;
  out["status"] = result.status == nds::SynthesisStatus::Found
                      ? "found"
                      : result.status == nds::SynthesisStatus::CertifiedImpossible
                            ? "certified-impossible"
                            : "exhausted";
  out["attempts_used"] = result.attempts_used;
  out["conditions_met"] = {{"cond_i", result.conditions_met.cond_i},
                           {"cond_ii", result.conditions_met.cond_ii},
                           {"well_posed", result.conditions_met.well_posed}};
  out["search_only"] = result.search_only;
  if (!result.certificate.empty()) out["certificate"] = result.certificate;
  if (result.status == nds::SynthesisStatus::Found) {
    out["phi"] = scm_to_json(result.phi);
    if (result.feedback) out["feedback"] = gains_to_json(*result.feedback);
  }
  std::cout << out.dump(2) << "\n";

  if (result.status == nds::SynthesisStatus::Found && !out_path.empty()) {
    json fragment;
    fragment["phi"] = scm_to_json(result.phi);
    if (result.feedback) fragment["feedback"] = gains_to_json(*result.feedback);
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write \"" << out_path << "\"\n";
      return kExitInvalid;
    }
    f << fragment.dump(2) << "\n";
  }

  switch (result.status) {
    case nds::SynthesisStatus::Found: return kExitOk;
    case nds::SynthesisStatus::CertifiedImpossible: return kExitImpossible;
    case nds::SynthesisStatus::Exhausted: return kExitExhausted;
  }
  return kExitInvalid;
}

int run_benchmark(const std::vector<int>& n_list, int dims, int repeats,
                  std::uint64_t seed, const TolFlags& tol_flags) {
  nds::ScalingParams params;
  if (!n_list.empty()) params.n_list = n_list;
  params.dims = dims;
  params.repeats = repeats;
  params.seed = seed;
  params.tol = resolve_tol(tol_flags);

  const nds::ScalingResult result = nds::run_scaling(params);

  std::cout << "N,t_subsystem_pipeline_ms,t_lumped_ms\n";
  for (const nds::ScalingRow& row : result.rows) {
    std::cout << row.n << "," << row.t_subsystem_ms << "," << row.t_lumped_ms
              << "\n";
    if (!row.verdicts_agree) {
      std::cerr << "warning: verdict mismatch between pipelines at N=" << row.n
                << "\n";
    }
  }
  std::cout << "# slope_subsystem=" << result.slope_subsystem
            << " slope_lumped=" << result.slope_lumped
            << " lumped_over_subsystem_at_max_n=" << result.ratio_at_max << "\n";
  return kExitOk;
}

int run_generate(int subsystems, const std::string& profile_str,
                 std::uint64_t seed, const std::string& out_path, int dim_cap) {
  nds::GenProfile profile;
  try {
    profile = nds::profile_from_name(profile_str, dim_cap);
  } catch (const nds::GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  try {
    const nds::NdsModel model = nds::gen_model(subsystems, profile, seed);
    nds::save_model(model, out_path);
  } catch (const nds::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causality and impulse-freeness analysis for networked "
               "descriptor-form systems"};
  app.require_subcommand(1);

  // analyze
  std::string analyze_path;
  bool analyze_json = false, analyze_oracle = false;
  TolFlags analyze_tol;
  int analyze_trials = 8;
  std::uint64_t analyze_seed = 0;
  CLI::App* analyze = app.add_subcommand("analyze", "verdicts for a model file");
  analyze->add_option("path", analyze_path, "model JSON file")->required();
  analyze->add_flag("--json", analyze_json, "machine-readable output");
  analyze->add_flag("--oracle", analyze_oracle,
                    "cross-check against the lumped model (exit 4 on mismatch)");
  analyze->add_option("--trials", analyze_trials, "regularity probe samples");
  analyze->add_option("--seed", analyze_seed, "regularity probe seed");
  add_tol_flags(analyze, analyze_tol);

  // construct
  std::string construct_path, construct_target = "i", construct_out;
  bool construct_feedback = false;
  int construct_attempts = 32;
  std::uint64_t construct_seed = 0;
  TolFlags construct_tol;
  CLI::App* construct =
      app.add_subcommand("construct", "search for a connection matrix "
                                      "achieving the targeted conditions");
  construct->add_option("path", construct_path, "model JSON file")->required();
  construct->add_option("--target", construct_target, "i, ii or both");
  construct->add_flag("--feedback", construct_feedback,
                      "also search decentralized static output feedback");
  construct->add_option("--attempts", construct_attempts, "sampling budget");
  construct->add_option("--seed", construct_seed, "sampling seed");
  construct->add_option("--out", construct_out,
                        "write the found phi (and gains) as a model fragment");
  add_tol_flags(construct, construct_tol);

  // benchmark
  std::vector<int> bench_n_list;
  int bench_dims = 4, bench_repeats = 3;
  std::uint64_t bench_seed = 1;
  TolFlags bench_tol;
  CLI::App* benchmark =
      app.add_subcommand("benchmark", "subsystem-wise vs lumped scaling, CSV");
  benchmark->add_option("--n-list", bench_n_list, "subsystem counts")
      ->delimiter(',');
  benchmark->add_option("--dims", bench_dims, "per-subsystem state dimension");
  benchmark->add_option("--repeats", bench_repeats, "timing repetitions");
  benchmark->add_option("--seed", bench_seed, "model generation seed");
  add_tol_flags(benchmark, bench_tol);

  // generate
  int gen_subsystems = 1, gen_dim_cap = 4;
  std::string gen_profile = "generic", gen_out;
  std::uint64_t gen_seed = 0;
  CLI::App* generate = app.add_subcommand("generate", "emit a random model file");
  generate->add_option("--subsystems", gen_subsystems, "subsystem count")
      ->required();
  generate->add_option("--profile", gen_profile,
                       "generic|square|rectangular|independent-I|independent-II|"
                       "d1-blocked|feedback-rescuable|d2-blocked");
  generate->add_option("--seed", gen_seed, "generation seed");
  generate->add_option("--out", gen_out, "output path")->required();
  generate->add_option("--dim-cap", gen_dim_cap, "per-subsystem dimension cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      return run_analyze(analyze_path, analyze_json, analyze_oracle,
                         analyze_tol, analyze_trials, analyze_seed);
    }
    if (*construct) {
      return run_construct(construct_path, construct_target, construct_feedback,
                           construct_attempts, construct_seed, construct_out,
                           construct_tol);
    }
    if (*benchmark) {
      return run_benchmark(bench_n_list, bench_dims, bench_repeats, bench_seed,
                           bench_tol);
    }
    if (*generate) {
      return run_generate(gen_subsystems, gen_profile, gen_seed, gen_out,
                          gen_dim_cap);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
