#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "introscore/bayes.hpp"
#include "introscore/calibration.hpp"
#include "introscore/linear.hpp"
#include "introscore/profile.hpp"
#include "introscore/synthetic.hpp"

namespace introscore {

/// Provenance block embedded in every output artifact. JSON outputs carry it
/// under a "manifest" key; CSV outputs carry it as a leading "# manifest ..."
/// comment line, which the readers skip.
struct RunManifest {
  std::string command;
  std::vector<std::string> input_paths;
  std::vector<std::string> parameter_paths;
  std::optional<std::uint64_t> seed;
  std::string tool_version;
  std::string format_version;
};

RunManifest make_manifest(std::string command,
                          std::vector<std::string> input_paths = {},
                          std::vector<std::string> parameter_paths = {},
                          std::optional<std::uint64_t> seed = std::nullopt);

nlohmann::json manifest_to_json(const RunManifest& manifest);

/// Shortest decimal representation that parses back to exactly the same
/// double. Integral values print without a decimal point.
std::string format_double(double value);

/// Strict double parse of an entire token; `context` names the value in the
/// ValidationError raised on garbage.
double parse_double(std::string_view text, const std::string& context);

// ---------------------------------------------------------------------------
// Profile CSV (columns: id, solo_pubs, total_pubs, conf_per_year, job_rating,
// org_type, encyclopedic, depth, avg_duration_months, citation_freq,
// pub_rate, ext_funding, interdisc_collab, network_activity
// [, true_introversion]).
// ---------------------------------------------------------------------------

struct ProfileTable {
  std::vector<RawProfile> rows;
  bool has_truth_column = false;
};

ProfileTable read_profiles_csv(const std::filesystem::path& path);
std::string profiles_csv_string(const ProfileTable& table,
                                const RunManifest* manifest = nullptr);
void write_profiles_csv(const ProfileTable& table,
                        const std::filesystem::path& path,
                        const RunManifest* manifest = nullptr);

/// JSON record form of the same schema: {"format_version": ...,
/// "profiles": [{field: value, ...}, ...]} with identical field names.
nlohmann::json profiles_to_json(const ProfileTable& table);
ProfileTable profiles_from_json(const nlohmann::json& doc,
                                const std::string& context = "profiles document");
ProfileTable read_profiles_json(const std::filesystem::path& path);

/// Dispatches on the extension: ".json" reads the record form, anything else
/// the CSV form.
ProfileTable read_profiles_auto(const std::filesystem::path& path);

/// Normalizes every row; requires the truth column (and a label in every
/// row). Throws ValidationError naming the first offending row otherwise.
LabeledCohort cohort_from_profiles(const ProfileTable& table,
                                   const NormConfig& cfg,
                                   std::string provenance = "external");

/// Materializes a cohort in the profile schema (see to_raw_profile for the
/// two lossy fields) with ids synth-000001, synth-000002, ...
ProfileTable cohort_to_profiles(const LabeledCohort& cohort,
                                const NormConfig& cfg = {});

// ---------------------------------------------------------------------------
// JSON documents (each carries format_version)
// ---------------------------------------------------------------------------

nlohmann::json weights_to_json(const LinearWeights& weights);
LinearWeights weights_from_json(const nlohmann::json& doc);
LinearWeights read_weights_json(const std::filesystem::path& path);

/// Factor likelihood parameters plus the prior, keyed by factor id.
struct FactorModel {
  std::vector<FactorParams> factors;
  Prior prior;
};

nlohmann::json factor_model_to_json(const FactorModel& model);
FactorModel factor_model_from_json(const nlohmann::json& doc);
FactorModel read_factor_model_json(const std::filesystem::path& path);

nlohmann::json prior_to_json(const Prior& prior);
Prior prior_from_json(const nlohmann::json& doc);

/// Inline prior spec for the CLI: "uniform" or "normal:<mu>:<sigma>".
Prior parse_prior_spec(const std::string& spec);

nlohmann::json gen_config_to_json(const GenConfig& cfg);
GenConfig gen_config_from_json(const nlohmann::json& doc);
GenConfig read_gen_config_json(const std::filesystem::path& path);

NormConfig norm_config_from_json(const nlohmann::json& doc);
NormConfig read_norm_config_json(const std::filesystem::path& path);

nlohmann::json recovery_report_to_json(const RecoveryReport& report);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Posterior reports
// ---------------------------------------------------------------------------

/// Two-column density table: header "I,density", one row per grid point.
void write_density_csv(const Posterior& posterior,
                       const std::filesystem::path& path,
                       const RunManifest& manifest);

/// Re-reads a density table (for round-trip checks and external tooling).
std::vector<std::pair<double, double>> read_density_csv(
    const std::filesystem::path& path);

nlohmann::json posterior_summary_to_json(const Posterior& posterior);

}  // namespace introscore
