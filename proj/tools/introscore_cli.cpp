#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "introscore/bayes.hpp"
#include "introscore/calibration.hpp"
#include "introscore/errors.hpp"
#include "introscore/io.hpp"
#include "introscore/linear.hpp"
#include "introscore/profile.hpp"
#include "introscore/quadratic.hpp"
#include "introscore/rng.hpp"
#include "introscore/synthetic.hpp"
#include "introscore/version.hpp"

namespace {

using introscore::NumericError;
using introscore::ValidationError;

struct CommonFlags {
  std::string input;
  std::string output;
  std::string norm_config;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool input_required = true) {
  auto* input = cmd->add_option("--input", flags.input, "Input profiles file")
                    ->check(CLI::ExistingFile);
  if (input_required) input->required();
  cmd->add_option("--output", flags.output,
                  "Output path (stdout when omitted)");
  cmd->add_option("--norm-config", flags.norm_config,
                  "Normalization caps JSON")
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

introscore::NormConfig load_norm(const CommonFlags& flags) {
  if (flags.norm_config.empty()) return {};
  return introscore::read_norm_config_json(flags.norm_config);
}

std::vector<std::string> parameter_paths(std::initializer_list<std::string> paths) {
  std::vector<std::string> present;
  for (const auto& p : paths) {
    if (!p.empty()) present.push_back(p);
  }
  return present;
}

void emit_text(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw ValidationError(output + ": cannot open for writing");
  out << text;
  if (!out) throw ValidationError(output + ": write failed");
}

void emit_json(const nlohmann::json& doc, const std::string& output) {
  emit_text(doc.dump(2) + "\n", output);
}

std::string csv_bool(bool value) { return value ? "true" : "false"; }

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos &&
      (value.empty() || value.front() != '#')) {
    return value;
  }
  std::string quoted = "\"";
  for (const char c : value) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

introscore::FeatureVector normalize_row(const introscore::RawProfile& raw,
                                        const introscore::NormConfig& norm,
                                        const std::string& input,
                                        std::size_t row) {
  try {
    return introscore::normalize(raw, norm);
  } catch (const ValidationError& e) {
    std::ostringstream msg;
    msg << input << ", row " << row << " (id '" << raw.id << "'): " << e.what();
    throw ValidationError(msg.str());
  }
}

std::vector<int> parse_factor_ids(const std::string& spec) {
  std::vector<int> ids;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string token =
        spec.substr(start, comma == std::string::npos ? comma : comma - start);
    int id = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), id);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ValidationError("--factors: '" + token + "' is not an integer");
    }
    ids.push_back(id);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return ids;
}

int run_validate(const CommonFlags& flags, const introscore::RunManifest& manifest) {
  const auto table = introscore::read_profiles_auto(flags.input);
  nlohmann::json rows = nlohmann::json::array();
  std::size_t invalid = 0;
  std::ostringstream csv;
  csv << "# manifest " << introscore::manifest_to_json(manifest).dump() << "\n";
  csv << "row,id,field,constraint\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto result = introscore::validate(table.rows[i]);
    if (result.ok()) continue;
    ++invalid;
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : result.violations) {
      violations.push_back({{"field", v.field}, {"constraint", v.constraint}});
      csv << (i + 1) << ',' << csv_field(table.rows[i].id) << ',' << v.field
          << ',' << csv_field(v.constraint) << "\n";
    }
    rows.push_back({{"row", i + 1},
                    {"id", table.rows[i].id},
                    {"violations", std::move(violations)}});
  }
  if (flags.format == "csv") {
    emit_text(csv.str(), flags.output);
  } else {
    nlohmann::json doc;
    doc["manifest"] = introscore::manifest_to_json(manifest);
    doc["checked"] = table.rows.size();
    doc["invalid"] = invalid;
    doc["rows"] = std::move(rows);
    emit_json(doc, flags.output);
  }
  if (invalid > 0) {
    std::cerr << "error: " << invalid << " of " << table.rows.size()
              << " rows failed validation\n";
    return 1;
  }
  return 0;
}

int run_score(const CommonFlags& flags, const std::string& weights_path,
              const introscore::RunManifest& manifest) {
  const auto table = introscore::read_profiles_auto(flags.input);
  const auto weights = introscore::read_weights_json(weights_path);
  const auto norm = load_norm(flags);

  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "# manifest " << introscore::manifest_to_json(manifest).dump() << "\n";
  csv << "id,score,intercept,out_of_range";
  for (const auto& f : introscore::kFeatures) csv << ',' << f.name;
  csv << "\n";

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto features =
        normalize_row(table.rows[i], norm, flags.input, i + 1);
    const auto effects = introscore::partial_effects(features, weights);
    const bool out_of_range = effects.total < 0.0 || effects.total > 1.0;

    nlohmann::json contributions;
    csv << csv_field(table.rows[i].id) << ','
        << introscore::format_double(effects.total)
        << ',' << introscore::format_double(effects.intercept) << ','
        << csv_bool(out_of_range);
    for (std::size_t j = 0; j < introscore::kFeatureCount; ++j) {
      contributions[std::string(introscore::kFeatures[j].name)] =
          effects.contributions[j];
      csv << ',' << introscore::format_double(effects.contributions[j]);
    }
    csv << "\n";
    rows.push_back({{"id", table.rows[i].id},
                    {"score", effects.total},
                    {"intercept", effects.intercept},
                    {"out_of_range", out_of_range},
                    {"contributions", std::move(contributions)}});
  }

  if (flags.format == "csv") {
    emit_text(csv.str(), flags.output);
  } else {
    nlohmann::json doc;
    doc["manifest"] = introscore::manifest_to_json(manifest);
    doc["rows"] = std::move(rows);
    emit_json(doc, flags.output);
  }
  return 0;
}

int run_infer(const CommonFlags& flags, const std::string& factor_params_path,
              const std::string& prior_spec, int grid_points,
              std::uint64_t mc_samples, std::optional<std::uint64_t> seed,
              const introscore::RunManifest& manifest) {
  const auto table = introscore::read_profiles_auto(flags.input);
  auto model = introscore::read_factor_model_json(factor_params_path);
  if (!prior_spec.empty()) model.prior = introscore::parse_prior_spec(prior_spec);
  const auto norm = load_norm(flags);
  if (mc_samples > 0 && !seed) {
    throw ValidationError("--mc-samples requires --seed");
  }

  std::vector<introscore::FactorObservation> obs(model.factors.size());
  for (std::size_t k = 0; k < model.factors.size(); ++k) {
    obs[k].params = model.factors[k];
  }

  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "# manifest " << introscore::manifest_to_json(manifest).dump() << "\n";
  csv << "id,map,map_on_boundary,mean,variance,ci_lo,ci_hi,"
         "map_closed_form,closed_on_boundary,map_numeric,numeric_on_boundary,"
         "agreement_delta";
  if (mc_samples > 0) csv << ",mc_mean,mc_se,mc_ess,mc_degenerate";
  csv << "\n";

  const introscore::Rng row_seeds(seed.value_or(0));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto features =
        normalize_row(table.rows[i], norm, flags.input, i + 1);
    for (auto& o : obs) {
      o.value = features[static_cast<std::size_t>(o.params.factor_id - 1)];
    }
    const auto posterior = introscore::posterior_grid(obs, model.prior, grid_points);
    const auto coeffs = introscore::quad_coeffs(obs, model.prior);
    const auto closed = introscore::map_closed_form(coeffs);
    const auto numeric = introscore::map_numeric(obs, model.prior);
    const double delta = std::abs(closed.value - numeric.value);

    nlohmann::json rec = introscore::posterior_summary_to_json(posterior);
    rec["id"] = table.rows[i].id;
    rec["map_closed_form"] = {{"value", closed.value},
                              {"on_boundary", closed.on_boundary}};
    rec["map_numeric"] = {{"value", numeric.value},
                          {"on_boundary", numeric.on_boundary}};
    rec["agreement_delta"] = delta;
    rec["quad"] = {{"a1", coeffs.a1},
                   {"a2", coeffs.a2},
                   {"a3", coeffs.a3},
                   {"prior_included", coeffs.prior_included}};

    csv << csv_field(table.rows[i].id) << ','
        << introscore::format_double(posterior.map)
        << ',' << csv_bool(posterior.map_on_boundary) << ','
        << introscore::format_double(posterior.mean) << ','
        << introscore::format_double(posterior.variance) << ','
        << introscore::format_double(posterior.credible_interval_95.lo) << ','
        << introscore::format_double(posterior.credible_interval_95.hi) << ','
        << introscore::format_double(closed.value) << ','
        << csv_bool(closed.on_boundary) << ','
        << introscore::format_double(numeric.value) << ','
        << csv_bool(numeric.on_boundary) << ','
        << introscore::format_double(delta);

    if (mc_samples > 0) {
      const auto mc = introscore::posterior_mc(
          obs, model.prior, mc_samples, row_seeds.substream(i).seed());
      rec["mc"] = {{"mean", mc.mean},
                   {"variance", mc.variance},
                   {"map_estimate", mc.map_estimate},
                   {"se_mean", mc.se_mean},
                   {"ess", mc.ess},
                   {"n_samples", mc.n_samples},
                   {"degenerate", mc.degenerate}};
      csv << ',' << introscore::format_double(mc.mean) << ','
          << introscore::format_double(mc.se_mean) << ','
          << introscore::format_double(mc.ess) << ','
          << csv_bool(mc.degenerate);
    }
    csv << "\n";
    rows.push_back(std::move(rec));
  }

  if (flags.format == "csv") {
    emit_text(csv.str(), flags.output);
  } else {
    nlohmann::json doc;
    doc["manifest"] = introscore::manifest_to_json(manifest);
    doc["rows"] = std::move(rows);
    emit_json(doc, flags.output);
  }
  return 0;
}

int run_calibrate(const CommonFlags& flags, const std::string& weights_out,
                  const std::string& factor_params_out,
                  const std::string& factors_spec,
                  const std::string& prior_kind, bool include_intercept,
                  const introscore::RunManifest& manifest) {
  const auto table = introscore::read_profiles_auto(flags.input);
  const auto norm = load_norm(flags);
  const auto cohort = introscore::cohort_from_profiles(table, norm, "external");

  std::vector<introscore::FeatureVector> features;
  std::vector<double> labels;
  features.reserve(cohort.rows.size());
  labels.reserve(cohort.rows.size());
  for (const auto& row : cohort.rows) {
    features.push_back(row.features);
    labels.push_back(row.label);
  }

  introscore::OlsOptions ols_options;
  ols_options.include_intercept = include_intercept;
  const auto fit = introscore::fit_ols(features, labels, ols_options);

  std::vector<int> factor_ids(introscore::kDefaultFactorIds.begin(),
                              introscore::kDefaultFactorIds.end());
  if (!factors_spec.empty()) factor_ids = parse_factor_ids(factors_spec);
  const auto factor_params = introscore::fit_factor_params(cohort, factor_ids);
  const auto prior = introscore::fit_prior(
      labels, prior_kind == "uniform" ? introscore::PriorKind::kUniform
                                      : introscore::PriorKind::kNormal);

  const auto manifest_json = introscore::manifest_to_json(manifest);
  auto weights_doc = introscore::weights_to_json(fit.weights);
  weights_doc["manifest"] = manifest_json;
  introscore::FactorModel model{factor_params, prior};
  auto model_doc = introscore::factor_model_to_json(model);
  model_doc["manifest"] = manifest_json;

  if (!weights_out.empty()) introscore::write_json_file(weights_doc, weights_out);
  if (!factor_params_out.empty()) {
    introscore::write_json_file(model_doc, factor_params_out);
  }

  nlohmann::json effective;
  for (std::size_t i = 0; i < introscore::kFeatureCount; ++i) {
    effective[std::string(introscore::kFeatures[i].name)] =
        fit.diagnostics.effective[i];
  }
  nlohmann::json doc;
  doc["manifest"] = manifest_json;
  doc["ols"] = {{"r_squared", fit.diagnostics.r_squared},
                {"residual_sigma", fit.diagnostics.residual_sigma},
                {"condition_warning", fit.diagnostics.condition_warning},
                {"sign_violations", fit.diagnostics.sign_violations},
                {"effective", std::move(effective)},
                {"intercept", fit.weights.intercept}};
  doc["weights"] = introscore::weights_to_json(fit.weights);
  doc["factor_model"] = introscore::factor_model_to_json(model);
  doc["n"] = cohort.rows.size();
  emit_json(doc, flags.output);
  return 0;
}

int run_simulate(const CommonFlags& flags, std::optional<std::uint64_t> seed,
                 const std::string& command) {
  auto cfg = introscore::read_gen_config_json(flags.input);
  if (seed) cfg.seed = *seed;
  const auto cohort = introscore::generate_cohort(cfg);
  const auto norm = load_norm(flags);
  const auto table = introscore::cohort_to_profiles(cohort, norm);
  const auto manifest = introscore::make_manifest(
      command, {flags.input}, parameter_paths({flags.norm_config}), cfg.seed);
  if (flags.format == "csv") {
    emit_text(introscore::profiles_csv_string(table, &manifest), flags.output);
  } else {
    auto doc = introscore::profiles_to_json(table);
    doc["manifest"] = introscore::manifest_to_json(manifest);
    emit_json(doc, flags.output);
  }
  return 0;
}

int run_recover(const CommonFlags& flags, const std::string& estimator_spec,
                const std::string& factor_params_path,
                const std::string& weights_path, const std::string& prior_spec,
                int grid_points, const introscore::RunManifest& manifest) {
  const auto table = introscore::read_profiles_auto(flags.input);
  const auto norm = load_norm(flags);
  const auto cohort = introscore::cohort_from_profiles(table, norm, "external");

  std::vector<double> estimates;
  std::string name;
  if (estimator_spec == "linear") {
    if (weights_path.empty()) {
      throw ValidationError("estimator 'linear' requires --weights");
    }
    const auto weights = introscore::read_weights_json(weights_path);
    estimates = introscore::estimate_cohort_linear(cohort, weights);
    name = "linear";
  } else {
    if (factor_params_path.empty()) {
      throw ValidationError("estimator '" + estimator_spec +
                            "' requires --factor-params");
    }
    auto model = introscore::read_factor_model_json(factor_params_path);
    if (!prior_spec.empty()) {
      model.prior = introscore::parse_prior_spec(prior_spec);
    }
    introscore::Estimator estimator;
    if (estimator_spec == "posterior_mean") {
      estimator = introscore::Estimator::kPosteriorMean;
    } else if (estimator_spec == "map_closed_form") {
      estimator = introscore::Estimator::kMapClosedForm;
    } else {
      estimator = introscore::Estimator::kMapNumeric;
    }
    estimates = introscore::estimate_cohort(cohort, model.factors, model.prior,
                                            estimator, grid_points);
    name = introscore::estimator_name(estimator);
  }

  const auto report = introscore::recovery_report(cohort, estimates, name);
  auto doc = introscore::recovery_report_to_json(report);
  doc["manifest"] = introscore::manifest_to_json(manifest);
  emit_json(doc, flags.output);
  return 0;
}

int run_report(const CommonFlags& flags, const std::string& factor_params_path,
               const std::string& prior_spec, int grid_points, std::size_t row,
               const std::string& density_out,
               const introscore::RunManifest& manifest) {
  const auto table = introscore::read_profiles_auto(flags.input);
  if (row < 1 || row > table.rows.size()) {
    std::ostringstream msg;
    msg << "--row " << row << " outside 1.." << table.rows.size();
    throw ValidationError(msg.str());
  }
  auto model = introscore::read_factor_model_json(factor_params_path);
  if (!prior_spec.empty()) model.prior = introscore::parse_prior_spec(prior_spec);
  const auto norm = load_norm(flags);
  const auto& raw = table.rows[row - 1];
  const auto features = normalize_row(raw, norm, flags.input, row);

  std::vector<introscore::FactorObservation> obs(model.factors.size());
  for (std::size_t k = 0; k < model.factors.size(); ++k) {
    obs[k].params = model.factors[k];
    obs[k].value =
        features[static_cast<std::size_t>(model.factors[k].factor_id - 1)];
  }
  const auto posterior = introscore::posterior_grid(obs, model.prior, grid_points);
  introscore::write_density_csv(posterior, density_out, manifest);

  auto doc = introscore::posterior_summary_to_json(posterior);
  doc["id"] = raw.id;
  doc["density_path"] = density_out;
  doc["manifest"] = introscore::manifest_to_json(manifest);
  emit_json(doc, flags.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Introversion-degree estimation from scientometric profiles"};
  app.set_version_flag("--version", std::string(introscore::kToolVersion));
  app.require_subcommand(1);

  std::ostringstream command;
  command << "introscore";
  for (int i = 1; i < argc; ++i) command << ' ' << argv[i];

  CommonFlags validate_flags;
  auto* cmd_validate =
      app.add_subcommand("validate", "Check profile rows against the schema");
  add_common(cmd_validate, validate_flags);

  CommonFlags score_flags;
  std::string score_weights;
  auto* cmd_score =
      app.add_subcommand("score", "Deterministic linear introversion score");
  add_common(cmd_score, score_flags);
  cmd_score->add_option("--weights", score_weights, "Weights JSON")
      ->required()
      ->check(CLI::ExistingFile);

  CommonFlags infer_flags;
  std::string infer_factor_params;
  std::string infer_prior;
  int infer_grid_points = 1001;
  std::uint64_t infer_mc_samples = 0;
  std::uint64_t infer_seed_value = 0;
  auto* cmd_infer =
      app.add_subcommand("infer", "Bayesian posterior per profile");
  add_common(cmd_infer, infer_flags);
  cmd_infer->add_option("--factor-params", infer_factor_params,
                        "Factor model JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_infer->add_option("--prior", infer_prior,
                        "Prior override: uniform | normal:<mu>:<sigma>");
  cmd_infer->add_option("--grid-points", infer_grid_points, "Grid resolution");
  cmd_infer->add_option("--mc-samples", infer_mc_samples,
                        "Monte Carlo sample count (0 = off)");
  auto* infer_seed_opt =
      cmd_infer->add_option("--seed", infer_seed_value, "Random seed");

  CommonFlags calibrate_flags;
  std::string calibrate_weights_out;
  std::string calibrate_factor_params_out;
  std::string calibrate_factors;
  std::string calibrate_prior_kind = "normal";
  bool calibrate_intercept = false;
  auto* cmd_calibrate = app.add_subcommand(
      "calibrate", "Fit weights and factor parameters from a labeled cohort");
  add_common(cmd_calibrate, calibrate_flags);
  cmd_calibrate->add_option("--weights-out", calibrate_weights_out,
                            "Where to write the fitted weights JSON");
  cmd_calibrate->add_option("--factor-params-out", calibrate_factor_params_out,
                            "Where to write the fitted factor model JSON");
  cmd_calibrate->add_option(
      "--factors", calibrate_factors,
      "Comma-separated factor ids to fit (default 1,2,3,4,6)");
  cmd_calibrate
      ->add_option("--prior-kind", calibrate_prior_kind, "Prior to fit")
      ->check(CLI::IsMember({"uniform", "normal"}));
  cmd_calibrate->add_flag("--intercept", calibrate_intercept,
                          "Include an intercept in the OLS fit");

  CommonFlags simulate_flags;
  simulate_flags.format = "csv";
  std::uint64_t simulate_seed_value = 0;
  auto* cmd_simulate = app.add_subcommand(
      "simulate", "Generate a synthetic cohort from a generator config");
  add_common(cmd_simulate, simulate_flags);
  auto* simulate_seed_opt = cmd_simulate->add_option(
      "--seed", simulate_seed_value, "Seed override for the generator config");

  CommonFlags recover_flags;
  std::string recover_estimator;
  std::string recover_factor_params;
  std::string recover_weights;
  std::string recover_prior;
  int recover_grid_points = 1001;
  auto* cmd_recover = app.add_subcommand(
      "recover", "Score an estimator against ground-truth labels");
  add_common(cmd_recover, recover_flags);
  cmd_recover
      ->add_option("--estimator", recover_estimator, "Estimator to evaluate")
      ->required()
      ->check(CLI::IsMember(
          {"posterior_mean", "map_closed_form", "map_numeric", "linear"}));
  cmd_recover
      ->add_option("--factor-params", recover_factor_params,
                   "Factor model JSON (Bayesian estimators)")
      ->check(CLI::ExistingFile);
  cmd_recover->add_option("--weights", recover_weights,
                          "Weights JSON (linear estimator)")
      ->check(CLI::ExistingFile);
  cmd_recover->add_option("--prior", recover_prior, "Prior override");
  cmd_recover->add_option("--grid-points", recover_grid_points,
                          "Grid resolution");

  CommonFlags report_flags;
  std::string report_factor_params;
  std::string report_prior;
  int report_grid_points = 1001;
  std::size_t report_row = 1;
  std::string report_density_out;
  auto* cmd_report = app.add_subcommand(
      "report", "Posterior density table for one profile");
  add_common(cmd_report, report_flags);
  cmd_report->add_option("--factor-params", report_factor_params,
                         "Factor model JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_report->add_option("--prior", report_prior, "Prior override");
  cmd_report->add_option("--grid-points", report_grid_points, "Grid resolution");
  cmd_report->add_option("--row", report_row, "1-based row to report on");
  cmd_report->add_option("--density-out", report_density_out,
                         "Where to write the density CSV")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_validate->parsed()) {
      return run_validate(validate_flags,
                          introscore::make_manifest(command.str(),
                                                    {validate_flags.input}));
    }
    if (cmd_score->parsed()) {
      return run_score(
          score_flags, score_weights,
          introscore::make_manifest(
              command.str(), {score_flags.input},
              parameter_paths({score_weights, score_flags.norm_config})));
    }
    if (cmd_infer->parsed()) {
      const std::optional<std::uint64_t> infer_seed =
          infer_seed_opt->count() > 0
              ? std::optional<std::uint64_t>(infer_seed_value)
              : std::nullopt;
      return run_infer(
          infer_flags, infer_factor_params, infer_prior, infer_grid_points,
          infer_mc_samples, infer_seed,
          introscore::make_manifest(
              command.str(), {infer_flags.input},
              parameter_paths({infer_factor_params, infer_flags.norm_config}),
              infer_seed));
    }
    if (cmd_calibrate->parsed()) {
      return run_calibrate(
          calibrate_flags, calibrate_weights_out, calibrate_factor_params_out,
          calibrate_factors, calibrate_prior_kind, calibrate_intercept,
          introscore::make_manifest(
              command.str(), {calibrate_flags.input},
              parameter_paths({calibrate_flags.norm_config})));
    }
    if (cmd_simulate->parsed()) {
      const std::optional<std::uint64_t> simulate_seed =
          simulate_seed_opt->count() > 0
              ? std::optional<std::uint64_t>(simulate_seed_value)
              : std::nullopt;
      return run_simulate(simulate_flags, simulate_seed, command.str());
    }
    if (cmd_recover->parsed()) {
      return run_recover(
          recover_flags, recover_estimator, recover_factor_params,
          recover_weights, recover_prior, recover_grid_points,
          introscore::make_manifest(
              command.str(), {recover_flags.input},
              parameter_paths({recover_factor_params, recover_weights,
                               recover_flags.norm_config})));
    }
    if (cmd_report->parsed()) {
      return run_report(
          report_flags, report_factor_params, report_prior, report_grid_points,
          report_row, report_density_out,
          introscore::make_manifest(
              command.str(), {report_flags.input},
              parameter_paths({report_factor_params, report_flags.norm_config})));
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
