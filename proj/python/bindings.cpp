#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

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

namespace py = pybind11;
using namespace introscore;

namespace {

FeatureVector features_from_list(const std::vector<double>& values) {
  if (values.size() != kFeatureCount) {
    throw ValidationError("a feature vector has exactly 12 entries");
  }
  FeatureVector features;
  std::copy(values.begin(), values.end(), features.values.begin());
  return features;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Introversion scoring from scientometric profiles";
  m.attr("__version__") = kToolVersion;
  m.attr("FEATURE_COUNT") = kFeatureCount;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform01", &Rng::uniform01)
      .def("uniform", &Rng::uniform, py::arg("lo"), py::arg("hi"))
      .def("normal01", &Rng::normal01)
      .def("normal", &Rng::normal, py::arg("mean"), py::arg("sd"))
      .def("substream", &Rng::substream, py::arg("index"))
      .def_property_readonly("seed", &Rng::seed);

  py::class_<NormConfig>(m, "NormConfig")
      .def(py::init<>())
      .def_readwrite("cap_conf_per_year", &NormConfig::cap_conf_per_year)
      .def_readwrite("cap_duration_months", &NormConfig::cap_duration_months)
      .def_readwrite("cap_pub_rate", &NormConfig::cap_pub_rate);

  py::class_<RawProfile>(m, "RawProfile")
      .def(py::init<>())
      .def_readwrite("id", &RawProfile::id)
      .def_readwrite("solo_pubs", &RawProfile::solo_pubs)
      .def_readwrite("total_pubs", &RawProfile::total_pubs)
      .def_readwrite("conf_per_year", &RawProfile::conf_per_year)
      .def_readwrite("job_rating", &RawProfile::job_rating)
      .def_readwrite("org_type", &RawProfile::org_type)
      .def_readwrite("encyclopedic", &RawProfile::encyclopedic)
      .def_readwrite("depth", &RawProfile::depth)
      .def_readwrite("avg_duration_months", &RawProfile::avg_duration_months)
      .def_readwrite("citation_freq", &RawProfile::citation_freq)
      .def_readwrite("pub_rate", &RawProfile::pub_rate)
      .def_readwrite("ext_funding", &RawProfile::ext_funding)
      .def_readwrite("interdisc_collab", &RawProfile::interdisc_collab)
      .def_readwrite("network_activity", &RawProfile::network_activity)
      .def_readwrite("true_introversion", &RawProfile::true_introversion);

  py::class_<FieldViolation>(m, "FieldViolation")
      .def_readonly("field", &FieldViolation::field)
      .def_readonly("constraint", &FieldViolation::constraint);

  py::class_<ValidationResult>(m, "ValidationResult")
      .def_readonly("violations", &ValidationResult::violations)
      .def_property_readonly("ok", &ValidationResult::ok);

  py::class_<FeatureVector>(m, "FeatureVector")
      .def(py::init<>())
      .def(py::init(&features_from_list), py::arg("values"))
      .def_readwrite("values", &FeatureVector::values)
      .def("__len__", [](const FeatureVector&) { return kFeatureCount; })
      .def("__getitem__",
           [](const FeatureVector& f, std::size_t i) {
             if (i >= kFeatureCount) throw py::index_error();
             return f.values[i];
           })
      .def("__setitem__", [](FeatureVector& f, std::size_t i, double v) {
        if (i >= kFeatureCount) throw py::index_error();
        f.values[i] = v;
      });

  m.def("validate", &validate, py::arg("profile"));
  m.def("normalize", &normalize, py::arg("profile"),
        py::arg("config") = NormConfig{});
  m.def("to_raw_profile", &to_raw_profile, py::arg("features"), py::arg("id"),
        py::arg("true_introversion") = std::nullopt,
        py::arg("config") = NormConfig{});

  py::class_<LinearWeights>(m, "LinearWeights")
      .def(py::init<>())
      .def(py::init([](const std::vector<double>& magnitudes,
                       double noise_sigma, double intercept) {
             LinearWeights w;
             if (magnitudes.size() != kFeatureCount) {
               throw ValidationError("expected 12 weight magnitudes");
             }
             std::copy(magnitudes.begin(), magnitudes.end(),
                       w.magnitudes.begin());
             w.noise_sigma = noise_sigma;
             w.intercept = intercept;
             check_weights(w);
             return w;
           }),
           py::arg("magnitudes"), py::arg("noise_sigma") = 0.0,
           py::arg("intercept") = 0.0)
      .def_readwrite("magnitudes", &LinearWeights::magnitudes)
      .def_readwrite("noise_sigma", &LinearWeights::noise_sigma)
      .def_readwrite("intercept", &LinearWeights::intercept);

  m.def("check_weights", &check_weights, py::arg("weights"));
  m.def(
      "score",
      [](const FeatureVector& features, const LinearWeights& weights) {
        return score(features, weights);
      },
      py::arg("features"), py::arg("weights"));
  m.def(
      "score",
      [](const FeatureVector& features, const LinearWeights& weights,
         Rng& noise) { return score(features, weights, &noise); },
      py::arg("features"), py::arg("weights"), py::arg("noise"));

  py::class_<PartialEffects>(m, "PartialEffects")
      .def_readonly("contributions", &PartialEffects::contributions)
      .def_readonly("intercept", &PartialEffects::intercept)
      .def_readonly("total", &PartialEffects::total);
  m.def("partial_effects", &partial_effects, py::arg("features"),
        py::arg("weights"));

  py::class_<FitDiagnostics>(m, "FitDiagnostics")
      .def_readonly("r_squared", &FitDiagnostics::r_squared)
      .def_readonly("residual_sigma", &FitDiagnostics::residual_sigma)
      .def_readonly("sign_violations", &FitDiagnostics::sign_violations)
      .def_readonly("condition_warning", &FitDiagnostics::condition_warning)
      .def_readonly("effective", &FitDiagnostics::effective);

  py::class_<OlsFit>(m, "OlsFit")
      .def_readonly("weights", &OlsFit::weights)
      .def_readonly("diagnostics", &OlsFit::diagnostics);

  m.def(
      "fit_ols",
      [](const std::vector<FeatureVector>& features,
         const std::vector<double>& labels, bool include_intercept) {
        OlsOptions options;
        options.include_intercept = include_intercept;
        return fit_ols(features, labels, options);
      },
      py::arg("features"), py::arg("labels"),
      py::arg("include_intercept") = false);

  py::enum_<PriorKind>(m, "PriorKind")
      .value("UNIFORM", PriorKind::kUniform)
      .value("NORMAL", PriorKind::kNormal);

  py::class_<Prior>(m, "Prior")
      .def_static("uniform", &Prior::uniform)
      .def_static("normal", &Prior::normal, py::arg("mu"), py::arg("sigma"))
      .def_readonly("kind", &Prior::kind)
      .def_readonly("mu", &Prior::mu)
      .def_readonly("sigma", &Prior::sigma);

  py::class_<FactorParams>(m, "FactorParams")
      .def(py::init([](int factor_id, double slope, double intercept,
                       double sigma) {
             FactorParams params{factor_id, slope, intercept, sigma};
             check_factor_params(params);
             return params;
           }),
           py::arg("factor_id"), py::arg("slope"), py::arg("intercept"),
           py::arg("sigma"))
      .def_readwrite("factor_id", &FactorParams::factor_id)
      .def_readwrite("slope", &FactorParams::slope)
      .def_readwrite("intercept", &FactorParams::intercept)
      .def_readwrite("sigma", &FactorParams::sigma);

  py::class_<FactorObservation>(m, "FactorObservation")
      .def(py::init([](const FactorParams& params, double value) {
             return FactorObservation{params, value};
           }),
           py::arg("params"), py::arg("value"))
      .def_readwrite("params", &FactorObservation::params)
      .def_readwrite("value", &FactorObservation::value);

  m.def(
      "log_posterior_unnorm",
      [](double introversion, const std::vector<FactorObservation>& factors,
         const Prior& prior) {
        return log_posterior_unnorm(introversion, factors, prior);
      },
      py::arg("introversion"), py::arg("factors"), py::arg("prior"));

  py::class_<CredibleInterval>(m, "CredibleInterval")
      .def_readonly("lo", &CredibleInterval::lo)
      .def_readonly("hi", &CredibleInterval::hi);

  py::class_<Posterior>(m, "Posterior")
      .def_readonly("grid", &Posterior::grid)
      .def_readonly("density", &Posterior::density)
      .def_readonly("map", &Posterior::map)
      .def_readonly("map_on_boundary", &Posterior::map_on_boundary)
      .def_readonly("mean", &Posterior::mean)
      .def_readonly("variance", &Posterior::variance)
      .def_readonly("credible_interval_95", &Posterior::credible_interval_95);

  m.def(
      "posterior_grid",
      [](const std::vector<FactorObservation>& factors, const Prior& prior,
         int n_points) { return posterior_grid(factors, prior, n_points); },
      py::arg("factors"), py::arg("prior"), py::arg("n_points") = 1001);

  py::class_<McSummary>(m, "McSummary")
      .def_readonly("mean", &McSummary::mean)
      .def_readonly("variance", &McSummary::variance)
      .def_readonly("map_estimate", &McSummary::map_estimate)
      .def_readonly("se_mean", &McSummary::se_mean)
      .def_readonly("ess", &McSummary::ess)
      .def_readonly("n_samples", &McSummary::n_samples)
      .def_readonly("degenerate", &McSummary::degenerate);

  m.def(
      "posterior_mc",
      [](const std::vector<FactorObservation>& factors, const Prior& prior,
         std::size_t n_samples, std::uint64_t seed) {
        return posterior_mc(factors, prior, n_samples, seed);
      },
      py::arg("factors"), py::arg("prior"), py::arg("n_samples"),
      py::arg("seed"));

  py::class_<MapEstimate>(m, "MapEstimate")
      .def_readonly("value", &MapEstimate::value)
      .def_readonly("on_boundary", &MapEstimate::on_boundary);

  m.def(
      "map_numeric",
      [](const std::vector<FactorObservation>& factors, const Prior& prior) {
        return map_numeric(factors, prior);
      },
      py::arg("factors"), py::arg("prior"));

  py::class_<QuadraticCoeffs>(m, "QuadraticCoeffs")
      .def_readonly("a1", &QuadraticCoeffs::a1)
      .def_readonly("a2", &QuadraticCoeffs::a2)
      .def_readonly("a3", &QuadraticCoeffs::a3)
      .def_readonly("prior_included", &QuadraticCoeffs::prior_included);

  m.def(
      "quad_coeffs",
      [](const std::vector<FactorObservation>& factors, const Prior& prior) {
        return quad_coeffs(factors, prior);
      },
      py::arg("factors"), py::arg("prior"));
  m.def("map_closed_form", &map_closed_form, py::arg("coeffs"));

  py::class_<LabeledRow>(m, "LabeledRow")
      .def(py::init<>())
      .def_readwrite("features", &LabeledRow::features)
      .def_readwrite("label", &LabeledRow::label);

  py::class_<LabeledCohort>(m, "LabeledCohort")
      .def(py::init<>())
      .def_readwrite("rows", &LabeledCohort::rows)
      .def_readwrite("provenance", &LabeledCohort::provenance);

  py::class_<GenConfig>(m, "GenConfig")
      .def(py::init<>())
      .def_readwrite("n", &GenConfig::n)
      .def_readwrite("prior", &GenConfig::prior)
      .def_readwrite("factor_params", &GenConfig::factor_params)
      .def_readwrite("seed", &GenConfig::seed)
      .def_readwrite("clamp_features", &GenConfig::clamp_features)
      .def_readwrite("neutral_fill", &GenConfig::neutral_fill);

  m.def("generate_cohort", &generate_cohort, py::arg("config"));

  m.def(
      "fit_factor_params",
      [](const LabeledCohort& cohort, const std::vector<int>& factor_ids,
         double sigma_floor) {
        CalibrationOptions options;
        options.sigma_floor = sigma_floor;
        return fit_factor_params(cohort, factor_ids, options);
      },
      py::arg("cohort"), py::arg("factor_ids"), py::arg("sigma_floor") = 1e-6);
  m.def(
      "fit_prior",
      [](const std::vector<double>& labels, PriorKind kind) {
        return fit_prior(labels, kind);
      },
      py::arg("labels"), py::arg("kind"));
  m.attr("DEFAULT_FACTOR_IDS") =
      std::vector<int>(kDefaultFactorIds.begin(), kDefaultFactorIds.end());

  py::class_<RecoveryReport>(m, "RecoveryReport")
      .def_readonly("rmse", &RecoveryReport::rmse)
      .def_readonly("pearson_r", &RecoveryReport::pearson_r)
      .def_readonly("mean_bias", &RecoveryReport::mean_bias)
      .def_readonly("n", &RecoveryReport::n)
      .def_readonly("estimator_name", &RecoveryReport::estimator_name);

  m.def(
      "recovery_report",
      [](const LabeledCohort& cohort, const std::vector<double>& estimates,
         const std::string& estimator_name) {
        return recovery_report(cohort, estimates, estimator_name);
      },
      py::arg("cohort"), py::arg("estimates"), py::arg("estimator_name"));

  py::enum_<Estimator>(m, "Estimator")
      .value("POSTERIOR_MEAN", Estimator::kPosteriorMean)
      .value("MAP_CLOSED_FORM", Estimator::kMapClosedForm)
      .value("MAP_NUMERIC", Estimator::kMapNumeric);

  m.def(
      "estimate_cohort",
      [](const LabeledCohort& cohort,
         const std::vector<FactorParams>& factor_params, const Prior& prior,
         Estimator estimator, int grid_points) {
        return estimate_cohort(cohort, factor_params, prior, estimator,
                               grid_points);
      },
      py::arg("cohort"), py::arg("factor_params"), py::arg("prior"),
      py::arg("estimator"), py::arg("grid_points") = 1001);
  m.def("estimate_cohort_linear", &estimate_cohort_linear, py::arg("cohort"),
        py::arg("weights"));

  py::class_<ProfileTable>(m, "ProfileTable")
      .def(py::init<>())
      .def_readwrite("rows", &ProfileTable::rows)
      .def_readwrite("has_truth_column", &ProfileTable::has_truth_column);

  m.def(
      "read_profiles",
      [](const std::string& path) { return read_profiles_auto(path); },
      py::arg("path"));
  m.def(
      "write_profiles_csv",
      [](const ProfileTable& table, const std::string& path) {
        write_profiles_csv(table, path);
      },
      py::arg("table"), py::arg("path"));
  m.def("cohort_from_profiles", &cohort_from_profiles, py::arg("table"),
        py::arg("config") = NormConfig{}, py::arg("provenance") = "external");
  m.def("cohort_to_profiles", &cohort_to_profiles, py::arg("cohort"),
        py::arg("config") = NormConfig{});

  m.def(
      "read_weights_json",
      [](const std::string& path) { return read_weights_json(path); },
      py::arg("path"));
  m.def(
      "write_weights_json",
      [](const LinearWeights& weights, const std::string& path) {
        write_json_file(weights_to_json(weights), path);
      },
      py::arg("weights"), py::arg("path"));

  py::class_<FactorModel>(m, "FactorModel")
      .def(py::init<>())
      .def_readwrite("factors", &FactorModel::factors)
      .def_readwrite("prior", &FactorModel::prior);

  m.def(
      "read_factor_model_json",
      [](const std::string& path) { return read_factor_model_json(path); },
      py::arg("path"));
  m.def(
      "write_factor_model_json",
      [](const FactorModel& model, const std::string& path) {
        write_json_file(factor_model_to_json(model), path);
      },
      py::arg("model"), py::arg("path"));
}
