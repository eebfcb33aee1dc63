#include "introscore/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "introscore/errors.hpp"

namespace introscore {

namespace {

bool is_count(double v) {
  return std::isfinite(v) && v >= 0.0 && std::floor(v) == v;
}

void check_unit_interval(ValidationResult& result, const char* field, double v) {
  if (!(std::isfinite(v) && v >= 0.0 && v <= 1.0)) {
    result.violations.push_back({field, std::string(field) + " in [0,1]"});
  }
}

void check_nonneg_rate(ValidationResult& result, const char* field, double v) {
  if (!(std::isfinite(v) && v >= 0.0)) {
    result.violations.push_back({field, std::string(field) + " finite and >= 0"});
  }
}

double clamp_ratio(double value, double cap) { return std::min(value, cap) / cap; }

}  // namespace

ValidationResult validate(const RawProfile& raw) {
  ValidationResult result;

  if (!is_count(raw.solo_pubs)) {
    result.violations.push_back({"solo_pubs", "solo_pubs nonnegative integer"});
  }
  if (!is_count(raw.total_pubs) || raw.total_pubs < 1.0) {
    result.violations.push_back({"total_pubs", "total_pubs >= 1"});
  } else if (is_count(raw.solo_pubs) && raw.solo_pubs > raw.total_pubs) {
    result.violations.push_back({"solo_pubs", "solo_pubs <= total_pubs"});
  }
  check_nonneg_rate(result, "conf_per_year", raw.conf_per_year);
  check_unit_interval(result, "job_rating", raw.job_rating);
  if (!(raw.org_type == 0.0 || raw.org_type == 1.0)) {
    result.violations.push_back({"org_type", "org_type in {0,1}"});
  }
  check_unit_interval(result, "encyclopedic", raw.encyclopedic);
  check_unit_interval(result, "depth", raw.depth);
  check_nonneg_rate(result, "avg_duration_months", raw.avg_duration_months);
  check_unit_interval(result, "citation_freq", raw.citation_freq);
  check_nonneg_rate(result, "pub_rate", raw.pub_rate);
  check_unit_interval(result, "ext_funding", raw.ext_funding);
  check_unit_interval(result, "interdisc_collab", raw.interdisc_collab);
  check_unit_interval(result, "network_activity", raw.network_activity);
  if (raw.true_introversion) {
    const double t = *raw.true_introversion;
    if (!(std::isfinite(t) && t >= 0.0 && t <= 1.0)) {
      result.violations.push_back({"true_introversion", "true_introversion in [0,1]"});
    }
  }
  return result;
}

void check_norm_config(const NormConfig& cfg) {
  const auto bad = [](double cap) { return !(std::isfinite(cap) && cap > 0.0); };
  if (bad(cfg.cap_conf_per_year) || bad(cfg.cap_duration_months) ||
      bad(cfg.cap_pub_rate)) {
    throw ValidationError("normalization caps must be strictly positive and finite");
  }
}

FeatureVector normalize(const RawProfile& raw, const NormConfig& cfg) {
  check_norm_config(cfg);
  const ValidationResult result = validate(raw);
  if (!result.ok()) {
    std::ostringstream msg;
    msg << "invalid profile";
    if (!raw.id.empty()) msg << " '" << raw.id << "'";
    for (const auto& violation : result.violations) {
      msg << "; " << violation.constraint;
    }
    throw ValidationError(msg.str());
  }

  FeatureVector features;
  features[0] = raw.solo_pubs / raw.total_pubs;
  features[1] = clamp_ratio(raw.conf_per_year, cfg.cap_conf_per_year);
  features[2] = 1.0 - raw.job_rating;
  features[3] = raw.org_type;
  features[4] = raw.encyclopedic;
  features[5] = raw.depth;
  features[6] = clamp_ratio(raw.avg_duration_months, cfg.cap_duration_months);
  features[7] = 1.0 - raw.citation_freq;
  features[8] = clamp_ratio(raw.pub_rate, cfg.cap_pub_rate);
  features[9] = raw.ext_funding;
  features[10] = raw.interdisc_collab;
  features[11] = raw.network_activity;
  return features;
}

RawProfile to_raw_profile(const FeatureVector& features, std::string id,
                          std::optional<double> true_introversion,
                          const NormConfig& cfg) {
  check_norm_config(cfg);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!(std::isfinite(features[i]) && features[i] >= 0.0 && features[i] <= 1.0)) {
      throw ValidationError("feature " + std::string(kFeatures[i].name) +
                            " outside [0,1]");
    }
  }

  RawProfile raw;
  raw.id = std::move(id);
  raw.total_pubs = kSoloShareDenominator;
  raw.solo_pubs = std::round(features[0] * kSoloShareDenominator);
  raw.conf_per_year = features[1] * cfg.cap_conf_per_year;
  raw.job_rating = 1.0 - features[2];
  raw.org_type = features[3] >= 0.5 ? 1.0 : 0.0;
  raw.encyclopedic = features[4];
  raw.depth = features[5];
  raw.avg_duration_months = features[6] * cfg.cap_duration_months;
  raw.citation_freq = 1.0 - features[7];
  raw.pub_rate = features[8] * cfg.cap_pub_rate;
  raw.ext_funding = features[9];
  raw.interdisc_collab = features[10];
  raw.network_activity = features[11];
  raw.true_introversion = true_introversion;
  return raw;
}

}  // namespace introscore
