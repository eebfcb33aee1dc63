#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace introscore {

inline constexpr std::size_t kFeatureCount = 12;

/// Static description of one regressor: its 1-based position (shared by
/// every module), a short name, the Greek weight it pairs with in the
/// linear score, and the sign of that term.
struct FeatureInfo {
  int id;
  std::string_view name;
  std::string_view weight_key;
  int sign;
};

inline constexpr std::array<FeatureInfo, kFeatureCount> kFeatures{{
    {1, "solo_share", "alpha", +1},
    {2, "conf_rate", "beta", -1},
    {3, "inv_job_rating", "gamma", +1},
    {4, "org_type", "delta", +1},
    {5, "encyclopedic", "epsilon", +1},
    {6, "depth", "zeta", +1},
    {7, "duration", "eta", +1},
    {8, "inv_citation_freq", "theta", +1},
    {9, "pub_rate", "iota", -1},
    {10, "ext_funding", "kappa", -1},
    {11, "interdisc_collab", "lambda", -1},
    {12, "network_activity", "mu", -1},
}};

/// Sign of term `index` (0-based) in the linear score.
inline constexpr int term_sign(std::size_t index) { return kFeatures[index].sign; }

/// Raw scientometric observables for one scientist. Numeric fields are held
/// as doubles so that malformed values survive decoding and can be reported
/// by validate() instead of being rejected or silently coerced.
struct RawProfile {
  std::string id;
  double solo_pubs = 0.0;            // PS, integer count, 0 <= PS <= PT
  double total_pubs = 1.0;           // PT, integer count, >= 1
  double conf_per_year = 0.0;        // C, conferences attended per year
  double job_rating = 0.0;           // R in [0,1], 1 = highest rank
  double org_type = 0.0;             // A, exactly 1 (academic inst.) or 0 (university)
  double encyclopedic = 0.0;         // D in [0,1]
  double depth = 0.0;                // G in [0,1]
  double avg_duration_months = 0.0;  // T, months
  double citation_freq = 0.0;        // F_c in [0,1]
  double pub_rate = 0.0;             // R_p, publications per year
  double ext_funding = 0.0;          // F_e in [0,1]
  double interdisc_collab = 0.0;     // C_d in [0,1]
  double network_activity = 0.0;     // N_s in [0,1]
  std::optional<double> true_introversion;  // ground-truth label in [0,1]
};

/// Caps for the unbounded observables. Values above a cap clamp to it before
/// division, so all regressors land in [0,1].
struct NormConfig {
  double cap_conf_per_year = 10.0;
  double cap_duration_months = 60.0;
  double cap_pub_rate = 20.0;
};

/// The 12 regressors in fixed table order. Inversions (1-R, 1-F_c) are
/// already applied, so weights multiply ready values.
struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

struct FieldViolation {
  std::string field;
  std::string constraint;
};

struct ValidationResult {
  std::vector<FieldViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks every RawProfile invariant. Violations are data, not failures:
/// arbitrary decoded input is accepted and each broken constraint is named.
ValidationResult validate(const RawProfile& raw);

/// Throws ValidationError unless all caps are strictly positive and finite.
void check_norm_config(const NormConfig& cfg);

/// Maps a valid profile onto the 12 regressors:
///   x1 = PS/PT, x2 = min(C,cap)/cap, x3 = 1-R, x4 = A, x5 = D, x6 = G,
///   x7 = min(T,cap)/cap, x8 = 1-F_c, x9 = min(R_p,cap)/cap, x10 = F_e,
///   x11 = C_d, x12 = N_s.
/// Throws ValidationError (listing the violations) on an invalid profile.
FeatureVector normalize(const RawProfile& raw, const NormConfig& cfg = {});

/// Denominator used when materializing a solo-publication share as an
/// integer ratio; the share is quantized to 1e-6.
inline constexpr double kSoloShareDenominator = 1000000.0;

/// Inverse of normalize, used to materialize synthetic feature rows in the
/// raw-profile schema. Two fields are lossy by construction: solo_share is
/// quantized to kSoloShareDenominator, and org_type is binarized at 0.5.
RawProfile to_raw_profile(const FeatureVector& features, std::string id,
                          std::optional<double> true_introversion = std::nullopt,
                          const NormConfig& cfg = {});

}  // namespace introscore
