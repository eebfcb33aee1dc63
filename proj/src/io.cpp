#include "introscore/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "introscore/errors.hpp"
#include "introscore/version.hpp"

namespace introscore {

namespace {

constexpr std::array<std::string_view, 14> kProfileColumns{
    "id",
    "solo_pubs",
    "total_pubs",
    "conf_per_year",
    "job_rating",
    "org_type",
    "encyclopedic",
    "depth",
    "avg_duration_months",
    "citation_freq",
    "pub_rate",
    "ext_funding",
    "interdisc_collab",
    "network_activity",
};
constexpr std::string_view kTruthColumn = "true_introversion";

[[noreturn]] void fail(const std::string& message) {
  throw ValidationError(message);
}

std::string row_context(const std::filesystem::path& path, std::size_t row) {
  std::ostringstream ctx;
  ctx << path.string() << ", row " << row;
  return ctx.str();
}

// Splits one physical CSV line into fields. Quoted fields may contain commas
// and doubled quotes; newlines inside fields are not supported.
std::vector<std::string> split_csv_line(const std::string& line,
                                        const std::string& context) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  std::size_t i = 0;
  const std::size_t n = line.size();
  bool field_quoted = false;
  while (i < n) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && line[i + 1] == '"') {
          current.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      current.push_back(c);
      ++i;
      continue;
    }
    if (c == '"') {
      if (!current.empty() || field_quoted) {
        fail(context + ": unexpected quote inside unquoted field");
      }
      in_quotes = true;
      field_quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      field_quoted = false;
      ++i;
      continue;
    }
    current.push_back(c);
    ++i;
  }
  if (in_quotes) fail(context + ": unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

std::string csv_escape(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos ||
      (!field.empty() && field.front() == '#');
  if (!needs_quotes) return field;
  std::string quoted = "\"";
  for (const char c : field) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

// Reads lines, strips trailing \r, drops '#' comment lines and blank lines.
std::vector<std::string> read_data_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path.string() + ": cannot open for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path.string() + ": cannot open for writing");
  return out;
}

void require_version(const nlohmann::json& doc, const std::string& context) {
  if (!doc.is_object()) fail(context + ": expected a JSON object");
  const auto it = doc.find("format_version");
  if (it == doc.end()) fail(context + ": missing format_version");
  if (!it->is_string() || it->get<std::string>() != kFormatVersion) {
    fail(context + ": unsupported format_version (expected \"" +
         std::string(kFormatVersion) + "\")");
  }
}

double require_number(const nlohmann::json& doc, const std::string& key,
                      const std::string& context) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(context + ": missing field '" + key + "'");
  if (!it->is_number()) fail(context + ": field '" + key + "' must be a number");
  return it->get<double>();
}

double optional_number(const nlohmann::json& doc, const std::string& key,
                       double fallback, const std::string& context) {
  const auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number()) fail(context + ": field '" + key + "' must be a number");
  return it->get<double>();
}

std::uint64_t require_unsigned(const nlohmann::json& doc, const std::string& key,
                               const std::string& context) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(context + ": missing field '" + key + "'");
  if (!it->is_number_unsigned()) {
    fail(context + ": field '" + key + "' must be a nonnegative integer");
  }
  return it->get<std::uint64_t>();
}

std::string require_string(const nlohmann::json& doc, const std::string& key,
                           const std::string& context) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(context + ": missing field '" + key + "'");
  if (!it->is_string()) fail(context + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

nlohmann::json factors_to_json(std::span<const FactorParams> factors) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& p : factors) {
    nlohmann::json entry;
    entry["slope"] = p.slope;
    entry["intercept"] = p.intercept;
    entry["sigma"] = p.sigma;
    obj[std::to_string(p.factor_id)] = std::move(entry);
  }
  return obj;
}

std::vector<FactorParams> factors_from_json(const nlohmann::json& obj,
                                            const std::string& context) {
  if (!obj.is_object()) fail(context + ": 'factors' must be an object");
  std::vector<FactorParams> factors;
  factors.reserve(obj.size());
  for (const auto& [key, value] : obj.items()) {
    FactorParams params;
    int id = 0;
    const auto [ptr, ec] =
        std::from_chars(key.data(), key.data() + key.size(), id);
    if (ec != std::errc() || ptr != key.data() + key.size()) {
      fail(context + ": factor key '" + key + "' is not an integer");
    }
    const std::string factor_ctx = context + ", factor " + key;
    params.factor_id = id;
    params.slope = require_number(value, "slope", factor_ctx);
    params.intercept = require_number(value, "intercept", factor_ctx);
    params.sigma = require_number(value, "sigma", factor_ctx);
    try {
      check_factor_params(params);
    } catch (const ValidationError& e) {
      fail(context + ": " + e.what());
    }
    factors.push_back(params);
  }
  std::sort(factors.begin(), factors.end(),
            [](const FactorParams& a, const FactorParams& b) {
              return a.factor_id < b.factor_id;
            });
  return factors;
}

RawProfile profile_from_fields(const std::vector<std::string>& fields,
                               const std::vector<std::size_t>& column_of,
                               std::optional<std::size_t> truth_index,
                               const std::string& context) {
  const auto field = [&](std::size_t col) -> const std::string& {
    return fields[column_of[col]];
  };
  const auto number = [&](std::size_t col) {
    return parse_double(field(col),
                        context + ", column " + std::string(kProfileColumns[col]));
  };
  RawProfile raw;
  raw.id = field(0);
  raw.solo_pubs = number(1);
  raw.total_pubs = number(2);
  raw.conf_per_year = number(3);
  raw.job_rating = number(4);
  raw.org_type = number(5);
  raw.encyclopedic = number(6);
  raw.depth = number(7);
  raw.avg_duration_months = number(8);
  raw.citation_freq = number(9);
  raw.pub_rate = number(10);
  raw.ext_funding = number(11);
  raw.interdisc_collab = number(12);
  raw.network_activity = number(13);
  if (truth_index) {
    const std::string& cell = fields[*truth_index];
    if (!cell.empty()) {
      raw.true_introversion = parse_double(
          cell, context + ", column " + std::string(kTruthColumn));
    }
  }
  return raw;
}

void append_profile_fields(std::vector<std::string>& fields,
                           const RawProfile& raw) {
  fields.push_back(csv_escape(raw.id));
  fields.push_back(format_double(raw.solo_pubs));
  fields.push_back(format_double(raw.total_pubs));
  fields.push_back(format_double(raw.conf_per_year));
  fields.push_back(format_double(raw.job_rating));
  fields.push_back(format_double(raw.org_type));
  fields.push_back(format_double(raw.encyclopedic));
  fields.push_back(format_double(raw.depth));
  fields.push_back(format_double(raw.avg_duration_months));
  fields.push_back(format_double(raw.citation_freq));
  fields.push_back(format_double(raw.pub_rate));
  fields.push_back(format_double(raw.ext_funding));
  fields.push_back(format_double(raw.interdisc_collab));
  fields.push_back(format_double(raw.network_activity));
}

nlohmann::json profile_to_json_record(const RawProfile& raw) {
  nlohmann::json rec;
  rec["id"] = raw.id;
  rec["solo_pubs"] = raw.solo_pubs;
  rec["total_pubs"] = raw.total_pubs;
  rec["conf_per_year"] = raw.conf_per_year;
  rec["job_rating"] = raw.job_rating;
  rec["org_type"] = raw.org_type;
  rec["encyclopedic"] = raw.encyclopedic;
  rec["depth"] = raw.depth;
  rec["avg_duration_months"] = raw.avg_duration_months;
  rec["citation_freq"] = raw.citation_freq;
  rec["pub_rate"] = raw.pub_rate;
  rec["ext_funding"] = raw.ext_funding;
  rec["interdisc_collab"] = raw.interdisc_collab;
  rec["network_activity"] = raw.network_activity;
  if (raw.true_introversion) rec["true_introversion"] = *raw.true_introversion;
  return rec;
}

}  // namespace

RunManifest make_manifest(std::string command,
                          std::vector<std::string> input_paths,
                          std::vector<std::string> parameter_paths,
                          std::optional<std::uint64_t> seed) {
  RunManifest manifest;
  manifest.command = std::move(command);
  manifest.input_paths = std::move(input_paths);
  manifest.parameter_paths = std::move(parameter_paths);
  manifest.seed = seed;
  manifest.tool_version = kToolVersion;
  manifest.format_version = kFormatVersion;
  return manifest;
}

nlohmann::json manifest_to_json(const RunManifest& manifest) {
  nlohmann::json doc;
  doc["command"] = manifest.command;
  doc["input_paths"] = manifest.input_paths;
  doc["parameter_paths"] = manifest.parameter_paths;
  if (manifest.seed) {
    doc["seed"] = *manifest.seed;
  } else {
    doc["seed"] = nullptr;
  }
  doc["tool_version"] = manifest.tool_version;
  doc["format_version"] = manifest.format_version;
  return doc;
}

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    if (std::isnan(value)) return "nan";
    return value > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf;
  // 2^53: integral doubles up to here have exact integer text.
  if (value == std::floor(value) && std::abs(value) <= 9007199254740992.0) {
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                         static_cast<long long>(value));
    if (ec != std::errc()) throw NumericError("double formatting failed");
    return std::string(buf.data(), ptr);
  }
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw NumericError("double formatting failed");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  if (text.empty()) fail(context + ": empty value where a number is required");
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(context + ": not a valid number: '" + std::string(text) + "'");
  }
  return value;
}

ProfileTable read_profiles_csv(const std::filesystem::path& path) {
  const auto lines = read_data_lines(path);
  if (lines.empty()) fail(path.string() + ": missing header row");

  const auto header = split_csv_line(lines[0], path.string() + ", header");
  std::vector<std::size_t> column_of(kProfileColumns.size(),
                                     header.size());  // sentinel: not found
  std::optional<std::size_t> truth_index;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string& name = header[j];
    if (name == kTruthColumn) {
      if (truth_index) fail(path.string() + ": duplicate column " + name);
      truth_index = j;
      continue;
    }
    const auto it =
        std::find(kProfileColumns.begin(), kProfileColumns.end(), name);
    if (it == kProfileColumns.end()) {
      fail(path.string() + ": unknown column '" + name + "'");
    }
    const std::size_t col =
        static_cast<std::size_t>(it - kProfileColumns.begin());
    if (column_of[col] != header.size()) {
      fail(path.string() + ": duplicate column " + name);
    }
    column_of[col] = j;
  }
  for (std::size_t col = 0; col < kProfileColumns.size(); ++col) {
    if (column_of[col] == header.size()) {
      fail(path.string() + ": missing column " +
           std::string(kProfileColumns[col]));
    }
  }

  ProfileTable table;
  table.has_truth_column = truth_index.has_value();
  table.rows.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string context = row_context(path, r);
    const auto fields = split_csv_line(lines[r], context);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << context << ": expected " << header.size() << " fields, got "
          << fields.size();
      fail(msg.str());
    }
    table.rows.push_back(
        profile_from_fields(fields, column_of, truth_index, context));
  }
  return table;
}

std::string profiles_csv_string(const ProfileTable& table,
                                const RunManifest* manifest) {
  std::ostringstream out;
  if (manifest) {
    out << "# manifest " << manifest_to_json(*manifest).dump() << "\n";
  }
  for (std::size_t col = 0; col < kProfileColumns.size(); ++col) {
    if (col > 0) out << ',';
    out << kProfileColumns[col];
  }
  if (table.has_truth_column) out << ',' << kTruthColumn;
  out << "\n";
  for (const auto& raw : table.rows) {
    std::vector<std::string> fields;
    fields.reserve(kProfileColumns.size() + 1);
    append_profile_fields(fields, raw);
    if (table.has_truth_column) {
      fields.push_back(raw.true_introversion
                           ? format_double(*raw.true_introversion)
                           : std::string());
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j > 0) out << ',';
      out << fields[j];
    }
    out << "\n";
  }
  return out.str();
}

void write_profiles_csv(const ProfileTable& table,
                        const std::filesystem::path& path,
                        const RunManifest* manifest) {
  auto out = open_for_writing(path);
  out << profiles_csv_string(table, manifest);
  if (!out) fail(path.string() + ": write failed");
}

nlohmann::json profiles_to_json(const ProfileTable& table) {
  nlohmann::json doc;
  doc["format_version"] = std::string(kFormatVersion);
  nlohmann::json records = nlohmann::json::array();
  for (const auto& raw : table.rows) {
    records.push_back(profile_to_json_record(raw));
  }
  doc["profiles"] = std::move(records);
  return doc;
}

ProfileTable profiles_from_json(const nlohmann::json& doc,
                                const std::string& context) {
  require_version(doc, context);
  const auto it = doc.find("profiles");
  if (it == doc.end() || !it->is_array()) {
    fail(context + ": missing 'profiles' array");
  }
  ProfileTable table;
  table.rows.reserve(it->size());
  std::size_t index = 0;
  for (const auto& rec : *it) {
    ++index;
    std::ostringstream ctx;
    ctx << context << ", record " << index;
    const std::string rec_ctx = ctx.str();
    if (!rec.is_object()) fail(rec_ctx + ": expected an object");
    RawProfile raw;
    raw.id = require_string(rec, "id", rec_ctx);
    raw.solo_pubs = require_number(rec, "solo_pubs", rec_ctx);
    raw.total_pubs = require_number(rec, "total_pubs", rec_ctx);
    raw.conf_per_year = require_number(rec, "conf_per_year", rec_ctx);
    raw.job_rating = require_number(rec, "job_rating", rec_ctx);
    raw.org_type = require_number(rec, "org_type", rec_ctx);
    raw.encyclopedic = require_number(rec, "encyclopedic", rec_ctx);
    raw.depth = require_number(rec, "depth", rec_ctx);
    raw.avg_duration_months = require_number(rec, "avg_duration_months", rec_ctx);
    raw.citation_freq = require_number(rec, "citation_freq", rec_ctx);
    raw.pub_rate = require_number(rec, "pub_rate", rec_ctx);
    raw.ext_funding = require_number(rec, "ext_funding", rec_ctx);
    raw.interdisc_collab = require_number(rec, "interdisc_collab", rec_ctx);
    raw.network_activity = require_number(rec, "network_activity", rec_ctx);
    if (rec.contains("true_introversion")) {
      raw.true_introversion = require_number(rec, "true_introversion", rec_ctx);
      table.has_truth_column = true;
    }
    table.rows.push_back(std::move(raw));
  }
  return table;
}

ProfileTable read_profiles_json(const std::filesystem::path& path) {
  return profiles_from_json(read_json_file(path), path.string());
}

ProfileTable read_profiles_auto(const std::filesystem::path& path) {
  if (path.extension() == ".json") return read_profiles_json(path);
  return read_profiles_csv(path);
}

LabeledCohort cohort_from_profiles(const ProfileTable& table,
                                   const NormConfig& cfg,
                                   std::string provenance) {
  LabeledCohort cohort;
  cohort.provenance = std::move(provenance);
  cohort.rows.reserve(table.rows.size());
  std::size_t index = 0;
  for (const auto& raw : table.rows) {
    ++index;
    if (!raw.true_introversion) {
      std::ostringstream msg;
      msg << "row " << index << " (id '" << raw.id
          << "'): missing true_introversion label";
      fail(msg.str());
    }
    LabeledRow row;
    try {
      row.features = normalize(raw, cfg);
    } catch (const ValidationError& e) {
      std::ostringstream msg;
      msg << "row " << index << " (id '" << raw.id << "'): " << e.what();
      fail(msg.str());
    }
    row.label = *raw.true_introversion;
    cohort.rows.push_back(std::move(row));
  }
  return cohort;
}

ProfileTable cohort_to_profiles(const LabeledCohort& cohort,
                                const NormConfig& cfg) {
  ProfileTable table;
  table.has_truth_column = true;
  table.rows.reserve(cohort.rows.size());
  std::size_t index = 0;
  for (const auto& row : cohort.rows) {
    ++index;
    std::ostringstream id;
    id << "synth-" << std::setw(6) << std::setfill('0') << index;
    table.rows.push_back(
        to_raw_profile(row.features, id.str(), row.label, cfg));
  }
  return table;
}

nlohmann::json weights_to_json(const LinearWeights& weights) {
  nlohmann::json doc;
  doc["format_version"] = std::string(kFormatVersion);
  nlohmann::json magnitudes;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    magnitudes[std::string(kFeatures[i].weight_key)] = weights.magnitudes[i];
  }
  doc["weights"] = std::move(magnitudes);
  doc["noise_sigma"] = weights.noise_sigma;
  doc["intercept"] = weights.intercept;
  return doc;
}

LinearWeights weights_from_json(const nlohmann::json& doc) {
  const std::string context = "weights document";
  require_version(doc, context);
  const auto it = doc.find("weights");
  if (it == doc.end() || !it->is_object()) {
    fail(context + ": missing 'weights' object");
  }
  LinearWeights weights;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    weights.magnitudes[i] =
        require_number(*it, std::string(kFeatures[i].weight_key), context);
  }
  for (const auto& [key, value] : it->items()) {
    const bool known = std::any_of(
        kFeatures.begin(), kFeatures.end(),
        [&key](const FeatureInfo& f) { return f.weight_key == key; });
    if (!known) fail(context + ": unknown weight key '" + key + "'");
  }
  weights.noise_sigma = optional_number(doc, "noise_sigma", 0.0, context);
  weights.intercept = optional_number(doc, "intercept", 0.0, context);
  check_weights(weights);
  return weights;
}

LinearWeights read_weights_json(const std::filesystem::path& path) {
  return weights_from_json(read_json_file(path));
}

nlohmann::json factor_model_to_json(const FactorModel& model) {
  nlohmann::json doc;
  doc["format_version"] = std::string(kFormatVersion);
  doc["factors"] = factors_to_json(model.factors);
  doc["prior"] = prior_to_json(model.prior);
  return doc;
}

FactorModel factor_model_from_json(const nlohmann::json& doc) {
  const std::string context = "factor model document";
  require_version(doc, context);
  const auto it = doc.find("factors");
  if (it == doc.end()) fail(context + ": missing 'factors' object");
  FactorModel model;
  model.factors = factors_from_json(*it, context);
  if (model.factors.empty()) fail(context + ": 'factors' must be non-empty");
  const auto prior_it = doc.find("prior");
  if (prior_it == doc.end()) fail(context + ": missing 'prior' object");
  model.prior = prior_from_json(*prior_it);
  return model;
}

FactorModel read_factor_model_json(const std::filesystem::path& path) {
  try {
    return factor_model_from_json(read_json_file(path));
  } catch (const ValidationError& e) {
    fail(path.string() + ": " + e.what());
  }
}

nlohmann::json prior_to_json(const Prior& prior) {
  nlohmann::json doc;
  if (prior.kind == PriorKind::kUniform) {
    doc["kind"] = "uniform";
  } else {
    doc["kind"] = "normal";
    doc["mu"] = prior.mu;
    doc["sigma"] = prior.sigma;
  }
  return doc;
}

Prior prior_from_json(const nlohmann::json& doc) {
  const std::string context = "prior";
  if (!doc.is_object()) fail(context + ": expected a JSON object");
  const std::string kind = require_string(doc, "kind", context);
  if (kind == "uniform") return Prior::uniform();
  if (kind == "normal") {
    const Prior prior = Prior::normal(require_number(doc, "mu", context),
                                      require_number(doc, "sigma", context));
    check_prior(prior);
    return prior;
  }
  fail(context + ": unknown kind '" + kind + "' (expected uniform or normal)");
}

Prior parse_prior_spec(const std::string& spec) {
  if (spec == "uniform") return Prior::uniform();
  const std::string prefix = "normal:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string rest = spec.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      fail("prior spec '" + spec + "': expected normal:<mu>:<sigma>");
    }
    const Prior prior =
        Prior::normal(parse_double(rest.substr(0, colon), "prior mu"),
                      parse_double(rest.substr(colon + 1), "prior sigma"));
    check_prior(prior);
    return prior;
  }
  fail("prior spec '" + spec + "': expected 'uniform' or 'normal:<mu>:<sigma>'");
}

nlohmann::json gen_config_to_json(const GenConfig& cfg) {
  nlohmann::json doc;
  doc["format_version"] = std::string(kFormatVersion);
  doc["n"] = cfg.n;
  doc["seed"] = cfg.seed;
  doc["prior"] = prior_to_json(cfg.prior);
  doc["factors"] = factors_to_json(cfg.factor_params);
  doc["clamp_features"] = cfg.clamp_features;
  doc["neutral_fill"] = cfg.neutral_fill;
  return doc;
}

GenConfig gen_config_from_json(const nlohmann::json& doc) {
  const std::string context = "generator config";
  require_version(doc, context);
  GenConfig cfg;
  cfg.n = static_cast<std::size_t>(require_unsigned(doc, "n", context));
  cfg.seed = require_unsigned(doc, "seed", context);
  const auto prior_it = doc.find("prior");
  if (prior_it == doc.end()) fail(context + ": missing 'prior' object");
  cfg.prior = prior_from_json(*prior_it);
  const auto factors_it = doc.find("factors");
  if (factors_it == doc.end()) fail(context + ": missing 'factors' object");
  cfg.factor_params = factors_from_json(*factors_it, context);
  if (const auto it = doc.find("clamp_features"); it != doc.end()) {
    if (!it->is_boolean()) fail(context + ": 'clamp_features' must be a boolean");
    cfg.clamp_features = it->get<bool>();
  }
  cfg.neutral_fill = optional_number(doc, "neutral_fill", 0.5, context);
  check_gen_config(cfg);
  return cfg;
}

GenConfig read_gen_config_json(const std::filesystem::path& path) {
  try {
    return gen_config_from_json(read_json_file(path));
  } catch (const ValidationError& e) {
    fail(path.string() + ": " + e.what());
  }
}

NormConfig norm_config_from_json(const nlohmann::json& doc) {
  const std::string context = "normalization config";
  require_version(doc, context);
  NormConfig cfg;
  cfg.cap_conf_per_year =
      optional_number(doc, "cap_conf_per_year", cfg.cap_conf_per_year, context);
  cfg.cap_duration_months = optional_number(doc, "cap_duration_months",
                                            cfg.cap_duration_months, context);
  cfg.cap_pub_rate =
      optional_number(doc, "cap_pub_rate", cfg.cap_pub_rate, context);
  check_norm_config(cfg);
  return cfg;
}

NormConfig read_norm_config_json(const std::filesystem::path& path) {
  try {
    return norm_config_from_json(read_json_file(path));
  } catch (const ValidationError& e) {
    fail(path.string() + ": " + e.what());
  }
}

nlohmann::json recovery_report_to_json(const RecoveryReport& report) {
  nlohmann::json doc;
  doc["estimator"] = report.estimator_name;
  doc["n"] = report.n;
  doc["rmse"] = report.rmse;
  if (report.pearson_r) {
    doc["pearson_r"] = *report.pearson_r;
  } else {
    doc["pearson_r"] = nullptr;
  }
  doc["mean_bias"] = report.mean_bias;
  return doc;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path.string() + ": cannot open for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path.string() + ": JSON parse error: " + e.what());
  }
}

void write_json_file(const nlohmann::json& doc,
                     const std::filesystem::path& path) {
  auto out = open_for_writing(path);
  out << doc.dump(2) << "\n";
  if (!out) fail(path.string() + ": write failed");
}

void write_density_csv(const Posterior& posterior,
                       const std::filesystem::path& path,
                       const RunManifest& manifest) {
  auto out = open_for_writing(path);
  out << "# manifest " << manifest_to_json(manifest).dump() << "\n";
  out << "I,density\n";
  for (std::size_t i = 0; i < posterior.grid.size(); ++i) {
    out << format_double(posterior.grid[i]) << ','
        << format_double(posterior.density[i]) << "\n";
  }
  if (!out) fail(path.string() + ": write failed");
}

std::vector<std::pair<double, double>> read_density_csv(
    const std::filesystem::path& path) {
  const auto lines = read_data_lines(path);
  if (lines.empty() || lines[0] != "I,density") {
    fail(path.string() + ": expected header 'I,density'");
  }
  std::vector<std::pair<double, double>> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string context = row_context(path, r);
    const auto fields = split_csv_line(lines[r], context);
    if (fields.size() != 2) fail(context + ": expected 2 fields");
    rows.emplace_back(parse_double(fields[0], context + ", column I"),
                      parse_double(fields[1], context + ", column density"));
  }
  return rows;
}

nlohmann::json posterior_summary_to_json(const Posterior& posterior) {
  nlohmann::json doc;
  doc["map"] = posterior.map;
  doc["map_on_boundary"] = posterior.map_on_boundary;
  doc["mean"] = posterior.mean;
  doc["variance"] = posterior.variance;
  doc["credible_interval_95"] = {
      {"lo", posterior.credible_interval_95.lo},
      {"hi", posterior.credible_interval_95.hi},
  };
  return doc;
}

}  // namespace introscore
