#include "rbig/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rbig/errors.hpp"

namespace rbig {

using ojson = nlohmann::ordered_json;

double relative_abs_error_percent(Nats estimate, Nats truth) {
  return 100.0 * std::abs(estimate - truth) / std::abs(truth);
}

void ExperimentReport::recompute_aggregate() {
  n_trials = static_cast<int>(trials.size());
  if (trials.empty()) {
    mean_rel_mae = std_rel_mae = 0.0;
    return;
  }
  double sum = 0.0;
  for (const auto& t : trials) sum += t.relative_abs_error_percent;
  mean_rel_mae = sum / static_cast<double>(trials.size());
  double ss = 0.0;
  for (const auto& t : trials) ss += (t.relative_abs_error_percent - mean_rel_mae) * (t.relative_abs_error_percent - mean_rel_mae);
  std_rel_mae = trials.size() > 1 ? std::sqrt(ss / static_cast<double>(trials.size() - 1)) : 0.0;
}

ReportFormat parse_report_format(const std::string& text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  throw UsageError("unknown report format '" + text + "' (expected json or csv)");
}

namespace {

ojson config_json(const RbigConfig& c) {
  return ojson{{"rotation_kind", to_string(c.rotation)},
               {"max_layers", c.max_layers},
               {"patience", c.patience},
               {"noise_floor_multiplier", c.noise_floor_multiplier},
               {"noise_floor_repeats", c.noise_floor_repeats},
               {"entropy_estimator", to_string(c.entropy.estimator)},
               {"entropy_bins", c.entropy.bins},
               {"delta_reference", to_string(c.delta_reference)},
               {"subtract_null_bias", c.subtract_null_bias}};
}

RbigConfig config_from(const ojson& j) {
  RbigConfig c;
  c.rotation = parse_rotation_kind(j.at("rotation_kind").get<std::string>());
  c.max_layers = j.at("max_layers").get<int>();
  c.patience = j.at("patience").get<int>();
  c.noise_floor_multiplier = j.at("noise_floor_multiplier").get<double>();
  c.noise_floor_repeats = j.at("noise_floor_repeats").get<int>();
  c.entropy.estimator = parse_entropy_estimator(j.at("entropy_estimator").get<std::string>());
  c.entropy.bins = j.at("entropy_bins").get<int>();
  c.delta_reference = parse_delta_reference(j.at("delta_reference").get<std::string>());
  c.subtract_null_bias = j.at("subtract_null_bias").get<bool>();
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::string params_text(const std::map<std::string, double>& params) {
  // "key=value;key=value" keeps the CSV a flat table
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + '=' + fmt(v);
  }
  return out;
}

}  // namespace

std::string reports_to_json(const std::vector<ExperimentReport>& reports, const EmitOptions& options) {
  ojson all = ojson::array();
  for (const auto& r : reports) {
    ojson trials = ojson::array();
    for (const auto& t : r.trials) {
      trials.push_back({{"trial", t.trial},
                        {"seed", t.seed},
                        {"estimate", t.estimate},
                        {"truth", t.truth},
                        {"relative_abs_error_percent", t.relative_abs_error_percent},
                        {"wall_time", options.include_timing ? t.wall_time : 0.0},
                        {"n_layers_used", t.n_layers_used},
                        {"noise_floor", t.noise_floor}});
    }
    ojson params = ojson::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    all.push_back({{"measure", to_string(r.measure)},
                   {"family", to_string(r.family)},
                   {"params", std::move(params)},
                   {"truth_kind", to_string(r.truth_kind)},
                   {"dims", r.dims},
                   {"n_samples", r.n_samples},
                   {"n_trials", r.n_trials},
                   {"estimator_id", to_string(r.estimator_id)},
                   {"seed", r.seed},
                   {"tool_version", r.tool_version},
                   {"config", config_json(r.config)},
                   {"trials", std::move(trials)},
                   {"aggregate", {{"mean_rel_mae", r.mean_rel_mae}, {"std_rel_mae", r.std_rel_mae}}}});
  }
  return all.dump(2) + "\n";
}

std::vector<ExperimentReport> reports_from_json(const std::string& text) {
  std::vector<ExperimentReport> out;
  try {
    const auto all = ojson::parse(text);
    for (const auto& j : all) {
      ExperimentReport r;
      r.measure = parse_measure(j.at("measure").get<std::string>());
      r.family = parse_family(j.at("family").get<std::string>());
      for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<double>();
      r.truth_kind = j.at("truth_kind").get<std::string>() == "analytic" ? TruthKind::analytic
                                                                         : TruthKind::semi_analytic_mc;
      r.dims = j.at("dims").get<int>();
      r.n_samples = j.at("n_samples").get<long>();
      r.n_trials = j.at("n_trials").get<int>();
      r.estimator_id = parse_estimator_id(j.at("estimator_id").get<std::string>());
      r.seed = j.at("seed").get<std::uint64_t>();
      r.tool_version = j.at("tool_version").get<std::string>();
      r.config = config_from(j.at("config"));
      for (const auto& jt : j.at("trials")) {
        TrialRecord t;
        t.trial = jt.at("trial").get<int>();
        t.seed = jt.at("seed").get<std::uint64_t>();
        t.estimate = jt.at("estimate").get<double>();
        t.truth = jt.at("truth").get<double>();
        t.relative_abs_error_percent = jt.at("relative_abs_error_percent").get<double>();
        t.wall_time = jt.at("wall_time").get<double>();
        t.n_layers_used = jt.at("n_layers_used").get<int>();
        t.noise_floor = jt.at("noise_floor").get<double>();
        r.trials.push_back(t);
      }
      r.mean_rel_mae = j.at("aggregate").at("mean_rel_mae").get<double>();
      r.std_rel_mae = j.at("aggregate").at("std_rel_mae").get<double>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return out;
}

const std::vector<std::string>& report_csv_header() {
  static const std::vector<std::string> header{
      "measure", "family",   "params",   "truth_kind", "dims",     "n_samples", "n_trials",
      "estimator_id", "seed", "tool_version", "trial", "trial_seed", "estimate", "truth",
      "relative_abs_error_percent", "wall_time", "n_layers_used", "noise_floor", "mean_rel_mae",
      "std_rel_mae"};
  return header;
}

std::string reports_to_csv(const std::vector<ExperimentReport>& reports, const EmitOptions& options) {
  std::ostringstream os;
  const auto& header = report_csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : reports) {
    for (const auto& t : r.trials) {
      os << to_string(r.measure) << ',' << to_string(r.family) << ',' << params_text(r.params) << ','
         << to_string(r.truth_kind) << ',' << r.dims << ',' << r.n_samples << ',' << r.n_trials << ','
         << to_string(r.estimator_id) << ',' << r.seed << ',' << r.tool_version << ',' << t.trial << ','
         << t.seed << ',' << fmt(t.estimate) << ',' << fmt(t.truth) << ',' << fmt(t.relative_abs_error_percent)
         << ',' << fmt(options.include_timing ? t.wall_time : 0.0) << ',' << t.n_layers_used << ','
         << fmt(t.noise_floor) << ',' << fmt(r.mean_rel_mae) << ',' << fmt(r.std_rel_mae) << '\n';
    }
  }
  return os.str();
}

void emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format, const std::string& path,
                 const EmitOptions& options) {
  if (reports.empty()) throw UsageError("no reports to emit");
  const std::string text =
      format == ReportFormat::json ? reports_to_json(reports, options) : reports_to_csv(reports, options);
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string estimate_to_json(const EstimateRecord& record, const EmitOptions& options) {
  ojson j{{"measure", to_string(record.measure)},
          {"estimator_id", to_string(record.estimate.estimator_id)},
          {"value", record.estimate.value},
          {"unit", "nats"},
          {"dims", record.dims},
          {"n_samples", record.n_samples},
          {"wall_time", options.include_timing ? record.estimate.wall_time : 0.0}};
  if (record.estimate.estimator_id == EstimatorId::rbig) {
    j["n_layers_used"] = record.estimate.n_layers_used;
    j["noise_floor"] = record.estimate.noise_floor;
    j["rng_seed"] = record.config.rng_seed;
    j["config"] = config_json(record.config);
  }
  return j.dump() + "\n";
}

}  // namespace rbig
