// Model documents, CSV ingestion and experiment reports.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "rbig/csv.hpp"
#include "rbig/errors.hpp"
#include "rbig/model_io.hpp"
#include "rbig/report.hpp"
#include "rbig/synth.hpp"

using rbig::DataMatrix;

namespace {

DataMatrix sample(long n, int d, std::uint64_t seed) {
  rbig::Rng rng(seed);
  return rbig::sample_student(d, n, 5.0, rng).data;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("rbig_test_" + name)).string();
}

rbig::ExperimentReport toy_report(int trials) {
  rbig::ExperimentReport r;
  r.measure = rbig::Measure::tc;
  r.family = rbig::Family::student;
  r.params = {{"nu", 20.0}, {"diagonal", 10.0}};
  r.dims = 3;
  r.n_samples = 1000;
  r.estimator_id = rbig::EstimatorId::rbig;
  r.seed = 0xFFFFFFFFFFFFFFFFULL;
  r.tool_version = "test";
  for (int t = 0; t < trials; ++t) {
    rbig::TrialRecord tr;
    tr.trial = t;
    tr.seed = 1000u + static_cast<unsigned>(t);
    tr.truth = 0.1 + t / 3.0;
    tr.estimate = tr.truth * (1.0 + 0.01 * (t + 1) / 7.0);
    tr.relative_abs_error_percent = rbig::relative_abs_error_percent(tr.estimate, tr.truth);
    tr.wall_time = 0.123 * (t + 1);
    tr.n_layers_used = 10 + t;
    tr.noise_floor = 1.0 / 3.0;
    r.trials.push_back(tr);
  }
  r.recompute_aggregate();
  return r;
}

}  // namespace

// ---- model documents ----------------------------------------------------

TEST(ModelIo, RoundTripIsBitExact) {
  const auto x = sample(2000, 3, 1);
  rbig::RbigConfig c;
  c.rng_seed = 77;
  const auto model = rbig::fit(x, c);
  const std::string text = rbig::model_to_json(model);
  EXPECT_NE(text.find("rbig-model/1"), std::string::npos);
  const auto back = rbig::model_from_json(text);
  ASSERT_EQ(back.layers.size(), model.layers.size());
  EXPECT_EQ(back.dims, model.dims);
  EXPECT_EQ(back.noise_floor, model.noise_floor);
  EXPECT_EQ(back.stop_reason, model.stop_reason);
  EXPECT_EQ(back.config.rng_seed, 77u);
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    EXPECT_EQ(back.layers[i].rotation, model.layers[i].rotation);
    EXPECT_EQ(back.layers[i].delta_t, model.layers[i].delta_t);
    for (std::size_t j = 0; j < model.layers[i].maps.size(); ++j) {
      EXPECT_EQ(back.layers[i].maps[j].knots_x(), model.layers[i].maps[j].knots_x());
      EXPECT_EQ(back.layers[i].maps[j].knots_p(), model.layers[i].maps[j].knots_p());
    }
  }
  EXPECT_EQ(rbig::transform(back, x), rbig::transform(model, x));
  EXPECT_EQ(rbig::model_to_json(back), text);

  const std::string path = temp_path("model.json");
  rbig::save_model(model, path);
  EXPECT_EQ(rbig::load_model(path).total_correlation(), model.total_correlation());
  std::filesystem::remove(path);
}

TEST(ModelIo, RejectsCorruptDocuments) {
  const auto model = rbig::fit(sample(500, 2, 2), rbig::RbigConfig{});
  const auto good = nlohmann::json::parse(rbig::model_to_json(model));

  auto expect_rejected = [](const nlohmann::json& doc, const char* why) {
    EXPECT_THROW(rbig::model_from_json(doc.dump()), rbig::ParseError) << why;
  };
  auto doc = good;
  doc["format"] = "rbig-model/2";
  expect_rejected(doc, "format tag");
  doc = good;
  doc["layers"][0]["rotation"][0] = 2.0;
  expect_rejected(doc, "non-orthogonal rotation");
  doc = good;
  auto& xs = doc["layers"][0]["maps"][0]["x"];
  std::swap(xs[0], xs[1]);
  expect_rejected(doc, "non-monotone knots");
  doc = good;
  doc["layers"][0]["maps"].erase(1);
  expect_rejected(doc, "missing map");
  doc = good;
  doc.erase("dims");
  expect_rejected(doc, "missing field");
  doc = good;
  doc["stop_reason"] = "bored";
  expect_rejected(doc, "stop reason");
  EXPECT_THROW(rbig::model_from_json("{not json"), rbig::ParseError);
  EXPECT_THROW(rbig::load_model(temp_path("does_not_exist.json")), std::runtime_error);
}

// ---- CSV ----------------------------------------------------------------

TEST(Csv, HeaderDetectionAndValues) {
  std::istringstream with("a,b\n1,2\n3.5,-4e-3\n\n");
  const auto t = rbig::read_csv(with);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.data.rows(), 2);
  EXPECT_EQ(t.data(1, 1), -4e-3);
  std::istringstream without("1,2\n3,4\n");
  const auto u = rbig::read_csv(without);
  EXPECT_TRUE(u.header.empty());
  EXPECT_EQ(u.data.rows(), 2);
}

TEST(Csv, MalformedCellNamesRowAndColumn) {
  std::istringstream in("x,y\n0.5,0.25\n1.0,abc\n");
  try {
    rbig::read_csv(in);
    FAIL() << "expected ParseError";
  } catch (const rbig::ParseError& e) {
    EXPECT_EQ(e.row(), 3);
    EXPECT_EQ(e.column(), 2);
    EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
  }
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(rbig::read_csv(ragged), rbig::ParseError);
  std::istringstream missing("1,2\n3,\n");
  EXPECT_THROW(rbig::read_csv(missing), rbig::ParseError);
  std::istringstream inf("1,2\n3,inf\n");
  EXPECT_THROW(rbig::read_csv(inf), rbig::ParseError);
}

TEST(Csv, WriteReadRoundTripsDoubles) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  DataMatrix x(50, 3);
  for (long i = 0; i < x.size(); ++i) x.data()[i] = z(rng) * std::pow(10.0, static_cast<double>(i % 7) - 3);
  std::stringstream io;
  rbig::write_csv(io, x, {"p", "q", "r"});
  const auto t = rbig::read_csv(io);
  EXPECT_EQ(t.header, (std::vector<std::string>{"p", "q", "r"}));
  EXPECT_EQ(t.data, x);
}

// ---- reports ------------------------------------------------------------

TEST(Report, RelativeError) {
  EXPECT_DOUBLE_EQ(rbig::relative_abs_error_percent(1.1, 1.0), 10.000000000000009);
  EXPECT_DOUBLE_EQ(rbig::relative_abs_error_percent(-0.5, -1.0), 50.0);
}

TEST(Report, AggregateIsMeanAndSampleSd) {
  auto r = toy_report(4);
  double m = 0;
  for (const auto& t : r.trials) m += t.relative_abs_error_percent;
  m /= 4;
  double ss = 0;
  for (const auto& t : r.trials) ss += (t.relative_abs_error_percent - m) * (t.relative_abs_error_percent - m);
  EXPECT_DOUBLE_EQ(r.mean_rel_mae, m);
  EXPECT_DOUBLE_EQ(r.std_rel_mae, std::sqrt(ss / 3));
  EXPECT_EQ(toy_report(1).std_rel_mae, 0.0);
}

TEST(Report, JsonReloadRecomputesTheSameAggregates) {
  const std::vector<rbig::ExperimentReport> reports{toy_report(5), toy_report(2)};
  auto back = rbig::reports_from_json(rbig::reports_to_json(reports));
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < back.size(); ++i) {
    const double stored_mean = back[i].mean_rel_mae, stored_sd = back[i].std_rel_mae;
    EXPECT_EQ(back[i].seed, reports[i].seed);
    EXPECT_EQ(back[i].params, reports[i].params);
    back[i].recompute_aggregate();
    EXPECT_NEAR(back[i].mean_rel_mae, stored_mean, 1e-12);
    EXPECT_NEAR(back[i].std_rel_mae, stored_sd, 1e-12);
    for (std::size_t t = 0; t < back[i].trials.size(); ++t)
      EXPECT_EQ(back[i].trials[t].estimate, reports[i].trials[t].estimate);
  }
  const auto doc = nlohmann::json::parse(rbig::reports_to_json(reports));
  ASSERT_TRUE(doc.is_array());
  for (const char* key : {"measure", "family", "params", "dims", "n_samples", "n_trials", "estimator_id", "seed",
                          "tool_version", "trials", "aggregate"})
    EXPECT_TRUE(doc[0].contains(key)) << key;
  EXPECT_THROW(rbig::reports_from_json("[{\"measure\": 3}]"), rbig::ParseError);
}

TEST(Report, CsvHasOneRowPerTrialAnd17Digits) {
  const auto csv = rbig::reports_to_csv({toy_report(5)});
  std::istringstream in(csv);
  std::string line;
  int lines = 0;
  std::getline(in, line);
  ++lines;
  std::size_t commas = std::count(line.begin(), line.end(), ',');
  EXPECT_EQ(commas + 1, rbig::report_csv_header().size());
  while (std::getline(in, line)) {
    ++lines;
    EXPECT_EQ(static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')), commas);
  }
  EXPECT_EQ(lines, 5 + 1);
  // 1/3 needs all 17 significant digits
  EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);
}

TEST(Report, TimingCanBeSuppressed) {
  const auto r = toy_report(3);
  const auto a = rbig::reports_to_json({r}, {.include_timing = false});
  auto r2 = r;
  for (auto& t : r2.trials) t.wall_time *= 9;
  EXPECT_EQ(rbig::reports_to_json({r2}, {.include_timing = false}), a);
  EXPECT_EQ(rbig::reports_to_csv({r2}, {.include_timing = false}), rbig::reports_to_csv({r}, {.include_timing = false}));
  EXPECT_NE(rbig::reports_to_json({r2}), rbig::reports_to_json({r}));
}

TEST(Report, EmitErrors) {
  EXPECT_THROW(rbig::emit_report({}, rbig::ReportFormat::json, "-"), rbig::UsageError);
  EXPECT_THROW(rbig::emit_report({toy_report(1)}, rbig::ReportFormat::csv, "/nonexistent-dir/x.csv"),
               std::runtime_error);
  EXPECT_THROW(rbig::parse_report_format("xml"), rbig::UsageError);
  const std::string path = temp_path("report.csv");
  rbig::emit_report({toy_report(2)}, rbig::ReportFormat::csv, path);
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  EXPECT_EQ(s.str(), rbig::reports_to_csv({toy_report(2)}));
  std::filesystem::remove(path);
}
