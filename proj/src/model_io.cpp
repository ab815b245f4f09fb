#include "rbig/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbig/errors.hpp"

namespace rbig {

using nlohmann::json;

namespace {

constexpr double kOrthogonalityTolerance = 1e-10;

json config_to_json(const RbigConfig& c) {
  return json{{"rotation_kind", to_string(c.rotation)},
              {"max_layers", c.max_layers},
              {"patience", c.patience},
              {"noise_floor_multiplier", c.noise_floor_multiplier},
              {"noise_floor_repeats", c.noise_floor_repeats},
              {"entropy_estimator", to_string(c.entropy.estimator)},
              {"entropy_bins", c.entropy.bins},
              {"delta_reference", to_string(c.delta_reference)},
              {"subtract_null_bias", c.subtract_null_bias},
              {"rng_seed", c.rng_seed}};
}

RbigConfig config_from_json(const json& j) {
  RbigConfig c;
  c.rotation = parse_rotation_kind(j.at("rotation_kind").get<std::string>());
  c.max_layers = j.at("max_layers").get<int>();
  c.patience = j.at("patience").get<int>();
  c.noise_floor_multiplier = j.at("noise_floor_multiplier").get<double>();
  c.noise_floor_repeats = j.value("noise_floor_repeats", c.noise_floor_repeats);
  c.entropy.estimator = parse_entropy_estimator(j.at("entropy_estimator").get<std::string>());
  c.entropy.bins = j.value("entropy_bins", 0);
  if (j.contains("delta_reference"))
    c.delta_reference = parse_delta_reference(j.at("delta_reference").get<std::string>());
  c.subtract_null_bias = j.value("subtract_null_bias", c.subtract_null_bias);
  c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return c;
}

}  // namespace

std::string model_to_json(const RbigModel& model) {
  json layers = json::array();
  for (const auto& layer : model.layers) {
    json maps = json::array();
    for (const auto& m : layer.maps)
      maps.push_back({{"x", m.knots_x()}, {"p", m.knots_p()}, {"clamp_eps", m.clamp_eps()}});
    std::vector<double> rot;
    rot.reserve(static_cast<std::size_t>(layer.rotation.size()));
    for (Eigen::Index r = 0; r < layer.rotation.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.rotation.cols(); ++c) rot.push_back(layer.rotation(r, c));
    layers.push_back({{"maps", std::move(maps)}, {"rotation", std::move(rot)}, {"delta_t", layer.delta_t}});
  }
  json doc{{"format", kModelFormat},
           {"dims", model.dims},
           {"n_fit_samples", model.n_fit_samples},
           {"rng_seed", model.config.rng_seed},
           {"noise_floor", model.noise_floor},
           {"null_bias", model.null_bias},
           {"stop_reason", to_string(model.stop_reason)},
           {"config", config_to_json(model.config)},
           {"layers", std::move(layers)}};
  return doc.dump(1);
}

RbigModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model document is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string()) != kModelFormat)
      throw ParseError(std::string("expected format tag \"") + kModelFormat + "\"");
    RbigModel model;
    model.dims = doc.at("dims").get<int>();
    if (model.dims < 1) throw ParseError("dims must be positive");
    model.n_fit_samples = doc.at("n_fit_samples").get<long>();
    model.noise_floor = doc.at("noise_floor").get<double>();
    model.null_bias = doc.value("null_bias", 0.0);
    model.stop_reason = parse_stop_reason(doc.at("stop_reason").get<std::string>());
    model.config = config_from_json(doc.at("config"));
    model.config.rng_seed = doc.at("rng_seed").get<std::uint64_t>();
    const auto d = static_cast<std::size_t>(model.dims);
    long index = 0;
    for (const auto& jl : doc.at("layers")) {
      RbigLayer layer;
      const auto& maps = jl.at("maps");
      if (maps.size() != d)
        throw ParseError("layer " + std::to_string(index) + ": expected " + std::to_string(d) + " maps");
      for (const auto& jm : maps) {
        try {
          layer.maps.emplace_back(jm.at("x").get<std::vector<double>>(),
                                  jm.at("p").get<std::vector<double>>(),
                                  jm.at("clamp_eps").get<double>());
        } catch (const DataError& e) {
          throw ParseError("layer " + std::to_string(index) + ": " + e.what());
        }
      }
      const auto rot = jl.at("rotation").get<std::vector<double>>();
      if (rot.size() != d * d)
        throw ParseError("layer " + std::to_string(index) + ": rotation must have dims^2 entries");
      layer.rotation = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          rot.data(), model.dims, model.dims);
      if (!(orthogonality_error(layer.rotation) <= kOrthogonalityTolerance))
        throw ParseError("layer " + std::to_string(index) + ": rotation is not orthogonal");
      layer.delta_t = jl.at("delta_t").get<double>();
      if (!std::isfinite(layer.delta_t))
        throw ParseError("layer " + std::to_string(index) + ": non-finite delta_t");
      model.layers.push_back(std::move(layer));
      ++index;
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  } catch (const UsageError& e) {
    // unknown enum spelling
    throw ParseError(std::string("malformed model document: ") + e.what());
  } catch (const DataError& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const RbigModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << model_to_json(model) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

RbigModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace rbig
