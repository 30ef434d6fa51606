#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fastids/alm.hpp"

namespace fastids {

namespace {

using nlohmann::json;

json domain_json(const Domain& d) { return json::array({d.min, d.max}); }

Domain domain_from(const json& j) { return Domain(j.at(0).get<double>(), j.at(1).get<double>()); }

std::string connector_name(ConnectorMode m) {
  return m == ConnectorMode::kDyadicSteps ? "dyadic_steps" : "gaussian_bands";
}

std::string drive_name(WriteDrive d) {
  return d == WriteDrive::kDirect ? "direct" : "compensated";
}

json config_json(const AlmConfig& c) {
  json j;
  j["resolution"] = {{"x", c.resolution.rsn_x}, {"y", c.resolution.rsn_y}};
  j["backend"] = to_string(c.backend);
  j["kernel"] = {{"shape", to_string(c.kernel.tag)},
                 {"radius", c.kernel.radius},
                 {"sigma", c.kernel.sigma}};
  j["spread_threshold"] = c.spread_threshold;
  j["fast"] = {{"alpha1", c.fast.alpha1},
               {"alpha2", c.fast.alpha2},
               {"sigma", c.fast.sigma},
               {"radius", c.fast.radius},
               {"spread_floor", c.fast.spread_floor}};
  j["device"] = {{"thickness", c.device.thickness},
                 {"mobility", c.device.mobility},
                 {"r_on", c.device.r_on},
                 {"r_off", c.device.r_off},
                 {"write_threshold", c.device.write_threshold},
                 {"dt", c.device.dt}};
  j["circuit"] = {{"r_f1", c.circuit.r_f1},
                  {"v_read", c.circuit.v_read},
                  {"v_bias", c.circuit.v_bias},
                  {"alpha1_gain", c.circuit.alpha1_gain},
                  {"alpha2_gain", c.circuit.alpha2_gain},
                  {"neighbors", c.circuit.neighbors},
                  {"pwm_period", c.circuit.pwm.period},
                  {"pwm_amplitude", c.circuit.pwm.amplitude},
                  {"pwm_duty", c.circuit.pwm.duty},
                  {"connector", connector_name(c.circuit.connector)},
                  {"sigma", c.circuit.sigma},
                  {"band_radius", c.circuit.band_radius},
                  {"drive", drive_name(c.circuit.drive)}};
  j["epochs"] = c.epochs;
  j["seed"] = c.seed;
  j["spread_floor"] = c.spread_floor;
  j["auto_partition"] = c.auto_partition;
  j["target_error"] = c.target_error ? json(*c.target_error) : json(nullptr);
  j["min_plane_samples"] = c.min_plane_samples;
  j["max_partitions"] = c.max_partitions;
  return j;
}

AlmConfig config_from(const json& j) {
  AlmConfig c;
  c.resolution = Resolution(j.at("resolution").at("x").get<int>(),
                            j.at("resolution").at("y").get<int>());
  c.backend = backend_from_string(j.at("backend").get<std::string>());
  const auto& k = j.at("kernel");
  c.kernel.tag = kernel_tag_from_string(k.at("shape").get<std::string>());
  c.kernel.radius = k.at("radius").get<int>();
  c.kernel.sigma = k.at("sigma").get<double>();
  c.spread_threshold = j.at("spread_threshold").get<double>();
  const auto& f = j.at("fast");
  c.fast.alpha1 = f.at("alpha1").get<double>();
  c.fast.alpha2 = f.at("alpha2").get<double>();
  c.fast.sigma = f.at("sigma").get<double>();
  c.fast.radius = f.at("radius").get<int>();
  c.fast.spread_floor = f.at("spread_floor").get<double>();
  const auto& d = j.at("device");
  c.device.thickness = d.at("thickness").get<double>();
  c.device.mobility = d.at("mobility").get<double>();
  c.device.r_on = d.at("r_on").get<double>();
  c.device.r_off = d.at("r_off").get<double>();
  c.device.write_threshold = d.at("write_threshold").get<double>();
  c.device.dt = d.at("dt").get<double>();
  const auto& x = j.at("circuit");
  c.circuit.r_f1 = x.at("r_f1").get<double>();
  c.circuit.v_read = x.at("v_read").get<double>();
  c.circuit.v_bias = x.at("v_bias").get<double>();
  c.circuit.alpha1_gain = x.at("alpha1_gain").get<double>();
  c.circuit.alpha2_gain = x.at("alpha2_gain").get<double>();
  c.circuit.neighbors = x.at("neighbors").get<int>();
  c.circuit.pwm.period = x.at("pwm_period").get<double>();
  c.circuit.pwm.amplitude = x.at("pwm_amplitude").get<double>();
  c.circuit.pwm.duty = x.at("pwm_duty").get<double>();
  c.circuit.connector = x.at("connector").get<std::string>() == "dyadic_steps"
                            ? ConnectorMode::kDyadicSteps
                            : ConnectorMode::kGaussianBands;
  c.circuit.sigma = x.at("sigma").get<double>();
  c.circuit.band_radius = x.at("band_radius").get<int>();
  c.circuit.drive =
      x.at("drive").get<std::string>() == "direct" ? WriteDrive::kDirect : WriteDrive::kCompensated;
  c.epochs = j.at("epochs").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.spread_floor = j.at("spread_floor").get<double>();
  c.auto_partition = j.at("auto_partition").get<bool>();
  if (!j.at("target_error").is_null()) c.target_error = j.at("target_error").get<double>();
  c.min_plane_samples = j.at("min_plane_samples").get<int>();
  c.max_partitions = j.at("max_partitions").get<int>();
  return c;
}

std::string plane_file(std::size_t input, int cell) {
  return "plane_i" + std::to_string(input) + "_c" + std::to_string(cell) + ".csv";
}

}  // namespace

void AlmModel::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  json j;
  j["format"] = "fastids-model";
  j["version"] = 1;
  j["dims"] = dims();
  j["config"] = config_json(config_);
  j["output_domain"] = domain_json(output_domain_);
  json scheme;
  scheme["mode"] = to_string(scheme_.mode());
  scheme["seed"] = scheme_.seed();
  scheme["domains"] = json::array();
  scheme["cuts"] = json::array();
  for (std::size_t i = 0; i < dims(); ++i) {
    scheme["domains"].push_back(domain_json(scheme_.domain(i)));
    scheme["cuts"].push_back(scheme_.cuts(i));
  }
  j["scheme"] = scheme;
  j["planes"] = json::array();
  for (std::size_t i = 1; i <= dims(); ++i) {
    for (int c = 1; c <= scheme_.cells_excluding(i - 1); ++c) {
      const std::string name = plane_file(i, c);
      const std::size_t p = plane_index(i, c);
      j["planes"].push_back({{"input", i}, {"cell", c}, {"file", name}, {"routed", routed_[p]}});
      std::ofstream out(dir / name);
      if (!out) throw InputError("cannot write " + (dir / name).string());
      std::visit(
          [&](const auto& plane) { plane.write_csv(out, 0); }, planes_[p]);
      if (!out) throw InputError("failed writing " + (dir / name).string());
    }
  }
  std::ofstream out(dir / "model.json");
  if (!out) throw InputError("cannot write " + (dir / "model.json").string());
  out << j.dump(2) << '\n';
}

AlmModel AlmModel::load(const std::filesystem::path& dir) {
  const auto header = dir / "model.json";
  std::ifstream in(header);
  if (!in) throw InputError("cannot open " + header.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("malformed " + header.string() + ": " + e.what());
  }

  AlmModel m;
  try {
    m.config_ = config_from(j.at("config"));
    m.output_domain_ = domain_from(j.at("output_domain"));
    const auto& s = j.at("scheme");
    std::vector<Domain> domains;
    for (const auto& d : s.at("domains")) domains.push_back(domain_from(d));
    m.scheme_ = PartitionScheme::from_cuts(
        std::move(domains), s.at("cuts").get<std::vector<std::vector<double>>>(),
        partition_mode_from_string(s.at("mode").get<std::string>()),
        s.at("seed").get<std::uint64_t>());
  } catch (const json::exception& e) {
    throw InputError("malformed " + header.string() + ": " + e.what());
  }
  if (j.value("dims", std::size_t{0}) != m.dims()) throw InputError("model dims mismatch");
  m.config_.input_domains.clear();
  for (std::size_t i = 0; i < m.dims(); ++i) m.config_.input_domains.push_back(m.scheme_.domain(i));
  m.config_.output_domain = m.output_domain_;

  const AlmConfig& cfg = m.config_;
  for (std::size_t i = 1; i <= m.dims(); ++i) {
    m.offsets_.push_back(m.planes_.size());
    for (int c = 1; c <= m.scheme_.cells_excluding(i - 1); ++c) {
      const auto path = dir / plane_file(i, c);
      std::ifstream pin(path);
      if (!pin) throw InputError("missing plane file " + path.string());
      switch (cfg.backend) {
        case Backend::kClassic:
          m.planes_.emplace_back(
              IdsPlane::read_csv(pin, cfg.resolution, cfg.kernel, cfg.spread_threshold));
          break;
        case Backend::kFast:
          m.planes_.emplace_back(DescribingVectors::read_csv(pin, cfg.resolution, cfg.fast));
          break;
        case Backend::kCrossbar:
          m.planes_.emplace_back(
              CrossbarPlane::read_csv(pin, cfg.resolution, cfg.device, cfg.circuit));
          break;
      }
    }
  }
  m.routed_.assign(m.planes_.size(), 0);
  for (const auto& p : j.value("planes", json::array())) {
    const auto idx = m.plane_index(p.at("input").get<std::size_t>(), p.at("cell").get<int>());
    m.routed_[idx] = p.value("routed", std::size_t{0});
  }
  return m;
}

}  // namespace fastids
