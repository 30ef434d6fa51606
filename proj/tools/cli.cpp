#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastids/random.hpp"

namespace fastids::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_as(const std::string& key, const std::string& v) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("bad value for '" + key + "': '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& s : split_list(v)) out.push_back(parse_as<int>(key, s));
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(parse_as<double>(key, s));
  return out;
}

bool is_builtin(const std::string& name) {
  return name == "f1" || name == "f2" || name == "two_spiral" || name == "three_ring";
}

std::vector<Sample> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset " + path.string());
  auto data = read_dataset_csv(in);
  if (data.empty()) throw InputError("dataset " + path.string() + " has no samples");
  return data;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  RunConfig c;
  AlmConfig& a = c.alm;
  std::optional<double> kernel_sigma;
  std::optional<int> rsn_x;
  std::optional<int> rsn_y;
  std::optional<double> input_lo;
  std::optional<double> input_hi;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"dataset", [&](auto&, auto& v) { c.dataset = v; }},
      {"train_size", [&](auto& k, auto& v) { c.train_size = parse_as<std::size_t>(k, v); }},
      {"test_size", [&](auto& k, auto& v) { c.test_size = parse_as<std::size_t>(k, v); }},
      {"runs", [&](auto& k, auto& v) { c.runs = parse_as<int>(k, v); }},
      {"seed", [&](auto& k, auto& v) { c.seed = parse_as<std::uint64_t>(k, v); }},
      {"out", [&](auto&, auto& v) { c.out = v; }},
      {"backend",
       [&](auto&, auto& v) {
         c.backends.clear();
         for (const auto& b : split_list(v)) c.backends.push_back(backend_from_string(b));
       }},
      {"resolution", [&](auto& k, auto& v) { rsn_x = rsn_y = parse_as<int>(k, v); }},
      {"rsn_x", [&](auto& k, auto& v) { rsn_x = parse_as<int>(k, v); }},
      {"rsn_y", [&](auto& k, auto& v) { rsn_y = parse_as<int>(k, v); }},
      {"partitions", [&](auto& k, auto& v) { a.partitions = parse_int_list(k, v); }},
      {"partition_mode", [&](auto&, auto& v) { a.partition_mode = partition_mode_from_string(v); }},
      {"epochs", [&](auto& k, auto& v) { a.epochs = parse_as<int>(k, v); }},
      {"sigma", [&](auto& k, auto& v) { a.fast.sigma = parse_as<double>(k, v); }},
      {"alpha1", [&](auto& k, auto& v) { a.fast.alpha1 = parse_as<double>(k, v); }},
      {"alpha2", [&](auto& k, auto& v) { a.fast.alpha2 = parse_as<double>(k, v); }},
      {"radius", [&](auto& k, auto& v) { a.fast.radius = parse_as<int>(k, v); }},
      {"kernel", [&](auto&, auto& v) { a.kernel.tag = kernel_tag_from_string(v); }},
      {"kernel_radius", [&](auto& k, auto& v) { a.kernel.radius = parse_as<int>(k, v); }},
      {"kernel_sigma", [&](auto& k, auto& v) { kernel_sigma = parse_as<double>(k, v); }},
      {"spread_threshold", [&](auto& k, auto& v) { a.spread_threshold = parse_as<double>(k, v); }},
      {"spread_floor", [&](auto& k, auto& v) { a.spread_floor = parse_as<double>(k, v); }},
      {"input_min", [&](auto& k, auto& v) { input_lo = parse_as<double>(k, v); }},
      {"input_max", [&](auto& k, auto& v) { input_hi = parse_as<double>(k, v); }},
      {"auto_partition", [&](auto& k, auto& v) { a.auto_partition = parse_bool(k, v); }},
      {"target_error", [&](auto& k, auto& v) { a.target_error = parse_as<double>(k, v); }},
      {"min_plane_samples", [&](auto& k, auto& v) { a.min_plane_samples = parse_as<int>(k, v); }},
      {"max_partitions", [&](auto& k, auto& v) { a.max_partitions = parse_as<int>(k, v); }},
      {"connector",
       [&](auto& k, auto& v) {
         if (v == "dyadic_steps") {
           a.circuit.connector = ConnectorMode::kDyadicSteps;
         } else if (v == "gaussian_bands") {
           a.circuit.connector = ConnectorMode::kGaussianBands;
         } else {
           throw ConfigError("bad value for '" + k + "': '" + v + "'");
         }
       }},
      {"drive",
       [&](auto& k, auto& v) {
         if (v == "direct") {
           a.circuit.drive = WriteDrive::kDirect;
         } else if (v == "compensated") {
           a.circuit.drive = WriteDrive::kCompensated;
         } else {
           throw ConfigError("bad value for '" + k + "': '" + v + "'");
         }
       }},
      {"neighbors", [&](auto& k, auto& v) { a.circuit.neighbors = parse_as<int>(k, v); }},
      {"band_radius", [&](auto& k, auto& v) { a.circuit.band_radius = parse_as<int>(k, v); }},
      {"v_read",
       [&](auto& k, auto& v) { a.circuit.v_read = a.circuit.v_bias = parse_as<double>(k, v); }},
      {"pwm_period", [&](auto& k, auto& v) { a.circuit.pwm.period = parse_as<double>(k, v); }},
      {"pwm_amplitude",
       [&](auto& k, auto& v) { a.circuit.pwm.amplitude = parse_as<double>(k, v); }},
      {"pwm_duty", [&](auto& k, auto& v) { a.circuit.pwm.duty = parse_as<double>(k, v); }},
      {"write_threshold",
       [&](auto& k, auto& v) { a.device.write_threshold = parse_as<double>(k, v); }},
      {"dt", [&](auto& k, auto& v) { a.device.dt = parse_as<double>(k, v); }},
      {"spiral_pitch", [&](auto& k, auto& v) { c.spiral.pitch = parse_as<double>(k, v); }},
      {"spiral_turns", [&](auto& k, auto& v) { c.spiral.turns = parse_as<double>(k, v); }},
      {"spiral_r0", [&](auto& k, auto& v) { c.spiral.r0 = parse_as<double>(k, v); }},
      {"ring_r1", [&](auto& k, auto& v) { c.ring.r1 = parse_as<double>(k, v); }},
      {"ring_r2", [&](auto& k, auto& v) { c.ring.r2 = parse_as<double>(k, v); }},
      {"threads", [&](auto& k, auto& v) { a.threads = parse_as<unsigned>(k, v); }},
  };

  for (const auto& [k, v] : kv) {
    const auto it = setters.find(k);
    if (it == setters.end()) throw ConfigError(origin + ": unknown key '" + k + "'");
    it->second(k, v);
  }

  // One variance shared by both backends unless the kernel gets its own.
  a.kernel.sigma = kernel_sigma.value_or(a.fast.sigma);
  if (a.kernel.tag == KernelTag::kGaussian && !kv.contains("kernel_radius")) {
    a.kernel.radius = static_cast<int>(std::ceil(3.0 * a.kernel.sigma));
  }
  a.circuit.sigma = a.fast.sigma;
  a.circuit.alpha1_gain = a.fast.alpha1;
  a.circuit.alpha2_gain = a.fast.alpha2;
  if (rsn_x || rsn_y) a.resolution = Resolution(rsn_x.value_or(256), rsn_y.value_or(256));
  if (input_lo || input_hi) {
    if (!(input_lo && input_hi)) throw ConfigError("input_min and input_max go together");
    c.input_domain = Domain(*input_lo, *input_hi);
  }
  if (c.runs < 1) throw ConfigError("runs must be at least 1");
  if (c.backends.empty()) throw ConfigError("no backend given");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  return parse_run_config(in, path.string());
}

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string backend;
  bool serial = false;
};

RunConfig resolve(const Common& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (o.seed) c.seed = o.seed;
  if (!o.out.empty()) c.out = o.out;
  if (!o.backend.empty()) c.backends = {backend_from_string(o.backend)};
  return c;
}

int cmd_train(const Common& o, std::ostream& out) {
  RunConfig c = resolve(o);
  const std::uint64_t seed = c.seed.value_or(fresh_seed());
  AlmConfig cfg = c.alm;
  cfg.backend = c.backends.front();
  cfg.seed = seed;

  std::vector<Sample> data;
  if (is_builtin(c.dataset)) {
    const auto kind = dataset_from_string(c.dataset);
    data = generate(kind, c.train_size, mix_seed(seed, 1), c.spiral, c.ring);
    if (cfg.input_domains.empty()) cfg.input_domains = dataset_domains(kind, c.spiral, c.ring);
  } else {
    data = read_csv_file(c.dataset);
  }
  if (c.input_domain) cfg.input_domains.assign(data.front().dims(), *c.input_domain);

  const auto t0 = Clock::now();
  const AlmModel model = AlmModel::fit(data, cfg);
  const double train_s = std::chrono::duration<double>(Clock::now() - t0).count();
  model.save(c.out);

  json s;
  s["backend"] = to_string(model.backend());
  s["dataset"] = c.dataset;
  s["seed"] = seed;
  s["train_size"] = data.size();
  s["dims"] = model.dims();
  s["partitions"] = model.config().partitions;
  s["planes"] = model.plane_count();
  s["stored_cells"] = model.stored_cells();
  s["cells_per_plane"] = model.stored_cells() / model.plane_count();
  s["routed"] = model.routed_counts();
  s["train_seconds"] = train_s;
  s["mean_spread_per_input"] = model.mean_spread_per_input();
  write_file(c.out / "train_summary.json", s.dump(2) + "\n");
  out << s.dump(2) << '\n';
  return kOk;
}

int cmd_eval(const std::string& model_dir, const std::string& dataset, std::uint64_t seed,
             std::size_t size, const std::string& labels_text, std::ostream& out) {
  const AlmModel model = AlmModel::load(model_dir);
  std::vector<Sample> data;
  std::vector<double> labels = parse_double_list("labels", labels_text);
  if (is_builtin(dataset)) {
    const auto kind = dataset_from_string(dataset);
    data = generate(kind, size, mix_seed(seed, 2), SpiralParams{}, RingParams{});
    if (labels.empty()) labels = dataset_labels(kind);
  } else {
    data = read_csv_file(dataset);
  }
  if (data.front().dims() != model.dims()) {
    throw InputError("dataset has " + std::to_string(data.front().dims()) +
                     " inputs, model expects " + std::to_string(model.dims()));
  }

  std::vector<double> pred;
  std::vector<double> truth;
  const auto t0 = Clock::now();
  for (const auto& s : data) {
    pred.push_back(labels.empty() ? model.predict(s.x) : model.classify(s.x, labels));
    truth.push_back(s.y);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();

  json j;
  j["dataset"] = dataset;
  j["n"] = data.size();
  if (labels.empty()) {
    j["fvu"] = round4(fvu(pred, truth));
  } else {
    j["accuracy"] = round4(accuracy(pred, truth));
  }
  j["predict_seconds"] = secs;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_bench(const Common& o, std::ostream& out) {
  RunConfig c = resolve(o);
  if (!is_builtin(c.dataset)) throw ConfigError("bench needs a built-in dataset");
  BenchRequest r;
  r.dataset = dataset_from_string(c.dataset);
  r.backends = c.backends;
  r.config = c.alm;
  if (c.input_domain) r.config.input_domains.assign(2, *c.input_domain);
  r.train_size = c.train_size;
  r.test_size = c.test_size;
  r.runs = c.runs;
  r.seed = c.seed.value_or(fresh_seed());
  r.serial = o.serial;
  r.threads = c.alm.threads;
  r.spiral = c.spiral;
  r.ring = c.ring;
  const auto report = run_benchmark(r);

  std::filesystem::create_directories(c.out);
  std::ostringstream csv;
  report.write_csv(csv);
  write_file(c.out / "report.csv", csv.str());
  std::ostringstream js;
  report.write_json(js);
  auto summary = json::parse(js.str());
  summary["seed"] = r.seed;
  summary["serial"] = r.serial;
  write_file(c.out / "summary.json", summary.dump(2) + "\n");
  out << summary.dump(2) << '\n';
  return kOk;
}

int cmd_dump(const std::string& model_dir, std::size_t input, int cell, bool fuzzy,
             std::ostream& out) {
  const AlmModel model = AlmModel::load(model_dir);
  model.write_plane_csv(out, input, cell, fuzzy, 6);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fast IDS / ALM fuzzy modelling: train, evaluate, benchmark, inspect planes"};
  app.require_subcommand(1);

  Common train_opts;
  auto* train = app.add_subcommand("train", "Fit a model and write it to --out");
  train->add_option("--config", train_opts.config, "Config file (key = value)")->required();
  train->add_option("--seed", train_opts.seed, "Seed; generated and echoed if absent");
  train->add_option("--out", train_opts.out, "Model directory");
  train->add_option("--backend", train_opts.backend, "classic|fast|crossbar");

  std::string eval_model;
  std::string eval_dataset;
  std::uint64_t eval_seed = 1;
  std::size_t eval_size = 1000;
  std::string eval_labels;
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model; prints JSON");
  eval->add_option("--model", eval_model, "Model directory")->required();
  eval->add_option("--dataset", eval_dataset, "Built-in dataset name or CSV path")->required();
  eval->add_option("--seed", eval_seed, "Seed for built-in datasets");
  eval->add_option("--size", eval_size, "Sample count for built-in datasets");
  eval->add_option("--labels", eval_labels, "Comma-separated class labels (classification)");

  Common bench_opts;
  auto* bench = app.add_subcommand("bench", "Run a benchmark; writes report.csv, summary.json");
  bench->add_option("--config", bench_opts.config, "Config file (key = value)")->required();
  bench->add_option("--seed", bench_opts.seed, "Base seed");
  bench->add_option("--out", bench_opts.out, "Report directory");
  bench->add_option("--backend", bench_opts.backend, "Run a single backend");
  bench->add_flag("--serial", bench_opts.serial, "Run sequentially (for timing)");

  std::string dump_model;
  std::size_t dump_input = 1;
  int dump_cell = 1;
  bool dump_fuzzy = false;
  auto* dump = app.add_subcommand("dump-plane", "Print one plane as CSV");
  dump->add_option("--model", dump_model, "Model directory")->required();
  dump->add_option("--input", dump_input, "1-based input index");
  dump->add_option("--cell", dump_cell, "1-based partition cell");
  dump->add_flag("--fuzzy", dump_fuzzy, "Append fuzzy-output rows (vector backends)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*train) return cmd_train(train_opts, out);
    if (*eval) return cmd_eval(eval_model, eval_dataset, eval_seed, eval_size, eval_labels, out);
    if (*bench) return cmd_bench(bench_opts, out);
    if (*dump) return cmd_dump(dump_model, dump_input, dump_cell, dump_fuzzy, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kRuntimeError;
}

}  // namespace fastids::cli
