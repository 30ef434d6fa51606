#include "fastids/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "csv_io.hpp"
#include "fastids/parallel.hpp"
#include "fastids/random.hpp"

namespace fastids {

namespace {

void shuffle(std::vector<Sample>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.unit() * static_cast<double>(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
}

template <class F>
std::vector<Sample> gen_surface(std::size_t n, std::uint64_t seed, F f) {
  Rng rng(seed);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = rng.uniform(1.0, 10.0);
    const double x2 = rng.uniform(1.0, 10.0);
    out.push_back({{x1, x2}, f(x1, x2)});
  }
  return out;
}

double sinc_sq(double x) {
  const double s = std::sin(x) / x;
  return s * s;
}

std::string partitions_label(const std::vector<int>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0) s += 'x';
    s += std::to_string(p[i]);
  }
  return s;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

double f1(double x1, double x2) {
  const double t = 1.0 + 1.0 / (x1 * x1) + std::pow(x2, -1.5);
  return t * t;
}

double f2(double x1, double x2) { return std::sqrt(2.0 * sinc_sq(x1) + 3.0 * sinc_sq(x2)); }

std::vector<Sample> gen_f1(std::size_t n, std::uint64_t seed) { return gen_surface(n, seed, f1); }

std::vector<Sample> gen_f2(std::size_t n, std::uint64_t seed) { return gen_surface(n, seed, f2); }

double SpiralParams::max_radius() const { return pitch * 2.0 * std::numbers::pi * turns + r0; }

std::vector<Sample> gen_two_spiral(std::size_t n_per_class, const SpiralParams& params,
                                   std::uint64_t seed) {
  if (n_per_class < 1) throw GenerationError("two-spiral needs at least one point per class");
  if (!(params.turns > 0.0) || !(params.pitch > 0.0)) {
    throw GenerationError("two-spiral needs positive pitch and turns");
  }
  Rng rng(seed);
  const double span = 2.0 * std::numbers::pi * params.turns;
  const double stratum = span / static_cast<double>(n_per_class);
  std::vector<Sample> out;
  out.reserve(2 * n_per_class);
  for (int label = 0; label < 2; ++label) {
    const double sign = label == 0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n_per_class; ++k) {
      const double theta = -span + (static_cast<double>(k) + rng.unit()) * stratum;
      const double r = params.pitch * (theta + span) + params.r0;
      out.push_back({{sign * r * std::cos(theta), sign * r * std::sin(theta)},
                     static_cast<double>(label)});
    }
  }
  shuffle(out, rng);
  return out;
}

std::vector<Sample> gen_three_ring(std::size_t n_per_class, const RingParams& params,
                                   std::uint64_t seed) {
  if (!(params.r1 > 0.0 && params.r1 < params.r2)) {
    throw GenerationError("three-ring needs 0 < R1 < R2");
  }
  if (!(params.box_min < params.box_max)) throw GenerationError("three-ring box is empty");
  // Range of x1^2 + x2^2 over the box.
  const double near = params.box_min > 0.0 ? params.box_min
                      : params.box_max < 0.0 ? -params.box_max
                                             : 0.0;
  const double far = std::max(std::abs(params.box_min), std::abs(params.box_max));
  const double s_min = 2.0 * near * near;
  const double s_max = 2.0 * far * far;
  if (!(s_min < params.r1) || !(s_min < params.r2 && s_max > params.r1) ||
      !(s_max > params.r2)) {
    throw GenerationError("three-ring box does not reach every class");
  }

  Rng rng(seed);
  std::vector<Sample> out;
  std::size_t counts[3] = {0, 0, 0};
  const std::size_t budget = 1000000 + 10000 * n_per_class;
  for (std::size_t draws = 0; counts[0] < n_per_class || counts[1] < n_per_class ||
                              counts[2] < n_per_class;
       ++draws) {
    if (draws > budget) throw GenerationError("three-ring rejection sampling did not finish");
    const double x1 = rng.uniform(params.box_min, params.box_max);
    const double x2 = rng.uniform(params.box_min, params.box_max);
    const double s = x1 * x1 + x2 * x2;
    if (s == params.r1 || s == params.r2) continue;
    const int label = s < params.r1 ? 0 : s < params.r2 ? 1 : 2;
    if (counts[label] >= n_per_class) continue;
    ++counts[label];
    out.push_back({{x1, x2}, static_cast<double>(label)});
  }
  return out;
}

void write_dataset_csv(std::ostream& out, std::span<const Sample> data, int precision) {
  const std::size_t dims = data.empty() ? 0 : data.front().dims();
  for (std::size_t d = 0; d < dims; ++d) out << 'x' << d + 1 << ',';
  out << "y\n";
  for (const auto& s : data) {
    for (double v : s.x) {
      detail::write_number(out, v, precision);
      out << ',';
    }
    detail::write_number(out, s.y, precision);
    out << '\n';
  }
}

std::vector<Sample> read_dataset_csv(std::istream& in) {
  std::vector<Sample> out;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::blank(line)) continue;
    const auto fields = detail::split(line, ',');
    if (first) {
      first = false;
      const auto t = fields.front().find_first_not_of(" \t");
      if (t != std::string::npos && std::isalpha(static_cast<unsigned char>(fields.front()[t]))) {
        continue;  // header
      }
    }
    if (fields.size() < 2) {
      throw InputError("dataset line " + std::to_string(line_no) + " needs inputs and an output");
    }
    Sample s;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
      s.x.push_back(detail::parse_number(fields[i]));
    }
    s.y = detail::parse_number(fields.back());
    if (!out.empty() && s.dims() != out.front().dims()) {
      throw InputError("dataset line " + std::to_string(line_no) + " has a different width");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kF1: return "f1";
    case DatasetKind::kF2: return "f2";
    case DatasetKind::kTwoSpiral: return "two_spiral";
    case DatasetKind::kThreeRing: return "three_ring";
  }
  return "unknown";
}

DatasetKind dataset_from_string(const std::string& name) {
  if (name == "f1") return DatasetKind::kF1;
  if (name == "f2") return DatasetKind::kF2;
  if (name == "two_spiral") return DatasetKind::kTwoSpiral;
  if (name == "three_ring") return DatasetKind::kThreeRing;
  throw ConfigError("unknown dataset '" + name + "'");
}

bool is_classification(DatasetKind kind) {
  return kind == DatasetKind::kTwoSpiral || kind == DatasetKind::kThreeRing;
}

std::vector<double> dataset_labels(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kTwoSpiral: return {0.0, 1.0};
    case DatasetKind::kThreeRing: return {0.0, 1.0, 2.0};
    default: return {};
  }
}

std::vector<Domain> dataset_domains(DatasetKind kind, const SpiralParams& spiral,
                                    const RingParams& ring) {
  switch (kind) {
    case DatasetKind::kF1:
    case DatasetKind::kF2:
      return {Domain(1.0, 10.0), Domain(1.0, 10.0)};
    case DatasetKind::kTwoSpiral: {
      const double r = spiral.max_radius();
      return {Domain(-r, r), Domain(-r, r)};
    }
    case DatasetKind::kThreeRing:
      return {Domain(ring.box_min, ring.box_max), Domain(ring.box_min, ring.box_max)};
  }
  return {};
}

std::vector<Sample> generate(DatasetKind kind, std::size_t total, std::uint64_t seed,
                             const SpiralParams& spiral, const RingParams& ring) {
  switch (kind) {
    case DatasetKind::kF1: return gen_f1(total, seed);
    case DatasetKind::kF2: return gen_f2(total, seed);
    case DatasetKind::kTwoSpiral:
      if (total < 2) throw GenerationError("two-spiral needs at least 2 samples");
      return gen_two_spiral(total / 2, spiral, seed);
    case DatasetKind::kThreeRing:
      if (total < 3) throw GenerationError("three-ring needs at least 3 samples");
      return gen_three_ring(total / 3, ring, seed);
  }
  throw ConfigError("unknown dataset");
}

RunRecord run_once(const BenchRequest& request, Backend backend, int run,
                   std::span<const Sample> train, std::span<const Sample> test) {
  using Clock = std::chrono::steady_clock;
  AlmConfig cfg = request.config;
  cfg.backend = backend;
  cfg.seed = mix_seed(request.seed, static_cast<std::uint64_t>(run));
  if (cfg.input_domains.empty()) {
    cfg.input_domains = dataset_domains(request.dataset, request.spiral, request.ring);
  }

  const auto t0 = Clock::now();
  const AlmModel model = AlmModel::fit(train, cfg);
  const auto t1 = Clock::now();

  RunRecord rec;
  rec.backend = backend;
  rec.dataset = to_string(request.dataset);
  rec.partitions = model.config().partitions;
  rec.train_size = train.size();
  rec.test_size = test.size();
  rec.epochs = cfg.epochs;
  rec.run = run;
  rec.seed = cfg.seed;
  rec.planes = model.plane_count();
  rec.stored_cells = model.stored_cells();
  rec.cells_per_plane = rec.planes > 0 ? rec.stored_cells / rec.planes : 0;

  std::vector<double> pred;
  std::vector<double> truth;
  pred.reserve(test.size());
  truth.reserve(test.size());
  const auto labels = dataset_labels(request.dataset);
  const auto t2 = Clock::now();
  for (const auto& s : test) {
    pred.push_back(labels.empty() ? model.predict(s.x) : model.classify(s.x, labels));
    truth.push_back(s.y);
  }
  const auto t3 = Clock::now();

  rec.metric = labels.empty() ? "fvu" : "accuracy";
  rec.value = labels.empty() ? fvu(pred, truth) : accuracy(pred, truth);
  rec.train_seconds = std::chrono::duration<double>(t1 - t0).count();
  rec.predict_seconds = std::chrono::duration<double>(t3 - t2).count();
  return rec;
}

BenchReport run_benchmark(const BenchRequest& request) {
  if (request.runs < 1) throw ConfigError("runs must be at least 1");
  if (request.backends.empty()) throw ConfigError("no backend requested");
  if (request.train_size < 1 || request.test_size < 2) {
    throw ConfigError("need at least 1 training and 2 test samples");
  }
  const auto n_runs = static_cast<std::size_t>(request.runs);
  const std::size_t n_backends = request.backends.size();
  std::vector<RunRecord> records(n_runs * n_backends);

  BenchRequest inner = request;
  const unsigned threads = request.serial ? 1u : resolve_threads(request.threads);
  // Parallelism goes to independent runs; planes inside a run train serially.
  inner.config.threads = 1;
  parallel_for(n_runs, threads, [&](std::size_t r) {
    const std::uint64_t run_seed = mix_seed(request.seed, r);
    const auto train = generate(request.dataset, request.train_size, mix_seed(run_seed, 1),
                                request.spiral, request.ring);
    const auto test = generate(request.dataset, request.test_size, mix_seed(run_seed, 2),
                               request.spiral, request.ring);
    for (std::size_t b = 0; b < n_backends; ++b) {
      records[r * n_backends + b] =
          run_once(inner, request.backends[b], static_cast<int>(r), train, test);
    }
  });

  BenchReport report;
  report.runs = records;
  for (std::size_t b = 0; b < n_backends; ++b) {
    std::vector<double> values;
    std::vector<double> train_s;
    std::vector<double> predict_s;
    for (std::size_t r = 0; r < n_runs; ++r) {
      const auto& rec = records[r * n_backends + b];
      values.push_back(rec.value);
      train_s.push_back(rec.train_seconds);
      predict_s.push_back(rec.predict_seconds);
    }
    const auto& first = records[b];
    RunSummary s;
    s.backend = first.backend;
    s.dataset = first.dataset;
    s.partitions = first.partitions;
    s.train_size = first.train_size;
    s.runs = request.runs;
    s.metric = first.metric;
    s.mean = mean_of(values);
    s.stddev = sample_std(values);
    s.mean_train_seconds = mean_of(train_s);
    s.mean_predict_seconds = mean_of(predict_s);
    s.stored_cells = first.stored_cells;
    s.cells_per_plane = first.cells_per_plane;
    report.summaries.push_back(s);
  }

  const RunSummary* classic = nullptr;
  const RunSummary* fast = nullptr;
  for (const auto& s : report.summaries) {
    if (s.backend == Backend::kClassic) classic = &s;
    if (s.backend == Backend::kFast) fast = &s;
  }
  if (classic && fast && fast->mean_train_seconds > 0.0) {
    report.speedup = classic->mean_train_seconds / fast->mean_train_seconds;
  }
  return report;
}

void BenchReport::write_csv(std::ostream& out) const {
  out << "backend,dataset,partitions,train_size,test_size,epochs,run,seed,metric,value,"
         "train_seconds,predict_seconds,planes,stored_cells,cells_per_plane\n";
  for (const auto& r : runs) {
    out << to_string(r.backend) << ',' << r.dataset << ',' << partitions_label(r.partitions)
        << ',' << r.train_size << ',' << r.test_size << ',' << r.epochs << ',' << r.run << ','
        << r.seed << ',' << r.metric << ',';
    detail::write_number(out, r.value, 6);
    out << ',';
    detail::write_number(out, r.train_seconds, 6);
    out << ',';
    detail::write_number(out, r.predict_seconds, 6);
    out << ',' << r.planes << ',' << r.stored_cells << ',' << r.cells_per_plane << '\n';
  }
}

void BenchReport::write_json(std::ostream& out) const {
  nlohmann::json j;
  j["summaries"] = nlohmann::json::array();
  for (const auto& s : summaries) {
    j["summaries"].push_back({{"backend", to_string(s.backend)},
                              {"dataset", s.dataset},
                              {"partitions", s.partitions},
                              {"train_size", s.train_size},
                              {"runs", s.runs},
                              {"metric", s.metric},
                              {"mean", s.mean},
                              {"std", s.stddev},
                              {"mean_train_seconds", s.mean_train_seconds},
                              {"mean_predict_seconds", s.mean_predict_seconds},
                              {"stored_cells", s.stored_cells},
                              {"cells_per_plane", s.cells_per_plane}});
  }
  j["speedup"] = speedup ? nlohmann::json(*speedup) : nlohmann::json(nullptr);
  out << j.dump(2) << '\n';
}

}  // namespace fastids
