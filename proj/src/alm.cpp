#include "fastids/alm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "fastids/metrics.hpp"
#include "fastids/parallel.hpp"
#include "fastids/random.hpp"

namespace fastids {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Features {
  double path;
  double spread;
};

Features features_at(const Plane& plane, int xq) {
  return std::visit(
      Overloaded{
          [&](const IdsPlane& p) {
            return Features{static_cast<double>(p.narrow_path(xq)),
                            static_cast<double>(p.spread(xq))};
          },
          [&](const DescribingVectors& v) {
            return Features{v.narrow_path(xq), v.upper()[xq - 1] - v.lower()[xq - 1]};
          },
          [&](const CrossbarPlane& c) {
            const double top = c.resolution().rsn_y;
            const double path = std::clamp(c.read_level(CrossbarRow::kPath, xq), 0.0, top);
            const double hi = std::clamp(c.read_level(CrossbarRow::kUpper, xq), 0.0, top);
            const double lo = std::clamp(c.read_level(CrossbarRow::kLower, xq), 0.0, top);
            return Features{path, hi - lo};
          },
      },
      plane);
}

Plane make_plane(const AlmConfig& cfg) {
  switch (cfg.backend) {
    case Backend::kClassic:
      return IdsPlane(cfg.resolution, cfg.kernel, cfg.spread_threshold);
    case Backend::kFast:
      return DescribingVectors(cfg.resolution, cfg.fast);
    case Backend::kCrossbar:
      return CrossbarPlane(cfg.resolution, cfg.device, cfg.circuit);
  }
  throw ConfigError("unknown backend");
}

Domain range_of(std::span<const Sample> data, std::optional<std::size_t> dim) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : data) {
    const double v = dim ? s.x[*dim] : s.y;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return Domain(lo, hi);
}

}  // namespace

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::kClassic: return "classic";
    case Backend::kFast: return "fast";
    case Backend::kCrossbar: return "crossbar";
  }
  return "unknown";
}

Backend backend_from_string(const std::string& name) {
  if (name == "classic") return Backend::kClassic;
  if (name == "fast") return Backend::kFast;
  if (name == "crossbar") return Backend::kCrossbar;
  throw ConfigError("unknown backend '" + name + "'");
}

std::string to_string(PartitionMode mode) {
  return mode == PartitionMode::kUniform ? "uniform" : "random";
}

PartitionMode partition_mode_from_string(const std::string& name) {
  if (name == "uniform") return PartitionMode::kUniform;
  if (name == "random") return PartitionMode::kRandom;
  throw ConfigError("unknown partition mode '" + name + "'");
}

// ---- PartitionScheme -------------------------------------------------------

PartitionScheme PartitionScheme::uniform(std::vector<Domain> domains, std::vector<int> counts) {
  if (counts.size() != domains.size()) throw ConfigError("one partition count per input");
  std::vector<std::vector<double>> cuts(domains.size());
  for (std::size_t d = 0; d < domains.size(); ++d) {
    if (counts[d] < 1) throw ConfigError("partition counts must be at least 1");
    for (int k = 1; k < counts[d]; ++k) {
      cuts[d].push_back(domains[d].min + domains[d].width() * k / counts[d]);
    }
  }
  return from_cuts(std::move(domains), std::move(cuts), PartitionMode::kUniform, 0);
}

PartitionScheme PartitionScheme::random(std::vector<Domain> domains, std::vector<int> counts,
                                        std::uint64_t seed) {
  if (counts.size() != domains.size()) throw ConfigError("one partition count per input");
  std::vector<std::vector<double>> cuts(domains.size());
  for (std::size_t d = 0; d < domains.size(); ++d) {
    if (counts[d] < 1) throw ConfigError("partition counts must be at least 1");
    Rng rng(mix_seed(seed, d));
    auto& c = cuts[d];
    while (static_cast<int>(c.size()) < counts[d] - 1) {
      const double v = rng.uniform(domains[d].min, domains[d].max);
      if (v <= domains[d].min || std::find(c.begin(), c.end(), v) != c.end()) continue;
      c.push_back(v);
    }
    std::sort(c.begin(), c.end());
  }
  return from_cuts(std::move(domains), std::move(cuts), PartitionMode::kRandom, seed);
}

PartitionScheme PartitionScheme::from_cuts(std::vector<Domain> domains,
                                           std::vector<std::vector<double>> cuts,
                                           PartitionMode mode, std::uint64_t seed) {
  if (domains.empty()) throw ConfigError("partition scheme needs at least one input");
  if (cuts.size() != domains.size()) throw ConfigError("one cut list per input");
  for (std::size_t d = 0; d < domains.size(); ++d) {
    for (std::size_t k = 0; k < cuts[d].size(); ++k) {
      const double c = cuts[d][k];
      if (!(c > domains[d].min && c < domains[d].max)) {
        throw ConfigError("cut points must lie inside the domain");
      }
      if (k > 0 && !(c > cuts[d][k - 1])) {
        throw ConfigError("cut points must be strictly increasing");
      }
    }
  }
  PartitionScheme s;
  s.domains_ = std::move(domains);
  s.cuts_ = std::move(cuts);
  s.mode_ = mode;
  s.seed_ = seed;
  return s;
}

int PartitionScheme::cell_of(std::size_t dim, double value) const {
  const auto& c = cuts_.at(dim);
  // Cell k covers [cut_{k-1}, cut_k); a value on a cut belongs to the upper cell.
  return static_cast<int>(std::upper_bound(c.begin(), c.end(), value) - c.begin()) + 1;
}

int PartitionScheme::cells_excluding(std::size_t input) const {
  int n = 1;
  for (std::size_t j = 0; j < dims(); ++j) {
    if (j != input) n *= count(j);
  }
  return n;
}

int PartitionScheme::route(std::size_t input, std::span<const double> x) const {
  if (x.size() != dims()) throw InputError("input has wrong dimensionality");
  if (input >= dims()) throw InputError("input index out of range");
  int cell = 0;
  int stride = 1;
  for (std::size_t j = 0; j < dims(); ++j) {
    if (j == input) continue;
    cell += (cell_of(j, x[j]) - 1) * stride;
    stride *= count(j);
  }
  return cell + 1;
}

std::size_t PartitionScheme::plane_count() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < dims(); ++i) n += static_cast<std::size_t>(cells_excluding(i));
  return n;
}

// ---- AlmConfig -------------------------------------------------------------

void AlmConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(spread_floor > 0.0)) throw ConfigError("spread floor must be positive");
  if (!(spread_threshold >= 0.0)) throw ConfigError("spread threshold must be non-negative");
  if (min_plane_samples < 0) throw ConfigError("minimum plane samples must be non-negative");
  if (max_partitions < 1) throw ConfigError("max partitions must be at least 1");
  if (target_error && !(*target_error >= 0.0)) throw ConfigError("target error must be >= 0");
  for (int p : partitions) {
    if (p < 1) throw ConfigError("partition counts must be at least 1");
  }
  fast.validate();
  if (backend == Backend::kClassic) (void)Kernel2D(kernel);
  if (backend == Backend::kCrossbar) {
    device.validate();
    circuit.validate(device);
  }
}

// ---- AlmModel --------------------------------------------------------------

std::size_t stored_cells(const Plane& plane) {
  return std::visit([](const auto& p) { return p.stored_cells(); }, plane);
}

AlmModel AlmModel::fit(std::span<const Sample> data, const AlmConfig& config) {
  if (data.empty()) throw InputError("dataset is empty");
  const std::size_t dims = data.front().dims();
  if (dims == 0) throw InputError("samples need at least one input");
  for (const auto& s : data) {
    if (s.dims() != dims) throw InputError("inconsistent sample dimensionality");
    if (!std::isfinite(s.y)) throw InputError("non-finite sample output");
    for (double v : s.x) {
      if (!std::isfinite(v)) throw InputError("non-finite sample input");
    }
  }

  AlmConfig cfg = config;
  cfg.validate();
  cfg.fast.spread_floor = cfg.spread_floor;
  if (cfg.partitions.empty()) cfg.partitions.assign(dims, 1);
  if (cfg.partitions.size() != dims) throw ConfigError("one partition count per input");
  if (cfg.input_domains.empty()) {
    for (std::size_t d = 0; d < dims; ++d) cfg.input_domains.push_back(range_of(data, d));
  }
  if (cfg.input_domains.size() != dims) throw ConfigError("one input domain per input");
  if (!cfg.output_domain) cfg.output_domain = range_of(data, std::nullopt);

  auto build = [&](std::vector<int> counts) {
    AlmModel m;
    m.config_ = cfg;
    m.config_.partitions = counts;
    m.output_domain_ = *cfg.output_domain;
    m.scheme_ = cfg.partition_mode == PartitionMode::kUniform
                    ? PartitionScheme::uniform(cfg.input_domains, std::move(counts))
                    : PartitionScheme::random(cfg.input_domains, std::move(counts), cfg.seed);
    for (std::size_t i = 0; i < dims; ++i) {
      m.offsets_.push_back(m.planes_.size());
      for (int c = 0; c < m.scheme_.cells_excluding(i); ++c) m.planes_.push_back(make_plane(cfg));
    }
    m.train(data);
    return m;
  };

  if (!cfg.auto_partition) return build(cfg.partitions);

  std::vector<int> counts(dims, 1);
  AlmModel model = build(counts);
  while (cfg.target_error) {
    std::vector<double> pred;
    std::vector<double> truth;
    for (const auto& s : data) {
      pred.push_back(model.predict(s.x));
      truth.push_back(s.y);
    }
    try {
      if (fvu(pred, truth) <= *cfg.target_error) break;
    } catch (const MetricError&) {
      break;
    }
    for (int& p : counts) p *= 2;
    if (std::any_of(counts.begin(), counts.end(),
                    [&](int p) { return p > cfg.max_partitions; })) {
      break;
    }
    AlmModel candidate = build(counts);
    const auto& routed = candidate.routed_counts();
    if (std::any_of(routed.begin(), routed.end(), [&](std::size_t n) {
          return n < static_cast<std::size_t>(cfg.min_plane_samples);
        })) {
      break;
    }
    model = std::move(candidate);
  }
  return model;
}

void AlmModel::train(std::span<const Sample> data) {
  const Resolution& res = config_.resolution;
  std::vector<std::vector<QuantizedSample>> buckets(planes_.size());
  for (const auto& s : data) {
    const double yq = quantize(s.y, output_domain_, res.rsn_y);
    for (std::size_t i = 0; i < dims(); ++i) {
      const int cell = scheme_.route(i, s.x);
      const int xq = quantize(s.x[i], scheme_.domain(i), res.rsn_x);
      buckets[offsets_[i] + static_cast<std::size_t>(cell - 1)].push_back({xq, yq});
    }
  }
  routed_.clear();
  for (const auto& b : buckets) routed_.push_back(b.size());

  const int epochs = config_.epochs;
  parallel_for(planes_.size(), resolve_threads(config_.threads), [&](std::size_t p) {
    const auto& bucket = buckets[p];
    std::visit(Overloaded{
                   [&](IdsPlane& plane) {
                     for (int e = 0; e < epochs; ++e) plane.train(bucket);
                   },
                   [&](DescribingVectors& plane) { plane.train(bucket, epochs); },
                   [&](CrossbarPlane& plane) {
                     for (int e = 0; e < epochs; ++e) {
                       for (const auto& s : bucket) plane.write_sample(s.x, s.y);
                     }
                   },
               },
               planes_[p]);
  });
}

std::size_t AlmModel::plane_index(std::size_t input, int cell) const {
  if (input < 1 || input > dims()) throw InputError("input index out of range");
  if (cell < 1 || cell > scheme_.cells_excluding(input - 1)) {
    throw InputError("cell index out of range");
  }
  return offsets_[input - 1] + static_cast<std::size_t>(cell - 1);
}

const Plane& AlmModel::plane(std::size_t input, int cell) const {
  return planes_[plane_index(input, cell)];
}

std::vector<Contribution> AlmModel::explain(std::span<const double> x) const {
  if (x.size() != dims()) throw InputError("input has wrong dimensionality");
  std::vector<Contribution> out;
  double inv_sum = 0.0;
  for (std::size_t i = 0; i < dims(); ++i) {
    Contribution c;
    c.input = i + 1;
    c.cell = scheme_.route(i, x);
    c.column = quantize(x[i], scheme_.domain(i), config_.resolution.rsn_x);
    const auto f = features_at(planes_[offsets_[i] + static_cast<std::size_t>(c.cell - 1)], c.column);
    c.path = f.path;
    c.spread = std::max(f.spread, config_.spread_floor);
    inv_sum += 1.0 / c.spread;
    out.push_back(c);
  }
  for (auto& c : out) c.beta = (1.0 / c.spread) / inv_sum;
  return out;
}

double AlmModel::predict_level(std::span<const double> x) const {
  double level = 0.0;
  for (const auto& c : explain(x)) level += c.beta * c.path;
  return level;
}

double AlmModel::predict(std::span<const double> x) const {
  return output_domain_.min +
         predict_level(x) * output_domain_.width() / config_.resolution.rsn_y;
}

double AlmModel::classify(std::span<const double> x, std::span<const double> labels) const {
  if (labels.empty()) throw InputError("classify needs at least one label");
  std::vector<double> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  const double y = predict(x);
  double best = sorted.front();
  double best_d = std::abs(y - best);
  for (double l : sorted) {
    const double d = std::abs(y - l);
    if (d < best_d) {
      best = l;
      best_d = d;
    }
  }
  return best;
}

std::vector<double> AlmModel::mean_spread_per_input() const {
  std::vector<double> out;
  const int cols = config_.resolution.rsn_x;
  for (std::size_t i = 0; i < dims(); ++i) {
    const std::size_t first = offsets_[i];
    const std::size_t last = i + 1 < dims() ? offsets_[i + 1] : planes_.size();
    double sum = 0.0;
    for (std::size_t p = first; p < last; ++p) {
      for (int x = 1; x <= cols; ++x) {
        sum += std::max(features_at(planes_[p], x).spread, config_.spread_floor);
      }
    }
    out.push_back(sum / static_cast<double>((last - first) * static_cast<std::size_t>(cols)));
  }
  return out;
}

std::size_t AlmModel::stored_cells() const {
  std::size_t n = 0;
  for (const auto& p : planes_) n += fastids::stored_cells(p);
  return n;
}

void AlmModel::write_plane_csv(std::ostream& out, std::size_t input, int cell, bool fuzzy,
                               int precision) const {
  std::visit(Overloaded{
                 [&](const IdsPlane& p) { p.write_csv(out, precision); },
                 [&](const DescribingVectors& v) {
                   v.write_csv(out, precision);
                   if (fuzzy) v.write_fuzzy_csv(out, precision);
                 },
                 [&](const CrossbarPlane& c) {
                   const auto v = c.read_vectors(config_.fast);
                   v.write_csv(out, precision);
                   if (fuzzy) v.write_fuzzy_csv(out, precision);
                 },
             },
             plane(input, cell));
}

}  // namespace fastids
