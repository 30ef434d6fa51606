#ifndef FASTIDS_ALM_HPP
#define FASTIDS_ALM_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fastids/classic_ids.hpp"
#include "fastids/core.hpp"
#include "fastids/fast_ids.hpp"
#include "fastids/memristor.hpp"

namespace fastids {

enum class Backend { kClassic, kFast, kCrossbar };
std::string to_string(Backend backend);
Backend backend_from_string(const std::string& name);

enum class PartitionMode { kUniform, kRandom };
std::string to_string(PartitionMode mode);
PartitionMode partition_mode_from_string(const std::string& name);

/// Cut points per input dimension. Dimension i with P_i cells has P_i - 1
/// strictly increasing interior cuts; cells are numbered from 1.
class PartitionScheme {
 public:
  PartitionScheme() = default;

  static PartitionScheme uniform(std::vector<Domain> domains, std::vector<int> counts);
  static PartitionScheme random(std::vector<Domain> domains, std::vector<int> counts,
                                std::uint64_t seed);
  static PartitionScheme from_cuts(std::vector<Domain> domains,
                                   std::vector<std::vector<double>> cuts, PartitionMode mode,
                                   std::uint64_t seed);

  std::size_t dims() const { return domains_.size(); }
  int count(std::size_t dim) const { return static_cast<int>(cuts_.at(dim).size()) + 1; }
  const std::vector<double>& cuts(std::size_t dim) const { return cuts_.at(dim); }
  const Domain& domain(std::size_t dim) const { return domains_.at(dim); }
  PartitionMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }

  /// 1-based cell of `value` along one dimension; out-of-domain values land
  /// in the nearest end cell.
  int cell_of(std::size_t dim, double value) const;

  /// Number of joint cells of every dimension except `input`.
  int cells_excluding(std::size_t input) const;

  /// Joint cell (1-based, mixed radix over j != input, lowest j fastest).
  int route(std::size_t input, std::span<const double> x) const;

  /// sum_i prod_{j != i} P_j.
  std::size_t plane_count() const;

 private:
  std::vector<Domain> domains_;
  std::vector<std::vector<double>> cuts_;
  PartitionMode mode_ = PartitionMode::kUniform;
  std::uint64_t seed_ = 0;
};

struct AlmConfig {
  Resolution resolution;
  Backend backend = Backend::kFast;

  KernelShape kernel = KernelShape::gaussian(15.0);  // classic
  double spread_threshold = 0.0;                      // classic T
  FastIdsParams fast;                                 // fast, and crossbar read-back
  DeviceParams device;                                // crossbar
  CircuitParams circuit;                              // crossbar

  std::vector<int> partitions;  // per input; empty means 1 everywhere
  PartitionMode partition_mode = PartitionMode::kUniform;
  int epochs = 1;
  std::uint64_t seed = 0;
  double spread_floor = 1.0;  // applied to every backend's spread before weighting

  /// Input domains; empty means the per-dimension range of the training set.
  std::vector<Domain> input_domains;
  /// Output domain; unset means the range of the training targets.
  std::optional<Domain> output_domain;

  bool auto_partition = false;
  std::optional<double> target_error;  // T1, training-set FVU
  int min_plane_samples = 5;           // T2
  int max_partitions = 16;

  unsigned threads = 0;  // 0 selects resolve_threads(0)

  void validate() const;
};

using Plane = std::variant<IdsPlane, DescribingVectors, CrossbarPlane>;

/// What one input contributes to a prediction.
struct Contribution {
  std::size_t input = 0;
  int cell = 1;
  int column = 1;
  double path = 0.0;    // narrow path, output levels
  double spread = 0.0;  // after the floor
  double beta = 0.0;
};

class AlmModel {
 public:
  static AlmModel fit(std::span<const Sample> data, const AlmConfig& config);

  /// Output in output units.
  double predict(std::span<const double> x) const;
  /// Weighted narrow path in output levels.
  double predict_level(std::span<const double> x) const;
  std::vector<Contribution> explain(std::span<const double> x) const;

  /// Nearest label to predict(x); ties go to the smaller label.
  double classify(std::span<const double> x, std::span<const double> labels) const;

  /// Mean floored spread over every column of every plane of each input.
  std::vector<double> mean_spread_per_input() const;

  std::size_t dims() const { return scheme_.dims(); }
  Backend backend() const { return config_.backend; }
  const AlmConfig& config() const { return config_; }
  const PartitionScheme& scheme() const { return scheme_; }
  const Domain& input_domain(std::size_t i) const { return scheme_.domain(i); }
  const Domain& output_domain() const { return output_domain_; }

  std::size_t plane_count() const { return planes_.size(); }
  /// Plane for 1-based (input, cell).
  const Plane& plane(std::size_t input, int cell) const;
  /// Samples routed to each plane during the last fit, in plane order.
  const std::vector<std::size_t>& routed_counts() const { return routed_; }
  std::size_t stored_cells() const;

  /// Backend-native dump of one plane; `fuzzy` appends centre/width rows for
  /// vector backends.
  void write_plane_csv(std::ostream& out, std::size_t input, int cell, bool fuzzy,
                       int precision) const;

  /// model.json plus plane_i<input>_c<cell>.csv files.
  void save(const std::filesystem::path& dir) const;
  static AlmModel load(const std::filesystem::path& dir);

 private:
  std::size_t plane_index(std::size_t input, int cell) const;
  void train(std::span<const Sample> data);

  AlmConfig config_;
  PartitionScheme scheme_;
  Domain output_domain_;
  std::vector<std::size_t> offsets_;  // first plane of each input
  std::vector<Plane> planes_;
  std::vector<std::size_t> routed_;
};

std::size_t stored_cells(const Plane& plane);

}  // namespace fastids

#endif  // FASTIDS_ALM_HPP
