#ifndef FASTIDS_BENCH_HPP
#define FASTIDS_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastids/alm.hpp"
#include "fastids/core.hpp"
#include "fastids/metrics.hpp"

namespace fastids {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (1 + x1^-2 + x2^-1.5)^2.
double f1(double x1, double x2);
/// sqrt(2 (sin x1 / x1)^2 + 3 (sin x2 / x2)^2).
double f2(double x1, double x2);

/// x1, x2 uniform on [1, 10].
std::vector<Sample> gen_f1(std::size_t n, std::uint64_t seed);
std::vector<Sample> gen_f2(std::size_t n, std::uint64_t seed);

struct SpiralParams {
  double pitch = 0.31830988618379067;  // p = 1 / pi
  double turns = 3.0;                  // n
  double r0 = 0.5;

  /// Radius at the outer end of the spiral.
  double max_radius() const;
};

/// Class 0 follows r = p (theta + 2 pi n) + r0 for theta in [-2 pi n, 0];
/// class 1 is its point reflection. Angles are stratified over the range
/// and jittered inside each stratum; the two classes are then shuffled
/// together.
std::vector<Sample> gen_two_spiral(std::size_t n_per_class, const SpiralParams& params,
                                   std::uint64_t seed);

struct RingParams {
  double r1 = 1.0;  // compared with x1^2 + x2^2 directly
  double r2 = 4.0;
  double box_min = -3.0;
  double box_max = 3.0;
};

/// Uniform rejection sampling in the square box; labels 0, 1, 2 by the ring
/// thresholds. Points exactly on a threshold are redrawn.
std::vector<Sample> gen_three_ring(std::size_t n_per_class, const RingParams& params,
                                   std::uint64_t seed);

/// Header `x1,...,xD,y`, then one sample per line.
void write_dataset_csv(std::ostream& out, std::span<const Sample> data, int precision);
/// Accepts an optional header line.
std::vector<Sample> read_dataset_csv(std::istream& in);

enum class DatasetKind { kF1, kF2, kTwoSpiral, kThreeRing };
std::string to_string(DatasetKind kind);
DatasetKind dataset_from_string(const std::string& name);
bool is_classification(DatasetKind kind);
std::vector<double> dataset_labels(DatasetKind kind);
/// Natural input domains of a generated dataset.
std::vector<Domain> dataset_domains(DatasetKind kind, const SpiralParams& spiral,
                                    const RingParams& ring);
/// Total sample counts; class datasets split them evenly across classes.
std::vector<Sample> generate(DatasetKind kind, std::size_t total, std::uint64_t seed,
                             const SpiralParams& spiral, const RingParams& ring);

struct BenchRequest {
  DatasetKind dataset = DatasetKind::kF2;
  std::vector<Backend> backends{Backend::kFast};
  AlmConfig config;  // backend and seed are set per run
  std::size_t train_size = 1000;
  std::size_t test_size = 1000;
  int runs = 1;
  std::uint64_t seed = 0;
  bool serial = false;
  unsigned threads = 0;
  SpiralParams spiral;
  RingParams ring;
};

struct RunRecord {
  Backend backend = Backend::kFast;
  std::string dataset;
  std::vector<int> partitions;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  int epochs = 1;
  int run = 0;
  std::uint64_t seed = 0;
  std::string metric;  // "fvu" or "accuracy"
  double value = 0.0;
  double train_seconds = 0.0;
  double predict_seconds = 0.0;
  std::size_t planes = 0;
  std::size_t stored_cells = 0;
  std::size_t cells_per_plane = 0;
};

struct RunSummary {
  Backend backend = Backend::kFast;
  std::string dataset;
  std::vector<int> partitions;
  std::size_t train_size = 0;
  int runs = 0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
  double mean_train_seconds = 0.0;
  double mean_predict_seconds = 0.0;
  std::size_t stored_cells = 0;
  std::size_t cells_per_plane = 0;
};

struct BenchReport {
  std::vector<RunRecord> runs;
  std::vector<RunSummary> summaries;
  /// Classic over fast mean fit time, when both backends ran.
  std::optional<double> speedup;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

/// Run r draws its data, partitions and model seed from mix_seed(seed, r);
/// every backend in a run sees the same data.
BenchReport run_benchmark(const BenchRequest& request);

/// One train/evaluate cycle with timing, exposed for direct use.
RunRecord run_once(const BenchRequest& request, Backend backend, int run,
                   std::span<const Sample> train, std::span<const Sample> test);

}  // namespace fastids

#endif  // FASTIDS_BENCH_HPP
