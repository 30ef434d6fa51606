#ifndef FASTIDS_FAST_IDS_HPP
#define FASTIDS_FAST_IDS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fastids/core.hpp"

namespace fastids {

struct FastIdsParams {
  double alpha1 = 0.6;  // learning rate of the lower/upper bound vectors
  double alpha2 = 0.5;  // learning rate of the narrow-path vector
  double sigma = 15.0;  // neighbourhood blur, in input levels
  int radius = 0;       // neighbourhood half-width; 0 selects ceil(3 sigma)
  double spread_floor = 1.0;

  int effective_radius() const;
  void validate() const;
};

/// Membership function attached to one input level: centred on the narrow
/// path, as wide as the spread.
struct FuzzyOutput {
  double center = 0.0;
  double width = 0.0;

  /// Gaussian membership of an output level, 1 at the centre.
  double membership(double level) const;
};

/// Three length-Rsn_x vectors standing in for a full ink-drop plane.
///
/// `lower` and `upper` bracket the observed outputs; their gap plays the
/// role of the spread. `path` tracks the narrow path. A sample (xs, ys)
/// moves every column within `radius` of xs by
///
///     alpha * (ys - v(xs)) * g(u)
///
/// where the distance is measured at the centre column xs for all
/// neighbours and g is a Gaussian in the column offset u. All values are
/// clamped to [0, rsn_y]. Neighbour columns can receive a larger bound
/// correction than their own gap, so a column whose bounds would cross is
/// collapsed onto the midpoint of the two.
///
/// Training is order-dependent.
class DescribingVectors {
 public:
  DescribingVectors(Resolution resolution, FastIdsParams params);

  static DescribingVectors from_levels(Resolution resolution, FastIdsParams params,
                                       std::vector<double> lower, std::vector<double> upper,
                                       std::vector<double> path);

  void update(int xq, double yq);
  void train(std::span<const QuantizedSample> samples, int epochs = 1);

  double narrow_path(int xq) const;
  /// upper - lower, never below the configured floor.
  double spread(int xq) const;
  FuzzyOutput fuzzy_output(int xq, double width_scale = 1.0) const;

  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }
  std::span<const double> path() const { return path_; }

  const Resolution& resolution() const { return resolution_; }
  const FastIdsParams& params() const { return params_; }
  int radius() const { return radius_; }
  std::size_t stored_cells() const { return lower_.size() + upper_.size() + path_.size(); }

  /// Three rows (lower, upper, path), rsn_x columns each.
  void write_csv(std::ostream& out, int precision) const;
  /// Appends the fuzzy output as two more rows (centre, width).
  void write_fuzzy_csv(std::ostream& out, int precision, double width_scale = 1.0) const;
  static DescribingVectors read_csv(std::istream& in, Resolution resolution,
                                    FastIdsParams params);

  bool operator==(const DescribingVectors& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_ && path_ == other.path_;
  }

 private:
  void check_column(int xq) const;
  std::size_t at(int xq) const { return static_cast<std::size_t>(xq - 1); }

  Resolution resolution_;
  FastIdsParams params_;
  int radius_;
  std::vector<double> weights_;  // g(u) for u = -radius..radius
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> path_;
};

}  // namespace fastids

#endif  // FASTIDS_FAST_IDS_HPP
