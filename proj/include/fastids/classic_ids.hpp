#ifndef FASTIDS_CLASSIC_IDS_HPP
#define FASTIDS_CLASSIC_IDS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fastids/core.hpp"

namespace fastids {

/// Dense ink-drop plane: one darkness cell per (input level, output level).
///
/// This is the straightforward O(Rsn_x * Rsn_y) baseline. Every training
/// sample stamps the kernel centred on its quantized coordinates; narrow
/// path and spread are extracted per column on demand.
class IdsPlane {
 public:
  IdsPlane(Resolution resolution, KernelShape kernel, double spread_threshold = 0.0);

  /// Adds one kernel stamp centred on (xq, yq), truncated at the borders.
  void ink_drop(int xq, int yq);
  void train(std::span<const QuantizedSample> samples);

  /// Smallest level b whose cumulative column darkness reaches half of the
  /// column total. A white column yields ceil(rsn_y / 2).
  int narrow_path(int xq) const;

  /// Distance between the outermost cells darker than the threshold, or
  /// rsn_y / 2 when no cell qualifies.
  int spread(int xq) const;

  double darkness(int xq, int yq) const { return cells_[index(xq, yq)]; }
  double total_darkness() const;
  /// Kernel mass a stamp at (xq, yq) would deposit inside the grid.
  double in_grid_mass(int xq, int yq) const;

  const Resolution& resolution() const { return resolution_; }
  const KernelShape& kernel_shape() const { return shape_; }
  double spread_threshold() const { return threshold_; }
  std::size_t stored_cells() const { return cells_.size(); }

  /// Row-major matrix: rsn_y rows (row 1 = output level 1) by rsn_x columns.
  void write_csv(std::ostream& out, int precision) const;
  static IdsPlane read_csv(std::istream& in, Resolution resolution, KernelShape kernel,
                           double spread_threshold);

  bool operator==(const IdsPlane& other) const { return cells_ == other.cells_; }

 private:
  std::size_t index(int xq, int yq) const {
    return static_cast<std::size_t>(xq - 1) * static_cast<std::size_t>(resolution_.rsn_y) +
           static_cast<std::size_t>(yq - 1);
  }
  void check_column(int xq) const;

  Resolution resolution_;
  KernelShape shape_;
  Kernel2D kernel_;
  double threshold_;
  // Column-major: each input level owns a contiguous run of rsn_y cells.
  std::vector<double> cells_;
};

}  // namespace fastids

#endif  // FASTIDS_CLASSIC_IDS_HPP
