#include "fastids/classic_ids.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "csv_io.hpp"

namespace fastids {

IdsPlane::IdsPlane(Resolution resolution, KernelShape kernel, double spread_threshold)
    : resolution_(resolution),
      shape_(kernel),
      kernel_(kernel),
      threshold_(spread_threshold),
      cells_(static_cast<std::size_t>(resolution.rsn_x) * resolution.rsn_y, 0.0) {
  if (spread_threshold < 0.0) throw ConfigError("spread threshold must be non-negative");
}

void IdsPlane::check_column(int xq) const {
  if (xq < 1 || xq > resolution_.rsn_x) {
    throw InputError("input level " + std::to_string(xq) + " outside [1, " +
                     std::to_string(resolution_.rsn_x) + "]");
  }
}

void IdsPlane::ink_drop(int xq, int yq) {
  check_column(xq);
  if (yq < 1 || yq > resolution_.rsn_y) {
    throw InputError("output level " + std::to_string(yq) + " outside [1, " +
                     std::to_string(resolution_.rsn_y) + "]");
  }
  const int r = kernel_.radius();
  const int u_lo = std::max(-r, 1 - xq);
  const int u_hi = std::min(r, resolution_.rsn_x - xq);
  const int v_lo = std::max(-r, 1 - yq);
  const int v_hi = std::min(r, resolution_.rsn_y - yq);
  for (int u = u_lo; u <= u_hi; ++u) {
    double* column = &cells_[index(xq + u, 1)];
    for (int v = v_lo; v <= v_hi; ++v) {
      column[yq + v - 1] += kernel_.at(u, v);
    }
  }
}

void IdsPlane::train(std::span<const QuantizedSample> samples) {
  for (const auto& s : samples) {
    ink_drop(s.x, static_cast<int>(s.y));
  }
}

int IdsPlane::narrow_path(int xq) const {
  check_column(xq);
  const double* column = &cells_[index(xq, 1)];
  const double total = std::accumulate(column, column + resolution_.rsn_y, 0.0);
  if (total <= 0.0) return (resolution_.rsn_y + 1) / 2;
  const double half = 0.5 * total;
  double running = 0.0;
  for (int y = 1; y <= resolution_.rsn_y; ++y) {
    running += column[y - 1];
    if (running >= half) return y;
  }
  return resolution_.rsn_y;
}

int IdsPlane::spread(int xq) const {
  check_column(xq);
  const double* column = &cells_[index(xq, 1)];
  int lo = 0;
  int hi = 0;
  for (int y = 1; y <= resolution_.rsn_y; ++y) {
    if (column[y - 1] > threshold_) {
      if (lo == 0) lo = y;
      hi = y;
    }
  }
  if (lo == 0) return resolution_.rsn_y / 2;
  return hi - lo;
}

double IdsPlane::total_darkness() const {
  return std::accumulate(cells_.begin(), cells_.end(), 0.0);
}

double IdsPlane::in_grid_mass(int xq, int yq) const {
  const int r = kernel_.radius();
  double mass = 0.0;
  for (int u = -r; u <= r; ++u) {
    if (xq + u < 1 || xq + u > resolution_.rsn_x) continue;
    for (int v = -r; v <= r; ++v) {
      if (yq + v < 1 || yq + v > resolution_.rsn_y) continue;
      mass += kernel_.at(u, v);
    }
  }
  return mass;
}

void IdsPlane::write_csv(std::ostream& out, int precision) const {
  for (int y = 1; y <= resolution_.rsn_y; ++y) {
    for (int x = 1; x <= resolution_.rsn_x; ++x) {
      if (x > 1) out << ',';
      detail::write_number(out, darkness(x, y), precision);
    }
    out << '\n';
  }
}

IdsPlane IdsPlane::read_csv(std::istream& in, Resolution resolution, KernelShape kernel,
                            double spread_threshold) {
  IdsPlane plane(resolution, kernel, spread_threshold);
  const auto rows = detail::read_numeric_rows(in);
  if (rows.size() != static_cast<std::size_t>(resolution.rsn_y)) {
    throw InputError("plane CSV has " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(resolution.rsn_y));
  }
  for (int y = 1; y <= resolution.rsn_y; ++y) {
    const auto& row = rows[static_cast<std::size_t>(y - 1)];
    if (row.size() != static_cast<std::size_t>(resolution.rsn_x)) {
      throw InputError("plane CSV row " + std::to_string(y) + " has wrong width");
    }
    for (int x = 1; x <= resolution.rsn_x; ++x) {
      const double d = row[static_cast<std::size_t>(x - 1)];
      if (d < 0.0) throw InputError("negative darkness in plane CSV");
      plane.cells_[plane.index(x, y)] = d;
    }
  }
  return plane;
}

}  // namespace fastids
