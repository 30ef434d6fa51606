#include "fastids/fast_ids.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "csv_io.hpp"

namespace fastids {

int FastIdsParams::effective_radius() const {
  return radius > 0 ? radius : static_cast<int>(std::ceil(3.0 * sigma));
}

void FastIdsParams::validate() const {
  if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw ConfigError("alpha1 must lie in (0, 1]");
  if (!(alpha2 > 0.0 && alpha2 <= 1.0)) throw ConfigError("alpha2 must lie in (0, 1]");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (radius < 0) throw ConfigError("neighbourhood radius must be non-negative");
  if (!(spread_floor > 0.0)) throw ConfigError("spread floor must be positive");
}

double FuzzyOutput::membership(double level) const {
  if (width <= 0.0) return level == center ? 1.0 : 0.0;
  const double d = level - center;
  return std::exp(-(d * d) / (2.0 * width * width));
}

DescribingVectors::DescribingVectors(Resolution resolution, FastIdsParams params)
    : resolution_(resolution), params_(params) {
  params_.validate();
  radius_ = params_.effective_radius();
  weights_.resize(2 * static_cast<std::size_t>(radius_) + 1);
  for (int u = -radius_; u <= radius_; ++u) {
    weights_[static_cast<std::size_t>(u + radius_)] = gaussian_weight(u, params_.sigma);
  }
  const auto n = static_cast<std::size_t>(resolution.rsn_x);
  lower_.assign(n, 0.0);
  upper_.assign(n, static_cast<double>(resolution.rsn_y));
  path_.assign(n, resolution.rsn_y / 2.0);
}

DescribingVectors DescribingVectors::from_levels(Resolution resolution, FastIdsParams params,
                                                 std::vector<double> lower,
                                                 std::vector<double> upper,
                                                 std::vector<double> path) {
  DescribingVectors v(resolution, params);
  const auto n = static_cast<std::size_t>(resolution.rsn_x);
  if (lower.size() != n || upper.size() != n || path.size() != n) {
    throw InputError("describing vectors must have rsn_x entries each");
  }
  v.lower_ = std::move(lower);
  v.upper_ = std::move(upper);
  v.path_ = std::move(path);
  return v;
}

void DescribingVectors::check_column(int xq) const {
  if (xq < 1 || xq > resolution_.rsn_x) {
    throw InputError("input level " + std::to_string(xq) + " outside [1, " +
                     std::to_string(resolution_.rsn_x) + "]");
  }
}

void DescribingVectors::update(int xq, double yq) {
  check_column(xq);
  const double top = resolution_.rsn_y;
  if (!std::isfinite(yq) || yq < 0.0 || yq > top) {
    throw InputError("output level " + std::to_string(yq) + " outside [0, " +
                     std::to_string(resolution_.rsn_y) + "]");
  }
  const std::size_t c = at(xq);
  const double d_lower = params_.alpha1 * (yq - lower_[c]);
  const double d_upper = params_.alpha1 * (yq - upper_[c]);
  const double d_path = params_.alpha2 * (yq - path_[c]);

  const int u_lo = std::max(-radius_, 1 - xq);
  const int u_hi = std::min(radius_, resolution_.rsn_x - xq);
  const double* g = weights_.data() + radius_;  // g[u] for u in [-radius, radius]
  // The three rows never alias; saying so lets the loop vectorize.
  double* __restrict lower = lower_.data() + c;
  double* __restrict upper = upper_.data() + c;
  double* __restrict path = path_.data() + c;
  for (int u = u_lo; u <= u_hi; ++u) {
    const double lo = std::min(std::max(lower[u] + d_lower * g[u], 0.0), top);
    const double hi = std::min(std::max(upper[u] + d_upper * g[u], 0.0), top);
    const double mid = 0.5 * (lo + hi);
    const bool crossed = lo > hi;
    lower[u] = crossed ? mid : lo;
    upper[u] = crossed ? mid : hi;
    path[u] = std::min(std::max(path[u] + d_path * g[u], 0.0), top);
  }
}

void DescribingVectors::train(std::span<const QuantizedSample> samples, int epochs) {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  for (int e = 0; e < epochs; ++e) {
    for (const auto& s : samples) update(s.x, s.y);
  }
}

double DescribingVectors::narrow_path(int xq) const {
  check_column(xq);
  return path_[at(xq)];
}

double DescribingVectors::spread(int xq) const {
  check_column(xq);
  return std::max(upper_[at(xq)] - lower_[at(xq)], params_.spread_floor);
}

FuzzyOutput DescribingVectors::fuzzy_output(int xq, double width_scale) const {
  return {narrow_path(xq), width_scale * spread(xq)};
}

namespace {

void write_row(std::ostream& out, std::span<const double> row, int precision) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out << ',';
    detail::write_number(out, row[i], precision);
  }
  out << '\n';
}

}  // namespace

void DescribingVectors::write_csv(std::ostream& out, int precision) const {
  write_row(out, lower_, precision);
  write_row(out, upper_, precision);
  write_row(out, path_, precision);
}

void DescribingVectors::write_fuzzy_csv(std::ostream& out, int precision,
                                        double width_scale) const {
  std::vector<double> centers(path_.size());
  std::vector<double> widths(path_.size());
  for (int x = 1; x <= resolution_.rsn_x; ++x) {
    const auto f = fuzzy_output(x, width_scale);
    centers[at(x)] = f.center;
    widths[at(x)] = f.width;
  }
  write_row(out, centers, precision);
  write_row(out, widths, precision);
}

DescribingVectors DescribingVectors::read_csv(std::istream& in, Resolution resolution,
                                              FastIdsParams params) {
  auto rows = detail::read_numeric_rows(in);
  if (rows.size() < 3) throw InputError("describing-vector CSV needs 3 rows");
  const double top = resolution.rsn_y;
  for (std::size_t r = 0; r < 3; ++r) {
    for (double v : rows[r]) {
      if (v < 0.0 || v > top) throw InputError("describing-vector level out of range");
    }
  }
  return from_levels(resolution, params, std::move(rows[0]), std::move(rows[1]),
                     std::move(rows[2]));
}

}  // namespace fastids
