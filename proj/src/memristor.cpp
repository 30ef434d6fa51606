#include "fastids/memristor.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "csv_io.hpp"

namespace fastids {

namespace {

constexpr long long kMinStepsPerPulse = 16;

double memristance_at(double w, const DeviceParams& p) {
  const double x = w / p.thickness;
  return p.r_on * x + p.r_off * (1.0 - x);
}

// Flux-like antiderivative of R_M(w) in w; R_M dw = k V dt.
double flux_integral(double w, const DeviceParams& p) {
  return p.r_off * w - (p.r_off - p.r_on) * w * w / (2.0 * p.thickness);
}

}  // namespace

void DeviceParams::validate() const {
  if (!(thickness > 0.0)) throw ConfigError("device thickness must be positive");
  if (!(mobility > 0.0)) throw ConfigError("ion mobility must be positive");
  if (!(r_on > 0.0 && r_on < r_off)) throw ConfigError("device needs 0 < R_on < R_off");
  if (!(write_threshold > 0.0)) throw ConfigError("write threshold must be positive");
  if (!(dt > 0.0)) throw ConfigError("integration step must be positive");
}

double memristance(MemristorState state, const DeviceParams& params) {
  return memristance_at(state.w, params);
}

MemristorState state_for_memristance(double ohms, const DeviceParams& params) {
  const double r = std::clamp(ohms, params.r_on, params.r_off);
  const double w = (params.r_off - r) * params.thickness / (params.r_off - params.r_on);
  return {std::clamp(w, 0.0, params.thickness)};
}

MemristorState apply_pulse(MemristorState state, double volts, double duration,
                           const DeviceParams& params) {
  if (!std::isfinite(volts)) throw InputError("pulse amplitude must be finite");
  if (!std::isfinite(duration) || duration < 0.0) {
    throw InputError("pulse duration must be finite and non-negative");
  }
  if (std::abs(volts) < params.write_threshold || duration == 0.0) return state;

  const long long steps =
      std::max(kMinStepsPerPulse, static_cast<long long>(std::ceil(duration / params.dt)));
  const double h = duration / static_cast<double>(steps);
  const double gain = params.drift_coefficient() * volts * h;
  const double top = params.thickness;
  // Classic RK4; stage points are clamped so R_M stays inside [R_on, R_off].
  auto slope = [&](double x) { return gain / memristance_at(std::clamp(x, 0.0, top), params); };
  double w = state.w;
  for (long long i = 0; i < steps; ++i) {
    const double k1 = slope(w);
    const double k2 = slope(w + 0.5 * k1);
    const double k3 = slope(w + 0.5 * k2);
    const double k4 = slope(w + k3);
    w += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (w >= params.thickness) {
      w = params.thickness;
      if (volts > 0.0) break;
    } else if (w <= 0.0) {
      w = 0.0;
      if (volts < 0.0) break;
    }
  }
  return {w};
}

double pulse_time_between(MemristorState from, MemristorState to, double volts,
                          const DeviceParams& params) {
  const double a = std::abs(volts);
  if (!(a > 0.0)) throw InputError("pulse amplitude must be non-zero");
  const double delta = flux_integral(to.w, params) - flux_integral(from.w, params);
  return std::abs(delta) / (params.drift_coefficient() * a);
}

std::string to_string(CrossbarRow row) {
  switch (row) {
    case CrossbarRow::kUpper: return "upper";
    case CrossbarRow::kLower: return "lower";
    case CrossbarRow::kPath: return "path";
  }
  return "unknown";
}

void CircuitParams::validate(const DeviceParams& device) const {
  if (r_f1 != device.r_on) throw ConfigError("R_F1 must equal R_on");
  if (!(v_read > 0.0)) throw ConfigError("v_read must be positive");
  if (v_bias != v_read) throw ConfigError("v_bias must equal v_read");
  if (v_read >= device.write_threshold) {
    throw ConfigError("v_read must stay below the write threshold");
  }
  if (!(alpha1_gain > 0.0 && alpha1_gain <= 1.0) || !(alpha2_gain > 0.0 && alpha2_gain <= 1.0)) {
    throw ConfigError("learning-rate gains must lie in (0, 1]");
  }
  if (neighbors < 1 || neighbors % 2 == 0) throw ConfigError("neighbour count m must be odd");
  if (!(pwm.period > 0.0) || !(pwm.duty > 0.0 && pwm.duty <= 1.0)) {
    throw ConfigError("PWM needs a positive period and a duty cycle in (0, 1]");
  }
  if (std::abs(pwm.amplitude) < device.write_threshold) {
    throw ConfigError("PWM amplitude must exceed the write threshold");
  }
  if (connector == ConnectorMode::kGaussianBands && !(sigma > 0.0)) {
    throw ConfigError("band connector needs a positive sigma");
  }
  if (band_radius < 0) throw ConfigError("band radius must be non-negative");
}

std::vector<ConnectorTap> connector_taps(const CircuitParams& circuit) {
  std::vector<ConnectorTap> taps{{0, 1.0}};
  if (circuit.connector == ConnectorMode::kDyadicSteps) {
    for (int k = 1; k <= (circuit.neighbors - 1) / 2; ++k) {
      const double ratio = std::ldexp(1.0, -k);
      taps.push_back({-k, ratio});
      taps.push_back({k, ratio});
    }
    return taps;
  }
  const int radius = circuit.band_radius > 0
                         ? circuit.band_radius
                         : static_cast<int>(std::ceil(3.0 * circuit.sigma));
  for (int u = 1; u <= radius; ++u) {
    const double g = gaussian_weight(u, circuit.sigma);
    const int stage = static_cast<int>(std::lround(-std::log2(g)));
    const double ratio = std::ldexp(1.0, -stage);
    taps.push_back({-u, ratio});
    taps.push_back({u, ratio});
  }
  return taps;
}

void write_trace_csv(std::ostream& out, std::span<const PulseEvent> events) {
  out << "row,col,amplitude,effective,duration\n";
  for (const auto& e : events) {
    out << to_string(e.row) << ',' << e.col << ',';
    detail::write_number(out, e.amplitude, 6);
    out << ',';
    detail::write_number(out, e.effective, 6);
    out << ',';
    detail::write_number(out, e.duration, 6);
    out << '\n';
  }
}

CrossbarPlane::CrossbarPlane(Resolution resolution, DeviceParams device, CircuitParams circuit)
    : resolution_(resolution), device_(device), circuit_(circuit) {
  device_.validate();
  circuit_.validate(device_);
  if (2.0 * device_.r_on > device_.r_off) {
    throw ConfigError("path row needs 2 R_on <= R_off");
  }
  taps_ = connector_taps(circuit_);
  const auto n = static_cast<std::size_t>(resolution.rsn_x);
  rows_[static_cast<std::size_t>(CrossbarRow::kUpper)].assign(n, MemristorState{0.0});
  rows_[static_cast<std::size_t>(CrossbarRow::kLower)].assign(n,
                                                               MemristorState{device_.thickness});
  rows_[static_cast<std::size_t>(CrossbarRow::kPath)].assign(
      n, state_for_memristance(2.0 * device_.r_on, device_));
}

void CrossbarPlane::check_column(int col) const {
  if (col < 1 || col > resolution_.rsn_x) {
    throw InputError("column " + std::to_string(col) + " outside [1, " +
                     std::to_string(resolution_.rsn_x) + "]");
  }
}

MemristorState& CrossbarPlane::cell(CrossbarRow row, int col) {
  return rows_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col - 1)];
}

const MemristorState& CrossbarPlane::cell(CrossbarRow row, int col) const {
  return rows_[static_cast<std::size_t>(row)][static_cast<std::size_t>(col - 1)];
}

MemristorState CrossbarPlane::state(CrossbarRow row, int col) const {
  check_column(col);
  return cell(row, col);
}

double CrossbarPlane::memristance(CrossbarRow row, int col) const {
  return fastids::memristance(state(row, col), device_);
}

double CrossbarPlane::read_cell(CrossbarRow row, int col) const {
  check_column(col);
  const double r = fastids::memristance(cell(row, col), device_);
  return circuit_.v_bias - circuit_.v_read * circuit_.r_f1 / r;
}

double CrossbarPlane::read_spread(int col) const {
  return read_cell(CrossbarRow::kUpper, col) - read_cell(CrossbarRow::kLower, col);
}

double CrossbarPlane::read_level(CrossbarRow row, int col) const {
  return read_cell(row, col) / circuit_.v_read * resolution_.rsn_y;
}

double CrossbarPlane::level_of(MemristorState s) const {
  const double z = circuit_.v_bias - circuit_.v_read * circuit_.r_f1 /
                                         fastids::memristance(s, device_);
  return z / circuit_.v_read * resolution_.rsn_y;
}

MemristorState CrossbarPlane::state_for_level(double level) const {
  // Inverse of level_of under v_bias = v_read.
  const double fraction = std::clamp(level / resolution_.rsn_y, 0.0, 1.0);
  const double ohms = fraction >= 1.0 ? device_.r_off : circuit_.r_f1 / (1.0 - fraction);
  return state_for_memristance(ohms, device_);
}

double CrossbarPlane::max_level() const {
  return resolution_.rsn_y * (1.0 - circuit_.r_f1 / device_.r_off);
}

std::vector<PulseEvent> CrossbarPlane::write_sample(int xq, double y_level) {
  check_column(xq);
  if (!std::isfinite(y_level) || y_level < 0.0 || y_level > resolution_.rsn_y) {
    throw InputError("target level outside [0, rsn_y]");
  }
  const double v_train = circuit_.v_read * (y_level / resolution_.rsn_y);
  const double full_scale = circuit_.pwm.duty * circuit_.pwm.period;
  std::vector<PulseEvent> events;

  for (CrossbarRow row : {CrossbarRow::kUpper, CrossbarRow::kLower, CrossbarRow::kPath}) {
    const double gain =
        row == CrossbarRow::kPath ? circuit_.alpha2_gain : circuit_.alpha1_gain;
    const double v_cap = gain * (v_train - read_cell(row, xq));
    if (v_cap == 0.0) continue;

    const double centre_time = std::abs(v_cap) / circuit_.v_read * full_scale;
    const double level_step = v_cap / circuit_.v_read * resolution_.rsn_y;
    // Raising the read level means raising R_M, i.e. shrinking the doped region.
    const double device_volts = v_cap > 0.0 ? -circuit_.pwm.amplitude : circuit_.pwm.amplitude;

    for (const auto& tap : taps_) {
      const int col = xq + tap.offset;
      if (col < 1 || col > resolution_.rsn_x) continue;
      MemristorState& s = cell(row, col);
      const double effective = centre_time * tap.ratio;
      double duration = effective;
      if (circuit_.drive == WriteDrive::kCompensated) {
        const double target =
            std::clamp(level_of(s) + level_step * tap.ratio, 0.0, max_level());
        duration = pulse_time_between(s, state_for_level(target), device_volts, device_);
      }
      s = apply_pulse(s, device_volts, duration, device_);
      events.push_back({row, col, device_volts, effective, duration});
    }
  }
  return events;
}

DescribingVectors CrossbarPlane::read_vectors(const FastIdsParams& params) const {
  const auto n = static_cast<std::size_t>(resolution_.rsn_x);
  std::vector<double> lower(n), upper(n), path(n);
  const double top = resolution_.rsn_y;
  for (int c = 1; c <= resolution_.rsn_x; ++c) {
    const auto i = static_cast<std::size_t>(c - 1);
    lower[i] = std::clamp(read_level(CrossbarRow::kLower, c), 0.0, top);
    upper[i] = std::clamp(read_level(CrossbarRow::kUpper, c), 0.0, top);
    path[i] = std::clamp(read_level(CrossbarRow::kPath, c), 0.0, top);
  }
  return DescribingVectors::from_levels(resolution_, params, std::move(lower), std::move(upper),
                                        std::move(path));
}

void CrossbarPlane::write_csv(std::ostream& out, int precision) const {
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      detail::write_number(out, fastids::memristance(row[i], device_), precision);
    }
    out << '\n';
  }
}

CrossbarPlane CrossbarPlane::read_csv(std::istream& in, Resolution resolution,
                                      DeviceParams device, CircuitParams circuit) {
  CrossbarPlane plane(resolution, device, circuit);
  const auto rows = detail::read_numeric_rows(in);
  if (rows.size() != 3) throw InputError("crossbar CSV needs 3 rows");
  for (std::size_t r = 0; r < 3; ++r) {
    if (rows[r].size() != static_cast<std::size_t>(resolution.rsn_x)) {
      throw InputError("crossbar CSV row has wrong width");
    }
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      const double ohms = rows[r][i];
      if (ohms < device.r_on || ohms > device.r_off) {
        throw InputError("memristance outside [R_on, R_off] in crossbar CSV");
      }
      plane.rows_[r][i] = state_for_memristance(ohms, device);
    }
  }
  return plane;
}

}  // namespace fastids
