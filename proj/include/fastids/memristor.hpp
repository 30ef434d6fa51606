#ifndef FASTIDS_MEMRISTOR_HPP
#define FASTIDS_MEMRISTOR_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fastids/core.hpp"
#include "fastids/fast_ids.hpp"

namespace fastids {

/// Linear-drift (HP) TiO2 device. Defaults are the published device values.
struct DeviceParams {
  double thickness = 10e-9;      // D, metres
  double mobility = 1e-14;       // mu_v, m^2 s^-1 V^-1
  double r_on = 2e3;             // ohms, fully doped
  double r_off = 200e3;          // ohms, undoped
  double write_threshold = 1.0;  // volts; anything below leaves the state alone
  double dt = 1e-6;              // integration step, seconds

  /// mu_v * R_on / D, in m / (A s).
  double drift_coefficient() const { return mobility * r_on / thickness; }
  void validate() const;
};

struct MemristorState {
  double w = 0.0;  // doped-region width, metres

  bool operator==(const MemristorState&) const = default;
};

double memristance(MemristorState state, const DeviceParams& params);
MemristorState state_for_memristance(double ohms, const DeviceParams& params);

/// Integrates dw/dt = (mu_v R_on / D) * V / R_M(w) over `duration` with an
/// fixed-step RK4, clamping w to [0, D]. Sub-threshold amplitudes are a
/// no-op.
MemristorState apply_pulse(MemristorState state, double volts, double duration,
                           const DeviceParams& params);

/// Closed-form time a constant |volts| pulse needs to move the device from
/// `from` to `to` (direction implied by the two states).
double pulse_time_between(MemristorState from, MemristorState to, double volts,
                          const DeviceParams& params);

enum class CrossbarRow { kUpper = 0, kLower = 1, kPath = 2 };
std::string to_string(CrossbarRow row);

/// How the connector spreads a write over neighbouring columns.
enum class ConnectorMode {
  /// Stage k of the flip-flop chain drives the neighbours at distance k, so
  /// column xq +/- k gets 2^-k of the centre high-time.
  kDyadicSteps,
  /// Every column within the band radius is driven by the stage whose
  /// 2^-k ratio is closest to g(u) for the configured sigma.
  kGaussianBands,
};

/// How an effective (connector) high-time becomes a physical pulse.
enum class WriteDrive {
  /// The pulse lasts exactly the effective high-time.
  kDirect,
  /// The pulse length is set from the column's current state so that its
  /// read level moves by the same fraction of the capacitor distance that
  /// its high-time is of the full-scale high-time.
  kCompensated,
};

struct PwmParams {
  double period = 10e-3;  // seconds
  double amplitude = 3.0;  // volts
  double duty = 0.8;       // full-scale duty cycle
};

struct CircuitParams {
  double r_f1 = 2e3;  // first-stage feedback resistor; must equal R_on
  double v_read = 0.5;
  double v_bias = 0.5;  // must equal v_read
  double alpha1_gain = 0.6;  // R_F2 / R_1, bound rows
  double alpha2_gain = 0.5;  // R_F4 / R_2, path row
  int neighbors = 5;         // m, odd
  PwmParams pwm;
  ConnectorMode connector = ConnectorMode::kDyadicSteps;
  double sigma = 15.0;  // band connector only
  int band_radius = 0;  // band connector only; 0 selects ceil(3 sigma)
  WriteDrive drive = WriteDrive::kCompensated;

  void validate(const DeviceParams& device) const;
};

struct ConnectorTap {
  int offset = 0;       // column offset from the written column
  double ratio = 1.0;   // high-time relative to the centre, always 2^-k
};

/// Taps driven for one write, centre first.
std::vector<ConnectorTap> connector_taps(const CircuitParams& circuit);

struct PulseEvent {
  CrossbarRow row = CrossbarRow::kPath;
  int col = 1;
  double amplitude = 0.0;  // volts across the device
  double effective = 0.0;  // connector high-time, seconds
  double duration = 0.0;   // physical pulse length, seconds
};

void write_trace_csv(std::ostream& out, std::span<const PulseEvent> events);

/// Three rows of rsn_x memristors (upper bound, lower bound, narrow path)
/// behind the read chain z = v_bias - v_read * R_F1 / R_M. Read voltages
/// map to output levels linearly with v_read as full scale.
class CrossbarPlane {
 public:
  CrossbarPlane(Resolution resolution, DeviceParams device, CircuitParams circuit);

  double read_cell(CrossbarRow row, int col) const;
  /// z_upper - z_lower.
  double read_spread(int col) const;
  double read_level(CrossbarRow row, int col) const;

  /// Programs all three rows towards `y_level` at column `xq` and its
  /// connector neighbours. Returns the pulse schedule that was applied.
  std::vector<PulseEvent> write_sample(int xq, double y_level);

  DescribingVectors read_vectors(const FastIdsParams& params) const;

  MemristorState state(CrossbarRow row, int col) const;
  double memristance(CrossbarRow row, int col) const;

  const Resolution& resolution() const { return resolution_; }
  const DeviceParams& device() const { return device_; }
  const CircuitParams& circuit() const { return circuit_; }
  std::size_t stored_cells() const { return 3 * static_cast<std::size_t>(resolution_.rsn_x); }

  /// Highest level the read chain can report (reached at R_off).
  double max_level() const;

  /// Memristance per device: rows upper, lower, path.
  void write_csv(std::ostream& out, int precision) const;
  static CrossbarPlane read_csv(std::istream& in, Resolution resolution, DeviceParams device,
                                CircuitParams circuit);

 private:
  void check_column(int col) const;
  MemristorState& cell(CrossbarRow row, int col);
  const MemristorState& cell(CrossbarRow row, int col) const;
  double level_of(MemristorState s) const;
  MemristorState state_for_level(double level) const;

  Resolution resolution_;
  DeviceParams device_;
  CircuitParams circuit_;
  std::vector<ConnectorTap> taps_;
  std::array<std::vector<MemristorState>, 3> rows_;
};

}  // namespace fastids

#endif  // FASTIDS_MEMRISTOR_HPP
