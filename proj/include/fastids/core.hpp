#ifndef FASTIDS_CORE_HPP
#define FASTIDS_CORE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastids {

/// Bad caller-supplied data (out-of-range index, non-finite value, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid parameter combination detected at construction time.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed interval of admissible values on one axis.
struct Domain {
  double min = 0.0;
  double max = 1.0;

  Domain() = default;
  Domain(double lo, double hi);

  double width() const { return max - min; }
  bool contains(double v) const { return v >= min && v <= max; }
};

/// Quantization levels on the input (x) and output (y) axes of a plane.
struct Resolution {
  int rsn_x = 256;
  int rsn_y = 256;

  Resolution() = default;
  Resolution(int x, int y);
};

struct Sample {
  std::vector<double> x;
  double y = 0.0;

  std::size_t dims() const { return x.size(); }
};

/// A sample after quantization onto one plane. `y` is real so that analog
/// read-back levels can flow through the same update path.
struct QuantizedSample {
  int x = 1;
  double y = 1.0;
};

enum class KernelTag { kGaussian, kPyramid, kCone };

struct KernelShape {
  KernelTag tag = KernelTag::kGaussian;
  int radius = 1;
  double sigma = 1.0;  // gaussian only, in grid cells

  /// Gaussian kernel truncated at ceil(3 sigma).
  static KernelShape gaussian(double sigma);
  static KernelShape pyramid(int radius);
  static KernelShape cone(int radius);
};

std::string to_string(KernelTag tag);
KernelTag kernel_tag_from_string(const std::string& name);

/// Square weight table of side 2R+1, row-major with u (x offset) major.
class Kernel2D {
 public:
  explicit Kernel2D(const KernelShape& shape);

  int radius() const { return radius_; }
  int side() const { return 2 * radius_ + 1; }
  double at(int u, int v) const {
    return weights_[static_cast<std::size_t>((u + radius_) * side() + (v + radius_))];
  }
  double sum() const;
  const std::vector<double>& weights() const { return weights_; }

 private:
  int radius_;
  std::vector<double> weights_;
};

/// Maps a value onto the 1-based level grid {1, ..., levels}; values at or
/// beyond either end of the domain clamp to the end level.
int quantize(double value, const Domain& domain, int levels);

/// Cell-centre value of a 1-based level.
double dequantize(int index, const Domain& domain, int levels);

/// exp(-u^2 / (2 sigma^2)).
double gaussian_weight(double u, double sigma);

Kernel2D make_kernel(const KernelShape& shape);

}  // namespace fastids

#endif  // FASTIDS_CORE_HPP
