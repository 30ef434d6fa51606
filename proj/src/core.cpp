#include "fastids/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fastids {

Domain::Domain(double lo, double hi) : min(lo), max(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigError("domain bounds must be finite");
  }
  if (!(hi > lo)) {
    throw ConfigError("domain requires min < max, got [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  }
}

Resolution::Resolution(int x, int y) : rsn_x(x), rsn_y(y) {
  if (x < 2 || y < 2) {
    throw ConfigError("resolution needs at least 2 levels per axis");
  }
}

KernelShape KernelShape::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian kernel sigma must be positive");
  return {KernelTag::kGaussian, static_cast<int>(std::ceil(3.0 * sigma)), sigma};
}

KernelShape KernelShape::pyramid(int radius) {
  if (radius < 1) throw ConfigError("kernel radius must be positive");
  return {KernelTag::kPyramid, radius, 1.0};
}

KernelShape KernelShape::cone(int radius) {
  if (radius < 1) throw ConfigError("kernel radius must be positive");
  return {KernelTag::kCone, radius, 1.0};
}

std::string to_string(KernelTag tag) {
  switch (tag) {
    case KernelTag::kGaussian: return "gaussian";
    case KernelTag::kPyramid: return "pyramid";
    case KernelTag::kCone: return "cone";
  }
  return "unknown";
}

KernelTag kernel_tag_from_string(const std::string& name) {
  if (name == "gaussian") return KernelTag::kGaussian;
  if (name == "pyramid") return KernelTag::kPyramid;
  if (name == "cone") return KernelTag::kCone;
  throw ConfigError("unknown kernel shape '" + name + "'");
}

Kernel2D::Kernel2D(const KernelShape& shape) : radius_(shape.radius) {
  if (radius_ < 0) throw ConfigError("kernel radius must be non-negative");
  if (shape.tag == KernelTag::kGaussian && !(shape.sigma > 0.0)) {
    throw ConfigError("gaussian kernel sigma must be positive");
  }
  const int n = side();
  weights_.resize(static_cast<std::size_t>(n) * n);
  const double denom = radius_ + 1.0;
  for (int u = -radius_; u <= radius_; ++u) {
    for (int v = -radius_; v <= radius_; ++v) {
      double w = 0.0;
      switch (shape.tag) {
        case KernelTag::kGaussian:
          w = std::exp(-(u * u + v * v) / (2.0 * shape.sigma * shape.sigma));
          break;
        case KernelTag::kPyramid:
          w = 1.0 - std::max(std::abs(u), std::abs(v)) / denom;
          break;
        case KernelTag::kCone:
          w = std::max(0.0, 1.0 - std::sqrt(double(u * u + v * v)) / denom);
          break;
      }
      weights_[static_cast<std::size_t>((u + radius_) * n + (v + radius_))] = w;
    }
  }
}

double Kernel2D::sum() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

int quantize(double value, const Domain& domain, int levels) {
  if (!std::isfinite(value)) throw InputError("cannot quantize a non-finite value");
  if (levels < 2) throw ConfigError("quantization needs at least 2 levels");
  if (value <= domain.min) return 1;
  if (value >= domain.max) return levels;
  const double scaled = (value - domain.min) * levels / domain.width();
  const auto index = static_cast<long long>(std::floor(scaled)) + 1;
  return static_cast<int>(std::clamp<long long>(index, 1, levels));
}

double dequantize(int index, const Domain& domain, int levels) {
  if (index < 1 || index > levels) {
    throw InputError("level " + std::to_string(index) + " outside [1, " +
                     std::to_string(levels) + "]");
  }
  return domain.min + (index - 0.5) * domain.width() / levels;
}

double gaussian_weight(double u, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian sigma must be positive");
  return std::exp(-(u * u) / (2.0 * sigma * sigma));
}

Kernel2D make_kernel(const KernelShape& shape) { return Kernel2D(shape); }

}  // namespace fastids
