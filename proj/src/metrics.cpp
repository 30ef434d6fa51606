#include "fastids/metrics.hpp"

#include <cstddef>

namespace fastids {

double fvu(std::span<const double> predictions, std::span<const double> truths) {
  if (predictions.size() != truths.size()) throw MetricError("fvu: length mismatch");
  if (truths.size() < 2) throw MetricError("fvu: need at least two samples");
  double mean = 0.0;
  for (double y : truths) mean += y;
  mean /= static_cast<double>(truths.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const double e = predictions[i] - truths[i];
    const double d = truths[i] - mean;
    num += e * e;
    den += d * d;
  }
  if (den == 0.0) throw MetricError("fvu: truths are constant");
  return num / den;
}

double accuracy(std::span<const double> predicted, std::span<const double> truths) {
  if (predicted.size() != truths.size()) throw MetricError("accuracy: length mismatch");
  if (truths.empty()) throw MetricError("accuracy: no samples");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) hits += predicted[i] == truths[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truths.size());
}

}  // namespace fastids
