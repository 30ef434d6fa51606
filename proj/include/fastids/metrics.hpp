#ifndef FASTIDS_METRICS_HPP
#define FASTIDS_METRICS_HPP

#include <span>
#include <stdexcept>

namespace fastids {

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Fraction of variance unexplained: sum (p - y)^2 / sum (y - mean y)^2.
double fvu(std::span<const double> predictions, std::span<const double> truths);

/// Fraction of exact matches.
double accuracy(std::span<const double> predicted, std::span<const double> truths);

}  // namespace fastids

#endif  // FASTIDS_METRICS_HPP
