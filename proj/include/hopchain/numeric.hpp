#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hopchain/error.hpp"

namespace hopchain {

// log(sum(exp(x))) with max-subtraction; empty input is a caller bug.
inline double logsumexp(std::span<const double> xs) {
  if (xs.empty()) raise(errc::invalid_argument, "logsumexp over empty set");
  const double m = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

inline std::vector<double> softmax(std::span<const double> xs) {
  const double lse = logsumexp(xs);
  std::vector<double> out(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) out[i] = std::exp(xs[i] - lse);
  return out;
}

inline bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace hopchain
