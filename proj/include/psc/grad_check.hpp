#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace psc {

/// |a - b| / max(|a|, |b|, floor).
inline double relative_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// d f / d x_i by central differences, one coordinate at a time.
template <class Fn>
std::vector<double> central_difference(Fn&& f, std::span<const double> x, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + h;
    const double up = f(std::span<const double>(probe));
    probe[i] = saved - h;
    const double down = f(std::span<const double>(probe));
    probe[i] = saved;
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

}  // namespace psc
