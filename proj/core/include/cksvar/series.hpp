#pragma once

#include <span>
#include <string>
#include <vector>

namespace cksvar {

/// Time-major matrix of observations: row t holds (y_t, x_{1,t}, ..).
struct SeriesMatrix {
  int n = 0;  // observations
  int d = 0;  // columns
  std::vector<double> values;      // n*d, row-major
  std::vector<std::string> roles;  // column labels: "y", "x1", ...

  SeriesMatrix() = default;
  SeriesMatrix(int n_, int d_);

  double& operator()(int t, int j) { return values[static_cast<std::size_t>(t) * d + j]; }
  double operator()(int t, int j) const { return values[static_cast<std::size_t>(t) * d + j]; }

  std::span<const double> row(int t) const {
    return {values.data() + static_cast<std::size_t>(t) * d, static_cast<std::size_t>(d)};
  }
  std::vector<double> column(int j) const;

  static std::vector<std::string> default_roles(int d);
};

struct OccupationStats {
  int count_plus = 0;
  int count_minus = 0;
  double frac_plus = 0.0;
  double frac_minus = 0.0;
};

/// Regime occupation of a series; y == 0 counts as the + regime.
OccupationStats occupation(std::span<const double> y);

}  // namespace cksvar
