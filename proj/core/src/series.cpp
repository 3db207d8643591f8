#include "cksvar/series.hpp"

#include "cksvar/error.hpp"

namespace cksvar {

SeriesMatrix::SeriesMatrix(int n_, int d_)
    : n(n_), d(d_), values(static_cast<std::size_t>(n_) * d_, 0.0), roles(default_roles(d_)) {}

std::vector<double> SeriesMatrix::column(int j) const {
  std::vector<double> out(n);
  for (int t = 0; t < n; ++t) out[t] = (*this)(t, j);
  return out;
}

std::vector<std::string> SeriesMatrix::default_roles(int d) {
  std::vector<std::string> roles;
  roles.reserve(d);
  for (int j = 0; j < d; ++j) roles.push_back(j == 0 ? "y" : "x" + std::to_string(j));
  return roles;
}

OccupationStats occupation(std::span<const double> y) {
  if (y.empty()) throw Error(Error::Code::invalid_argument, "occupation: empty series");
  OccupationStats s;
  for (double v : y) {
    if (v >= 0.0)
      ++s.count_plus;
    else
      ++s.count_minus;
  }
  const double n = static_cast<double>(y.size());
  s.frac_plus = s.count_plus / n;
  s.frac_minus = s.count_minus / n;
  return s;
}

}  // namespace cksvar
