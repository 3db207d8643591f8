#include "cksvar/lrv.hpp"

#include <cmath>

#include "cksvar/error.hpp"

namespace cksvar {

double bartlett_kernel(double x) { return std::max(0.0, 1.0 - std::abs(x)); }

int default_lag_count(int n) {
  return std::max(1, static_cast<int>(std::floor(4.0 * std::pow(n / 100.0, 2.0 / 9.0))));
}

double LrvEstimate::omega(int sign) const {
  if (sign >= 0) {
    if (!has_plus) throw Error(Error::Code::empty_regime, "lrv: + regime never visited");
    return omega_plus;
  }
  if (!has_minus) throw Error(Error::Code::empty_regime, "lrv: - regime never visited");
  return omega_minus;
}

LrvEstimate lrv_estimate(std::span<const double> y, const LrvSettings& settings) {
  const int n = static_cast<int>(y.size());
  if (settings.kernel != "bartlett")
    throw Error(Error::Code::invalid_argument, "lrv: unknown kernel " + settings.kernel);
  const int L = settings.lags > 0 ? settings.lags : default_lag_count(n);
  if (n < 2 * L + 2)
    throw Error(Error::Code::too_few_observations,
                "lrv: need n >= 2L + 2 = " + std::to_string(2 * L + 2));

  LrvEstimate out;
  out.lags_used = L;
  out.kernel = settings.kernel;

  long count_plus = 0, count_minus = 0;
  for (double v : y) (v >= 0.0 ? count_plus : count_minus)++;

  // differences exist for t = 1..n-1 (0-based); the regime indicator sits on t
  auto side = [&](int sign, double& omega, bool& has, bool& clamped) {
    const long count = sign >= 0 ? count_plus : count_minus;
    if (count == 0) {
      has = false;
      return;
    }
    has = true;
    double acc = 0.0;
    for (int l = 0; l <= L; ++l) {
      double g = 0.0;
      for (int t = l + 1; t < n; ++t) {
        const bool in_regime = sign >= 0 ? (y[t] >= 0.0) : (y[t] < 0.0);
        if (!in_regime) continue;
        g += (y[t] - y[t - 1]) * (y[t - l] - y[t - l - 1]);
      }
      g /= static_cast<double>(count);
      const double w = bartlett_kernel(static_cast<double>(l) / L);
      acc += (l == 0 ? 1.0 : 2.0) * w * g;
    }
    if (acc < 0.0) {
      acc = 0.0;
      clamped = true;
    }
    omega = std::sqrt(acc);
  };
  side(+1, out.omega_plus, out.has_plus, out.clamped_plus);
  side(-1, out.omega_minus, out.has_minus, out.clamped_minus);
  return out;
}

W0Estimate estimate_w0_value(double y0, std::size_t n, const LrvEstimate& est) {
  W0Estimate out;
  if (y0 == 0.0) {
    out.value = 0.0;
    out.regime_used = +1;
    return out;
  }
  out.regime_used = y0 > 0.0 ? +1 : -1;
  const double omega = est.omega(out.regime_used);
  if (omega <= 0.0)
    throw Error(Error::Code::zero_lrv, "estimate_w0: long-run sd is zero for the needed regime");
  out.value = y0 / (std::sqrt(static_cast<double>(n)) * omega);
  return out;
}

W0Estimate estimate_w0(std::span<const double> y, const LrvEstimate& est) {
  if (y.empty()) throw Error(Error::Code::invalid_argument, "estimate_w0: empty series");
  return estimate_w0_value(y.front(), y.size(), est);
}

}  // namespace cksvar
