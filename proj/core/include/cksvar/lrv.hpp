#pragma once

#include <span>
#include <string>

namespace cksvar {

struct LrvSettings {
  int lags = 0;  // 0 => automatic rule floor(4 (n/100)^{2/9})
  std::string kernel = "bartlett";
};

/// Bartlett kernel K(x) = max(0, 1 - |x|).
double bartlett_kernel(double x);
int default_lag_count(int n);

/// Regime-restricted long-run standard deviations of the first differences.
/// Each side is available when its regime is visited; omega() throws
/// empty_regime for a side with no observations.
struct LrvEstimate {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  bool has_plus = false;
  bool has_minus = false;
  bool clamped_plus = false;   // negative kernel sum clamped to zero
  bool clamped_minus = false;
  int lags_used = 0;
  std::string kernel = "bartlett";

  double omega(int sign) const;
};

/// omega_hat(s) = (sum_{l=-L..L} K(l/L) gamma_hat_{|l|}(s))^{1/2} with
/// gamma_hat_l(s) = (#{t: regime s})^{-1} sum_t dy_t dy_{t-l} 1{y_t in s}.
/// Requires n >= 2 L + 2; negative kernel sums clamp to zero and set the
/// clamped flag.
LrvEstimate lrv_estimate(std::span<const double> y, const LrvSettings& settings = {});

struct W0Estimate {
  double value = 0.0;
  int regime_used = +1;
};

/// w0_hat = y0 / (sqrt(n) omega_hat(sgn y0)); zero when y0 == 0. Throws
/// zero_lrv when the needed omega is zero.
W0Estimate estimate_w0_value(double y0, std::size_t n, const LrvEstimate& est);

/// Convenience form: the head of `y` plays the role of the initialization.
W0Estimate estimate_w0(std::span<const double> y, const LrvEstimate& est);

}  // namespace cksvar
