#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cksvar/limitdist_types.hpp"
#include "cksvar/lrv.hpp"
#include "cksvar/mat.hpp"
#include "cksvar/series.hpp"

namespace cksvar {

struct TestOutcome {
  Variant variant = Variant::mb;
  int q0 = 0;
  double lambda_stat = 0.0;               // sum of the selected smallest eigenvalues
  std::vector<double> eigenvalues;        // ascending, pre-scaled (already n^2 lambda)
  double crit_value = 0.0;
  double alpha = 0.0;
  double tau = 0.0;                       // conditioning threshold (MB); 0 for SB
  double w0_used = 0.0;                   // initialization value the table row was chosen for
  bool reject = false;
  OccupationStats occupation;
};

struct MomentPair {
  Mat A;  // n^-1 sum m_t m_t'
  Mat B;  // n^-3 sum s_t s_t', s_t the running sum of m
};

/// Split the first column into positive/negative parts: (y, x..) -> (y+, y-, x..).
SeriesMatrix build_zstar(const SeriesMatrix& z);

/// Subtract each column's sample mean.
SeriesMatrix demean(const SeriesMatrix& m);

/// Scaled moment matrices of a demeaned series. The n^-1 / n^-3 scaling makes
/// the pencil eigenvalues equal n^2 times the raw ones, so no further scaling
/// is applied downstream. Cumulative sums use compensated summation. Throws
/// degenerate_data when B is not positive definite.
MomentPair build_moments(const SeriesMatrix& m);

/// Ascending pencil eigenvalues of (A, B) built from `data` after demeaning.
std::vector<double> series_pencil_eigenvalues(const SeriesMatrix& data);

/// The variance-ratio statistic: MB builds the pencil on the split series
/// (p+1 dims) and sums the q0+1 smallest eigenvalues; SB builds it on the
/// data directly (p dims) and sums the q0 smallest. Decision fields are left
/// unset.
TestOutcome lambda_stat(const SeriesMatrix& z, int q0, Variant variant);

/// Critical-value lookup: exact on (variant, q0, tau, alpha); across the
/// w0_init grid the value is interpolated linearly in w0 between bracketing
/// rows (clamped outside the grid). Throws missing_critical_value.
double lookup_critical_value(const CritValTable& table, Variant variant, int q0, double tau,
                             double alpha, double w0);

/// Full test: statistic, critical value, decision (reject iff stat > crit).
/// When y0 is supplied and nonzero, the initialization parameter is estimated
/// as w0 = y0 / (sqrt(n) * omega_hat) with the regime-matched long-run sd
/// from `lrv_settings`, and the table is interpolated at that w0; otherwise
/// the w0 = 0 rows are used.
TestOutcome run_test(const SeriesMatrix& z, int q0, Variant variant, const CritValTable& table,
                     double alpha, double tau, std::optional<double> y0 = std::nullopt,
                     const LrvSettings& lrv_settings = {});

}  // namespace cksvar
