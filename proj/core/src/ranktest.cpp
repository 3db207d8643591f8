#include "cksvar/ranktest.hpp"

#include <algorithm>
#include <cmath>

#include "cksvar/error.hpp"
#include "cksvar/pencil.hpp"

namespace cksvar {

namespace {

constexpr double kKeyTol = 1e-9;  // matching tolerance for tau / alpha keys

}  // namespace

SeriesMatrix build_zstar(const SeriesMatrix& z) {
  if (z.d < 1 || z.n < 1)
    throw Error(Error::Code::invalid_argument, "build_zstar: empty series");
  SeriesMatrix out(z.n, z.d + 1);
  for (int t = 0; t < z.n; ++t) {
    const double y = z(t, 0);
    if (y >= 0.0)
      out(t, 0) = y;
    else
      out(t, 1) = y;
    for (int j = 1; j < z.d; ++j) out(t, 1 + j) = z(t, j);
  }
  out.roles.assign({"y_plus", "y_minus"});
  for (int j = 1; j < z.d; ++j) out.roles.push_back("x" + std::to_string(j));
  return out;
}

SeriesMatrix demean(const SeriesMatrix& m) {
  if (m.n < 2) throw Error(Error::Code::invalid_argument, "demean: n >= 2 required");
  SeriesMatrix out = m;
  for (int j = 0; j < m.d; ++j) {
    double mean = 0.0;
    for (int t = 0; t < m.n; ++t) mean += m(t, j);
    mean /= m.n;
    for (int t = 0; t < m.n; ++t) out(t, j) -= mean;
  }
  return out;
}

MomentPair build_moments(const SeriesMatrix& m) {
  const int n = m.n;
  const int d = m.d;
  if (n <= d)
    throw Error(Error::Code::degenerate_data, "build_moments: need more observations than columns");
  MomentPair out;
  out.A = Mat(d, d);
  out.B = Mat(d, d);
  std::vector<double> sum(d, 0.0), comp(d, 0.0);  // Kahan-compensated running sums
  for (int t = 0; t < n; ++t) {
    for (int j = 0; j < d; ++j) {
      const double yj = m(t, j) - comp[j];
      const double s = sum[j] + yj;
      comp[j] = (s - sum[j]) - yj;
      sum[j] = s;
    }
    for (int a = 0; a < d; ++a) {
      const double ma = m(t, a);
      const double sa = sum[a];
      for (int b = a; b < d; ++b) {
        out.A(a, b) += ma * m(t, b);
        out.B(a, b) += sa * sum[b];
      }
    }
  }
  const double n1 = static_cast<double>(n);
  const double n3 = n1 * n1 * n1;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      out.A(a, b) /= n1;
      out.B(a, b) /= n3;
      out.A(b, a) = out.A(a, b);
      out.B(b, a) = out.B(a, b);
    }
  try {
    cholesky(out.B);  // positive-definiteness probe
  } catch (const Error& e) {
    if (e.code() == Error::Code::not_positive_definite)
      throw Error(Error::Code::degenerate_data,
                  "build_moments: cumulated moment matrix is not positive definite");
    throw;
  }
  return out;
}

std::vector<double> series_pencil_eigenvalues(const SeriesMatrix& data) {
  const MomentPair moments = build_moments(demean(data));
  return gen_eig_pencil(moments.A, moments.B).eigenvalues;
}

TestOutcome lambda_stat(const SeriesMatrix& z, int q0, Variant variant) {
  if (q0 < 1 || q0 > z.d)
    throw Error(Error::Code::invalid_argument, "lambda_stat: q0 must lie in {1,...,p}");
  TestOutcome out;
  out.variant = variant;
  out.q0 = q0;
  out.occupation = occupation(z.column(0));
  out.eigenvalues =
      series_pencil_eigenvalues(variant == Variant::mb ? build_zstar(z) : z);
  const int take = variant == Variant::mb ? q0 + 1 : q0;
  double sum = 0.0;
  for (int i = 0; i < take; ++i) sum += out.eigenvalues[i];
  out.lambda_stat = sum;
  return out;
}

double lookup_critical_value(const CritValTable& table, Variant variant, int q0, double tau,
                             double alpha, double w0) {
  std::vector<const CritValRow*> rows;
  for (const CritValRow& row : table.rows)
    if (row.variant == variant && row.q0 == q0 && std::abs(row.tau - tau) <= kKeyTol &&
        std::abs(row.alpha - alpha) <= kKeyTol)
      rows.push_back(&row);
  if (rows.empty())
    throw Error(Error::Code::missing_critical_value,
                std::string("no critical value for variant=") + variant_name(variant) +
                    " q0=" + std::to_string(q0) + " tau=" + std::to_string(tau) +
                    " alpha=" + std::to_string(alpha));
  std::sort(rows.begin(), rows.end(),
            [](const CritValRow* a, const CritValRow* b) { return a->w0_init < b->w0_init; });
  if (w0 <= rows.front()->w0_init) return rows.front()->crit_value;
  if (w0 >= rows.back()->w0_init) return rows.back()->crit_value;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (w0 <= rows[i]->w0_init) {
      const double lo = rows[i - 1]->w0_init, hi = rows[i]->w0_init;
      if (hi - lo <= 0.0) return rows[i]->crit_value;  // duplicate grid point
      const double t = (w0 - lo) / (hi - lo);
      return (1.0 - t) * rows[i - 1]->crit_value + t * rows[i]->crit_value;
    }
  }
  return rows.back()->crit_value;
}

TestOutcome run_test(const SeriesMatrix& z, int q0, Variant variant, const CritValTable& table,
                     double alpha, double tau, std::optional<double> y0,
                     const LrvSettings& lrv_settings) {
  TestOutcome out = lambda_stat(z, q0, variant);
  out.alpha = alpha;
  out.tau = tau;
  double w0 = 0.0;
  if (y0.has_value() && *y0 != 0.0 && variant == Variant::mb) {
    const LrvEstimate est = lrv_estimate(z.column(0), lrv_settings);
    w0 = estimate_w0_value(*y0, static_cast<std::size_t>(z.n), est).value;
  }
  out.w0_used = w0;
  out.crit_value = lookup_critical_value(table, variant, q0, tau, alpha, w0);
  out.reject = out.lambda_stat > out.crit_value;
  return out;
}

}  // namespace cksvar
