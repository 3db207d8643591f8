#include "cksvar/mat.hpp"

#include <cmath>
#include <cstdlib>

#include "cksvar/error.hpp"

namespace cksvar {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(Error::Code::dimension_mismatch, what);
}

}  // namespace

Mat::Mat(int r, int c, std::initializer_list<double> vals) : Mat(r, c) {
  require(static_cast<std::size_t>(r) * c == vals.size(), "Mat: initializer size mismatch");
  std::size_t i = 0;
  for (double v : vals) data[i++] = v;
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::col_vec(std::initializer_list<double> vals) {
  Mat m(static_cast<int>(vals.size()), 1);
  std::size_t i = 0;
  for (double v : vals) m.data[i++] = v;
  return m;
}

Mat Mat::block(int i0, int j0, int r, int c) const {
  require(i0 >= 0 && j0 >= 0 && i0 + r <= rows && j0 + c <= cols, "Mat::block out of range");
  Mat out(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
  return out;
}

void Mat::set_block(int i0, int j0, const Mat& m) {
  if (m.rows == 0 || m.cols == 0) return;
  require(i0 >= 0 && j0 >= 0 && i0 + m.rows <= rows && j0 + m.cols <= cols,
          "Mat::set_block out of range");
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) (*this)(i0 + i, j0 + j) = m(i, j);
}

Mat operator+(const Mat& a, const Mat& b) {
  require(a.rows == b.rows && a.cols == b.cols, "Mat+: shape mismatch");
  Mat out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

Mat operator-(const Mat& a, const Mat& b) {
  require(a.rows == b.rows && a.cols == b.cols, "Mat-: shape mismatch");
  Mat out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
  return out;
}

Mat operator*(const Mat& a, const Mat& b) {
  require(a.cols == b.rows, "Mat*: inner dimension mismatch");
  Mat out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Mat operator*(double s, const Mat& a) {
  Mat out = a;
  for (double& v : out.data) v *= s;
  return out;
}

Mat transpose(const Mat& a) {
  Mat out(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out(j, i) = a(i, j);
  return out;
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::abs(v));
  return m;
}

double frobenius_norm(const Mat& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

bool all_finite(const Mat& a) {
  for (double v : a.data)
    if (!std::isfinite(v)) return false;
  return true;
}

double symmetry_gap(const Mat& a) {
  double g = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = i + 1; j < a.cols; ++j) g = std::max(g, std::abs(a(i, j) - a(j, i)));
  return g;
}

namespace {

// LU decomposition in place with partial pivoting. Returns the permutation
// sign, or 0 if a pivot vanished (singular to working precision).
int lu_decompose(Mat& a, std::vector<int>& perm) {
  const int n = a.rows;
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::abs(a(c, c));
    for (int i = c + 1; i < n; ++i) {
      const double v = std::abs(a(i, c));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a.data[piv * n + j], a.data[c * n + j]);
      std::swap(perm[piv], perm[c]);
      sign = -sign;
    }
    const double d = a(c, c);
    for (int i = c + 1; i < n; ++i) {
      const double f = a(i, c) / d;
      a(i, c) = f;
      for (int j = c + 1; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return sign;
}

}  // namespace

double det(Mat a) {
  require(a.rows == a.cols, "det: square matrix required");
  if (a.rows == 0) return 1.0;
  std::vector<int> perm;
  const int sign = lu_decompose(a, perm);
  if (sign == 0) return 0.0;
  double d = sign;
  for (int i = 0; i < a.rows; ++i) d *= a(i, i);
  return d;
}

Mat lu_solve(Mat a, Mat b) {
  require(a.rows == a.cols && a.rows == b.rows, "lu_solve: shape mismatch");
  const int n = a.rows;
  if (n == 0) return b;
  std::vector<int> perm;
  if (lu_decompose(a, perm) == 0)
    throw Error(Error::Code::degenerate_data, "lu_solve: singular matrix");
  Mat x(n, b.cols);
  for (int j = 0; j < b.cols; ++j) {
    // forward substitution on the permuted right-hand side
    for (int i = 0; i < n; ++i) {
      double s = b(perm[i], j);
      for (int k = 0; k < i; ++k) s -= a(i, k) * x(k, j);
      x(i, j) = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x(i, j);
      for (int k = i + 1; k < n; ++k) s -= a(i, k) * x(k, j);
      x(i, j) = s / a(i, i);
    }
  }
  return x;
}

Mat inverse(const Mat& a) {
  require(a.rows == a.cols, "inverse: square matrix required");
  return lu_solve(a, Mat::identity(a.rows));
}

}  // namespace cksvar
