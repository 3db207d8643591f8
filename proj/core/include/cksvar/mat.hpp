#pragma once

#include <initializer_list>
#include <vector>

namespace cksvar {

/// Small dense real matrix, row-major. Everything in this library lives in
/// dimensions below ~50, so the representation favours simplicity and
/// reproducibility (fixed operation order) over speed.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // rows*cols entries, row-major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  Mat(int r, int c, std::initializer_list<double> vals);

  static Mat identity(int n);
  static Mat zeros(int r, int c) { return Mat(r, c); }
  /// Column vector from a list of entries.
  static Mat col_vec(std::initializer_list<double> vals);

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  bool empty() const { return rows == 0 || cols == 0; }
  Mat block(int i0, int j0, int r, int c) const;
  void set_block(int i0, int j0, const Mat& m);
  Mat col(int j) const { return block(0, j, rows, 1); }
  Mat row(int i) const { return block(i, 0, 1, cols); }
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Mat transpose(const Mat& a);

double max_abs(const Mat& a);
double frobenius_norm(const Mat& a);
bool all_finite(const Mat& a);
/// max |a_ij - a_ji|; zero for the empty matrix.
double symmetry_gap(const Mat& a);

/// Determinant via LU with partial pivoting; the 0x0 determinant is 1.
double det(Mat a);
/// Solve a x = b for square a (LU, partial pivoting).
Mat lu_solve(Mat a, Mat b);
Mat inverse(const Mat& a);

}  // namespace cksvar
