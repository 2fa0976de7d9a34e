#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace galmon {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, Complex fill = 0.0);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  CVector column(std::size_t c) const;

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  CMatrix transpose() const;
  CMatrix operator*(const CMatrix& rhs) const;
  CVector operator*(std::span<const Complex> v) const;
  CMatrix operator+(const CMatrix& rhs) const;
  CMatrix operator-(const CMatrix& rhs) const;
  CMatrix operator*(Complex s) const;

  double max_abs() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

double norm2(std::span<const Complex> v);
double norm_inf(std::span<const Complex> v);

/// Solves A x = b by LU with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-14 times the largest initial column norm.
CVector lu_solve(const CMatrix& a, std::span<const Complex> b);

/// Number of singular values above max(rows, cols) * 1e-12 * sigma_max.
std::size_t numerical_rank(const CMatrix& a);

/// Singular values in decreasing order.
std::vector<double> singular_values(const CMatrix& a);

Complex det3(const CMatrix& a);
CMatrix adjugate3(const CMatrix& a);
/// [t]_x, so that cross_matrix(t) * v == t x v.
CMatrix cross_matrix(std::span<const Complex> t);

/// Roots of c3 x^3 + c2 x^2 + c1 x + c0. The degree is that of the highest
/// nonzero coefficient; fewer roots are returned for lower degree.
std::vector<Complex> roots_cubic(Complex c3, Complex c2, Complex c1, Complex c0);
std::vector<Complex> roots_quadratic(Complex c2, Complex c1, Complex c0);

}  // namespace galmon
