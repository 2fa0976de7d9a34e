#include "galmon/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "galmon/errors.hpp"

namespace galmon {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, Complex fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InvalidArgument("CMatrix: dimension mismatch in product");
  CMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

CVector CMatrix::operator*(std::span<const Complex> v) const {
  if (cols_ != v.size()) throw InvalidArgument("CMatrix: dimension mismatch in matvec");
  CVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidArgument("CMatrix: shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InvalidArgument("CMatrix: shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

CMatrix CMatrix::operator*(Complex s) const {
  CMatrix out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double norm_inf(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

CVector lu_solve(const CMatrix& a, std::span<const Complex> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InvalidArgument("lu_solve: matrix is not square");
  if (b.size() != n) throw InvalidArgument("lu_solve: right-hand side has wrong length");

  double scale = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += std::norm(a(r, c));
    scale = std::max(scale, std::sqrt(s));
  }
  const double threshold = 1e-14 * scale;

  CMatrix lu = a;
  CVector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(lu(r, k));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= threshold || best == 0.0) throw SingularMatrix("lu_solve: matrix is numerically singular");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu(k, c), lu(piv, c));
      std::swap(x[k], x[piv]);
    }
    const Complex inv = 1.0 / lu(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex f = lu(r, k) * inv;
      if (f == Complex{}) continue;
      for (std::size_t c = k + 1; c < n; ++c) lu(r, c) -= f * lu(k, c);
      x[r] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    Complex acc = x[k];
    for (std::size_t c = k + 1; c < n; ++c) acc -= lu(k, c) * x[c];
    x[k] = acc / lu(k, k);
  }
  return x;
}

namespace {

Eigen::MatrixXcd to_eigen(const CMatrix& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  return m;
}

}  // namespace

std::vector<double> singular_values(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t numerical_rank(const CMatrix& a) {
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) * 1e-12 * s.front();
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v > tol; }));
}

Complex det3(const CMatrix& a) {
  if (a.rows() != 3 || a.cols() != 3) throw InvalidArgument("det3: expected a 3x3 matrix");
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

CMatrix adjugate3(const CMatrix& a) {
  if (a.rows() != 3 || a.cols() != 3) throw InvalidArgument("adjugate3: expected a 3x3 matrix");
  CMatrix adj(3, 3);
  // adj(A)(j, i) is the (i, j) cofactor.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const std::size_t r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      const std::size_t c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      adj(j, i) = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
    }
  return adj;
}

CMatrix cross_matrix(std::span<const Complex> t) {
  if (t.size() != 3) throw InvalidArgument("cross_matrix: expected a 3-vector");
  return CMatrix{{0.0, -t[2], t[1]}, {t[2], 0.0, -t[0]}, {-t[1], t[0], 0.0}};
}

std::vector<Complex> roots_quadratic(Complex c2, Complex c1, Complex c0) {
  if (c2 == Complex{} && c1 == Complex{} && c0 == Complex{})
    throw DegeneratePolynomial("roots_quadratic: all coefficients are zero");
  if (c2 == Complex{}) {
    if (c1 == Complex{}) return {};
    return {-c0 / c1};
  }
  Complex s = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
  if (std::real(std::conj(c1) * s) < 0.0) s = -s;
  const Complex q = -0.5 * (c1 + s);
  if (q == Complex{}) return {0.0, 0.0};
  return {q / c2, c0 / q};
}

std::vector<Complex> roots_cubic(Complex c3, Complex c2, Complex c1, Complex c0) {
  if (c3 == Complex{}) return roots_quadratic(c2, c1, c0);

  Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(0, 2) = -c0 / c3;
  companion(1, 2) = -c1 / c3;
  companion(2, 2) = -c2 / c3;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(companion, false);

  std::vector<Complex> roots;
  roots.reserve(3);
  for (int i = 0; i < 3; ++i) {
    Complex x = es.eigenvalues()(i);
    const Complex p = ((c3 * x + c2) * x + c1) * x + c0;
    const Complex dp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    if (std::abs(dp) > 0.0) {
      const Complex polished = x - p / dp;
      const Complex pp = ((c3 * polished + c2) * polished + c1) * polished + c0;
      if (std::abs(pp) <= std::abs(p)) x = polished;
    }
    roots.push_back(x);
  }
  return roots;
}

}  // namespace galmon
