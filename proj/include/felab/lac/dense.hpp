#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/lac/vector.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace felab
{

/// Row-major dense matrix with a Cholesky solver, for small coarse problems.
class FullMatrix
{
public:
  FullMatrix() = default;
  FullMatrix(const std::size_t m, const std::size_t n) : m_(m), n_(n), values_(m * n, 0.) {}

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  double &operator()(const std::size_t i, const std::size_t j) { return values_[i * n_ + j]; }
  double operator()(const std::size_t i, const std::size_t j) const { return values_[i * n_ + j]; }

  void vmult(Vector<double> &dst, const Vector<double> &src) const
  {
    dst.assign(m_, 0.);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        dst[i] += (*this)(i, j) * src[j];
  }

  /// Overwrites the lower triangle with L, A = L L^T. Throws BreakdownError
  /// if the matrix is not positive definite.
  void cholesky()
  {
    for (std::size_t j = 0; j < n_; ++j)
      {
        double d = (*this)(j, j);
        for (std::size_t k = 0; k < j; ++k)
          d -= (*this)(j, k) * (*this)(j, k);
        if (!(d > 0))
          throw BreakdownError("matrix is not positive definite at row " + std::to_string(j));
        (*this)(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n_; ++i)
          {
            double s = (*this)(i, j);
            for (std::size_t k = 0; k < j; ++k)
              s -= (*this)(i, k) * (*this)(j, k);
            (*this)(i, j) = s / (*this)(j, j);
          }
      }
    factored_ = true;
  }

  bool is_factored() const { return factored_; }

  /// Solves with the factor from cholesky().
  void cholesky_solve(Vector<double> &x, const Vector<double> &b) const
  {
    if (!factored_)
      throw NotInitialized("cholesky() has not been called");
    x = b;
    for (std::size_t i = 0; i < n_; ++i)
      {
        for (std::size_t k = 0; k < i; ++k)
          x[i] -= (*this)(i, k) * x[k];
        x[i] /= (*this)(i, i);
      }
    for (std::size_t i = n_; i-- > 0;)
      {
        for (std::size_t k = i + 1; k < n_; ++k)
          x[i] -= (*this)(k, i) * x[k];
        x[i] /= (*this)(i, i);
      }
  }

private:
  std::size_t m_ = 0, n_ = 0;
  std::vector<double> values_;
  bool factored_ = false;
};

} // namespace felab
