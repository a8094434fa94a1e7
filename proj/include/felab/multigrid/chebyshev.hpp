#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/lac/vector.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace felab
{

namespace internal
{
/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal a
/// and off-diagonal b, by Sturm-sequence bisection.
inline double largest_tridiagonal_eigenvalue(const std::vector<double> &a, const std::vector<double> &b)
{
  const std::size_t n = a.size();
  double lo = a[0], hi = a[0];
  for (std::size_t i = 0; i < n; ++i)
    {
      const double r = (i > 0 ? std::abs(b[i - 1]) : 0.) + (i + 1 < n ? std::abs(b[i]) : 0.);
      lo             = std::min(lo, a[i] - r);
      hi             = std::max(hi, a[i] + r);
    }
  // number of eigenvalues below x
  auto count_below = [&](const double x) {
    unsigned count = 0;
    double d       = 1;
    for (std::size_t i = 0; i < n; ++i)
      {
        d = a[i] - x - (i > 0 ? b[i - 1] * b[i - 1] / d : 0.);
        if (d == 0)
          d = -1e-300;
        if (d < 0)
          ++count;
      }
    return count;
  };
  for (unsigned it = 0; it < 200 && hi - lo > 1e-15 * std::max(1., std::abs(hi)); ++it)
    {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) >= n)
        hi = mid;
      else
        lo = mid;
    }
  return hi;
}
} // namespace internal

inline constexpr std::uint32_t eigenvalue_estimate_seed = 20240917;

/// Largest Ritz value of diag^{-1} A after n_cg preconditioned CG steps from
/// a fixed random start vector, times `safety`.
template <typename Operator, typename Number>
double estimate_eigenvalue(const Operator &A, const Vector<Number> &inverse_diagonal, const unsigned n_cg = 12,
                           const double safety = 1.2, const std::uint32_t seed = eigenvalue_estimate_seed)
{
  const std::size_t n = inverse_diagonal.size();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Vector<Number> r(n), z(n), p(n), Ap(n);
  for (auto &v : r)
    v = Number(u(rng));

  std::vector<double> alpha, beta;
  for (std::size_t i = 0; i < n; ++i)
    z[i] = inverse_diagonal[i] * r[i];
  p            = z;
  double rho   = vec::dot(r, z);
  const double rho0 = rho;
  for (unsigned it = 0; it < n_cg && rho > 1e-28 * rho0; ++it)
    {
      A.vmult(Ap, p);
      const double pAp = vec::dot(p, Ap);
      if (!(pAp > 0))
        throw BreakdownError("operator is not positive definite in the eigenvalue estimate (p.Ap = " +
                             std::to_string(pAp) + ")");
      alpha.push_back(rho / pAp);
      vec::axpy(r, Number(-alpha.back()), Ap);
      for (std::size_t i = 0; i < n; ++i)
        z[i] = inverse_diagonal[i] * r[i];
      const double rho_new = vec::dot(r, z);
      beta.push_back(rho_new / rho);
      vec::xpby(p, z, Number(beta.back()));
      rho = rho_new;
    }
  if (alpha.empty())
    throw BreakdownError("start vector of the eigenvalue estimate vanishes");

  const std::size_t k = alpha.size();
  std::vector<double> diag(k), off(k > 0 ? k - 1 : 0);
  for (std::size_t i = 0; i < k; ++i)
    {
      diag[i] = 1 / alpha[i] + (i > 0 ? beta[i - 1] / alpha[i - 1] : 0.);
      if (i + 1 < k)
        off[i] = std::sqrt(beta[i]) / alpha[i];
    }
  return safety * internal::largest_tridiagonal_eigenvalue(diag, off);
}

/// Polynomial smoother for diag^{-1} A on [lambda_max / range, lambda_max],
/// the three-term Chebyshev recurrence with a fixed number of steps.
template <typename Operator, typename Number = double>
class ChebyshevSmoother
{
public:
  struct AdditionalData
  {
    unsigned degree          = 6;
    double smoothing_range   = 20;
    double safety            = 1.2;
    unsigned eigenvalue_cg_steps = 12;
  };

  ChebyshevSmoother() = default;

  /// Estimates the largest eigenvalue.
  void initialize(const Operator &A, const Vector<Number> &diagonal, const AdditionalData &data = {})
  {
    set_diagonal(diagonal);
    initialize(A, diagonal, estimate_eigenvalue(A, inverse_diagonal_, data.eigenvalue_cg_steps, data.safety), data);
  }

  /// Uses a given upper spectral bound.
  void initialize(const Operator &A, const Vector<Number> &diagonal, const double max_eigenvalue,
                  const AdditionalData &data = {})
  {
    if (data.degree < 1)
      throw DomainError("Chebyshev degree must be at least 1");
    if (!(data.smoothing_range > 1))
      throw DomainError("smoothing range must exceed 1");
    A_ = &A;
    set_diagonal(diagonal);
    data_       = data;
    lambda_max_ = max_eigenvalue;
    lambda_min_ = max_eigenvalue / data.smoothing_range;
  }

  double max_eigenvalue() const { return lambda_max_; }
  double min_eigenvalue() const { return lambda_min_; }
  unsigned degree() const { return data_.degree; }
  const Vector<Number> &inverse_diagonal() const { return inverse_diagonal_; }

  /// Improves x for A x = b by `degree` steps.
  void smooth(const Vector<Number> &b, Vector<Number> &x) const
  {
    if (!A_)
      throw NotInitialized("smoother is not initialized");
    vec::check_sizes(b, x);
    const std::size_t n = b.size();
    const double theta  = 0.5 * (lambda_max_ + lambda_min_);
    const double delta  = 0.5 * (lambda_max_ - lambda_min_);
    const double sigma  = theta / delta;
    double rho_old      = 1 / sigma;

    r_.resize(n);
    d_.resize(n);
    residual(b, x);
    for (std::size_t i = 0; i < n; ++i)
      {
        d_[i] = Number(1 / theta) * inverse_diagonal_[i] * r_[i];
        x[i] += d_[i];
      }
    for (unsigned k = 1; k < data_.degree; ++k)
      {
        residual(b, x);
        const double rho = 1 / (2 * sigma - rho_old);
        const Number c1  = Number(rho * rho_old);
        const Number c2  = Number(2 * rho / delta);
        for (std::size_t i = 0; i < n; ++i)
          {
            d_[i] = c1 * d_[i] + c2 * inverse_diagonal_[i] * r_[i];
            x[i] += d_[i];
          }
        rho_old = rho;
      }
  }

private:
  void set_diagonal(const Vector<Number> &diagonal)
  {
    inverse_diagonal_.resize(diagonal.size());
    for (std::size_t i = 0; i < diagonal.size(); ++i)
      {
        if (!(diagonal[i] > 0))
          throw ZeroDiagonal("diagonal entry " + std::to_string(i) + " is " + std::to_string(double(diagonal[i])));
        inverse_diagonal_[i] = Number(1) / diagonal[i];
      }
  }

  void residual(const Vector<Number> &b, const Vector<Number> &x) const
  {
    A_->vmult(Ax_, x);
    for (std::size_t i = 0; i < b.size(); ++i)
      r_[i] = b[i] - Ax_[i];
  }

  const Operator *A_ = nullptr;
  AdditionalData data_;
  Vector<Number> inverse_diagonal_;
  double lambda_max_ = 0, lambda_min_ = 0;
  mutable Vector<Number> r_, d_, Ax_;
};

} // namespace felab
