#pragma once

#include <felab/base/exceptions.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace felab::polynomials
{

/// Legendre polynomial P_n and its derivative at x in [-1,1].
inline std::pair<double, double> legendre(const unsigned n, const double x)
{
  double p0 = 1, p1 = x;
  if (n == 0)
    return {1., 0.};
  for (unsigned k = 2; k <= n; ++k)
    {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0              = p1;
      p1              = p2;
    }
  // (1-x^2) P_n' = n (P_{n-1} - x P_n)
  const double dp = std::abs(1 - x * x) < 1e-300 ? 0.5 * n * (n + 1) * (x > 0 ? 1 : (n % 2 ? 1 : -1))
                                                 : n * (p0 - x * p1) / (1 - x * x);
  return {p1, dp};
}

/// Gauss-Legendre points and weights on [0,1], points ascending.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(const unsigned n)
{
  if (n == 0)
    throw DomainError("Gauss rule needs at least one point");
  std::vector<double> x(n), w(n);
  for (unsigned i = 0; i < (n + 1) / 2; ++i)
    {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it)
        {
          const auto [p, dp] = legendre(n, z);
          const double dz    = p / dp;
          z -= dz;
          if (std::abs(dz) < 1e-16)
            break;
        }
      const double dp   = legendre(n, z).second;
      const double wt   = 2 / ((1 - z * z) * dp * dp);
      x[i]              = 0.5 * (1 - z);
      x[n - 1 - i]      = 0.5 * (1 + z);
      w[i] = w[n - 1 - i] = 0.5 * wt;
    }
  if (n % 2 == 1)
    x[n / 2] = 0.5;
  return {x, w};
}

/// Gauss-Lobatto points on [0,1] (endpoints included), ascending: the
/// endpoints plus the roots of P_{n-1}'.
inline std::vector<double> gauss_lobatto_points(const unsigned n)
{
  if (n < 2)
    throw DomainError("Gauss-Lobatto rule needs at least two points");
  const unsigned m = n - 1;
  std::vector<double> x(n);
  x[0]     = 0;
  x[n - 1] = 1;
  for (unsigned i = 1; i < (n + 1) / 2; ++i)
    {
      // Chebyshev-Gauss-Lobatto initial guess, Newton on P_m'
      double z = -std::cos(std::numbers::pi * i / m);
      for (int it = 0; it < 100; ++it)
        {
          const auto [p, dp] = legendre(m, z);
          // P_m'' from the Legendre ODE: (1-z^2) P'' = 2 z P' - m(m+1) P
          const double d2p = (2 * z * dp - m * (m + 1) * p) / (1 - z * z);
          const double dz  = dp / d2p;
          z -= dz;
          if (std::abs(dz) < 1e-16)
            break;
        }
      x[i]         = 0.5 * (1 + z);
      x[n - 1 - i] = 1 - x[i];
    }
  if (n % 2 == 1)
    x[n / 2] = 0.5;
  return x;
}

/// Lagrange basis over a set of distinct nodes.
class LagrangeBasis
{
public:
  LagrangeBasis() = default;
  explicit LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes))
  {
    denominators_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      {
        double d = 1;
        for (std::size_t j = 0; j < nodes_.size(); ++j)
          if (j != i)
            d *= nodes_[i] - nodes_[j];
        denominators_[i] = d;
      }
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double> &nodes() const { return nodes_; }

  double value(const std::size_t i, const double x) const
  {
    double v = 1;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
      if (j != i)
        v *= x - nodes_[j];
    return v / denominators_[i];
  }

  double derivative(const std::size_t i, const double x) const
  {
    double sum = 0;
    for (std::size_t k = 0; k < nodes_.size(); ++k)
      {
        if (k == i)
          continue;
        double prod = 1;
        for (std::size_t j = 0; j < nodes_.size(); ++j)
          if (j != i && j != k)
            prod *= x - nodes_[j];
        sum += prod;
      }
    return sum / denominators_[i];
  }

private:
  std::vector<double> nodes_;
  std::vector<double> denominators_;
};

/// Nodes of the degree-p element in 1d: endpoints for p = 1, Gauss-Lobatto
/// points for higher degrees.
inline std::vector<double> support_points_1d(const unsigned degree)
{
  return gauss_lobatto_points(degree + 1);
}

} // namespace felab::polynomials
