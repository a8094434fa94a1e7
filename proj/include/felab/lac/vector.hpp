#pragma once

#include <felab/base/exceptions.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace felab
{

/// Vectors are plain contiguous arrays; these helpers cover the BLAS-1
/// operations the solvers need.
template <typename Number = double>
using Vector = std::vector<Number>;

namespace vec
{

template <typename Number>
void check_sizes(const Vector<Number> &a, const Vector<Number> &b)
{
  if (a.size() != b.size())
    throw LengthMismatch("vector sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
}

template <typename Number>
Number dot(const Vector<Number> &a, const Vector<Number> &b)
{
  check_sizes(a, b);
  Number s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

template <typename Number>
Number norm(const Vector<Number> &a)
{
  return std::sqrt(dot(a, a));
}

/// y += alpha x
template <typename Number>
void axpy(Vector<Number> &y, const Number alpha, const Vector<Number> &x)
{
  check_sizes(y, x);
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += alpha * x[i];
}

/// y = x + beta y
template <typename Number>
void xpby(Vector<Number> &y, const Vector<Number> &x, const Number beta)
{
  check_sizes(y, x);
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = x[i] + beta * y[i];
}

template <typename Number>
Vector<Number> subtract(const Vector<Number> &a, const Vector<Number> &b)
{
  check_sizes(a, b);
  Vector<Number> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] - b[i];
  return r;
}

template <typename To, typename From>
Vector<To> convert(const Vector<From> &v)
{
  return Vector<To>(v.begin(), v.end());
}

} // namespace vec
} // namespace felab
