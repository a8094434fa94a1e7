#pragma once

#include <felab/base/exceptions.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace felab
{

/// Rank-1 tensor in dim space dimensions: gradients, normals, displacements.
template <int dim, typename Number = double>
struct Tensor1
{
  static_assert(dim >= 1 && dim <= 3, "only dim = 1, 2, 3 are supported");

  std::array<Number, dim> values{};

  constexpr Tensor1() = default;
  constexpr explicit Tensor1(const std::array<Number, dim> &v) : values(v) {}

  constexpr Number &operator[](const int i) { return values[i]; }
  constexpr const Number &operator[](const int i) const { return values[i]; }

  constexpr Tensor1 &operator+=(const Tensor1 &o)
  {
    for (int i = 0; i < dim; ++i)
      values[i] += o.values[i];
    return *this;
  }
  constexpr Tensor1 &operator-=(const Tensor1 &o)
  {
    for (int i = 0; i < dim; ++i)
      values[i] -= o.values[i];
    return *this;
  }
  constexpr Tensor1 &operator*=(const Number s)
  {
    for (auto &v : values)
      v *= s;
    return *this;
  }
  constexpr Tensor1 &operator/=(const Number s)
  {
    for (auto &v : values)
      v /= s;
    return *this;
  }

  constexpr Number norm_square() const
  {
    Number s = 0;
    for (const auto v : values)
      s += v * v;
    return s;
  }
  Number norm() const { return std::sqrt(norm_square()); }

  friend constexpr bool operator==(const Tensor1 &, const Tensor1 &) = default;
};

template <int dim, typename Number>
constexpr Tensor1<dim, Number> operator+(Tensor1<dim, Number> a, const Tensor1<dim, Number> &b)
{
  return a += b;
}
template <int dim, typename Number>
constexpr Tensor1<dim, Number> operator-(Tensor1<dim, Number> a, const Tensor1<dim, Number> &b)
{
  return a -= b;
}
template <int dim, typename Number>
constexpr Tensor1<dim, Number> operator-(Tensor1<dim, Number> a)
{
  return a *= Number(-1);
}
template <int dim, typename Number>
constexpr Tensor1<dim, Number> operator*(Tensor1<dim, Number> a, const Number s)
{
  return a *= s;
}
template <int dim, typename Number>
constexpr Tensor1<dim, Number> operator*(const Number s, Tensor1<dim, Number> a)
{
  return a *= s;
}
template <int dim, typename Number>
constexpr Tensor1<dim, Number> operator/(Tensor1<dim, Number> a, const Number s)
{
  return a /= s;
}

template <int dim, typename Number>
constexpr Number dot(const Tensor1<dim, Number> &a, const Tensor1<dim, Number> &b)
{
  Number s = 0;
  for (int i = 0; i < dim; ++i)
    s += a[i] * b[i];
  return s;
}

/// A location in dim-dimensional space. Differences of points are tensors.
template <int dim, typename Number = double>
struct Point : Tensor1<dim, Number>
{
  constexpr Point() = default;
  constexpr explicit Point(const Tensor1<dim, Number> &t) : Tensor1<dim, Number>(t) {}
  constexpr explicit Point(const std::array<Number, dim> &v) : Tensor1<dim, Number>(v) {}

  template <typename... Coords>
    requires(sizeof...(Coords) == dim && dim > 1)
  constexpr Point(const Coords... c) : Tensor1<dim, Number>({Number(c)...})
  {}
  constexpr explicit Point(const Number x)
    requires(dim == 1)
    : Tensor1<dim, Number>({x})
  {}

  Number distance(const Point &o) const { return (*this - o).norm(); }
};

template <int dim, typename Number>
constexpr Point<dim, Number> operator+(const Point<dim, Number> &p, const Tensor1<dim, Number> &t)
{
  Point<dim, Number> r = p;
  r += t;
  return r;
}
template <int dim, typename Number>
constexpr Tensor1<dim, Number> operator-(const Point<dim, Number> &a, const Point<dim, Number> &b)
{
  Tensor1<dim, Number> r = a;
  r -= b;
  return r;
}
template <int dim, typename Number>
constexpr Point<dim, Number> operator*(const Point<dim, Number> &p, const Number s)
{
  Point<dim, Number> r = p;
  r *= s;
  return r;
}
template <int dim, typename Number>
constexpr Point<dim, Number> operator*(const Number s, const Point<dim, Number> &p)
{
  return p * s;
}

/// Rank-2 tensor, stored row-major: Jacobians and their inverses.
template <int dim, typename Number = double>
struct Tensor2
{
  std::array<std::array<Number, dim>, dim> values{};

  static constexpr Tensor2 identity()
  {
    Tensor2 t;
    for (int i = 0; i < dim; ++i)
      t.values[i][i] = 1;
    return t;
  }

  constexpr std::array<Number, dim> &operator[](const int i) { return values[i]; }
  constexpr const std::array<Number, dim> &operator[](const int i) const { return values[i]; }

  constexpr Tensor2 transpose() const
  {
    Tensor2 t;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        t.values[i][j] = values[j][i];
    return t;
  }

  constexpr Number determinant() const
  {
    const auto &a = values;
    if constexpr (dim == 1)
      return a[0][0];
    else if constexpr (dim == 2)
      return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    else
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  /// Frobenius norm.
  Number norm() const
  {
    Number s = 0;
    for (const auto &row : values)
      for (const auto v : row)
        s += v * v;
    return std::sqrt(s);
  }

  friend constexpr bool operator==(const Tensor2 &, const Tensor2 &) = default;
};

template <int dim, typename Number>
constexpr Tensor1<dim, Number> contract(const Tensor2<dim, Number> &t, const Tensor1<dim, Number> &v)
{
  Tensor1<dim, Number> r;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      r[i] += t[i][j] * v[j];
  return r;
}

template <int dim, typename Number>
constexpr Tensor2<dim, Number> operator-(Tensor2<dim, Number> a, const Tensor2<dim, Number> &b)
{
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a[i][j] -= b[i][j];
  return a;
}

template <int dim, typename Number>
constexpr Tensor2<dim, Number> operator*(const Tensor2<dim, Number> &a, const Tensor2<dim, Number> &b)
{
  Tensor2<dim, Number> r;
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j < dim; ++j)
        r[i][j] += a[i][k] * b[k][j];
  return r;
}

/// Inverse via the adjugate. Requires |det t| > 1e-12 * |t|_F^dim.
template <int dim, typename Number>
Tensor2<dim, Number> invert(const Tensor2<dim, Number> &t)
{
  const Number det   = t.determinant();
  const Number scale = std::pow(t.norm(), dim);
  if (!(std::abs(det) > Number(1e-12) * scale))
    throw SingularTensor("determinant " + std::to_string(det) + " is too small relative to |t|^dim = " +
                         std::to_string(scale));

  const auto &a = t.values;
  Tensor2<dim, Number> r;
  if constexpr (dim == 1)
    r[0][0] = 1 / a[0][0];
  else if constexpr (dim == 2)
    {
      r[0][0] = a[1][1] / det;
      r[0][1] = -a[0][1] / det;
      r[1][0] = -a[1][0] / det;
      r[1][1] = a[0][0] / det;
    }
  else
    {
      r[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
      r[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
      r[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
      r[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
      r[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
      r[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
      r[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
      r[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
      r[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    }
  return r;
}

template <int dim, typename Number>
std::ostream &operator<<(std::ostream &os, const Tensor1<dim, Number> &t)
{
  os << '(';
  for (int i = 0; i < dim; ++i)
    os << (i ? "," : "") << t[i];
  return os << ')';
}

} // namespace felab
