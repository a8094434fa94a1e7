#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/tensor.hpp>
#include <felab/fe/polynomials.hpp>

#include <array>
#include <string>
#include <vector>

namespace felab
{

/// Continuous tensor-product Lagrange element Q_p on [0,1]^dim.
///
/// Nodes are the tensor grid of the p+1 Gauss-Lobatto points, numbered
/// lexicographically (x fastest). Shape function i is the product of 1d
/// Lagrange polynomials, one per direction.
template <int dim>
class FiniteElementQ
{
public:
  static constexpr unsigned max_degree = 4;

  explicit FiniteElementQ(const unsigned degree) : degree_(degree)
  {
    if (degree < 1 || degree > max_degree)
      throw DomainError("supported degrees are 1.." + std::to_string(max_degree) + ", got " +
                        std::to_string(degree));
    basis_ = polynomials::LagrangeBasis(polynomials::support_points_1d(degree));
    n_dofs_ = 1;
    for (int d = 0; d < dim; ++d)
      n_dofs_ *= degree + 1;
  }

  unsigned degree() const { return degree_; }
  unsigned dofs_per_cell() const { return n_dofs_; }
  unsigned n_dofs_1d() const { return degree_ + 1; }
  const polynomials::LagrangeBasis &basis_1d() const { return basis_; }

  /// Per-direction indices of dof i.
  std::array<unsigned, dim> tensor_index(unsigned i) const
  {
    std::array<unsigned, dim> t;
    for (int d = 0; d < dim; ++d, i /= degree_ + 1)
      t[d] = i % (degree_ + 1);
    return t;
  }

  unsigned lexicographic_index(const std::array<unsigned, dim> &t) const
  {
    unsigned i = 0;
    for (int d = dim - 1; d >= 0; --d)
      i = i * (degree_ + 1) + t[d];
    return i;
  }

  Point<dim> unit_support_point(const unsigned i) const
  {
    check_index(i);
    const auto t = tensor_index(i);
    Point<dim> p;
    for (int d = 0; d < dim; ++d)
      p[d] = basis_.nodes()[t[d]];
    return p;
  }

  double shape_value(const unsigned i, const Point<dim> &x) const
  {
    check_index(i);
    check_point(x);
    const auto t = tensor_index(i);
    double v     = 1;
    for (int d = 0; d < dim; ++d)
      v *= basis_.value(t[d], x[d]);
    return v;
  }

  Tensor1<dim> shape_grad(const unsigned i, const Point<dim> &x) const
  {
    check_index(i);
    check_point(x);
    const auto t = tensor_index(i);
    std::array<double, dim> val, der;
    for (int d = 0; d < dim; ++d)
      {
        val[d] = basis_.value(t[d], x[d]);
        der[d] = basis_.derivative(t[d], x[d]);
      }
    Tensor1<dim> g;
    for (int c = 0; c < dim; ++c)
      {
        double v = 1;
        for (int d = 0; d < dim; ++d)
          v *= d == c ? der[d] : val[d];
        g[c] = v;
      }
    return g;
  }

private:
  void check_index(const unsigned i) const
  {
    if (i >= n_dofs_)
      throw IndexError("shape function " + std::to_string(i) + " of " + std::to_string(n_dofs_));
  }
  static void check_point(const Point<dim> &x)
  {
    for (int d = 0; d < dim; ++d)
      if (!(x[d] >= -1e-12 && x[d] <= 1 + 1e-12))
        throw DomainError("point outside the reference cell");
  }

  unsigned degree_;
  unsigned n_dofs_;
  polynomials::LagrangeBasis basis_;
};

} // namespace felab
