#pragma once

#include <felab/base/tensor.hpp>
#include <felab/fe/polynomials.hpp>

#include <vector>

namespace felab
{

/// Tensor-product Gauss-Legendre rule on [0,1]^dim with n_1d points per
/// direction, exact for polynomials of degree 2*n_1d-1 in each variable.
/// Points are ordered lexicographically, x fastest.
template <int dim>
class QGauss
{
public:
  explicit QGauss(const unsigned n_1d) : n_1d_(n_1d)
  {
    auto [x, w] = polynomials::gauss_legendre(n_1d);
    points_1d_  = x;
    weights_1d_ = w;
    unsigned n  = 1;
    for (int d = 0; d < dim; ++d)
      n *= n_1d;
    points_.resize(n);
    weights_.resize(n, 1.);
    for (unsigned q = 0; q < n; ++q)
      for (int d = 0, rest = q; d < dim; ++d, rest /= n_1d)
        {
          points_[q][d] = x[rest % n_1d];
          weights_[q] *= w[rest % n_1d];
        }
  }

  unsigned n_points_1d() const { return n_1d_; }
  unsigned size() const { return points_.size(); }
  const Point<dim> &point(const unsigned q) const { return points_[q]; }
  double weight(const unsigned q) const { return weights_[q]; }
  const std::vector<Point<dim>> &points() const { return points_; }
  const std::vector<double> &weights() const { return weights_; }
  const std::vector<double> &points_1d() const { return points_1d_; }
  const std::vector<double> &weights_1d() const { return weights_1d_; }

private:
  unsigned n_1d_;
  std::vector<double> points_1d_, weights_1d_;
  std::vector<Point<dim>> points_;
  std::vector<double> weights_;
};

template <int dim>
QGauss<dim> make_gauss(const unsigned n_1d)
{
  return QGauss<dim>(n_1d);
}

} // namespace felab
