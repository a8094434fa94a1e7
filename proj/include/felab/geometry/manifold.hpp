#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/tensor.hpp>
#include <felab/base/types.hpp>

#include <cmath>
#include <span>
#include <string>

namespace felab
{

/// Where a set of input points sits inside the reference cell of a coarse
/// cell. Manifolds that describe the geometry chart-by-chart use this to
/// place new points without searching for them.
template <int dim>
struct ChartLocation
{
  types::global_index coarse_cell = types::invalid_index;
  /// Reference coordinates in [0,1]^dim of each input point, same order.
  std::span<const Point<dim>> reference_points;
};

/// Geometry oracle. Refinement asks it where new vertices go, and mappings
/// ask it for support points on curved edges, faces and cell interiors.
template <int dim>
class Manifold
{
public:
  virtual ~Manifold() = default;

  /// Weighted "average" of points in the geometry of this manifold.
  /// Weights must sum to one. A single point with weight one comes back
  /// unchanged.
  Point<dim> new_point(std::span<const Point<dim>> points,
                       std::span<const double> weights,
                       const ChartLocation<dim> *chart = nullptr) const
  {
    check_weights(points.size(), weights);
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] == 1.)
        {
          bool others_zero = true;
          for (std::size_t j = 0; j < weights.size(); ++j)
            if (j != i && weights[j] != 0.)
              others_zero = false;
          if (others_zero)
            return points[i];
        }
    return compute_new_point(points, weights, chart);
  }

protected:
  virtual Point<dim> compute_new_point(std::span<const Point<dim>> points,
                                       std::span<const double> weights,
                                       const ChartLocation<dim> *chart) const = 0;

private:
  static void check_weights(const std::size_t n_points, std::span<const double> weights)
  {
    if (n_points == 0 || n_points != weights.size())
      throw WeightError("need the same nonzero number of points and weights, got " + std::to_string(n_points) +
                        " and " + std::to_string(weights.size()));
    double sum = 0;
    for (const double w : weights)
      {
        if (!std::isfinite(w))
          throw WeightError("non-finite weight");
        sum += w;
      }
    if (std::abs(sum - 1.) > 1e-10)
      throw WeightError("weights sum to " + std::to_string(sum) + ", not 1");
  }
};

/// Straight lines and planar faces: the affine combination of the inputs.
template <int dim>
class FlatManifold final : public Manifold<dim>
{
protected:
  Point<dim> compute_new_point(std::span<const Point<dim>> points,
                               std::span<const double> weights,
                               const ChartLocation<dim> *) const override
  {
    Point<dim> p;
    for (std::size_t i = 0; i < points.size(); ++i)
      p += weights[i] * points[i];
    return p;
  }
};

/// Circles (2d) and spheres (3d) about a center. Radius and direction are
/// averaged separately, so points with a common radius produce a point at
/// that radius.
template <int dim>
class PolarManifold final : public Manifold<dim>
{
public:
  explicit PolarManifold(const Point<dim> &center) : center_(center) {}

  const Point<dim> &center() const { return center_; }

protected:
  Point<dim> compute_new_point(std::span<const Point<dim>> points,
                               std::span<const double> weights,
                               const ChartLocation<dim> *) const override
  {
    double radius = 0;
    Tensor1<dim> direction;
    for (std::size_t i = 0; i < points.size(); ++i)
      {
        const Tensor1<dim> d = points[i] - center_;
        const double r       = d.norm();
        if (r == 0.)
          throw DegenerateDirection("input point coincides with the center");
        radius += weights[i] * r;
        direction += (weights[i] / r) * d;
      }
    const double norm = direction.norm();
    if (norm < 1e-10)
      throw DegenerateDirection("weighted direction average has norm " + std::to_string(norm));
    return center_ + (radius / norm) * direction;
  }

private:
  Point<dim> center_;
};

} // namespace felab
