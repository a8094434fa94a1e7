#pragma once

#include <felab/geometry/manifold.hpp>

#include <algorithm>
#include <array>
#include <memory>
#include <vector>

namespace felab
{

/// Gordon-Hall transfinite interpolation over one quadrilateral coarse cell.
///
/// The chart blends the four edge curves into the interior. Edge curves are
/// evaluated through the manifold of the respective edge, so a polar edge
/// contributes an exact circular arc. Corners are ordered lexicographically
/// (P00, P10, P01, P11); edges are south (v=0), north (v=1), west (u=0) and
/// east (u=1).
class TransfiniteChart
{
public:
  enum Edge : unsigned
  {
    west  = 0,
    east  = 1,
    south = 2,
    north = 3
  };

  TransfiniteChart(const std::array<Point<2>, 4> &corners,
                   const std::array<std::shared_ptr<const Manifold<2>>, 4> &edge_manifolds)
    : corners_(corners), edges_(edge_manifolds)
  {
    for (auto &e : edges_)
      if (!e)
        e = std::make_shared<FlatManifold<2>>();
  }

  const std::array<Point<2>, 4> &corners() const { return corners_; }

  /// Point on one of the four boundary curves, t in [0,1] along the
  /// increasing reference coordinate.
  Point<2> edge_point(const Edge e, const double t) const
  {
    const auto [a, b] = edge_corners(e);
    const std::array<Point<2>, 2> pts{corners_[a], corners_[b]};
    const std::array<double, 2> w{1. - t, t};
    return edges_[e]->new_point(pts, w);
  }

  Point<2> evaluate(const Point<2> &uv) const
  {
    constexpr double tol = 1e-10;
    for (int i = 0; i < 2; ++i)
      if (!(uv[i] >= -tol && uv[i] <= 1. + tol))
        throw ChartError("reference coordinate outside the unit square");
    const double u = std::clamp(uv[0], 0., 1.);
    const double v = std::clamp(uv[1], 0., 1.);

    const Point<2> cs = edge_point(south, u);
    const Point<2> cn = edge_point(north, u);
    const Point<2> cw = edge_point(west, v);
    const Point<2> ce = edge_point(east, v);

    Point<2> s;
    for (int d = 0; d < 2; ++d)
      {
        const double blend = (1 - v) * cs[d] + v * cn[d] + (1 - u) * cw[d] + u * ce[d];
        const double bilinear = (1 - u) * (1 - v) * corners_[0][d] + u * (1 - v) * corners_[1][d] +
                                (1 - u) * v * corners_[2][d] + u * v * corners_[3][d];
        s[d] = blend - bilinear;
      }
    return s;
  }

private:
  static std::array<unsigned, 2> edge_corners(const Edge e)
  {
    switch (e)
      {
        case west:
          return {0, 2};
        case east:
          return {1, 3};
        case south:
          return {0, 1};
        default:
          return {2, 3};
      }
  }

  std::array<Point<2>, 4> corners_;
  std::array<std::shared_ptr<const Manifold<2>>, 4> edges_;
};

/// Manifold that places points through the transfinite chart of the coarse
/// cell they belong to. Descendants of a coarse cell know their reference
/// coordinates in it exactly (children split the chart dyadically), so no
/// point search is involved.
class TransfiniteManifold final : public Manifold<2>
{
public:
  void set_chart(const types::global_index coarse_cell, TransfiniteChart chart)
  {
    if (charts_.size() <= coarse_cell)
      charts_.resize(coarse_cell + 1);
    charts_[coarse_cell] = std::make_unique<TransfiniteChart>(std::move(chart));
  }

  bool has_chart(const types::global_index coarse_cell) const
  {
    return coarse_cell < charts_.size() && charts_[coarse_cell] != nullptr;
  }

  const TransfiniteChart &chart(const types::global_index coarse_cell) const
  {
    if (!has_chart(coarse_cell))
      throw ChartError("no chart for coarse cell " + std::to_string(coarse_cell));
    return *charts_[coarse_cell];
  }

protected:
  Point<2> compute_new_point(std::span<const Point<2>> points,
                             std::span<const double> weights,
                             const ChartLocation<2> *location) const override
  {
    if (location == nullptr || location->reference_points.size() != points.size())
      throw ChartError("transfinite interpolation needs the reference location of every input point");
    Point<2> uv;
    for (std::size_t i = 0; i < weights.size(); ++i)
      uv += weights[i] * location->reference_points[i];
    return chart(location->coarse_cell).evaluate(uv);
  }

private:
  std::vector<std::unique_ptr<TransfiniteChart>> charts_;
};

} // namespace felab
