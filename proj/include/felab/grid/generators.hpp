#pragma once

#include <felab/geometry/manifold.hpp>
#include <felab/geometry/transfinite.hpp>
#include <felab/grid/triangulation.hpp>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

namespace felab::grid
{

/// Uniform subdivisions^dim grid of [lower,upper]^dim. Boundary faces get id
/// equal to their face number: 0 at x=lower, 1 at x=upper, 2 at y=lower, ...
template <int dim>
Triangulation<dim> hyper_cube(const double lower, const double upper, const unsigned subdivisions = 1)
{
  if (!(lower < upper))
    throw BadDomain("need lower < upper");
  if (subdivisions == 0)
    throw BadDomain("need at least one subdivision");

  const unsigned n = subdivisions;
  unsigned n_points = 1, n_cells = 1;
  for (int d = 0; d < dim; ++d)
    {
      n_points *= n + 1;
      n_cells *= n;
    }

  std::vector<Point<dim>> vertices(n_points);
  for (unsigned i = 0; i < n_points; ++i)
    for (int d = 0, rest = i; d < dim; ++d, rest /= (n + 1))
      vertices[i][d] = lower + (upper - lower) * double(rest % (n + 1)) / n;

  std::vector<CellData<dim>> cells(n_cells);
  for (unsigned c = 0; c < n_cells; ++c)
    {
      std::array<unsigned, dim> pos;
      for (int d = 0, rest = c; d < dim; ++d, rest /= n)
        pos[d] = rest % n;
      for (unsigned v = 0; v < reference_cell::n_vertices<dim>; ++v)
        {
          unsigned idx = 0;
          for (int d = dim - 1; d >= 0; --d)
            idx = idx * (n + 1) + pos[d] + ((v >> d) & 1u);
          cells[c].vertices[v] = idx;
        }
    }

  Triangulation<dim> tria;
  tria.create_triangulation(std::move(vertices), cells);
  for (const auto &cell : tria.active_cell_iterators())
    for (unsigned f = 0; f < reference_cell::n_faces<dim>; ++f)
      if (cell.at_boundary(f))
        tria.set_boundary_id(cell, f, f);
  return tria;
}

/// Builds a transfinite chart for every coarse cell carrying manifold id
/// `id`, using the manifolds of the cell's faces as edge curves, and attaches
/// the resulting manifold to that id. Faces with the transfinite id itself
/// count as straight.
inline void attach_transfinite_manifold(Triangulation<2> &tria, const types::manifold_id id)
{
  auto tfi = std::make_shared<TransfiniteManifold>();
  for (const auto &cell : tria.cell_iterators_on_level(0))
    {
      if (cell.manifold_id() != id)
        continue;
      std::array<Point<2>, 4> corners;
      for (unsigned v = 0; v < 4; ++v)
        corners[v] = cell.vertex(v);
      std::array<std::shared_ptr<const Manifold<2>>, 4> edges;
      for (unsigned f = 0; f < 4; ++f)
        {
          const auto fid = cell.face(f).manifold_id();
          if (fid != id)
            edges[f] = tria.get_manifold_ptr(fid);
        }
      tfi->set_chart(cell.index(), TransfiniteChart(corners, edges));
    }
  tria.set_manifold(id, tfi);
}

/// Manifold ids used by hyper_shell_2d.
inline constexpr types::manifold_id shell_polar_manifold       = 0;
inline constexpr types::manifold_id shell_transfinite_manifold = 1;

/// Annulus between two circles, made of n_cells coarse cells. In each cell
/// the first reference direction points radially outward, so face 0 lies on
/// the inner circle (boundary id 0) and face 1 on the outer one (boundary
/// id 1). Both circles are exact polar manifolds; the interior follows a
/// transfinite interpolation of them.
inline Triangulation<2> hyper_shell_2d(const Point<2> &center, const double r_inner, const double r_outer,
                                       const unsigned n_cells = 8)
{
  if (!(0 < r_inner && r_inner < r_outer))
    throw BadDomain("need 0 < r_inner < r_outer");
  if (n_cells < 3)
    throw BadDomain("need at least 3 cells");

  std::vector<Point<2>> vertices(2 * n_cells);
  for (unsigned k = 0; k < n_cells; ++k)
    {
      const double phi = 2 * std::numbers::pi * k / n_cells;
      const Point<2> dir(std::cos(phi), std::sin(phi));
      vertices[k]           = center + r_inner * dir;
      vertices[n_cells + k] = center + r_outer * dir;
    }
  std::vector<CellData<2>> cells(n_cells);
  for (unsigned k = 0; k < n_cells; ++k)
    {
      const unsigned next = (k + 1) % n_cells;
      cells[k].vertices   = {k, n_cells + k, next, n_cells + next};
      cells[k].manifold   = shell_transfinite_manifold;
    }

  Triangulation<2> tria;
  tria.create_triangulation(std::move(vertices), cells);
  tria.set_manifold(shell_polar_manifold, std::make_shared<PolarManifold<2>>(center));
  for (const auto &cell : tria.active_cell_iterators())
    for (unsigned f = 0; f < 4; ++f)
      {
        if (cell.at_boundary(f))
          {
            tria.set_boundary_id(cell, f, f);
            tria.set_face_manifold_id(cell, f, shell_polar_manifold);
          }
        else
          tria.set_face_manifold_id(cell, f, shell_transfinite_manifold);
      }
  attach_transfinite_manifold(tria, shell_transfinite_manifold);
  return tria;
}

} // namespace felab::grid
