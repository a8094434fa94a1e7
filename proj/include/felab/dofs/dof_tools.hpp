#pragma once

#include <felab/dofs/affine_constraints.hpp>
#include <felab/dofs/dof_handler.hpp>
#include <felab/dofs/function.hpp>
#include <felab/fe/fe_values.hpp>
#include <felab/fe/mapping_q.hpp>
#include <felab/fe/quadrature.hpp>

#include <bit>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

namespace felab::dof_tools
{

/// Constrains the unknowns on the fine side of every face whose neighbor is
/// one level coarser. Each fine unknown becomes a combination of the coarse
/// face unknowns, weighted by the coarse shape functions evaluated at the
/// fine node. The result is not closed.
template <int dim>
void make_hanging_node_constraints(const DoFHandler<dim> &dh, AffineConstraints<double> &constraints)
{
  using Kind        = typename NeighborInfo<dim>::Kind;
  const auto &tria  = dh.get_triangulation();
  const auto &fe    = dh.get_fe();
  constexpr auto nfv = reference_cell::n_face_vertices<dim>;

  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      const auto &cell = dh.cells()[pos];
      for (unsigned f = 0; f < reference_cell::n_faces<dim>; ++f)
        {
          const auto info = cell.neighbor(f);
          if (info.kind != Kind::coarser)
            continue;
          const auto &coarse = info.cell;
          const unsigned cf  = info.face_no;
          const auto coarse_dofs = dh.cell_dof_indices(coarse);

          // Reference coordinates (in the coarse cell) of every vertex that
          // can appear on the coarse face after one refinement.
          std::map<types::global_index, Point<dim>> located;
          std::array<types::global_index, nfv> corner_global;
          std::array<Point<dim>, nfv> corner_ref;
          for (unsigned j = 0; j < nfv; ++j)
            {
              const unsigned v = reference_cell::face_vertex_to_cell_vertex<dim>(cf, j);
              corner_global[j] = coarse.vertex_index(v);
              corner_ref[j]    = reference_cell::vertex<dim>(v);
              located[corner_global[j]] = corner_ref[j];
            }
          for (unsigned a = 0; a < nfv; ++a)
            for (unsigned b = a + 1; b < nfv; ++b)
              if (std::has_single_bit(a ^ b))
                if (const auto mid = tria.find_edge_midpoint(corner_global[a], corner_global[b]))
                  located[*mid] = Point<dim>(0.5 * (corner_ref[a] + corner_ref[b]));
          if constexpr (dim == 3)
            if (const auto center = tria.find_face_center(corner_global))
              {
                Point<dim> c;
                for (const auto &r : corner_ref)
                  c += 0.25 * r;
                located[*center] = c;
              }

          std::array<Point<dim>, nfv> fine_vertex_ref;
          for (unsigned j = 0; j < nfv; ++j)
            {
              const auto g  = cell.vertex_index(reference_cell::face_vertex_to_cell_vertex<dim>(f, j));
              const auto it = located.find(g);
              if (it == located.end())
                throw Error("vertex " + std::to_string(g) + " of a hanging face is not on the coarse face");
              fine_vertex_ref[j] = it->second;
            }

          std::vector<unsigned> coarse_face_local = dh.face_dofs(cf);
          const auto fine_dofs                    = dh.cell_dof_indices(pos);
          for (const unsigned i : dh.face_dofs(f))
            {
              const auto gi = fine_dofs[i];
              bool shared   = false;
              for (const unsigned j : coarse_face_local)
                shared |= coarse_dofs[j] == gi;
              if (shared || constraints.is_constrained(gi))
                continue;

              // the fine node in coarse reference coordinates
              const auto xf = fe.unit_support_point(i);
              Point<dim> X;
              for (unsigned j = 0; j < nfv; ++j)
                {
                  const unsigned v = reference_cell::face_vertex_to_cell_vertex<dim>(f, j);
                  double w         = 1;
                  for (int d = 0; d < dim; ++d)
                    if (d != int(f / 2))
                      w *= ((v >> d) & 1u) ? xf[d] : 1 - xf[d];
                  X += w * fine_vertex_ref[j];
                }

              std::vector<std::pair<types::global_index, double>> entries;
              for (const unsigned j : coarse_face_local)
                {
                  const double c = fe.shape_value(j, X);
                  if (c != 0.)
                    entries.emplace_back(coarse_dofs[j], c);
                }
              constraints.add_constraint(gi, std::move(entries));
            }
        }
    }
}

/// Unit support points of the element, mapped to the cell.
template <int dim>
std::vector<Point<dim>> support_points(const MappingQ<dim> &mapping, const FiniteElementQ<dim> &fe,
                                       const CellAccessor<dim> &cell)
{
  const auto data = mapping.cell_data(cell);
  std::vector<Point<dim>> unit(fe.dofs_per_cell());
  for (unsigned i = 0; i < unit.size(); ++i)
    unit[i] = fe.unit_support_point(i);
  const auto tables = mapping.tabulate(unit);
  std::vector<Point<dim>> points(unit.size());
  for (unsigned i = 0; i < unit.size(); ++i)
    points[i] = mapping.transform(data, tables, i);
  return points;
}

/// Constrains every unknown on faces with the given boundary id to g at its
/// support point. Unknowns that are already constrained keep their line.
template <int dim>
void interpolate_boundary_values(const DoFHandler<dim> &dh, const MappingQ<dim> &mapping,
                                 const types::boundary_id boundary_id, const ScalarFunction<dim> &g,
                                 AffineConstraints<double> &constraints)
{
  const auto &fe = dh.get_fe();
  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      const auto &cell = dh.cells()[pos];
      std::optional<std::vector<Point<dim>>> points;
      for (unsigned f = 0; f < reference_cell::n_faces<dim>; ++f)
        {
          if (!cell.at_boundary(f) || cell.face(f).boundary_id() != boundary_id)
            continue;
          if (!points)
            points = support_points(mapping, fe, cell);
          const auto dofs = dh.cell_dof_indices(pos);
          for (const unsigned i : dh.face_dofs(f))
            if (!constraints.is_constrained(dofs[i]))
              constraints.add_constraint(dofs[i], {}, g.value((*points)[i]));
        }
    }
}

/// Boundary ids present on the faces covered by the handler.
template <int dim>
std::vector<types::boundary_id> boundary_ids(const DoFHandler<dim> &dh)
{
  std::vector<types::boundary_id> ids;
  for (const auto &cell : dh.cells())
    for (unsigned f = 0; f < reference_cell::n_faces<dim>; ++f)
      if (cell.at_boundary(f))
        ids.push_back(cell.face(f).boundary_id());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

/// Nodal interpolation: every unknown gets the function value at its
/// support point.
template <int dim>
std::vector<double> interpolate(const DoFHandler<dim> &dh, const MappingQ<dim> &mapping,
                                const ScalarFunction<dim> &u)
{
  std::vector<double> x(dh.n_dofs(), 0.);
  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      const auto points = support_points(mapping, dh.get_fe(), dh.cells()[pos]);
      const auto dofs   = dh.cell_dof_indices(pos);
      for (unsigned i = 0; i < points.size(); ++i)
        x[dofs[i]] = u.value(points[i]);
    }
  return x;
}

/// Value of a finite element field at a reference point of a cell.
template <int dim, typename Vector>
double point_value(const DoFHandler<dim> &dh, const Vector &x, const CellAccessor<dim> &cell,
                   const Point<dim> &x_hat)
{
  const auto dofs = dh.cell_dof_indices(cell);
  double v        = 0;
  for (unsigned i = 0; i < dofs.size(); ++i)
    v += x[dofs[i]] * dh.get_fe().shape_value(i, x_hat);
  return v;
}

struct Errors
{
  double l2 = 0;
  double h1_seminorm = 0;
};

/// L2 norm and H1 seminorm of u_h - u, by a Gauss rule with n_q points per
/// direction (default p + 2). The H1 part needs the gradient of u.
template <int dim, typename Vector>
Errors integrate_difference(const DoFHandler<dim> &dh, const MappingQ<dim> &mapping, const Vector &x,
                            const ScalarFunction<dim> &u, unsigned n_q = 0)
{
  const auto &fe = dh.get_fe();
  if (n_q == 0)
    n_q = fe.degree() + 2;
  const QGauss<dim> quad(n_q);
  FEValues<dim> fev(mapping, fe, quad, update_values | update_gradients | update_JxW_values | update_quadrature_points);
  Errors e;
  const bool with_gradient = u.has_gradient();
  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      fev.reinit(dh.cells()[pos]);
      const auto dofs = dh.cell_dof_indices(pos);
      for (unsigned q = 0; q < quad.size(); ++q)
        {
          double uh = 0;
          Tensor1<dim> guh;
          for (unsigned i = 0; i < dofs.size(); ++i)
            {
              uh += x[dofs[i]] * fev.shape_value(i, q);
              guh += double(x[dofs[i]]) * fev.shape_grad(i, q);
            }
          const auto &xq = fev.quadrature_point(q);
          const double d = uh - u.value(xq);
          e.l2 += d * d * fev.JxW(q);
          if (with_gradient)
            e.h1_seminorm += (guh - u.gradient(xq)).norm_square() * fev.JxW(q);
        }
    }
  e.l2          = std::sqrt(e.l2);
  e.h1_seminorm = with_gradient ? std::sqrt(e.h1_seminorm) : std::nan("");
  return e;
}

} // namespace felab::dof_tools
