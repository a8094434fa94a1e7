#pragma once

#include <felab/base/tensor.hpp>
#include <felab/fe/polynomials.hpp>
#include <felab/grid/triangulation.hpp>

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace felab
{

/// Polynomial mapping of degree m from [0,1]^dim to a mesh cell.
///
/// The mapping interpolates (m+1)^dim support points placed on the tensor
/// grid of Gauss-Lobatto points. Vertices are taken from the mesh; points on
/// edges, faces and in the interior come from the manifold of the respective
/// entity, with the Gauss-Lobatto coordinates as weights. Degree 1 is the
/// usual (bi-, tri-)linear map. Cells that are axis-aligned boxes with flat
/// geometry take a diagonal-Jacobian fast path.
template <int dim>
class MappingQ
{
public:
  /// Everything the mapping needs to know about one cell.
  struct CellData
  {
    bool cartesian = false;
    Point<dim> lower;
    Tensor1<dim> extent;
    std::vector<Point<dim>> support_points;
  };

  /// Mapping basis evaluated at a fixed set of reference points,
  /// values[q * n_support + k] and likewise for gradients.
  struct Tables
  {
    unsigned n_points = 0;
    std::vector<double> values;
    std::vector<Tensor1<dim>> gradients;
    std::vector<Point<dim>> points;
  };

  explicit MappingQ(const unsigned degree = 1) : degree_(degree)
  {
    if (degree < 1)
      throw DomainError("mapping degree must be at least 1");
    basis_     = polynomials::LagrangeBasis(polynomials::support_points_1d(degree));
    n_support_ = 1;
    for (int d = 0; d < dim; ++d)
      n_support_ *= degree + 1;
  }

  unsigned degree() const { return degree_; }
  unsigned n_support_points() const { return n_support_; }

  /// Disables the box fast path; every cell goes through the polynomial map.
  void set_cartesian_fast_path(const bool enabled) { cartesian_fast_path_ = enabled; }

  bool is_cartesian(const CellAccessor<dim> &cell) const
  {
    if (cell.manifold_id() != types::flat_manifold)
      return false;
    for (unsigned f = 0; f < reference_cell::n_faces<dim>; ++f)
      if (cell.face(f).manifold_id() != types::flat_manifold)
        return false;
    const Point<dim> &lo = cell.vertex(0);
    const Point<dim> &hi = cell.vertex(reference_cell::n_vertices<dim> - 1);
    double scale         = 0;
    for (int d = 0; d < dim; ++d)
      scale = std::max(scale, std::abs(hi[d] - lo[d]));
    for (unsigned v = 0; v < reference_cell::n_vertices<dim>; ++v)
      for (int d = 0; d < dim; ++d)
        {
          const double expected = ((v >> d) & 1u) ? hi[d] : lo[d];
          if (std::abs(cell.vertex(v)[d] - expected) > 1e-12 * scale)
            return false;
        }
    return true;
  }

  std::vector<Point<dim>> compute_support_points(const CellAccessor<dim> &cell) const
  {
    const auto &tria  = cell.triangulation();
    const auto &nodes = basis_.nodes();
    const unsigned m  = degree_;
    std::vector<Point<dim>> points(n_support_);
    for (unsigned k = 0; k < n_support_; ++k)
      {
        std::array<unsigned, dim> t;
        std::array<int, dim> free_dirs;
        int n_free    = 0;
        unsigned base = 0; // vertex with the free directions at 0
        for (int d = 0, rest = k; d < dim; ++d, rest /= (m + 1))
          {
            t[d] = rest % (m + 1);
            if (t[d] == 0 || t[d] == m)
              base |= (t[d] == m ? 1u : 0u) << d;
            else
              free_dirs[n_free++] = d;
          }

        if (n_free == 0)
          {
            points[k] = cell.vertex(base);
            continue;
          }

        // Vertices spanning the entity and their multilinear weights.
        std::array<unsigned, reference_cell::n_vertices<dim>> verts;
        std::array<double, reference_cell::n_vertices<dim>> weights;
        const unsigned n_verts = 1u << n_free;
        for (unsigned j = 0; j < n_verts; ++j)
          {
            unsigned v = base;
            double w   = 1;
            for (int e = 0; e < n_free; ++e)
              {
                const double xi = nodes[t[free_dirs[e]]];
                if ((j >> e) & 1u)
                  {
                    v |= 1u << free_dirs[e];
                    w *= xi;
                  }
                else
                  w *= 1 - xi;
              }
            verts[j]   = v;
            weights[j] = w;
          }

        types::manifold_id manifold;
        if (n_free == dim)
          manifold = cell.manifold_id();
        else if (n_free == 1)
          manifold = tria.edge_manifold_id(cell, verts[0], verts[1]);
        else
          {
            // a face in 3d: the one fixed direction is the normal
            int normal = 0;
            for (int d = 0; d < dim; ++d)
              if (t[d] == 0 || t[d] == m)
                normal = d;
            manifold = cell.face(2 * normal + (t[normal] == m ? 1 : 0)).manifold_id();
          }
        points[k] = tria.place_point(cell, manifold, std::span<const unsigned>(verts.data(), n_verts),
                                     std::span<const double>(weights.data(), n_verts));
      }
    return points;
  }

  CellData cell_data(const CellAccessor<dim> &cell) const
  {
    CellData data;
    if (cartesian_fast_path_ && is_cartesian(cell))
      {
        data.cartesian = true;
        data.lower     = cell.vertex(0);
        data.extent    = cell.vertex(reference_cell::n_vertices<dim> - 1) - cell.vertex(0);
      }
    else
      data.support_points = compute_support_points(cell);
    return data;
  }

  Tables tabulate(std::span<const Point<dim>> points) const
  {
    Tables tables;
    tables.n_points = points.size();
    tables.points.assign(points.begin(), points.end());
    tables.values.resize(points.size() * n_support_);
    tables.gradients.resize(points.size() * n_support_);
    for (std::size_t q = 0; q < points.size(); ++q)
      for (unsigned k = 0; k < n_support_; ++k)
        {
          const auto [v, g]                      = basis_function(k, points[q]);
          tables.values[q * n_support_ + k]    = v;
          tables.gradients[q * n_support_ + k] = g;
        }
    return tables;
  }

  Point<dim> transform(const CellData &data, const Tables &tables, const unsigned q) const
  {
    if (data.cartesian)
      return affine_point(data, tables.points[q]);
    Point<dim> x;
    for (unsigned k = 0; k < n_support_; ++k)
      x += tables.values[q * n_support_ + k] * data.support_points[k];
    return x;
  }

  Tensor2<dim> jacobian(const CellData &data, const Tables &tables, const unsigned q) const
  {
    if (data.cartesian)
      return diagonal_jacobian(data);
    Tensor2<dim> J;
    for (unsigned k = 0; k < n_support_; ++k)
      {
        const auto &g = tables.gradients[q * n_support_ + k];
        const auto &s = data.support_points[k];
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            J[i][j] += s[i] * g[j];
      }
    return J;
  }

  Point<dim> transform_unit_to_real(const CellAccessor<dim> &cell, const Point<dim> &x_hat) const
  {
    const auto data = cell_data(cell);
    if (data.cartesian)
      return affine_point(data, x_hat);
    Point<dim> x;
    for (unsigned k = 0; k < n_support_; ++k)
      x += basis_function(k, x_hat).first * data.support_points[k];
    return x;
  }

  Tensor2<dim> jacobian(const CellAccessor<dim> &cell, const Point<dim> &x_hat) const
  {
    const auto data = cell_data(cell);
    if (data.cartesian)
      return diagonal_jacobian(data);
    const std::array<Point<dim>, 1> pts{x_hat};
    return jacobian(data, tabulate(pts), 0);
  }

private:
  static Point<dim> affine_point(const CellData &data, const Point<dim> &x_hat)
  {
    Point<dim> x = data.lower;
    for (int d = 0; d < dim; ++d)
      x[d] += data.extent[d] * x_hat[d];
    return x;
  }

  static Tensor2<dim> diagonal_jacobian(const CellData &data)
  {
    Tensor2<dim> J;
    for (int d = 0; d < dim; ++d)
      J[d][d] = data.extent[d];
    return J;
  }

  std::pair<double, Tensor1<dim>> basis_function(unsigned k, const Point<dim> &x) const
  {
    std::array<double, dim> val, der;
    for (int d = 0; d < dim; ++d, k /= degree_ + 1)
      {
        val[d] = basis_.value(k % (degree_ + 1), x[d]);
        der[d] = basis_.derivative(k % (degree_ + 1), x[d]);
      }
    double v = 1;
    Tensor1<dim> g;
    for (int d = 0; d < dim; ++d)
      v *= val[d];
    for (int c = 0; c < dim; ++c)
      {
        double p = 1;
        for (int d = 0; d < dim; ++d)
          p *= d == c ? der[d] : val[d];
        g[c] = p;
      }
    return {v, g};
  }

  unsigned degree_;
  unsigned n_support_;
  polynomials::LagrangeBasis basis_;
  bool cartesian_fast_path_ = true;
};

} // namespace felab
