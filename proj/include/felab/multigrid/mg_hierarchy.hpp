#pragma once

#include <felab/dofs/dof_tools.hpp>
#include <felab/matrix_free/laplace_operator.hpp>

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

namespace felab
{

/// Rectangular CSR matrix for the grid transfer.
template <typename Number = double>
struct TransferMatrix
{
  std::size_t n_rows = 0, n_cols = 0;
  std::vector<std::size_t> row_start;
  std::vector<types::global_index> columns;
  std::vector<Number> values;

  /// dst = M src
  void vmult(Vector<Number> &dst, const Vector<Number> &src) const
  {
    if (src.size() != n_cols)
      throw LengthMismatch("transfer expects " + std::to_string(n_cols) + " entries, got " +
                           std::to_string(src.size()));
    dst.assign(n_rows, Number(0));
    for (std::size_t i = 0; i < n_rows; ++i)
      {
        Number s = 0;
        for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
          s += values[k] * src[columns[k]];
        dst[i] = s;
      }
  }

  /// dst = M^T src
  void Tvmult(Vector<Number> &dst, const Vector<Number> &src) const
  {
    if (src.size() != n_rows)
      throw LengthMismatch("transfer expects " + std::to_string(n_rows) + " entries, got " +
                           std::to_string(src.size()));
    dst.assign(n_cols, Number(0));
    for (std::size_t i = 0; i < n_rows; ++i)
      for (std::size_t k = row_start[i]; k < row_start[i + 1]; ++k)
        dst[columns[k]] += values[k] * src[i];
  }
};

/// Level spaces, level operators and transfers of a globally refined mesh.
/// Level 0 is the coarse mesh. Each level has homogeneous Dirichlet
/// constraints on the given boundary ids.
template <int dim, typename Number = double>
class MGHierarchy
{
public:
  using Operator = LaplaceOperatorMF<dim, Number>;

  /// Dirichlet conditions on every boundary id.
  MGHierarchy(const Triangulation<dim> &tria, const FiniteElementQ<dim> &fe, const MappingQ<dim> &mapping,
              const unsigned batch_width = 4)
    : MGHierarchy(tria, fe, mapping, std::nullopt, batch_width)
  {
  }

  MGHierarchy(const Triangulation<dim> &tria, const FiniteElementQ<dim> &fe, const MappingQ<dim> &mapping,
              std::optional<std::vector<types::boundary_id>> dirichlet_ids, const unsigned batch_width = 4)
  {
    if (!tria.is_globally_refined())
      throw NotGloballyRefined("multigrid needs a mesh refined only globally");
    const unsigned n_levels = tria.n_levels();
    const QGauss<dim> quad(fe.degree() + 1);
    for (unsigned l = 0; l < n_levels; ++l)
      {
        auto dh = std::make_unique<DoFHandler<dim>>(tria);
        dh->distribute_level_dofs(fe, l);
        if (!dirichlet_ids)
          dirichlet_ids = dof_tools::boundary_ids(*dh);
        AffineConstraints<double> c;
        for (const auto id : *dirichlet_ids)
          dof_tools::interpolate_boundary_values(*dh, mapping, id, ScalarFunction<dim>(), c);
        c.close();
        operators_.push_back(std::make_unique<Operator>(MatrixFreeData<dim, Number>(*dh, c, mapping, quad, batch_width)));
        constraints_.push_back(std::move(c));
        handlers_.push_back(std::move(dh));
      }
    for (unsigned l = 0; l + 1 < n_levels; ++l)
      transfers_.push_back(build_prolongation(l));
  }

  unsigned n_levels() const { return handlers_.size(); }
  unsigned max_level() const { return n_levels() - 1; }
  const DoFHandler<dim> &dof_handler(const unsigned l) const { return *handlers_.at(l); }
  const AffineConstraints<double> &constraints(const unsigned l) const { return constraints_.at(l); }
  const Operator &level_operator(const unsigned l) const { return *operators_.at(l); }
  Operator &level_operator(const unsigned l) { return *operators_.at(l); }
  /// Interpolation from level l to level l + 1.
  const TransferMatrix<Number> &prolongation(const unsigned l) const { return transfers_.at(l); }

  /// fine (level l + 1) = P coarse (level l)
  void prolongate(const unsigned l, Vector<Number> &fine, const Vector<Number> &coarse) const
  {
    transfers_.at(l).vmult(fine, coarse);
  }

  /// coarse (level l) = P^T fine (level l + 1)
  void restrict(const unsigned l, Vector<Number> &coarse, const Vector<Number> &fine) const
  {
    transfers_.at(l).Tvmult(coarse, fine);
  }

private:
  // Row i: the coarse shape functions at the support point of fine unknown i.
  // Rows of constrained fine unknowns and columns of constrained coarse ones
  // stay empty.
  TransferMatrix<Number> build_prolongation(const unsigned l) const
  {
    const auto &coarse = *handlers_[l];
    const auto &fine   = *handlers_[l + 1];
    const auto &fe     = fine.get_fe();
    const unsigned dpc = fe.dofs_per_cell();

    std::vector<std::vector<std::pair<types::global_index, Number>>> rows(fine.n_dofs());
    std::vector<bool> done(fine.n_dofs(), false);
    for (std::size_t pos = 0; pos < fine.n_cells(); ++pos)
      {
        const auto &cell        = fine.cells()[pos];
        const auto parent_dofs  = coarse.cell_dof_indices(cell.parent());
        const auto offset       = reference_cell::vertex<dim>(cell.child_index());
        const auto fine_dofs    = fine.cell_dof_indices(pos);
        for (unsigned i = 0; i < dpc; ++i)
          {
            const auto gi = fine_dofs[i];
            if (done[gi])
              continue;
            done[gi] = true;
            if (constraints_[l + 1].is_constrained(gi))
              continue;
            const Point<dim> X(0.5 * (fe.unit_support_point(i) + offset));
            for (unsigned j = 0; j < dpc; ++j)
              {
                if (constraints_[l].is_constrained(parent_dofs[j]))
                  continue;
                const double v = fe.shape_value(j, X);
                if (std::abs(v) > 1e-14)
                  rows[gi].emplace_back(parent_dofs[j], Number(v));
              }
          }
      }

    TransferMatrix<Number> P;
    P.n_rows = fine.n_dofs();
    P.n_cols = coarse.n_dofs();
    P.row_start.push_back(0);
    for (auto &row : rows)
      {
        std::sort(row.begin(), row.end());
        for (const auto &[j, v] : row)
          {
            P.columns.push_back(j);
            P.values.push_back(v);
          }
        P.row_start.push_back(P.columns.size());
      }
    return P;
  }

  std::vector<std::unique_ptr<DoFHandler<dim>>> handlers_;
  std::vector<AffineConstraints<double>> constraints_;
  std::vector<std::unique_ptr<Operator>> operators_;
  std::vector<TransferMatrix<Number>> transfers_;
};

} // namespace felab
