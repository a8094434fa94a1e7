#pragma once

#include <felab/dofs/affine_constraints.hpp>
#include <felab/dofs/dof_handler.hpp>
#include <felab/dofs/function.hpp>
#include <felab/fe/fe_values.hpp>
#include <felab/lac/sparse_matrix.hpp>
#include <felab/lac/sparsity_pattern.hpp>
#include <felab/lac/vector.hpp>

#include <memory>
#include <span>
#include <vector>

namespace felab
{

namespace internal
{
/// The unconstrained unknowns a local unknown depends on.
inline void append_resolved(const AffineConstraints<double> &constraints, const types::global_index i,
                            std::vector<types::global_index> &out)
{
  if (const auto *line = constraints.line(i))
    for (const auto &e : line->entries)
      out.push_back(e.first);
  else
    out.push_back(i);
}
} // namespace internal

/// Couplings of all resolved unknowns per cell, plus the diagonal of every
/// constrained row.
template <int dim>
std::shared_ptr<SparsityPattern> make_sparsity_pattern(const DoFHandler<dim> &dh,
                                                       const AffineConstraints<double> &constraints)
{
  DynamicSparsityPattern dsp(dh.n_dofs());
  std::vector<types::global_index> resolved;
  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      resolved.clear();
      for (const auto i : dh.cell_dof_indices(pos))
        {
          internal::append_resolved(constraints, i, resolved);
          if (constraints.is_constrained(i))
            dsp.add(i, i);
        }
      std::sort(resolved.begin(), resolved.end());
      resolved.erase(std::unique(resolved.begin(), resolved.end()), resolved.end());
      dsp.add_block(resolved);
    }
  return std::make_shared<SparsityPattern>(std::move(dsp));
}

/// Adds a cell matrix and vector to the global system, eliminating
/// constrained unknowns: their couplings are redistributed to the unknowns
/// they depend on, inhomogeneities move to the right-hand side, and the
/// constrained diagonal gets the mean of the local diagonal.
inline void distribute_local_to_global(const AffineConstraints<double> &constraints,
                                       const std::vector<double> &local_matrix,
                                       const std::vector<double> &local_rhs,
                                       std::span<const types::global_index> dofs, SparseMatrix<double> &A,
                                       Vector<double> &b)
{
  const std::size_t n = dofs.size();
  struct Term
  {
    types::global_index index;
    double coefficient;
  };
  std::vector<std::vector<Term>> resolved(n);
  std::vector<double> inhom(n, 0.);
  bool any_constrained = false;
  for (std::size_t a = 0; a < n; ++a)
    if (const auto *line = constraints.line(dofs[a]))
      {
        any_constrained = true;
        for (const auto &[j, c] : line->entries)
          resolved[a].push_back({j, c});
        inhom[a] = line->inhomogeneity;
      }
    else
      resolved[a].push_back({dofs[a], 1.});

  if (!any_constrained)
    {
      for (std::size_t a = 0; a < n; ++a)
        {
          for (std::size_t c = 0; c < n; ++c)
            if (local_matrix[a * n + c] != 0.)
              A.add(dofs[a], dofs[c], local_matrix[a * n + c]);
          b[dofs[a]] += local_rhs[a];
        }
      return;
    }

  double mean_diagonal = 0;
  for (std::size_t a = 0; a < n; ++a)
    mean_diagonal += local_matrix[a * n + a];
  mean_diagonal /= n;

  for (std::size_t a = 0; a < n; ++a)
    {
      // right-hand side, lifted by the inhomogeneities of the columns
      double rhs = local_rhs[a];
      for (std::size_t c = 0; c < n; ++c)
        rhs -= local_matrix[a * n + c] * inhom[c];
      for (const auto &ra : resolved[a])
        b[ra.index] += ra.coefficient * rhs;

      for (std::size_t c = 0; c < n; ++c)
        {
          const double k = local_matrix[a * n + c];
          if (k == 0.)
            continue;
          for (const auto &ra : resolved[a])
            for (const auto &rc : resolved[c])
              A.add(ra.index, rc.index, ra.coefficient * k * rc.coefficient);
        }

      if (constraints.is_constrained(dofs[a]))
        {
          A.add(dofs[a], dofs[a], mean_diagonal);
          b[dofs[a]] += mean_diagonal * inhom[a];
        }
    }
}

/// Stiffness matrix and load vector of one cell:
/// A_ij = sum_q grad phi_i . grad phi_j JxW, b_i = sum_q phi_i f JxW.
template <int dim>
void laplace_cell_system(const FEValues<dim> &fev, const ScalarFunction<dim> &f, std::vector<double> &cell_matrix,
                         std::vector<double> &cell_rhs)
{
  const unsigned n = fev.dofs_per_cell();
  cell_matrix.assign(n * n, 0.);
  cell_rhs.assign(n, 0.);
  for (unsigned q = 0; q < fev.n_quadrature_points(); ++q)
    {
      const double jxw = fev.JxW(q);
      const double fq  = f.value(fev.quadrature_point(q));
      for (unsigned i = 0; i < n; ++i)
        {
          for (unsigned j = 0; j < n; ++j)
            cell_matrix[i * n + j] += dot(fev.shape_grad(i, q), fev.shape_grad(j, q)) * jxw;
          cell_rhs[i] += fev.shape_value(i, q) * fq * jxw;
        }
    }
}

/// The usual cell loop for -Laplace u = f.
template <int dim>
void assemble_laplace(const DoFHandler<dim> &dh, const AffineConstraints<double> &constraints,
                      const MappingQ<dim> &mapping, const ScalarFunction<dim> &f, SparseMatrix<double> &A,
                      Vector<double> &b)
{
  const auto &fe = dh.get_fe();
  const QGauss<dim> quad(fe.degree() + 1);
  FEValues<dim> fev(mapping, fe, quad, update_values | update_gradients | update_JxW_values | update_quadrature_points);
  b.assign(dh.n_dofs(), 0.);
  std::vector<double> cell_matrix, cell_rhs;
  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      fev.reinit(dh.cells()[pos]);
      laplace_cell_system(fev, f, cell_matrix, cell_rhs);
      distribute_local_to_global(constraints, cell_matrix, cell_rhs, dh.cell_dof_indices(pos), A, b);
    }
}

/// Load vector C^T F without moving inhomogeneities to the right-hand side;
/// constrained rows are zero. Pairs with a matrix-free operator, which adds
/// the lifting itself.
template <int dim>
void assemble_rhs(const DoFHandler<dim> &dh, const AffineConstraints<double> &constraints,
                  const MappingQ<dim> &mapping, const ScalarFunction<dim> &f, Vector<double> &b)
{
  const auto &fe = dh.get_fe();
  const QGauss<dim> quad(fe.degree() + 1);
  FEValues<dim> fev(mapping, fe, quad, update_values | update_JxW_values | update_quadrature_points);
  b.assign(dh.n_dofs(), 0.);
  std::vector<double> f_jxw(quad.size());
  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      fev.reinit(dh.cells()[pos]);
      for (unsigned q = 0; q < quad.size(); ++q)
        f_jxw[q] = f.value(fev.quadrature_point(q)) * fev.JxW(q);
      const auto dofs = dh.cell_dof_indices(pos);
      for (unsigned i = 0; i < dofs.size(); ++i)
        {
          double v = 0;
          for (unsigned q = 0; q < quad.size(); ++q)
            v += fev.shape_value(i, q) * f_jxw[q];
          if (const auto *line = constraints.line(dofs[i]))
            for (const auto &[j, c] : line->entries)
              b[j] += c * v;
          else
            b[dofs[i]] += v;
        }
    }
}

} // namespace felab
