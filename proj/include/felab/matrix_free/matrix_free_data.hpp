#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/tensor.hpp>
#include <felab/base/types.hpp>
#include <felab/dofs/affine_constraints.hpp>
#include <felab/dofs/dof_handler.hpp>
#include <felab/fe/mapping_q.hpp>
#include <felab/fe/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace felab
{

/// Precomputed data for cell loops without a global matrix.
///
/// Cells are grouped into batches of `batch_width` lanes. All per-batch arrays
/// keep the lane as the innermost index. The trailing batch is filled with
/// copies of its last cell; those lanes are skipped when writing results.
template <int dim, typename Number = double>
class MatrixFreeData
{
public:
  static constexpr unsigned max_batch_width = 8;

  MatrixFreeData(const DoFHandler<dim> &dh, const AffineConstraints<double> &constraints, const MappingQ<dim> &mapping,
                 const QGauss<dim> &quadrature, const unsigned batch_width = 4)
    : w_(batch_width), n_dofs_(dh.n_dofs())
  {
    if (w_ < 1 || w_ > max_batch_width)
      throw DomainError("batch width " + std::to_string(w_) + " is outside 1.." + std::to_string(max_batch_width));
    if (!constraints.is_closed())
      throw NotInitialized("constraints must be closed");

    const auto &fe = dh.get_fe();
    n_1d_          = fe.n_dofs_1d();
    n_q_1d_        = quadrature.n_points_1d();
    dofs_per_cell_ = fe.dofs_per_cell();
    n_q_           = quadrature.size();
    n_cells_       = dh.n_cells();
    n_batches_     = (n_cells_ + w_ - 1) / w_;

    const auto &basis = fe.basis_1d();
    shape_values_.resize(n_q_1d_ * n_1d_);
    shape_gradients_.resize(n_q_1d_ * n_1d_);
    for (unsigned q = 0; q < n_q_1d_; ++q)
      for (unsigned i = 0; i < n_1d_; ++i)
        {
          shape_values_[q * n_1d_ + i]    = Number(basis.value(i, quadrature.points_1d()[q]));
          shape_gradients_[q * n_1d_ + i] = Number(basis.derivative(i, quadrature.points_1d()[q]));
        }

    batch_cells_.resize(n_batches_ * w_);
    n_filled_.resize(n_batches_);
    for (std::size_t b = 0; b < n_batches_; ++b)
      {
        n_filled_[b] = unsigned(std::min<std::size_t>(w_, n_cells_ - b * w_));
        for (unsigned l = 0; l < w_; ++l)
          batch_cells_[b * w_ + l] = b * w_ + std::min(l, n_filled_[b] - 1);
      }

    // geometry
    inverse_jacobian_t_.resize(n_batches_ * n_q_ * dim * dim * w_);
    jxw_.resize(n_batches_ * n_q_ * w_);
    const auto tables = mapping.tabulate(quadrature.points());
    for (std::size_t b = 0; b < n_batches_; ++b)
      for (unsigned l = 0; l < w_; ++l)
        {
          const auto data = mapping.cell_data(dh.cells()[batch_cells_[b * w_ + l]]);
          for (unsigned q = 0; q < n_q_; ++q)
            {
              const Tensor2<dim> J = mapping.jacobian(data, tables, q);
              const auto inv_t     = invert(J).transpose();
              jxw_[(b * n_q_ + q) * w_ + l] = Number(std::abs(J.determinant()) * quadrature.weight(q));
              for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                  inverse_jacobian_t_[((b * n_q_ + q) * dim * dim + i * dim + j) * w_ + l] = Number(inv_t[i][j]);
            }
        }

    // local unknowns resolved to unconstrained global unknowns
    row_start_.reserve(n_cells_ * dofs_per_cell_ + 1);
    row_start_.push_back(0);
    local_inhomogeneity_.resize(n_cells_ * dofs_per_cell_, Number(0));
    for (std::size_t c = 0; c < n_cells_; ++c)
      {
        const auto dofs = dh.cell_dof_indices(c);
        for (unsigned i = 0; i < dofs_per_cell_; ++i)
          {
            if (const auto *line = constraints.line(dofs[i]))
              {
                for (const auto &[g, coefficient] : line->entries)
                  entries_.push_back({g, Number(coefficient)});
                local_inhomogeneity_[c * dofs_per_cell_ + i] = Number(line->inhomogeneity);
              }
            else
              entries_.push_back({dofs[i], Number(1)});
            row_start_.push_back(entries_.size());
          }
      }
    for (const auto &line : constraints.get_lines())
      constrained_.push_back(line.index);
    std::sort(constrained_.begin(), constrained_.end());
    has_inhomogeneities_ = constraints.has_inhomogeneities();

    build_colors();
  }

  unsigned batch_width() const { return w_; }
  std::size_t n_batches() const { return n_batches_; }
  std::size_t n_cells() const { return n_cells_; }
  std::size_t n_dofs() const { return n_dofs_; }
  unsigned n_filled_lanes(const std::size_t b) const { return n_filled_[b]; }
  unsigned n_padded_lanes() const { return unsigned(n_batches_ * w_ - n_cells_); }
  /// Position of the cell (in DoFHandler::cells()) behind a lane.
  std::size_t cell_of(const std::size_t b, const unsigned lane) const { return batch_cells_[b * w_ + lane]; }

  unsigned n_1d() const { return n_1d_; }
  unsigned n_q_1d() const { return n_q_1d_; }
  unsigned n_q_points() const { return n_q_; }
  unsigned dofs_per_cell() const { return dofs_per_cell_; }

  /// [q * n_1d + i]
  const std::vector<Number> &shape_values() const { return shape_values_; }
  const std::vector<Number> &shape_gradients() const { return shape_gradients_; }

  const Number *inverse_jacobian_transpose_data(const std::size_t b) const
  {
    return inverse_jacobian_t_.data() + b * n_q_ * dim * dim * w_;
  }
  const Number *jxw_data(const std::size_t b) const { return jxw_.data() + b * n_q_ * w_; }

  Tensor2<dim> inverse_jacobian_transpose(const std::size_t b, const unsigned q, const unsigned lane) const
  {
    Tensor2<dim> t;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        t[i][j] = inverse_jacobian_t_[((b * n_q_ + q) * dim * dim + i * dim + j) * w_ + lane];
    return t;
  }
  double JxW(const std::size_t b, const unsigned q, const unsigned lane) const { return jxw_[(b * n_q_ + q) * w_ + lane]; }

  struct Entry
  {
    types::global_index index;
    Number coefficient;
  };

  /// Unconstrained unknowns and weights that make up local unknown i of a cell.
  std::span<const Entry> resolved(const std::size_t cell, const unsigned i) const
  {
    const auto r = cell * dofs_per_cell_ + i;
    return {entries_.data() + row_start_[r], entries_.data() + row_start_[r + 1]};
  }
  Number local_inhomogeneity(const std::size_t cell, const unsigned i) const
  {
    return local_inhomogeneity_[cell * dofs_per_cell_ + i];
  }
  bool has_inhomogeneities() const { return has_inhomogeneities_; }
  const std::vector<types::global_index> &constrained_dofs() const { return constrained_; }

  /// Batches grouped so that no two batches of one color write to the same
  /// unknown.
  const std::vector<std::vector<std::size_t>> &colors() const { return colors_; }

  /// Sorted unknowns a batch writes to.
  std::vector<types::global_index> batch_dofs(const std::size_t b) const
  {
    std::vector<types::global_index> out;
    for (unsigned l = 0; l < n_filled_[b]; ++l)
      for (unsigned i = 0; i < dofs_per_cell_; ++i)
        for (const auto &e : resolved(cell_of(b, l), i))
          out.push_back(e.index);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

private:
  void build_colors()
  {
    // owner[g] lists the colors already writing to g
    std::vector<std::vector<unsigned>> owner(n_dofs_);
    for (std::size_t b = 0; b < n_batches_; ++b)
      {
        const auto dofs = batch_dofs(b);
        unsigned color  = 0;
        for (;; ++color)
          {
            bool free = true;
            for (const auto g : dofs)
              if (std::find(owner[g].begin(), owner[g].end(), color) != owner[g].end())
                {
                  free = false;
                  break;
                }
            if (free)
              break;
          }
        if (color == colors_.size())
          colors_.emplace_back();
        colors_[color].push_back(b);
        for (const auto g : dofs)
          owner[g].push_back(color);
      }
  }

  unsigned w_;
  std::size_t n_dofs_;
  unsigned n_1d_ = 0, n_q_1d_ = 0, n_q_ = 0, dofs_per_cell_ = 0;
  std::size_t n_cells_ = 0, n_batches_ = 0;

  std::vector<std::size_t> batch_cells_;
  std::vector<unsigned> n_filled_;

  std::vector<Number> shape_values_, shape_gradients_;
  std::vector<Number> inverse_jacobian_t_, jxw_;

  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
  std::vector<Number> local_inhomogeneity_;
  std::vector<types::global_index> constrained_;
  bool has_inhomogeneities_ = false;

  std::vector<std::vector<std::size_t>> colors_;
};

} // namespace felab
