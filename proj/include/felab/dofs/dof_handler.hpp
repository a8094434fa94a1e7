#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/types.hpp>
#include <felab/fe/fe_q.hpp>
#include <felab/grid/triangulation.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace felab
{

/// Enumerates the global unknowns of a continuous Q_p space.
///
/// Unknowns live on mesh entities: vertices, edge interiors, face interiors
/// (3d) and cell interiors. Entities shared between cells carry one set of
/// indices, oriented by global vertex numbers so that every cell sees the
/// same ordering. The handler either covers the active cells of the mesh or
/// all cells of one level; the latter is what multigrid uses.
template <int dim>
class DoFHandler
{
public:
  static constexpr unsigned all_active = unsigned(-1);

  explicit DoFHandler(const Triangulation<dim> &tria) : tria_(&tria) {}

  const Triangulation<dim> &get_triangulation() const { return *tria_; }

  /// Numbers the unknowns on the active cells, in cell order and local
  /// lexicographic order within each cell. Returns n_dofs.
  types::global_index distribute_dofs(const FiniteElementQ<dim> &fe) { return distribute(fe, all_active); }

  /// Numbers the unknowns on all cells of one level.
  types::global_index distribute_level_dofs(const FiniteElementQ<dim> &fe, const unsigned level)
  {
    if (level >= tria_->n_levels())
      throw IndexError("level " + std::to_string(level) + " does not exist");
    return distribute(fe, level);
  }

  bool is_distributed() const { return fe_ != nullptr; }
  const FiniteElementQ<dim> &get_fe() const
  {
    check_distributed();
    return *fe_;
  }
  types::global_index n_dofs() const { return n_dofs_; }
  unsigned dofs_per_cell() const { return dofs_per_cell_; }

  /// all_active, or the level this handler enumerates.
  unsigned level() const { return level_; }
  bool is_level_handler() const { return level_ != all_active; }

  /// Cells covered by this handler, in enumeration order.
  const std::vector<CellAccessor<dim>> &cells() const
  {
    check_distributed();
    return cells_;
  }
  std::size_t n_cells() const { return cells_.size(); }

  /// Position of a cell in cells(), or invalid_index if it is not covered.
  types::global_index cell_position(const CellAccessor<dim> &cell) const
  {
    if (cell.level() >= position_.size() || cell.index() >= position_[cell.level()].size())
      return types::invalid_index;
    return position_[cell.level()][cell.index()];
  }

  std::span<const types::global_index> cell_dof_indices(const std::size_t position) const
  {
    check_distributed();
    return {dof_indices_.data() + position * dofs_per_cell_, dofs_per_cell_};
  }

  /// Global indices of the cell's shape functions, lexicographic local order.
  std::vector<types::global_index> cell_dof_indices(const CellAccessor<dim> &cell) const
  {
    check_distributed();
    const auto pos = cell_position(cell);
    if (pos == types::invalid_index)
      throw NotActive("cell (" + std::to_string(cell.level()) + "," + std::to_string(cell.index()) +
                      ") is not enumerated by this DoFHandler");
    const auto s = cell_dof_indices(pos);
    return {s.begin(), s.end()};
  }

  /// Local indices of the shape functions that live on face f.
  std::vector<unsigned> face_dofs(const unsigned f) const
  {
    check_distributed();
    std::vector<unsigned> result;
    const unsigned p = fe_->degree();
    for (unsigned i = 0; i < dofs_per_cell_; ++i)
      if (fe_->tensor_index(i)[f / 2] == (f % 2 ? p : 0u))
        result.push_back(i);
    return result;
  }

private:
  void check_distributed() const
  {
    if (!fe_)
      throw NotDistributed("distribute_dofs() has not been called");
  }

  types::global_index distribute(const FiniteElementQ<dim> &fe, const unsigned level)
  {
    fe_            = &fe;
    level_         = level;
    dofs_per_cell_ = fe.dofs_per_cell();
    n_dofs_        = 0;
    cells_.clear();
    if (level == all_active)
      for (const auto &cell : tria_->active_cell_iterators())
        cells_.push_back(cell);
    else
      for (const auto &cell : tria_->cell_iterators_on_level(level))
        cells_.push_back(cell);

    position_.assign(tria_->n_levels(), {});
    for (unsigned l = 0; l < tria_->n_levels(); ++l)
      position_[l].assign(tria_->n_cells(l), types::invalid_index);
    for (std::size_t k = 0; k < cells_.size(); ++k)
      position_[cells_[k].level()][cells_[k].index()] = k;

    const unsigned p     = fe.degree();
    const unsigned inner = p - 1;
    std::vector<types::global_index> vertex_dofs(tria_->n_vertices(), types::invalid_index);
    std::map<std::array<types::global_index, 2>, types::global_index> edge_dofs;
    std::map<std::array<types::global_index, 4>, types::global_index> quad_dofs;

    dof_indices_.assign(cells_.size() * dofs_per_cell_, types::invalid_index);
    for (std::size_t k = 0; k < cells_.size(); ++k)
      {
        const auto &cell = cells_[k];
        std::array<types::global_index, reference_cell::n_vertices<dim>> gv;
        for (unsigned v = 0; v < gv.size(); ++v)
          gv[v] = cell.vertex_index(v);
        types::global_index interior_first = types::invalid_index;

        for (unsigned i = 0; i < dofs_per_cell_; ++i)
          {
            const auto t = fe.tensor_index(i);
            std::array<int, dim> free_dirs{};
            int n_free    = 0;
            unsigned base = 0;
            for (int d = 0; d < dim; ++d)
              {
                if (t[d] == p)
                  base |= 1u << d;
                else if (t[d] != 0)
                  free_dirs[n_free++] = d;
              }

            types::global_index g;
            if (n_free == 0)
              {
                auto &slot = vertex_dofs[gv[base]];
                if (slot == types::invalid_index)
                  slot = n_dofs_++;
                g = slot;
              }
            else if (n_free == dim)
              {
                if (interior_first == types::invalid_index)
                  {
                    interior_first = n_dofs_;
                    unsigned n     = 1;
                    for (int d = 0; d < dim; ++d)
                      n *= inner;
                    n_dofs_ += n;
                  }
                unsigned local = 0;
                for (int d = dim - 1; d >= 0; --d)
                  local = local * inner + (t[d] - 1);
                g = interior_first + local;
              }
            else if (n_free == 1)
              {
                const int e             = free_dirs[0];
                const auto a            = gv[base];
                const auto b            = gv[base | (1u << e)];
                const std::array key    = a < b ? std::array{a, b} : std::array{b, a};
                auto [it, inserted]     = edge_dofs.try_emplace(key, n_dofs_);
                if (inserted)
                  n_dofs_ += inner;
                const unsigned along = t[e] - 1;
                g                    = it->second + (a < b ? along : inner - 1 - along);
              }
            else
              g = quad_dof(gv, base, free_dirs[0], free_dirs[1], t[free_dirs[0]] - 1, t[free_dirs[1]] - 1,
                           inner, quad_dofs);
            dof_indices_[k * dofs_per_cell_ + i] = g;
          }
      }
    return n_dofs_;
  }

  // Face-interior unknowns of a 3d face spanned by directions e1 < e2 from
  // local vertex `base`. The canonical frame of a face starts at its vertex
  // with the smallest global index and runs first toward the adjacent vertex
  // with the smaller global index.
  types::global_index quad_dof(const std::array<types::global_index, reference_cell::n_vertices<dim>> &gv,
                               const unsigned base, const int e1, const int e2, const unsigned a, const unsigned b,
                               const unsigned inner,
                               std::map<std::array<types::global_index, 4>, types::global_index> &quad_dofs)
  {
    // face-local corners (i,j), i along e1, j along e2
    auto corner = [&](const unsigned i, const unsigned j) { return gv[base | (i << e1) | (j << e2)]; };
    std::array<types::global_index, 4> key{corner(0, 0), corner(1, 0), corner(0, 1), corner(1, 1)};
    std::array<types::global_index, 4> sorted = key;
    std::sort(sorted.begin(), sorted.end());
    auto [it, inserted] = quad_dofs.try_emplace(sorted, n_dofs_);
    if (inserted)
      n_dofs_ += inner * inner;

    unsigned oi = 0, oj = 0;
    for (unsigned c = 0; c < 4; ++c)
      if (key[c] == sorted[0])
        {
          oi = c & 1u;
          oj = c >> 1;
        }
    const auto along_i = corner(1 - oi, oj);
    const auto along_j = corner(oi, 1 - oj);
    const unsigned ca  = oi == 0 ? a : inner - 1 - a;
    const unsigned cb  = oj == 0 ? b : inner - 1 - b;
    const unsigned local = along_i < along_j ? ca + inner * cb : cb + inner * ca;
    return it->second + local;
  }

  const Triangulation<dim> *tria_;
  const FiniteElementQ<dim> *fe_ = nullptr;
  unsigned level_                = all_active;
  unsigned dofs_per_cell_        = 0;
  types::global_index n_dofs_    = 0;
  std::vector<CellAccessor<dim>> cells_;
  std::vector<std::vector<types::global_index>> position_;
  std::vector<types::global_index> dof_indices_;
};

} // namespace felab
