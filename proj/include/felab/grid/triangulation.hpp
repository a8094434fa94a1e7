#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/tensor.hpp>
#include <felab/base/types.hpp>
#include <felab/geometry/manifold.hpp>
#include <felab/grid/reference_cell.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace felab
{

template <int dim>
class Triangulation;

/// Coarse-cell description handed to Triangulation::create_triangulation.
template <int dim>
struct CellData
{
  std::array<types::global_index, reference_cell::n_vertices<dim>> vertices{};
  types::material_id material = 0;
  types::manifold_id manifold = types::flat_manifold;
};

struct RefinementReport
{
  std::size_t n_new_cells                  = 0;
  std::size_t n_flag_additions_for_balance = 0;
};

/// Handle to a (d-1)-dimensional face of a cell.
template <int dim>
class FaceAccessor
{
public:
  static constexpr int structdim = dim - 1;

  FaceAccessor(const Triangulation<dim> *tria, const unsigned level, const types::global_index cell,
               const unsigned face_no)
    : tria_(tria), level_(level), cell_(cell), face_no_(face_no)
  {}

  unsigned face_no() const { return face_no_; }
  types::global_index vertex_index(unsigned j) const;
  const Point<dim> &vertex(unsigned j) const;
  bool at_boundary() const;
  types::boundary_id boundary_id() const;
  types::manifold_id manifold_id() const;
  Point<dim> center() const;

private:
  const Triangulation<dim> *tria_;
  unsigned level_;
  types::global_index cell_;
  unsigned face_no_;
};

template <int dim>
struct NeighborInfo;

/// Handle (level, index) to a cell. Valid while the mesh is not modified.
template <int dim>
class CellAccessor
{
public:
  CellAccessor() = default;
  CellAccessor(const Triangulation<dim> *tria, const unsigned level, const types::global_index index)
    : tria_(tria), level_(level), index_(index)
  {}

  const Triangulation<dim> &triangulation() const { return *tria_; }
  unsigned level() const { return level_; }
  types::global_index index() const { return index_; }

  bool is_active() const;
  bool has_children() const { return !is_active(); }
  CellAccessor child(unsigned c) const;
  CellAccessor parent() const;
  /// Position of this cell among the children of its parent.
  unsigned child_index() const;

  types::global_index vertex_index(unsigned v) const;
  const Point<dim> &vertex(unsigned v) const;
  Point<dim> center() const;

  FaceAccessor<dim> face(const unsigned f) const { return FaceAccessor<dim>(tria_, level_, index_, f); }
  bool at_boundary(const unsigned f) const { return face(f).at_boundary(); }
  NeighborInfo<dim> neighbor(unsigned f) const;

  types::material_id material_id() const;
  types::manifold_id manifold_id() const;
  bool refine_flag_set() const;

  /// Coarse cell this cell descends from, and the box it occupies in the
  /// reference coordinates of that coarse cell.
  types::global_index coarse_cell() const;
  const Point<dim> &chart_origin() const;
  double chart_size() const { return std::ldexp(1., -int(level_)); }

  friend bool operator==(const CellAccessor &a, const CellAccessor &b)
  {
    return a.tria_ == b.tria_ && a.level_ == b.level_ && a.index_ == b.index_;
  }

private:
  const Triangulation<dim> *tria_ = nullptr;
  unsigned level_                 = 0;
  types::global_index index_      = types::invalid_index;
};

template <int dim>
struct NeighborInfo
{
  enum class Kind
  {
    none,
    same_level,
    coarser
  };

  Kind kind = Kind::none;
  CellAccessor<dim> cell;
  /// Face of the neighbor that touches the queried face.
  unsigned face_no = 0;
  /// For coarser neighbors: which of the 2^(dim-1) subfaces of the neighbor's
  /// face is the queried face (numbered by the neighbor face vertex it touches).
  unsigned subface = 0;
};

/// Hierarchical quad/hex mesh.
///
/// Cells are stored per level as structure-of-arrays. Refinement is
/// isotropic, each refined cell gets 2^dim children stored contiguously on
/// the next level, and neighboring active cells never differ by more than
/// one level across a face.
template <int dim>
class Triangulation
{
  static_assert(dim >= 1 && dim <= 3);

public:
  static constexpr int dimension = dim;
  static constexpr unsigned vertices_per_cell = reference_cell::n_vertices<dim>;
  static constexpr unsigned faces_per_cell    = reference_cell::n_faces<dim>;
  static constexpr unsigned children_per_cell = reference_cell::n_children<dim>;
  static constexpr unsigned vertices_per_face = reference_cell::n_face_vertices<dim>;

  using FaceKey = std::array<types::global_index, vertices_per_face>;

  class CellRange;

  Triangulation() = default;

  void create_triangulation(std::vector<Point<dim>> vertices, const std::vector<CellData<dim>> &cells)
  {
    if (!levels_.empty())
      throw MeshFormatError("triangulation is not empty");
    if (cells.empty())
      throw MeshFormatError("no cells given");
    vertices_ = std::move(vertices);
    levels_.emplace_back();
    for (const auto &c : cells)
      {
        for (const auto v : c.vertices)
          if (v >= vertices_.size())
            throw MeshFormatError("cell references vertex " + std::to_string(v) + " which does not exist");
        auto sorted = c.vertices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
          throw MeshFormatError("cell uses the same vertex twice");

        const types::global_index idx = append_cell(0, c.vertices, types::invalid_index, c.material, c.manifold);
        levels_[0].coarse_cell.push_back(idx);
        levels_[0].chart_origin.push_back(Point<dim>());
      }
    for (types::global_index i = 0; i < levels_[0].n_cells(); ++i)
      for (unsigned f = 0; f < faces_per_cell; ++f)
        {
          const auto &entries = faces_.at(face_key(0, i, f));
          if (entries.size() > 2)
            throw MeshFormatError("more than two cells share a face");
          auto &l                                = levels_[0];
          l.face_boundary[i * faces_per_cell + f] = entries.size() == 1 ? 0 : types::internal_face;
          l.face_manifold[i * faces_per_cell + f] = types::flat_manifold;
        }
    n_active_ = cells.size();
  }

  // -- geometry description --------------------------------------------------

  void set_manifold(const types::manifold_id id, std::shared_ptr<const Manifold<dim>> manifold)
  {
    if (id == types::flat_manifold)
      throw Error("the flat manifold id is reserved");
    manifolds_[id] = std::move(manifold);
  }

  const Manifold<dim> &get_manifold(const types::manifold_id id) const
  {
    static const FlatManifold<dim> flat;
    if (id == types::flat_manifold)
      return flat;
    const auto it = manifolds_.find(id);
    if (it == manifolds_.end())
      throw Error("no manifold attached to id " + std::to_string(id));
    return *it->second;
  }

  /// Shared handle to a registered manifold; null for the flat default.
  std::shared_ptr<const Manifold<dim>> get_manifold_ptr(const types::manifold_id id) const
  {
    if (id == types::flat_manifold)
      return nullptr;
    const auto it = manifolds_.find(id);
    if (it == manifolds_.end())
      throw Error("no manifold attached to id " + std::to_string(id));
    return it->second;
  }

  void set_boundary_id(const CellAccessor<dim> &cell, const unsigned f, const types::boundary_id id)
  {
    auto &slot = levels_[cell.level()].face_boundary[cell.index() * faces_per_cell + f];
    if (slot == types::internal_face)
      throw Error("cannot set a boundary id on an interior face");
    if (id == types::internal_face)
      throw Error("reserved boundary id");
    slot = id;
  }

  /// Sets the manifold id of a face; interior faces are updated on both sides.
  void set_face_manifold_id(const CellAccessor<dim> &cell, const unsigned f, const types::manifold_id id)
  {
    for (const auto &cf : faces_.at(face_key(cell.level(), cell.index(), f)))
      levels_[cf.level].face_manifold[cf.index * faces_per_cell + cf.face] = id;
  }

  void set_cell_manifold_id(const CellAccessor<dim> &cell, const types::manifold_id id)
  {
    levels_[cell.level()].manifold[cell.index()] = id;
  }

  // -- sizes and traversal ---------------------------------------------------

  unsigned n_levels() const { return levels_.size(); }
  types::global_index n_cells(const unsigned level) const { return levels_.at(level).n_cells(); }
  std::size_t n_active_cells() const { return n_active_; }
  std::size_t n_vertices() const { return vertices_.size(); }
  const std::vector<Point<dim>> &get_vertices() const { return vertices_; }

  CellRange active_cell_iterators() const { return CellRange(this, CellRange::all_levels); }
  CellRange cell_iterators_on_level(const unsigned level) const { return CellRange(this, int(level)); }

  CellAccessor<dim> cell(const unsigned level, const types::global_index index) const
  {
    return CellAccessor<dim>(this, level, index);
  }

  // -- refinement ------------------------------------------------------------

  void set_refine_flag(const CellAccessor<dim> &cell)
  {
    if (!cell.is_active())
      throw NotActive("cell (" + std::to_string(cell.level()) + "," + std::to_string(cell.index()) +
                      ") has children");
    levels_[cell.level()].refine_flag[cell.index()] = true;
  }

  void clear_refine_flags()
  {
    for (auto &l : levels_)
      std::fill(l.refine_flag.begin(), l.refine_flag.end(), false);
  }

  /// Splits every flagged cell into 2^dim children. Flags are first
  /// propagated to coarser neighbors until the result is 2:1 balanced.
  RefinementReport execute_refinement()
  {
    RefinementReport report;
    report.n_flag_additions_for_balance = propagate_flags_for_balance();

    std::vector<std::pair<unsigned, types::global_index>> to_refine;
    for (unsigned l = 0; l < levels_.size(); ++l)
      for (types::global_index i = 0; i < levels_[l].n_cells(); ++i)
        if (levels_[l].refine_flag[i])
          to_refine.emplace_back(l, i);

    for (const auto &[l, i] : to_refine)
      refine_cell(l, i);
    clear_refine_flags();

    report.n_new_cells = to_refine.size() * children_per_cell;
    n_active_ += to_refine.size() * (children_per_cell - 1);
    return report;
  }

  void refine_global(const unsigned times = 1)
  {
    for (unsigned t = 0; t < times; ++t)
      {
        for (const auto &cell : active_cell_iterators())
          set_refine_flag(cell);
        execute_refinement();
      }
  }

  /// True if the mesh came out of global refinements only: every cell below
  /// the finest level is refined and the finest level is fully active.
  bool is_globally_refined() const
  {
    for (unsigned l = 0; l < levels_.size(); ++l)
      for (types::global_index i = 0; i < levels_[l].n_cells(); ++i)
        if ((levels_[l].first_child[i] == types::invalid_index) != (l + 1 == levels_.size()))
          return false;
    return true;
  }

  // -- topology queries ------------------------------------------------------

  NeighborInfo<dim> neighbor(const unsigned level, const types::global_index index, const unsigned f) const
  {
    NeighborInfo<dim> info;
    if (levels_[level].face_boundary[index * faces_per_cell + f] != types::internal_face)
      return info;

    if (const auto partner = same_level_partner(level, index, f))
      {
        info.kind    = NeighborInfo<dim>::Kind::same_level;
        info.cell    = CellAccessor<dim>(this, partner->level, partner->index);
        info.face_no = partner->face;
        return info;
      }

    // The face lies on a face of an ancestor whose neighbor is the coarser cell.
    unsigned l            = level;
    types::global_index i = index;
    while (l > 0)
      {
        i = levels_[l].parent[i];
        --l;
        if (const auto partner = same_level_partner(l, i, f))
          {
            info.kind    = NeighborInfo<dim>::Kind::coarser;
            info.cell    = CellAccessor<dim>(this, partner->level, partner->index);
            info.face_no = partner->face;
            info.subface = 0;
            for (unsigned j = 0; j < vertices_per_face; ++j)
              {
                const auto nv = cell_vertex(partner->level, partner->index,
                                            reference_cell::face_vertex_to_cell_vertex<dim>(partner->face, j));
                for (unsigned k = 0; k < vertices_per_face; ++k)
                  if (cell_vertex(level, index, reference_cell::face_vertex_to_cell_vertex<dim>(f, k)) == nv)
                    info.subface = j;
              }
            return info;
          }
      }
    throw Error("interior face without a neighbor");
  }

  /// Vertex created at the midpoint of the edge between two vertices, if any.
  std::optional<types::global_index> find_edge_midpoint(types::global_index a, types::global_index b) const
  {
    const auto it = edge_midpoints_.find(sorted_pair(a, b));
    if (it == edge_midpoints_.end())
      return std::nullopt;
    return it->second;
  }

  /// Vertex created at the center of a quadrilateral face, if any (3d only).
  std::optional<types::global_index> find_face_center(FaceKey key) const
  {
    std::sort(key.begin(), key.end());
    const auto it = face_centers_.find(key);
    if (it == face_centers_.end())
      return std::nullopt;
    return it->second;
  }

  /// Manifold responsible for the edge between local vertices a and b.
  types::manifold_id edge_manifold_id(const CellAccessor<dim> &cell, const unsigned a, const unsigned b) const
  {
    const unsigned along = std::countr_zero(a ^ b);
    if constexpr (dim == 2)
      {
        const unsigned normal = 1 - along;
        return cell.face(2 * normal + ((a >> normal) & 1u)).manifold_id();
      }
    else
      {
        std::optional<types::manifold_id> interior_curved;
        for (int d = 0; d < dim; ++d)
          if (unsigned(d) != along)
            {
              const auto face = cell.face(2 * d + ((a >> d) & 1u));
              if (face.manifold_id() != types::flat_manifold)
                {
                  if (face.at_boundary())
                    return face.manifold_id();
                  if (!interior_curved)
                    interior_curved = face.manifold_id();
                }
            }
        return interior_curved ? *interior_curved : cell.manifold_id();
      }
  }

  /// Places a point as a weighted combination of some vertices of a cell,
  /// in the geometry of the given manifold.
  Point<dim> place_point(const CellAccessor<dim> &cell, const types::manifold_id manifold,
                         std::span<const unsigned> local_vertices, std::span<const double> weights) const
  {
    std::array<Point<dim>, vertices_per_cell> points;
    std::array<Point<dim>, vertices_per_cell> reference;
    const auto n = local_vertices.size();
    for (std::size_t k = 0; k < n; ++k)
      {
        points[k] = cell.vertex(local_vertices[k]);
        reference[k] = cell.chart_origin() + cell.chart_size() * reference_cell::vertex<dim>(local_vertices[k]);
      }
    const ChartLocation<dim> chart{cell.coarse_cell(), std::span<const Point<dim>>(reference.data(), n)};
    return get_manifold(manifold).new_point(std::span<const Point<dim>>(points.data(), n), weights, &chart);
  }

private:
  friend class CellAccessor<dim>;
  friend class FaceAccessor<dim>;

  struct Level
  {
    std::vector<types::global_index> vertices;
    std::vector<types::global_index> parent;
    std::vector<types::global_index> first_child;
    std::vector<types::material_id> material;
    std::vector<types::manifold_id> manifold;
    std::vector<types::boundary_id> face_boundary;
    std::vector<types::manifold_id> face_manifold;
    std::vector<types::global_index> coarse_cell;
    std::vector<Point<dim>> chart_origin;
    std::vector<bool> refine_flag;

    types::global_index n_cells() const { return parent.size(); }
  };

  struct CellFace
  {
    unsigned level;
    types::global_index index;
    unsigned face;
  };

  struct FaceKeyHash
  {
    std::size_t operator()(const FaceKey &k) const
    {
      std::size_t h = 0;
      for (const auto v : k)
        h = h * 1000003u ^ std::hash<types::global_index>{}(v);
      return h;
    }
  };

  static std::array<types::global_index, 2> sorted_pair(types::global_index a, types::global_index b)
  {
    return a < b ? std::array{a, b} : std::array{b, a};
  }

  types::global_index cell_vertex(const unsigned level, const types::global_index index, const unsigned v) const
  {
    return levels_[level].vertices[index * vertices_per_cell + v];
  }

  FaceKey face_key(const unsigned level, const types::global_index index, const unsigned f) const
  {
    FaceKey key;
    for (unsigned j = 0; j < vertices_per_face; ++j)
      key[j] = cell_vertex(level, index, reference_cell::face_vertex_to_cell_vertex<dim>(f, j));
    std::sort(key.begin(), key.end());
    return key;
  }

  std::optional<CellFace> same_level_partner(const unsigned level, const types::global_index index,
                                             const unsigned f) const
  {
    for (const auto &cf : faces_.at(face_key(level, index, f)))
      if (cf.level != level || cf.index != index)
        return cf;
    return std::nullopt;
  }

  types::global_index append_cell(const unsigned level, const std::array<types::global_index, vertices_per_cell> &verts,
                                  const types::global_index parent, const types::material_id material,
                                  const types::manifold_id manifold)
  {
    auto &l                       = levels_[level];
    const types::global_index idx = l.n_cells();
    l.vertices.insert(l.vertices.end(), verts.begin(), verts.end());
    l.parent.push_back(parent);
    l.first_child.push_back(types::invalid_index);
    l.material.push_back(material);
    l.manifold.push_back(manifold);
    l.face_boundary.resize(l.face_boundary.size() + faces_per_cell, types::internal_face);
    l.face_manifold.resize(l.face_manifold.size() + faces_per_cell, types::flat_manifold);
    l.refine_flag.push_back(false);
    for (unsigned f = 0; f < faces_per_cell; ++f)
      faces_[face_key(level, idx, f)].push_back(CellFace{level, idx, f});
    return idx;
  }

  std::size_t propagate_flags_for_balance()
  {
    std::size_t added = 0;
    std::vector<std::pair<unsigned, types::global_index>> work;
    for (unsigned l = 0; l < levels_.size(); ++l)
      for (types::global_index i = 0; i < levels_[l].n_cells(); ++i)
        if (levels_[l].refine_flag[i])
          work.emplace_back(l, i);

    while (!work.empty())
      {
        const auto [l, i] = work.back();
        work.pop_back();
        for (unsigned f = 0; f < faces_per_cell; ++f)
          {
            const auto nb = neighbor(l, i, f);
            if (nb.kind != NeighborInfo<dim>::Kind::coarser)
              continue;
            const auto nl = nb.cell.level();
            const auto ni = nb.cell.index();
            if (levels_[nl].first_child[ni] == types::invalid_index && !levels_[nl].refine_flag[ni])
              {
                levels_[nl].refine_flag[ni] = true;
                ++added;
                work.emplace_back(nl, ni);
              }
          }
      }
    return added;
  }

  types::global_index edge_midpoint(const CellAccessor<dim> &cell, const unsigned a, const unsigned b)
  {
    const auto key = sorted_pair(cell.vertex_index(a), cell.vertex_index(b));
    if (const auto it = edge_midpoints_.find(key); it != edge_midpoints_.end())
      return it->second;
    const std::array<unsigned, 2> lv{a, b};
    const std::array<double, 2> w{0.5, 0.5};
    vertices_.push_back(place_point(cell, edge_manifold_id(cell, a, b), lv, w));
    return edge_midpoints_[key] = vertices_.size() - 1;
  }

  types::global_index face_center(const CellAccessor<dim> &cell, const unsigned f)
  {
    std::array<unsigned, vertices_per_face> lv;
    FaceKey key;
    for (unsigned j = 0; j < vertices_per_face; ++j)
      {
        lv[j]  = reference_cell::face_vertex_to_cell_vertex<dim>(f, j);
        key[j] = cell.vertex_index(lv[j]);
      }
    std::sort(key.begin(), key.end());
    if (const auto it = face_centers_.find(key); it != face_centers_.end())
      return it->second;
    std::array<double, vertices_per_face> w;
    w.fill(1. / vertices_per_face);
    vertices_.push_back(place_point(cell, cell.face(f).manifold_id(), lv, w));
    return face_centers_[key] = vertices_.size() - 1;
  }

  types::global_index cell_center(const CellAccessor<dim> &cell)
  {
    std::array<unsigned, vertices_per_cell> lv;
    std::array<double, vertices_per_cell> w;
    for (unsigned v = 0; v < vertices_per_cell; ++v)
      {
        lv[v] = v;
        w[v]  = 1. / vertices_per_cell;
      }
    vertices_.push_back(place_point(cell, cell.manifold_id(), lv, w));
    return vertices_.size() - 1;
  }

  void refine_cell(const unsigned level, const types::global_index index)
  {
    if (levels_.size() == level + 1)
      levels_.emplace_back();
    const CellAccessor<dim> cell(this, level, index);

    // Vertex indices of the 3^dim grid of the refined cell, lexicographic.
    constexpr unsigned n_grid = dim == 1 ? 3 : dim == 2 ? 9 : 27;
    std::array<types::global_index, n_grid> grid;
    for (unsigned g = 0; g < n_grid; ++g)
      {
        std::array<unsigned, dim> c;
        unsigned n_mid = 0;
        for (int d = 0, rest = g; d < dim; ++d, rest /= 3)
          {
            c[d] = rest % 3;
            n_mid += c[d] == 1;
          }
        auto corner = [&](const std::array<unsigned, dim> &cc) {
          unsigned v = 0;
          for (int d = 0; d < dim; ++d)
            v |= (cc[d] / 2) << d;
          return v;
        };
        if (n_mid == 0)
          grid[g] = cell.vertex_index(corner(c));
        else if (n_mid == unsigned(dim))
          grid[g] = cell_center(cell);
        else if (n_mid == 1)
          {
            auto ca = c, cb = c;
            for (int d = 0; d < dim; ++d)
              if (c[d] == 1)
                {
                  ca[d] = 0;
                  cb[d] = 2;
                }
            grid[g] = edge_midpoint(cell, corner(ca), corner(cb));
          }
        else
          {
            // dim == 3, center of a face
            for (int d = 0; d < dim; ++d)
              if (c[d] != 1)
                grid[g] = face_center(cell, 2 * d + c[d] / 2);
          }
      }

    auto &parent_level                = levels_[level];
    const types::global_index first   = levels_[level + 1].n_cells();
    parent_level.first_child[index]   = first;
    const types::material_id material = parent_level.material[index];
    const types::manifold_id manifold = parent_level.manifold[index];
    const Point<dim> origin           = parent_level.chart_origin[index];
    const types::global_index coarse  = parent_level.coarse_cell[index];
    const double half                 = 0.5 * cell.chart_size();

    for (unsigned c = 0; c < children_per_cell; ++c)
      {
        std::array<types::global_index, vertices_per_cell> verts;
        for (unsigned v = 0; v < vertices_per_cell; ++v)
          {
            unsigned g = 0;
            for (int d = dim - 1; d >= 0; --d)
              g = g * 3 + ((c >> d) & 1u) + ((v >> d) & 1u);
            verts[v] = grid[g];
          }
        const auto idx = append_cell(level + 1, verts, index, material, manifold);
        auto &child_level = levels_[level + 1];
        child_level.coarse_cell.push_back(coarse);
        child_level.chart_origin.push_back(origin + half * reference_cell::vertex<dim>(c));
        for (unsigned f = 0; f < faces_per_cell; ++f)
          {
            const auto slot = idx * faces_per_cell + f;
            if (reference_cell::child_on_face<dim>(c, f))
              {
                child_level.face_boundary[slot] = levels_[level].face_boundary[index * faces_per_cell + f];
                child_level.face_manifold[slot] = levels_[level].face_manifold[index * faces_per_cell + f];
              }
            else
              {
                child_level.face_boundary[slot] = types::internal_face;
                child_level.face_manifold[slot] = manifold;
              }
          }
      }
  }

  std::vector<Point<dim>> vertices_;
  std::vector<Level> levels_;
  std::unordered_map<FaceKey, std::vector<CellFace>, FaceKeyHash> faces_;
  std::map<std::array<types::global_index, 2>, types::global_index> edge_midpoints_;
  std::map<FaceKey, types::global_index> face_centers_;
  std::map<types::manifold_id, std::shared_ptr<const Manifold<dim>>> manifolds_;
  std::size_t n_active_ = 0;

public:
  /// Range over either all active cells (level by level, in index order) or
  /// all cells of one level.
  class CellRange
  {
  public:
    static constexpr int all_levels = -1;

    class iterator
    {
    public:
      using iterator_category = std::forward_iterator_tag;
      using value_type        = CellAccessor<dim>;
      using difference_type   = std::ptrdiff_t;
      using pointer           = const CellAccessor<dim> *;
      using reference         = const CellAccessor<dim> &;

      iterator() = default;
      iterator(const Triangulation *tria, const int only_level, const unsigned level, const types::global_index index)
        : tria_(tria), only_level_(only_level), current_(tria, level, index)
      {
        skip();
      }

      reference operator*() const { return current_; }
      pointer operator->() const { return &current_; }
      iterator &operator++()
      {
        current_ = CellAccessor<dim>(tria_, current_.level(), current_.index() + 1);
        skip();
        return *this;
      }
      iterator operator++(int)
      {
        auto tmp = *this;
        ++*this;
        return tmp;
      }
      friend bool operator==(const iterator &a, const iterator &b) { return a.current_ == b.current_; }

    private:
      void skip()
      {
        while (current_.level() < tria_->n_levels())
          {
            const unsigned l = current_.level();
            if (current_.index() >= tria_->n_cells(l))
              {
                if (only_level_ != all_levels)
                  {
                    current_ = CellAccessor<dim>(tria_, tria_->n_levels(), 0);
                    return;
                  }
                current_ = CellAccessor<dim>(tria_, l + 1, 0);
                continue;
              }
            if (only_level_ != all_levels || current_.is_active())
              return;
            current_ = CellAccessor<dim>(tria_, l, current_.index() + 1);
          }
        current_ = CellAccessor<dim>(tria_, tria_->n_levels(), 0);
      }

      const Triangulation *tria_ = nullptr;
      int only_level_            = all_levels;
      CellAccessor<dim> current_;
    };

    CellRange(const Triangulation *tria, const int level) : tria_(tria), level_(level) {}

    iterator begin() const
    {
      if (level_ != all_levels && unsigned(level_) >= tria_->n_levels())
        return end();
      return iterator(tria_, level_, level_ == all_levels ? 0u : unsigned(level_), 0);
    }
    iterator end() const { return iterator(tria_, level_, tria_->n_levels(), 0); }

  private:
    const Triangulation *tria_;
    int level_;
  };
};

// -- accessor implementations ---------------------------------------------------

template <int dim>
bool CellAccessor<dim>::is_active() const
{
  return tria_->levels_[level_].first_child[index_] == types::invalid_index;
}

template <int dim>
CellAccessor<dim> CellAccessor<dim>::child(const unsigned c) const
{
  const auto first = tria_->levels_[level_].first_child[index_];
  if (first == types::invalid_index)
    throw NotActive("cell has no children");
  return CellAccessor(tria_, level_ + 1, first + c);
}

template <int dim>
CellAccessor<dim> CellAccessor<dim>::parent() const
{
  if (level_ == 0)
    throw Error("coarse cells have no parent");
  return CellAccessor(tria_, level_ - 1, tria_->levels_[level_].parent[index_]);
}

template <int dim>
unsigned CellAccessor<dim>::child_index() const
{
  const auto p = parent();
  return index_ - tria_->levels_[p.level()].first_child[p.index()];
}

template <int dim>
types::global_index CellAccessor<dim>::vertex_index(const unsigned v) const
{
  return tria_->cell_vertex(level_, index_, v);
}

template <int dim>
const Point<dim> &CellAccessor<dim>::vertex(const unsigned v) const
{
  return tria_->vertices_[vertex_index(v)];
}

template <int dim>
Point<dim> CellAccessor<dim>::center() const
{
  Point<dim> c;
  for (unsigned v = 0; v < Triangulation<dim>::vertices_per_cell; ++v)
    c += vertex(v);
  c /= double(Triangulation<dim>::vertices_per_cell);
  return c;
}

template <int dim>
NeighborInfo<dim> CellAccessor<dim>::neighbor(const unsigned f) const
{
  return tria_->neighbor(level_, index_, f);
}

template <int dim>
types::material_id CellAccessor<dim>::material_id() const
{
  return tria_->levels_[level_].material[index_];
}

template <int dim>
types::manifold_id CellAccessor<dim>::manifold_id() const
{
  return tria_->levels_[level_].manifold[index_];
}

template <int dim>
bool CellAccessor<dim>::refine_flag_set() const
{
  return tria_->levels_[level_].refine_flag[index_];
}

template <int dim>
types::global_index CellAccessor<dim>::coarse_cell() const
{
  return tria_->levels_[level_].coarse_cell[index_];
}

template <int dim>
const Point<dim> &CellAccessor<dim>::chart_origin() const
{
  return tria_->levels_[level_].chart_origin[index_];
}

template <int dim>
types::global_index FaceAccessor<dim>::vertex_index(const unsigned j) const
{
  return tria_->cell_vertex(level_, cell_, reference_cell::face_vertex_to_cell_vertex<dim>(face_no_, j));
}

template <int dim>
const Point<dim> &FaceAccessor<dim>::vertex(const unsigned j) const
{
  return tria_->vertices_[vertex_index(j)];
}

template <int dim>
bool FaceAccessor<dim>::at_boundary() const
{
  return boundary_id() != types::internal_face;
}

template <int dim>
types::boundary_id FaceAccessor<dim>::boundary_id() const
{
  return tria_->levels_[level_].face_boundary[cell_ * Triangulation<dim>::faces_per_cell + face_no_];
}

template <int dim>
types::manifold_id FaceAccessor<dim>::manifold_id() const
{
  return tria_->levels_[level_].face_manifold[cell_ * Triangulation<dim>::faces_per_cell + face_no_];
}

template <int dim>
Point<dim> FaceAccessor<dim>::center() const
{
  Point<dim> c;
  for (unsigned j = 0; j < Triangulation<dim>::vertices_per_face; ++j)
    c += vertex(j);
  c /= double(Triangulation<dim>::vertices_per_face);
  return c;
}

} // namespace felab
