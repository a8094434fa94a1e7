#pragma once

#include <felab/base/tensor.hpp>

#include <array>

namespace felab::reference_cell
{

// Vertices of [0,1]^dim are numbered lexicographically, x fastest. Faces are
// numbered x-, x+, y-, y+, z-, z+. Vertex j of face f keeps the bits of the
// tangential directions in increasing order.

template <int dim>
inline constexpr unsigned n_vertices = 1u << dim;

template <int dim>
inline constexpr unsigned n_faces = 2 * dim;

template <int dim>
inline constexpr unsigned n_children = 1u << dim;

template <int dim>
inline constexpr unsigned n_face_vertices = 1u << (dim - 1);

template <int dim>
constexpr Point<dim> vertex(const unsigned v)
{
  Point<dim> p;
  for (int d = 0; d < dim; ++d)
    p[d] = (v >> d) & 1u;
  return p;
}

/// Tangential directions of face f, in increasing order.
template <int dim>
constexpr std::array<int, dim - 1> face_tangents(const unsigned f)
{
  std::array<int, dim - 1> t{};
  int k = 0;
  for (int d = 0; d < dim; ++d)
    if (d != int(f / 2))
      t[k++] = d;
  return t;
}

template <int dim>
constexpr unsigned face_vertex_to_cell_vertex(const unsigned f, const unsigned j)
{
  const int normal = f / 2;
  unsigned v       = (f % 2) << normal;
  const auto tang  = face_tangents<dim>(f);
  for (int k = 0; k < dim - 1; ++k)
    v |= ((j >> k) & 1u) << tang[k];
  return v;
}

/// Whether child c of a cell touches face f of its parent.
template <int dim>
constexpr bool child_on_face(const unsigned c, const unsigned f)
{
  return ((c >> (f / 2)) & 1u) == (f % 2);
}

} // namespace felab::reference_cell
