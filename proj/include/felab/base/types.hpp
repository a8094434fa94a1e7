#pragma once

#include <cstdint>
#include <limits>

namespace felab::types
{

using global_index = std::uint32_t;
using boundary_id  = std::uint32_t;
using manifold_id  = std::uint32_t;
using material_id  = std::uint32_t;

inline constexpr global_index invalid_index = std::numeric_limits<global_index>::max();

/// Boundary id carried by faces in the interior of the domain.
inline constexpr boundary_id internal_face = std::numeric_limits<boundary_id>::max();

/// The default geometry: straight edges, planar faces.
inline constexpr manifold_id flat_manifold = std::numeric_limits<manifold_id>::max();

} // namespace felab::types
