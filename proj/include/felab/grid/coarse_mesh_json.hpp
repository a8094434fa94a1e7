#pragma once

#include <felab/grid/generators.hpp>
#include <felab/grid/triangulation.hpp>

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

namespace felab::grid
{

// Coarse mesh files are JSON objects:
//
//   {
//     "dim": 2,
//     "vertices": [[0,0], [1,0], ...],
//     "cells": [[0,1,2,3], ...],                 // lexicographic vertex order
//     "boundary_ids": {"<cell>:<face>": id, ...},
//     "manifolds": {
//       "<id>": {"type": "polar", "params": {"center": [0,0], "boundary_ids": [0]}},
//       "<id>": {"type": "transfinite", "params": {"cells": [0,1]}},
//       "<id>": {"type": "flat", "params": {}}
//     }
//   }
//
// Boundary faces not listed in "boundary_ids" get id 0. A manifold's
// "boundary_ids" attach it to every boundary face with one of those ids, its
// "cells" to those coarse cells. A transfinite manifold (2d only) also
// claims the straight faces of its cells; without "cells" it covers all.
// Unknown fields are rejected.

namespace internal
{
inline void reject_unknown_keys(const nlohmann::json &obj, std::initializer_list<const char *> allowed,
                                const std::string &where)
{
  if (!obj.is_object())
    throw MeshFormatError(where + " must be an object");
  for (const auto &[key, value] : obj.items())
    {
      bool ok = false;
      for (const char *a : allowed)
        ok = ok || key == a;
      if (!ok)
        throw MeshFormatError("unknown field \"" + key + "\" in " + where);
    }
}

inline const nlohmann::json &require(const nlohmann::json &obj, const char *key, const std::string &where)
{
  if (!obj.contains(key))
    throw MeshFormatError("missing field \"" + std::string(key) + "\" in " + where);
  return obj.at(key);
}
} // namespace internal

inline int coarse_mesh_dimension(const nlohmann::json &doc)
{
  const auto &d = internal::require(doc, "dim", "coarse mesh");
  if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 3)
    throw MeshFormatError("\"dim\" must be 1, 2 or 3");
  return d.get<int>();
}

template <int dim>
Triangulation<dim> read_coarse_mesh(const nlohmann::json &doc)
{
  using internal::require;
  internal::reject_unknown_keys(doc, {"dim", "vertices", "cells", "boundary_ids", "manifolds"}, "coarse mesh");
  if (coarse_mesh_dimension(doc) != dim)
    throw MeshFormatError("mesh has dim " + std::to_string(coarse_mesh_dimension(doc)) + ", expected " +
                          std::to_string(dim));

  try
    {
      std::vector<Point<dim>> vertices;
      for (const auto &v : require(doc, "vertices", "coarse mesh"))
        {
          if (!v.is_array() || v.size() != dim)
            throw MeshFormatError("every vertex needs " + std::to_string(dim) + " coordinates");
          Point<dim> p;
          for (int d = 0; d < dim; ++d)
            p[d] = v[d].get<double>();
          vertices.push_back(p);
        }
      std::vector<CellData<dim>> cells;
      for (const auto &c : require(doc, "cells", "coarse mesh"))
        {
          if (!c.is_array() || c.size() != reference_cell::n_vertices<dim>)
            throw MeshFormatError("every cell needs " + std::to_string(reference_cell::n_vertices<dim>) +
                                  " vertex indices");
          CellData<dim> cd;
          for (unsigned k = 0; k < reference_cell::n_vertices<dim>; ++k)
            cd.vertices[k] = c[k].template get<types::global_index>();
          cells.push_back(cd);
        }

      Triangulation<dim> tria;
      tria.create_triangulation(std::move(vertices), cells);

      if (doc.contains("boundary_ids"))
        for (const auto &[descriptor, id] : doc.at("boundary_ids").items())
          {
            std::istringstream in(descriptor);
            types::global_index c;
            char colon;
            unsigned f;
            if (!(in >> c >> colon >> f) || colon != ':' || !in.eof() || c >= tria.n_cells(0) ||
                f >= reference_cell::n_faces<dim>)
              throw MeshFormatError("bad face descriptor \"" + descriptor + "\", expected \"<cell>:<face>\"");
            const auto cell = tria.cell(0, c);
            if (!cell.at_boundary(f))
              throw MeshFormatError("face " + descriptor + " is not on the boundary");
            tria.set_boundary_id(cell, f, id.template get<types::boundary_id>());
          }

      if (!doc.contains("manifolds"))
        return tria;

      // Curved manifolds first, so transfinite charts see their edge curves.
      std::vector<std::pair<types::manifold_id, nlohmann::json>> transfinite;
      for (const auto &[key, spec] : doc.at("manifolds").items())
        {
          const std::string where = "manifold " + key;
          internal::reject_unknown_keys(spec, {"type", "params"}, where);
          types::manifold_id id;
          try
            {
              std::size_t pos = 0;
              id              = std::stoul(key, &pos);
              if (pos != key.size())
                throw std::invalid_argument(key);
            }
          catch (const std::exception &)
            {
              throw MeshFormatError("manifold id \"" + key + "\" is not a non-negative integer");
            }
          const std::string type     = require(spec, "type", where).template get<std::string>();
          const nlohmann::json params = spec.contains("params") ? spec.at("params") : nlohmann::json::object();

          if (type == "transfinite")
            {
              if constexpr (dim != 2)
                throw MeshFormatError("transfinite manifolds are only available in 2d");
              internal::reject_unknown_keys(params, {"cells"}, where + " params");
              transfinite.emplace_back(id, params);
              continue;
            }

          if (type == "flat")
            {
              internal::reject_unknown_keys(params, {"boundary_ids", "cells"}, where + " params");
              tria.set_manifold(id, std::make_shared<FlatManifold<dim>>());
            }
          else if (type == "polar")
            {
              internal::reject_unknown_keys(params, {"center", "boundary_ids", "cells"}, where + " params");
              const auto &c = require(params, "center", where + " params");
              if (!c.is_array() || c.size() != dim)
                throw MeshFormatError("polar center needs " + std::to_string(dim) + " coordinates");
              Point<dim> center;
              for (int d = 0; d < dim; ++d)
                center[d] = c[d].get<double>();
              tria.set_manifold(id, std::make_shared<PolarManifold<dim>>(center));
            }
          else
            throw MeshFormatError("unknown manifold type \"" + type + "\" in " + where);

          if (params.contains("boundary_ids"))
            {
              std::set<types::boundary_id> ids;
              for (const auto &b : params.at("boundary_ids"))
                ids.insert(b.template get<types::boundary_id>());
              for (const auto &cell : tria.cell_iterators_on_level(0))
                for (unsigned f = 0; f < reference_cell::n_faces<dim>; ++f)
                  if (cell.at_boundary(f) && ids.count(cell.face(f).boundary_id()))
                    tria.set_face_manifold_id(cell, f, id);
            }
          if (params.contains("cells"))
            for (const auto &c : params.at("cells"))
              tria.set_cell_manifold_id(tria.cell(0, c.template get<types::global_index>()), id);
        }

      if constexpr (dim == 2)
        for (const auto &[id, params] : transfinite)
          {
            std::vector<types::global_index> selected;
            if (params.contains("cells"))
              for (const auto &c : params.at("cells"))
                selected.push_back(c.template get<types::global_index>());
            else
              for (types::global_index c = 0; c < tria.n_cells(0); ++c)
                selected.push_back(c);
            for (const auto c : selected)
              {
                if (c >= tria.n_cells(0))
                  throw MeshFormatError("transfinite manifold references missing cell " + std::to_string(c));
                const auto cell = tria.cell(0, c);
                tria.set_cell_manifold_id(cell, id);
                for (unsigned f = 0; f < 4; ++f)
                  if (cell.face(f).manifold_id() == types::flat_manifold)
                    tria.set_face_manifold_id(cell, f, id);
              }
            attach_transfinite_manifold(tria, id);
          }
      return tria;
    }
  catch (const nlohmann::json::exception &e)
    {
      throw MeshFormatError(e.what());
    }
}

template <int dim>
Triangulation<dim> read_coarse_mesh_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open " + path);
  nlohmann::json doc;
  try
    {
      in >> doc;
    }
  catch (const nlohmann::json::exception &e)
    {
      throw MeshFormatError(path + ": " + e.what());
    }
  return read_coarse_mesh<dim>(doc);
}

} // namespace felab::grid
