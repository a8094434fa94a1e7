#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/dofs/dof_handler.hpp>
#include <felab/grid/triangulation.hpp>

#include <array>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace felab::vtk
{

struct Field
{
  std::string name;
  std::vector<double> values;
};

/// VTK corner order of the lexicographic vertex v.
template <int dim>
constexpr unsigned vtk_vertex(const unsigned v)
{
  constexpr unsigned map2[4] = {0, 1, 3, 2};
  constexpr unsigned map3[8] = {0, 1, 3, 2, 4, 5, 7, 6};
  return dim == 2 ? map2[v] : map3[v];
}

template <int dim>
constexpr int cell_type = dim == 2 ? 9 : 12;

/// Legacy ASCII unstructured grid of the active cells. Point fields are
/// indexed like Triangulation::get_vertices(), cell fields follow the
/// active cell order.
template <int dim>
void write(std::ostream &out, const Triangulation<dim> &tria, const std::vector<Field> &point_data = {},
           const std::vector<Field> &cell_data = {}, const std::string &title = "felab output")
{
  static_assert(dim == 2 || dim == 3);
  constexpr unsigned nv = reference_cell::n_vertices<dim>;
  const auto &vertices  = tria.get_vertices();
  const std::size_t n_cells = tria.n_active_cells();
  for (const auto &f : point_data)
    if (f.values.size() != vertices.size())
      throw LengthMismatch("point field '" + f.name + "' has " + std::to_string(f.values.size()) + " values for " +
                           std::to_string(vertices.size()) + " points");
  for (const auto &f : cell_data)
    if (f.values.size() != n_cells)
      throw LengthMismatch("cell field '" + f.name + "' has " + std::to_string(f.values.size()) + " values for " +
                           std::to_string(n_cells) + " cells");

  out.imbue(std::locale::classic());
  out << std::setprecision(17);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << vertices.size() << " double\n";
  for (const auto &p : vertices)
    {
      for (int d = 0; d < 3; ++d)
        out << (d ? " " : "") << (d < dim ? p[d] : 0.);
      out << '\n';
    }

  out << "CELLS " << n_cells << ' ' << n_cells * (nv + 1) << '\n';
  for (const auto &cell : tria.active_cell_iterators())
    {
      std::array<types::global_index, nv> corners;
      for (unsigned v = 0; v < nv; ++v)
        corners[vtk_vertex<dim>(v)] = cell.vertex_index(v);
      out << nv;
      for (const auto c : corners)
        out << ' ' << c;
      out << '\n';
    }
  out << "CELL_TYPES " << n_cells << '\n';
  for (std::size_t c = 0; c < n_cells; ++c)
    out << cell_type<dim> << '\n';

  auto write_fields = [&](const char *section, const std::size_t n, const std::vector<Field> &fields) {
    if (fields.empty())
      return;
    out << section << ' ' << n << '\n';
    for (const auto &f : fields)
      {
        out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
        for (const double v : f.values)
          out << v << '\n';
      }
  };
  write_fields("POINT_DATA", vertices.size(), point_data);
  write_fields("CELL_DATA", n_cells, cell_data);
  if (!out)
    throw IOError("writing VTK data failed");
}

template <int dim>
void write(const std::string &path, const Triangulation<dim> &tria, const std::vector<Field> &point_data = {},
           const std::vector<Field> &cell_data = {})
{
  std::ofstream out(path);
  if (!out)
    throw IOError("cannot open '" + path + "' for writing");
  write(out, tria, point_data, cell_data);
  out.close();
  if (!out)
    throw IOError("writing '" + path + "' failed");
}

/// Values of a finite element field at the mesh vertices, in the numbering
/// of Triangulation::get_vertices(). The vector should satisfy the
/// constraints (distribute first).
template <int dim, typename VectorType>
std::vector<double> vertex_values(const DoFHandler<dim> &dh, const VectorType &x)
{
  const auto &fe = dh.get_fe();
  const unsigned p = fe.degree();
  std::vector<double> values(dh.get_triangulation().n_vertices(), 0.);
  for (std::size_t pos = 0; pos < dh.n_cells(); ++pos)
    {
      const auto &cell = dh.cells()[pos];
      const auto dofs  = dh.cell_dof_indices(pos);
      for (unsigned v = 0; v < reference_cell::n_vertices<dim>; ++v)
        {
          std::array<unsigned, dim> t;
          for (int d = 0; d < dim; ++d)
            t[d] = ((v >> d) & 1u) * p;
          values[cell.vertex_index(v)] = double(x[dofs[fe.lexicographic_index(t)]]);
        }
    }
  return values;
}

/// Contents of a legacy file restricted to what write() produces.
struct Data
{
  std::string title;
  std::vector<std::array<double, 3>> points;
  std::vector<std::vector<types::global_index>> cells;
  std::vector<int> cell_types;
  std::map<std::string, std::vector<double>> point_data, cell_data;
};

/// Parses and checks the subset written above: header, ASCII, unstructured
/// grid, point coordinates, quad/hex connectivity, scalar fields.
inline Data read(std::istream &in)
{
  in.imbue(std::locale::classic());
  Data data;
  std::string line;
  auto fail = [](const std::string &what) { throw MeshFormatError("VTK: " + what); };

  if (!std::getline(in, line) || line.rfind("# vtk DataFile Version", 0) != 0)
    fail("missing version header");
  if (!std::getline(in, data.title))
    fail("missing title line");
  if (!std::getline(in, line) || line != "ASCII")
    fail("only ASCII files are supported");

  std::string word;
  auto expect = [&](const std::string &w) {
    if (!(in >> word) || word != w)
      fail("expected '" + w + "', found '" + word + "'");
  };
  auto read_count = [&](const char *what) {
    long long n = -1;
    if (!(in >> n) || n < 0)
      fail(std::string("bad ") + what + " count");
    return std::size_t(n);
  };
  auto read_double = [&]() {
    // streams print NaN as "nan" but do not parse it back
    if (!(in >> word))
      fail("unexpected end of data");
    std::istringstream s(word);
    s.imbue(std::locale::classic());
    double v;
    if (word == "nan" || word == "-nan")
      return std::numeric_limits<double>::quiet_NaN();
    if (!(s >> v) || !s.eof())
      fail("bad number '" + word + "'");
    return v;
  };

  expect("DATASET");
  expect("UNSTRUCTURED_GRID");
  expect("POINTS");
  const auto n_points = read_count("point");
  expect("double");
  data.points.resize(n_points);
  for (auto &p : data.points)
    for (auto &c : p)
      c = read_double();

  expect("CELLS");
  const auto n_cells = read_count("cell");
  const auto n_ints  = read_count("connectivity");
  std::size_t seen   = 0;
  data.cells.resize(n_cells);
  for (auto &c : data.cells)
    {
      const auto k = read_count("corner");
      c.resize(k);
      for (auto &v : c)
        {
          long long idx = -1;
          if (!(in >> idx) || idx < 0 || std::size_t(idx) >= n_points)
            fail("corner index out of range");
          v = idx;
        }
      seen += k + 1;
    }
  if (seen != n_ints)
    fail("CELLS size " + std::to_string(n_ints) + " does not match the connectivity (" + std::to_string(seen) + ")");

  expect("CELL_TYPES");
  if (read_count("cell type") != n_cells)
    fail("CELL_TYPES count differs from CELLS count");
  data.cell_types.resize(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c)
    {
      if (!(in >> data.cell_types[c]))
        fail("missing cell type");
      const int t = data.cell_types[c];
      if (!((t == 9 && data.cells[c].size() == 4) || (t == 12 && data.cells[c].size() == 8)))
        fail("cell " + std::to_string(c) + " has type " + std::to_string(t) + " with " +
             std::to_string(data.cells[c].size()) + " corners");
    }

  while (in >> word)
    {
      std::map<std::string, std::vector<double>> *target = nullptr;
      std::size_t n                                        = 0;
      if (word == "POINT_DATA")
        target = &data.point_data, n = n_points;
      else if (word == "CELL_DATA")
        target = &data.cell_data, n = n_cells;
      else
        fail("unexpected section '" + word + "'");
      if (read_count("data") != n)
        fail(word + " count does not match");
      while (in >> std::ws && in.peek() == 'S')
        {
          expect("SCALARS");
          std::string name, type;
          int components = 1;
          in >> name >> type;
          if (type != "double" && type != "float")
            fail("unsupported scalar type '" + type + "'");
          // optional component count
          in >> std::ws;
          if (std::isdigit(in.peek()))
            in >> components;
          if (components != 1)
            fail("only single-component scalars are supported");
          expect("LOOKUP_TABLE");
          in >> word;
          auto &values = (*target)[name];
          values.resize(n);
          for (auto &v : values)
            v = read_double();
        }
    }
  return data;
}

inline Data read(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw IOError("cannot open '" + path + "'");
  return read(in);
}

} // namespace felab::vtk
