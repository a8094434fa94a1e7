#include <felab/app/commands.hpp>

#include "face_jumps.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace felab;
using namespace felab::app;

namespace
{

std::vector<std::string> split(const std::string &line, const char sep)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, sep))
    out.push_back(field);
  if (!line.empty() && line.back() == sep)
    out.push_back("");
  return out;
}

std::vector<ConvergenceRow> convergence(RunConfig c, std::string *csv = nullptr)
{
  std::ostringstream out;
  auto rows = cmd_convergence(c, out);
  if (csv)
    *csv = out.str();
  return rows;
}

std::filesystem::path scratch_dir()
{
  auto dir = std::filesystem::temp_directory_path() / "felab_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string &args)
{
  const std::string command = std::string(FELAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status          = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream(path) << text;
}

} // namespace

TEST(RunConfig, Defaults)
{
  const auto c = parse_run_config("{}");
  EXPECT_EQ(c.dim, 2);
  EXPECT_EQ(c.degree, 1u);
  EXPECT_EQ(c.problem, "sinsin");
  EXPECT_EQ(c.solver, "assembled-cg");
}

TEST(RunConfig, AllKeys)
{
  const auto c = parse_run_config(R"({"dim": 3, "degree": 2, "mapping_degree": 2, "min_level": 1, "max_level": 2,
    "problem": "constant-rhs", "solver": "mf-cg", "tolerance": 1e-8, "max_iterations": 50, "threads": 2,
    "output": "a.csv", "vtk_output": "b.vtk"})");
  EXPECT_EQ(c.dim, 3);
  EXPECT_EQ(c.degree, 2u);
  EXPECT_EQ(c.mapping_degree, 2u);
  EXPECT_EQ(c.min_level, 1u);
  EXPECT_EQ(c.max_level, 2u);
  EXPECT_EQ(c.problem, "constant-rhs");
  EXPECT_EQ(c.solver, "mf-cg");
  EXPECT_EQ(c.tolerance, 1e-8);
  EXPECT_EQ(c.max_iterations, 50u);
  EXPECT_EQ(c.threads, 2u);
  EXPECT_EQ(c.output, "a.csv");
  EXPECT_EQ(c.vtk_output, "b.vtk");

  const auto l = parse_run_config(R"({"level": 4})");
  EXPECT_EQ(l.min_level, 4u);
  EXPECT_EQ(l.max_level, 4u);
}

TEST(RunConfig, Rejections)
{
  auto message = [](const std::string &text) {
    try
      {
        parse_run_config(text);
      }
    catch (const ConfigError &e)
      {
        return std::string(e.what());
      }
    return std::string("accepted");
  };
  EXPECT_NE(message(R"({"degre": 2})").find("'degre'"), std::string::npos);
  EXPECT_NE(message(R"({"degree": "two"})").find("'degree'"), std::string::npos);
  EXPECT_NE(message(R"({"degree": -1})").find("'degree'"), std::string::npos);
  EXPECT_NE(message(R"({"degree": 7})").find("'degree'"), std::string::npos);
  EXPECT_NE(message(R"({"dim": 1})").find("'dim'"), std::string::npos);
  EXPECT_NE(message(R"({"solver": "lu"})").find("'solver'"), std::string::npos);
  EXPECT_NE(message(R"({"problem": "x"})").find("'problem'"), std::string::npos);
  EXPECT_NE(message(R"({"tolerance": 0})").find("'tolerance'"), std::string::npos);
  EXPECT_NE(message(R"({"min_level": 5, "max_level": 3})").find("'min_level'"), std::string::npos);
  EXPECT_NE(message(R"({"problem": "circle-demo", "solver": "gmg-cg"})").find("'solver'"), std::string::npos);
  EXPECT_NE(message(R"({"problem": "circle-demo", "dim": 3})").find("'dim'"), std::string::npos);
  EXPECT_NE(message("[1, 2]").find("object"), std::string::npos);
}

TEST(RunConfig, MalformedJsonNamesTheKey)
{
  auto message = [](const std::string &text) {
    try
      {
        parse_run_config(text);
      }
    catch (const ConfigError &e)
      {
        return std::string(e.what());
      }
    return std::string("accepted");
  };
  EXPECT_NE(message(R"({"degree": 2, "solver": mf-cg})").find("'solver'"), std::string::npos);
  EXPECT_NE(message(R"({"dim": 2, "tolerance": 1e-})").find("'tolerance'"), std::string::npos);
  EXPECT_NE(message(R"({"dim": 2,)").find("malformed JSON"), std::string::npos);
  EXPECT_THROW(read_run_config("/nonexistent/config.json"), ConfigError);
}

TEST(ExitCodes, Guarded)
{
  std::ostringstream err;
  EXPECT_EQ(guarded([] {}, err), exit_success);
  EXPECT_EQ(guarded([] { throw ConfigError("x"); }, err), exit_config_error);
  EXPECT_EQ(guarded([] { throw MaxIterations("x"); }, err), exit_solver_error);
  EXPECT_EQ(guarded([] { throw BreakdownError("x"); }, err), exit_solver_error);
  EXPECT_EQ(guarded([] { throw IOError("x"); }, err), exit_failure);
}

TEST(ExitCodes, Binary)
{
  const auto dir = scratch_dir();
  EXPECT_EQ(run_cli("convergence --levels 2..3"), 0);
  EXPECT_EQ(run_cli("convergence --dim 4"), 2);
  EXPECT_EQ(run_cli("convergence --levels 3-4"), 2);
  EXPECT_EQ(run_cli("convergence --solver nope"), 2);
  EXPECT_EQ(run_cli("convergence --no-such-flag"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("convergence --degree 2 --levels 3..3 --max-iterations 1"), 3);

  write_file(dir / "good.json", R"({"degree": 1, "level": 3, "solver": "mf-cg"})");
  write_file(dir / "bad.json", R"({"degree": 1, "solver": mf-cg})");
  write_file(dir / "unknown.json", R"({"degre": 1})");
  write_file(dir / "stuck.json", R"({"degree": 2, "level": 3, "max_iterations": 1})");
  EXPECT_EQ(run_cli("solve --config " + (dir / "good.json").string()), 0);
  EXPECT_EQ(run_cli("solve --config " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(run_cli("solve --config " + (dir / "unknown.json").string()), 2);
  EXPECT_EQ(run_cli("solve --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("solve --config " + (dir / "stuck.json").string()), 3);
  EXPECT_EQ(run_cli("solve"), 2);

  EXPECT_EQ(run_cli("demo circle --steps 1 --out " + (dir / "c.vtk").string()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "c.vtk"));
}

TEST(Convergence, CsvFormat)
{
  RunConfig c;
  c.min_level = 2;
  c.max_level = 4;
  std::string csv;
  const auto rows = convergence(c, &csv);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "level,n_cells,n_dofs,l2_error,l2_rate,h1_error,h1_rate,iterations,seconds");
  for (unsigned l = 2; l <= 4; ++l)
    {
      ASSERT_TRUE(std::getline(in, line));
      const auto fields = split(line, ',');
      ASSERT_EQ(fields.size(), 9u) << line;
      EXPECT_EQ(fields[0], std::to_string(l));
      EXPECT_EQ(fields[1], std::to_string(1u << (2 * l)));
      EXPECT_EQ(fields[2], std::to_string(((1u << l) + 1) * ((1u << l) + 1)));
      EXPECT_EQ(fields[4].empty(), l == 2);
      EXPECT_EQ(fields[6].empty(), l == 2);
      EXPECT_EQ(fields[8].find(','), std::string::npos);
      EXPECT_EQ(fields[8].size() - fields[8].find('.'), 4u) << "three decimals: " << fields[8];
      EXPECT_NEAR(std::stod(fields[3]), rows[l - 2].l2_error, 1e-6 * rows[l - 2].l2_error);
    }
  EXPECT_FALSE(std::getline(in, line));
}

namespace
{
struct DecimalComma : std::numpunct<char>
{
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};
} // namespace

TEST(Convergence, CsvIgnoresGlobalLocale)
{
  const std::locale comma(std::locale::classic(), new DecimalComma);
  const auto previous = std::locale::global(comma);
  RunConfig c;
  c.min_level = 2;
  c.max_level = 3;
  std::string csv;
  convergence(c, &csv);
  std::locale::global(previous);
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    EXPECT_EQ(split(line, ',').size(), 9u) << line;
}

TEST(Convergence, RatesOfLinearAndQuadraticElements)
{
  for (unsigned p : {1u, 2u})
    {
      RunConfig c;
      c.degree    = p;
      c.min_level = 3;
      c.max_level = 6;
      const auto rows = convergence(c);
      ASSERT_EQ(rows.size(), 4u);
      EXPECT_GE(rows.back().l2_rate, p + 0.9) << "p=" << p;
      EXPECT_LE(rows.back().l2_rate, p + 1.1) << "p=" << p;
      EXPECT_NEAR(rows.back().h1_rate, double(p), 0.1) << "p=" << p;
    }
}

TEST(Convergence, MatrixFreeMatchesAssembled)
{
  for (unsigned p : {1u, 2u})
    {
      RunConfig c;
      c.degree     = p;
      c.min_level  = 3;
      c.max_level  = 5;
      c.tolerance  = 1e-12;
      const auto a = convergence(c);
      c.solver     = "mf-cg";
      const auto m = convergence(c);
      ASSERT_EQ(a.size(), m.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        {
          EXPECT_EQ(a[i].n_dofs, m[i].n_dofs);
          EXPECT_NEAR(a[i].l2_error, m[i].l2_error, 1e-10) << "p=" << p;
          EXPECT_NEAR(a[i].h1_error, m[i].h1_error, 1e-10) << "p=" << p;
        }
    }
}

TEST(Convergence, MultigridMatchesAssembledAndThreeDimensions)
{
  RunConfig c;
  c.degree    = 2;
  c.min_level = 2;
  c.max_level = 4;
  c.tolerance = 1e-12;
  const auto a = convergence(c);
  c.solver     = "gmg-cg";
  const auto g = convergence(c);
  for (std::size_t i = 0; i < a.size(); ++i)
    {
      EXPECT_NEAR(a[i].l2_error, g[i].l2_error, 1e-10);
      EXPECT_LE(g[i].iterations, 12u);
    }

  RunConfig c3;
  c3.dim       = 3;
  c3.degree    = 2;
  c3.min_level = 1;
  c3.max_level = 3;
  c3.solver    = "mf-cg";
  const auto r = convergence(c3);
  EXPECT_NEAR(r.back().l2_rate, 3., 0.3);
  EXPECT_NEAR(r.back().h1_rate, 2., 0.2);
}

TEST(Solve, MultigridSummaryLine)
{
  RunConfig c;
  c.degree    = 1;
  c.min_level = c.max_level = 4;
  c.solver    = "gmg-cg";
  std::ostringstream out;
  cmd_solve(c, out);
  const auto line = out.str();
  std::size_t n_dofs = 0;
  unsigned iterations = 0;
  double residual     = -1;
  ASSERT_EQ(std::sscanf(line.c_str(), "n_dofs=%zu iterations=%u residual=%lf", &n_dofs, &iterations, &residual), 3)
    << line;
  EXPECT_EQ(n_dofs, 289u);
  EXPECT_LE(iterations, 12u);
  EXPECT_LE(residual, 1e-10);
}

TEST(Solve, WritesSolutionFile)
{
  const auto path = scratch_dir() / "solution.vtk";
  std::filesystem::remove(path);
  RunConfig c;
  c.degree     = 2;
  c.min_level  = c.max_level = 3;
  c.solver     = "mf-cg";
  c.vtk_output = path.string();
  std::ostringstream out;
  cmd_solve(c, out);
  const auto data = vtk::read(path.string());
  EXPECT_EQ(data.points.size(), 81u);
  EXPECT_EQ(data.cells.size(), 64u);
  ASSERT_EQ(data.point_data.count("solution"), 1u);
  // nodal values of the sine solution, up to the discretization error
  const auto &u = data.point_data.at("solution");
  for (std::size_t i = 0; i < u.size(); ++i)
    EXPECT_NEAR(u[i], std::sin(M_PI * data.points[i][0]) * std::sin(M_PI * data.points[i][1]), 1e-3);
}

TEST(DemoCircle, ZeroStepsGivesTheCoarseShell)
{
  const auto path = scratch_dir() / "circle0.vtk";
  std::ostringstream log;
  cmd_demo_circle(0, path.string(), log);
  const auto data = vtk::read(path.string());
  EXPECT_EQ(data.cells.size(), 4u);
  EXPECT_EQ(data.points.size(), 8u);
  for (const int t : data.cell_types)
    EXPECT_EQ(t, 9);
  ASSERT_EQ(data.cell_data.count("level"), 1u);
  for (const double l : data.cell_data.at("level"))
    EXPECT_EQ(l, 0.);
}

TEST(DemoCircle, BoundaryVerticesOnExactCirclesAndMonotoneGrowth)
{
  std::size_t previous = 0;
  for (unsigned steps = 0; steps <= 5; ++steps)
    {
      const auto path = scratch_dir() / ("circle" + std::to_string(steps) + ".vtk");
      std::ostringstream log;
      const auto tria = cmd_demo_circle(steps, path.string(), log);
      const auto data = vtk::read(path.string());
      EXPECT_EQ(data.cells.size(), tria.n_active_cells());
      EXPECT_GT(data.cells.size(), previous);
      if (steps > 0)
        {
          EXPECT_EQ((data.cells.size() - previous) % 3, 0u) << "each refined cell adds three";
        }
      previous = data.cells.size();

      std::set<types::global_index> boundary;
      for (const auto &cell : tria.active_cell_iterators())
        for (unsigned f = 0; f < 4; ++f)
          if (cell.at_boundary(f))
            for (unsigned j = 0; j < 2; ++j)
              boundary.insert(cell.face(f).vertex_index(j));
      for (const auto v : boundary)
        {
          const auto &p  = data.points[v];
          const double r = std::hypot(p[0], p[1]);
          EXPECT_NEAR(r, r < 0.75 ? 0.5 : 1.0, 1e-12) << "vertex " << v;
          EXPECT_EQ(p[2], 0.);
        }
      const auto &levels = data.cell_data.at("level");
      EXPECT_EQ(*std::max_element(levels.begin(), levels.end()), double(steps));
    }
}

TEST(DemoCircle, ConstantRhsIsContinuousAcrossHangingFaces)
{
  for (unsigned p = 1; p <= 3; ++p)
    for (const auto *solver : {"assembled-cg", "mf-cg"})
      {
        RunConfig c;
        c.degree         = p;
        c.mapping_degree = 2;
        c.solver         = solver;
        c.tolerance      = 1e-12;
        c.problem        = "circle-demo";
        c.min_level = c.max_level = 3;
        LevelRun<2> run(c, 3);
        run.run();
        const auto jumps = test::hanging_face_jumps(run.dof_handler(), run.mapping(), run.solution());
        EXPECT_GT(jumps.samples, 0u);
        EXPECT_LE(jumps.max_jump, 1e-10) << "p=" << p << " " << solver;
        double max_u = 0;
        for (const double v : run.solution())
          max_u = std::max(max_u, v);
        EXPECT_GT(max_u, 0.) << "the load is positive";
      }
}
