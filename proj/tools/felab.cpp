#include <felab/app/commands.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <regex>

namespace
{

felab::app::RunConfig parse_levels(felab::app::RunConfig c, const std::string &levels)
{
  static const std::regex range(R"((\d+)(?:\.\.(\d+))?)");
  std::smatch m;
  if (!std::regex_match(levels, m, range))
    throw felab::ConfigError("--levels: expected A..B, got '" + levels + "'");
  c.min_level = std::stoul(m[1]);
  c.max_level = m[2].matched ? std::stoul(m[2]) : c.min_level;
  return c;
}

} // namespace

int main(int argc, char **argv)
{
  using namespace felab::app;
  CLI::App app{"felab: adaptive finite elements on quadrilaterals and hexahedra"};
  app.require_subcommand(1);

  RunConfig conv;
  std::string levels = "3..6";
  auto *convergence  = app.add_subcommand("convergence", "convergence table of a manufactured problem as CSV");
  convergence->add_option("--dim", conv.dim, "space dimension (2 or 3)");
  convergence->add_option("--degree", conv.degree, "polynomial degree of the element");
  convergence->add_option("--mapping-degree", conv.mapping_degree, "polynomial degree of the mapping");
  convergence->add_option("--levels", levels, "refinement levels A..B");
  convergence->add_option("--problem", conv.problem, "sinsin, constant-rhs or circle-demo");
  convergence->add_option("--solver", conv.solver, "assembled-cg, mf-cg or gmg-cg");
  convergence->add_option("--tol", conv.tolerance, "relative residual tolerance");
  convergence->add_option("--max-iterations", conv.max_iterations, "iteration limit of the solver");
  convergence->add_option("--out", conv.output, "CSV file (default stdout)");
  convergence->add_option("--threads", conv.threads, "worker threads of the matrix-free operators");

  auto *demo   = app.add_subcommand("demo", "demonstration meshes");
  demo->require_subcommand(1);
  unsigned steps = 3;
  std::string demo_out = "circle.vtk";
  auto *circle = demo->add_subcommand("circle", "adaptively refined shell written as VTK");
  circle->add_option("--steps", steps, "refinement steps towards the inner circle");
  circle->add_option("--out", demo_out, "VTK file");

  std::string config_path;
  auto *solve = app.add_subcommand("solve", "one solve described by a JSON file");
  solve->add_option("--config", config_path, "JSON configuration")->required();

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::CallForHelp &e)
    {
      return app.exit(e);
    }
  catch (const CLI::ParseError &e)
    {
      app.exit(e);
      return exit_config_error;
    }

  if (convergence->parsed())
    return guarded(
      [&] {
        auto c    = parse_levels(conv, levels);
        c.threads = felab::matrix_free::threads_from_environment(c.threads);
        cmd_convergence(c, std::cout);
      },
      std::cerr);
  if (circle->parsed())
    return guarded([&] { cmd_demo_circle(steps, demo_out, std::cout); }, std::cerr);
  return guarded([&] { cmd_solve(read_run_config(config_path), std::cout); }, std::cerr);
}
