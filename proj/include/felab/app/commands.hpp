#pragma once

#include <felab/app/run_config.hpp>
#include <felab/dofs/dof_tools.hpp>
#include <felab/grid/generators.hpp>
#include <felab/io/vtk.hpp>
#include <felab/lac/precondition.hpp>
#include <felab/lac/solver_cg.hpp>
#include <felab/matrix_free/laplace_operator.hpp>
#include <felab/multigrid/v_cycle.hpp>
#include <felab/numerics/assembly.hpp>

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>

namespace felab::app
{

/// Shell mesh of the circle demo: four coarse cells between r = 0.5 and
/// r = 1, refined `steps` times towards the inner circle.
inline Triangulation<2> demo_circle_mesh(const unsigned steps)
{
  constexpr double r_inner = 0.5;
  auto tria                = grid::hyper_shell_2d(Point<2>(), r_inner, 1.0, 4);
  for (unsigned s = 0; s < steps; ++s)
    {
      // refine every cell whose center is (up to rounding) the closest to
      // the inner circle
      double closest = std::numeric_limits<double>::max();
      for (const auto &cell : tria.active_cell_iterators())
        closest = std::min(closest, cell.center().norm() - r_inner);
      for (const auto &cell : tria.active_cell_iterators())
        if (cell.center().norm() - r_inner <= closest * (1 + 1e-8))
          tria.set_refine_flag(cell);
      tria.execute_refinement();
    }
  return tria;
}

/// Right-hand side, boundary values and (if known) exact solution.
template <int dim>
struct Problem
{
  ScalarFunction<dim> rhs;
  ScalarFunction<dim> boundary_values;
  std::optional<ScalarFunction<dim>> exact;
};

template <int dim>
Problem<dim> make_problem(const std::string &name)
{
  Problem<dim> p;
  if (name == "sinsin")
    {
      const double pi = std::numbers::pi;
      auto u          = [pi](const Point<dim> &x) {
        double v = 1;
        for (int d = 0; d < dim; ++d)
          v *= std::sin(pi * x[d]);
        return v;
      };
      auto grad_u = [pi](const Point<dim> &x) {
        Tensor1<dim> g;
        for (int d = 0; d < dim; ++d)
          {
            g[d] = pi * std::cos(pi * x[d]);
            for (int e = 0; e < dim; ++e)
              if (e != d)
                g[d] *= std::sin(pi * x[e]);
          }
        return g;
      };
      p.exact = ScalarFunction<dim>(u, grad_u);
      p.rhs   = ScalarFunction<dim>([u, pi](const Point<dim> &x) { return dim * pi * pi * u(x); });
    }
  else
    p.rhs = ScalarFunction<dim>::constant(1);
  p.boundary_values = ScalarFunction<dim>();
  return p;
}

template <int dim>
Triangulation<dim> make_mesh(const RunConfig &config, const unsigned level)
{
  if constexpr (dim == 2)
    if (config.problem == "circle-demo")
      return demo_circle_mesh(level);
  auto tria = grid::hyper_cube<dim>(0, 1, 1);
  tria.refine_global(level);
  return tria;
}

/// One discretization level, set up and solved.
template <int dim>
class LevelRun
{
public:
  LevelRun(const RunConfig &config, const unsigned level)
    : config_(config), level_(level), tria_(make_mesh<dim>(config, level)), fe_(config.degree),
      mapping_(config.mapping_degree), problem_(make_problem<dim>(config.problem))
  {
  }

  void run()
  {
    const auto start   = std::chrono::steady_clock::now();
    const unsigned nt  = matrix_free::threads_from_environment(config_.threads);
    SolverControl control;
    control.rel_tolerance  = config_.tolerance;
    control.max_iterations = config_.max_iterations;

    if (config_.solver == "gmg-cg")
      {
        hierarchy_ = std::make_unique<MGHierarchy<dim>>(tria_, fe_, mapping_);
        for (unsigned l = 0; l < hierarchy_->n_levels(); ++l)
          hierarchy_->level_operator(l).set_threads(nt);
        const unsigned L = hierarchy_->max_level();
        dh_              = &hierarchy_->dof_handler(L);
        constraints_     = hierarchy_->constraints(L);
        assemble_rhs(*dh_, constraints_, mapping_, problem_.rhs, rhs_);
        const VCycle<dim> vcycle(*hierarchy_);
        solution_.assign(dh_->n_dofs(), 0.);
        result_ = solve_cg(hierarchy_->level_operator(L), solution_, rhs_, vcycle, control);
      }
    else
      {
        own_dh_ = std::make_unique<DoFHandler<dim>>(tria_);
        own_dh_->distribute_dofs(fe_);
        dh_ = own_dh_.get();
        dof_tools::make_hanging_node_constraints(*dh_, constraints_);
        for (const auto id : dof_tools::boundary_ids(*dh_))
          dof_tools::interpolate_boundary_values(*dh_, mapping_, id, problem_.boundary_values, constraints_);
        constraints_.close();
        solution_.assign(dh_->n_dofs(), 0.);

        if (config_.solver == "assembled-cg")
          {
            const auto pattern = make_sparsity_pattern(*dh_, constraints_);
            SparseMatrix<double> A(pattern);
            assemble_laplace(*dh_, constraints_, mapping_, problem_.rhs, A, rhs_);
            result_ = solve_cg(A, solution_, rhs_, PreconditionJacobi<double>(A.diagonal()), control);
          }
        else
          {
            LaplaceOperatorMF<dim> A(
              MatrixFreeData<dim>(*dh_, constraints_, mapping_, QGauss<dim>(fe_.degree() + 1)));
            A.set_threads(nt);
            assemble_rhs(*dh_, constraints_, mapping_, problem_.rhs, rhs_);
            A.subtract_inhomogeneous_action(rhs_);
            result_ = solve_cg(A, solution_, rhs_, PreconditionJacobi<double>(A.compute_diagonal()), control);
          }
      }
    constraints_.distribute(solution_);
    seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (problem_.exact)
      errors_ = dof_tools::integrate_difference(*dh_, mapping_, solution_, *problem_.exact);
    else
      errors_ = {std::nan(""), std::nan("")};
  }

  unsigned level() const { return level_; }
  const Triangulation<dim> &triangulation() const { return tria_; }
  const DoFHandler<dim> &dof_handler() const { return *dh_; }
  const MappingQ<dim> &mapping() const { return mapping_; }
  const AffineConstraints<double> &constraints() const { return constraints_; }
  const Vector<double> &solution() const { return solution_; }
  const dof_tools::Errors &errors() const { return errors_; }
  const SolverResult &solver_result() const { return result_; }
  double relative_residual() const
  {
    const double b = vec::norm(rhs_);
    return b > 0 ? result_.final_residual / b : 0.;
  }
  double seconds() const { return seconds_; }

private:
  RunConfig config_;
  unsigned level_;
  Triangulation<dim> tria_;
  FiniteElementQ<dim> fe_;
  MappingQ<dim> mapping_;
  Problem<dim> problem_;
  std::unique_ptr<MGHierarchy<dim>> hierarchy_;
  std::unique_ptr<DoFHandler<dim>> own_dh_;
  const DoFHandler<dim> *dh_ = nullptr;
  AffineConstraints<double> constraints_;
  Vector<double> rhs_, solution_;
  SolverResult result_;
  dof_tools::Errors errors_;
  double seconds_ = 0;
};

struct ConvergenceRow
{
  unsigned level         = 0;
  std::size_t n_cells    = 0;
  std::size_t n_dofs     = 0;
  double l2_error        = 0;
  double l2_rate         = std::nan("");
  double h1_error        = 0;
  double h1_rate         = std::nan("");
  unsigned iterations    = 0;
  double seconds         = 0;
};

inline const char *convergence_header = "level,n_cells,n_dofs,l2_error,l2_rate,h1_error,h1_rate,iterations,seconds";

/// Rates are left empty in the first row.
inline void write_row(std::ostream &out, const ConvergenceRow &r, const bool first)
{
  auto rate = [&](const double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    if (!first)
      s << std::fixed << std::setprecision(3) << v;
    return s.str();
  };
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << r.level << ',' << r.n_cells << ',' << r.n_dofs << ',' << std::scientific << std::setprecision(6) << r.l2_error
    << ',' << rate(r.l2_rate) << ',' << std::scientific << std::setprecision(6) << r.h1_error << ','
    << rate(r.h1_rate) << ',' << r.iterations << ',' << std::fixed << std::setprecision(3) << r.seconds;
  out << s.str() << '\n';
}

template <int dim>
std::vector<ConvergenceRow> run_convergence(const RunConfig &config, std::ostream &out)
{
  std::vector<ConvergenceRow> rows;
  out << convergence_header << '\n';
  for (unsigned level = config.min_level; level <= config.max_level; ++level)
    {
      LevelRun<dim> run(config, level);
      run.run();
      ConvergenceRow row;
      row.level      = level;
      row.n_cells    = run.triangulation().n_active_cells();
      row.n_dofs     = run.dof_handler().n_dofs();
      row.l2_error   = run.errors().l2;
      row.h1_error   = run.errors().h1_seminorm;
      row.iterations = run.solver_result().iterations;
      row.seconds    = run.seconds();
      if (!rows.empty())
        {
          row.l2_rate = std::log2(rows.back().l2_error / row.l2_error);
          row.h1_rate = std::log2(rows.back().h1_error / row.h1_error);
        }
      write_row(out, row, rows.empty());
      out.flush();
      rows.push_back(row);
    }
  return rows;
}

/// The convergence table for config, to config.output or `out`.
inline std::vector<ConvergenceRow> cmd_convergence(const RunConfig &config, std::ostream &out)
{
  validate(config);
  std::ofstream file;
  std::ostream *target = &out;
  if (!config.output.empty())
    {
      file.open(config.output);
      if (!file)
        throw IOError("cannot open '" + config.output + "' for writing");
      target = &file;
    }
  return config.dim == 2 ? run_convergence<2>(config, *target) : run_convergence<3>(config, *target);
}

/// Writes the demo mesh with the refinement level of every cell.
inline Triangulation<2> cmd_demo_circle(const unsigned steps, const std::string &path, std::ostream &log)
{
  auto tria = demo_circle_mesh(steps);
  vtk::Field level{"level", {}};
  for (const auto &cell : tria.active_cell_iterators())
    level.values.push_back(cell.level());
  vtk::write(path, tria, {}, {level});
  log << "steps=" << steps << " n_active_cells=" << tria.n_active_cells() << " file=" << path << '\n';
  return tria;
}

template <int dim>
void run_solve(const RunConfig &config, std::ostream &out)
{
  LevelRun<dim> run(config, config.max_level);
  run.run();
  if (!config.vtk_output.empty())
    {
      vtk::Field u{"solution", vtk::vertex_values(run.dof_handler(), run.solution())};
      vtk::Field level{"level", {}};
      for (const auto &cell : run.triangulation().active_cell_iterators())
        level.values.push_back(cell.level());
      vtk::write(config.vtk_output, run.triangulation(), {u}, {level});
    }
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << "n_dofs=" << run.dof_handler().n_dofs() << " iterations=" << run.solver_result().iterations
    << " residual=" << std::scientific << std::setprecision(3) << run.relative_residual();
  out << s.str() << '\n';
}

/// One solve at config.max_level; prints the summary line.
inline void cmd_solve(const RunConfig &config, std::ostream &out)
{
  validate(config);
  if (config.dim == 2)
    run_solve<2>(config, out);
  else
    run_solve<3>(config, out);
}

/// Process exit codes of the command-line tool.
enum ExitCode : int
{
  exit_success      = 0,
  exit_failure      = 1,
  exit_config_error = 2,
  exit_solver_error = 3,
};

/// Runs f and maps exceptions to exit codes, reporting them on err.
template <typename F>
int guarded(F &&f, std::ostream &err)
{
  try
    {
      f();
      return exit_success;
    }
  catch (const ConfigError &e)
    {
      err << "error: " << e.what() << '\n';
      return exit_config_error;
    }
  catch (const MaxIterations &e)
    {
      err << "solver failed: " << e.what() << '\n';
      return exit_solver_error;
    }
  catch (const BreakdownError &e)
    {
      err << "solver failed: " << e.what() << '\n';
      return exit_solver_error;
    }
  catch (const ZeroDiagonal &e)
    {
      err << "solver failed: " << e.what() << '\n';
      return exit_solver_error;
    }
  catch (const std::exception &e)
    {
      err << "error: " << e.what() << '\n';
      return exit_failure;
    }
}

} // namespace felab::app
