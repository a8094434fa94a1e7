// -Laplace u = 1 on the demo shell with a few local refinements towards the
// inner circle, solved with Jacobi-CG on the assembled matrix.

#include <felab/app/commands.hpp>

#include <cstdio>

using namespace felab;

int main(int argc, char **argv)
{
  const unsigned steps = argc > 1 ? std::atoi(argv[1]) : 4;
  const auto tria      = app::demo_circle_mesh(steps);
  const FiniteElementQ<2> fe(2);
  const MappingQ<2> mapping(2);

  DoFHandler<2> dh(tria);
  dh.distribute_dofs(fe);
  AffineConstraints<double> constraints;
  dof_tools::make_hanging_node_constraints(dh, constraints);
  const auto n_hanging = constraints.n_constraints();
  for (const auto id : dof_tools::boundary_ids(dh))
    dof_tools::interpolate_boundary_values(dh, mapping, id, ScalarFunction<2>(), constraints);
  constraints.close();

  SparseMatrix<double> A(make_sparsity_pattern(dh, constraints));
  Vector<double> b, x(dh.n_dofs(), 0.);
  assemble_laplace(dh, constraints, mapping, ScalarFunction<2>::constant(1), A, b);
  const auto res = solve_cg(A, x, b, PreconditionJacobi<double>(A.diagonal()), SolverControl{10000, 1e-10});
  constraints.distribute(x);

  std::printf("cells %zu, unknowns %zu, hanging constraints %zu, CG iterations %u\n", tria.n_active_cells(),
              std::size_t(dh.n_dofs()), std::size_t(n_hanging), res.iterations);

  vtk::Field level{"level", {}};
  for (const auto &cell : tria.active_cell_iterators())
    level.values.push_back(cell.level());
  vtk::write("poisson_adaptive.vtk", tria, {{"u", vtk::vertex_values(dh, x)}}, {level});
}
