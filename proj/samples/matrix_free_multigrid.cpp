// Geometric multigrid with matrix-free level operators and Chebyshev
// smoothing as preconditioner for CG, on the unit square or cube.

#include <felab/grid/generators.hpp>
#include <felab/multigrid/v_cycle.hpp>
#include <felab/numerics/assembly.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace felab;

template <int dim>
void run(const unsigned degree, const unsigned max_level)
{
  const MappingQ<dim> mapping(1);
  const FiniteElementQ<dim> fe(degree);
  std::printf("dim %d, degree %u\n%6s %10s %6s %10s\n", dim, degree, "level", "unknowns", "its", "seconds");
  for (unsigned level = 2; level <= max_level; ++level)
    {
      auto tria = grid::hyper_cube<dim>(0, 1, 1);
      tria.refine_global(level);
      const auto start = std::chrono::steady_clock::now();
      const MGHierarchy<dim> h(tria, fe, mapping);
      const VCycle<dim> vcycle(h);
      const auto &A = h.level_operator(level);
      Vector<double> b, x(A.n_dofs(), 0.);
      assemble_rhs(h.dof_handler(level), h.constraints(level), mapping, ScalarFunction<dim>::constant(1), b);
      const auto res = mg_preconditioned_cg(vcycle, A, x, b, 1e-10);
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("%6u %10zu %6u %10.3f\n", level, std::size_t(A.n_dofs()), res.iterations, t);
    }
}

int main(int argc, char **argv)
{
  const unsigned degree = argc > 1 ? std::atoi(argv[1]) : 2;
  run<2>(degree, 7);
  run<3>(degree, 4);
}
