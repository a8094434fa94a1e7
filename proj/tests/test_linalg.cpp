#include <felab/dofs/dof_tools.hpp>
#include <felab/grid/generators.hpp>
#include <felab/lac/dense.hpp>
#include <felab/lac/precondition.hpp>
#include <felab/lac/solver_cg.hpp>
#include <felab/lac/sparse_matrix.hpp>
#include <felab/numerics/assembly.hpp>

#include "test_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace felab;

namespace
{
struct DiagonalOperator
{
  std::vector<double> d;
  void vmult(Vector<double> &dst, const Vector<double> &src) const
  {
    dst.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] = d[i] * src[i];
  }
};

test::Dense to_dense(const SparseMatrix<double> &A)
{
  test::Dense D(A.m());
  const auto &sp = A.get_sparsity_pattern();
  for (types::global_index i = 0; i < A.m(); ++i)
    for (const auto j : sp.row(i))
      D(i, j) = A.el(i, j);
  return D;
}

template <int dim>
struct System
{
  std::shared_ptr<SparsityPattern> pattern;
  SparseMatrix<double> A;
  Vector<double> b;
};

template <int dim>
System<dim> assemble(const DoFHandler<dim> &dh, const AffineConstraints<double> &c, const MappingQ<dim> &mapping,
                     const ScalarFunction<dim> &f)
{
  System<dim> s;
  s.pattern = make_sparsity_pattern(dh, c);
  s.A       = SparseMatrix<double>(s.pattern);
  assemble_laplace(dh, c, mapping, f, s.A, s.b);
  return s;
}

Triangulation<2> seven_cells()
{
  auto tria = grid::hyper_cube<2>(0, 1, 2);
  tria.set_refine_flag(tria.cell(0, 0));
  tria.execute_refinement();
  return tria;
}

template <int dim>
AffineConstraints<double> hanging_and_zero_dirichlet(const DoFHandler<dim> &dh, const MappingQ<dim> &mapping,
                                                     const ScalarFunction<dim> &g = ScalarFunction<dim>())
{
  AffineConstraints<double> c;
  dof_tools::make_hanging_node_constraints(dh, c);
  for (const auto id : dof_tools::boundary_ids(dh))
    dof_tools::interpolate_boundary_values(dh, mapping, id, g, c);
  c.close();
  return c;
}

const ScalarFunction<2> sine_solution(
  [](const Point<2> &x) { return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]); },
  [](const Point<2> &x) {
    const double pi = std::numbers::pi;
    return Tensor1<2>({pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), pi * std::sin(pi * x[0]) * std::cos(pi * x[1])});
  });
const ScalarFunction<2> sine_rhs([](const Point<2> &x) {
  return 2 * std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
});
} // namespace

TEST(Sparsity, Examples)
{
  const auto single = grid::hyper_cube<2>(0, 1, 1);
  DoFHandler<2> dh(single);
  const FiniteElementQ<2> fe(1);
  dh.distribute_dofs(fe);
  AffineConstraints<double> none;
  none.close();
  EXPECT_EQ(make_sparsity_pattern(dh, none)->n_nonzero_elements(), 16u);

  Triangulation<2> strip;
  strip.create_triangulation({Point<2>(0., 0.), Point<2>(1., 0.), Point<2>(2., 0.), Point<2>(0., 1.),
                              Point<2>(1., 1.), Point<2>(2., 1.)},
                             {CellData<2>{{0, 1, 3, 4}}, CellData<2>{{1, 2, 4, 5}}});
  DoFHandler<2> d2(strip);
  d2.distribute_dofs(fe);
  EXPECT_EQ(d2.n_dofs(), 6u);
  const auto sp = make_sparsity_pattern(d2, none);
  const auto left  = d2.cell_dof_indices(strip.cell(0, 0));
  const auto right = d2.cell_dof_indices(strip.cell(0, 1));
  for (types::global_index i = 0; i < 6; ++i)
    {
      const bool shared = std::count(left.begin(), left.end(), i) && std::count(right.begin(), right.end(), i);
      EXPECT_EQ(sp->row_length(i), shared ? 6u : 4u);
    }
  EXPECT_TRUE(sp->is_symmetric());
}

TEST(Sparsity, SymmetricWithConstraints)
{
  auto tria = grid::hyper_cube<2>(0, 1, 3);
  tria.set_refine_flag(tria.cell(0, 4));
  tria.execute_refinement();
  DoFHandler<2> dh(tria);
  const FiniteElementQ<2> fe(3);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const auto c = hanging_and_zero_dirichlet(dh, mapping);
  EXPECT_TRUE(make_sparsity_pattern(dh, c)->is_symmetric());
}

TEST(SparseMatrix, MissingEntryThrows)
{
  DynamicSparsityPattern dsp(3);
  dsp.add(0, 0);
  dsp.add(1, 1);
  SparseMatrix<double> A(std::make_shared<SparsityPattern>(std::move(dsp)));
  EXPECT_THROW(A.add(0, 1, 1.), SparsityMiss);
  A.add(1, 1, 2.);
  A.add(1, 1, 0.5);
  EXPECT_EQ(A.el(1, 1), 2.5);
  EXPECT_EQ(A.el(2, 1), 0.);
}

TEST(Assembly, SingleCellLocalMatrix)
{
  const auto tria = grid::hyper_cube<2>(0, 1, 1);
  DoFHandler<2> dh(tria);
  const FiniteElementQ<2> fe(1);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  AffineConstraints<double> none;
  none.close();
  const auto s = assemble(dh, none, mapping, ScalarFunction<2>::constant(0));
  const double expected[4][4] = {{4, -1, -1, -2}, {-1, 4, -2, -1}, {-1, -2, 4, -1}, {-2, -1, -1, 4}};
  const auto dofs = dh.cell_dof_indices(tria.cell(0, 0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_NEAR(s.A.el(dofs[i], dofs[j]), expected[i][j] / 6, 1e-15);
  for (const double v : s.b)
    EXPECT_EQ(v, 0.);
}

TEST(Assembly, SymmetryAndZeroRowSums)
{
  auto tria = grid::hyper_shell_2d(Point<2>(0., 0.), 0.5, 1., 6);
  tria.refine_global(1);
  for (const auto &cell : tria.active_cell_iterators())
    if (cell.center()[0] > 0)
      tria.set_refine_flag(cell);
  tria.execute_refinement();
  DoFHandler<2> dh(tria);
  const FiniteElementQ<2> fe(2);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(2);
  AffineConstraints<double> none;
  none.close();
  const auto s = assemble(dh, none, mapping, ScalarFunction<2>::constant(1));
  const auto D = to_dense(s.A);
  double scale = 0;
  for (const double v : s.A.values())
    scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < D.n; ++i)
    {
      double row = 0;
      for (std::size_t j = 0; j < D.n; ++j)
        {
          EXPECT_NEAR(D(i, j), D(j, i), 1e-12 * scale);
          row += D(i, j);
        }
      EXPECT_NEAR(row, 0., 1e-12 * scale);
    }
}

namespace
{
// Explicit elimination: x = C y + k over the free unknowns y.
template <int dim>
void check_against_elimination(const DoFHandler<dim> &dh, const AffineConstraints<double> &c,
                               const MappingQ<dim> &mapping, const ScalarFunction<dim> &f)
{
  AffineConstraints<double> none;
  none.close();
  const auto full = assemble(dh, none, mapping, f);
  const auto red  = assemble(dh, c, mapping, f);
  const auto A    = to_dense(full.A);
  const auto Ac   = to_dense(red.A);
  const std::size_t n = dh.n_dofs();

  std::vector<types::global_index> free;
  std::vector<long> free_pos(n, -1);
  for (types::global_index i = 0; i < n; ++i)
    if (!c.is_constrained(i))
      {
        free_pos[i] = free.size();
        free.push_back(i);
      }
  const std::size_t m = free.size();
  std::vector<double> C(n * m, 0.), k(n, 0.);
  for (types::global_index i = 0; i < n; ++i)
    if (const auto *line = c.line(i))
      {
        for (const auto &[j, coef] : line->entries)
          C[i * m + free_pos[j]] = coef;
        k[i] = line->inhomogeneity;
      }
    else
      C[i * m + free_pos[i]] = 1.;

  std::vector<double> Ak(n, 0.);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      Ak[i] += A(i, j) * k[j];

  double scale = 0;
  for (const double v : full.A.values())
    scale = std::max(scale, std::abs(v));
  for (std::size_t a = 0; a < m; ++a)
    {
      for (std::size_t b = 0; b < m; ++b)
        {
          double v = 0;
          for (std::size_t i = 0; i < n; ++i)
            {
              if (C[i * m + a] == 0.)
                continue;
              for (std::size_t j = 0; j < n; ++j)
                v += C[i * m + a] * A(i, j) * C[j * m + b];
            }
          EXPECT_NEAR(Ac(free[a], free[b]), v, 1e-12 * scale);
          EXPECT_NEAR(Ac(free[a], free[b]), Ac(free[b], free[a]), 1e-12 * scale);
        }
      double rhs = 0;
      for (std::size_t i = 0; i < n; ++i)
        rhs += C[i * m + a] * (full.b[i] - Ak[i]);
      EXPECT_NEAR(red.b[free[a]], rhs, 1e-12 * std::max(1., scale));
    }
  // constrained rows only carry the positive placeholder on the diagonal
  for (const auto &line : c.get_lines())
    for (std::size_t j = 0; j < n; ++j)
      {
        if (j == line.index)
          {
            EXPECT_GT(Ac(j, j), 0.);
          }
        else
          {
            EXPECT_EQ(Ac(line.index, j), 0.);
          }
      }
}
} // namespace

TEST(Assembly, MatchesExplicitEliminationOnSevenCells)
{
  const auto tria = seven_cells();
  const MappingQ<2> mapping(1);
  const ScalarFunction<2> f([](const Point<2> &x) { return 1 + x[0] - 2 * x[1]; });
  const ScalarFunction<2> g([](const Point<2> &x) { return x[0] * x[0] + 0.5; });
  for (unsigned p = 1; p <= 3; ++p)
    {
      DoFHandler<2> dh(tria);
      const FiniteElementQ<2> fe(p);
      dh.distribute_dofs(fe);
      check_against_elimination(dh, hanging_and_zero_dirichlet(dh, mapping), mapping, f);
      check_against_elimination(dh, hanging_and_zero_dirichlet(dh, mapping, g), mapping, f);
    }
  auto cube = grid::hyper_cube<3>(0, 1, 2);
  cube.set_refine_flag(cube.cell(0, 0));
  cube.execute_refinement();
  DoFHandler<3> dh3(cube);
  const FiniteElementQ<3> fe3(2);
  dh3.distribute_dofs(fe3);
  const MappingQ<3> m3(1);
  check_against_elimination(dh3, hanging_and_zero_dirichlet(dh3, m3), m3, ScalarFunction<3>::constant(1));
}

TEST(Assembly, ZeroContributionsLeaveSystemUnchanged)
{
  const auto tria = seven_cells();
  DoFHandler<2> dh(tria);
  const FiniteElementQ<2> fe(1);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const auto c = hanging_and_zero_dirichlet(dh, mapping);
  auto s = assemble(dh, c, mapping, ScalarFunction<2>::constant(1));
  const auto values = s.A.values();
  const auto b      = s.b;
  // only unconstrained unknowns: a zero matrix leaves everything untouched
  std::vector<types::global_index> dofs;
  for (types::global_index i = 0; i < dh.n_dofs() && dofs.size() < 1; ++i)
    if (!c.is_constrained(i))
      dofs.push_back(i);
  distribute_local_to_global(c, {0.}, {0.}, dofs, s.A, s.b);
  EXPECT_EQ(values, s.A.values());
  EXPECT_EQ(b, s.b);
}

TEST(CG, IdentityAndDiagonal)
{
  const std::vector<double> b{1, -2, 3, 0.5};
  std::vector<double> x(4, 0.);
  const auto r = solve_cg(DiagonalOperator{{1, 1, 1, 1}}, x, b, PreconditionIdentity(), SolverControl{10, 1e-12});
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_EQ(x, b);

  DiagonalOperator D;
  for (int i = 1; i <= 10; ++i)
    D.d.push_back(i);
  std::vector<double> ones(10, 1.), y(10, 0.);
  const auto r2 = solve_cg(D, y, ones, PreconditionIdentity(), SolverControl{100, 1e-12});
  EXPECT_LE(r2.iterations, 10u);
  for (int i = 0; i < 10; ++i)
    EXPECT_NEAR(y[i], 1. / (i + 1), 1e-12);
}

TEST(CG, Errors)
{
  DiagonalOperator indefinite{{1, -1, 2}};
  std::vector<double> x(3, 0.), b{1, 1, 1};
  EXPECT_THROW(solve_cg(indefinite, x, b, PreconditionIdentity(), SolverControl{10, 1e-12}), BreakdownError);
  DiagonalOperator D;
  for (int i = 1; i <= 50; ++i)
    D.d.push_back(i * i);
  std::vector<double> y(50, 0.), ones(50, 1.);
  EXPECT_THROW(solve_cg(D, y, ones, PreconditionIdentity(), SolverControl{3, 1e-12}), MaxIterations);
  std::vector<double> short_x(2);
  EXPECT_THROW(solve_cg(D, short_x, ones, PreconditionIdentity(), SolverControl{3, 1e-12}), LengthMismatch);
}

TEST(Jacobi, Basics)
{
  PreconditionJacobi<double> id(std::vector<double>{1, 1, 1});
  std::vector<double> r{1, 2, 3}, z;
  id.vmult(z, r);
  EXPECT_EQ(z, r);
  PreconditionJacobi<double> half(std::vector<double>{2, 2, 2});
  half.vmult(z, r);
  EXPECT_EQ(z, (std::vector<double>{0.5, 1, 1.5}));
  EXPECT_THROW(PreconditionJacobi<double>(std::vector<double>{1, 0}), ZeroDiagonal);
  EXPECT_THROW(PreconditionJacobi<double>(std::vector<double>{1, -1}), ZeroDiagonal);
}

TEST(CG, LaplaceMatchesDenseSolveAndJacobiHelps)
{
  const auto tria = grid::hyper_cube<2>(0, 1, 16);
  DoFHandler<2> dh(tria);
  const FiniteElementQ<2> fe(1);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const auto c = hanging_and_zero_dirichlet(dh, mapping);
  // variable coefficient-free but non-uniform rhs
  const auto s = assemble(dh, c, mapping, ScalarFunction<2>([](const Point<2> &x) { return 1 + 10 * x[0] * x[1]; }));
  const auto direct = test::lu_solve(to_dense(s.A), s.b);

  std::vector<double> x(dh.n_dofs(), 0.), y(dh.n_dofs(), 0.);
  solve_cg(s.A, x, s.b, PreconditionIdentity(), SolverControl{1000, 1e-12});
  solve_cg(s.A, y, s.b, PreconditionJacobi<double>(s.A.diagonal()), SolverControl{1000, 1e-12});
  for (std::size_t i = 0; i < x.size(); ++i)
    {
      EXPECT_NEAR(x[i], direct[i], 1e-8);
      EXPECT_NEAR(y[i], direct[i], 1e-8);
    }

  // Q1 on a uniform grid has a constant diagonal, where Jacobi is a scaled
  // identity; Q2 has distinct vertex, edge and interior diagonals.
  const FiniteElementQ<2> fe2(2);
  dh.distribute_dofs(fe2);
  const auto c2 = hanging_and_zero_dirichlet(dh, mapping);
  const auto s2 = assemble(dh, c2, mapping, ScalarFunction<2>::constant(1));
  std::vector<double> x2(dh.n_dofs(), 0.), y2(dh.n_dofs(), 0.);
  const auto plain = solve_cg(s2.A, x2, s2.b, PreconditionIdentity(), SolverControl{1000, 1e-12});
  const auto prec  = solve_cg(s2.A, y2, s2.b, PreconditionJacobi<double>(s2.A.diagonal()), SolverControl{1000, 1e-12});
  EXPECT_LT(prec.iterations, plain.iterations);
}

TEST(CG, EnergyErrorIsMonotone)
{
  auto tria = grid::hyper_cube<2>(0, 1, 8);
  tria.set_refine_flag(tria.cell(0, 27));
  tria.execute_refinement();
  DoFHandler<2> dh(tria);
  const FiniteElementQ<2> fe(2);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const auto c      = hanging_and_zero_dirichlet(dh, mapping);
  const auto s      = assemble(dh, c, mapping, ScalarFunction<2>::constant(1));
  const auto direct = test::lu_solve(to_dense(s.A), s.b);
  auto energy       = [&](const Vector<double> &x) {
    const auto e = vec::subtract(x, direct);
    Vector<double> Ae;
    s.A.vmult(Ae, e);
    return vec::dot(e, Ae);
  };
  double last = std::numeric_limits<double>::infinity();
  std::vector<double> x(dh.n_dofs(), 0.);
  unsigned checks = 0;
  solve_cg(s.A, x, s.b, PreconditionJacobi<double>(s.A.diagonal()), SolverControl{1000, 1e-12},
           std::function<void(unsigned, double, const Vector<double> &)>(
             [&](unsigned it, double res, const Vector<double> &xi) {
               const double e = energy(xi);
               EXPECT_LE(e, last * (1 + 1e-10) + 1e-28);
               last = e;
               if (it % 10 == 0)
                 {
                   Vector<double> Ax;
                   s.A.vmult(Ax, xi);
                   const double true_res = vec::norm(vec::subtract(s.b, Ax));
                   EXPECT_NEAR(true_res, res, 1e-10 * vec::norm(s.b) + 1e-10 * res);
                   ++checks;
                 }
             }));
  EXPECT_GT(checks, 1u);
}

TEST(Assembly, ConstrainedMatrixIsPositiveDefinite)
{
  auto tria = grid::hyper_cube<2>(0, 1, 4);
  tria.set_refine_flag(tria.cell(0, 5));
  tria.execute_refinement();
  tria.set_refine_flag(tria.cell(1, 3));
  tria.execute_refinement();
  for (unsigned p = 1; p <= 4; ++p)
    {
      DoFHandler<2> dh(tria);
      const FiniteElementQ<2> fe(p);
      dh.distribute_dofs(fe);
      ASSERT_LE(dh.n_dofs(), 1089u);
      const MappingQ<2> mapping(1);
      const auto s = assemble(dh, hanging_and_zero_dirichlet(dh, mapping), mapping, ScalarFunction<2>::constant(1));
      FullMatrix F(dh.n_dofs(), dh.n_dofs());
      const auto D = to_dense(s.A);
      for (std::size_t i = 0; i < D.n; ++i)
        for (std::size_t j = 0; j < D.n; ++j)
          F(i, j) = D(i, j);
      EXPECT_NO_THROW(F.cholesky()) << "p=" << p;
    }
}

TEST(Assembly, UniformMeshEqualsRestrictedSystem)
{
  const auto tria = grid::hyper_cube<2>(0, 1, 4);
  DoFHandler<2> dh(tria);
  const FiniteElementQ<2> fe(2);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const auto c = hanging_and_zero_dirichlet(dh, mapping);
  AffineConstraints<double> none;
  none.close();
  const auto full = to_dense(assemble(dh, none, mapping, sine_rhs).A);
  const auto s    = assemble(dh, c, mapping, sine_rhs);
  const auto red  = to_dense(s.A);
  for (std::size_t i = 0; i < full.n; ++i)
    for (std::size_t j = 0; j < full.n; ++j)
      if (!c.is_constrained(i) && !c.is_constrained(j))
        {
          EXPECT_NEAR(red(i, j), full(i, j), 1e-14);
        }
}

namespace
{
dof_tools::Errors solve_sine(DoFHandler<2> &dh, const FiniteElementQ<2> &fe, Vector<double> *solution = nullptr)
{
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const auto c = hanging_and_zero_dirichlet(dh, mapping);
  const auto s = assemble(dh, c, mapping, sine_rhs);
  Vector<double> x(dh.n_dofs(), 0.);
  solve_cg(s.A, x, s.b, PreconditionJacobi<double>(s.A.diagonal()), SolverControl{5000, 1e-13});
  c.distribute(x);
  if (solution)
    *solution = x;
  return dof_tools::integrate_difference(dh, mapping, x, sine_solution);
}
} // namespace

TEST(Galerkin, ConvergenceRates)
{
  for (unsigned p = 1; p <= 3; ++p)
    {
      std::vector<dof_tools::Errors> e;
      const FiniteElementQ<2> fe(p);
      for (unsigned n : {4u, 8u, 16u})
        {
          const auto tria = grid::hyper_cube<2>(0, 1, n);
          DoFHandler<2> dh(tria);
          e.push_back(solve_sine(dh, fe));
        }
      const double l2_rate = std::log2(e[1].l2 / e[2].l2);
      const double h1_rate = std::log2(e[1].h1_seminorm / e[2].h1_seminorm);
      EXPECT_NEAR(l2_rate, p + 1., 0.1) << "p=" << p;
      EXPECT_NEAR(h1_rate, double(p), 0.1) << "p=" << p;
    }
}

TEST(Galerkin, SolutionIsContinuousAcrossHangingFaces)
{
  auto tria = grid::hyper_cube<2>(0, 1, 4);
  std::mt19937 rng(1);
  for (int round = 0; round < 3; ++round)
    {
      std::vector<CellAccessor<2>> active;
      for (const auto &cell : tria.active_cell_iterators())
        active.push_back(cell);
      for (int k = 0; k < 3; ++k)
        tria.set_refine_flag(active[std::uniform_int_distribution<std::size_t>(0, active.size() - 1)(rng)]);
      tria.execute_refinement();
    }
  using Kind = NeighborInfo<2>::Kind;
  for (unsigned p = 1; p <= 3; ++p)
    {
      DoFHandler<2> dh(tria);
      const FiniteElementQ<2> fe(p);
      Vector<double> x;
      solve_sine(dh, fe, &x);
      unsigned samples = 0;
      std::uniform_real_distribution<double> u(0, 1);
      for (const auto &cell : dh.cells())
        for (unsigned f = 0; f < 4; ++f)
          {
            const auto n = cell.neighbor(f);
            if (n.kind != Kind::coarser)
              continue;
            for (int k = 0; k < 10; ++k)
              {
                const double t = u(rng);
                Point<2> xf;
                xf[f / 2]     = f % 2;
                xf[1 - f / 2] = t;
                // coarse reference coordinates of the same point on a box mesh
                const auto real = cell.vertex(0) + Point<2>(xf[0] * (cell.vertex(3)[0] - cell.vertex(0)[0]),
                                                            xf[1] * (cell.vertex(3)[1] - cell.vertex(0)[1]));
                const auto lo = n.cell.vertex(0), hi = n.cell.vertex(3);
                const Point<2> xc((real[0] - lo[0]) / (hi[0] - lo[0]), (real[1] - lo[1]) / (hi[1] - lo[1]));
                EXPECT_NEAR(dof_tools::point_value(dh, x, cell, xf), dof_tools::point_value(dh, x, n.cell, xc),
                            1e-10);
                ++samples;
              }
          }
      EXPECT_GT(samples, 0u);
    }
}

TEST(FullMatrix, CholeskySolve)
{
  FullMatrix A(3, 3);
  const double v[3][3] = {{4, 1, 0}, {1, 3, -1}, {0, -1, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      A(i, j) = v[i][j];
  const FullMatrix original = A;
  A.cholesky();
  std::vector<double> x, b{1, 2, 3}, Ax;
  A.cholesky_solve(x, b);
  original.vmult(Ax, x);
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(Ax[i], b[i], 1e-14);
  FullMatrix indefinite(2, 2);
  indefinite(0, 0) = 1;
  indefinite(1, 1) = -1;
  EXPECT_THROW(indefinite.cholesky(), BreakdownError);
}
