#include <felab/matrix_free/laplace_operator.hpp>

#include "test_helpers.hpp"
#include "test_systems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace felab;

namespace
{

template <int dim>
LaplaceOperatorMF<dim> make_operator(const DoFHandler<dim> &dh, const AffineConstraints<double> &c,
                                     const MappingQ<dim> &mapping, const unsigned w = 4)
{
  return LaplaceOperatorMF<dim>(
    MatrixFreeData<dim>(dh, c, mapping, QGauss<dim>(dh.get_fe().degree() + 1), w));
}

Triangulation<2> seven_cells()
{
  auto tria = grid::hyper_cube<2>(0, 1, 2);
  tria.set_refine_flag(tria.cell(0, 0));
  tria.execute_refinement();
  return tria;
}

Triangulation<2> refined_shell(const unsigned seed)
{
  auto tria = grid::hyper_shell_2d(Point<2>(), 0.5, 1.0);
  tria.refine_global(1);
  std::mt19937 rng(seed);
  for (unsigned r = 0; r < 3; ++r)
    {
      std::vector<CellAccessor<2>> active;
      for (const auto &cell : tria.active_cell_iterators())
        active.push_back(cell);
      tria.set_refine_flag(active[std::uniform_int_distribution<std::size_t>(0, active.size() - 1)(rng)]);
      tria.execute_refinement();
    }
  return tria;
}

// Relative difference of the matrix-free and assembled products on random
// vectors that vanish on constrained unknowns. Both operators are zero on
// such vectors in the constrained rows.
template <int dim>
double max_relative_difference(const Triangulation<dim> &tria, const unsigned p, const unsigned mapping_degree,
                               const unsigned seed, const unsigned w = 4)
{
  const FiniteElementQ<dim> fe(p);
  DoFHandler<dim> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<dim> mapping(mapping_degree);
  const auto c   = test::hanging_and_dirichlet(dh, mapping);
  const auto sys = test::assemble(dh, c, mapping);
  const auto op  = make_operator(dh, c, mapping, w);

  std::mt19937 rng(seed);
  double worst = 0;
  for (unsigned k = 0; k < 10; ++k)
    {
      auto x = test::random_vector(dh.n_dofs(), rng);
      for (const auto &l : c.get_lines())
        x[l.index] = 0;
      Vector<double> y_mf, y_ref;
      op.vmult(y_mf, x);
      sys.A.vmult(y_ref, x);
      worst = std::max(worst, vec::norm(vec::subtract(y_mf, y_ref)) / vec::norm(y_ref));
    }
  return worst;
}

} // namespace

TEST(MatrixFreeData, BatchCounts)
{
  const auto four = grid::hyper_cube<2>(0, 1, 2);
  const FiniteElementQ<2> fe(1);
  const MappingQ<2> mapping(1);
  DoFHandler<2> dh4(four);
  dh4.distribute_dofs(fe);
  const MatrixFreeData<2> d4(dh4, AffineConstraints<double>(test::hanging_and_dirichlet(dh4, mapping)), mapping,
                             QGauss<2>(2));
  EXPECT_EQ(d4.n_batches(), 1u);
  EXPECT_EQ(d4.n_padded_lanes(), 0u);

  const auto seven = seven_cells();
  DoFHandler<2> dh7(seven);
  dh7.distribute_dofs(fe);
  const MatrixFreeData<2> d7(dh7, test::hanging_and_dirichlet(dh7, mapping), mapping, QGauss<2>(2));
  EXPECT_EQ(d7.n_batches(), 2u);
  EXPECT_EQ(d7.n_padded_lanes(), 1u);
  EXPECT_EQ(d7.n_filled_lanes(1), 3u);
  // padding repeats the last cell
  EXPECT_EQ(d7.cell_of(1, 3), d7.cell_of(1, 2));

  for (unsigned w = 1; w <= 8; ++w)
    {
      const MatrixFreeData<2> d(dh7, test::hanging_and_dirichlet(dh7, mapping), mapping, QGauss<2>(2), w);
      EXPECT_EQ(d.n_batches(), (7 + w - 1) / w);
    }
  EXPECT_THROW(MatrixFreeData<2>(dh7, AffineConstraints<double>(), mapping, QGauss<2>(2), 0), DomainError);
  EXPECT_THROW(MatrixFreeData<2>(dh7, AffineConstraints<double>(), mapping, QGauss<2>(2), 9), DomainError);
  AffineConstraints<double> open;
  open.add_constraint(0, {});
  EXPECT_THROW(MatrixFreeData<2>(dh7, open, mapping, QGauss<2>(2)), NotInitialized);
}

TEST(MatrixFreeData, ColorsAreConflictFree)
{
  const auto tria = test::random_adaptive<2>(3, 8, 4);
  for (unsigned p = 1; p <= 3; ++p)
    {
      const FiniteElementQ<2> fe(p);
      DoFHandler<2> dh(tria);
      dh.distribute_dofs(fe);
      const MappingQ<2> mapping(1);
      const MatrixFreeData<2> data(dh, test::hanging_and_dirichlet(dh, mapping), mapping, QGauss<2>(p + 1), 2);

      std::set<std::size_t> seen;
      for (const auto &color : data.colors())
        {
          for (std::size_t a = 0; a < color.size(); ++a)
            {
              EXPECT_TRUE(seen.insert(color[a]).second);
              const auto da = data.batch_dofs(color[a]);
              for (std::size_t b = a + 1; b < color.size(); ++b)
                {
                  const auto db = data.batch_dofs(color[b]);
                  std::vector<types::global_index> common;
                  std::set_intersection(da.begin(), da.end(), db.begin(), db.end(), std::back_inserter(common));
                  EXPECT_TRUE(common.empty()) << "batches " << color[a] << " and " << color[b];
                }
            }
        }
      EXPECT_EQ(seen.size(), data.n_batches());
    }
}

TEST(MatrixFreeData, GeometryMatchesFEValues)
{
  const auto tria = refined_shell(1);
  const FiniteElementQ<2> fe(2);
  DoFHandler<2> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(3);
  const QGauss<2> quad(3);
  const MatrixFreeData<2> data(dh, test::hanging_and_dirichlet(dh, mapping), mapping, quad, 4);
  FEValues<2> fev(mapping, fe, quad, update_gradients | update_JxW_values);
  for (std::size_t b = 0; b < data.n_batches(); ++b)
    for (unsigned l = 0; l < data.batch_width(); ++l)
      {
        fev.reinit(dh.cells()[data.cell_of(b, l)]);
        for (unsigned q = 0; q < quad.size(); ++q)
          {
            EXPECT_NEAR(data.JxW(b, q, l), fev.JxW(q), 1e-13);
            EXPECT_LT((data.inverse_jacobian_transpose(b, q, l) - fev.inverse_jacobian_transpose(q)).norm(), 1e-13);
          }
      }
}

TEST(LaplaceOperatorMF, TrivialInputs)
{
  const auto tria = grid::hyper_cube<2>(0, 1, 1);
  const FiniteElementQ<2> fe(1);
  DoFHandler<2> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  AffineConstraints<double> none;
  none.close();
  const auto op = make_operator(dh, none, mapping);

  Vector<double> y;
  op.vmult(y, Vector<double>(4, 0.));
  for (const double v : y)
    EXPECT_EQ(v, 0.);
  op.vmult(y, Vector<double>(4, 1.));
  for (const double v : y)
    EXPECT_NEAR(v, 0., 1e-15);

  EXPECT_THROW(op.vmult(y, Vector<double>(5, 0.)), LengthMismatch);
}

TEST(LaplaceOperatorMF, MatchesAssembledMatrix)
{
  for (unsigned p = 1; p <= 4; ++p)
    {
      SCOPED_TRACE("p = " + std::to_string(p));
      EXPECT_LE(max_relative_difference(grid::hyper_cube<2>(0, 1, 4), p, 1, p), 1e-11);
      EXPECT_LE(max_relative_difference(test::random_adaptive<2>(p, 8, 2), p, 1, p), 1e-11);
      EXPECT_LE(max_relative_difference(refined_shell(p), p, 2, p), 1e-11);
      EXPECT_LE(max_relative_difference(test::distorted_cube<2>(3, p), p, 1, p), 1e-11);
      EXPECT_LE(max_relative_difference(grid::hyper_cube<3>(0, 1, 2), p, 1, p), 1e-11);
      EXPECT_LE(max_relative_difference(test::random_adaptive<3>(p, 2, 2), p, 1, p), 1e-11);
      EXPECT_LE(max_relative_difference(test::distorted_cube<3>(2, p), p, 1, p), 1e-11);
    }
}

TEST(LaplaceOperatorMF, BatchWidthDoesNotChangeResult)
{
  const auto tria = test::random_adaptive<2>(5, 6, 3);
  for (unsigned w = 1; w <= 8; ++w)
    EXPECT_LE(max_relative_difference(tria, 2, 1, 7, w), 1e-11) << "w = " << w;
}

TEST(LaplaceOperatorMF, Symmetry)
{
  const auto tria = refined_shell(4);
  const FiniteElementQ<2> fe(3);
  DoFHandler<2> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(2);
  const auto c  = test::hanging_and_dirichlet(dh, mapping);
  const auto op = make_operator(dh, c, mapping);
  std::mt19937 rng(11);
  for (unsigned k = 0; k < 5; ++k)
    {
      const auto x = test::random_vector(dh.n_dofs(), rng), y = test::random_vector(dh.n_dofs(), rng);
      Vector<double> ax, ay;
      op.vmult(ax, x);
      op.vmult(ay, y);
      EXPECT_LE(std::abs(vec::dot(y, ax) - vec::dot(x, ay)), 1e-11 * vec::norm(x) * vec::norm(y));
    }
}

TEST(LaplaceOperatorMF, DiagonalMatchesAssembled)
{
  auto check = [](const auto &tria, const unsigned p) {
    constexpr int dim = std::remove_cvref_t<decltype(tria)>::dimension;
    const FiniteElementQ<dim> fe(p);
    DoFHandler<dim> dh(tria);
    dh.distribute_dofs(fe);
    const MappingQ<dim> mapping(1);
    const auto c    = test::hanging_and_dirichlet(dh, mapping);
    const auto sys  = test::assemble(dh, c, mapping);
    const auto diag = make_operator(dh, c, mapping).compute_diagonal();
    ASSERT_EQ(diag.size(), dh.n_dofs());
    for (types::global_index i = 0; i < dh.n_dofs(); ++i)
      {
        if (c.is_constrained(i))
          EXPECT_EQ(diag[i], 1.);
        else
          {
            EXPECT_NEAR(diag[i], sys.A.diag_element(i), 1e-12 * std::max(1., std::abs(diag[i])));
            EXPECT_GT(diag[i], 0.);
          }
      }
  };
  for (unsigned p = 1; p <= 4; ++p)
    {
      check(test::random_adaptive<2>(20 + p, 6, 2), p);
      check(test::random_adaptive<3>(20 + p, 2, 2), std::min(p, 3u));
    }
}

TEST(LaplaceOperatorMF, InhomogeneousLiftingMatchesAssembly)
{
  const auto tria = test::random_adaptive<2>(9, 6, 2);
  const FiniteElementQ<2> fe(2);
  DoFHandler<2> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const ScalarFunction<2> g([](const Point<2> &x) { return 1 + x[0] * x[0] - 0.5 * x[1]; });
  const ScalarFunction<2> f([](const Point<2> &x) { return std::sin(3 * x[0]) + x[1]; });

  const auto c_inhom = test::hanging_and_dirichlet(dh, mapping, g);
  const auto c_hom   = test::hanging_and_dirichlet(dh, mapping);
  const auto lifted  = test::assemble(dh, c_inhom, mapping, f);
  auto b             = test::assemble(dh, c_hom, mapping, f).b;
  make_operator(dh, c_inhom, mapping).subtract_inhomogeneous_action(b);
  for (types::global_index i = 0; i < dh.n_dofs(); ++i)
    if (!c_inhom.is_constrained(i))
      {
        EXPECT_NEAR(b[i], lifted.b[i], 1e-12) << i;
      }
}

TEST(LaplaceOperatorMF, ThreadsGiveBitwiseIdenticalResults)
{
  const auto tria = test::random_adaptive<3>(2, 3, 3);
  const FiniteElementQ<3> fe(2);
  DoFHandler<3> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<3> mapping(1);
  const auto c = test::hanging_and_dirichlet(dh, mapping);
  auto op      = make_operator(dh, c, mapping);
  std::mt19937 rng(3);
  const auto x = test::random_vector(dh.n_dofs(), rng);

  op.set_threads(1);
  Vector<double> serial;
  op.vmult(serial, x);
  for (const unsigned t : {2u, 3u, 4u, 7u})
    {
      op.set_threads(t);
      Vector<double> parallel;
      op.vmult(parallel, x);
      EXPECT_EQ(parallel, serial) << t << " threads";
      EXPECT_EQ(op.compute_diagonal(), [&] {
        op.set_threads(1);
        auto d = op.compute_diagonal();
        op.set_threads(t);
        return d;
      }());
    }
}

TEST(LaplaceOperatorMF, SinglePrecisionIsClose)
{
  const auto tria = test::random_adaptive<2>(4, 6, 2);
  const FiniteElementQ<2> fe(2);
  DoFHandler<2> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  const auto c = test::hanging_and_dirichlet(dh, mapping);
  const auto op_d = make_operator(dh, c, mapping);
  const LaplaceOperatorMF<2, float> op_f(MatrixFreeData<2, float>(dh, c, mapping, QGauss<2>(3)));
  std::mt19937 rng(5);
  const auto x = test::random_vector(dh.n_dofs(), rng);
  Vector<double> y;
  Vector<float> yf;
  op_d.vmult(y, x);
  op_f.vmult(yf, vec::convert<float>(x));
  EXPECT_LE(vec::norm(vec::subtract(vec::convert<double>(yf), y)) / vec::norm(y), 1e-5);
}

TEST(LaplaceOperatorMF, SumFactorizationOperationCount)
{
  auto counts = [](const unsigned p) {
    const auto tria = grid::hyper_cube<3>(0, 1, 1);
    const FiniteElementQ<3> fe(p);
    DoFHandler<3> dh(tria);
    dh.distribute_dofs(fe);
    const MappingQ<3> mapping(1);
    AffineConstraints<double> none;
    none.close();
    const auto op = make_operator(dh, none, mapping);
    auto s        = op.make_scratch();
    const auto K  = op.cell_matrices(0, s)[0];
    std::vector<double> in(fe.dofs_per_cell(), 1.), out;
    std::uint64_t dense = 0;
    LaplaceOperatorMF<3>::dense_cell_apply(K, in, out, &dense);
    return std::pair{op.kernel_operation_count(), dense};
  };
  const auto [sf2, dense2] = counts(2);
  const auto [sf4, dense4] = counts(4);
  const double expected_sf    = std::pow(5. / 3., 4);
  const double expected_dense = std::pow(5. / 3., 6);
  const double r_sf           = double(sf4) / double(sf2);
  const double r_dense        = double(dense4) / double(dense2);
  EXPECT_GE(r_sf, expected_sf / 1.5);
  EXPECT_LE(r_sf, expected_sf * 1.5);
  EXPECT_DOUBLE_EQ(r_dense, expected_dense);
  EXPECT_LT(sf4, dense4);
}

TEST(LaplaceOperatorMF, KernelMatchesLocalMatrix)
{
  // the unit cell Q1 matrix in 2d
  const auto tria = grid::hyper_cube<2>(0, 1, 1);
  const FiniteElementQ<2> fe(1);
  DoFHandler<2> dh(tria);
  dh.distribute_dofs(fe);
  const MappingQ<2> mapping(1);
  AffineConstraints<double> none;
  none.close();
  const auto op = make_operator(dh, none, mapping);
  auto s        = op.make_scratch();
  const auto K  = op.cell_matrices(0, s)[0];
  const double expected[16] = {4, -1, -1, -2, -1, 4, -2, -1, -1, -2, 4, -1, -2, -1, -1, 4};
  for (unsigned i = 0; i < 16; ++i)
    EXPECT_NEAR(K[i], expected[i] / 6, 1e-14);
}
