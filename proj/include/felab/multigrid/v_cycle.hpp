#pragma once

#include <felab/lac/dense.hpp>
#include <felab/lac/precondition.hpp>
#include <felab/lac/solver_cg.hpp>
#include <felab/multigrid/chebyshev.hpp>
#include <felab/multigrid/mg_hierarchy.hpp>

#include <limits>
#include <type_traits>

namespace felab
{

/// One multigrid V-cycle over an MGHierarchy: Chebyshev pre- and
/// post-smoothing on every level above the coarsest, a coarse solve at
/// level 0. Usable as a preconditioner through vmult().
template <int dim, typename Number = double>
class VCycle
{
public:
  using Operator = typename MGHierarchy<dim, Number>::Operator;
  using Smoother = ChebyshevSmoother<Operator, Number>;

  struct AdditionalData
  {
    typename Smoother::AdditionalData smoother;
    /// relative tolerance of the iterative coarse solver
    double coarse_tolerance = 1e-12;
    /// coarse levels with fewer unknowns are factored
    std::size_t dense_coarse_limit = 100;
  };

  explicit VCycle(const MGHierarchy<dim, Number> &h, const AdditionalData &data = {}) : h_(h), data_(data)
  {
    smoothers_.resize(h.n_levels());
    for (unsigned l = 1; l < h.n_levels(); ++l)
      smoothers_[l].initialize(h.level_operator(l), h.level_operator(l).compute_diagonal(), data.smoother);

    const auto &A0 = h.level_operator(0);
    const std::size_t n0 = A0.n_dofs();
    if (n0 < data.dense_coarse_limit)
      {
        coarse_matrix_ = FullMatrix(n0, n0);
        Vector<Number> e(n0, Number(0)), col;
        for (std::size_t j = 0; j < n0; ++j)
          {
            e[j] = 1;
            A0.vmult(col, e);
            e[j] = 0;
            for (std::size_t i = 0; i < n0; ++i)
              coarse_matrix_(i, j) = double(col[i]);
          }
        // symmetrize against rounding before factoring
        for (std::size_t i = 0; i < n0; ++i)
          for (std::size_t j = 0; j < i; ++j)
            coarse_matrix_(i, j) = coarse_matrix_(j, i) = 0.5 * (coarse_matrix_(i, j) + coarse_matrix_(j, i));
        coarse_matrix_.cholesky();
        dense_coarse_ = true;
      }
    else
      coarse_preconditioner_.initialize(A0.compute_diagonal());
  }

  const MGHierarchy<dim, Number> &hierarchy() const { return h_; }
  const Smoother &smoother(const unsigned l) const { return smoothers_.at(l); }
  bool uses_dense_coarse_solver() const { return dense_coarse_; }

  /// x <- approximate solution of A_l x = b on level l, starting from x.
  void cycle(const unsigned l, const Vector<Number> &b, Vector<Number> &x) const
  {
    if (l == 0)
      {
        coarse_solve(b, x);
        return;
      }
    const auto &A = h_.level_operator(l);
    smoothers_[l].smooth(b, x);

    Vector<Number> r, rc, xc, correction;
    A.vmult(r, x);
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = b[i] - r[i];
    h_.restrict(l - 1, rc, r);
    xc.assign(rc.size(), Number(0));
    cycle(l - 1, rc, xc);
    h_.prolongate(l - 1, correction, xc);
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += correction[i];

    smoothers_[l].smooth(b, x);
  }

  /// dst = V(src) on the finest level, from a zero start.
  template <typename OuterNumber>
  void vmult(Vector<OuterNumber> &dst, const Vector<OuterNumber> &src) const
  {
    const unsigned L = h_.max_level();
    if (src.size() != h_.level_operator(L).n_dofs())
      throw LengthMismatch("V-cycle on " + std::to_string(h_.level_operator(L).n_dofs()) + " unknowns, got " +
                           std::to_string(src.size()));
    if constexpr (std::is_same_v<OuterNumber, Number>)
      {
        dst.assign(src.size(), Number(0));
        cycle(L, src, dst);
      }
    else
      {
        Vector<Number> x(src.size(), Number(0));
        cycle(L, vec::convert<Number>(src), x);
        dst = vec::convert<OuterNumber>(x);
      }
  }

private:
  void coarse_solve(const Vector<Number> &b, Vector<Number> &x) const
  {
    if (dense_coarse_)
      {
        Vector<double> xd;
        coarse_matrix_.cholesky_solve(xd, vec::convert<double>(b));
        x = vec::convert<Number>(xd);
        return;
      }
    SolverControl control;
    control.max_iterations = 10000;
    // single precision cannot reach the double tolerance
    control.rel_tolerance =
      std::max(data_.coarse_tolerance, 100. * double(std::numeric_limits<Number>::epsilon()));
    x.assign(b.size(), Number(0));
    solve_cg(h_.level_operator(0), x, b, coarse_preconditioner_, control);
  }

  const MGHierarchy<dim, Number> &h_;
  AdditionalData data_;
  std::vector<Smoother> smoothers_;
  bool dense_coarse_ = false;
  FullMatrix coarse_matrix_{0, 0};
  PreconditionJacobi<Number> coarse_preconditioner_;
};

/// CG on the finest level with one V-cycle as preconditioner.
template <int dim, typename Number, typename Operator>
SolverResult mg_preconditioned_cg(const VCycle<dim, Number> &vcycle, const Operator &A, Vector<double> &x,
                                  const Vector<double> &b, const double rel_tolerance,
                                  const unsigned max_iterations = 1000)
{
  SolverControl control;
  control.rel_tolerance  = rel_tolerance;
  control.max_iterations = max_iterations;
  return solve_cg(A, x, b, vcycle, control);
}

} // namespace felab
