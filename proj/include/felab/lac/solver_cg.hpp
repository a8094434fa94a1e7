#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/lac/vector.hpp>

#include <functional>
#include <string>

namespace felab
{

struct SolverControl
{
  unsigned max_iterations = 1000;
  double rel_tolerance    = 1e-10;
};

struct SolverResult
{
  unsigned iterations   = 0;
  double initial_residual = 0;
  double final_residual = 0;
};

/// Preconditioned conjugate gradients for y = A x given through
/// A.vmult(y, x). Stops once |b - A x| <= rel_tolerance |b|, using the
/// recursively updated residual. x holds the start vector on entry.
template <typename Operator, typename Preconditioner, typename Number>
SolverResult solve_cg(const Operator &A, Vector<Number> &x, const Vector<Number> &b, const Preconditioner &P,
                      const SolverControl &control,
                      const std::function<void(unsigned, double, const Vector<Number> &)> &monitor = {})
{
  vec::check_sizes(x, b);
  SolverResult result;
  const double b_norm = vec::norm(b);
  Vector<Number> r(b.size()), z(b.size()), p(b.size()), Ap(b.size());
  A.vmult(Ap, x);
  for (std::size_t i = 0; i < b.size(); ++i)
    r[i] = b[i] - Ap[i];
  double res              = vec::norm(r);
  result.initial_residual = res;
  const double target     = control.rel_tolerance * b_norm;
  if (monitor)
    monitor(0, res, x);
  if (res <= target || res == 0)
    {
      result.final_residual = res;
      return result;
    }

  P.vmult(z, r);
  p            = z;
  Number rho   = vec::dot(r, z);
  for (unsigned it = 1; it <= control.max_iterations; ++it)
    {
      A.vmult(Ap, p);
      const Number pAp = vec::dot(p, Ap);
      if (!(pAp > 0) || !(rho > 0))
        throw BreakdownError("operator or preconditioner is not positive definite (p.Ap = " +
                             std::to_string(double(pAp)) + ")");
      const Number alpha = rho / pAp;
      vec::axpy(x, alpha, p);
      vec::axpy(r, -alpha, Ap);
      res = vec::norm(r);
      if (monitor)
        monitor(it, res, x);
      if (res <= target)
        {
          result.iterations     = it;
          result.final_residual = res;
          return result;
        }
      P.vmult(z, r);
      const Number rho_new = vec::dot(r, z);
      vec::xpby(p, z, rho_new / rho);
      rho = rho_new;
    }
  throw MaxIterations("no convergence in " + std::to_string(control.max_iterations) +
                      " iterations, residual " + std::to_string(res) + " > " + std::to_string(target));
}

} // namespace felab
