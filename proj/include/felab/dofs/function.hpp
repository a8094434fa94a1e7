#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/tensor.hpp>

#include <functional>
#include <utility>

namespace felab
{

/// A scalar field u(x), optionally with its gradient.
template <int dim>
class ScalarFunction
{
public:
  using ValueFn    = std::function<double(const Point<dim> &)>;
  using GradientFn = std::function<Tensor1<dim>(const Point<dim> &)>;

  ScalarFunction() : value_([](const Point<dim> &) { return 0.; }) {}
  ScalarFunction(ValueFn value, GradientFn gradient = {}) : value_(std::move(value)), gradient_(std::move(gradient))
  {
  }

  static ScalarFunction constant(const double c)
  {
    return ScalarFunction([c](const Point<dim> &) { return c; }, [](const Point<dim> &) { return Tensor1<dim>(); });
  }

  double value(const Point<dim> &x) const { return value_(x); }
  double operator()(const Point<dim> &x) const { return value_(x); }

  bool has_gradient() const { return bool(gradient_); }
  Tensor1<dim> gradient(const Point<dim> &x) const
  {
    if (!gradient_)
      throw NotInitialized("function has no gradient");
    return gradient_(x);
  }

private:
  ValueFn value_;
  GradientFn gradient_;
};

} // namespace felab
