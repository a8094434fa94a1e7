#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/lac/vector.hpp>

#include <string>

namespace felab
{

struct PreconditionIdentity
{
  template <typename Number>
  void vmult(Vector<Number> &dst, const Vector<Number> &src) const
  {
    dst = src;
  }
};

/// y_i = r_i / d_i.
template <typename Number = double>
class PreconditionJacobi
{
public:
  PreconditionJacobi() = default;
  explicit PreconditionJacobi(const Vector<Number> &diagonal) { initialize(diagonal); }

  void initialize(const Vector<Number> &diagonal)
  {
    inverse_.resize(diagonal.size());
    for (std::size_t i = 0; i < diagonal.size(); ++i)
      {
        if (!(diagonal[i] > 0))
          throw ZeroDiagonal("diagonal entry " + std::to_string(i) + " is " + std::to_string(diagonal[i]));
        inverse_[i] = Number(1) / diagonal[i];
      }
  }

  void vmult(Vector<Number> &dst, const Vector<Number> &src) const
  {
    vec::check_sizes(inverse_, src);
    dst.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] = inverse_[i] * src[i];
  }

  const Vector<Number> &inverse_diagonal() const { return inverse_; }

private:
  Vector<Number> inverse_;
};

} // namespace felab
