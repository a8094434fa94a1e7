#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/lac/sparsity_pattern.hpp>
#include <felab/lac/vector.hpp>

#include <memory>
#include <string>
#include <vector>

namespace felab
{

/// CSR matrix over a shared sparsity pattern.
template <typename Number = double>
class SparseMatrix
{
public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->n_nonzero_elements(), Number(0))
  {
  }

  const SparsityPattern &get_sparsity_pattern() const { return *pattern_; }
  types::global_index m() const { return pattern_->n_rows(); }
  std::size_t n_nonzero_elements() const { return values_.size(); }

  void add(const types::global_index i, const types::global_index j, const Number v)
  {
    const auto k = pattern_->find(i, j);
    if (k == std::size_t(-1))
      throw SparsityMiss("entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not in the pattern");
    values_[k] += v;
  }

  /// Entry (i,j); zero if it is not stored.
  Number el(const types::global_index i, const types::global_index j) const
  {
    const auto k = pattern_->find(i, j);
    return k == std::size_t(-1) ? Number(0) : values_[k];
  }

  Number diag_element(const types::global_index i) const { return el(i, i); }

  Vector<Number> diagonal() const
  {
    Vector<Number> d(m());
    for (types::global_index i = 0; i < m(); ++i)
      d[i] = el(i, i);
    return d;
  }

  void vmult(Vector<Number> &dst, const Vector<Number> &src) const
  {
    if (src.size() != m())
      throw LengthMismatch("matrix has " + std::to_string(m()) + " columns, vector " + std::to_string(src.size()));
    dst.resize(m());
    const auto &start = pattern_->row_start();
    const auto &cols  = pattern_->columns();
    for (types::global_index i = 0; i < m(); ++i)
      {
        Number s = 0;
        for (std::size_t k = start[i]; k < start[i + 1]; ++k)
          s += values_[k] * src[cols[k]];
        dst[i] = s;
      }
  }

  void set_zero() { std::fill(values_.begin(), values_.end(), Number(0)); }
  const std::vector<Number> &values() const { return values_; }

private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<Number> values_;
};

} // namespace felab
