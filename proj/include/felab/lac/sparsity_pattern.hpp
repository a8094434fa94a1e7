#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/types.hpp>

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace felab
{

/// Row-wise collection of column indices while entries are still being
/// inserted in random order.
class DynamicSparsityPattern
{
public:
  explicit DynamicSparsityPattern(const types::global_index n = 0) : rows_(n) {}

  types::global_index n_rows() const { return rows_.size(); }

  void add(const types::global_index i, const types::global_index j)
  {
    if (i >= rows_.size() || j >= rows_.size())
      throw IndexError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                       std::to_string(rows_.size()));
    rows_[i].push_back(j);
  }

  /// Adds all pairs of the given indices.
  void add_block(std::span<const types::global_index> indices)
  {
    for (const auto i : indices)
      for (const auto j : indices)
        add(i, j);
  }

  std::vector<types::global_index> &row(const types::global_index i) { return rows_[i]; }

private:
  std::vector<std::vector<types::global_index>> rows_;
};

/// Compressed row storage: sorted, deduplicated column indices per row.
class SparsityPattern
{
public:
  SparsityPattern() = default;

  explicit SparsityPattern(DynamicSparsityPattern dsp)
  {
    const auto n = dsp.n_rows();
    row_start_.assign(n + 1, 0);
    for (types::global_index i = 0; i < n; ++i)
      {
        auto &r = dsp.row(i);
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        row_start_[i + 1] = row_start_[i] + r.size();
      }
    columns_.reserve(row_start_[n]);
    for (types::global_index i = 0; i < n; ++i)
      columns_.insert(columns_.end(), dsp.row(i).begin(), dsp.row(i).end());
  }

  types::global_index n_rows() const { return row_start_.empty() ? 0 : row_start_.size() - 1; }
  std::size_t n_nonzero_elements() const { return columns_.size(); }
  std::size_t row_length(const types::global_index i) const { return row_start_[i + 1] - row_start_[i]; }

  std::span<const types::global_index> row(const types::global_index i) const
  {
    return {columns_.data() + row_start_[i], row_length(i)};
  }

  /// Position of (i,j) in the value array, or invalid_index.
  std::size_t find(const types::global_index i, const types::global_index j) const
  {
    const auto r  = row(i);
    const auto it = std::lower_bound(r.begin(), r.end(), j);
    if (it == r.end() || *it != j)
      return std::size_t(-1);
    return row_start_[i] + (it - r.begin());
  }

  bool exists(const types::global_index i, const types::global_index j) const
  {
    return find(i, j) != std::size_t(-1);
  }

  bool is_symmetric() const
  {
    for (types::global_index i = 0; i < n_rows(); ++i)
      for (const auto j : row(i))
        if (!exists(j, i))
          return false;
    return true;
  }

  const std::vector<std::size_t> &row_start() const { return row_start_; }
  const std::vector<types::global_index> &columns() const { return columns_; }

private:
  std::vector<std::size_t> row_start_;
  std::vector<types::global_index> columns_;
};

} // namespace felab
