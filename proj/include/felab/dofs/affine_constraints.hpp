#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/base/types.hpp>

#include <algorithm>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace felab
{

/// Affine relations x_i = sum_j c_ij x_j + b_i for a subset of unknowns.
///
/// Lines are added while open; close() substitutes constrained unknowns on
/// right-hand sides until none is left, so that every stored line refers to
/// unconstrained unknowns only.
template <typename Number = double>
class AffineConstraints
{
public:
  using Entry = std::pair<types::global_index, Number>;

  struct Line
  {
    types::global_index index;
    std::vector<Entry> entries;
    Number inhomogeneity = 0;
  };

  AffineConstraints() = default;

  /// Converts between precisions (used by single-precision smoothers).
  template <typename Other>
  explicit AffineConstraints(const AffineConstraints<Other> &other) : closed_(other.is_closed())
  {
    for (const auto &l : other.get_lines())
      {
        Line line{l.index, {}, Number(l.inhomogeneity)};
        for (const auto &[j, c] : l.entries)
          line.entries.emplace_back(j, Number(c));
        position_[line.index] = lines_.size();
        lines_.push_back(std::move(line));
      }
  }

  /// Adds a constraint unless the unknown is already constrained; returns
  /// whether the line was added.
  bool add_constraint(const types::global_index i, std::vector<Entry> entries, const Number inhomogeneity = 0)
  {
    if (is_constrained(i))
      return false;
    for (const auto &e : entries)
      if (e.first == i)
        throw ConstraintCycle("unknown " + std::to_string(i) + " constrained to itself");
    position_[i] = lines_.size();
    lines_.push_back(Line{i, std::move(entries), inhomogeneity});
    closed_ = false;
    return true;
  }

  bool is_constrained(const types::global_index i) const { return position_.count(i) != 0; }

  const Line *line(const types::global_index i) const
  {
    const auto it = position_.find(i);
    return it == position_.end() ? nullptr : &lines_[it->second];
  }

  Number inhomogeneity(const types::global_index i) const
  {
    const auto *l = line(i);
    return l ? l->inhomogeneity : Number(0);
  }

  bool is_inhomogeneously_constrained(const types::global_index i) const { return inhomogeneity(i) != Number(0); }
  bool has_inhomogeneities() const
  {
    return std::any_of(lines_.begin(), lines_.end(), [](const Line &l) { return l.inhomogeneity != Number(0); });
  }

  std::size_t n_constraints() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }
  bool is_closed() const { return closed_; }

  /// Lines sorted by constrained index once closed.
  const std::vector<Line> &get_lines() const { return lines_; }

  void clear()
  {
    lines_.clear();
    position_.clear();
    closed_ = false;
  }

  /// Resolves chains. Throws ConstraintCycle if some unknown depends on
  /// itself through other constraints.
  void close()
  {
    std::vector<char> state(lines_.size(), 0); // 0 open, 1 in progress, 2 done
    for (std::size_t k = 0; k < lines_.size(); ++k)
      resolve(k, state);
    std::sort(lines_.begin(), lines_.end(), [](const Line &a, const Line &b) { return a.index < b.index; });
    position_.clear();
    for (std::size_t k = 0; k < lines_.size(); ++k)
      position_[lines_[k].index] = k;
    closed_ = true;
  }

  /// Overwrites every constrained entry of x with its constraint value.
  template <typename Vector>
  void distribute(Vector &x) const
  {
    check_closed();
    for (const auto &l : lines_)
      {
        Number v = l.inhomogeneity;
        for (const auto &[j, c] : l.entries)
          v += c * x[j];
        x[l.index] = v;
      }
  }

  template <typename Vector>
  void set_zero(Vector &x) const
  {
    for (const auto &l : lines_)
      x[l.index] = 0;
  }

private:
  void check_closed() const
  {
    if (!closed_)
      throw NotInitialized("constraints must be closed before use");
  }

  void resolve(const std::size_t k, std::vector<char> &state)
  {
    if (state[k] == 2)
      return;
    if (state[k] == 1)
      throw ConstraintCycle("constraint chain through unknown " + std::to_string(lines_[k].index) +
                            " is circular");
    state[k] = 1;

    std::vector<Entry> resolved;
    Number inhom = lines_[k].inhomogeneity;
    for (const auto &[j, c] : lines_[k].entries)
      {
        const auto it = position_.find(j);
        if (it == position_.end())
          {
            resolved.emplace_back(j, c);
            continue;
          }
        resolve(it->second, state);
        const auto &other = lines_[it->second];
        for (const auto &[jj, cc] : other.entries)
          resolved.emplace_back(jj, c * cc);
        inhom += c * other.inhomogeneity;
      }

    std::sort(resolved.begin(), resolved.end(),
              [](const Entry &a, const Entry &b) { return a.first < b.first; });
    std::vector<Entry> merged;
    for (const auto &e : resolved)
      {
        if (!merged.empty() && merged.back().first == e.first)
          merged.back().second += e.second;
        else
          merged.push_back(e);
      }
    std::erase_if(merged, [](const Entry &e) { return e.second == Number(0); });
    lines_[k].entries       = std::move(merged);
    lines_[k].inhomogeneity = inhom;
    state[k]                = 2;
  }

  std::vector<Line> lines_;
  std::unordered_map<types::global_index, std::size_t> position_;
  bool closed_ = false;
};

} // namespace felab
