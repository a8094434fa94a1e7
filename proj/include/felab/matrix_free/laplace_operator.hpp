#pragma once

#include <felab/lac/vector.hpp>
#include <felab/matrix_free/matrix_free_data.hpp>

#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace felab
{

namespace matrix_free
{

/// out(r) = sum_c A(r, c) in(c) along one tensor direction, for all lanes.
/// A is M (n_rows x n_cols, row-major) or, with `transpose`, the transpose
/// of the n_cols x n_rows matrix M.
template <typename Number>
void apply_1d(const Number *M, const unsigned n_rows, const unsigned n_cols, const bool transpose,
              const std::size_t stride, const std::size_t n_outer, const Number *in, Number *out, const bool add,
              std::uint64_t *ops)
{
  for (std::size_t o = 0; o < n_outer; ++o)
    for (unsigned r = 0; r < n_rows; ++r)
      {
        Number *dst = out + (o * n_rows + r) * stride;
        if (!add)
          std::fill(dst, dst + stride, Number(0));
        for (unsigned c = 0; c < n_cols; ++c)
          {
            const Number a   = transpose ? M[c * n_rows + r] : M[r * n_cols + c];
            const Number *s  = in + (o * n_cols + c) * stride;
            for (std::size_t k = 0; k < stride; ++k)
              dst[k] += a * s[k];
          }
      }
  if (ops)
    *ops += n_outer * n_rows * n_cols * stride;
}

/// Thread count from FELAB_THREADS, else the given default.
inline unsigned threads_from_environment(const unsigned fallback = 1)
{
  if (const char *s = std::getenv("FELAB_THREADS"))
    {
      const int n = std::atoi(s);
      if (n >= 1)
        return unsigned(n);
    }
  return fallback;
}

} // namespace matrix_free

/// The Laplace operator (grad v, grad u) applied cell by cell with sum
/// factorization. Rows and columns of constrained unknowns act as identity.
template <int dim, typename Number = double>
class LaplaceOperatorMF
{
public:
  using value_type = Number;

  explicit LaplaceOperatorMF(MatrixFreeData<dim, Number> data)
    : data_(std::move(data)), n_threads_(matrix_free::threads_from_environment())
  {
  }

  const MatrixFreeData<dim, Number> &get_data() const { return data_; }
  std::size_t m() const { return data_.n_dofs(); }
  std::size_t n_dofs() const { return data_.n_dofs(); }

  void set_threads(const unsigned n) { n_threads_ = std::max(1u, n); }
  unsigned n_threads() const { return n_threads_; }

  /// Scratch arrays for one batch.
  struct Scratch
  {
    std::vector<Number> local_in, local_out, gradients, tmp0, tmp1;
  };

  Scratch make_scratch() const
  {
    const unsigned w   = data_.batch_width();
    std::size_t n_max = std::max(data_.dofs_per_cell(), data_.n_q_points());
    // intermediate tensors mix n_1d and n_q_1d extents
    std::size_t mixed = 1;
    for (int d = 0; d < dim; ++d)
      mixed *= std::max(data_.n_1d(), data_.n_q_1d());
    n_max = std::max(n_max, mixed);
    Scratch s;
    s.local_in.resize(data_.dofs_per_cell() * w);
    s.local_out.resize(data_.dofs_per_cell() * w);
    s.gradients.resize(dim * data_.n_q_points() * w);
    s.tmp0.resize(n_max * w);
    s.tmp1.resize(n_max * w);
    return s;
  }

  /// Local operator on one batch: local_out = K local_in lane by lane.
  void cell_kernel(const std::size_t b, Scratch &s, std::uint64_t *ops = nullptr) const
  {
    const unsigned w   = data_.batch_width();
    const unsigned n   = data_.n_1d();
    const unsigned nq  = data_.n_q_1d();
    const unsigned n_q = data_.n_q_points();
    const Number *V    = data_.shape_values().data();
    const Number *D    = data_.shape_gradients().data();
    std::uint64_t count = 0;

    // reference gradients at the quadrature points
    for (int d = 0; d < dim; ++d)
      {
        std::array<unsigned, dim> ext;
        ext.fill(n);
        const Number *src = s.local_in.data();
        for (int e = 0; e < dim; ++e)
          {
            std::size_t stride = w, outer = 1;
            for (int k = 0; k < e; ++k)
              stride *= ext[k];
            for (int k = e + 1; k < dim; ++k)
              outer *= ext[k];
            Number *dst = e == dim - 1 ? s.gradients.data() + d * n_q * w : (e % 2 ? s.tmp1 : s.tmp0).data();
            matrix_free::apply_1d(e == d ? D : V, nq, n, false, stride, outer, src, dst, false, &count);
            ext[e] = nq;
            src    = dst;
          }
      }

    // J^{-T} grad, scaled by JxW, then contracted back with J^{-T}
    const Number *jit = data_.inverse_jacobian_transpose_data(b);
    const Number *jxw = data_.jxw_data(b);
    for (unsigned q = 0; q < n_q; ++q)
      for (unsigned l = 0; l < w; ++l)
        {
          std::array<Number, dim> g, t;
          for (int d = 0; d < dim; ++d)
            g[d] = s.gradients[(d * n_q + q) * w + l];
          const Number *J = jit + q * dim * dim * w;
          for (int i = 0; i < dim; ++i)
            {
              Number v = 0;
              for (int j = 0; j < dim; ++j)
                v += J[(i * dim + j) * w + l] * g[j];
              t[i] = v * jxw[q * w + l];
            }
          for (int j = 0; j < dim; ++j)
            {
              Number v = 0;
              for (int i = 0; i < dim; ++i)
                v += J[(i * dim + j) * w + l] * t[i];
              s.gradients[(j * n_q + q) * w + l] = v;
            }
        }

    // test with the reference gradients
    for (int d = 0; d < dim; ++d)
      {
        std::array<unsigned, dim> ext;
        ext.fill(nq);
        const Number *src = s.gradients.data() + d * n_q * w;
        for (int e = 0; e < dim; ++e)
          {
            std::size_t stride = w, outer = 1;
            for (int k = 0; k < e; ++k)
              stride *= ext[k];
            for (int k = e + 1; k < dim; ++k)
              outer *= ext[k];
            const bool last = e == dim - 1;
            Number *dst     = last ? s.local_out.data() : (e % 2 ? s.tmp1 : s.tmp0).data();
            matrix_free::apply_1d(e == d ? D : V, n, nq, true, stride, outer, src, dst, last && d > 0, &count);
            ext[e] = n;
            src    = dst;
          }
      }
    // the counters above ran over all lanes
    if (ops)
      *ops += count / w;
  }

  /// local_in <- values of src at the local unknowns, constraints resolved.
  void gather(const std::size_t b, const Vector<Number> &src, Scratch &s) const
  {
    const unsigned w = data_.batch_width();
    for (unsigned l = 0; l < w; ++l)
      {
        const auto cell = data_.cell_of(b, l);
        for (unsigned i = 0; i < data_.dofs_per_cell(); ++i)
          {
            Number v = 0;
            for (const auto &e : data_.resolved(cell, i))
              v += e.coefficient * src[e.index];
            s.local_in[i * w + l] = v;
          }
      }
  }

  /// dst += C^T local_out over the filled lanes, in lane order.
  void scatter(const std::size_t b, const Scratch &s, Vector<Number> &dst, const Number sign = Number(1)) const
  {
    const unsigned w = data_.batch_width();
    for (unsigned l = 0; l < data_.n_filled_lanes(b); ++l)
      {
        const auto cell = data_.cell_of(b, l);
        for (unsigned i = 0; i < data_.dofs_per_cell(); ++i)
          {
            const Number v = sign * s.local_out[i * w + l];
            for (const auto &e : data_.resolved(cell, i))
              dst[e.index] += e.coefficient * v;
          }
      }
  }

  void vmult(Vector<Number> &dst, const Vector<Number> &src) const
  {
    if (src.size() != data_.n_dofs())
      throw LengthMismatch("source has " + std::to_string(src.size()) + " entries, operator has " +
                           std::to_string(data_.n_dofs()));
    dst.assign(data_.n_dofs(), Number(0));
    for_each_batch([&](const std::size_t b, Scratch &s) {
      gather(b, src, s);
      cell_kernel(b, s);
      scatter(b, s, dst);
    });
    for (const auto i : data_.constrained_dofs())
      dst[i] = src[i];
  }

  /// rhs -= C^T K g, where g holds the inhomogeneities of the constrained
  /// local unknowns. Moves Dirichlet data to the right-hand side.
  void subtract_inhomogeneous_action(Vector<Number> &rhs) const
  {
    if (rhs.size() != data_.n_dofs())
      throw LengthMismatch("right-hand side has " + std::to_string(rhs.size()) + " entries");
    if (!data_.has_inhomogeneities())
      return;
    const unsigned w = data_.batch_width();
    for_each_batch([&](const std::size_t b, Scratch &s) {
      for (unsigned l = 0; l < w; ++l)
        for (unsigned i = 0; i < data_.dofs_per_cell(); ++i)
          s.local_in[i * w + l] = data_.local_inhomogeneity(data_.cell_of(b, l), i);
      cell_kernel(b, s);
      scatter(b, s, rhs, Number(-1));
    });
  }

  /// Dense local matrices of a batch, [lane][i * dofs_per_cell + j], from
  /// the kernel applied to unit vectors.
  std::vector<std::vector<Number>> cell_matrices(const std::size_t b, Scratch &s) const
  {
    const unsigned w   = data_.batch_width();
    const unsigned dpc = data_.dofs_per_cell();
    std::vector<std::vector<Number>> K(w, std::vector<Number>(dpc * dpc));
    for (unsigned j = 0; j < dpc; ++j)
      {
        std::fill(s.local_in.begin(), s.local_in.end(), Number(0));
        for (unsigned l = 0; l < w; ++l)
          s.local_in[j * w + l] = 1;
        cell_kernel(b, s);
        for (unsigned l = 0; l < w; ++l)
          for (unsigned i = 0; i < dpc; ++i)
            K[l][i * dpc + j] = s.local_out[i * w + l];
      }
    return K;
  }

  /// Diagonal of the constrained operator; constrained entries are 1.
  Vector<Number> compute_diagonal() const
  {
    Vector<Number> diag(data_.n_dofs(), Number(0));
    const unsigned dpc = data_.dofs_per_cell();
    for_each_batch([&](const std::size_t b, Scratch &s) {
      const auto K = cell_matrices(b, s);
      for (unsigned l = 0; l < data_.n_filled_lanes(b); ++l)
        {
          const auto cell = data_.cell_of(b, l);
          for (unsigned i = 0; i < dpc; ++i)
            for (unsigned j = 0; j < dpc; ++j)
              {
                const Number k = K[l][i * dpc + j];
                for (const auto &ei : data_.resolved(cell, i))
                  for (const auto &ej : data_.resolved(cell, j))
                    if (ei.index == ej.index)
                      diag[ei.index] += ei.coefficient * k * ej.coefficient;
              }
        }
    });
    for (const auto i : data_.constrained_dofs())
      diag[i] = 1;
    return diag;
  }

  /// Multiply-adds of the 1d kernels for one cell.
  std::uint64_t kernel_operation_count() const
  {
    auto s = make_scratch();
    std::uint64_t ops = 0;
    cell_kernel(0, s, &ops);
    return ops;
  }

  /// Dense local matvec, the reference path for the kernel.
  static void dense_cell_apply(const std::vector<Number> &K, const std::vector<Number> &in, std::vector<Number> &out,
                               std::uint64_t *ops = nullptr)
  {
    const std::size_t n = in.size();
    out.assign(n, Number(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out[i] += K[i * n + j] * in[j];
    if (ops)
      *ops += n * n;
  }

private:
  /// Runs f(batch, scratch) over all batches, color by color. Batches of
  /// one color write to disjoint unknowns, so any split across threads gives
  /// the same result as the serial loop.
  template <typename F>
  void for_each_batch(F &&f) const
  {
    const unsigned nt = n_threads_;
    if (nt <= 1)
      {
        auto s = make_scratch();
        for (const auto &color : data_.colors())
          for (const auto b : color)
            f(b, s);
        return;
      }
    std::vector<Scratch> scratch;
    for (unsigned t = 0; t < nt; ++t)
      scratch.push_back(make_scratch());
    for (const auto &color : data_.colors())
      {
        std::vector<std::thread> workers;
        const std::size_t n = color.size();
        for (unsigned t = 0; t < nt; ++t)
          {
            const std::size_t begin = n * t / nt, end = n * (t + 1) / nt;
            if (begin == end)
              continue;
            workers.emplace_back([&, begin, end, t] {
              for (std::size_t k = begin; k < end; ++k)
                f(color[k], scratch[t]);
            });
          }
        for (auto &th : workers)
          th.join();
      }
  }

  MatrixFreeData<dim, Number> data_;
  unsigned n_threads_;
};

} // namespace felab
