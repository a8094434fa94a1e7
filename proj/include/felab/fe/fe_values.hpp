#pragma once

#include <felab/base/exceptions.hpp>
#include <felab/fe/fe_q.hpp>
#include <felab/fe/mapping_q.hpp>
#include <felab/fe/quadrature.hpp>
#include <felab/grid/triangulation.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace felab
{

enum UpdateFlags : unsigned
{
  update_default           = 0,
  update_values            = 1u << 0,
  update_gradients         = 1u << 1,
  update_JxW_values        = 1u << 2,
  update_quadrature_points = 1u << 3,
};

constexpr UpdateFlags operator|(const UpdateFlags a, const UpdateFlags b)
{
  return UpdateFlags(unsigned(a) | unsigned(b));
}

/// Shape functions of a finite element, transformed to the current cell and
/// evaluated at the quadrature points.
///
/// Everything that depends on the reference cell only (shape values and
/// gradients, mapping basis) is tabulated once in the constructor; reinit()
/// only computes the cell-dependent quantities that were requested. One
/// object per thread.
template <int dim>
class FEValues
{
public:
  FEValues(const MappingQ<dim> &mapping, const FiniteElementQ<dim> &fe, const QGauss<dim> &quadrature,
           const UpdateFlags flags)
    : mapping_(mapping), fe_(fe), quadrature_(quadrature), flags_(flags),
      n_q_(quadrature.size()), n_dofs_(fe.dofs_per_cell())
  {
    build_reference_tables();
    const bool need_geometry = flags & (update_gradients | update_JxW_values);
    if (need_geometry)
      {
        jxw_.resize(n_q_);
        inverse_jacobian_t_.resize(n_q_);
      }
    if (flags & update_gradients)
      gradients_.resize(n_q_ * n_dofs_);
    if (flags & update_quadrature_points)
      points_.resize(n_q_);
  }

  unsigned n_quadrature_points() const { return n_q_; }
  unsigned dofs_per_cell() const { return n_dofs_; }
  const FiniteElementQ<dim> &get_fe() const { return fe_; }
  const MappingQ<dim> &get_mapping() const { return mapping_; }
  const QGauss<dim> &get_quadrature() const { return quadrature_; }

  void reinit(const CellAccessor<dim> &cell)
  {
    const auto data = mapping_.cell_data(cell);
    for (unsigned q = 0; q < n_q_; ++q)
      {
        if (flags_ & update_quadrature_points)
          points_[q] = mapping_.transform(data, mapping_tables_, q);
        if (flags_ & (update_gradients | update_JxW_values))
          {
            const Tensor2<dim> J = mapping_.jacobian(data, mapping_tables_, q);
            jxw_[q]              = std::abs(J.determinant()) * quadrature_.weight(q);
            const auto inv_t     = invert(J).transpose();
            inverse_jacobian_t_[q] = inv_t;
            if (flags_ & update_gradients)
              for (unsigned i = 0; i < n_dofs_; ++i)
                gradients_[q * n_dofs_ + i] = contract(inv_t, ref_gradients_[q * n_dofs_ + i]);
          }
      }
    cell_     = cell;
    has_cell_ = true;
  }

  double shape_value(const unsigned i, const unsigned q) const
  {
    check(update_values, "values", i, q);
    return ref_values_[q * n_dofs_ + i];
  }

  const Tensor1<dim> &shape_grad(const unsigned i, const unsigned q) const
  {
    check(update_gradients, "gradients", i, q);
    return gradients_[q * n_dofs_ + i];
  }

  double JxW(const unsigned q) const
  {
    check(update_JxW_values, "JxW values", 0, q);
    return jxw_[q];
  }

  const Point<dim> &quadrature_point(const unsigned q) const
  {
    check(update_quadrature_points, "quadrature points", 0, q);
    return points_[q];
  }

  /// J^{-T} at quadrature point q; available with gradients or JxW values.
  const Tensor2<dim> &inverse_jacobian_transpose(const unsigned q) const
  {
    check(flags_ & update_JxW_values ? update_JxW_values : update_gradients, "gradients", 0, q);
    return inverse_jacobian_t_[q];
  }

  const CellAccessor<dim> &present_cell() const
  {
    if (!has_cell_)
      throw NotInitialized("reinit() has not been called");
    return cell_;
  }

  /// Reference-cell shape data, q-major: [q * dofs_per_cell + i].
  const std::vector<double> &reference_values() const { return ref_values_; }
  const std::vector<Tensor1<dim>> &reference_gradients() const { return ref_gradients_; }
  /// How often the reference tables were computed; stays at one.
  unsigned reference_table_builds() const { return table_builds_; }

private:
  void build_reference_tables()
  {
    ref_values_.resize(n_q_ * n_dofs_);
    ref_gradients_.resize(n_q_ * n_dofs_);
    for (unsigned q = 0; q < n_q_; ++q)
      for (unsigned i = 0; i < n_dofs_; ++i)
        {
          ref_values_[q * n_dofs_ + i]    = fe_.shape_value(i, quadrature_.point(q));
          ref_gradients_[q * n_dofs_ + i] = fe_.shape_grad(i, quadrature_.point(q));
        }
    mapping_tables_ = mapping_.tabulate(quadrature_.points());
    ++table_builds_;
  }

  void check(const unsigned flag, const char *what, const unsigned i, const unsigned q) const
  {
    if (!(flags_ & flag))
      throw MissingUpdateFlag(std::string(what) + " were not requested at construction");
    if (!has_cell_)
      throw NotInitialized("reinit() has not been called");
    if (i >= n_dofs_ || q >= n_q_)
      throw IndexError("shape function " + std::to_string(i) + " / quadrature point " + std::to_string(q));
  }

  const MappingQ<dim> &mapping_;
  const FiniteElementQ<dim> &fe_;
  const QGauss<dim> &quadrature_;
  UpdateFlags flags_;
  unsigned n_q_, n_dofs_;

  std::vector<double> ref_values_;
  std::vector<Tensor1<dim>> ref_gradients_;
  typename MappingQ<dim>::Tables mapping_tables_;
  unsigned table_builds_ = 0;

  std::vector<Tensor1<dim>> gradients_;
  std::vector<double> jxw_;
  std::vector<Tensor2<dim>> inverse_jacobian_t_;
  std::vector<Point<dim>> points_;
  CellAccessor<dim> cell_;
  bool has_cell_ = false;
};

} // namespace felab
