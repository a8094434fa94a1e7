// Area of the shell 0.5 < r < 1 computed with mappings of increasing degree.

#include <felab/fe/fe_values.hpp>
#include <felab/grid/generators.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>

using namespace felab;

int main()
{
  const double exact = std::numbers::pi * (1. - 0.25);
  std::printf("%6s %8s %14s %14s %14s %14s\n", "level", "cells", "Q1", "Q2", "Q3", "Q4");
  for (unsigned level = 0; level <= 4; ++level)
    {
      auto tria = grid::hyper_shell_2d(Point<2>(), 0.5, 1.0, 4);
      tria.refine_global(level);
      std::printf("%6u %8zu", level, tria.n_active_cells());
      for (unsigned m = 1; m <= 4; ++m)
        {
          const MappingQ<2> mapping(m);
          const FiniteElementQ<2> fe(1);
          const QGauss<2> quad(m + 2);
          FEValues<2> fev(mapping, fe, quad, update_JxW_values);
          double area = 0;
          for (const auto &cell : tria.active_cell_iterators())
            {
              fev.reinit(cell);
              for (unsigned q = 0; q < quad.size(); ++q)
                area += fev.JxW(q);
            }
          std::printf(" %14.6e", std::abs(area - exact) / exact);
        }
      std::printf("\n");
    }
}
