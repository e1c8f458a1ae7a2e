#pragma once

#include <span>

#include "fejer/index_core.hpp"

namespace fejer {

// Kernels on the unit-period torus (characters e^{2 pi i n t}).

// D_l(t) = sum_{|r| <= l} e^{2 pi i r t} = sin((2l+1) pi t) / sin(pi t).
double dirichlet(int l, double t);

// K_l(t) = (D_0 + ... + D_l)(t) / (l+1)
//        = (sin((l+1) pi t) / sin(pi t))^2 / (l+1).
double fejer(int l, double t);

// prod_j K_{N_j}(x_j - t_j). x and t must both have length rect.p().
double kernel_tensor(const RectIndex& rect, std::span<const double> x,
                     std::span<const double> t);

// Representative of t modulo 1 in [-1/2, 1/2).
double wrap_centered(double t);

}  // namespace fejer
