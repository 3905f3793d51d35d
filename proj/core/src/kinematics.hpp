#pragma once

// Raw node-major kernels shared by fields, energies and dynamics. No
// validation here; callers own the shape checks.

#include <cstddef>
#include <span>
#include <vector>

#include "gll/geometry.hpp"
#include "gll/grid.hpp"

namespace gll::detail {

inline std::span<const double> at(std::span<const double> f, std::size_t i, std::size_t dim) {
    return f.subspan(i * dim, dim);
}
inline std::span<double> at(std::span<double> f, std::size_t i, std::size_t dim) {
    return f.subspan(i * dim, dim);
}

/// out = P_u(d_x v), pointwise tangent projection of the componentwise derivative.
void tangent_derivative(const PeriodicGrid& grid, std::size_t dim, std::span<const double> u,
                        std::span<const double> v, std::span<double> out, Scheme scheme);

/// levels[0] = u_x (projected), levels[l] = grad_x^l u_x for l <= depth.
struct CovariantJet {
    std::vector<std::vector<double>> levels;
};

void covariant_jet(const PeriodicGrid& grid, std::size_t dim, std::span<const double> u, int depth, Scheme scheme,
                   CovariantJet& jet);

/// sqrt(integral of |f_i|^2) for a node-major field.
double l2(const PeriodicGrid& grid, std::size_t dim, std::span<const double> f);

/// Integral of g(i) over the grid, accumulating in node order.
template <class F>
double quad(const PeriodicGrid& grid, F&& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n_points(); ++i) s += g(i);
    return grid.spacing() * s;
}

}  // namespace gll::detail
