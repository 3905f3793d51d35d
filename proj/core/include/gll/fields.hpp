#pragma once

// Sampled maps S^1 -> S^n, sections of the pull-back bundle u*TS^n, the
// covariant derivative along x, and the two Sobolev norm families.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gll/geometry.hpp"
#include "gll/grid.hpp"

namespace gll {

inline constexpr double kTangencyTolerance = 1e-7;

/// A map S^1 -> S^n sampled at the grid nodes. Node-major storage: sample i
/// occupies [i*(n+1), (i+1)*(n+1)).
class SphereField {
public:
    /// Validates every sample is within unit_tol of the unit sphere (NotUnit otherwise).
    SphereField(PeriodicGrid grid, std::size_t sphere_dim, std::vector<double> samples,
                double unit_tol = kDefaultUnitTolerance);

    /// Normalizes each sample of `raw` onto the sphere. ZeroVector if any sample vanishes.
    static SphereField project(PeriodicGrid grid, std::size_t sphere_dim, std::vector<double> raw);

    /// Samples f(x_i) and projects to the sphere.
    static SphereField sample(PeriodicGrid grid, std::size_t sphere_dim,
                              const std::function<void(double, std::span<double>)>& f);

    static SphereField constant(PeriodicGrid grid, const AmbientVector& p);

    const PeriodicGrid& grid() const noexcept { return grid_; }
    std::size_t n_points() const noexcept { return grid_.n_points(); }
    std::size_t sphere_dim() const noexcept { return dim_ - 1; }
    std::size_t ambient_dim() const noexcept { return dim_; }
    std::span<const double> data() const noexcept { return s_; }
    std::span<const double> node(std::size_t i) const { return {s_.data() + i * dim_, dim_}; }
    AmbientVector at(std::size_t i) const { return AmbientVector(node(i)); }

    /// max_i ||u_i| - 1|
    double constraint_error() const;

    /// Identity tag used to match tangent fields to their base map. Copies share it.
    std::uint64_t id() const noexcept { return id_; }

private:
    SphereField(PeriodicGrid grid, std::size_t ambient_dim, std::vector<double> samples, std::uint64_t id);

    PeriodicGrid grid_;
    std::size_t dim_;
    std::vector<double> s_;
    std::uint64_t id_;
};

/// A section of u*TS^n sampled at the grid nodes, tied to its base map.
class TangentField {
public:
    /// Throws NotTangent if |(u_i, V_i)| > kTangencyTolerance * (1 + |V_i|) at any node.
    TangentField(const SphereField& base, std::vector<double> samples);

    /// Projects each sample of `raw` onto the tangent space at the base point.
    static TangentField project(const SphereField& base, std::vector<double> raw);
    static TangentField zero(const SphereField& base);
    /// Adopts samples that are tangent up to discretization error without
    /// checking (ambient-formula right-hand sides, finite-difference schemes).
    static TangentField assume_tangent(const SphereField& base, std::vector<double> samples);

    const PeriodicGrid& grid() const noexcept { return grid_; }
    std::size_t n_points() const noexcept { return grid_.n_points(); }
    std::size_t ambient_dim() const noexcept { return dim_; }
    std::uint64_t base_id() const noexcept { return base_id_; }
    std::span<const double> data() const noexcept { return s_; }
    std::span<const double> node(std::size_t i) const { return {s_.data() + i * dim_, dim_}; }
    AmbientVector at(std::size_t i) const { return AmbientVector(node(i)); }

    TangentField scaled(double lambda) const;

private:
    struct Unchecked {};
    TangentField(Unchecked, const SphereField& base, std::vector<double> samples);

    PeriodicGrid grid_;
    std::size_t dim_;
    std::uint64_t base_id_;
    std::vector<double> s_;
};

TangentField map_derivative(const SphereField& u, Scheme scheme = Scheme::Spectral);
/// grad_x V = d_x V - (u, d_x V) u. BaseMismatch if V is not based on u.
TangentField covariant_derivative(const SphereField& u, const TangentField& v, Scheme scheme = Scheme::Spectral);
TangentField covariant_derivative_iter(const SphereField& u, const TangentField& v, int k,
                                       Scheme scheme = Scheme::Spectral);

/// sum_{l=0}^{k} || grad_x^l u_x ||_{L^2}
double sobolev_h(const SphereField& u, int k, Scheme scheme = Scheme::Spectral);
/// sum_{l=0}^{k} || d_x^l u_x ||_{L^2}
double sobolev_w(const SphereField& u, int k, Scheme scheme = Scheme::Spectral);

double l2_norm(const TangentField& v);
double sup_norm(const TangentField& v);
double sup_norm(std::span<const double> scalar_field);

/// ||V||_inf / (||V||_{H^{1,2}}^{1/2} ||V||_{L^2}^{1/2}); ZeroSection if ||V||_{L^2} = 0.
double interpolation_ratio(const SphereField& u, const TangentField& v, Scheme scheme = Scheme::Spectral);

/// Fourier-decay generator: each ambient component gets
/// amplitude * sum_{m=1}^{n_modes} m^{-decay} cos(m x + phase), phases uniform.
struct RandomFieldOptions {
    int n_modes = 8;
    double amplitude = 0.5;
    double decay = 3.0;
};

/// base + Fourier noise, projected to the sphere; base defaults to e_0.
SphereField random_smooth_field(const PeriodicGrid& grid, std::size_t sphere_dim, std::uint64_t seed,
                                const RandomFieldOptions& options = {});
/// Fourier noise projected onto the tangent spaces of u.
TangentField random_tangent_section(const SphereField& u, std::uint64_t seed, const RandomFieldOptions& options = {});

}  // namespace gll
