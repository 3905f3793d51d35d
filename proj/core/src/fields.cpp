#include "gll/fields.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gll/error.hpp"
#include "kinematics.hpp"

namespace gll {

namespace detail {

void tangent_derivative(const PeriodicGrid& grid, std::size_t dim, std::span<const double> u,
                        std::span<const double> v, std::span<double> out, Scheme scheme) {
    const int order[] = {1};
    const std::span<double> outs[] = {out};
    grid.derivatives(v, dim, order, outs, scheme);
    for (std::size_t i = 0; i < grid.n_points(); ++i) kernel::remove_normal(at(u, i, dim), at(out, i, dim));
}

void covariant_jet(const PeriodicGrid& grid, std::size_t dim, std::span<const double> u, int depth, Scheme scheme,
                   CovariantJet& jet) {
    jet.levels.resize(static_cast<std::size_t>(depth) + 1);
    for (auto& l : jet.levels) l.resize(u.size());
    tangent_derivative(grid, dim, u, u, jet.levels[0], scheme);
    for (int l = 1; l <= depth; ++l) {
        tangent_derivative(grid, dim, u, jet.levels[l - 1], jet.levels[l], scheme);
    }
}

double l2(const PeriodicGrid& grid, std::size_t dim, std::span<const double> f) {
    return std::sqrt(quad(grid, [&](std::size_t i) {
        const auto fi = at(f, i, dim);
        return kernel::dot(fi, fi);
    }));
}

}  // namespace detail

namespace {

std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
}

void check_shape(const PeriodicGrid& grid, std::size_t dim, std::size_t size) {
    if (dim < 2) throw Error(ErrorCode::WrongDimension, "ambient dimension must be at least 2");
    if (size != grid.n_points() * dim) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(grid.n_points() * dim) +
                                                      " samples, got " + std::to_string(size));
    }
}

void check_base(const SphereField& u, const TangentField& v) {
    if (v.base_id() != u.id()) throw Error(ErrorCode::BaseMismatch, "tangent field is not based on this map");
}

std::vector<double> fourier_noise(const PeriodicGrid& grid, std::size_t dim, std::uint64_t seed,
                                  const RandomFieldOptions& opt) {
    if (opt.n_modes < 1 || !(opt.amplitude >= 0.0) || !std::isfinite(opt.decay)) {
        throw Error(ErrorCode::BadParams, "random field needs n_modes >= 1, amplitude >= 0, finite decay");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const std::size_t n = grid.n_points();
    std::vector<double> out(n * dim, 0.0);
    for (std::size_t c = 0; c < dim; ++c) {
        for (int m = 1; m <= opt.n_modes; ++m) {
            const double a = opt.amplitude * std::pow(static_cast<double>(m), -opt.decay);
            const double ph = phase(rng);
            for (std::size_t i = 0; i < n; ++i) out[i * dim + c] += a * std::cos(m * grid.node(i) + ph);
        }
    }
    return out;
}

}  // namespace

SphereField::SphereField(PeriodicGrid grid, std::size_t sphere_dim, std::vector<double> samples, double unit_tol)
    : grid_(std::move(grid)), dim_(sphere_dim + 1), s_(std::move(samples)), id_(next_id()) {
    check_shape(grid_, dim_, s_.size());
    for (std::size_t i = 0; i < n_points(); ++i) {
        const double len = kernel::norm(node(i));
        if (!(std::abs(len - 1.0) <= unit_tol)) {
            throw Error(ErrorCode::NotUnit, "sample " + std::to_string(i) + " has length " + std::to_string(len));
        }
    }
}

SphereField::SphereField(PeriodicGrid grid, std::size_t ambient_dim, std::vector<double> samples, std::uint64_t id)
    : grid_(std::move(grid)), dim_(ambient_dim), s_(std::move(samples)), id_(id) {}

SphereField SphereField::project(PeriodicGrid grid, std::size_t sphere_dim, std::vector<double> raw) {
    const std::size_t dim = sphere_dim + 1;
    check_shape(grid, dim, raw.size());
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
        auto p = detail::at(std::span<double>(raw), i, dim);
        const double len = kernel::norm(p);
        if (!(len >= kDefaultZeroFloor)) {
            throw Error(ErrorCode::ZeroVector, "sample " + std::to_string(i) + " has length " + std::to_string(len));
        }
        for (double& x : p) x /= len;
    }
    return SphereField(std::move(grid), dim, std::move(raw), next_id());
}

SphereField SphereField::sample(PeriodicGrid grid, std::size_t sphere_dim,
                                const std::function<void(double, std::span<double>)>& f) {
    const std::size_t dim = sphere_dim + 1;
    std::vector<double> raw(grid.n_points() * dim, 0.0);
    for (std::size_t i = 0; i < grid.n_points(); ++i) f(grid.node(i), detail::at(std::span<double>(raw), i, dim));
    return project(std::move(grid), sphere_dim, std::move(raw));
}

SphereField SphereField::constant(PeriodicGrid grid, const AmbientVector& p) {
    if (p.dim() < 2) throw Error(ErrorCode::WrongDimension, "ambient dimension must be at least 2");
    std::vector<double> raw;
    raw.reserve(grid.n_points() * p.dim());
    for (std::size_t i = 0; i < grid.n_points(); ++i) raw.insert(raw.end(), p.components().begin(), p.components().end());
    return project(std::move(grid), p.dim() - 1, std::move(raw));
}

double SphereField::constraint_error() const {
    double e = 0.0;
    for (std::size_t i = 0; i < n_points(); ++i) e = std::max(e, std::abs(kernel::norm(node(i)) - 1.0));
    return e;
}

TangentField::TangentField(Unchecked, const SphereField& base, std::vector<double> samples)
    : grid_(base.grid()), dim_(base.ambient_dim()), base_id_(base.id()), s_(std::move(samples)) {
    check_shape(grid_, dim_, s_.size());
}

TangentField::TangentField(const SphereField& base, std::vector<double> samples)
    : TangentField(Unchecked{}, base, std::move(samples)) {
    for (std::size_t i = 0; i < n_points(); ++i) {
        const double normal = std::abs(kernel::dot(base.node(i), node(i)));
        if (normal > kTangencyTolerance * (1.0 + kernel::norm(node(i)))) {
            throw Error(ErrorCode::NotTangent,
                        "sample " + std::to_string(i) + " has normal component " + std::to_string(normal));
        }
    }
}

TangentField TangentField::project(const SphereField& base, std::vector<double> raw) {
    check_shape(base.grid(), base.ambient_dim(), raw.size());
    const std::size_t dim = base.ambient_dim();
    for (std::size_t i = 0; i < base.n_points(); ++i) {
        kernel::remove_normal(base.node(i), detail::at(std::span<double>(raw), i, dim));
    }
    return TangentField(Unchecked{}, base, std::move(raw));
}

TangentField TangentField::zero(const SphereField& base) {
    return TangentField(Unchecked{}, base, std::vector<double>(base.data().size(), 0.0));
}

TangentField TangentField::assume_tangent(const SphereField& base, std::vector<double> samples) {
    return TangentField(Unchecked{}, base, std::move(samples));
}

TangentField TangentField::scaled(double lambda) const {
    TangentField r = *this;
    for (double& x : r.s_) x *= lambda;
    return r;
}

TangentField map_derivative(const SphereField& u, Scheme scheme) {
    std::vector<double> out(u.data().size());
    detail::tangent_derivative(u.grid(), u.ambient_dim(), u.data(), u.data(), out, scheme);
    return TangentField::project(u, std::move(out));
}

TangentField covariant_derivative(const SphereField& u, const TangentField& v, Scheme scheme) {
    check_base(u, v);
    std::vector<double> out(u.data().size());
    detail::tangent_derivative(u.grid(), u.ambient_dim(), u.data(), v.data(), out, scheme);
    return TangentField::project(u, std::move(out));
}

TangentField covariant_derivative_iter(const SphereField& u, const TangentField& v, int k, Scheme scheme) {
    if (k < 0) throw Error(ErrorCode::BadOrder, "iteration count must be >= 0, got " + std::to_string(k));
    check_base(u, v);
    TangentField cur = v;
    for (int l = 0; l < k; ++l) cur = covariant_derivative(u, cur, scheme);
    return cur;
}

double sobolev_h(const SphereField& u, int k, Scheme scheme) {
    if (k < 0) throw Error(ErrorCode::BadOrder, "norm order must be >= 0");
    detail::CovariantJet jet;
    detail::covariant_jet(u.grid(), u.ambient_dim(), u.data(), k, scheme, jet);
    double s = 0.0;
    for (const auto& level : jet.levels) s += detail::l2(u.grid(), u.ambient_dim(), level);
    return s;
}

double sobolev_w(const SphereField& u, int k, Scheme scheme) {
    if (k < 0) throw Error(ErrorCode::BadOrder, "norm order must be >= 0");
    std::vector<int> orders;
    for (int l = 0; l <= k; ++l) orders.push_back(l + 1);
    std::vector<std::vector<double>> bufs(orders.size(), std::vector<double>(u.data().size()));
    std::vector<std::span<double>> outs(bufs.begin(), bufs.end());
    u.grid().derivatives(u.data(), u.ambient_dim(), orders, outs, scheme);
    double s = 0.0;
    for (const auto& b : bufs) s += detail::l2(u.grid(), u.ambient_dim(), b);
    return s;
}

double l2_norm(const TangentField& v) { return detail::l2(v.grid(), v.ambient_dim(), v.data()); }

double sup_norm(const TangentField& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.n_points(); ++i) m = std::max(m, kernel::norm(v.node(i)));
    return m;
}

double sup_norm(std::span<const double> f) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

double interpolation_ratio(const SphereField& u, const TangentField& v, Scheme scheme) {
    check_base(u, v);
    const double l2v = l2_norm(v);
    if (!(l2v > 0.0)) throw Error(ErrorCode::ZeroSection, "section has zero L2 norm");
    const double h12 = l2v + l2_norm(covariant_derivative(u, v, scheme));
    return sup_norm(v) / (std::sqrt(h12) * std::sqrt(l2v));
}

SphereField random_smooth_field(const PeriodicGrid& grid, std::size_t sphere_dim, std::uint64_t seed,
                                const RandomFieldOptions& options) {
    const std::size_t dim = sphere_dim + 1;
    if (dim < 2) throw Error(ErrorCode::WrongDimension, "ambient dimension must be at least 2");
    std::vector<double> raw = fourier_noise(grid, dim, seed, options);
    for (std::size_t i = 0; i < grid.n_points(); ++i) raw[i * dim] += 1.0;
    return SphereField::project(grid, sphere_dim, std::move(raw));
}

TangentField random_tangent_section(const SphereField& u, std::uint64_t seed, const RandomFieldOptions& options) {
    return TangentField::project(u, fourier_noise(u.grid(), u.ambient_dim(), seed, options));
}

}  // namespace gll
