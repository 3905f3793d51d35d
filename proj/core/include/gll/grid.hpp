#pragma once

// Uniform periodic grid on S^1 = R / 2piZ with spectral and fourth-order
// finite-difference differentiation.

#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace gll {

enum class Scheme { Spectral, Fd4 };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

namespace detail {
class FourierBackend;
}

class PeriodicGrid {
public:
    static constexpr std::size_t kMinPoints = 8;
    static constexpr double kLength = 2.0 * std::numbers::pi;

    /// Throws BadParams if n_points < 8.
    explicit PeriodicGrid(std::size_t n_points);

    std::size_t n_points() const noexcept { return n_; }
    double spacing() const noexcept { return kLength / static_cast<double>(n_); }
    double node(std::size_t i) const noexcept { return static_cast<double>(i) * spacing(); }
    std::vector<double> nodes() const;

    /// k-th derivative of a scalar field. Spectral: mode m is multiplied by
    /// (i m)^k, Nyquist zeroed for odd k. Fd4: the 5-point stencil applied k times.
    std::vector<double> derivative(std::span<const double> f, int order, Scheme scheme = Scheme::Spectral) const;

    /// Componentwise derivatives of a node-major field with `dim` components per
    /// node. One forward transform per component serves every requested order.
    /// outs[j] receives the orders[j]-th derivative (node-major, same shape).
    void derivatives(std::span<const double> data, std::size_t dim, std::span<const int> orders,
                     std::span<const std::span<double>> outs, Scheme scheme = Scheme::Spectral) const;

    /// Equal-weight rule h * sum f_i.
    double integrate(std::span<const double> f) const;

    friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) { return a.n_ == b.n_; }

private:
    std::size_t n_;
    std::shared_ptr<const detail::FourierBackend> fft_;
};

}  // namespace gll
