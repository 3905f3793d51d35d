#include "gll/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include "gll/error.hpp"

namespace gll {

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::Spectral: return "spectral";
        case Scheme::Fd4: return "fd4";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "spectral") return Scheme::Spectral;
    if (name == "fd4") return Scheme::Fd4;
    throw Error(ErrorCode::SchemeUnavailable, "unknown scheme '" + std::string(name) + "'");
}

namespace detail {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

// Planning is not thread safe in FFTW; execution through the new-array
// interface is, so plans are made once under a lock and shared.
class FourierBackend {
public:
    explicit FourierBackend(std::size_t n) : n_(n) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        std::vector<double> r(n);
        std::vector<std::complex<double>> c(n / 2 + 1);
        auto* cp = reinterpret_cast<fftw_complex*>(c.data());
        const int ni = static_cast<int>(n);
        forward_ = fftw_plan_dft_r2c_1d(ni, r.data(), cp, FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward_ = fftw_plan_dft_c2r_1d(ni, cp, r.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~FourierBackend() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    FourierBackend(const FourierBackend&) = delete;
    FourierBackend& operator=(const FourierBackend&) = delete;

    void forward(double* in, std::complex<double>* out) const {
        fftw_execute_dft_r2c(forward_, in, reinterpret_cast<fftw_complex*>(out));
    }
    // Destroys `in`.
    void backward(std::complex<double>* in, double* out) const {
        fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(in), out);
    }

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

}  // namespace detail

namespace {

struct Scratch {
    std::vector<double> line;
    std::vector<double> line_out;
    std::vector<std::complex<double>> spec;
    std::vector<std::complex<double>> work;
    std::vector<std::vector<std::complex<double>>> mult;

    void ensure(std::size_t n) {
        if (line.size() != n) {
            line.assign(n, 0.0);
            line_out.assign(n, 0.0);
            spec.assign(n / 2 + 1, {});
            work.assign(n / 2 + 1, {});
        }
    }
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

// (i m)^k / n, with the Nyquist mode dropped for odd k.
std::complex<double> multiplier(std::size_t m, std::size_t n, int k) {
    if (k % 2 == 1 && 2 * m == n) return {0.0, 0.0};
    double mag = 1.0 / static_cast<double>(n);
    for (int p = 0; p < k; ++p) mag *= static_cast<double>(m);
    switch (k % 4) {
        case 0: return {mag, 0.0};
        case 1: return {0.0, mag};
        case 2: return {-mag, 0.0};
        default: return {0.0, -mag};
    }
}

// 5-point periodic first derivative, O(h^4).
void fd4_once(std::span<const double> f, std::span<double> out, double h) {
    const std::size_t n = f.size();
    const double c = 1.0 / (12.0 * h);
    for (std::size_t i = 0; i < n; ++i) {
        const double fm2 = f[(i + n - 2) % n];
        const double fm1 = f[(i + n - 1) % n];
        const double fp1 = f[(i + 1) % n];
        const double fp2 = f[(i + 2) % n];
        out[i] = c * (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2);
    }
}

void check_order(int k) {
    if (k < 1) throw Error(ErrorCode::BadOrder, "derivative order must be >= 1, got " + std::to_string(k));
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::size_t n_points) : n_(n_points) {
    if (n_points < kMinPoints) {
        throw Error(ErrorCode::BadParams,
                    "grid needs at least " + std::to_string(kMinPoints) + " points, got " + std::to_string(n_points));
    }
    fft_ = std::make_shared<const detail::FourierBackend>(n_points);
}

std::vector<double> PeriodicGrid::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

std::vector<double> PeriodicGrid::derivative(std::span<const double> f, int order, Scheme scheme) const {
    std::vector<double> out(f.size());
    const int orders[] = {order};
    const std::span<double> outs[] = {out};
    derivatives(f, 1, orders, outs, scheme);
    return out;
}

void PeriodicGrid::derivatives(std::span<const double> data, std::size_t dim, std::span<const int> orders,
                               std::span<const std::span<double>> outs, Scheme scheme) const {
    if (dim == 0 || data.size() != n_ * dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "field of size " + std::to_string(data.size()) + " does not match grid of " + std::to_string(n_));
    }
    if (orders.size() != outs.size()) throw Error(ErrorCode::DimensionMismatch, "orders/outputs length differ");
    for (std::size_t j = 0; j < orders.size(); ++j) {
        check_order(orders[j]);
        if (outs[j].size() != data.size()) throw Error(ErrorCode::DimensionMismatch, "output has wrong size");
    }
    if (scheme != Scheme::Spectral && scheme != Scheme::Fd4) {
        throw Error(ErrorCode::SchemeUnavailable, "unsupported differentiation scheme");
    }

    Scratch& s = scratch();
    s.ensure(n_);
    const std::size_t half = n_ / 2 + 1;

    if (scheme == Scheme::Spectral) {
        s.mult.resize(orders.size());
        for (std::size_t j = 0; j < orders.size(); ++j) {
            s.mult[j].resize(half);
            for (std::size_t m = 0; m < half; ++m) s.mult[j][m] = multiplier(m, n_, orders[j]);
        }
    }

    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < n_; ++i) s.line[i] = data[i * dim + c];

        if (scheme == Scheme::Spectral) {
            fft_->forward(s.line.data(), s.spec.data());
            for (std::size_t j = 0; j < orders.size(); ++j) {
                const auto& mult = s.mult[j];
                for (std::size_t m = 0; m < half; ++m) {
                    // Plain product; std::complex operator* takes the slow NaN-aware path.
                    const double a = s.spec[m].real(), b = s.spec[m].imag();
                    const double c = mult[m].real(), d = mult[m].imag();
                    s.work[m] = {a * c - b * d, a * d + b * c};
                }
                fft_->backward(s.work.data(), s.line_out.data());
                for (std::size_t i = 0; i < n_; ++i) outs[j][i * dim + c] = s.line_out[i];
            }
        } else {
            for (std::size_t j = 0; j < orders.size(); ++j) {
                std::vector<double> cur(s.line);
                for (int k = 0; k < orders[j]; ++k) {
                    fd4_once(cur, s.line_out, spacing());
                    cur.swap(s.line_out);
                }
                for (std::size_t i = 0; i < n_; ++i) outs[j][i * dim + c] = cur[i];
            }
        }
    }
}

double PeriodicGrid::integrate(std::span<const double> f) const {
    if (f.size() != n_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "integrand of size " + std::to_string(f.size()) + " does not match grid of " + std::to_string(n_));
    }
    double s = 0.0;
    for (double v : f) s += v;
    return spacing() * s;
}

}  // namespace gll
