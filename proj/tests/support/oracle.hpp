#pragma once

// Independent reference computations for the tests: an O(N^2) trigonometric
// interpolant in long double instead of the FFT path, and the closed-form
// flow and energy formulas evaluated from raw ambient derivatives.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "gll/fields.hpp"
#include "gll/geometry.hpp"

namespace oracle {

using Vec = std::vector<double>;

/// k-th derivative of the trigonometric interpolant of f, Nyquist dropped for odd k.
inline Vec dft_derivative(std::span<const double> f, int k) {
    const std::size_t n = f.size();
    const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    std::vector<long double> re(n / 2 + 1), im(n / 2 + 1);
    for (std::size_t m = 0; m <= n / 2; ++m) {
        long double a = 0, b = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const long double th = two_pi * static_cast<long double>((m * j) % n) / static_cast<long double>(n);
            a += f[j] * std::cos(th);
            b -= f[j] * std::sin(th);
        }
        re[m] = a;
        im[m] = b;
    }
    Vec out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        long double s = 0;
        for (std::size_t m = 1; m <= n / 2; ++m) {
            const bool nyq = 2 * m == n;
            if (nyq && k % 2 == 1) continue;
            // (i m)^k (a + i b) e^{i m x}, real part, doubled except at Nyquist.
            const long double mk = std::pow(static_cast<long double>(m), k);
            long double cr = 0, ci = 0;
            switch (k % 4) {
                case 0: cr = mk * re[m]; ci = mk * im[m]; break;
                case 1: cr = -mk * im[m]; ci = mk * re[m]; break;
                case 2: cr = -mk * re[m]; ci = -mk * im[m]; break;
                case 3: cr = mk * im[m]; ci = -mk * re[m]; break;
            }
            const long double th = two_pi * static_cast<long double>((m * j) % n) / static_cast<long double>(n);
            const long double term = cr * std::cos(th) - ci * std::sin(th);
            s += nyq ? term : 2 * term;
        }
        out[j] = static_cast<double>(s / static_cast<long double>(n));
    }
    return out;
}

/// Node-major vector field, per component.
inline Vec derivative(std::span<const double> data, std::size_t dim, int k) {
    const std::size_t n = data.size() / dim;
    Vec out(data.size());
    Vec line(n);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < n; ++i) line[i] = data[i * dim + c];
        const Vec d = dft_derivative(line, k);
        for (std::size_t i = 0; i < n; ++i) out[i * dim + c] = d[i];
    }
    return out;
}

inline double dot(const double* a, const double* b, std::size_t d) {
    double s = 0;
    for (std::size_t c = 0; c < d; ++c) s += a[c] * b[c];
    return s;
}

/// V - (u,V)u at every node.
inline Vec project(std::span<const double> u, Vec v, std::size_t d) {
    for (std::size_t i = 0; i < u.size() / d; ++i) {
        const double p = dot(&u[i * d], &v[i * d], d);
        for (std::size_t c = 0; c < d; ++c) v[i * d + c] -= p * u[i * d + c];
    }
    return v;
}

inline double integrate(const Vec& f) {
    double s = 0;
    for (double x : f) s += x;
    return s * 2.0 * std::numbers::pi / static_cast<double>(f.size());
}

inline double quad_form(const gll::PotentialMatrix& a, const double* x, const double* y) {
    double s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) s += x[i] * a(i, j) * y[j];
    return s;
}

/// u_xxx + 3(u_x,u_xx)u + 3/2|u_x|^2 u_x + 3/2(u,Au)u_x
inline Vec rhs_extrinsic(const gll::SphereField& u, const gll::PotentialMatrix& a) {
    const std::size_t d = u.ambient_dim();
    const auto s = u.data();
    const Vec u1 = derivative(s, d, 1), u2 = derivative(s, d, 2), u3 = derivative(s, d, 3);
    Vec out(s.size());
    for (std::size_t i = 0; i < u.n_points(); ++i) {
        const double* p = &s[i * d];
        const double a12 = dot(&u1[i * d], &u2[i * d], d);
        const double q = dot(&u1[i * d], &u1[i * d], d);
        const double pot = quad_form(a, p, p);
        for (std::size_t c = 0; c < d; ++c) {
            out[i * d + c] = u3[i * d + c] + 3 * a12 * p[c] + 1.5 * q * u1[i * d + c] + 1.5 * pot * u1[i * d + c];
        }
    }
    return out;
}

/// Covariant jet u_x, grad u_x, grad^2 u_x by projection of oracle derivatives.
struct Jet {
    Vec ux, d1, d2;
};

inline Jet jet(const gll::SphereField& u) {
    const std::size_t d = u.ambient_dim();
    Jet j;
    j.ux = project(u.data(), derivative(u.data(), d, 1), d);
    j.d1 = project(u.data(), derivative(j.ux, d, 1), d);
    j.d2 = project(u.data(), derivative(j.d1, d, 1), d);
    return j;
}

inline double e2(const gll::SphereField& u, const gll::PotentialMatrix& a) {
    const std::size_t d = u.ambient_dim();
    const Jet j = jet(u);
    Vec f(u.n_points());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double* p = &u.data()[i * d];
        const double* x = &j.ux[i * d];
        const double q = dot(x, x, d);
        f[i] = dot(&j.d1[i * d], &j.d1[i * d], d) - 0.25 * q * q - 2.25 * quad_form(a, p, p) * q + quad_form(a, x, x);
    }
    return integrate(f);
}

inline double e3(const gll::SphereField& u) {
    const std::size_t d = u.ambient_dim();
    const Jet j = jet(u);
    Vec f(u.n_points());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double* x = &j.ux[i * d];
        const double* y = &j.d1[i * d];
        const double xy = dot(x, y, d);
        f[i] = dot(&j.d2[i * d], &j.d2[i * d], d) - xy * xy - 1.5 * dot(x, x, d) * dot(y, y, d);
    }
    return integrate(f);
}

inline double sup_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double sup_abs(std::span<const double> a) {
    double m = 0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace oracle
