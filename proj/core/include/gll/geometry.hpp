#pragma once

// Pointwise algebra on R^{n+1} and the round unit sphere S^n.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gll {

inline constexpr double kDefaultUnitTolerance = 1e-8;
inline constexpr double kDefaultZeroFloor = 1e-12;

/// A point or vector of the ambient space R^{n+1}.
class AmbientVector {
public:
    AmbientVector() = default;
    explicit AmbientVector(std::size_t dim) : c_(dim, 0.0) {}
    AmbientVector(std::initializer_list<double> c) : c_(c) {}
    explicit AmbientVector(std::span<const double> c) : c_(c.begin(), c.end()) {}

    static AmbientVector basis(std::size_t dim, std::size_t i) {
        AmbientVector e(dim);
        e.c_.at(i) = 1.0;
        return e;
    }

    std::size_t dim() const noexcept { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    std::span<const double> components() const noexcept { return c_; }
    std::span<double> components() noexcept { return c_; }

    bool is_finite() const;
    double norm() const;

    friend bool operator==(const AmbientVector&, const AmbientVector&) = default;

private:
    std::vector<double> c_;
};

AmbientVector operator+(const AmbientVector& a, const AmbientVector& b);
AmbientVector operator-(const AmbientVector& a, const AmbientVector& b);
AmbientVector operator*(double s, const AmbientVector& a);
double dot(const AmbientVector& a, const AmbientVector& b);

/// Constant symmetric matrix A of the potential (u, Au). Row-major storage.
class PotentialMatrix {
public:
    PotentialMatrix() = default;
    /// Throws NotSymmetric unless entries[i][j] == entries[j][i] exactly.
    PotentialMatrix(std::size_t dim, std::vector<double> row_major);

    static PotentialMatrix zero(std::size_t dim);
    static PotentialMatrix identity(std::size_t dim);
    static PotentialMatrix diagonal(std::span<const double> diag);
    static PotentialMatrix diagonal(std::initializer_list<double> diag) {
        return diagonal(std::span<const double>(diag.begin(), diag.size()));
    }

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    std::span<const double> entries() const noexcept { return a_; }

    bool is_zero() const noexcept;
    bool is_diagonal() const noexcept;
    /// max |lambda| over the spectrum; bounds |(u, Au)| on the unit sphere.
    double spectral_radius() const;

    void apply(std::span<const double> v, std::span<double> out) const;
    /// (a, A b)
    double bilinear(std::span<const double> a, std::span<const double> b) const;

    friend bool operator==(const PotentialMatrix&, const PotentialMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> a_;
};

AmbientVector project_to_sphere(const AmbientVector& v, double zero_floor = kDefaultZeroFloor);
AmbientVector project_to_tangent(const AmbientVector& p, const AmbientVector& v,
                                 double unit_tol = kDefaultUnitTolerance);
/// R(X,Y)Z = <Y,Z>X - <X,Z>Y on the unit sphere.
AmbientVector curvature_apply(const AmbientVector& x, const AmbientVector& y, const AmbientVector& z);
/// Returns (u, Au); the potential itself is half of this.
double quadratic_potential(const PotentialMatrix& a, const AmbientVector& u);

// Raw kernels shared by the field code. No validation beyond what is noted.
namespace kernel {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// v <- v - (p, v) p
inline void remove_normal(std::span<const double> p, std::span<double> v) {
    const double c = dot(p, v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * p[i];
}

/// Normalizes in place. Returns the pre-normalization length.
inline double normalize(std::span<double> v) {
    const double len = norm(v);
    for (double& x : v) x /= len;
    return len;
}

}  // namespace kernel

}  // namespace gll
