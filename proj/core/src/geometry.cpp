#include "gll/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

#include "gll/error.hpp"

namespace gll {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

bool AmbientVector::is_finite() const {
    return std::all_of(c_.begin(), c_.end(), [](double x) { return std::isfinite(x); });
}

double AmbientVector::norm() const { return kernel::norm(c_); }

AmbientVector operator+(const AmbientVector& a, const AmbientVector& b) {
    require_same_dim(a.dim(), b.dim(), "vector sum");
    AmbientVector r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
    return r;
}

AmbientVector operator-(const AmbientVector& a, const AmbientVector& b) {
    require_same_dim(a.dim(), b.dim(), "vector difference");
    AmbientVector r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
    return r;
}

AmbientVector operator*(double s, const AmbientVector& a) {
    AmbientVector r(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) r[i] = s * a[i];
    return r;
}

double dot(const AmbientVector& a, const AmbientVector& b) {
    require_same_dim(a.dim(), b.dim(), "dot");
    return kernel::dot(a.components(), b.components());
}

PotentialMatrix::PotentialMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), a_(std::move(row_major)) {
    if (a_.size() != dim_ * dim_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "potential matrix needs " + std::to_string(dim_ * dim_) + " entries, got " +
                        std::to_string(a_.size()));
    }
    if (!std::all_of(a_.begin(), a_.end(), [](double x) { return std::isfinite(x); })) {
        throw Error(ErrorCode::NonFinite, "potential matrix has non-finite entries");
    }
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            if (a_[i * dim_ + j] != a_[j * dim_ + i]) {
                throw Error(ErrorCode::NotSymmetric, "entry (" + std::to_string(i) + "," +
                                                         std::to_string(j) + ") differs from its transpose");
            }
        }
    }
}

PotentialMatrix PotentialMatrix::zero(std::size_t dim) {
    return PotentialMatrix(dim, std::vector<double>(dim * dim, 0.0));
}

PotentialMatrix PotentialMatrix::identity(std::size_t dim) {
    std::vector<double> d(dim, 1.0);
    return diagonal(d);
}

PotentialMatrix PotentialMatrix::diagonal(std::span<const double> diag) {
    const std::size_t n = diag.size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = diag[i];
    return PotentialMatrix(n, std::move(a));
}

bool PotentialMatrix::is_zero() const noexcept {
    return std::all_of(a_.begin(), a_.end(), [](double x) { return x == 0.0; });
}

bool PotentialMatrix::is_diagonal() const noexcept {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (i != j && a_[i * dim_ + j] != 0.0) return false;
    return true;
}

double PotentialMatrix::spectral_radius() const {
    if (dim_ == 0) return 0.0;
    Eigen::MatrixXd m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m(i, j) = a_[i * dim_ + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void PotentialMatrix::apply(std::span<const double> v, std::span<double> out) const {
    for (std::size_t i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) s += a_[i * dim_ + j] * v[j];
        out[i] = s;
    }
}

double PotentialMatrix::bilinear(std::span<const double> a, std::span<const double> b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) row += a_[i * dim_ + j] * b[j];
        s += a[i] * row;
    }
    return s;
}

AmbientVector project_to_sphere(const AmbientVector& v, double zero_floor) {
    const double len = v.norm();
    if (!(len >= zero_floor)) {
        throw Error(ErrorCode::ZeroVector, "cannot project vector of length " + std::to_string(len));
    }
    AmbientVector r = v;
    for (double& x : r.components()) x /= len;
    return r;
}

AmbientVector project_to_tangent(const AmbientVector& p, const AmbientVector& v, double unit_tol) {
    require_same_dim(p.dim(), v.dim(), "project_to_tangent");
    if (std::abs(p.norm() - 1.0) > unit_tol) {
        throw Error(ErrorCode::NotUnit, "base point has length " + std::to_string(p.norm()));
    }
    AmbientVector r = v;
    kernel::remove_normal(p.components(), r.components());
    return r;
}

AmbientVector curvature_apply(const AmbientVector& x, const AmbientVector& y, const AmbientVector& z) {
    return dot(y, z) * x - dot(x, z) * y;
}

double quadratic_potential(const PotentialMatrix& a, const AmbientVector& u) {
    require_same_dim(a.dim(), u.dim(), "quadratic_potential");
    return a.bilinear(u.components(), u.components());
}

}  // namespace gll
