#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "cellip/linalg.hpp"

namespace cellip {

// Volume convention: Lebesgue measure on R^2n. A complex ellipsoid with axes
// vector lambda has volume (prod lambda)^2 * unit_ball_volume(n); the
// det-lambda convention differs by the exponent below. Both are monotone in
// det lambda, so comparison statements transfer unchanged.
inline constexpr int kVolumeDetExponent = 2;

/// Lebesgue volume of the unit ball of C^n (= unit 2n-ball): pi^n / n!.
inline double unit_ball_volume(std::size_t n) {
    double v = 1.0;
    for (std::size_t k = 1; k <= n; ++k) v *= 3.14159265358979323846264338328 / static_cast<double>(k);
    return v;
}

/// {x : quad_form(shape, x - center) <= 1}.
class ComplexEllipsoid {
  public:
    ComplexEllipsoid(CVector center, HermitianShape shape)
        : center_(std::move(center)), shape_(std::move(shape)) {
        if (center_.size() != shape_.dim())
            throw std::invalid_argument("ComplexEllipsoid: center/shape dimension mismatch");
    }

    std::size_t dim() const { return shape_.dim(); }
    const CVector& center() const { return center_; }
    const HermitianShape& shape() const { return shape_; }

  private:
    CVector center_;
    HermitianShape shape_;
};

inline ComplexEllipsoid unit_ball(std::size_t n) {
    return {CVector(n, Complex(0.0)), HermitianShape(CMatrix::identity(n))};
}

inline bool contains(const ComplexEllipsoid& e, const CVector& x, double tol = 1e-9) {
    return quad_form(e.shape(), x - e.center()) <= 1.0 + tol;
}

/// Shape = frame diag(lambda_i^-2) frame^H; frame must be unitary.
inline ComplexEllipsoid from_axes(const AxesVector& lambda, const CMatrix& frame,
                                  const CVector& center) {
    const std::size_t n = lambda.size();
    if (frame.rows() != n || frame.cols() != n)
        throw std::invalid_argument("from_axes: frame dimension mismatch");
    if (frobenius_norm(adjoint(frame) * frame - CMatrix::identity(n)) > 1e-10 * std::sqrt(double(n)))
        throw std::invalid_argument("from_axes: frame is not unitary");
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += frame(i, k) * (1.0 / (lambda[k] * lambda[k])) * std::conj(frame(j, k));
            m(i, j) = (i == j) ? Complex(s.real(), 0.0) : s;
            m(j, i) = std::conj(m(i, j));
        }
    return {center, HermitianShape(m)};
}

/// Axes-form ellipsoid El(lambda) + center with the standard frame.
inline ComplexEllipsoid from_axes(const AxesVector& lambda, const CVector& center) {
    return from_axes(lambda, CMatrix::identity(lambda.size()), center);
}

struct AxesForm {
    AxesVector lambda;
    CMatrix frame;
};

/// Recovers (lambda, unitary frame); lambda sorted descending (ascending
/// shape eigenvalues), defined up to ordering and eigenspace rotation.
inline AxesForm to_axes(const ComplexEllipsoid& e) {
    EigResult eig = eig_hermitian(e.shape().matrix());
    std::vector<double> lam(eig.values.size());
    for (std::size_t i = 0; i < lam.size(); ++i) lam[i] = 1.0 / std::sqrt(eig.values[i]);
    return {AxesVector(lam), eig.frame};
}

/// Lebesgue 2n-volume.
inline double volume(const ComplexEllipsoid& e) {
    return unit_ball_volume(e.dim()) / det_hermitian(e.shape().matrix());
}

/// Image {A x + t : x in E}; A must be invertible.
inline ComplexEllipsoid affine_image(const ComplexEllipsoid& e, const CMatrix& a,
                                     const CVector& t) {
    if (a.rows() != e.dim() || a.cols() != e.dim() || t.size() != e.dim())
        throw std::invalid_argument("affine_image: dimension mismatch");
    if (std::abs(det_general(a)) <= 1e-12 * std::pow(std::max(max_abs(a), 1e-300), double(a.rows())))
        throw std::invalid_argument("affine_image: singular map");
    const CMatrix ainv = inv_general(a);
    CMatrix m = adjoint(ainv) * e.shape().matrix() * ainv;
    // rounding can leave a tiny skew; fold it out before revalidation
    m = 0.5 * (m + adjoint(m));
    return {a * e.center() + t, HermitianShape(m)};
}

/// Absolute polar {y : sup_{x in E} |inner(y,x)| <= 1} of a centered
/// ellipsoid; shape inverts.
inline ComplexEllipsoid polar(const ComplexEllipsoid& e) {
    for (const auto& z : e.center())
        if (std::abs(z) > 1e-12)
            throw std::invalid_argument("polar: ellipsoid must be centered at the origin");
    return {e.center(), HermitianShape(inv_hermitian(e.shape().matrix()))};
}

/// Relative comparison of shapes and centers.
inline bool approx_equal(const ComplexEllipsoid& a, const ComplexEllipsoid& b,
                         double tol = 1e-7) {
    if (a.dim() != b.dim()) return false;
    const double sa = frobenius_norm(a.shape().matrix());
    const double sb = frobenius_norm(b.shape().matrix());
    if (frobenius_norm(a.shape().matrix() - b.shape().matrix()) > tol * std::max(sa, sb))
        return false;
    const double scale = std::max({norm(a.center()), norm(b.center()), 1.0});
    return norm(a.center() - b.center()) <= tol * scale;
}

// ---------------------------------------------------------------------------
// Complex lines and their sections
// ---------------------------------------------------------------------------

/// Affine complex line {base + t * dir : t in C}; dir is stored unit-norm.
class ComplexLine {
  public:
    ComplexLine(CVector base, CVector dir) : base_(std::move(base)), dir_(std::move(dir)) {
        if (base_.size() != dir_.size())
            throw std::invalid_argument("ComplexLine: dimension mismatch");
        const double d = norm(dir_);
        if (d < 1e-14) throw std::invalid_argument("ComplexLine: zero direction");
        if (std::abs(d - 1.0) > 1e-12)
            for (auto& z : dir_) z /= d;
    }
    const CVector& base() const { return base_; }
    const CVector& dir() const { return dir_; }
    CVector point(Complex t) const { return base_ + t * dir_; }

  private:
    CVector base_, dir_;
};

struct Disk {
    enum class Kind { empty, point, disk };
    Kind kind = Kind::empty;
    Complex center = 0.0;  // coordinate on the line
    double radius = 0.0;
};

/// Section E cap L in line coordinates. Substituting x = p + t d turns the
/// form into alpha |t - t0|^2 <= rho with alpha = quad_form(shape, d) > 0;
/// rho in [-1e-12, 1e-12] classifies as a point (tangency).
inline Disk line_section(const ComplexEllipsoid& e, const ComplexLine& line) {
    const CMatrix& m = e.shape().matrix();
    const CVector w = line.base() - e.center();
    const double alpha = quad_form(m, line.dir());
    const Complex beta = inner(line.dir(), m * w);
    const double gamma = quad_form(m, w);
    const Complex t0 = -beta / alpha;
    const double rho = 1.0 - gamma + std::norm(beta) / alpha;
    Disk d;
    if (rho < -1e-12) {
        d.kind = Disk::Kind::empty;
    } else if (rho <= 1e-12) {
        d.kind = Disk::Kind::point;
        d.center = t0;
    } else {
        d.kind = Disk::Kind::disk;
        d.center = t0;
        d.radius = std::sqrt(rho / alpha);
    }
    return d;
}

// ---------------------------------------------------------------------------
// The two proof constructions for the extremal-ellipsoid uniqueness results.
// ---------------------------------------------------------------------------

/// Midpoint ellipsoid El((lambda+1)/2) + c/2 of El(1) and El(lambda)+c.
/// Every point splits exactly as (y+u)/2 with u in the unit ball and
/// y = lambda (.) u + c.
inline ComplexEllipsoid midpoint_ellipsoid(const AxesVector& lambda, const CVector& c) {
    if (lambda.size() != c.size())
        throw std::invalid_argument("midpoint_ellipsoid: dimension mismatch");
    std::vector<double> mid(lambda.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (lambda[i] + 1.0);
    return from_axes(AxesVector(mid), Complex(0.5) * c);
}

/// Ellipsoid bounding El(beta) cap (unit ball + c), with lambda = beta^-2:
///   sum (lambda_i + 1) |x_i - c_i/(lambda_i+1)|^2 <= 2 - sum (lambda_i/(lambda_i+1)) |c_i|^2.
/// The right-hand side keeps the exact completion remainder, so the volume
/// comparison against the unit ball is strict on both contradiction branches.
/// Throws if the bound has empty interior.
inline ComplexEllipsoid mice_bound_ellipsoid(const AxesVector& beta, const CVector& c) {
    const std::size_t n = beta.size();
    if (c.size() != n) throw std::invalid_argument("mice_bound_ellipsoid: dimension mismatch");
    double rhs = 2.0;
    CVector z(n);
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = 1.0 / (beta[i] * beta[i]);
        rhs -= (lam / (lam + 1.0)) * std::norm(c[i]);
        z[i] = c[i] / (lam + 1.0);
        m(i, i) = lam + 1.0;
    }
    if (rhs <= 1e-12)
        throw std::domain_error("mice_bound_ellipsoid: intersection bound has empty interior");
    for (std::size_t i = 0; i < n; ++i) m(i, i) = m(i, i).real() / rhs;
    return {z, HermitianShape(m)};
}

}  // namespace cellip
