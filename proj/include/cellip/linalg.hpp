#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cellip/rng.hpp"

namespace cellip {

// Conventions used throughout:
//   inner(a, b) = sum_i conj(a_i) b_i        (conjugate on the left)
//   quad_form(M, x) = Re(inner(x, M x))      (Hermitian form value)
// Real directions of R^2n are carried as complex vectors w, with
// <w, x>_R = Re(inner(w, x)).

inline Complex inner(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm2(const CVector& a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return s;
}

inline double norm(const CVector& a) { return std::sqrt(norm2(a)); }

inline CVector operator+(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector add: dimension mismatch");
    CVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline CVector operator-(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector sub: dimension mismatch");
    CVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline CVector operator*(Complex s, const CVector& a) {
    CVector r(a);
    for (auto& z : r) z *= s;
    return r;
}

/// Coordinatewise (Hadamard) product.
inline CVector hadamard(const CVector& x, const CVector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("hadamard: dimension mismatch");
    CVector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] * y[i];
    return r;
}

// ---------------------------------------------------------------------------
// Dense complex matrix, row-major. Sized for desk-scale n; no cleverness.
// ---------------------------------------------------------------------------
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, Complex(0.0)) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool square() const { return rows_ == cols_; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    CMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline CVector operator*(const CMatrix& a, const CVector& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    CVector r(a.rows(), Complex(0.0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * x[j];
    return r;
}

inline CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matadd: dimension mismatch");
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

inline CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matsub: dimension mismatch");
    CMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

inline CMatrix operator*(Complex s, const CMatrix& a) {
    CMatrix r = a;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) *= s;
    return r;
}

inline CMatrix adjoint(const CMatrix& a) {
    CMatrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

inline CMatrix transpose(const CMatrix& a) {
    CMatrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

inline CMatrix conjugate(const CMatrix& a) {
    CMatrix r = a;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) = std::conj(r(i, j));
    return r;
}

inline double frobenius_norm(const CMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

inline double max_abs(const CMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s = std::max(s, std::abs(a(i, j)));
    return s;
}

inline bool is_hermitian(const CMatrix& m, double tol = 1e-12) {
    if (!m.square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// General (non-Hermitian) LU with partial pivoting: det, solve, inverse.
// Used only for affine maps; the Hermitian path below never goes through it.
// ---------------------------------------------------------------------------
namespace detail {

constexpr double kTwoPi = 6.28318530717958647692528676656;

struct Lu {
    CMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

inline Lu lu_decompose(const CMatrix& a, double pivot_tol = 1e-13) {
    if (!a.square()) throw std::invalid_argument("lu: square matrix required");
    const std::size_t n = a.rows();
    Lu f{a, std::vector<std::size_t>(n), 1, false};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(f.lu(i, k)) > best) { best = std::abs(f.lu(i, k)); piv = i; }
        if (best <= pivot_tol * scale) { f.singular = true; return f; }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            const Complex lik = f.lu(i, k);
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
        }
    }
    return f;
}

inline CVector lu_solve(const Lu& f, const CVector& b) {
    const std::size_t n = f.lu.rows();
    CVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        Complex s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s / f.lu(i, i);
    }
    return y;
}

}  // namespace detail

inline Complex det_general(const CMatrix& a) {
    auto f = detail::lu_decompose(a);
    if (f.singular) return 0.0;
    Complex d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
    return d;
}

/// Inverse of a general square matrix; throws on (numerically) singular input.
inline CMatrix inv_general(const CMatrix& a) {
    auto f = detail::lu_decompose(a);
    if (f.singular) throw std::invalid_argument("inv_general: singular matrix");
    const std::size_t n = a.rows();
    CMatrix r(n, n);
    CVector e(n, Complex(0.0));
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        CVector col = detail::lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i) r(i, j) = col[i];
        e[j] = 0.0;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition: cyclic Jacobi with complex rotations.
// Deterministic: ascending eigenvalues, each eigenvector's largest-modulus
// entry made real positive.
// ---------------------------------------------------------------------------
struct EigResult {
    std::vector<double> values;  // ascending
    CMatrix frame;               // unitary, M = frame diag(values) frame^H
};

inline EigResult eig_hermitian(const CMatrix& m) {
    if (!m.square()) throw std::invalid_argument("eig_hermitian: square matrix required");
    const double scale = max_abs(m);
    if (!is_hermitian(m, 1e-12 * std::max(1.0, scale)))
        throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
    const std::size_t n = m.rows();
    CMatrix a = m;
    CMatrix v = CMatrix::identity(n);
    const double total = std::max(frobenius_norm(m), 1e-300);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    // convergence target from the build's eigensolver contract
    const double target = 1e-13 * total;
    for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double b = std::abs(apq);
                if (b <= 1e-300) { a(p, q) = a(q, p) = 0.0; continue; }
                const Complex phi = apq / b;  // apq = b * phi
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * b);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G acts on columns (p,q): G(p,p)=c, G(p,q)=s, G(q,p)=-conj(phi)s, G(q,q)=conj(phi)c
                const Complex gqp = -std::conj(phi) * s;
                const Complex gqq = std::conj(phi) * c;
                for (std::size_t k = 0; k < n; ++k) {  // A <- A G
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + gqp * akq;
                    a(k, q) = s * akp + gqq * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // A <- G^H A
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(gqp) * aqk;
                    a(q, k) = s * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
                for (std::size_t k = 0; k < n; ++k) {  // V <- V G
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + gqp * vkq;
                    v(k, q) = s * vkp + gqq * vkq;
                }
            }
        }
    }
    if (off_norm() > target)
        throw std::runtime_error("eig_hermitian: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigResult r;
    r.values.resize(n);
    r.frame = CMatrix(n, n);
    for (std::size_t jj = 0; jj < n; ++jj) {
        const std::size_t src = order[jj];
        r.values[jj] = a(src, src).real();
        // fix the column phase: largest-modulus entry becomes real positive
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(v(i, src)) > best) { best = std::abs(v(i, src)); arg = i; }
        Complex ph = v(arg, src);
        ph = (std::abs(ph) > 0.0) ? std::conj(ph) / std::abs(ph) : Complex(1.0);
        for (std::size_t i = 0; i < n; ++i) r.frame(i, jj) = v(i, src) * ph;
    }
    return r;
}

namespace detail {
/// U f(diag) U^H for a spectral function f; result re-hermitized exactly.
template <typename F>
CMatrix spectral_map(const CMatrix& m, F&& f) {
    EigResult e = eig_hermitian(m);
    const std::size_t n = m.rows();
    CMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += e.frame(i, k) * f(e.values[k]) * std::conj(e.frame(j, k));
            r(i, j) = (i == j) ? Complex(s.real(), 0.0) : s;
            r(j, i) = std::conj(r(i, j));
        }
    return r;
}

inline void require_pd(const EigResult& e, const char* who) {
    double top = 0.0;
    for (double v : e.values) top = std::max(top, std::abs(v));
    if (e.values.empty() || e.values.front() <= 1e-12 * std::max(top, 1e-300))
        throw std::invalid_argument(std::string(who) + ": matrix is not positive-definite");
}
}  // namespace detail

/// Hermitian square root of a positive-definite matrix.
inline CMatrix sqrt_hermitian(const CMatrix& m) {
    EigResult e = eig_hermitian(m);
    detail::require_pd(e, "sqrt_hermitian");
    return detail::spectral_map(m, [](double x) { return std::sqrt(x); });
}

inline CMatrix inv_hermitian(const CMatrix& m) {
    EigResult e = eig_hermitian(m);
    detail::require_pd(e, "inv_hermitian");
    return detail::spectral_map(m, [](double x) { return 1.0 / x; });
}

/// Determinant of a Hermitian PD matrix (product of eigenvalues).
inline double det_hermitian(const CMatrix& m) {
    EigResult e = eig_hermitian(m);
    detail::require_pd(e, "det_hermitian");
    double d = 1.0;
    for (double v : e.values) d *= v;
    return d;
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Vector of strictly positive semi-axis lengths.
class AxesVector {
  public:
    explicit AxesVector(std::vector<double> lam) : lam_(std::move(lam)) {
        if (lam_.empty()) throw std::invalid_argument("AxesVector: empty");
        for (double l : lam_)
            if (!(l > 0.0) || !std::isfinite(l))
                throw std::invalid_argument("AxesVector: entries must be strictly positive");
    }
    std::size_t size() const { return lam_.size(); }
    double operator[](std::size_t i) const { return lam_[i]; }
    const std::vector<double>& values() const { return lam_; }

  private:
    std::vector<double> lam_;
};

/// Product of coordinates of an axes vector.
inline double det_product(const AxesVector& lam) {
    double p = 1.0;
    for (double l : lam.values()) p *= l;
    return p;
}

/// Hermitian positive-definite form matrix. Construction validates both
/// properties; near-misses are rejected, not repaired.
class HermitianShape {
  public:
    explicit HermitianShape(CMatrix m) : m_(std::move(m)) {
        if (!m_.square() || m_.rows() == 0)
            throw std::invalid_argument("HermitianShape: square nonempty matrix required");
        // entrywise Hermitian tolerance is absolute by contract
        if (!is_hermitian(m_, 1e-12))
            throw std::invalid_argument("HermitianShape: matrix is not Hermitian");
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = 0; j < m_.cols(); ++j)
                if (!std::isfinite(m_(i, j).real()) || !std::isfinite(m_(i, j).imag()))
                    throw std::invalid_argument("HermitianShape: non-finite entry");
        EigResult e = eig_hermitian(m_);
        detail::require_pd(e, "HermitianShape");
    }

    std::size_t dim() const { return m_.rows(); }
    const CMatrix& matrix() const { return m_; }

  private:
    CMatrix m_;
};

/// Value of the Hermitian form at x: Re(x^H M x), strictly positive off 0.
inline double quad_form(const CMatrix& m, const CVector& x) {
    if (m.rows() != x.size()) throw std::invalid_argument("quad_form: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) row += m(i, j) * x[j];
        s += std::conj(x[i]) * row;
    }
    return s.real();
}

inline double quad_form(const HermitianShape& m, const CVector& x) {
    return quad_form(m.matrix(), x);
}

// ---------------------------------------------------------------------------
// Real picture: C^n = R^2n with interleaved coordinates (re1, im1, re2, ...).
// J is the block rotation by 90 degrees per complex coordinate.
// ---------------------------------------------------------------------------

inline std::vector<double> realify_vector(const CVector& x) {
    std::vector<double> r(2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[2 * i] = x[i].real();
        r[2 * i + 1] = x[i].imag();
    }
    return r;
}

inline CVector complexify_vector(const std::vector<double>& r) {
    if (r.size() % 2 != 0) throw std::invalid_argument("complexify_vector: odd real dimension");
    CVector x(r.size() / 2);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = Complex(r[2 * i], r[2 * i + 1]);
    return x;
}

/// Real symmetric 2n x 2n form of the Hermitian form (entries have zero
/// imaginary part; CMatrix is reused as the container).
inline CMatrix realify(const CMatrix& m) {
    if (!m.square()) throw std::invalid_argument("realify: square matrix required");
    const std::size_t n = m.rows();
    CMatrix r(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double a = m(i, j).real();
            const double b = m(i, j).imag();
            r(2 * i, 2 * j) = a;
            r(2 * i, 2 * j + 1) = -b;
            r(2 * i + 1, 2 * j) = b;
            r(2 * i + 1, 2 * j + 1) = a;
        }
    return r;
}

/// The standard complex structure J on R^2n.
inline CMatrix j_structure(std::size_t n) {
    CMatrix j(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        j(2 * i, 2 * i + 1) = -1.0;
        j(2 * i + 1, 2 * i) = 1.0;
    }
    return j;
}

/// True iff the real symmetric form S commutes with J, i.e. the real
/// ellipsoid {s^T S s <= 1} is a complex ellipsoid.
inline bool is_complex_structured(const CMatrix& s, double tol = 1e-10) {
    if (!s.square()) throw std::invalid_argument("is_complex_structured: square matrix required");
    if (s.rows() % 2 != 0)
        throw std::invalid_argument("is_complex_structured: odd real dimension");
    const CMatrix j = j_structure(s.rows() / 2);
    const double comm = frobenius_norm(s * j - j * s);
    return comm <= tol * std::max(frobenius_norm(s), 1e-300);
}

/// Collapse a zero-imaginary-part CMatrix coming from the real picture back
/// to a complex n x n Hermitian matrix; inverse of realify.
inline CMatrix unrealify(const CMatrix& s) {
    if (!s.square() || s.rows() % 2 != 0) throw std::invalid_argument("unrealify: 2n x 2n required");
    const std::size_t n = s.rows() / 2;
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = Complex(s(2 * i, 2 * j).real(), s(2 * i + 1, 2 * j).real());
    return m;
}

// ---------------------------------------------------------------------------
// The scalar completion identity behind the circumscribed-intersection bound:
//   lambda |x|^2 + |x-c|^2
//     = (lambda+1) |x - c/(lambda+1)|^2 + (lambda/(lambda+1)) |c|^2.
// Both sides are evaluated independently and returned for comparison.
// ---------------------------------------------------------------------------
inline std::pair<double, double> lemma_affine_identity(double lambda, Complex x, Complex c) {
    if (lambda == -1.0) throw std::invalid_argument("lemma_affine_identity: lambda = -1");
    const double lhs = lambda * std::norm(x) + std::norm(x - c);
    const double rhs = (lambda + 1.0) * std::norm(x - c / (lambda + 1.0)) +
                       (lambda / (lambda + 1.0)) * std::norm(c);
    return {lhs, rhs};
}

}  // namespace cellip
