#pragma once

#include <optional>
#include <stdexcept>

#include "cellip/ellipsoid.hpp"
#include "cellip/linalg.hpp"

namespace cellip {

/// Probability weights over the input points (the dual variables of the
/// minimal circumscribed ellipsoid as a D-optimal design).
struct DesignWeights {
    std::vector<double> weights;

    void validate() const {
        double s = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("DesignWeights: negative weight");
            s += w;
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("DesignWeights: weights must sum to 1");
    }
};

struct SolverReport {
    std::size_t iterations = 0;
    double duality_gap = 0.0;  // max kappa / n - 1 at termination
    bool converged = false;
    std::vector<std::size_t> support_points;  // weight above 1e-8
};

struct MiceResult {
    ComplexEllipsoid ellipsoid;
    SolverReport report;
    DesignWeights weights;
};

namespace detail {

struct MomentState {
    CMatrix h;
    EigResult eig;
    CMatrix hinv;
    double logdet = 0.0;
};

inline MomentState moment_state(const std::vector<CVector>& pts, const std::vector<double>& w) {
    const std::size_t n = pts[0].size();
    MomentState st;
    st.h = CMatrix(n, n);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (w[i] == 0.0) continue;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) st.h(a, b) += w[i] * pts[i][a] * std::conj(pts[i][b]);
    }
    for (std::size_t a = 0; a < n; ++a) {
        st.h(a, a) = Complex(st.h(a, a).real(), 0.0);
        for (std::size_t b = a + 1; b < n; ++b) st.h(b, a) = std::conj(st.h(a, b));
    }
    st.eig = eig_hermitian(st.h);
    const double top = std::max(std::abs(st.eig.values.back()), 1e-300);
    if (st.eig.values.front() <= 1e-12 * top)
        throw std::invalid_argument("mice: points do not span (flat input)");
    st.hinv = CMatrix(n, n);
    st.logdet = 0.0;
    for (double v : st.eig.values) st.logdet += std::log(v);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += st.eig.frame(a, k) * (1.0 / st.eig.values[k]) * std::conj(st.eig.frame(b, k));
            st.hinv(a, b) = (a == b) ? Complex(s.real(), 0.0) : s;
            st.hinv(b, a) = std::conj(st.hinv(a, b));
        }
    return st;
}

struct CenteredSolve {
    CMatrix shape;  // H^-1 / kappa_max
    SolverReport report;
    std::vector<double> weights;
};

/// Frank-Wolfe ascent on log det H(w) with Wolfe-Atwood away/drop steps.
/// The step gamma = (kappa - n)/(n (kappa - 1)) is the exact line-search
/// optimum in both directions; an away candidate with kappa <= 1 lies past
/// the pole of the objective, so the step clamps to the full drop.
inline CenteredSolve solve_centered(const std::vector<CVector>& pts, double eps,
                                    std::size_t max_iter,
                                    const std::vector<double>* init = nullptr) {
    if (pts.empty()) throw std::invalid_argument("mice: empty point set");
    const std::size_t m = pts.size();
    const std::size_t n = pts[0].size();
    if (n == 0) throw std::invalid_argument("mice: zero-dimensional points");
    for (const auto& p : pts)
        if (p.size() != n) throw std::invalid_argument("mice: mixed dimensions");
    if (!(eps > 0.0)) throw std::invalid_argument("mice: eps must be positive");

    std::vector<double> w(m, 1.0 / double(m));
    if (init) {
        if (init->size() != m) throw std::invalid_argument("mice: bad initial weights");
        w = *init;
        double s = 0.0;
        for (double v : w) {
            if (v < 0.0) throw std::invalid_argument("mice: negative initial weight");
            s += v;
        }
        if (s <= 0.0) throw std::invalid_argument("mice: zero initial weights");
        for (auto& v : w) v /= s;
    }

    MomentState st = moment_state(pts, w);
    std::vector<double> kap(m);
    CenteredSolve out;
    const double nn = double(n);
    double prev_logdet = -1e300;
    std::size_t it = 0;
    double kmax = 0.0;

    for (;; ++it) {
        double ksum = 0.0;
        kmax = -1e300;
        double kmin_sup = 1e300;
        std::size_t jmax = 0, jmin = 0;
        bool have_min = false;
        for (std::size_t i = 0; i < m; ++i) {
            kap[i] = quad_form(st.hinv, pts[i]);
            ksum += w[i] * kap[i];
            if (kap[i] > kmax) { kmax = kap[i]; jmax = i; }
            if (w[i] > 1e-12 && kap[i] < kmin_sup) { kmin_sup = kap[i]; jmin = i; have_min = true; }
        }
        // trace identity: sum w_i kappa_i = n at every iterate
        if (std::abs(ksum - nn) > 1e-9 * nn)
            throw std::logic_error("mice: trace identity violated");
        // the objective is a nondecreasing ascent
        if (st.logdet < prev_logdet - 1e-12 * (1.0 + std::abs(prev_logdet)))
            throw std::logic_error("mice: determinant decreased");
        prev_logdet = st.logdet;

        if (kmax <= nn * (1.0 + eps)) {
            out.report.converged = true;
            break;
        }
        if (it >= max_iter) break;

        std::size_t j;
        double gamma;
        if (!have_min || (kmax - nn) >= (nn - kmin_sup)) {
            j = jmax;
            gamma = (kmax - nn) / (nn * (kmax - 1.0));
        } else {
            j = jmin;
            const double clamp = -w[j] / (1.0 - w[j]);
            gamma = (kmin_sup > 1.0)
                        ? std::max((kmin_sup - nn) / (nn * (kmin_sup - 1.0)), clamp)
                        : clamp;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            w[i] *= (1.0 - gamma);
            if (i == j) w[i] += gamma;
            if (w[i] < 0.0) w[i] = 0.0;
            sum += w[i];
        }
        for (auto& v : w) v /= sum;
        st = moment_state(pts, w);
    }

    out.report.iterations = it;
    out.report.duality_gap = kmax / nn - 1.0;
    for (std::size_t i = 0; i < m; ++i)
        if (w[i] > 1e-8) out.report.support_points.push_back(i);
    out.weights = std::move(w);
    out.shape = (1.0 / kmax) * st.hinv;
    out.shape = 0.5 * (out.shape + adjoint(out.shape));
    return out;
}

}  // namespace detail

/// Minimal circumscribed ellipsoid centered at the origin. The scaling
/// H^-1 / kappa_max makes every input satisfy the form at <= 1 exactly;
/// the volume is within (1+eps)^n of optimal at convergence.
inline MiceResult mice_centered(const std::vector<CVector>& points, double eps = 1e-7,
                                std::size_t max_iter = 100000,
                                const std::optional<DesignWeights>& init = {}) {
    detail::CenteredSolve s = detail::solve_centered(
        points, eps, max_iter, init ? &init->weights : nullptr);
    const std::size_t n = points[0].size();
    MiceResult r{ComplexEllipsoid(CVector(n, Complex(0.0)), HermitianShape(s.shape)),
                 s.report,
                 DesignWeights{s.weights}};
    return r;
}

/// General minimal circumscribed ellipsoid via the homogenizing lift
/// x -> (x, 1) in C^{n+1}: the centered solve there restricts back to the
/// affine solution. Center c = -Q11^-1 q, shape Q11 / (1 - q0 + q^H Q11^-1 q).
inline MiceResult mice(const std::vector<CVector>& points, double eps = 1e-7,
                       std::size_t max_iter = 100000,
                       const std::optional<DesignWeights>& init = {}) {
    if (points.empty()) throw std::invalid_argument("mice: empty point set");
    const std::size_t n = points[0].size();
    std::vector<CVector> lifted;
    lifted.reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != n) throw std::invalid_argument("mice: mixed dimensions");
        CVector q(n + 1);
        for (std::size_t i = 0; i < n; ++i) q[i] = p[i];
        q[n] = 1.0;
        lifted.push_back(std::move(q));
    }
    detail::CenteredSolve s =
        detail::solve_centered(lifted, eps, max_iter, init ? &init->weights : nullptr);

    CMatrix q11(n, n);
    CVector q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q11(i, j) = s.shape(i, j);
        q[i] = s.shape(i, n);
    }
    const double q0 = s.shape(n, n).real();
    const CMatrix q11inv = inv_hermitian(q11);
    CVector c = q11inv * q;
    for (auto& z : c) z = -z;
    const double scale = 1.0 - q0 + inner(q, q11inv * q).real();
    if (scale <= 1e-14) throw std::runtime_error("mice: degenerate homogenizing lift");
    CMatrix mshape = (1.0 / scale) * q11;
    mshape = 0.5 * (mshape + adjoint(mshape));
    return {ComplexEllipsoid(c, HermitianShape(mshape)), s.report, DesignWeights{s.weights}};
}

/// Discretized unit-circle orbit: {omega^j x_i} for the primitive k-th root
/// omega. Output is closed under multiplication by omega.
inline std::vector<CVector> symmetrize(const std::vector<CVector>& points, std::size_t k) {
    if (k < 2) throw std::invalid_argument("symmetrize: k must be at least 2");
    std::vector<CVector> out;
    out.reserve(points.size() * k);
    for (std::size_t j = 0; j < k; ++j) {
        const Complex omega = std::polar(1.0, detail::kTwoPi * double(j) / double(k));
        for (const auto& p : points) out.push_back(omega * p);
    }
    return out;
}

/// Symmetric slab body {x : |inner(a_i, x)| <= b_i}.
struct Slab {
    CVector a;
    double b = 1.0;
};

/// Maximal inscribed ellipsoid of a symmetric slab body, by polar duality:
/// normalize the slabs to b = 1, circumscribe the normal vectors minimally,
/// and take the polar. Inscribed constraints hold with
/// sup over the ellipsoid of |inner(a_i, x)| = sqrt(quad_form(E.shape, a_i)).
inline ComplexEllipsoid maie_symmetric(const std::vector<Slab>& slabs, double eps = 1e-9,
                                       std::size_t max_iter = 100000) {
    if (slabs.empty()) throw std::invalid_argument("maie_symmetric: no slabs");
    std::vector<CVector> normals;
    normals.reserve(slabs.size());
    for (const auto& s : slabs) {
        if (!(s.b > 0.0)) throw std::invalid_argument("maie_symmetric: slab width must be positive");
        if (norm(s.a) < 1e-14) throw std::invalid_argument("maie_symmetric: zero slab normal");
        normals.push_back(Complex(1.0 / s.b) * s.a);
    }
    MiceResult inner_solve = [&] {
        try {
            return mice_centered(normals, eps, max_iter);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("maie_symmetric: slab normals do not span (unbounded body)");
        }
    }();
    if (!inner_solve.report.converged)
        throw std::runtime_error("maie_symmetric: inner circumscription did not converge");
    return polar(inner_solve.ellipsoid);
}

}  // namespace cellip
