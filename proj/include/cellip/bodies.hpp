#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "cellip/ellipsoid.hpp"
#include "cellip/linalg.hpp"
#include "cellip/rng.hpp"

namespace cellip {

/// Boundary samples of a planar convex set, in complex line coordinates.
/// An empty point list is the "line misses the body" marker.
struct PlanarSampleSet {
    std::vector<Complex> points;
    bool empty() const { return points.empty(); }
    std::size_t count() const { return points.size(); }
};

/// Convex body given by membership and support queries plus radius bounds.
/// support(w) = sup over the body of Re(inner(w, x)); w doubles as a real
/// direction of R^2n. The two std::function hooks, when set, produce exact
/// sub-oracles for affine sections and orthogonal projections; generic
/// sampled fallbacks are used otherwise.
struct BodyOracle {
    std::size_t dim = 0;
    double outer_radius = 0.0;
    double inner_radius = 0.0;
    CVector interior;
    std::function<bool(const CVector&)> member;
    std::function<double(const CVector&)> support;
    std::function<BodyOracle(const CVector&, const std::vector<CVector>&)> restrict_affine;
    std::function<BodyOracle(const std::vector<CVector>&)> project_subspace;
};

namespace detail {

/// Largest r in [0, hi] with f(r) true, to a 1e-10 parameter tolerance.
/// f(0) must hold; f is monotone on convex sections.
template <typename F>
double ray_bisect(F&& f, double hi) {
    double lo = 0.0;
    if (f(hi)) return hi;  // capped by the caller's radius bound
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) ? lo : hi) = mid;
    }
    return lo;
}

inline double real_quad(const CMatrix& s, const std::vector<double>& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) row += s(i, j).real() * x[j];
        v += x[i] * row;
    }
    return v;
}

inline std::vector<double> real_matvec(const CMatrix& s, const std::vector<double>& x) {
    std::vector<double> r(s.rows(), 0.0);
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) r[i] += s(i, j).real() * x[j];
    return r;
}

/// Columns of the real 2n x 2k matrix representing y -> V y, interleaved
/// real coordinates; orthonormal whenever the complex frame is.
inline std::vector<std::vector<double>> real_frame(const std::vector<CVector>& frame) {
    std::vector<std::vector<double>> r;
    r.reserve(2 * frame.size());
    for (const auto& v : frame) {
        r.push_back(realify_vector(v));
        CVector iv(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) iv[i] = Complex(0, 1) * v[i];
        r.push_back(realify_vector(iv));
    }
    return r;
}

inline CVector apply_frame(const std::vector<CVector>& frame, const CVector& y) {
    CVector x(frame.empty() ? 0 : frame[0].size(), Complex(0.0));
    for (std::size_t j = 0; j < frame.size(); ++j)
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[j] * frame[j][i];
    return x;
}

inline CVector frame_coordinates(const std::vector<CVector>& frame, const CVector& x) {
    CVector y(frame.size());
    for (std::size_t j = 0; j < frame.size(); ++j) y[j] = inner(frame[j], x);
    return y;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Concrete oracles
// ---------------------------------------------------------------------------

inline BodyOracle ellipsoid_oracle(const ComplexEllipsoid& e);

namespace detail {

inline BodyOracle real_ellipsoid_oracle(const CMatrix& s, const std::vector<double>& center) {
    if (!s.square() || s.rows() % 2 != 0 || s.rows() != center.size())
        throw std::invalid_argument("real_ellipsoid_oracle: 2n x 2n shape required");
    EigResult eig = eig_hermitian(s);
    require_pd(eig, "real_ellipsoid_oracle");
    const std::size_t n = s.rows() / 2;
    const CMatrix sinv = inv_hermitian(s);
    const double lam_min = eig.values.front();
    const double lam_max = eig.values.back();
    double cnorm = 0.0;
    for (double x : center) cnorm += x * x;
    cnorm = std::sqrt(cnorm);

    BodyOracle b;
    b.dim = n;
    b.outer_radius = cnorm + 1.0 / std::sqrt(lam_min);
    b.inner_radius = 1.0 / std::sqrt(lam_max);
    b.interior = complexify_vector(center);
    b.member = [s, center](const CVector& x) {
        std::vector<double> d = realify_vector(x);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= center[i];
        return real_quad(s, d) <= 1.0;
    };
    b.support = [sinv, center](const CVector& w) {
        const std::vector<double> wr = realify_vector(w);
        double lin = 0.0;
        for (std::size_t i = 0; i < wr.size(); ++i) lin += wr[i] * center[i];
        return lin + std::sqrt(std::max(0.0, real_quad(sinv, wr)));
    };
    b.restrict_affine = [s, center](const CVector& p, const std::vector<CVector>& frame) {
        const auto rf = real_frame(frame);
        const std::size_t kk = rf.size();
        std::vector<double> d = realify_vector(p);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= center[i];
        CMatrix sp(kk, kk);
        const std::vector<double> sd = real_matvec(s, d);
        std::vector<double> bvec(kk, 0.0);
        for (std::size_t a = 0; a < kk; ++a) {
            for (std::size_t i = 0; i < sd.size(); ++i) bvec[a] += rf[a][i] * sd[i];
            const std::vector<double> sc = real_matvec(s, rf[a]);
            for (std::size_t c = a; c < kk; ++c) {
                double v = 0.0;
                for (std::size_t i = 0; i < sc.size(); ++i) v += rf[c][i] * sc[i];
                sp(a, c) = v;
                sp(c, a) = v;
            }
        }
        const CMatrix spinv = inv_hermitian(sp);
        std::vector<double> cp = real_matvec(spinv, bvec);
        for (auto& v : cp) v = -v;
        const double rho = 1.0 - real_quad(s, d) + real_quad(sp, cp);
        if (rho <= 1e-14)
            throw std::domain_error("real_ellipsoid_oracle: section has empty interior");
        CMatrix snew(kk, kk);
        for (std::size_t a = 0; a < kk; ++a)
            for (std::size_t c = 0; c < kk; ++c) snew(a, c) = sp(a, c).real() / rho;
        return real_ellipsoid_oracle(snew, cp);
    };
    b.project_subspace = [sinv, center](const std::vector<CVector>& frame) {
        const auto rf = real_frame(frame);
        const std::size_t kk = rf.size();
        CMatrix shadow_inv(kk, kk);
        std::vector<double> cp(kk, 0.0);
        for (std::size_t a = 0; a < kk; ++a) {
            for (std::size_t i = 0; i < rf[a].size(); ++i) cp[a] += rf[a][i] * center[i];
            const std::vector<double> sc = real_matvec(sinv, rf[a]);
            for (std::size_t c = a; c < kk; ++c) {
                double v = 0.0;
                for (std::size_t i = 0; i < sc.size(); ++i) v += rf[c][i] * sc[i];
                shadow_inv(a, c) = v;
                shadow_inv(c, a) = v;
            }
        }
        return real_ellipsoid_oracle(inv_hermitian(shadow_inv), cp);
    };
    return b;
}

}  // namespace detail

/// Oracle backed by a ComplexEllipsoid; all queries and both sub-oracle
/// hooks are closed-form.
inline BodyOracle ellipsoid_oracle(const ComplexEllipsoid& e) {
    const CMatrix m = e.shape().matrix();
    const CMatrix minv = inv_hermitian(m);
    EigResult eig = eig_hermitian(m);
    const CVector c = e.center();

    BodyOracle b;
    b.dim = e.dim();
    b.outer_radius = norm(c) + 1.0 / std::sqrt(eig.values.front());
    b.inner_radius = 1.0 / std::sqrt(eig.values.back());
    b.interior = c;
    b.member = [e](const CVector& x) { return contains(e, x, 0.0); };
    b.support = [minv, c](const CVector& w) {
        return inner(w, c).real() + std::sqrt(std::max(0.0, quad_form(minv, w)));
    };
    b.restrict_affine = [m, c](const CVector& p, const std::vector<CVector>& frame) {
        const std::size_t k = frame.size();
        const CVector d = p - c;
        const CVector md = m * d;
        CMatrix mp(k, k);
        CVector bv(k);
        for (std::size_t a = 0; a < k; ++a) {
            bv[a] = inner(frame[a], md);
            const CVector mc = m * frame[a];
            for (std::size_t g = a; g < k; ++g) {
                // mp(a,g) = frame[a]^H M frame[g]
                mp(a, g) = std::conj(inner(frame[g], mc));
                mp(g, a) = std::conj(mp(a, g));
            }
        }
        const CMatrix mpinv = inv_hermitian(0.5 * (mp + adjoint(mp)));
        CVector cp = mpinv * bv;
        for (auto& z : cp) z = -z;
        const double rho = 1.0 - quad_form(m, d) + quad_form(mp, cp);
        if (rho <= 1e-14)
            throw std::domain_error("ellipsoid_oracle: section has empty interior");
        CMatrix mnew = (1.0 / rho) * mp;
        mnew = 0.5 * (mnew + adjoint(mnew));
        return ellipsoid_oracle(ComplexEllipsoid(cp, HermitianShape(mnew)));
    };
    b.project_subspace = [minv, c](const std::vector<CVector>& frame) {
        const std::size_t k = frame.size();
        CMatrix shadow(k, k);
        CVector cp(k);
        for (std::size_t a = 0; a < k; ++a) {
            cp[a] = inner(frame[a], c);
            const CVector mc = minv * frame[a];
            for (std::size_t g = 0; g < k; ++g) shadow(g, a) = inner(frame[g], mc);
        }
        shadow = 0.5 * (shadow + adjoint(shadow));
        CMatrix mp = inv_hermitian(shadow);
        mp = 0.5 * (mp + adjoint(mp));
        return ellipsoid_oracle(ComplexEllipsoid(cp, HermitianShape(mp)));
    };
    return b;
}

/// Oracle for a real (not necessarily complex-structured) ellipsoid on R^2n.
inline BodyOracle real_ellipsoid_oracle(const CMatrix& shape2n, const std::vector<double>& center2n) {
    return detail::real_ellipsoid_oracle(shape2n, center2n);
}

/// {z : sum |z_i|^p <= 1}; p may be infinity (the polydisc). Complex
/// symmetric by construction.
inline BodyOracle lp_ball_oracle(double p, std::size_t n) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_ball_oracle: p must be >= 1");
    const bool inf = std::isinf(p);
    const double q = inf ? 1.0 : (p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0));

    BodyOracle b;
    b.dim = n;
    b.outer_radius = std::pow(double(n), std::max(0.0, 0.5 - (inf ? 0.0 : 1.0 / p)));
    b.inner_radius = std::min(1.0, std::pow(double(n), 0.5 - (inf ? 0.0 : 1.0 / p)));
    b.interior = CVector(n, Complex(0.0));
    b.member = [p, inf](const CVector& z) {
        double s = 0.0;
        for (const auto& zi : z)
            s = inf ? std::max(s, std::abs(zi)) : s + std::pow(std::abs(zi), p);
        return s <= 1.0 + 1e-14;
    };
    b.support = [q](const CVector& w) {
        // dual norm of the modulus vector
        if (std::isinf(q)) {
            double s = 0.0;
            for (const auto& wi : w) s = std::max(s, std::abs(wi));
            return s;
        }
        double s = 0.0;
        for (const auto& wi : w) s += std::pow(std::abs(wi), q);
        return std::pow(s, 1.0 / q);
    };
    return b;
}

/// Convex hull of a finite point set, membership by a convex-combination
/// feasibility solve (pairwise Frank-Wolfe on the distance-to-hull QP),
/// support as a max over the points. Flat input is rejected.
inline BodyOracle hull_oracle(const std::vector<CVector>& points) {
    if (points.empty()) throw std::invalid_argument("hull_oracle: no points");
    const std::size_t n = points[0].size();
    for (const auto& pt : points)
        if (pt.size() != n) throw std::invalid_argument("hull_oracle: mixed dimensions");

    CVector mean(n, Complex(0.0));
    for (const auto& pt : points)
        for (std::size_t i = 0; i < n; ++i) mean[i] += pt[i];
    for (auto& z : mean) z /= double(points.size());

    // non-flat: smallest singular value of the centered real point matrix
    CMatrix scatter(2 * n, 2 * n);
    for (const auto& pt : points) {
        const std::vector<double> d = realify_vector(pt - mean);
        for (std::size_t i = 0; i < 2 * n; ++i)
            for (std::size_t j = 0; j < 2 * n; ++j) scatter(i, j) += d[i] * d[j];
    }
    EigResult se = eig_hermitian(scatter);
    if (std::sqrt(std::max(0.0, se.values.front())) <= 1e-9)
        throw std::invalid_argument("hull_oracle: flat point set (no interior)");

    double outer = 0.0;
    for (const auto& pt : points) outer = std::max(outer, norm(pt));
    const double scale = std::max(outer, 1e-12);

    auto support = [points](const CVector& w) {
        double s = -std::numeric_limits<double>::infinity();
        for (const auto& pt : points) s = std::max(s, inner(w, pt).real());
        return s;
    };

    // membership: min ||sum w_i p_i - x|| over the simplex, pairwise FW
    auto member = [points, scale, support](const CVector& x) {
        const std::size_t m = points.size();
        const double tol = 1e-9 * scale;
        // start on the nearest vertex
        std::size_t v0 = 0;
        double v0d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double d = norm(points[i] - x);
            if (d < v0d) { v0d = d; v0 = i; }
        }
        std::vector<double> w(m, 0.0);
        w[v0] = 1.0;
        CVector qv = points[v0];
        for (int it = 0; it < 2000; ++it) {
            const CVector g = qv - x;
            const double dist = norm(g);
            if (dist <= tol) return true;
            // certified outside: the hull lies on one side of the witness plane
            const CVector u = (-1.0 / dist) * g;  // points from the hull toward x
            if (inner(u, x).real() - support(u) > tol) return false;
            double best_lin = std::numeric_limits<double>::infinity();
            std::size_t s_idx = 0;
            double worst_lin = -std::numeric_limits<double>::infinity();
            std::size_t a_idx = 0;
            for (std::size_t i = 0; i < m; ++i) {
                const double lin = inner(g, points[i]).real();
                if (lin < best_lin) { best_lin = lin; s_idx = i; }
                if (w[i] > 1e-15 && lin > worst_lin) { worst_lin = lin; a_idx = i; }
            }
            const CVector delta = points[s_idx] - points[a_idx];
            const double dd = norm2(delta);
            if (dd < 1e-30) break;
            double step = -inner(delta, g).real() / dd;
            step = std::clamp(step, 0.0, w[a_idx]);
            if (step <= 0.0) break;
            w[s_idx] += step;
            w[a_idx] -= step;
            for (std::size_t d = 0; d < x.size(); ++d) qv[d] += step * delta[d];
        }
        return norm(qv - x) <= tol;
    };

    BodyOracle b;
    b.dim = n;
    b.outer_radius = outer;
    b.interior = mean;
    b.member = member;
    b.support = support;
    // inradius estimate around the centroid from a direction mesh
    {
        Rng mesh(0x6d657368ULL);
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < 16 * 2 * n; ++k) {
            const CVector u = mesh.unit_vector(n);
            margin = std::min(margin, support(u) - inner(u, mean).real());
        }
        b.inner_radius = 0.5 * std::max(margin, 0.0);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Boundary sampling of sections and projections
// ---------------------------------------------------------------------------

/// Boundary samples of the section body cap line. An interior point of the
/// section is located (scan + centroid refinement), then m equally spaced
/// rays are bisected to the boundary. Returns the empty marker when the line
/// misses the interior.
inline PlanarSampleSet section_samples(const BodyOracle& body, const ComplexLine& line,
                                       std::size_t m) {
    if (m < 8) throw std::invalid_argument("section_samples: need at least 8 samples");
    auto g = [&](Complex t) { return body.member(line.point(t)); };

    // locate any membership parameter
    const Complex t_star = inner(line.dir(), body.interior - line.base());
    const double scan_r = body.outer_radius + norm(line.base()) + std::abs(t_star) + 1.0;
    std::optional<Complex> t0;
    if (g(t_star)) t0 = t_star;
    for (int ring = 0; !t0 && ring < 12; ++ring) {
        const double r = scan_r * double(ring + 1) / 12.0;
        for (int a = 0; a < 16 && !t0; ++a) {
            const Complex t = t_star + r * std::polar(1.0, detail::kTwoPi * a / 16.0);
            if (g(t)) t0 = t;
        }
    }
    if (!t0) return {};

    // centroid refinement; the ray cap keeps bisection bounded
    const double cap = 2.0 * scan_r;
    Complex tc = *t0;
    for (int round = 0; round < 2; ++round) {
        Complex acc = 0.0;
        double min_hit = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 8; ++a) {
            const Complex dir = std::polar(1.0, detail::kTwoPi * a / 8.0);
            const double r = detail::ray_bisect([&](double rr) { return g(tc + rr * dir); }, cap);
            min_hit = std::min(min_hit, r);
            acc += tc + r * dir;
        }
        const Complex cand = acc / 8.0;
        if (round == 1 && min_hit < 1e-6 * std::max(1.0, body.outer_radius)) return {};
        if (g(cand)) tc = cand;
    }

    PlanarSampleSet out;
    out.points.resize(m);
    double min_r = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m; ++a) {
        const Complex dir = std::polar(1.0, detail::kTwoPi * double(a) / double(m));
        const double r = detail::ray_bisect([&](double rr) { return g(tc + rr * dir); }, cap);
        min_r = std::min(min_r, r);
        out.points[a] = tc + r * dir;
    }
    // tangential slivers below sampling resolution count as misses
    if (min_r < 1e-6 * std::max(1.0, body.outer_radius)) return {};
    return out;
}

/// Boundary samples of the orthogonal projection onto the line C*d, via the
/// support envelope: z(t) = h(t) e^{it} + h'(t) i e^{it} with
/// h(t) = support(e^{it} d) and a central-difference derivative.
inline PlanarSampleSet project_to_line(const BodyOracle& body, const CVector& d, std::size_t m) {
    if (m < 8) throw std::invalid_argument("project_to_line: need at least 8 samples");
    if (std::abs(norm(d) - 1.0) > 1e-12)
        throw std::invalid_argument("project_to_line: direction must be unit-norm");
    auto h = [&](double t) {
        CVector w(d.size());
        const Complex ph = std::polar(1.0, t);
        for (std::size_t i = 0; i < d.size(); ++i) w[i] = ph * d[i];
        return body.support(w);
    };
    const double delta = 1e-5;
    PlanarSampleSet out;
    out.points.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        const double t = detail::kTwoPi * double(a) / double(m);
        const double hv = h(t);
        const double hp = (h(t + delta) - h(t - delta)) / (2.0 * delta);
        const Complex e = std::polar(1.0, t);
        out.points[a] = hv * e + hp * Complex(0, 1) * e;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generic sub-oracles (used when a body has no closed-form hook)
// ---------------------------------------------------------------------------

namespace detail {

/// Interior point and a conservative inradius for a membership-only body,
/// by two rounds of axis-ray touchpoint averaging (4k rays per round).
template <typename F>
std::pair<CVector, double> refine_interior(F&& member, CVector start, std::size_t k,
                                           double cap) {
    CVector c = std::move(start);
    double min_hit = 0.0;
    for (int round = 0; round < 2; ++round) {
        CVector acc(k, Complex(0.0));
        min_hit = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            for (int ph = 0; ph < 4; ++ph) {
                CVector dir(k, Complex(0.0));
                dir[j] = std::polar(1.0, kTwoPi * ph / 4.0);
                const double r =
                    ray_bisect([&](double rr) { return member(c + Complex(rr) * dir); }, cap);
                min_hit = std::min(min_hit, r);
                acc = acc + (c + Complex(r) * dir);
            }
        }
        CVector cand = Complex(1.0 / double(4 * k)) * acc;
        if (member(cand)) c = std::move(cand);
    }
    return {c, 0.9 * min_hit};
}

}  // namespace detail

/// Section sub-oracle of one or more complex dimensions: membership is the
/// restriction, support is recovered by seeded local search over the section
/// boundary (documented accuracy about 1e-4 relative; sweeps widen their
/// tolerances on this path). base must be interior to the body.
inline BodyOracle generic_section_oracle(const BodyOracle& parent, const CVector& base,
                                         const std::vector<CVector>& frame) {
    const std::size_t k = frame.size();
    if (!parent.member(base))
        throw std::invalid_argument("generic_section_oracle: base point not inside the body");
    auto member = [parent, base, frame](const CVector& y) {
        return parent.member(base + detail::apply_frame(frame, y));
    };
    const double cap = 2.0 * (parent.outer_radius + norm(base) + 1.0);
    auto [yc, inr] = detail::refine_interior(member, CVector(k, Complex(0.0)), k, cap);
    if (inr <= 1e-9)
        throw std::domain_error("generic_section_oracle: section has empty interior");

    BodyOracle b;
    b.dim = k;
    b.outer_radius = parent.outer_radius + norm(base);
    b.inner_radius = inr;
    b.interior = yc;
    b.member = member;
    const CVector interior_pt = yc;
    b.support = [member, interior_pt, cap, k](const CVector& w) {
        // boundary point in direction u from the interior anchor
        auto bnd = [&](const CVector& u) {
            const double r = detail::ray_bisect(
                [&](double rr) { return member(interior_pt + Complex(rr) * u); }, cap);
            return interior_pt + Complex(r) * u;
        };
        auto value = [&](const CVector& u) { return inner(w, bnd(u)).real(); };
        const double wn = norm(w);
        if (wn < 1e-300) return 0.0;

        if (k == 1) {
            // planar boundary: coarse angular scan, then golden-section polish
            auto val_at = [&](double t) { return value(CVector{std::polar(1.0, t)}); };
            double best_t = 0.0, best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < 48; ++a) {
                const double t = detail::kTwoPi * a / 48.0;
                const double v = val_at(t);
                if (v > best) { best = v; best_t = t; }
            }
            const double g = 0.61803398874989484820458683437;
            double lo = best_t - detail::kTwoPi / 48.0, hi = best_t + detail::kTwoPi / 48.0;
            double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
            double f1 = val_at(m1), f2 = val_at(m2);
            for (int it = 0; it < 40 && hi - lo > 1e-9; ++it) {
                if (f1 < f2) {
                    lo = m1; m1 = m2; f1 = f2;
                    m2 = lo + g * (hi - lo); f2 = val_at(m2);
                } else {
                    hi = m2; m2 = m1; f2 = f1;
                    m1 = hi - g * (hi - lo); f1 = val_at(m1);
                }
            }
            return std::max({best, f1, f2});
        }

        // pattern search on the direction sphere: probe along tangent
        // directions, halve the step on failure
        CVector u = w;
        for (auto& z : u) z /= wn;
        double best = value(u);
        double sigma = 0.5;
        while (sigma > 1e-5) {
            bool improved = false;
            for (std::size_t j = 0; j < k && !improved; ++j) {
                for (int ph = 0; ph < 4 && !improved; ++ph) {
                    CVector t(k, Complex(0.0));
                    t[j] = std::polar(1.0, detail::kTwoPi * ph / 4.0);
                    // tangential component at u
                    const double along = inner(u, t).real();
                    for (std::size_t i = 0; i < k; ++i) t[i] -= along * u[i];
                    const double tn = norm(t);
                    if (tn < 1e-12) continue;
                    CVector cand(k);
                    for (std::size_t i = 0; i < k; ++i) cand[i] = u[i] + (sigma / tn) * t[i];
                    const double cn = norm(cand);
                    for (auto& z : cand) z /= cn;
                    const double v = value(cand);
                    if (v > best) {
                        best = v;
                        u = cand;
                        improved = true;
                    }
                }
            }
            if (!improved) sigma *= 0.5;
        }
        return best;
    };
    return b;
}

/// Projection sub-oracle: support is exact (lifted through the frame),
/// membership is a support-inequality check over a seeded direction mesh.
inline BodyOracle generic_projection_oracle(const BodyOracle& parent,
                                            const std::vector<CVector>& frame) {
    const std::size_t k = frame.size();
    auto lift_support = [parent, frame](const CVector& omega) {
        return parent.support(detail::apply_frame(frame, omega));
    };
    const std::size_t mesh_size = (k == 1) ? 128 : 256 * k;
    auto mesh = std::make_shared<std::vector<CVector>>();
    auto mesh_values = std::make_shared<std::vector<double>>();
    {
        Rng rng(0x70726f6aULL + k);
        if (k == 1) {
            for (std::size_t a = 0; a < mesh_size; ++a)
                mesh->push_back(CVector{std::polar(1.0, detail::kTwoPi * double(a) / double(mesh_size))});
        } else {
            for (std::size_t a = 0; a < mesh_size; ++a) mesh->push_back(rng.unit_vector(k));
        }
        for (const auto& omega : *mesh) mesh_values->push_back(lift_support(omega));
    }
    const double tol = 1e-9 * std::max(1.0, parent.outer_radius);

    BodyOracle b;
    b.dim = k;
    b.outer_radius = parent.outer_radius;
    b.inner_radius = parent.inner_radius;
    b.interior = detail::frame_coordinates(frame, parent.interior);
    b.support = lift_support;
    b.member = [mesh, mesh_values, tol](const CVector& w) {
        for (std::size_t i = 0; i < mesh->size(); ++i)
            if (inner((*mesh)[i], w).real() > (*mesh_values)[i] + tol) return false;
        return true;
    };
    return b;
}

// ---------------------------------------------------------------------------
// Seeded generators for the verification corpus
// ---------------------------------------------------------------------------

namespace detail {

inline ComplexEllipsoid gen_ellipsoid_with(Rng& rng, std::size_t n) {
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.cgauss();
    CMatrix m = adjoint(a) * a;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.1;
    CVector c = rng.cgauss_vec(n);
    for (auto& z : c) z *= 0.3;
    return {c, HermitianShape(m)};
}

}  // namespace detail

/// Random complex ellipsoid: shape A^H A + 0.1 I with standard complex
/// Gaussian A, Gaussian center scaled by 0.3. Deterministic in the seed.
inline ComplexEllipsoid gen_random_ellipsoid(std::uint64_t seed, std::size_t n) {
    if (n < 1) throw std::invalid_argument("gen_random_ellipsoid: n >= 1");
    Rng rng(seed);
    return detail::gen_ellipsoid_with(rng, n);
}

/// Ellipsoid membership with the boundary modulated by eps times a bounded
/// smooth non-Hermitian quadratic Re((x-c)^T N (x-c)); the realified form
/// stays positive-definite (checked), so the body remains convex. eps = 0
/// reproduces the base ellipsoid exactly.
inline BodyOracle gen_perturbed_ellipsoid(std::uint64_t seed, std::size_t n, double eps) {
    if (n < 1) throw std::invalid_argument("gen_perturbed_ellipsoid: n >= 1");
    if (eps < 0.0) throw std::invalid_argument("gen_perturbed_ellipsoid: eps >= 0");
    Rng rng(seed);
    ComplexEllipsoid base = detail::gen_ellipsoid_with(rng, n);

    // complex symmetric N drawn after the base, so the base matches
    // gen_random_ellipsoid(seed, n)
    CMatrix nsym(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            nsym(i, j) = rng.cgauss();
            nsym(j, i) = nsym(i, j);
        }
    CMatrix k(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double pr = nsym(i, j).real();
            const double qi = nsym(i, j).imag();
            k(2 * i, 2 * j) = pr;
            k(2 * i + 1, 2 * j + 1) = -pr;
            k(2 * i, 2 * j + 1) = -qi;
            k(2 * i + 1, 2 * j) = -qi;
        }
    const double kn = frobenius_norm(k);
    if (kn > 0.0) k = (1.0 / kn) * k;

    CMatrix s = realify(base.shape().matrix()) + eps * k;
    EigResult eig = eig_hermitian(s);
    if (eig.values.front() <= 1e-10)
        throw std::invalid_argument("gen_perturbed_ellipsoid: eps too large for convexity");
    return real_ellipsoid_oracle(s, realify_vector(base.center()));
}

/// Real ellipsoid whose shape fails is_complex_structured: the imaginary
/// axis of the first coordinate is stretched.
inline BodyOracle gen_non_j_invariant(std::uint64_t seed, std::size_t n) {
    if (n < 1) throw std::invalid_argument("gen_non_j_invariant: n >= 1");
    Rng rng(seed);
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.cgauss();
    CMatrix m = adjoint(a) * a;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.1;
    CMatrix s = realify(m);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        s(1, i) *= 1.5;
        s(i, 1) *= 1.5;
    }
    return real_ellipsoid_oracle(s, std::vector<double>(2 * n, 0.0));
}

}  // namespace cellip
