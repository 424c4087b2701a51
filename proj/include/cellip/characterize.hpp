#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "cellip/bodies.hpp"
#include "cellip/ellipsoid.hpp"
#include "cellip/rng.hpp"

namespace cellip {

struct DiskFit {
    Complex center = 0.0;
    double radius = 0.0;
    double max_rel_deviation = 0.0;  // max over samples of ||p-c| - r| / r
};

/// A verdict is always "no counterexample at this resolution": the report
/// records the sampling budget, the seed, and the worst witness found.
struct CharacterizationReport {
    bool verdict = false;
    std::optional<ComplexLine> worst_line;
    std::optional<CVector> worst_direction;
    double worst_deviation = 0.0;
    std::size_t samples_used = 0;
    std::uint64_t seed = 0;
};

namespace detail {

constexpr std::size_t kSectionSamples = 32;
constexpr std::size_t kProjectionSamples = 64;

/// Tolerance widening for sub-oracles whose support is recovered by sampled
/// search instead of a closed form (documented accuracy about 1e-4).
constexpr double kGenericPathTol = 2e-3;

inline std::vector<double> solve_real_sym(CMatrix a /*real symmetric*/,
                                          std::vector<double> rhs) {
    CVector b(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) b[i] = rhs[i];
    auto f = lu_decompose(a);
    if (f.singular) throw std::runtime_error("solve_real_sym: singular system");
    const CVector x = lu_solve(f, b);
    std::vector<double> out(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = x[i].real();
    return out;
}

/// Random point strictly inside the body: a seeded direction from the
/// anchor, pushed a random fraction of the way to the boundary.
inline CVector random_interior_point(const BodyOracle& body, Rng& rng) {
    const CVector u = rng.unit_vector(body.dim);
    const double cap = 2.0 * (body.outer_radius + norm(body.interior) + 1.0);
    const double rho = ray_bisect(
        [&](double r) { return body.member(body.interior + Complex(r) * u); }, cap);
    const double s = 0.85 * rng.uniform();
    return body.interior + Complex(s * rho) * u;
}

/// Orthonormal complex frame of size k orthogonal to the given vectors.
inline std::vector<CVector> orthonormal_complement(const std::vector<CVector>& fixed,
                                                   std::size_t k, std::size_t n, Rng& rng) {
    std::vector<CVector> frame;
    while (frame.size() < k) {
        CVector v = rng.cgauss_vec(n);
        for (const auto& u : fixed) {
            const Complex c = inner(u, v);
            for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
        }
        for (const auto& u : frame) {
            const Complex c = inner(u, v);
            for (std::size_t i = 0; i < n; ++i) v[i] -= c * u[i];
        }
        const double d = norm(v);
        if (d < 1e-8) continue;
        for (auto& z : v) z /= d;
        frame.push_back(std::move(v));
    }
    return frame;
}

/// Boundary samples of a one-complex-dimensional body by direct ray casting.
inline PlanarSampleSet planar_boundary_samples(const BodyOracle& body, std::size_t m) {
    const double cap = 2.0 * (body.outer_radius + norm(body.interior) + 1.0);
    const Complex anchor = body.interior.at(0);
    PlanarSampleSet out;
    out.points.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        const Complex dir = std::polar(1.0, kTwoPi * double(a) / double(m));
        const double r = ray_bisect(
            [&](double rr) { return body.member(CVector{anchor + rr * dir}); }, cap);
        out.points[a] = anchor + r * dir;
    }
    return out;
}

}  // namespace detail

/// Circle fit: linear least squares on |p|^2 = 2 Re(conj(c) p) + k, refined
/// by one Gauss-Newton step on the geometric residuals; the radius is the
/// mean distance to the fitted center.
inline DiskFit fit_disk(const PlanarSampleSet& samples) {
    const std::size_t m = samples.count();
    if (m < 8) throw std::invalid_argument("fit_disk: need at least 8 samples");

    double scale = 0.0;
    for (const auto& p : samples.points)
        for (const auto& q : samples.points) scale = std::max(scale, std::abs(p - q));
    if (scale < 1e-14)
        throw std::invalid_argument("fit_disk: degenerate (coincident samples)");

    // normal equations for (a, b, k)
    CMatrix ata(3, 3);
    std::vector<double> atb(3, 0.0);
    for (const auto& p : samples.points) {
        const double u = p.real(), v = p.imag();
        const double row[3] = {2.0 * u, 2.0 * v, 1.0};
        const double rhs = u * u + v * v;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata(i, j) += row[i] * row[j];
            atb[i] += row[i] * rhs;
        }
    }
    std::vector<double> sol = detail::solve_real_sym(ata, atb);
    double a = sol[0], b = sol[1];

    auto mean_dist = [&](double ca, double cb) {
        double s = 0.0;
        for (const auto& p : samples.points) s += std::abs(p - Complex(ca, cb));
        return s / double(m);
    };
    double r = mean_dist(a, b);

    // one Gauss-Newton step on residuals |p - c| - r in (a, b, r)
    CMatrix jtj(3, 3);
    std::vector<double> jtr(3, 0.0);
    for (const auto& p : samples.points) {
        const double du = p.real() - a, dv = p.imag() - b;
        const double d = std::max(std::hypot(du, dv), 1e-300);
        const double row[3] = {-du / d, -dv / d, -1.0};
        const double res = d - r;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) jtj(i, j) += row[i] * row[j];
            jtr[i] += row[i] * res;
        }
    }
    try {
        std::vector<double> step = detail::solve_real_sym(jtj, jtr);
        a -= step[0];
        b -= step[1];
    } catch (const std::runtime_error&) {
        // keep the algebraic estimate
    }
    r = mean_dist(a, b);
    if (!(r > 0.0)) throw std::invalid_argument("fit_disk: degenerate (zero radius)");

    DiskFit fit;
    fit.center = Complex(a, b);
    fit.radius = r;
    for (const auto& p : samples.points)
        fit.max_rel_deviation =
            std::max(fit.max_rel_deviation, std::abs(std::abs(p - fit.center) - r) / r);
    return fit;
}

/// Every nonempty complex-line section must be a disk. Random lines: random
/// interior base point, random unit direction. Deterministic in the seed.
inline CharacterizationReport bombon_check(const BodyOracle& body, std::size_t num_lines,
                                           double tol, std::uint64_t seed) {
    Rng rng(seed);
    CharacterizationReport rep;
    rep.seed = seed;
    for (std::size_t l = 0; l < num_lines; ++l) {
        const CVector base = detail::random_interior_point(body, rng);
        const CVector dir = rng.unit_vector(body.dim);
        const ComplexLine line(base, dir);
        const PlanarSampleSet s = section_samples(body, line, detail::kSectionSamples);
        if (s.empty()) continue;
        rep.samples_used += s.count();
        const DiskFit fit = fit_disk(s);
        if (fit.max_rel_deviation > rep.worst_deviation) {
            rep.worst_deviation = fit.max_rel_deviation;
            rep.worst_line = line;
        }
    }
    rep.verdict = rep.worst_deviation <= tol;
    return rep;
}

struct SymmetryResult {
    std::optional<CVector> center;
    CharacterizationReport report;
};

/// Symmetry detection through projections: every orthogonal projection onto
/// a line must be a disk, and the disk centers must be the projections of a
/// single point x0, recovered by least squares.
inline SymmetryResult symmetry_center(const BodyOracle& body, std::size_t num_dirs, double tol,
                                      std::uint64_t seed) {
    Rng rng(seed);
    SymmetryResult out;
    out.report.seed = seed;

    std::vector<CVector> dirs;
    std::vector<Complex> centers;
    bool all_disks = true;

    if (body.dim == 1) {
        // the projection onto C is the body itself; sample it directly
        const PlanarSampleSet s = detail::planar_boundary_samples(body, detail::kProjectionSamples);
        out.report.samples_used += s.count();
        const DiskFit fit = fit_disk(s);
        out.report.worst_deviation = fit.max_rel_deviation;
        out.report.worst_direction = CVector{Complex(1.0)};
        if (fit.max_rel_deviation <= tol) {
            out.report.verdict = true;
            out.center = CVector{fit.center};
        }
        return out;
    }

    for (std::size_t j = 0; j < num_dirs; ++j) {
        const CVector d = rng.unit_vector(body.dim);
        const PlanarSampleSet s = project_to_line(body, d, detail::kProjectionSamples);
        out.report.samples_used += s.count();
        const DiskFit fit = fit_disk(s);
        if (fit.max_rel_deviation > out.report.worst_deviation) {
            out.report.worst_deviation = fit.max_rel_deviation;
            out.report.worst_direction = d;
        }
        if (fit.max_rel_deviation > tol) all_disks = false;
        dirs.push_back(d);
        centers.push_back(fit.center);
    }
    if (!all_disks) return out;

    // least squares for x0 from inner(d_j, x0) = center_j
    const std::size_t n = body.dim;
    CMatrix a(n, n);
    CVector rhs(n, Complex(0.0));
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        for (std::size_t p = 0; p < n; ++p) {
            rhs[p] += dirs[j][p] * centers[j];
            for (std::size_t q = 0; q < n; ++q)
                a(p, q) += dirs[j][p] * std::conj(dirs[j][q]);
        }
    }
    a = 0.5 * (a + adjoint(a));
    CVector x0;
    try {
        x0 = inv_hermitian(a) * rhs;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("symmetry_center: directions do not span; raise num_dirs");
    }
    double residual = 0.0;
    for (std::size_t j = 0; j < dirs.size(); ++j)
        residual = std::max(residual, std::abs(inner(dirs[j], x0) - centers[j]));
    if (residual <= tol * std::max(body.inner_radius, 1e-12)) {
        out.report.verdict = true;
        out.center = x0;
    } else {
        out.report.worst_deviation = std::max(out.report.worst_deviation,
                                              residual / std::max(body.inner_radius, 1e-12));
    }
    return out;
}

/// Hyperplane sweep: every sampled hyperplane section (through random
/// interior points, or through the fixed point when given) must be
/// symmetric. Sections use the body's closed-form restriction when
/// available; otherwise the generic sampled sub-oracle with a widened disk
/// tolerance.
inline CharacterizationReport sections_symmetric_sweep(
    const BodyOracle& body, std::size_t num_hyperplanes, double tol, std::uint64_t seed,
    const std::optional<CVector>& through_point = {}) {
    if (body.dim < 2)
        throw std::invalid_argument("sections_symmetric_sweep: need dimension at least 2");
    Rng rng(seed);
    CharacterizationReport rep;
    rep.seed = seed;
    rep.verdict = true;

    for (std::size_t h = 0; h < num_hyperplanes; ++h) {
        const CVector base = through_point ? *through_point
                                           : detail::random_interior_point(body, rng);
        const CVector normal = rng.unit_vector(body.dim);
        const std::vector<CVector> frame =
            detail::orthonormal_complement({normal}, body.dim - 1, body.dim, rng);

        BodyOracle sub;
        double sub_tol = tol;
        if (body.restrict_affine) {
            sub = body.restrict_affine(base, frame);
        } else {
            sub = generic_section_oracle(body, base, frame);
            sub_tol = std::max(tol, detail::kGenericPathTol);
        }
        const std::size_t sub_dirs = std::max<std::size_t>(8, 4 * sub.dim + 4);
        SymmetryResult sres = symmetry_center(sub, sub_dirs, sub_tol, derive_seed(seed, h));
        rep.samples_used += sres.report.samples_used;
        if (sres.report.worst_deviation > rep.worst_deviation) {
            rep.worst_deviation = sres.report.worst_deviation;
            rep.worst_line = ComplexLine(base, normal);  // the witness hyperplane
        }
        if (!sres.center) rep.verdict = false;
    }
    return rep;
}

/// All complex lines through a fixed interior point cut disks, and so do
/// their parallel translates (the parallel-section step that upgrades
/// through-point disks to the all-lines hypothesis). Together with convexity
/// a true verdict certifies an ellipsoid at the test's resolution. The
/// through-point check alone would be satisfied by every symmetric body.
inline CharacterizationReport disk_sections_through_point(const BodyOracle& body,
                                                          const CVector& p0,
                                                          std::size_t num_lines, double tol,
                                                          std::uint64_t seed) {
    if (!body.member(p0))
        throw std::invalid_argument("disk_sections_through_point: p0 outside the body");
    {
        // strictness probe: p0 must clear the boundary in every axis direction
        const double cap = 2.0 * (body.outer_radius + norm(p0) + 1.0);
        for (std::size_t j = 0; j < body.dim; ++j)
            for (int ph = 0; ph < 4; ++ph) {
                CVector dir(body.dim, Complex(0.0));
                dir[j] = std::polar(1.0, detail::kTwoPi * ph / 4.0);
                const double r = detail::ray_bisect(
                    [&](double rr) { return body.member(p0 + Complex(rr) * dir); }, cap);
                if (r < 1e-9 * std::max(1.0, body.outer_radius))
                    throw std::invalid_argument(
                        "disk_sections_through_point: p0 is not strictly interior");
            }
    }
    Rng rng(seed);
    CharacterizationReport rep;
    rep.seed = seed;
    auto check = [&](const ComplexLine& line) {
        const PlanarSampleSet s = section_samples(body, line, detail::kSectionSamples);
        if (s.empty()) return;
        rep.samples_used += s.count();
        const DiskFit fit = fit_disk(s);
        if (fit.max_rel_deviation > rep.worst_deviation) {
            rep.worst_deviation = fit.max_rel_deviation;
            rep.worst_line = line;
        }
    };
    for (std::size_t l = 0; l < num_lines; ++l) {
        const CVector dir = rng.unit_vector(body.dim);
        check(ComplexLine(p0, dir));
        check(ComplexLine(detail::random_interior_point(body, rng), dir));
    }
    rep.verdict = rep.worst_deviation <= tol;
    return rep;
}

/// Orthogonal projections onto random complex k-planes must be ellipsoids:
/// each projection is tested for symmetry, then for disk sections through
/// its recovered center.
inline CharacterizationReport projections_ellipsoid_sweep(const BodyOracle& body, std::size_t k,
                                                          std::size_t num_planes, double tol,
                                                          std::uint64_t seed) {
    if (k < 2 || k >= body.dim)
        throw std::invalid_argument("projections_ellipsoid_sweep: need 2 <= k < n");
    Rng rng(seed);
    CharacterizationReport rep;
    rep.seed = seed;
    rep.verdict = true;

    for (std::size_t pl = 0; pl < num_planes; ++pl) {
        const std::vector<CVector> frame = detail::orthonormal_complement({}, k, body.dim, rng);
        BodyOracle proj;
        double ptol = tol;
        if (body.project_subspace) {
            proj = body.project_subspace(frame);
        } else {
            proj = generic_projection_oracle(body, frame);
            ptol = std::max(tol, detail::kGenericPathTol);
        }
        SymmetryResult sym =
            symmetry_center(proj, std::max<std::size_t>(8, 4 * k + 4), ptol,
                            derive_seed(seed, 2 * pl));
        rep.samples_used += sym.report.samples_used;
        if (sym.report.worst_deviation > rep.worst_deviation) {
            rep.worst_deviation = sym.report.worst_deviation;
            rep.worst_direction = frame[0];
        }
        if (!sym.center) {
            rep.verdict = false;
            continue;
        }
        CharacterizationReport disks = disk_sections_through_point(
            proj, *sym.center, 24, ptol, derive_seed(seed, 2 * pl + 1));
        rep.samples_used += disks.samples_used;
        if (disks.worst_deviation > rep.worst_deviation) {
            rep.worst_deviation = disks.worst_deviation;
            rep.worst_direction = frame[0];
        }
        if (!disks.verdict) rep.verdict = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Homothety detection from support tables
// ---------------------------------------------------------------------------

struct SupportTable {
    std::vector<CVector> directions;
    std::vector<double> values;
};

inline SupportTable sample_support(const std::function<double(const CVector&)>& h,
                                   std::size_t n, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    SupportTable t;
    for (std::size_t i = 0; i < count; ++i) {
        t.directions.push_back(rng.unit_vector(n));
        t.values.push_back(h(t.directions.back()));
    }
    return t;
}

inline SupportTable sample_support(const BodyOracle& body, std::size_t count,
                                   std::uint64_t seed) {
    return sample_support(body.support, body.dim, count, seed);
}

struct Homothety {
    double ratio = 1.0;
    CVector translation;
    bool is_translation() const { return std::abs(ratio - 1.0) <= 1e-6; }
};

/// Solves h_A(u) = r h_B(u) + Re(inner(u, t)) in least squares with r > 0;
/// returns the pair iff the residual stays below tol * scale.
inline std::optional<Homothety> homothety_detect(const SupportTable& a, const SupportTable& b,
                                                 double tol) {
    if (a.directions.size() != b.directions.size() || a.directions.empty())
        throw std::invalid_argument("homothety_detect: mismatched tables");
    const std::size_t n = a.directions[0].size();
    if (a.directions.size() < 4 * n)
        throw std::invalid_argument("homothety_detect: need at least 4n directions");
    for (std::size_t i = 0; i < a.directions.size(); ++i)
        if (norm(a.directions[i] - b.directions[i]) > 1e-12)
            throw std::invalid_argument("homothety_detect: tables use different directions");

    // unknowns: r, then interleaved real coordinates of t
    const std::size_t dim = 1 + 2 * n;
    CMatrix ata(dim, dim);
    std::vector<double> atb(dim, 0.0);
    double scale = 1e-300;
    for (std::size_t i = 0; i < a.directions.size(); ++i) {
        std::vector<double> row(dim);
        row[0] = b.values[i];
        const std::vector<double> u = realify_vector(a.directions[i]);
        for (std::size_t j = 0; j < 2 * n; ++j) row[1 + j] = u[j];
        for (std::size_t p = 0; p < dim; ++p) {
            for (std::size_t q = 0; q < dim; ++q) ata(p, q) += row[p] * row[q];
            atb[p] += row[p] * a.values[i];
        }
        scale = std::max({scale, std::abs(a.values[i]), std::abs(b.values[i])});
    }
    std::vector<double> sol;
    try {
        sol = detail::solve_real_sym(ata, atb);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
    const double r = sol[0];
    if (!(r > 0.0)) return std::nullopt;
    Homothety h;
    h.ratio = r;
    h.translation = complexify_vector(std::vector<double>(sol.begin() + 1, sol.end()));
    double residual = 0.0;
    for (std::size_t i = 0; i < a.directions.size(); ++i) {
        const double fitv =
            r * b.values[i] + inner(a.directions[i], h.translation).real();
        residual = std::max(residual, std::abs(fitv - a.values[i]));
    }
    if (residual > tol * scale) return std::nullopt;
    return h;
}

}  // namespace cellip
