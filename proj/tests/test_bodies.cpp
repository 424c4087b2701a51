#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cellip/bodies.hpp"
#include "cellip/rng.hpp"

using namespace cellip;

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;
}

TEST_CASE("hull oracle of the complex cross-polytope") {
    const std::size_t n = 2;
    std::vector<CVector> pts;
    for (std::size_t j = 0; j < n; ++j)
        for (int ph = 0; ph < 4; ++ph) {
            CVector v(n, Complex(0.0));
            v[j] = std::polar(1.0, kTwoPi * ph / 4.0);
            pts.push_back(v);
        }
    BodyOracle b = hull_oracle(pts);
    REQUIRE(b.member(CVector(n, Complex(0.0))));
    REQUIRE(b.member(CVector{Complex(0.999), Complex(0)}));
    REQUIRE_FALSE(b.member(CVector{Complex(0.8), Complex(0.8)}));
    REQUIRE(b.inner_radius > 0.0);

    // vertices are members, scaled-out vertices are not
    for (const auto& p : pts) {
        REQUIRE(b.member(p));
        REQUIRE_FALSE(b.member(Complex(1.01) * p));
    }
}

TEST_CASE("hull oracle support equals the vertex maximum") {
    // real cube vertices in C^2 = R^4
    std::vector<CVector> pts;
    for (int a = 0; a < 16; ++a)
        pts.push_back(CVector{Complex(a & 1 ? 1 : -1, a & 2 ? 1 : -1),
                              Complex(a & 4 ? 1 : -1, a & 8 ? 1 : -1)});
    BodyOracle b = hull_oracle(pts);
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
        CVector u = rng.unit_vector(2);
        // cube support = sum of absolute real coordinates of u
        double expect = 0.0;
        for (const auto& z : u) expect += std::abs(z.real()) + std::abs(z.imag());
        REQUIRE(b.support(u) == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("hull oracle rejects flat input") {
    std::vector<CVector> flat(5, CVector{Complex(1), Complex(2)});
    REQUIRE_THROWS_AS(hull_oracle(flat), std::invalid_argument);
}

TEST_CASE("ellipsoid oracle support") {
    BodyOracle ball = ellipsoid_oracle(unit_ball(2));
    Rng rng(5);
    for (int k = 0; k < 20; ++k) REQUIRE(ball.support(rng.unit_vector(2)) == Catch::Approx(1.0));

    CVector c{Complex(0.4, -0.2), Complex(1.0)};
    BodyOracle moved = ellipsoid_oracle({c, HermitianShape(CMatrix::identity(2))});
    for (int k = 0; k < 20; ++k) {
        CVector u = rng.unit_vector(2);
        REQUIRE(moved.support(u) == Catch::Approx(inner(u, c).real() + 1.0).margin(1e-12));
    }
}

TEST_CASE("ellipsoid oracle support matches boundary sampling") {
    Rng rng(404);
    ComplexEllipsoid e = gen_random_ellipsoid(11, 2);
    BodyOracle b = ellipsoid_oracle(e);
    const CMatrix binv = inv_general(sqrt_hermitian(e.shape().matrix()));
    for (int k = 0; k < 10; ++k) {
        CVector u = rng.unit_vector(2);
        // two-stage sampling: coarse global pass, then a local resample
        double best = -1e300;
        CVector zbest;
        for (int s = 0; s < 100000; ++s) {
            CVector z = rng.unit_vector(2);  // boundary of the unit ball
            CVector x = e.center() + binv * z;
            const double v = inner(u, x).real();
            if (v > best) { best = v; zbest = z; }
        }
        for (int s = 0; s < 20000; ++s) {
            CVector z = zbest + Complex(0.02) * rng.unit_vector(2);
            const double zn = norm(z);
            for (auto& c : z) c /= zn;
            best = std::max(best, inner(u, e.center() + binv * z).real());
        }
        REQUIRE(b.support(u) == Catch::Approx(best).margin(1e-3));
    }
}

TEST_CASE("support-membership consistency across oracle families") {
    Rng rng(77);
    std::vector<BodyOracle> bodies;
    bodies.push_back(ellipsoid_oracle(gen_random_ellipsoid(3, 2)));
    bodies.push_back(lp_ball_oracle(4.0, 2));
    bodies.push_back(gen_perturbed_ellipsoid(4, 2, 0.2));
    bodies.push_back(gen_non_j_invariant(5, 2));
    for (const auto& b : bodies) {
        for (int k = 0; k < 300; ++k) {
            CVector u = rng.unit_vector(b.dim);
            CVector x = Complex(rng.uniform(0.0, b.outer_radius)) * rng.unit_vector(b.dim);
            if (!b.member(x)) continue;
            REQUIRE(inner(u, x).real() <= b.support(u) + 1e-8);
            REQUIRE(norm(x) <= b.outer_radius + 1e-9);
        }
        // sublinearity on sampled pairs
        for (int k = 0; k < 100; ++k) {
            CVector u = rng.cgauss_vec(b.dim);
            CVector v = rng.cgauss_vec(b.dim);
            REQUIRE(b.support(u + v) <= b.support(u) + b.support(v) + 1e-8);
        }
    }
}

TEST_CASE("lp ball oracle") {
    BodyOracle b2 = lp_ball_oracle(2.0, 2);
    REQUIRE(b2.member(CVector{Complex(0.6), Complex(0.7)}));
    REQUIRE_FALSE(b2.member(CVector{Complex(0.8), Complex(0.7)}));

    // the polydisc approximation needs p with 2 * 0.99^p <= 1, i.e. p >= 69
    BodyOracle bigp = lp_ball_oracle(100.0, 2);
    REQUIRE(bigp.member(CVector{Complex(0.99), Complex(0.99)}));

    BodyOracle poly = lp_ball_oracle(std::numeric_limits<double>::infinity(), 2);
    REQUIRE(poly.member(CVector{Complex(0.999, 0), Complex(0, 0.999)}));
    REQUIRE_FALSE(poly.member(CVector{Complex(1.01), Complex(0)}));

    REQUIRE_THROWS_AS(lp_ball_oracle(0.5, 2), std::invalid_argument);

    // unit-phase invariance: membership is a function of coordinate moduli
    Rng rng(8);
    BodyOracle b4 = lp_ball_oracle(4.0, 2);
    for (int k = 0; k < 200; ++k) {
        CVector z = Complex(rng.uniform(0.0, 1.3)) * rng.unit_vector(2);
        const Complex xi = rng.unit_phase();
        REQUIRE(b4.member(z) == b4.member(xi * z));
    }
}

TEST_CASE("section samples of the unit ball lie on the unit circle") {
    BodyOracle ball = ellipsoid_oracle(unit_ball(2));
    ComplexLine line(CVector(2, Complex(0.0)), CVector{Complex(1), Complex(0)});
    PlanarSampleSet s = section_samples(ball, line, 32);
    REQUIRE(s.count() == 32);
    for (const auto& t : s.points) REQUIRE(std::abs(std::abs(t) - 1.0) < 1e-9);

    // a line outside the body yields the empty marker
    ComplexLine outside(CVector{Complex(0), Complex(2)}, CVector{Complex(1), Complex(0)});
    REQUIRE(section_samples(ball, outside, 32).empty());

    // a tangent line has no interior section
    ComplexLine tangent(CVector{Complex(0), Complex(1)}, CVector{Complex(1), Complex(0)});
    REQUIRE(section_samples(ball, tangent, 32).empty());
}

TEST_CASE("section samples sit on random ellipsoid boundaries") {
    Rng rng(991);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t n = 1 + rep % 3;
        ComplexEllipsoid e = gen_random_ellipsoid(100 + rep, n);
        BodyOracle b = ellipsoid_oracle(e);
        // line through a strictly interior point
        CVector base = e.center();
        ComplexLine line(base, rng.unit_vector(n));
        PlanarSampleSet s = section_samples(b, line, 24);
        REQUIRE_FALSE(s.empty());
        for (const auto& t : s.points) {
            const double q = quad_form(e.shape(), line.point(t) - e.center());
            REQUIRE(std::abs(q - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("section samples agree with the closed-form line section") {
    Rng rng(1234);
    ComplexEllipsoid e = gen_random_ellipsoid(55, 2);
    BodyOracle b = ellipsoid_oracle(e);
    for (int rep = 0; rep < 5; ++rep) {
        CVector base = e.center() + Complex(0.3) * rng.unit_vector(2);
        ComplexLine line(base, rng.unit_vector(2));
        Disk d = line_section(e, line);
        REQUIRE(d.kind == Disk::Kind::disk);
        PlanarSampleSet s = section_samples(b, line, 64);
        REQUIRE_FALSE(s.empty());
        // compare center/radius recovered from extreme points
        Complex lo = s.points[0], hi = s.points[0];
        double rmin = 1e300, rmax = -1e300;
        for (const auto& t : s.points) {
            const double dist = std::abs(t - d.center);
            rmin = std::min(rmin, dist);
            rmax = std::max(rmax, dist);
        }
        (void)lo;
        (void)hi;
        REQUIRE(rmin == Catch::Approx(d.radius).margin(1e-7));
        REQUIRE(rmax == Catch::Approx(d.radius).margin(1e-7));
    }
}

TEST_CASE("projection of balls onto lines") {
    BodyOracle ball = ellipsoid_oracle(unit_ball(3));
    Rng rng(31);
    CVector d = rng.unit_vector(3);
    PlanarSampleSet s = project_to_line(ball, d, 32);
    for (const auto& z : s.points) REQUIRE(std::abs(std::abs(z) - 1.0) < 1e-8);

    CVector c{Complex(0.5, 0.5), Complex(-0.25, 0), Complex(0, 1)};
    BodyOracle moved = ellipsoid_oracle({c, HermitianShape(CMatrix::identity(3))});
    PlanarSampleSet sm = project_to_line(moved, d, 32);
    const Complex pc = inner(d, c);
    for (const auto& z : sm.points) REQUIRE(std::abs(std::abs(z - pc) - 1.0) < 1e-8);
}

TEST_CASE("projection of a hull matches the planar hull of projected points") {
    Rng rng(67);
    std::vector<CVector> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(rng.cgauss_vec(2));
    BodyOracle hull = hull_oracle(pts);
    CVector d = rng.unit_vector(2);
    // planar support of the projected points is the lifted support
    for (int a = 0; a < 16; ++a) {
        const Complex ph = std::polar(1.0, kTwoPi * a / 16.0);
        double planar = -1e300;
        for (const auto& p : pts) planar = std::max(planar, (std::conj(ph) * inner(d, p)).real());
        CVector w(2);
        for (std::size_t i = 0; i < 2; ++i) w[i] = ph * d[i];
        REQUIRE(hull.support(w) == Catch::Approx(planar).margin(1e-10));
    }
    // envelope samples stay inside the projected hull (support check per direction)
    PlanarSampleSet s = project_to_line(hull, d, 32);
    for (const auto& z : s.points) {
        for (int a = 0; a < 64; ++a) {
            const Complex ph = std::polar(1.0, kTwoPi * a / 64.0);
            double planar = -1e300;
            for (const auto& p : pts)
                planar = std::max(planar, (std::conj(ph) * inner(d, p)).real());
            REQUIRE((std::conj(ph) * z).real() <= planar + 1e-3);
        }
    }
}

TEST_CASE("generators are deterministic and labelled correctly") {
    ComplexEllipsoid a = gen_random_ellipsoid(42, 3);
    ComplexEllipsoid b = gen_random_ellipsoid(42, 3);
    REQUIRE(frobenius_norm(a.shape().matrix() - b.shape().matrix()) == 0.0);
    REQUIRE(norm(a.center() - b.center()) == 0.0);

    BodyOracle p1 = gen_perturbed_ellipsoid(9, 2, 0.1);
    BodyOracle p2 = gen_perturbed_ellipsoid(9, 2, 0.1);
    Rng rng(1);
    for (int k = 0; k < 100; ++k) {
        CVector x = rng.cgauss_vec(2);
        REQUIRE(p1.member(x) == p2.member(x));
        CVector u = rng.unit_vector(2);
        REQUIRE(p1.support(u) == p2.support(u));
    }

    // eps = 0 reproduces the base ellipsoid's answers
    BodyOracle p0 = gen_perturbed_ellipsoid(9, 2, 0.0);
    BodyOracle base = ellipsoid_oracle(gen_random_ellipsoid(9, 2));
    for (int k = 0; k < 200; ++k) {
        CVector x = Complex(rng.uniform(0.0, base.outer_radius)) * rng.unit_vector(2);
        REQUIRE(p0.member(x) == base.member(x));
        CVector u = rng.unit_vector(2);
        REQUIRE(p0.support(u) == Catch::Approx(base.support(u)).margin(1e-10));
    }
}

TEST_CASE("non-J-invariant generator produces a non-circular n=1 projection") {
    BodyOracle b = gen_non_j_invariant(12, 1);
    // the body is a real ellipse in C; its projection onto C is itself
    PlanarSampleSet s = project_to_line(b, CVector{Complex(1)}, 64);
    double rmin = 1e300, rmax = 0.0;
    for (const auto& z : s.points) {
        rmin = std::min(rmin, std::abs(z));
        rmax = std::max(rmax, std::abs(z));
    }
    REQUIRE(rmax / rmin > 1.2);  // the imaginary axis was stretched by 1.5
}

TEST_CASE("closed-form section hooks agree with membership restriction") {
    Rng rng(88);
    ComplexEllipsoid e = gen_random_ellipsoid(21, 3);
    BodyOracle b = ellipsoid_oracle(e);
    // hyperplane through an interior point
    CVector normal = rng.unit_vector(3);
    std::vector<CVector> frame;
    while (frame.size() < 2) {
        CVector v = rng.cgauss_vec(3);
        Complex cn = inner(normal, v);
        for (std::size_t i = 0; i < 3; ++i) v[i] -= cn * normal[i];
        for (const auto& u : frame) {
            Complex cu = inner(u, v);
            for (std::size_t i = 0; i < 3; ++i) v[i] -= cu * u[i];
        }
        const double d = norm(v);
        if (d < 1e-6) continue;
        for (auto& z : v) z /= d;
        frame.push_back(v);
    }
    BodyOracle sub = b.restrict_affine(e.center(), frame);
    REQUIRE(sub.dim == 2);
    for (int k = 0; k < 300; ++k) {
        CVector y = Complex(1.5) * rng.cgauss_vec(2);
        const bool direct = b.member(e.center() + detail::apply_frame(frame, y));
        REQUIRE(sub.member(y) == direct);
    }

    // generic section oracle agrees on membership and approximates support
    BodyOracle gen = generic_section_oracle(b, e.center(), frame);
    for (int k = 0; k < 50; ++k) {
        CVector y = Complex(1.5) * rng.cgauss_vec(2);
        REQUIRE(gen.member(y) == sub.member(y));
    }
    for (int k = 0; k < 10; ++k) {
        CVector w = rng.unit_vector(2);
        REQUIRE(gen.support(w) == Catch::Approx(sub.support(w)).epsilon(5e-3).margin(5e-3));
    }
}

TEST_CASE("closed-form projection hooks agree with the generic lift") {
    Rng rng(93);
    ComplexEllipsoid e = gen_random_ellipsoid(33, 3);
    BodyOracle b = ellipsoid_oracle(e);
    std::vector<CVector> frame;
    while (frame.size() < 2) {
        CVector v = rng.cgauss_vec(3);
        for (const auto& u : frame) {
            Complex cu = inner(u, v);
            for (std::size_t i = 0; i < 3; ++i) v[i] -= cu * u[i];
        }
        const double d = norm(v);
        if (d < 1e-6) continue;
        for (auto& z : v) z /= d;
        frame.push_back(v);
    }
    BodyOracle closed = b.project_subspace(frame);
    BodyOracle generic = generic_projection_oracle(b, frame);
    for (int k = 0; k < 40; ++k) {
        CVector w = rng.unit_vector(2);
        REQUIRE(closed.support(w) == Catch::Approx(generic.support(w)).margin(1e-10));
    }
    int mismatches = 0;
    for (int k = 0; k < 400; ++k) {
        CVector w = Complex(rng.uniform(0.0, 1.2 * closed.outer_radius)) * rng.unit_vector(2);
        if (closed.member(w) != generic.member(w)) ++mismatches;
    }
    // the generic membership is a support-mesh approximation; disagreement is
    // confined to a thin boundary band
    REQUIRE(mismatches < 20);
}
