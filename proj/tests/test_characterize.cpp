#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cellip/characterize.hpp"
#include "cellip/extremal.hpp"

using namespace cellip;

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;

PlanarSampleSet circle_samples(Complex c, double r, std::size_t m) {
    PlanarSampleSet s;
    for (std::size_t a = 0; a < m; ++a)
        s.points.push_back(c + r * std::polar(1.0, kTwoPi * double(a) / double(m)));
    return s;
}
}  // namespace

TEST_CASE("fit_disk on exact circles") {
    DiskFit f = fit_disk(circle_samples(0.0, 1.0, 16));
    REQUIRE(std::abs(f.center) < 1e-12);
    REQUIRE(f.radius == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(f.max_rel_deviation <= 1e-12);

    // any center and radius across six orders of magnitude
    Rng rng(64);
    for (int rep = 0; rep < 60; ++rep) {
        const double r = std::pow(10.0, rng.uniform(-3.0, 3.0));
        const Complex c = 2.0 * r * rng.cgauss();
        DiskFit g = fit_disk(circle_samples(c, r, 32));
        REQUIRE(g.max_rel_deviation <= 1e-12);
        REQUIRE(std::abs(g.center - c) <= 1e-10 * r);
    }
}

TEST_CASE("fit_disk flags ellipses and recovers noisy circles") {
    // ellipse with semi-axes (2, 1): frozen deviation from the sampling oracle
    PlanarSampleSet ell;
    for (int a = 0; a < 64; ++a) {
        const double t = kTwoPi * a / 64.0;
        ell.points.push_back(Complex(2.0 * std::cos(t), std::sin(t)));
    }
    DiskFit f = fit_disk(ell);
    REQUIRE(f.max_rel_deviation >= 0.3);
    REQUIRE(f.max_rel_deviation == Catch::Approx(0.3515).margin(0.02));

    Rng rng(65);
    const Complex c0(0.7, -0.3);
    const double r0 = 1.7;
    PlanarSampleSet noisy = circle_samples(c0, r0, 64);
    for (auto& p : noisy.points) p += 1e-9 * rng.cgauss();
    DiskFit g = fit_disk(noisy);
    REQUIRE(std::abs(g.center - c0) <= 1e-8);
    REQUIRE(std::abs(g.radius - r0) <= 1e-8);
}

TEST_CASE("fit_disk error paths") {
    PlanarSampleSet few = circle_samples(0.0, 1.0, 7);
    REQUIRE_THROWS_AS(fit_disk(few), std::invalid_argument);
    PlanarSampleSet same;
    same.points.assign(16, Complex(1.0, 2.0));
    REQUIRE_THROWS_AS(fit_disk(same), std::invalid_argument);
}

TEST_CASE("bombon check accepts balls and random ellipsoids") {
    CharacterizationReport ball = bombon_check(ellipsoid_oracle(unit_ball(2)), 100, 1e-6, 77);
    REQUIRE(ball.verdict);
    REQUIRE(ball.worst_deviation <= 1e-9);

    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const std::size_t n = 1 + seed % 3;
        CharacterizationReport rep =
            bombon_check(ellipsoid_oracle(gen_random_ellipsoid(seed, n)), 150, 1e-6, seed);
        REQUIRE(rep.verdict);
    }
}

TEST_CASE("bombon check rejects the quartic ball with a witness") {
    BodyOracle lp4 = lp_ball_oracle(4.0, 2);
    CharacterizationReport rep = bombon_check(lp4, 300, 1e-6, 99);
    REQUIRE_FALSE(rep.verdict);
    REQUIRE(rep.worst_line.has_value());
    REQUIRE(rep.worst_deviation > 1e-3);

    // the witness line reproduces its deviation
    PlanarSampleSet s = section_samples(lp4, *rep.worst_line, 32);
    REQUIRE_FALSE(s.empty());
    REQUIRE(fit_disk(s).max_rel_deviation == Catch::Approx(rep.worst_deviation).epsilon(1e-9));

    // frozen oracle instance: the section with the line {(t, t + 1/2)}
    ComplexLine probe(CVector{Complex(0), Complex(0.5)},
                      CVector{Complex(1 / std::sqrt(2.0)), Complex(1 / std::sqrt(2.0))});
    PlanarSampleSet ps = section_samples(lp4, probe, 64);
    REQUIRE_FALSE(ps.empty());
    REQUIRE(fit_disk(ps).max_rel_deviation == Catch::Approx(0.0462).margin(0.005));
}

TEST_CASE("bombon check rejects perturbed ellipsoids deterministically") {
    BodyOracle pert = gen_perturbed_ellipsoid(7, 2, 0.1);
    CharacterizationReport r1 = bombon_check(pert, 200, 1e-6, 5);
    CharacterizationReport r2 = bombon_check(pert, 200, 1e-6, 5);
    REQUIRE_FALSE(r1.verdict);
    REQUIRE(r1.worst_deviation == r2.worst_deviation);  // bit-for-bit
    REQUIRE(r1.samples_used == r2.samples_used);
    REQUIRE(norm(r1.worst_line->base() - r2.worst_line->base()) == 0.0);

    // eps = 0 restores the ellipsoid verdict
    CharacterizationReport r0 = bombon_check(gen_perturbed_ellipsoid(7, 2, 0.0), 200, 1e-6, 5);
    REQUIRE(r0.verdict);
}

TEST_CASE("symmetry center of translated balls and ellipsoids") {
    CVector c{Complex(0.7, -0.4), Complex(0.2, 0.9)};
    BodyOracle ball = ellipsoid_oracle({c, HermitianShape(CMatrix::identity(2))});
    SymmetryResult s = symmetry_center(ball, 12, 1e-6, 11);
    REQUIRE(s.center.has_value());
    REQUIRE(norm(*s.center - c) <= 1e-7 * ball.outer_radius);

    for (std::uint64_t seed = 21; seed < 24; ++seed) {
        ComplexEllipsoid e = gen_random_ellipsoid(seed, 3);
        SymmetryResult se = symmetry_center(ellipsoid_oracle(e), 16, 1e-6, seed);
        REQUIRE(se.center.has_value());
        REQUIRE(norm(*se.center - e.center()) <= 1e-6 * (1.0 + norm(e.center())));
    }
}

TEST_CASE("symmetry center rejects non-J-invariant real ellipsoids") {
    SymmetryResult s = symmetry_center(gen_non_j_invariant(13, 2), 12, 1e-6, 3);
    REQUIRE_FALSE(s.center.has_value());
    REQUIRE(s.report.worst_direction.has_value());
    REQUIRE(s.report.worst_deviation > 1e-3);
}

TEST_CASE("the quartic ball separates symmetry from the disk-section property") {
    BodyOracle lp4 = lp_ball_oracle(4.0, 2);
    SymmetryResult s = symmetry_center(lp4, 12, 1e-6, 17);
    REQUIRE(s.center.has_value());
    REQUIRE(norm(*s.center) <= 1e-6);
    CharacterizationReport b = bombon_check(lp4, 200, 1e-6, 17);
    REQUIRE_FALSE(b.verdict);
}

TEST_CASE("hyperplane symmetry sweep") {
    ComplexEllipsoid e = gen_random_ellipsoid(31, 3);
    CharacterizationReport ok = sections_symmetric_sweep(ellipsoid_oracle(e), 8, 1e-6, 41);
    REQUIRE(ok.verdict);

    CharacterizationReport bad = sections_symmetric_sweep(gen_perturbed_ellipsoid(31, 3, 0.1),
                                                          8, 1e-6, 41);
    REQUIRE_FALSE(bad.verdict);
    REQUIRE(bad.worst_line.has_value());

    REQUIRE_THROWS_AS(sections_symmetric_sweep(ellipsoid_oracle(unit_ball(1)), 4, 1e-6, 1),
                      std::invalid_argument);
}

TEST_CASE("central sections of the quartic ball are symmetric") {
    BodyOracle lp4 = lp_ball_oracle(4.0, 2);
    CharacterizationReport rep = sections_symmetric_sweep(
        lp4, 3, 1e-6, 53, CVector(2, Complex(0.0)));
    REQUIRE(rep.verdict);
}

TEST_CASE("disk sections through a point") {
    ComplexEllipsoid e = gen_random_ellipsoid(61, 2);
    BodyOracle b = ellipsoid_oracle(e);
    CharacterizationReport at_center = disk_sections_through_point(b, e.center(), 100, 1e-6, 5);
    REQUIRE(at_center.verdict);

    // off-center interior points still see disks
    CVector off = e.center();
    off[0] += Complex(0.2, 0.1) * (1.0 / std::sqrt(quad_form(e.shape(), CVector{Complex(1), Complex(0)})));
    REQUIRE(b.member(off));
    CharacterizationReport off_rep = disk_sections_through_point(b, off, 100, 1e-6, 6);
    REQUIRE(off_rep.verdict);

    CharacterizationReport lp4 = disk_sections_through_point(lp_ball_oracle(4.0, 2),
                                                             CVector(2, Complex(0.0)), 100,
                                                             1e-6, 7);
    REQUIRE_FALSE(lp4.verdict);
    REQUIRE(lp4.worst_line.has_value());

    REQUIRE_THROWS_AS(disk_sections_through_point(b, CVector{Complex(100), Complex(0)}, 10,
                                                  1e-6, 8),
                      std::invalid_argument);
}

TEST_CASE("projection sweep in three complex dimensions") {
    ComplexEllipsoid e = gen_random_ellipsoid(71, 3);
    CharacterizationReport ok = projections_ellipsoid_sweep(ellipsoid_oracle(e), 2, 4, 1e-6, 9);
    REQUIRE(ok.verdict);

    CharacterizationReport bad = projections_ellipsoid_sweep(gen_perturbed_ellipsoid(71, 3, 0.15),
                                                             2, 4, 1e-6, 9);
    REQUIRE_FALSE(bad.verdict);

    // the polydisc is symmetric but its projections are not ellipsoids
    BodyOracle poly = lp_ball_oracle(std::numeric_limits<double>::infinity(), 3);
    CharacterizationReport pd = projections_ellipsoid_sweep(poly, 2, 3, 1e-6, 10);
    REQUIRE_FALSE(pd.verdict);

    REQUIRE_THROWS_AS(projections_ellipsoid_sweep(ellipsoid_oracle(e), 3, 2, 1e-6, 1),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(projections_ellipsoid_sweep(ellipsoid_oracle(e), 1, 2, 1e-6, 1),
                      std::invalid_argument);
}

TEST_CASE("homothety detection") {
    BodyOracle a = ellipsoid_oracle(unit_ball(2));
    CVector c3{Complex(3), Complex(0)};
    BodyOracle b = ellipsoid_oracle(
        {c3, HermitianShape(Complex(0.25) * CMatrix::identity(2))});  // radius-2 ball at 3 e1

    SupportTable ta = sample_support(a, 24, 123);
    SupportTable tb = sample_support(b, 24, 123);
    auto h = homothety_detect(ta, tb, 1e-8);
    REQUIRE(h.has_value());
    REQUIRE(h->ratio == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(std::abs(h->translation[0] - Complex(-1.5)) < 1e-8);
    REQUIRE(std::abs(h->translation[1]) < 1e-8);
    REQUIRE_FALSE(h->is_translation());

    auto ident = homothety_detect(ta, ta, 1e-10);
    REQUIRE(ident.has_value());
    REQUIRE(ident->ratio == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(norm(ident->translation) < 1e-10);
    REQUIRE(ident->is_translation());

    // two random non-homothetic ellipsoids
    BodyOracle e1 = ellipsoid_oracle(gen_random_ellipsoid(81, 2));
    BodyOracle e2 = ellipsoid_oracle(gen_random_ellipsoid(82, 2));
    auto none = homothety_detect(sample_support(e1, 24, 5), sample_support(e2, 24, 5), 1e-6);
    REQUIRE_FALSE(none.has_value());

    REQUIRE_THROWS_AS(homothety_detect(sample_support(e1, 4, 5), sample_support(e2, 4, 5), 1e-6),
                      std::invalid_argument);
}

TEST_CASE("unit-phase rotations of a symmetric body are translates") {
    // support of xi K queried through the lifted direction conj(xi) w
    ComplexEllipsoid e = gen_random_ellipsoid(91, 2);
    BodyOracle body = ellipsoid_oracle(e);
    Rng rng(14);
    for (int rep = 0; rep < 4; ++rep) {
        const Complex xi = rng.unit_phase();
        auto rotated = [&](const CVector& w) {
            CVector lifted(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) lifted[i] = std::conj(xi) * w[i];
            return body.support(lifted);
        };
        SupportTable ta = sample_support(rotated, 2, 24, 1000 + rep);
        SupportTable tb = sample_support(body, 24, 1000 + rep);
        auto h = homothety_detect(ta, tb, 1e-7);
        REQUIRE(h.has_value());
        REQUIRE(h->is_translation());
        // the translation is (xi - 1) times the center
        REQUIRE(norm(h->translation - (xi - 1.0) * e.center()) <= 1e-6);
    }
}
