#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace cellip {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Derives an independent stream seed from (seed, tag). splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic seeded RNG. Uniform and Gaussian draws are hand-rolled on
/// top of mt19937_64 output so two builds of the library produce identical
/// streams (std::*_distribution has implementation-defined mappings).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex cgauss() { return {gauss(), gauss()}; }

    CVector cgauss_vec(std::size_t n) {
        CVector v(n);
        for (auto& z : v) z = cgauss();
        return v;
    }

    /// Uniform direction on the unit sphere of C^n (equivalently R^2n).
    CVector unit_vector(std::size_t n) {
        for (;;) {
            CVector v = cgauss_vec(n);
            double s = 0.0;
            for (const auto& z : v) s += std::norm(z);
            if (s > 1e-12) {
                double inv = 1.0 / std::sqrt(s);
                for (auto& z : v) z *= inv;
                return v;
            }
        }
    }

    /// Uniform unit complex scalar.
    Complex unit_phase() {
        double a = 6.283185307179586476925286766559 * uniform();
        return {std::cos(a), std::sin(a)};
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cellip
