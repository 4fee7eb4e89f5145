#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "entangle/model.hpp"
#include "entangle/propagators.hpp"

using namespace entangle;

namespace {

PhysParams fig_params(double m2 = 1.0) {
    PhysParams p;
    p.m1 = 1.0; p.m2 = m2; p.v0 = -5.0; p.a = 10.0; p.q = 5.0; p.sigma = 0.5;
    return p;
}

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("free propagator basics", "[propagators]") {
    SECTION("magnitude and phase at coincident points, m = 2, t = 1") {
        const cdouble k = free_propagator(0.3, 0.3, 1.0, 2.0);
        CHECK(std::abs(std::abs(k) - std::sqrt(1.0 / kPi)) < 1e-14);
        CHECK(std::abs(std::abs(k) - 0.564190) < 1e-6);
        CHECK(std::abs(std::arg(k) + kPi / 4.0) < 1e-14);
    }
    SECTION("symmetric in x <-> y") {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng), y = u(rng);
            CHECK(free_propagator(x, y, 0.7, 1.3) == free_propagator(y, x, 0.7, 1.3));
        }
    }
    SECTION("t <= 0 rejected") {
        CHECK_THROWS_AS(free_propagator(0.0, 0.0, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(free_propagator(0.0, 0.0, -1.0, 1.0), DomainError);
    }
    SECTION("short-time kernel acts as a delta: integral against a Gaussian") {
        // fine phase-resolved quadrature of int K(x,y,eps) phi(y) dy
        const double eps = 1e-4, m = 1.0, x = 0.4;
        auto phi = [](double y) { return std::exp(-y * y); };
        const double halfwidth = 6.0;
        const double k_max = m * halfwidth / eps;
        const double dy = (kPi / 8.0) / k_max;
        const long n = static_cast<long>(2.0 * halfwidth / dy);
        cdouble acc = 0.0;
        for (long i = 0; i <= n; ++i) {
            const double y = x - halfwidth + 2.0 * halfwidth * i / n;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += w * free_propagator(x, y, eps, m) * phi(y);
        }
        acc *= 2.0 * halfwidth / n;
        CHECK(std::abs(acc - phi(x)) < 1e-3);
    }
}

TEST_CASE("delta kernel auxiliary variables", "[propagators]") {
    const auto p = fig_params();
    const auto d = derive(p);
    const auto v = delta_kernel_vars(1.0, -2.0, 0.8, d, p);
    CHECK(v.g == d.g);
    CHECK(v.beta.real() == 0.0);
    CHECK(std::abs(v.beta.imag() - p.hbar * 0.8 / (2.0 * d.mu)) < 1e-15);
    // u = (|x|+|y|)/sqrt(4 beta) - g sqrt(beta)
    const cdouble expected = (1.0 + 2.0) / (2.0 * std::sqrt(v.beta)) - d.g * std::sqrt(v.beta);
    CHECK(std::abs(v.u - expected) < 1e-13);
}

TEST_CASE("delta propagator", "[propagators]") {
    const auto p = fig_params();
    const auto d = derive(p);

    SECTION("reduces to the free kernel at g = 0") {
        auto pf = p;
        pf.v0 = 0.0;
        const auto df = derive(pf);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-12.0, 12.0);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng), y = u(rng);
            CHECK(delta_propagator(x, y, 0.9, df, pf) ==
                  free_propagator(x, y, 0.9, df.mu, pf.hbar));
        }
    }
    SECTION("exchange symmetry") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(-12.0, 12.0);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng), y = u(rng);
            const cdouble a = delta_propagator(x, y, 1.4, d, p);
            const cdouble b = delta_propagator(y, x, 1.4, d, p);
            REQUIRE(rel(a, b) < 1e-13);
        }
    }
    SECTION("attractive coupling is accepted") {
        auto pa = p;
        pa.v0 = 5.0;
        const auto da = derive(pa);
        CHECK(std::isfinite(std::abs(delta_propagator(0.5, -9.0, 1.0, da, pa))));
    }
    SECTION("t <= 0 rejected") {
        CHECK_THROWS_AS(delta_propagator(0.0, -1.0, 0.0, d, p), DomainError);
    }
}

TEST_CASE("two-term approximate kernel", "[propagators]") {
    const auto p = fig_params();
    const auto d = derive(p);

    SECTION("reduces to the free kernel at g = 0") {
        auto pf = p;
        pf.v0 = 0.0;
        const auto df = derive(pf);
        CHECK(approx_propagator_k1(2.0, -9.5, 1.7, df, pf) ==
              free_propagator(2.0, -9.5, 1.7, df.mu, pf.hbar));
    }
    SECTION("agrees with the exact kernel at the packet centers, t = 2 t_c") {
        const double t = 2.0 * d.t_c;
        const cdouble approx = approx_propagator_k1(p.a, -p.a, t, d, p);
        const cdouble exact = delta_propagator(p.a, -p.a, t, d, p);
        CHECK(rel(approx, exact) < 0.05);
    }
    SECTION("interaction term decays algebraically through the resonant denominator") {
        // the oscillatory exponential has unit modulus for real t; the decay in
        // (|x| - y) comes from the 1/(|x| - y - 2 g beta) factor
        const double t = 2.0 * d.t_c;
        const cdouble beta(0.0, p.hbar * t / (2.0 * d.mu));
        auto second = [&](double x, double y) {
            return approx_propagator_k1(x, y, t, d, p) -
                   free_propagator(x, y, t, d.mu, p.hbar);
        };
        const double r1 = std::abs(second(5.0, -5.0));
        const double r2 = std::abs(second(20.0, -20.0));
        const double expected_ratio = std::abs(10.0 - 2.0 * d.g * beta) /
                                      std::abs(40.0 - 2.0 * d.g * beta);
        CHECK(r2 < r1);
        CHECK(std::abs(r2 / r1 - expected_ratio) < 1e-12);
    }
    SECTION("resonant denominator raises a numerical error") {
        auto pr = p;
        pr.v0 = 1e-10;  // g ~ 5e-11
        const auto dr = derive(pr);
        CHECK_THROWS_AS(approx_propagator_k1(0.0, 0.0, 1e-5, dr, pr), NumericalError);
    }
}

TEST_CASE("scattering amplitudes", "[propagators]") {
    const auto p = fig_params();
    const auto d = derive(p);

    SECTION("|T|^2 + |R|^2 = 1 and c+ = 1 + c- for any time") {
        for (double f : {0.3, 1.0, 2.0, 17.0}) {
            const auto s = amplitudes(f * d.t_c, d, p);
            CHECK(std::abs(std::norm(s.T) + std::norm(s.R) - 1.0) < 1e-15);
            CHECK(std::abs(s.c_plus - s.c_minus - 1.0) < 1e-15);
        }
    }
    SECTION("reference transmission probabilities") {
        const auto s = amplitudes(d.t_c, d, p);
        CHECK(std::abs(std::norm(s.T) - 0.8) < 1e-14);   // q^2/(q^2+g^2) = 25/31.25
        CHECK(std::abs(std::norm(s.R) - 0.2) < 1e-14);
    }
    SECTION("maximal mixing at q = |g|") {
        auto pm = p;
        pm.q = 2.5;  // equals |g| = 2.5
        const auto dm = derive(pm);
        const auto s = amplitudes(dm.t_c, dm, pm);
        CHECK(std::abs(std::norm(s.T) - 0.5) < 1e-14);
        CHECK(std::abs(std::norm(s.R) - 0.5) < 1e-14);
    }
    SECTION("|c-| settles on |R| after the collision") {
        const auto ref = std::norm(amplitudes(100.0 * d.t_c, d, p).R);
        double prev_gap = 1e9;
        for (double f : {2.0, 3.0, 5.0, 10.0, 30.0, 100.0}) {
            const auto s = amplitudes(f * d.t_c, d, p);
            const double gap = std::abs(std::abs(s.c_minus) - std::sqrt(ref));
            CHECK(gap <= prev_gap + 1e-12);
            prev_gap = gap;
        }
        CHECK(prev_gap < 1e-2);
    }
}

TEST_CASE("transmitted-plus-reflected kernel", "[propagators]") {
    const auto p = fig_params();
    const auto d = derive(p);

    SECTION("reduces to the free kernel at g = 0") {
        auto pf = p;
        pf.v0 = 0.0;
        const auto df = derive(pf);
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(-9.0, 9.0);
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng), y = u(rng);
            REQUIRE(rel(approx_propagator_k2(x, y, 1.2, df, pf),
                        free_propagator(x, y, 1.2, df.mu, pf.hbar)) < 1e-15);
        }
    }
    SECTION("late-time transmitted weight") {
        const auto s = amplitudes(100.0 * d.t_c, d, p);
        CHECK(std::abs(std::norm(s.c_plus) - 0.8) < 1e-2);
    }
    SECTION("exchange symmetry") {
        const cdouble a = approx_propagator_k2(3.0, -7.0, 2.0, d, p);
        const cdouble b = approx_propagator_k2(-7.0, 3.0, 2.0, d, p);
        CHECK(rel(a, b) < 1e-14);
    }
    SECTION("integrated against the initial packet it matches the exact evolution "
            "at the packet centers for t >= 2 t_c") {
        // The two-term kernel is a stationary-phase object: pointwise it carries
        // an O(|R|) cross term, but its integral against the initial packet
        // reproduces the exact relative wave function at both packet centers.
        auto integrate = [&](auto&& kernel, double xc, double t) {
            const double W = 8.0 * p.sigma / d.alpha;
            const double k_max = d.mu * (std::abs(xc) + p.a + W) / (p.hbar * t) + p.q;
            const double dy = (kPi / 8.0) / k_max;
            const long n = static_cast<long>(2.0 * W / dy);
            cdouble acc = 0.0;
            for (long j = 0; j <= n; ++j) {
                const double y = -p.a - W + 2.0 * W * j / n;
                const double w = (j == 0 || j == n) ? 0.5 : 1.0;
                acc += w * kernel(xc, y, t) * initial_relative(y, d, p);
            }
            return acc * (2.0 * W / n);
        };
        for (double f : {2.0, 3.0}) {
            const double t = f * d.t_c;
            for (double xc : {-p.a + d.v * t, p.a - d.v * t}) {
                const cdouble approx = integrate(
                    [&](double x, double y, double tt) {
                        return approx_propagator_k2(x, y, tt, d, p);
                    },
                    xc, t);
                const cdouble exact = integrate(
                    [&](double x, double y, double tt) {
                        return delta_propagator(x, y, tt, d, p);
                    },
                    xc, t);
                REQUIRE(rel(approx, exact) < 0.05);
            }
        }
    }
}
