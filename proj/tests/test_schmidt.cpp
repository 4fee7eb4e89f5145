#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "entangle/evolution.hpp"
#include "entangle/model.hpp"
#include "entangle/schmidt.hpp"

using namespace entangle;

namespace {

PhysParams fig_params(double m2 = 1.0) {
    PhysParams p;
    p.m1 = 1.0; p.m2 = m2; p.v0 = -5.0; p.a = 10.0; p.q = 5.0; p.sigma = 0.5;
    return p;
}

ComplexField2D product_field(const Grid1D& g) {
    // normalized Gaussians at +-1 with a relative phase twist
    ComplexField2D f(g, g);
    const double n1 = std::pow(kPi, -0.25);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.point(i);
        const cdouble g1 = n1 * std::exp(-0.5 * (x - 1.0) * (x - 1.0)) *
                           std::polar(1.0, 0.7 * x);
        for (int j = 0; j < g.n; ++j) {
            const double y = g.point(j);
            const cdouble g2 = n1 * std::exp(-0.5 * (y + 1.0) * (y + 1.0)) *
                               std::polar(1.0, -0.2 * y);
            f.at(i, j) = g1 * g2;
        }
    }
    return f;
}

/// (f(x1) f(x2) + f(-x1) f(-x2)) / sqrt(2) with f supported on x < -0.5 only.
ComplexField2D two_bump_field(const Grid1D& g) {
    ComplexField2D out(g, g);
    auto f = [](double x) {
        if (x > -0.5) return 0.0;
        const double u = x + 2.0;
        return std::pow(kPi, -0.25) * std::sqrt(2.0) * std::exp(-2.0 * u * u);
    };
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            out.at(i, j) = (f(g.point(i)) * f(g.point(j)) +
                            f(-g.point(i)) * f(-g.point(j))) /
                           std::sqrt(2.0);
    return out;
}

} // namespace

TEST_CASE("product field has Schmidt rank 1", "[schmidt]") {
    const Grid1D g(-8.0, 8.0, 257);
    const auto sp = schmidt(product_field(g));
    REQUIRE(sp.p[0] > 1.0 - 1e-10);
    double tail = 0.0;
    for (std::size_t k = 1; k < sp.p.size(); ++k) tail += sp.p[k];
    CHECK(tail < 1e-10);
    CHECK(std::abs(sp.input_norm - 1.0) < 1e-6);
    CHECK(entropy(sp) < 1e-8);
}

TEST_CASE("symmetric two-bump field splits half and half", "[schmidt]") {
    const Grid1D g(-6.0, 6.0, 481);
    const auto sp = schmidt(two_bump_field(g));
    REQUIRE(sp.p.size() >= 2);
    CHECK(std::abs(sp.p[0] - 0.5) < 1e-10);
    CHECK(std::abs(sp.p[1] - 0.5) < 1e-10);
    CHECK(std::abs(entropy(sp) - std::log(2.0)) < 1e-9);
}

TEST_CASE("entropy of simple spectra", "[schmidt]") {
    CHECK(entropy(std::vector<double>{1.0}) == 0.0);
    CHECK(std::abs(entropy(std::vector<double>{0.5, 0.5}) - std::log(2.0)) < 1e-15);
    const double expected = -(0.8 * std::log(0.8) + 0.2 * std::log(0.2));
    CHECK(std::abs(expected - 0.500402) < 5e-7);
    CHECK(std::abs(entropy(std::vector<double>{0.8, 0.2}) - expected) < 1e-15);
    // values at or below the floor are ignored
    CHECK(entropy(std::vector<double>{1.0, 1e-15}) == 0.0);
}

TEST_CASE("schmidt input guards", "[schmidt]") {
    const Grid1D g(-4.0, 4.0, 65);
    SECTION("norm far from 1") {
        auto f = product_field(g);
        for (auto& z : f.values) z *= 2.0;
        CHECK_THROWS_AS(schmidt(f), NumericalError);
    }
    SECTION("non-finite amplitudes") {
        auto f = product_field(g);
        f.values[10] = cdouble(std::numeric_limits<double>::quiet_NaN(), 0.0);
        CHECK_THROWS_AS(schmidt(f), ParameterError);
        CHECK_THROWS_AS(reduced_density(f, 1), ParameterError);
    }
    SECTION("bad subsystem index") {
        CHECK_THROWS_AS(reduced_density(product_field(g), 3), ParameterError);
    }
}

TEST_CASE("schmidt modes are orthonormal and phase-fixed", "[schmidt]") {
    const Grid1D g(-6.0, 6.0, 301);
    const auto sp = schmidt(two_bump_field(g));
    REQUIRE(sp.modes1.size() >= 2);
    for (const auto& fam : {sp.modes1, sp.modes2}) {
        CHECK(std::abs(std::abs(inner_product(fam[0], fam[0])) - 1.0) < 1e-8);
        CHECK(std::abs(std::abs(inner_product(fam[1], fam[1])) - 1.0) < 1e-8);
        CHECK(std::abs(inner_product(fam[0], fam[1])) < 1e-8);
        // largest-magnitude sample rotated to the positive real axis
        for (const auto& m : {fam[0], fam[1]}) {
            double best = -1.0;
            cdouble vbest;
            for (const auto& v : m.values)
                if (std::abs(v) > best) { best = std::abs(v); vbest = v; }
            CHECK(std::abs(std::arg(vbest)) < 1e-12);
        }
    }
}

TEST_CASE("reduced density kernel", "[schmidt]") {
    const Grid1D g(-6.0, 6.0, 161);

    SECTION("product field gives a rank-1 projector with unit trace") {
        const auto rho = reduced_density(product_field(g), 1);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-6);
        CHECK(std::abs(rho.trace().imag()) < 1e-12);
        const auto ev = reduced_density_eigenvalues(product_field(g), 1);
        CHECK(ev[0] > 1.0 - 1e-10);
    }
    SECTION("hermitian by construction on random fields") {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> nd;
        ComplexField2D f(g, g);
        double nn = 0.0;
        for (auto& z : f.values) { z = cdouble(nd(rng), nd(rng)); nn += std::norm(z); }
        const double scale = 1.0 / std::sqrt(nn * g.dx() * g.dx());
        for (auto& z : f.values) z *= scale;
        for (int sub : {1, 2}) {
            const auto rho = reduced_density(f, sub);
            double worst = 0.0;
            for (int i = 0; i < rho.rows(); ++i)
                for (int j = 0; j < rho.cols(); ++j)
                    worst = std::max(worst, std::abs(rho(i, j) - std::conj(rho(j, i))));
            REQUIRE(worst < 1e-12);
        }
    }
    SECTION("eigenvalues agree with the SVD route on a random entangled field") {
        std::mt19937_64 rng(10);
        std::normal_distribution<double> nd;
        ComplexField2D f(g, g);
        double nn = 0.0;
        for (auto& z : f.values) { z = cdouble(nd(rng), nd(rng)); nn += std::norm(z); }
        const double scale = 1.0 / std::sqrt(nn * g.dx() * g.dx());
        for (auto& z : f.values) z *= scale;
        SchmidtOptions so;
        so.max_modes = 0;
        const auto sp = schmidt(f, so);
        for (int sub : {1, 2}) {
            const auto ev = reduced_density_eigenvalues(f, sub);
            for (std::size_t k = 0; k < 12; ++k)
                REQUIRE(std::abs(ev[k] - sp.p[k]) < 1e-10);
        }
    }
}

TEST_CASE("collision state at 2 t_c carries the scattering weights", "[schmidt]") {
    const auto p = fig_params();
    const auto d = derive(p);
    const Grid1D g = Grid1D::symmetric(default_grid_extent(p, d, 3.0 * d.t_c), 256);
    const auto st = evolve_two_particle_state(g, 2.0 * d.t_c, p, d, {}, 4);
    const auto sp = schmidt(st.psi);
    REQUIRE(sp.p.size() >= 2);
    CHECK(std::abs(sp.p[0] - 0.8) < 0.02);
    CHECK(std::abs(sp.p[1] - 0.2) < 0.02);
    double rest = 1.0 - sp.p[0] - sp.p[1];
    CHECK(rest < 0.01);

    SECTION("route equivalence and subsystem symmetry") {
        const auto e1 = reduced_density_eigenvalues(st.psi, 1);
        const auto e2 = reduced_density_eigenvalues(st.psi, 2);
        for (std::size_t k = 0; k < 6; ++k) {
            REQUIRE(std::abs(e1[k] - sp.p[k]) < 1e-8);
            REQUIRE(std::abs(e2[k] - sp.p[k]) < 1e-8);
        }
        CHECK(std::abs(entropy(e1) - entropy(e2)) < 1e-8);
    }
    SECTION("entropy is invariant under a global phase") {
        auto rotated = st.psi;
        for (auto& z : rotated.values) z *= std::polar(1.0, 1.234);
        SchmidtOptions so;
        so.max_modes = 0;
        CHECK(std::abs(entropy(schmidt(rotated, so)) - entropy(sp)) < 1e-12);
    }
}

TEST_CASE("entropy trace records diagnostics and tolerates failures", "[schmidt]") {
    const auto p = fig_params();
    const auto d = derive(p);
    const Grid1D g = Grid1D::symmetric(default_grid_extent(p, d, 2.0 * d.t_c), 160);

    SECTION("clean short trace") {
        const std::vector<double> ts = {0.2 * d.t_c, 1.8 * d.t_c};
        const auto tr = entropy_trace(ts, p, d, g, {}, 2);
        REQUIRE_FALSE(tr.partial);
        REQUIRE(tr.entropy.size() == 2);
        CHECK(tr.entropy[0] < 0.05);
        CHECK(tr.entropy[1] > 0.3);
        CHECK(tr.spectra[1].size() == 4);
        CHECK(std::abs(tr.norms[1] - 1.0) < 1e-2);
    }
    SECTION("per-sample failure marks the trace partial") {
        QuadratureSpec spec;
        spec.dy_scale = 60.0;
        const std::vector<double> ts = {d.t_c};
        const auto tr = entropy_trace(ts, p, d, g, spec, 1);
        CHECK(tr.partial);
        REQUIRE(tr.failures.size() == 1);
        CHECK(std::isnan(tr.entropy[0]));
    }
}
