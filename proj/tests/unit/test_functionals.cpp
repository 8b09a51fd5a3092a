#include <doctest.h>

#include <cmath>

#include "onofri/functionals.hpp"
#include "onofri/rng.hpp"
#include "oracles.hpp"

using namespace onofri;

namespace {
const QuadratureRule& rule() {
    static const QuadratureRule r = build_quadrature(8);
    return r;
}
}  // namespace

TEST_CASE("Dirichlet energy of constants vanishes") {
    CHECK(dirichlet_energy(make_constant(5.0), rule()) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("Dirichlet energy of the first harmonic is 2/3") {
    // eigenfunction oracle: Delta h1 = 2 h1 on the round sphere, int h1^2 = 1/3
    CHECK(dirichlet_energy(make_harmonic1(), rule()) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("Dirichlet energy agrees with -int u dd^c u (integration by parts)") {
    for (const double lambda : {1.3, 2.0, 3.1}) {
        const TestFunction u = make_dilation(lambda);
        auto val = u.value;
        auto ddc = u.ddc_density;
        // -int u dd^c u over the chart; dd^c density is against Lebesgue chart measure
        const double minus_u_ddc = -integrate(
            [&val, &ddc](const complexd& z) {
                const double f = 1.0 + std::norm(z);
                return val(z) * ddc(z) * std::numbers::pi * f * f;
            },
            rule());
        CHECK(dirichlet_energy(u, rule()) == doctest::Approx(minus_u_ddc).epsilon(1e-8));
    }
}

TEST_CASE("dd^c u integrates to zero and omega_u has unit mass") {
    for (const TestFunction& u :
         {make_harmonic1(), make_dilation(2.0), make_radial_bump(0.7, 1.2, 0.5),
          make_random_fourier(3), make_mobius(random_mobius(17))}) {
        auto ddc = u.ddc_density;
        const double total_ddc = integrate(
            [&ddc](const complexd& z) {
                const double f = 1.0 + std::norm(z);
                return ddc(z) * std::numbers::pi * f * f;
            },
            rule());
        CHECK(std::abs(total_ddc) < 1e-9);

        const double omega_u_mass = integrate(
            [&ddc](const complexd& z) {
                const double f = 1.0 + std::norm(z);
                const double omega0_density = 1.0 / (std::numbers::pi * f * f);
                return (omega0_density + ddc(z)) / omega0_density;
            },
            rule());
        CHECK(omega_u_mass == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("mean value basics") {
    CHECK(mean_value(make_constant(-2.5), rule()) == doctest::Approx(-2.5).epsilon(1e-14));
    CHECK(std::abs(mean_value(make_harmonic1(), rule())) < 1e-12);

    const double l2 = 2.0;
    const TestFunction u = make_dilation(std::sqrt(l2));
    const double oracle = oracles::radial_omega0(
        [l2](double s) { return std::log1p(l2 * s) - std::log1p(s); });
    CHECK(mean_value(u, rule()) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("random fourier mean vanishes and energy matches the harmonic oracle") {
    for (const std::uint64_t seed : {1ull, 2ull, 9ull}) {
        const TestFunction u = make_random_fourier(seed);
        CHECK(std::abs(mean_value(u, rule())) < 1e-10);
        const auto coeffs = random_fourier_coeffs(seed, 8);
        const auto& degrees = harmonic_basis_degrees();
        double d_oracle = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            d_oracle += degrees[j] * (degrees[j] + 1.0) * coeffs[j] * coeffs[j];
        }
        CHECK(dirichlet_energy(u, rule()) == doctest::Approx(d_oracle).epsilon(1e-9));
    }
}

TEST_CASE("energy_E translation covariance and the h1 value") {
    const TestFunction h1 = make_harmonic1();
    CHECK(energy_E(make_constant(3.0), 4, rule()) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(energy_E(h1, 1, rule()) == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));

    const TestFunction u = make_dilation(std::sqrt(2.0));
    const double direct = -dirichlet_energy(u, rule()) / 4.0 + mean_value(u, rule());
    CHECK(energy_E(u, 2, rule()) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(energy_E(add_constant(u, 1.75), 2, rule()) ==
          doctest::Approx(energy_E(u, 2, rule()) + 1.75).epsilon(1e-10));
}

TEST_CASE("J functional equals D/2") {
    CHECK(j_functional(make_constant(1.0), rule()) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(j_functional(make_harmonic1(), rule()) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    for (const std::uint64_t seed : {4ull, 5ull}) {
        const TestFunction u = make_random_fourier(seed);
        CHECK(j_functional(u, rule()) ==
              doctest::Approx(dirichlet_energy(u, rule()) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("Moebius invariance of the Dirichlet energy on the dilation family") {
    const TestFunction u = make_dilation(1.7);
    const double d0 = dirichlet_energy(u, rule());
    for (const double lambda : {1.4, 0.6}) {
        const TestFunction pulled = pullback(u, MobiusMap::dilation(lambda));
        CHECK(dirichlet_energy(pulled, rule()) == doctest::Approx(d0).epsilon(1e-8));
    }
    const TestFunction rotated = pullback(u, random_mobius(21, 1.0, 1.0));  // pure rotation
    CHECK(dirichlet_energy(rotated, rule()) == doctest::Approx(d0).epsilon(1e-8));
}

TEST_CASE("negative Dirichlet data is rejected") {
    TestFunction bad = make_constant(0.0);
    bad.grad_sq_density = [](const complexd&) { return -1.0; };
    CHECK_THROWS_AS(dirichlet_energy(bad, rule()), std::runtime_error);
}
