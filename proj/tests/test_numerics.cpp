#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "xorsat/numerics.hpp"
#include "xorsat/rng.hpp"

using namespace xorsat;

TEST_CASE("poisson tail values") {
    CHECK(poisson_tail(0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(poisson_tail(1, 1.0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-13));
    CHECK(poisson_tail(2, 1.0) == doctest::Approx(1 - 2 * std::exp(-1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(poisson_tail(1, 0.0), std::domain_error);
    CHECK_THROWS_AS(poisson_tail(1, -1.0), std::domain_error);
    // deep tail, where 1 - partial sum would cancel
    double direct = 0, term = std::exp(-1.0);
    for (int j = 1; j <= 30; ++j) {
        term /= j;
        if (j >= 12) direct += term;
    }
    CHECK(poisson_tail(12, 1.0) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("poisson tail is monotone") {
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        const unsigned t = static_cast<unsigned>(rng.below(20));
        const double lam = 0.01 + 30 * rng.uniform();
        CHECK(poisson_tail(t + 1, lam) <= poisson_tail(t, lam));
        CHECK(poisson_tail(t, lam * 1.1) >= poisson_tail(t, lam));
    }
}

TEST_CASE("h limits") {
    CHECK(h_of_mu(50, 3, 2) / 50 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(h_of_mu(1e-3, 3, 2) == doctest::Approx(1000).epsilon(1e-3));
    CHECK(h_of_mu(1e-6, 3, 2) > 1e5);
    const auto cp = critical_point(3, 2);
    CHECK(h_of_mu(cp.mu_crit + 0.1, 3, 2) > h_of_mu(cp.mu_crit, 3, 2));
    CHECK(h_of_mu(cp.mu_crit - 0.1, 3, 2) > h_of_mu(cp.mu_crit, 3, 2));
}

TEST_CASE("critical points agree with the grid oracle") {
    for (unsigned r : {3u, 4u, 5u})
        for (unsigned k : {2u, 3u}) {
            CAPTURE(r);
            CAPTURE(k);
            const auto cp = critical_point(r, k);
            const auto g = oracle::grid_critical(r, k);
            CHECK(std::abs(cp.c_crit - g.c) < 1e-8);
            CHECK(std::abs(cp.mu_crit - g.mu) < 1e-6);
            CHECK(std::abs(criticality_residual(cp.mu_crit, r, k)) < 1e-9);
        }
    const auto c3 = critical_point(3, 2);
    CHECK(c3.c_crit == doctest::Approx(0.818469160761376).epsilon(1e-12));
    CHECK(c3.mu_crit == doctest::Approx(1.256431208626170).epsilon(1e-9));
    CHECK(critical_point(4, 2).c_crit == doctest::Approx(0.772279839802508).epsilon(1e-12));
}

TEST_CASE("mu of c") {
    const auto cp = critical_point(3, 2);
    CHECK(mu_of_c(3, 2, cp.c_crit) == doctest::Approx(cp.mu_crit).epsilon(1e-12));
    const double mu = mu_of_c(3, 2, cp.c_crit + 0.1);
    CHECK(mu > cp.mu_crit);
    CHECK(std::abs(h_of_mu(mu, 3, 2) / 3 - (cp.c_crit + 0.1)) < 1e-10);
    CHECK_THROWS_WITH_AS(mu_of_c(3, 2, cp.c_crit - 0.01), "below critical density", std::domain_error);
    for (double m = cp.mu_crit + 0.05; m < 20; m *= 1.3)
        CHECK(mu_of_c(3, 2, h_of_mu(m, 3, 2) / 3) == doctest::Approx(m).epsilon(1e-8));
}

TEST_CASE("core prediction invariants") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const unsigned r = 3 + static_cast<unsigned>(rng.below(3));
        const unsigned k = 2 + static_cast<unsigned>(rng.below(2));
        const double c = critical_point(r, k).c_crit + 2 * rng.uniform();
        const auto p = core_prediction(r, k, c);
        CHECK(std::abs(h_of_mu(p.mu, r, k) / r - c) < 1e-9);
        CHECK(p.alpha == doctest::Approx(poisson_tail(k, p.mu)).epsilon(1e-12));
        CHECK(p.beta == doctest::Approx(p.mu * poisson_tail(k - 1, p.mu) / r).epsilon(1e-12));
        CHECK(p.zeta == doctest::Approx(r * p.beta / p.alpha).epsilon(1e-12));
        double total = 0, first = 0;
        for (unsigned j = 0; j < p.rho.size(); ++j) {
            if (j < k) CHECK(p.rho[j] == 0);
            total += p.rho[j];
            first += j * p.rho[j];
        }
        CHECK(std::abs(total - 1) < 1e-9);
        CHECK(std::abs(first - p.zeta) < 1e-9);
    }
}

TEST_CASE("lambda equals mu at the threshold") {
    for (unsigned r : {3u, 4u}) {
        const auto cp = critical_point(r, 2);
        const auto p = core_prediction(r, 2, cp.c_crit);
        CHECK(std::abs(p.lambda - cp.mu_crit) < 1e-8);
    }
}

TEST_CASE("mean core degree increases with density") {
    const double c0 = critical_point(3, 2).c_crit;
    double prev = 0;
    for (int i = 0; i < 50; ++i) {
        const double z = core_prediction(3, 2, c0 + 0.5 * i / 49).zeta;
        CHECK(z > prev);
        prev = z;
    }
}

TEST_CASE("contraction ratio prediction") {
    CHECK(std::abs(q2_ratio_prediction(3, critical_point(3, 2).c_crit) - 1) < 1e-8);
    CHECK(std::abs(q2_ratio_prediction(4, critical_point(4, 2).c_crit) - 1) < 1e-8);
    CHECK(q2_ratio_prediction(3, critical_point(3, 2).c_crit + 0.1) < 1);
}
