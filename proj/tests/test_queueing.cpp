#include <cmath>

#include "doctest.h"

#include "splitq/queueing.hpp"
#include "splitq/rng.hpp"

using namespace splitq;

namespace {

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("rate and epsilon reject non-positive and non-finite values") {
    CHECK_THROWS_AS(Rate(0.0), InvalidParameter);
    CHECK_THROWS_AS(Rate(-1.0), InvalidParameter);
    CHECK_THROWS_AS(Rate(std::nan("")), InvalidParameter);
    CHECK_THROWS_AS(Rate(std::numeric_limits<double>::infinity()), InvalidParameter);
    CHECK_THROWS_AS(Epsilon(0.0), InvalidParameter);
    CHECK_THROWS_AS(Epsilon(-0.5), InvalidParameter);
    CHECK(Rate(1e-12).value() == 1e-12);
    CHECK(Epsilon(2.0).value() == 2.0);
}

TEST_CASE("utilization is the plain ratio") {
    CHECK(utilization(Rate(1), Rate(2)) == 0.5);
    CHECK(utilization(Rate(2), Rate(2)) == 1.0);   // saturation boundary, no error
    // worst-case monolith rate at epsilon=2, mu=18: 18/7
    CHECK(close_rel(utilization(Rate(1), Rate(18.0 / 7.0)), 7.0 / 18.0, 1e-12));
}

TEST_CASE("mm1 sojourn matches 1/(mu - lambda)") {
    const StageMetrics m = mm1_sojourn(Rate(1), Rate(2));
    CHECK(close_rel(m.sojourn_time, 1.0, 1e-12));
    CHECK(close_rel(m.rho, 0.5, 1e-12));
    CHECK(close_rel(m.wait_time, 0.5, 1e-12));
    CHECK_FALSE(m.near_saturation);

    // empty system: sojourn tends to the bare service time 1/mu
    CHECK(close_rel(mm1_sojourn(Rate(1e-12), Rate(2)).sojourn_time, 0.5, 1e-9));

    // monolith of the worst-case scenario (epsilon=2, mu=18): 1/(18/7 - 1) = 7/11
    CHECK(close_rel(mm1_sojourn(Rate(1), Rate(18.0 / 7.0)).sojourn_time, 7.0 / 11.0, 1e-12));
}

TEST_CASE("md1 sojourn matches 1/mu + lambda/(2 mu (mu - lambda))") {
    CHECK(close_rel(md1_sojourn(Rate(1), Rate(2)).sojourn_time, 0.75, 1e-12));
    CHECK(close_rel(md1_sojourn(Rate(1e-12), Rate(2)).sojourn_time, 0.5, 1e-9));
    // best-case monolith at mu=2.5: 0.4 + 0.2/1.5 = 8/15
    CHECK(close_rel(md1_sojourn(Rate(1), Rate(2.5)).sojourn_time, 8.0 / 15.0, 1e-12));
}

TEST_CASE("sojourn dispatches on the discipline") {
    const StageMetrics mm = sojourn(Discipline::ExponentialService, Rate(1), Rate(2));
    const StageMetrics md = sojourn(Discipline::DeterministicService, Rate(1), Rate(2));
    CHECK(mm.sojourn_time == mm1_sojourn(Rate(1), Rate(2)).sojourn_time);
    CHECK(md.sojourn_time == md1_sojourn(Rate(1), Rate(2)).sojourn_time);
    CHECK(close_rel(sojourn(Discipline::DeterministicService, Rate(1e-12), Rate(2)).sojourn_time,
                    0.5, 1e-9));
}

TEST_CASE("stability guard rejects lambda >= mu for both disciplines") {
    CHECK_THROWS_AS(mm1_sojourn(Rate(2), Rate(2)), UnstableQueue);
    CHECK_THROWS_AS(md1_sojourn(Rate(2), Rate(2)), UnstableQueue);
    CHECK_THROWS_AS(mm1_sojourn(Rate(3), Rate(2)), UnstableQueue);

    try {
        mm1_sojourn(Rate(5), Rate(4));
        FAIL("expected UnstableQueue");
    } catch (const UnstableQueue& e) {
        CHECK(e.lambda() == 5.0);
        CHECK(e.mu() == 4.0);
    }

    // randomized: any draw with lambda >= mu must throw
    SplitMix64 rng(20240801);
    for (int i = 0; i < 200; ++i) {
        const double mu = 0.1 + 10.0 * rng.next_unit();
        const double lambda = mu * (1.0 + rng.next_unit());
        CHECK_THROWS_AS(sojourn(i % 2 ? Discipline::ExponentialService
                                      : Discipline::DeterministicService,
                                Rate(lambda), Rate(mu)),
                        UnstableQueue);
    }
}

TEST_CASE("deterministic service dominates exponential service") {
    SplitMix64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double mu = 0.05 + 20.0 * rng.next_unit();
        const double rho = 1e-3 + (0.999 - 1e-3) * rng.next_unit();
        const double lambda = rho * mu;
        const double mm = mm1_sojourn(Rate(lambda), Rate(mu)).sojourn_time;
        const double md = md1_sojourn(Rate(lambda), Rate(mu)).sojourn_time;
        CHECK(md < mm);   // strict away from the lambda->0 limit
    }
}

TEST_CASE("sojourn scales as 1/c under (lambda, mu) -> (c lambda, c mu)") {
    SplitMix64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double mu = 0.05 + 20.0 * rng.next_unit();
        const double lambda = mu * (1e-6 + 0.9999 * rng.next_unit() * 0.999);
        const double c = std::exp((rng.next_unit() - 0.5) * 12.0);   // ~ [e^-6, e^6]
        for (Discipline d : {Discipline::ExponentialService, Discipline::DeterministicService}) {
            const double base = sojourn(d, Rate(lambda), Rate(mu)).sojourn_time;
            const double scaled = sojourn(d, Rate(c * lambda), Rate(c * mu)).sojourn_time;
            CHECK(close_rel(scaled, base / c, 1e-12));
        }
    }
}

TEST_CASE("sojourn is increasing in lambda and decreasing in mu") {
    SplitMix64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        const double mu = 0.1 + 10.0 * rng.next_unit();
        const double l1 = mu * (0.01 + 0.9 * rng.next_unit());
        const double l2 = l1 + (mu - l1) * (0.01 + 0.5 * rng.next_unit());
        const double mu2 = mu * (1.01 + rng.next_unit());
        for (Discipline d : {Discipline::ExponentialService, Discipline::DeterministicService}) {
            CHECK(sojourn(d, Rate(l1), Rate(mu)).sojourn_time <
                  sojourn(d, Rate(l2), Rate(mu)).sojourn_time);
            CHECK(sojourn(d, Rate(l1), Rate(mu2)).sojourn_time <
                  sojourn(d, Rate(l1), Rate(mu)).sojourn_time);
        }
    }
}

TEST_CASE("wait plus service time reconstructs the sojourn") {
    SplitMix64 rng(17);
    for (int i = 0; i < 2000; ++i) {
        const double mu = 0.05 + 50.0 * rng.next_unit();
        const double lambda = mu * (1e-5 + 0.9999 * rng.next_unit() * 0.99);
        for (Discipline d : {Discipline::ExponentialService, Discipline::DeterministicService}) {
            const StageMetrics m = sojourn(d, Rate(lambda), Rate(mu));
            CHECK(m.wait_time >= 0.0);
            CHECK(m.rho > 0.0);
            CHECK(m.rho < 1.0);
            CHECK(close_rel(m.wait_time + 1.0 / mu, m.sojourn_time, 1e-12));
            CHECK(m.sojourn_time >= 1.0 / mu);
        }
    }
}

TEST_CASE("near-saturation flag trips above rho = 0.99") {
    CHECK(mm1_sojourn(Rate(0.995), Rate(1)).near_saturation);
    CHECK_FALSE(mm1_sojourn(Rate(0.985), Rate(1)).near_saturation);
    CHECK(md1_sojourn(Rate(0.999), Rate(1)).near_saturation);
}
