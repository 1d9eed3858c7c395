#include <doctest.h>

#include <cmath>
#include <random>

#include "qkd/adversary.hpp"
#include "qkd/source.hpp"

using namespace qkd;

TEST_CASE("eve_chi") {
    CHECK(eve_chi(0.0) == 0.0);
    CHECK(eve_chi(0.2) == doctest::Approx(0.5 * poisson_tail(0.2, 3)).epsilon(1e-14));
    CHECK(eve_chi(0.2) == doctest::Approx(0.0005742406224310548).epsilon(1e-12));
    // P_ok = 1 is the upper envelope
    CHECK(eve_chi(0.2, PokModel::constant(1.0)) == doctest::Approx(poisson_tail(0.2, 3)).epsilon(1e-10));
    // custom model between the envelopes
    const double c = eve_chi(0.3, PokModel::custom([](int n) { return n >= 5 ? 0.9 : 0.6; }));
    CHECK(c > 0.5 * poisson_tail(0.3, 3));
    CHECK(c < poisson_tail(0.3, 3));
    CHECK_THROWS_AS(PokModel::constant(0.4), std::domain_error);
    CHECK_THROWS_AS(eve_chi(0.3, PokModel::custom([](int) { return 0.2; })), std::domain_error);
}

TEST_CASE("solve_irud_strategy regimes and boundaries") {
    const double mu = 0.2;
    const double p1 = poisson_pn(mu, 1);
    const double p2 = poisson_pn(mu, 2);
    const double chi = eve_chi(mu);

    // boundary: m covers the transparent strategy (up to rounding of mu * (x / mu))
    EveStrategy e = solve_irud_strategy(mu, (p1 + p2 + chi) / mu);
    CHECK(e.t <= 1e-12);
    CHECK(e.s == 0.0);

    // just above: Eve cannot match
    e = solve_irud_strategy(mu, std::min(1.0, (p1 + p2 + chi) / mu * 1.01));
    CHECK_FALSE(e.eve_can_match);

    // boundary between blocking singles and blocking doubles
    e = solve_irud_strategy(mu, (p2 + chi) / mu);
    CHECK(e.t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.s <= 1e-12);

    // worked point: mu = 0.2, delta = 0.1
    e = solve_irud_strategy(0.2, 0.1);
    CHECK(e.regime == IrudRegime::TransparentBlockSingles);
    CHECK(e.t == doctest::Approx(0.9813666195844075).epsilon(1e-12));
    CHECK(e.s == 0.0);

    // below chi: full information regime
    e = solve_irud_strategy(0.2, chi / mu * 0.5);
    CHECK(e.regime == IrudRegime::FullInfo);
}

TEST_CASE("irud strategy reproduces the channel attenuation exactly") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> umu(0.05, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double mu = umu(rng);
        const double p1 = poisson_pn(mu, 1);
        const double p2 = poisson_pn(mu, 2);
        const double chi = eve_chi(mu);
        // sample inside the two loss-matching regimes
        std::uniform_real_distribution<double> um(chi, p1 + p2 + chi);
        const double m = um(rng);
        const EveStrategy e = solve_irud_strategy(mu, m / mu);
        const double delivered = (1.0 - e.t) * p1 + (1.0 - e.s) * p2 + chi;
        CHECK(std::abs(delivered - m) < 1e-12);
        CHECK(e.t >= 0.0);
        CHECK(e.t <= 1.0);
        CHECK(e.s >= 0.0);
        CHECK(e.s <= 1.0);
    }
}

TEST_CASE("mutual_info_bb84") {
    // low-loss channel: Eve weak
    MutualInfo low = mutual_info_bb84(0.1, 1.0);
    CHECK(low.i_eve ==
          doctest::Approx((1 - std::exp(-0.1) * 1.1) / (1 - std::exp(-0.1))).epsilon(1e-12));
    CHECK(low.i_eve < 0.1);

    MutualInfo m = mutual_info_bb84(0.1, 0.5);
    CHECK(m.i_ab == doctest::Approx(0.048770575499285984).epsilon(1e-12));
    CHECK(m.i_be == doctest::Approx(0.0046788401604445085).epsilon(1e-12));
    CHECK(m.i_eve == doctest::Approx(0.09593571764419734).epsilon(1e-12));

    // at the reported crossing transmittance the ratio clamps to one
    MutualInfo cross = mutual_info_bb84(0.1, 0.0467884);
    CHECK(cross.raw_ratio > 1.0);
    CHECK(cross.i_eve == 1.0);
}

TEST_CASE("mutual_info_sarg04") {
    // full-information regime
    const double chi = eve_chi(0.2);
    MutualInfo full = mutual_info_sarg04(0.2, chi / 0.2 * 0.5);
    CHECK(full.i_eve == 1.0);

    MutualInfo m = mutual_info_sarg04(0.2, 0.1);
    CHECK(m.i_ab == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(m.i_be == doctest::Approx(0.016948855683990693).epsilon(1e-12));
    CHECK(m.i_eve == doctest::Approx(0.8474427841995344).epsilon(1e-12));

    // i2 scales only the two-photon share of Eve's information
    MutualInfo half = mutual_info_sarg04(0.2, 0.1, IrudParams{PokModel::constant_half(), 0.5});
    CHECK(half.i_be < m.i_be);
    CHECK(half.i_ab == doctest::Approx(m.i_ab).epsilon(1e-14));
}

TEST_CASE("eve information never leaves [0, 1] and grows with loss") {
    for (double mu : {0.05, 0.1, 0.2, 0.5}) {
        double prev_bb = 0.0, prev_sg = 0.0;
        for (double db = 0.0; db <= 40.0; db += 0.25) {
            const double delta = std::pow(10.0, -db / 10.0);
            const double bb = mutual_info_bb84(mu, delta).i_eve;
            const double sg = mutual_info_sarg04(mu, delta).i_eve;
            CHECK(bb >= prev_bb - 1e-15);
            CHECK(sg >= prev_sg - 1e-15);
            CHECK(bb >= 0.0);
            CHECK(bb <= 1.0);
            CHECK(sg >= 0.0);
            CHECK(sg <= 1.0);
            prev_bb = bb;
            prev_sg = sg;
        }
    }
}

TEST_CASE("crossing losses") {
    const double bb = crossing_loss_db_bb84(0.1);
    CHECK(bb == doctest::Approx(13.288438075030387).epsilon(1e-9));
    CHECK(std::abs(bb - 13.3) <= 0.05);
    // bisection cross-check on the unclamped ratio
    double lo = 5.0, hi = 30.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double ratio = mutual_info_bb84(0.1, std::pow(10.0, -mid / 10.0)).raw_ratio;
        (ratio < 1.0 ? lo : hi) = mid;
    }
    CHECK(bb == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));

    const double sg = crossing_loss_db_sarg04(0.2);
    CHECK(sg == doctest::Approx(25.41936083933966).epsilon(1e-9));
    // the full-information regime indeed starts there
    CHECK(solve_irud_strategy(0.2, std::pow(10.0, -(sg + 0.01) / 10.0)).regime == IrudRegime::FullInfo);
    CHECK(solve_irud_strategy(0.2, std::pow(10.0, -(sg - 0.01) / 10.0)).regime ==
          IrudRegime::BlockAllSinglesBlockSomeDoubles);

    // vanishing multiphoton fraction pushes both crossings out
    CHECK(crossing_loss_db_bb84(0.001) > 25.0);
    CHECK(crossing_loss_db_sarg04(0.001) > 60.0);
}
