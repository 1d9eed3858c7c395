#include "qkd/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "qkd/channel.hpp"
#include "qkd/source.hpp"

namespace qkd {

PokModel PokModel::constant(double p) {
    if (!(p >= 0.5 && p <= 1.0)) throw std::domain_error("PokModel: P_ok must lie in [1/2, 1]");
    if (p == 0.5) return constant_half();
    return {[p](int) { return p; }};
}

double PokModel::operator()(int n) const {
    if (n < 3) throw std::domain_error("PokModel: defined for n >= 3 only");
    if (!fn) return 0.5;
    const double p = fn(n);
    if (!(p >= 0.5 && p <= 1.0)) throw std::domain_error("PokModel: P_ok(n) must lie in [1/2, 1]");
    return p;
}

double eve_chi(double mu, const PokModel& pok) {
    if (mu < 0.0) throw std::domain_error("eve_chi: mu must be non-negative");
    if (mu == 0.0) return 0.0;
    if (pok.is_constant_half()) return 0.5 * poisson_tail(mu, 3);
    // P_ok <= 1, so once the Poisson term drops below 1e-22 the remainder of
    // the sum is negligible against the leading mass
    double sum = 0.0;
    double term = poisson_pn(mu, 3);
    for (int n = 3; term > 1e-22 && n < 500; ++n) {
        sum += term * pok(n);
        term *= mu / (n + 1);
    }
    return sum;
}

EveStrategy solve_irud_strategy(double mu, double delta, const PokModel& pok) {
    if (!(mu > 0.0)) throw std::domain_error("solve_irud_strategy: mu must be positive");
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::domain_error("solve_irud_strategy: delta must lie in (0, 1]");

    const double m = mu * delta;  // mean photons Bob must receive
    const double p1 = poisson_pn(mu, 1);
    const double p2 = poisson_pn(mu, 2);
    const double chi = eve_chi(mu, pok);

    EveStrategy e;
    e.attack = EveAttack::IRUD;
    e.chi = chi;
    if (m >= p1 + p2 + chi) {
        // channel too transparent: even the all-pass strategy under-delivers
        e.t = 0.0;
        e.s = 0.0;
        e.regime = IrudRegime::TransparentBlockSingles;
        e.eve_can_match = false;
    } else if (m >= p2 + chi) {
        e.t = 1.0 - (m - p2 - chi) / p1;
        e.s = 0.0;
        e.regime = IrudRegime::TransparentBlockSingles;
    } else if (m >= chi) {
        e.t = 1.0;
        e.s = 1.0 - (m - chi) / p2;
        e.regime = IrudRegime::BlockAllSinglesBlockSomeDoubles;
    } else {
        e.t = 1.0;
        e.s = 1.0;
        e.regime = IrudRegime::FullInfo;
    }
    return e;
}

MutualInfo mutual_info_bb84(double mu, double delta) {
    if (!(mu > 0.0)) throw std::domain_error("mutual_info_bb84: mu must be positive");
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::domain_error("mutual_info_bb84: delta must lie in (0, 1]");
    MutualInfo info;
    info.i_ab = -std::expm1(-mu * delta);
    info.i_be = poisson_tail(mu, 2);
    info.raw_ratio = info.i_be / info.i_ab;
    info.i_eve = std::min(info.raw_ratio, 1.0);
    return info;
}

MutualInfo mutual_info_sarg04(double mu, double delta, const IrudParams& params) {
    params.validate();
    const EveStrategy e = solve_irud_strategy(mu, delta, params.pok);
    const double p1 = poisson_pn(mu, 1);
    const double p2 = poisson_pn(mu, 2);
    MutualInfo info;
    info.i_ab = p1 * (1.0 - e.t) + p2 * (1.0 - e.s) + e.chi;
    info.i_be = p2 * (1.0 - e.s) * params.i2 + e.chi;
    info.raw_ratio = info.i_ab > 0.0 ? info.i_be / info.i_ab : 1.0;
    info.i_eve = e.regime == IrudRegime::FullInfo ? 1.0 : std::min(info.raw_ratio, 1.0);
    return info;
}

double crossing_loss_db_bb84(double mu) {
    if (!(mu > 0.0)) throw std::domain_error("crossing_loss_db_bb84: mu must be positive");
    const double delta = -std::log1p(-poisson_tail(mu, 2)) / mu;
    return db_from_transmittance(delta);
}

double crossing_loss_db_sarg04(double mu, const PokModel& pok) {
    if (!(mu > 0.0)) throw std::domain_error("crossing_loss_db_sarg04: mu must be positive");
    return db_from_transmittance(eve_chi(mu, pok) / mu);
}

} // namespace qkd
