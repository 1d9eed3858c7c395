#include "qkd/keyrate.hpp"

#include <algorithm>
#include <cmath>

namespace qkd {

bool is_decoy(ProtocolKind kind) {
    return kind == ProtocolKind::Bb84VacuumWeakDecoy || kind == ProtocolKind::Sarg04VacuumTwoWeakDecoy;
}

std::string protocol_name(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::Bb84: return "bb84";
        case ProtocolKind::Sarg04: return "sarg04";
        case ProtocolKind::Bb84VacuumWeakDecoy: return "bb84-decoy";
        case ProtocolKind::Sarg04VacuumTwoWeakDecoy: return "sarg04-decoy";
    }
    return "unknown";
}

double yield_n(int n, const DetectionModel& det) {
    if (n < 0) throw std::domain_error("yield_n: n must be non-negative");
    det.validate();
    const double miss = std::pow(1.0 - det.transmittance, n);
    const double y = det.mode == DarkCountMode::Additive ? det.y0 + 1.0 - miss
                                                         : 1.0 - miss * (1.0 - det.y0);
    return std::min(y, 1.0);
}

GainQber gain_and_qber(double mu, const DetectionModel& det) {
    if (mu < 0.0) throw std::domain_error("gain_and_qber: mu must be non-negative");
    det.validate();
    const double click = -std::expm1(-mu * det.transmittance);
    GainQber g;
    g.q_mu = det.mode == DarkCountMode::Additive ? det.y0 + click : det.y0 + (1.0 - det.y0) * click;
    if (g.q_mu > 0.0) g.e_mu = det.e0 * det.y0 / g.q_mu;
    return g;
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary_entropy: argument must lie in [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

std::vector<DecoyObservable> simulate_decoy_observables(const std::vector<double>& intensities,
                                                        const DetectionModel& det) {
    std::vector<DecoyObservable> out;
    out.reserve(intensities.size());
    for (double nu : intensities) {
        const GainQber g = gain_and_qber(nu, det);
        out.push_back({nu, g.q_mu, g.e_mu});
    }
    return out;
}

namespace {

const DecoyObservable& find_observable(const std::vector<DecoyObservable>& obs, double intensity) {
    for (const auto& o : obs) {
        if (std::abs(o.intensity - intensity) <= 1e-12 * std::max(1.0, std::abs(intensity))) return o;
    }
    throw std::domain_error("decoy bounds: missing observable for requested intensity");
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// error-weighted gain E Q e^{nu}; a vanished gain carries no errors
double weighted_error(const DecoyObservable& o) {
    return o.qber ? *o.qber * o.gain * std::exp(o.intensity) : 0.0;
}

} // namespace

DecoyEstimates decoy_bounds_bb84(double mu, double nu, const std::vector<DecoyObservable>& observables,
                                 const DetectionModel& det) {
    if (!(nu > 0.0 && nu < mu)) throw std::domain_error("decoy_bounds_bb84: need 0 < nu < mu");
    det.validate();
    const DecoyObservable& vac = find_observable(observables, 0.0);
    const DecoyObservable& onu = find_observable(observables, nu);
    const DecoyObservable& omu = find_observable(observables, mu);

    DecoyEstimates est;
    est.y0_est = vac.gain;
    const double y1 = mu / (mu * nu - nu * nu) *
                      (onu.gain * std::exp(nu) - omu.gain * std::exp(mu) * (nu * nu) / (mu * mu) -
                       (mu * mu - nu * nu) / (mu * mu) * est.y0_est);
    est.y1_degenerate = !(y1 > 0.0);
    est.y1_lower = clamp01(y1);
    est.q1_lower = mu * std::exp(-mu) * est.y1_lower;
    est.e1_upper = est.y1_degenerate ? 1.0 : clamp01(det.e0 * est.y0_est / est.y1_lower);
    est.y2_degenerate = true;  // not estimated by the vacuum + weak method
    return est;
}

DecoyEstimates decoy_bounds_sarg04(double mu, double nu1, double nu2,
                                   const std::vector<DecoyObservable>& observables,
                                   const DetectionModel& det) {
    if (!(0.0 < nu1 && nu1 < nu2 && nu1 + nu2 < mu))
        throw std::domain_error("decoy_bounds_sarg04: need 0 < nu1 < nu2 and nu1 + nu2 < mu");
    det.validate();
    const DecoyObservable& vac = find_observable(observables, 0.0);
    const DecoyObservable& o1 = find_observable(observables, nu1);
    const DecoyObservable& o2 = find_observable(observables, nu2);

    DecoyEstimates est;
    est.y0_est = vac.gain;
    const double g1 = o1.gain * std::exp(nu1) - est.y0_est;
    const double g2 = o2.gain * std::exp(nu2) - est.y0_est;

    // Y_1: eliminate Y_2 between the two decoy gains; the discarded n >= 3
    // tail only lowers the estimate.
    const double y1 = (nu2 * nu2 * g1 - nu1 * nu1 * g2) / (nu1 * nu2 * (nu2 - nu1));
    est.y1_degenerate = !(y1 > 0.0);
    est.y1_lower = clamp01(y1);

    // Y_2: eliminate Y_1; the n >= 3 tail is bounded by its Y_n = 1 worst case.
    const double tail_cap = exp_tail(nu2, 3) / nu2 - exp_tail(nu1, 3) / nu1;
    const double y2 = 2.0 * ((g2 / nu2 - g1 / nu1) - tail_cap) / (nu2 - nu1);
    est.y2_degenerate = !(y2 > 0.0);
    est.y2_lower = clamp01(y2);

    est.q1_lower = mu * std::exp(-mu) * est.y1_lower;
    est.q2_lower = 0.5 * mu * mu * std::exp(-mu) * est.y2_lower;

    const double w1 = weighted_error(o1) - det.e0 * est.y0_est;
    const double w2 = weighted_error(o2) - det.e0 * est.y0_est;
    est.e1_upper = est.y1_degenerate ? 1.0 : clamp01(w1 / (nu1 * est.y1_lower));
    if (est.y2_degenerate) {
        est.e2_upper = 1.0;
    } else {
        double e2 = 2.0 * (w2 / nu2 - w1 / nu1) / (est.y2_lower * (nu2 - nu1));
        if (!(e2 > 0.0)) e2 = 2.0 * w2 / (nu2 * nu2 * est.y2_lower);
        est.e2_upper = clamp01(e2);
    }
    return est;
}

namespace {

// distillation factor 1 - H2(x), zero once x reaches 1/2
double distill(double x) { return 1.0 - binary_entropy(std::min(x, 0.5)); }

KeyRateReport finish_report(KeyRateReport r, double q, double f_ec, double positive) {
    const double h_e = r.qber_e_mu ? binary_entropy(std::min(*r.qber_e_mu, 1.0)) : 0.0;
    const double raw = q * (positive - r.gain_q_mu * f_ec * h_e);
    r.rate_bits_per_pulse = std::max(raw, 0.0);
    r.secure = raw > 0.0;
    return r;
}

} // namespace

KeyRateReport rate_nondecoy(const ProtocolVariant& protocol, double mu, const DetectionModel& det,
                            double omega) {
    if (is_decoy(protocol.kind)) throw std::domain_error("rate_nondecoy: decoy protocol kind");
    if (!(omega >= 0.0 && omega <= 1.0)) throw std::domain_error("rate_nondecoy: omega must lie in [0, 1]");
    KeyRateReport r;
    r.protocol = protocol;
    r.transmittance = det.transmittance;
    const GainQber g = gain_and_qber(mu, det);
    r.gain_q_mu = g.q_mu;
    r.qber_e_mu = g.e_mu;
    r.omega = omega;
    double positive = 0.0;
    if (omega > 0.0 && g.e_mu) {  // Q_mu = 0 leaves QBER undefined and nothing to distill
        const double ratio = *g.e_mu / omega;
        if (ratio <= 0.5) positive = omega * g.q_mu * distill(ratio);
    }
    return finish_report(std::move(r), protocol.q(), protocol.f_ec, positive);
}

KeyRateReport rate_bb84_decoy(double mu, double nu, const DetectionModel& det, double f_ec) {
    return rate_bb84_decoy(mu, nu, simulate_decoy_observables({0.0, nu, mu}, det), det, f_ec);
}

KeyRateReport rate_bb84_decoy(double mu, double nu, const std::vector<DecoyObservable>& observables,
                              const DetectionModel& det, double f_ec) {
    KeyRateReport r;
    r.protocol = {ProtocolKind::Bb84VacuumWeakDecoy, f_ec};
    r.transmittance = det.transmittance;
    const GainQber g = gain_and_qber(mu, det);
    r.gain_q_mu = g.q_mu;
    r.qber_e_mu = g.e_mu;
    const DecoyEstimates est = decoy_bounds_bb84(mu, nu, observables, det);
    r.bounds = est;
    const double positive = est.y1_degenerate ? 0.0 : est.q1_lower * distill(est.e1_upper);
    return finish_report(std::move(r), r.protocol.q(), f_ec, positive);
}

KeyRateReport rate_sarg04_decoy(double mu, double nu1, double nu2, const DetectionModel& det,
                                double f_ec) {
    return rate_sarg04_decoy(mu, nu1, nu2, simulate_decoy_observables({0.0, nu1, nu2}, det), det, f_ec);
}

KeyRateReport rate_sarg04_decoy(double mu, double nu1, double nu2,
                                const std::vector<DecoyObservable>& observables,
                                const DetectionModel& det, double f_ec) {
    KeyRateReport r;
    r.protocol = {ProtocolKind::Sarg04VacuumTwoWeakDecoy, f_ec};
    r.transmittance = det.transmittance;
    const GainQber g = gain_and_qber(mu, det);
    r.gain_q_mu = g.q_mu;
    r.qber_e_mu = g.e_mu;
    const DecoyEstimates est = decoy_bounds_sarg04(mu, nu1, nu2, observables, det);
    r.bounds = est;
    double positive = est.y1_degenerate ? 0.0 : est.q1_lower * distill(est.e1_upper);
    if (!est.y2_degenerate) positive += est.q2_lower * distill(est.e2_upper);
    return finish_report(std::move(r), r.protocol.q(), f_ec, positive);
}

KeyRateReport rate_for(const ProtocolVariant& protocol, const LinkScenario& scenario,
                       const SourceConfig& source, const DetectionModel& det_template,
                       const IrudParams& irud) {
    source.validate(protocol.kind == ProtocolKind::Sarg04VacuumTwoWeakDecoy);
    DetectionModel det = det_template;
    det.transmittance = total_transmittance(scenario);

    KeyRateReport r;
    switch (protocol.kind) {
        case ProtocolKind::Bb84:
            r = rate_nondecoy(protocol, source.mu, det, 1.0 - mutual_info_bb84(source.mu, det.transmittance).i_eve);
            break;
        case ProtocolKind::Sarg04:
            r = rate_nondecoy(protocol, source.mu, det,
                              1.0 - mutual_info_sarg04(source.mu, det.transmittance, irud).i_eve);
            break;
        case ProtocolKind::Bb84VacuumWeakDecoy: {
            if (source.decoys.empty()) throw std::domain_error("rate_for: BB84 decoy protocol needs one weak decoy");
            double nu = 0.0;
            for (double v : source.decoys)
                if (v > 0.0) nu = v;
            r = rate_bb84_decoy(source.mu, nu, det, protocol.f_ec);
            break;
        }
        case ProtocolKind::Sarg04VacuumTwoWeakDecoy: {
            std::vector<double> weak;
            for (double v : source.decoys)
                if (v > 0.0) weak.push_back(v);
            r = rate_sarg04_decoy(source.mu, weak[0], weak[1], det, protocol.f_ec);
            break;
        }
    }
    r.protocol = protocol;
    r.distance_m = scenario.distance_m;
    return r;
}

} // namespace qkd
