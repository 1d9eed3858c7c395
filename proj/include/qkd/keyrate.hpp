#ifndef QKD_KEYRATE_HPP
#define QKD_KEYRATE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkd/adversary.hpp"
#include "qkd/channel.hpp"
#include "qkd/source.hpp"

namespace qkd {

// How dark counts combine with the threshold-detector click probability.
// Additive is the working model; Multiplicative is a sensitivity variant.
enum class DarkCountMode { Additive, Multiplicative };

struct DetectionModel {
    double y0 = 50e-6;          // dark count probability per pulse
    double e0 = 0.5;            // error rate of a dark count
    double transmittance = 1.0; // channel delta
    DarkCountMode mode = DarkCountMode::Additive;

    void validate() const {
        if (!(y0 >= 0.0 && y0 < 1.0)) throw std::domain_error("DetectionModel: y0 must lie in [0, 1)");
        if (!(e0 >= 0.0 && e0 <= 1.0)) throw std::domain_error("DetectionModel: e0 must lie in [0, 1]");
        if (!(transmittance >= 0.0 && transmittance <= 1.0))
            throw std::domain_error("DetectionModel: transmittance must lie in [0, 1]");
    }
};

enum class ProtocolKind { Bb84, Sarg04, Bb84VacuumWeakDecoy, Sarg04VacuumTwoWeakDecoy };

bool is_decoy(ProtocolKind kind);
std::string protocol_name(ProtocolKind kind);

struct ProtocolVariant {
    ProtocolKind kind = ProtocolKind::Bb84;
    double f_ec = 1.22;  // error-correction inefficiency (Cascade)

    // sifting efficiency: 1/2 for the BB84 family, 1/4 for SARG04
    double q() const {
        return (kind == ProtocolKind::Bb84 || kind == ProtocolKind::Bb84VacuumWeakDecoy) ? 0.5 : 0.25;
    }
};

// Y_n: click probability given an n-photon pulse left Alice.
double yield_n(int n, const DetectionModel& det);

struct GainQber {
    double q_mu = 0.0;             // Q_mu
    std::optional<double> e_mu;    // E_mu; empty when Q_mu = 0
};

// Closed forms of Q_mu = sum Y_n P_n and E_mu = e0 Y_0 / Q_mu.
GainQber gain_and_qber(double mu, const DetectionModel& det);

// Shannon binary entropy in bits; H2(0) = H2(1) = 0.
double binary_entropy(double x);

struct DecoyObservable {
    double intensity = 0.0;
    double gain = 0.0;
    std::optional<double> qber;
};

// Asymptotic observables Alice and Bob would record at each intensity under
// the detection model. Single source of "measured" values; external
// observables can be passed to the bound estimators instead.
std::vector<DecoyObservable> simulate_decoy_observables(const std::vector<double>& intensities,
                                                        const DetectionModel& det);

struct DecoyEstimates {
    double y0_est = 0.0;
    double y1_lower = 0.0;
    double y2_lower = 0.0;
    double q1_lower = 0.0;
    double q2_lower = 0.0;
    double e1_upper = 1.0;
    double e2_upper = 1.0;
    bool y1_degenerate = false;  // Y_1 bound collapsed to 0; rate will be 0
    bool y2_degenerate = false;
};

// Vacuum + weak decoy bounds for BB84. `observables` must contain entries for
// intensities 0, nu and mu.
DecoyEstimates decoy_bounds_bb84(double mu, double nu, const std::vector<DecoyObservable>& observables,
                                 const DetectionModel& det);

// Vacuum + two weak decoy bounds for SARG04 (entries for 0, nu1, nu2
// required). Requires 0 < nu1 < nu2 and nu1 + nu2 < mu.
DecoyEstimates decoy_bounds_sarg04(double mu, double nu1, double nu2,
                                   const std::vector<DecoyObservable>& observables,
                                   const DetectionModel& det);

struct KeyRateReport {
    ProtocolVariant protocol;
    double distance_m = 0.0;  // 0 when the computation was not tied to a link
    double transmittance = 0.0;
    double gain_q_mu = 0.0;
    std::optional<double> qber_e_mu;
    std::optional<double> omega;            // non-decoy protocols
    std::optional<DecoyEstimates> bounds;   // decoy protocols
    double rate_bits_per_pulse = 0.0;
    bool secure = false;
};

// R = q (-Q_mu f H2(E_mu) + Omega Q_mu (1 - H2(E_mu / Omega))), clamped at 0.
// The distillation term is dropped when Omega = 0 or E_mu/Omega > 1/2.
KeyRateReport rate_nondecoy(const ProtocolVariant& protocol, double mu, const DetectionModel& det,
                            double omega);

// R = q (-Q_mu f H2(E_mu) + Q_1^L (1 - H2(e_1^U))), q = 1/2.
KeyRateReport rate_bb84_decoy(double mu, double nu, const DetectionModel& det, double f_ec = 1.22);
KeyRateReport rate_bb84_decoy(double mu, double nu, const std::vector<DecoyObservable>& observables,
                              const DetectionModel& det, double f_ec = 1.22);

// R = q (-Q_mu f H2(E_mu) + Q_1^L (1 - H2(e_1^U)) + Q_2^L (1 - H2(e_2^U))), q = 1/4.
KeyRateReport rate_sarg04_decoy(double mu, double nu1, double nu2, const DetectionModel& det,
                                double f_ec = 1.22);
KeyRateReport rate_sarg04_decoy(double mu, double nu1, double nu2,
                                const std::vector<DecoyObservable>& observables,
                                const DetectionModel& det, double f_ec = 1.22);

// Joins channel, adversary and rate formula for one link at one intensity set.
KeyRateReport rate_for(const ProtocolVariant& protocol, const LinkScenario& scenario,
                       const SourceConfig& source, const DetectionModel& det_template,
                       const IrudParams& irud = {});

} // namespace qkd

#endif
