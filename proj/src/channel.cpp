#include "qkd/channel.hpp"

#include <cmath>
#include <numbers>

namespace qkd {

void AtmosphereRegime::validate() const {
    if (turb_loss_db < 0.0 || scatter_abs_loss_db < 0.0)
        throw std::domain_error("AtmosphereRegime: dB losses must be non-negative");
    if (kind == AtmosphereKind::Vacuum && (turb_loss_db != 0.0 || scatter_abs_loss_db != 0.0))
        throw std::domain_error("AtmosphereRegime: vacuum link cannot carry atmospheric loss");
    if (kind == AtmosphereKind::DownlinkClear && turb_loss_db != 0.0)
        throw std::domain_error("AtmosphereRegime: downlink turbulence loss is pinned to 0 dB");
}

void LinkScenario::validate() const {
    transmitter.validate();
    receiver.validate();
    atmosphere.validate();
    if (wavelength_m <= 0.0) throw std::domain_error("LinkScenario: wavelength must be positive");
    if (distance_m <= 0.0) throw std::domain_error("LinkScenario: distance must be positive");
    if (!(receiver_efficiency > 0.0 && receiver_efficiency <= 1.0))
        throw std::domain_error("LinkScenario: receiver efficiency must lie in (0, 1]");
    if (extra_loss_db < 0.0) throw std::domain_error("LinkScenario: extra loss must be non-negative");
}

void AltUplinkParams::validate() const {
    if (!(pointing_loss >= 0.0 && pointing_loss < 1.0))
        throw std::domain_error("AltUplinkParams: pointing loss must lie in [0, 1)");
    if (!(tx_transmission > 0.0 && tx_transmission <= 1.0 && rx_transmission > 0.0 && rx_transmission <= 1.0))
        throw std::domain_error("AltUplinkParams: telescope transmissions must lie in (0, 1]");
    if (tx_diameter_m <= 0.0 || rx_diameter_m <= 0.0)
        throw std::domain_error("AltUplinkParams: telescope diameters must be positive");
    if (atm_loss_db < 0.0 || atm_divergence_rad < 0.0)
        throw std::domain_error("AltUplinkParams: atmospheric terms must be non-negative");
}

namespace {

// (e^{-2 g^2 a^2} - e^{-2 a^2}) for one telescope end, g = b/R, a = R/omega.
double end_factor(double g, double a) {
    const double a2 = a * a;
    return std::exp(-2.0 * g * g * a2) - std::exp(-2.0 * a2);
}

} // namespace

double diffraction_transmittance(const TelescopeGeometry& tx, const TelescopeGeometry& rx,
                                 double wavelength_m, double distance_m) {
    tx.validate();
    rx.validate();
    if (wavelength_m <= 0.0 || distance_m <= 0.0)
        throw std::domain_error("diffraction_transmittance: wavelength and distance must be positive");

    const double gamma_t = tx.secondary_radius_m / tx.primary_radius_m;
    const double gamma_r = rx.secondary_radius_m / rx.primary_radius_m;
    const double omega_r =
        std::numbers::sqrt2 * wavelength_m * distance_m / (std::numbers::pi * tx.primary_radius_m);
    const double alpha_t = 1.0;  // omega_t = R_t
    const double alpha_r = rx.primary_radius_m / omega_r;
    return end_factor(gamma_t, alpha_t) * end_factor(gamma_r, alpha_r);
}

double turbulence_transmittance_model(double wavelength_m, double tx_primary_radius_m,
                                      double fried_ref_r0_m, double fried_ref_wavelength_m) {
    if (wavelength_m <= 0.0 || tx_primary_radius_m <= 0.0 || fried_ref_r0_m <= 0.0 ||
        fried_ref_wavelength_m <= 0.0)
        throw std::domain_error("turbulence_transmittance_model: all lengths must be positive");
    const double r0 = fried_ref_r0_m * std::pow(wavelength_m / fried_ref_wavelength_m, 6.0 / 5.0);
    const double theta_turb = wavelength_m / r0;
    const double theta_beam = wavelength_m / tx_primary_radius_m;
    const double b2 = theta_beam * theta_beam;
    return b2 / (b2 + theta_turb * theta_turb);
}

double total_transmittance(const LinkScenario& s) {
    s.validate();
    const double d_diff = diffraction_transmittance(s.transmitter, s.receiver, s.wavelength_m, s.distance_m) *
                          transmittance_from_db(s.extra_loss_db);
    const double d_atm = transmittance_from_db(s.atmosphere.total_loss_db());
    return d_diff * d_atm * s.receiver_efficiency;
}

double alt_uplink_transmittance(double distance_m, double wavelength_m, const AltUplinkParams& p) {
    p.validate();
    if (distance_m <= 0.0 || wavelength_m <= 0.0)
        throw std::domain_error("alt_uplink_transmittance: distance and wavelength must be positive");
    const double theta_t = wavelength_m / p.tx_diameter_m;
    const double cone = distance_m * distance_m * (theta_t * theta_t + p.atm_divergence_rad * p.atm_divergence_rad) /
                        (p.rx_diameter_m * p.rx_diameter_m);
    const double loss = cone / (p.tx_transmission * (1.0 - p.pointing_loss) * p.rx_transmission) *
                        std::pow(10.0, p.atm_loss_db / 10.0);
    return 1.0 / loss;
}

double db_from_transmittance(double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::domain_error("db_from_transmittance: transmittance must lie in (0, 1]");
    return -10.0 * std::log10(delta);
}

double transmittance_from_db(double loss_db) {
    if (loss_db < 0.0) throw std::domain_error("transmittance_from_db: loss must be non-negative");
    return std::pow(10.0, -loss_db / 10.0);
}

} // namespace qkd
