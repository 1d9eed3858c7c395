#ifndef QKD_CHANNEL_HPP
#define QKD_CHANNEL_HPP

#include <stdexcept>

namespace qkd {

// One Cassegrain telescope end: primary mirror radius R, secondary (obscuring)
// mirror radius b.
struct TelescopeGeometry {
    double primary_radius_m = 0.0;
    double secondary_radius_m = 0.0;

    void validate() const {
        if (!(secondary_radius_m > 0.0 && secondary_radius_m < primary_radius_m))
            throw std::domain_error("TelescopeGeometry: need 0 < secondary radius < primary radius");
    }
};

enum class AtmosphereKind { Vacuum, DownlinkClear, UplinkFixedTurb };

// Atmospheric losses as fixed dB budgets. Turbulence enters only for uplinks;
// downlink turbulence is negligible and pinned to 0 dB.
struct AtmosphereRegime {
    AtmosphereKind kind = AtmosphereKind::Vacuum;
    double turb_loss_db = 0.0;
    double scatter_abs_loss_db = 0.0;

    static AtmosphereRegime vacuum() { return {AtmosphereKind::Vacuum, 0.0, 0.0}; }
    static AtmosphereRegime downlink_clear(double scatter_abs_db) {
        return {AtmosphereKind::DownlinkClear, 0.0, scatter_abs_db};
    }
    static AtmosphereRegime uplink_fixed_turb(double turb_db, double scatter_abs_db) {
        return {AtmosphereKind::UplinkFixedTurb, turb_db, scatter_abs_db};
    }

    void validate() const;
    double total_loss_db() const { return turb_loss_db + scatter_abs_loss_db; }
};

// Full description of one free-space link.
struct LinkScenario {
    TelescopeGeometry transmitter;
    TelescopeGeometry receiver;
    double wavelength_m = 650e-9;
    AtmosphereRegime atmosphere;
    double receiver_efficiency = 0.65;  // delta_rec
    double distance_m = 0.0;
    double extra_loss_db = 0.0;         // pointing/misalignment folded in by the user

    void validate() const;
};

// Alternate uplink budget (cross-check only, not used by scenario presets).
struct AltUplinkParams {
    double atm_loss_db = 1.0;          // A_atm
    double tx_diameter_m = 1.0;        // D_T
    double rx_diameter_m = 0.3;        // D_R
    double atm_divergence_rad = 0.0;   // theta_atm
    double pointing_loss = 0.0;        // L_P
    double tx_transmission = 0.8;      // T_T
    double rx_transmission = 0.8;      // T_R

    void validate() const;
};

// Transmittance from obscuration and beam diffraction between two Cassegrain
// telescopes. The transmit beam radius is fixed to the transmit primary
// (alpha_t = 1); the beam radius at the receiver plane is
// sqrt(2) * lambda * L / (pi * R_t).
double diffraction_transmittance(const TelescopeGeometry& tx, const TelescopeGeometry& rx,
                                 double wavelength_m, double distance_m);

// Turbulence transmittance from the divergence model: r0 scales from a
// reference Fried parameter as (lambda/lambda_ref)^{6/5}, theta_turb =
// lambda/r0, and the collected fraction is (lambda/R_t)^2 / ((lambda/R_t)^2 +
// theta_turb^2). Scenario presets use fixed dB budgets instead; this model is
// exposed separately.
double turbulence_transmittance_model(double wavelength_m, double tx_primary_radius_m,
                                      double fried_ref_r0_m, double fried_ref_wavelength_m);

// delta = delta_diff * delta_atm * delta_rec, with extra_loss_db folded into
// the diffraction factor.
double total_transmittance(const LinkScenario& scenario);

// Transmittance form of the alternate uplink budget (reciprocal of the loss
// factor it is usually written as), with theta_T = lambda / D_T.
double alt_uplink_transmittance(double distance_m, double wavelength_m, const AltUplinkParams& p);

// Positive-loss dB convention: loss_db = -10 log10(delta).
double db_from_transmittance(double delta);
double transmittance_from_db(double loss_db);

} // namespace qkd

#endif
