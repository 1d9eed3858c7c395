#ifndef QKD_REFERENCE_DATA_HPP
#define QKD_REFERENCE_DATA_HPP

namespace qkd {

// Published reference values the `tables` report compares against.
// Column order: bb84, sarg04, bb84-decoy, sarg04-decoy. -1 marks "none"
// (no secure distance).
struct ReferenceRow {
    const char* scenario;
    double critical_km[4];
    double max_rate_bits_per_pulse[4];
};

inline constexpr ReferenceRow kReferenceRows[] = {
    {"downlink", {1540.0, 3290.0, 9450.0, 14100.0}, {1.7e-2, 2.4e-2, 4.4e-2, 4.6e-2}},
    {"intersatellite", {430.0, 920.0, 2660.0, 3900.0}, {2.0e-2, 2.6e-2, 4.8e-2, 5.0e-2}},
    {"uplink5db", {460.0, 1520.0, 4650.0, 6980.0}, {1.4e-4, 1.2e-3, 5.8e-3, 6.5e-3}},
    {"uplink11db", {-1.0, 500.0, 2200.0, 3460.0}, {-1.0, 7.5e-5, 1.4e-3, 1.6e-3}},
};

// Eve-information crossing anchors: loss (dB) at which I_Eve reaches 1.
inline constexpr double kReferenceCrossingBb84Mu = 0.1;
inline constexpr double kReferenceCrossingBb84Db = 13.0;
inline constexpr double kReferenceCrossingSarg04Mu = 0.2;
inline constexpr double kReferenceCrossingSarg04Db = 25.6;

} // namespace qkd

#endif
