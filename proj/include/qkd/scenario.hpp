#ifndef QKD_SCENARIO_HPP
#define QKD_SCENARIO_HPP

#include <string>
#include <vector>

#include "qkd/channel.hpp"
#include "qkd/keyrate.hpp"

namespace qkd {

struct DistanceGridKm {
    double min_km = 400.0;
    double max_km = 8000.0;
    double step_km = 10.0;

    std::vector<double> points_m() const;  // empty when min > max
};

// A named link configuration: the link template (distance filled in per
// evaluation), the detector dark counts, and the default sweep range.
struct Scenario {
    std::string name;
    LinkScenario link;     // link.distance_m is a placeholder; set per query
    double y0 = 50e-6;
    DistanceGridKm grid;

    LinkScenario at_distance(double distance_m) const {
        LinkScenario l = link;
        l.distance_m = distance_m;
        return l;
    }
    double transmittance_at(double distance_m) const { return total_transmittance(at_distance(distance_m)); }
    DetectionModel detection_at(double distance_m) const {
        return DetectionModel{y0, 0.5, transmittance_at(distance_m), DarkCountMode::Additive};
    }
};

// Built-in presets: downlink, intersatellite, uplink5db, uplink11db.
// Ground telescope R = 50 cm / b = 5 cm, satellite R = 15 cm / b = 1 cm,
// 650 nm, receiver efficiency 0.65, dark counts 5e-5. Sweep ranges start at
// 400 km (minimum practical orbit altitude / range).
const std::vector<Scenario>& scenario_presets();
const Scenario& scenario_preset(const std::string& name);  // throws on unknown name

// Key-value scenario files ("key = value" lines, '#' comments). A `preset`
// key selects a base preset; any other keys override its fields.
Scenario load_scenario_file(const std::string& path);
Scenario scenario_from_config_text(const std::string& text);
std::string scenario_to_config_text(const Scenario& s);
void save_scenario_file(const Scenario& s, const std::string& path);

} // namespace qkd

#endif
