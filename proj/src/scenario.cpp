#include "qkd/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace qkd {

std::vector<double> DistanceGridKm::points_m() const {
    std::vector<double> pts;
    if (step_km <= 0.0) throw std::domain_error("DistanceGridKm: step must be positive");
    const long n = static_cast<long>(std::floor((max_km - min_km) / step_km + 1e-9));
    for (long i = 0; i <= n; ++i) pts.push_back((min_km + i * step_km) * 1000.0);
    return pts;
}

namespace {

constexpr TelescopeGeometry kGround{0.50, 0.05};
constexpr TelescopeGeometry kSatellite{0.15, 0.01};
constexpr double kWavelength = 650e-9;
constexpr double kReceiverEff = 0.65;
constexpr double kDarkCounts = 50e-6;

Scenario make(const std::string& name, TelescopeGeometry tx, TelescopeGeometry rx,
              AtmosphereRegime atm, double max_km) {
    Scenario s;
    s.name = name;
    s.link.transmitter = tx;
    s.link.receiver = rx;
    s.link.wavelength_m = kWavelength;
    s.link.atmosphere = atm;
    s.link.receiver_efficiency = kReceiverEff;
    s.link.distance_m = 400e3;
    s.y0 = kDarkCounts;
    s.grid = {400.0, max_km, 10.0};
    return s;
}

} // namespace

const std::vector<Scenario>& scenario_presets() {
    static const std::vector<Scenario> presets = {
        make("downlink", kSatellite, kGround, AtmosphereRegime::downlink_clear(1.0), 16000.0),
        make("intersatellite", kSatellite, kSatellite, AtmosphereRegime::vacuum(), 4500.0),
        make("uplink5db", kGround, kSatellite, AtmosphereRegime::uplink_fixed_turb(5.0, 1.0), 8000.0),
        make("uplink11db", kGround, kSatellite, AtmosphereRegime::uplink_fixed_turb(11.0, 1.0), 4000.0),
    };
    return presets;
}

const Scenario& scenario_preset(const std::string& name) {
    for (const auto& s : scenario_presets())
        if (s.name == name) return s;
    throw std::domain_error("unknown scenario preset: " + name);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw std::domain_error("scenario config: bad numeric value for '" + key + "': " + value);
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Scenario scenario_from_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::domain_error("scenario config: expected 'key = value': " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    Scenario s;
    if (auto it = kv.find("preset"); it != kv.end()) {
        s = scenario_preset(it->second);
        kv.erase(it);
    }
    for (const auto& [key, value] : kv) {
        if (key == "scenario" || key == "name") s.name = value;
        else if (key == "tx_primary_radius_m") s.link.transmitter.primary_radius_m = parse_double(key, value);
        else if (key == "tx_secondary_radius_m") s.link.transmitter.secondary_radius_m = parse_double(key, value);
        else if (key == "rx_primary_radius_m") s.link.receiver.primary_radius_m = parse_double(key, value);
        else if (key == "rx_secondary_radius_m") s.link.receiver.secondary_radius_m = parse_double(key, value);
        else if (key == "wavelength_nm") s.link.wavelength_m = parse_double(key, value) * 1e-9;
        else if (key == "turbulence_loss_db") s.link.atmosphere.turb_loss_db = parse_double(key, value);
        else if (key == "scatter_loss_db") s.link.atmosphere.scatter_abs_loss_db = parse_double(key, value);
        else if (key == "receiver_efficiency") s.link.receiver_efficiency = parse_double(key, value);
        else if (key == "extra_loss_db") s.link.extra_loss_db = parse_double(key, value);
        else if (key == "dark_count_prob") s.y0 = parse_double(key, value);
        else if (key == "distance_min_km") s.grid.min_km = parse_double(key, value);
        else if (key == "distance_max_km") s.grid.max_km = parse_double(key, value);
        else if (key == "distance_step_km") s.grid.step_km = parse_double(key, value);
        else throw std::domain_error("scenario config: unknown key '" + key + "'");
    }
    // classify the atmosphere from the loss budget
    if (s.link.atmosphere.turb_loss_db > 0.0)
        s.link.atmosphere.kind = AtmosphereKind::UplinkFixedTurb;
    else if (s.link.atmosphere.scatter_abs_loss_db > 0.0)
        s.link.atmosphere.kind = AtmosphereKind::DownlinkClear;
    else
        s.link.atmosphere.kind = AtmosphereKind::Vacuum;
    // the link distance is a per-query placeholder, not a config field
    if (s.link.distance_m <= 0.0) s.link.distance_m = s.grid.min_km * 1000.0;
    s.link.validate();
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_config_text(buf.str());
}

std::string scenario_to_config_text(const Scenario& s) {
    std::ostringstream out;
    out << "scenario = " << s.name << "\n"
        << "tx_primary_radius_m = " << format_double(s.link.transmitter.primary_radius_m) << "\n"
        << "tx_secondary_radius_m = " << format_double(s.link.transmitter.secondary_radius_m) << "\n"
        << "rx_primary_radius_m = " << format_double(s.link.receiver.primary_radius_m) << "\n"
        << "rx_secondary_radius_m = " << format_double(s.link.receiver.secondary_radius_m) << "\n"
        << "wavelength_nm = " << format_double(s.link.wavelength_m * 1e9) << "\n"
        << "turbulence_loss_db = " << format_double(s.link.atmosphere.turb_loss_db) << "\n"
        << "scatter_loss_db = " << format_double(s.link.atmosphere.scatter_abs_loss_db) << "\n"
        << "receiver_efficiency = " << format_double(s.link.receiver_efficiency) << "\n"
        << "extra_loss_db = " << format_double(s.link.extra_loss_db) << "\n"
        << "dark_count_prob = " << format_double(s.y0) << "\n"
        << "distance_min_km = " << format_double(s.grid.min_km) << "\n"
        << "distance_max_km = " << format_double(s.grid.max_km) << "\n"
        << "distance_step_km = " << format_double(s.grid.step_km) << "\n";
    return out.str();
}

void save_scenario_file(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << scenario_to_config_text(s);
}

} // namespace qkd
