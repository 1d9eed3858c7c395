#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
    const std::string cmd = std::string(QKDSIM_BINARY) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string run_capture(const std::string& args) {
    const fs::path tmp = fs::temp_directory_path() / "qkdsim_cli_out.txt";
    const std::string cmd = std::string(QKDSIM_BINARY) + " " + args + " > " + tmp.string() + " 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in(tmp);
    std::stringstream buf;
    buf << in.rdbuf();
    fs::remove(tmp);
    return buf.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("crossing command reports both thresholds") {
    const std::string out = run_capture("crossing");
    CHECK(out.find("bb84") != std::string::npos);
    CHECK(out.find("13.288") != std::string::npos);
    CHECK(out.find("sarg04") != std::string::npos);
    CHECK(out.find("25.419") != std::string::npos);
}

TEST_CASE("sweep CSV: header, determinism, empty range") {
    const fs::path a = fs::temp_directory_path() / "qkd_sweep_a.csv";
    const fs::path b = fs::temp_directory_path() / "qkd_sweep_b.csv";
    const std::string flags =
        "sweep --scenario uplink5db --protocol bb84 --lmin 400 --lmax 600 --step 50 --out ";
    REQUIRE(run(flags + a.string()) == 0);
    REQUIRE(run(flags + b.string()) == 0);
    const std::string ca = slurp(a), cb = slurp(b);
    CHECK(ca == cb);  // byte-stable
    CHECK(ca.rfind("distance_km,loss_db,protocol,mode,mu,nu1,nu2,rate_bits_per_pulse,eve_info,qber\n",
                   0) == 0);
    CHECK(std::count(ca.begin(), ca.end(), '\n') == 6);  // header + 5 rows

    const fs::path e = fs::temp_directory_path() / "qkd_sweep_empty.csv";
    REQUIRE(run("sweep --scenario uplink5db --protocol bb84 --lmin 600 --lmax 500 --step 10 --out " +
                e.string()) == 0);
    CHECK(slurp(e) == "distance_km,loss_db,protocol,mode,mu,nu1,nu2,rate_bits_per_pulse,eve_info,qber\n");
    fs::remove(a);
    fs::remove(b);
    fs::remove(e);
}

TEST_CASE("sweep CSV rows carry the pulse-rate column when requested") {
    const fs::path p = fs::temp_directory_path() / "qkd_sweep_hz.csv";
    REQUIRE(run("sweep --scenario uplink5db --protocol bb84 --lmin 400 --lmax 400 --step 10 "
                "--pulse-rate-hz 1e6 --out " +
                p.string()) == 0);
    const std::string content = slurp(p);
    CHECK(content.find(",rate_bits_per_second\n") != std::string::npos);
    fs::remove(p);
}

TEST_CASE("unknown scenario or protocol fails with nonzero exit") {
    CHECK(run("sweep --scenario fiber --protocol bb84 --out -") != 0);
    CHECK(run("sweep --scenario uplink5db --protocol b92 --out -") != 0);
    CHECK(run("critical-distance --scenario uplink5db --protocol b92") != 0);
}

TEST_CASE("critical-distance command") {
    const std::string out = run_capture("critical-distance --scenario uplink11db --protocol bb84");
    CHECK(out.find("none") != std::string::npos);
}

TEST_CASE("config file drives the sweep") {
    const fs::path cfg = fs::temp_directory_path() / "qkd_cli_scn.cfg";
    {
        std::ofstream f(cfg);
        f << "preset = uplink5db\nreceiver_efficiency = 0.65\n";
    }
    const fs::path out = fs::temp_directory_path() / "qkd_cli_cfg.csv";
    REQUIRE(run("sweep --config " + cfg.string() +
                " --protocol bb84 --lmin 400 --lmax 450 --step 50 --out " + out.string()) == 0);
    const std::string csv = slurp(out);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    fs::remove(cfg);
    fs::remove(out);
}
