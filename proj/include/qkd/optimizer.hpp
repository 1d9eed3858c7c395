#ifndef QKD_OPTIMIZER_HPP
#define QKD_OPTIMIZER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "qkd/keyrate.hpp"
#include "qkd/scenario.hpp"

namespace qkd {

enum class Execution { Serial, Parallel };

// Intensity grids are indexed in integer steps so that nu2 - nu1 is always at
// least one full step; accumulating raw doubles can produce nearly equal decoy
// pairs whose bound formulas divide by (nu2 - nu1) and amplify rounding noise.
struct MuGridSpec {
    int lo_idx = 1;
    int hi_idx = 1000;
    double step = 0.001;

    double value(int idx) const { return idx * step; }
};

// Two-decoy search policy: coarse pass over a ladder of nu indices (every
// index below coarse_step_idx, then coarse_step_idx spacing), refined at full
// resolution within refine_radius_idx of the coarse optimum.
struct NuPolicy {
    int coarse_step_idx = 10;
    int refine_radius_idx = 10;
};

struct SweepSpec {
    Scenario scenario;
    ProtocolVariant protocol;
    DistanceGridKm distances;           // defaults to scenario.grid
    MuGridSpec mu_grid;
    NuPolicy nu_policy;
    std::optional<double> fixed_mu;     // constant-intensity mode
    IrudParams irud;                    // SARG04 adversary parameters

    static SweepSpec for_preset(const Scenario& s, ProtocolKind kind) {
        SweepSpec spec;
        spec.scenario = s;
        spec.protocol.kind = kind;
        spec.distances = s.grid;
        return spec;
    }
};

struct OptimumPoint {
    double distance_m = 0.0;
    double transmittance = 0.0;
    double loss_db = 0.0;
    double best_rate = 0.0;
    std::optional<double> best_mu;
    std::optional<double> best_nu1;
    std::optional<double> best_nu2;
    std::optional<double> eve_info;  // non-decoy protocols only
    std::optional<double> qber;
};

// Exhaustive scan of the intensity grid(s) at one distance. Ties break toward
// smaller mu, then smaller nu1, then smaller nu2, so the result does not
// depend on evaluation order or thread count.
OptimumPoint optimize_at_distance(const SweepSpec& spec, double distance_m,
                                  Execution exec = Execution::Parallel);

// Equivalent to optimize_at_distance(...).best_rate > 0 but allowed to exit
// on the first positive candidate.
bool positive_rate_exists(const SweepSpec& spec, double distance_m);

struct CriticalBracket {
    double secure_m = 0.0;    // positive rate here
    double insecure_m = 0.0;  // zero rate here; insecure_m - secure_m <= tolerance
};

// Largest distance with positive optimized rate, from a geometric scan
// followed by bisection. Empty when the rate is zero already at the start of
// the distance grid.
std::optional<CriticalBracket> critical_distance_bracket(const SweepSpec& spec,
                                                         double tolerance_m = 1000.0);
std::optional<double> critical_distance_m(const SweepSpec& spec, double tolerance_m = 1000.0);

// One OptimumPoint per distance grid point; fixed_mu selects the
// constant-intensity mode. An empty grid yields an empty curve.
std::vector<OptimumPoint> sweep_curve(const SweepSpec& spec, Execution exec = Execution::Parallel);

// Straight-line reference: identical candidate enumeration, but every
// candidate is priced through the public keyrate calls, serially. Kept for
// validating the cached kernels; the benchmark compares against it.
OptimumPoint reference_optimize_at_distance(const SweepSpec& spec, double distance_m);

namespace detail {
// Candidate (nu1, nu2) index pairs for the two-decoy search, shared by the
// kernel and the reference so both walk the same set.
std::vector<std::pair<int, int>> coarse_nu_pairs(const MuGridSpec& g, const NuPolicy& p);
std::vector<std::pair<int, int>> refine_nu_pairs(const MuGridSpec& g, const NuPolicy& p, int c1, int c2);
} // namespace detail

} // namespace qkd

#endif
