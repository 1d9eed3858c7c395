// Times the cached grid kernels (serial and OpenMP) against the reference
// implementation that prices every candidate through the public rate calls.

#include <chrono>
#include <cstdio>

#include "qkd/optimizer.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qkd;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void bench(const char* label, ProtocolKind kind, double km) {
    SweepSpec spec = SweepSpec::for_preset(scenario_preset("uplink5db"), kind);
    const double m = km * 1000.0;

    OptimumPoint ref, serial, parallel;
    const double t_ref = time_ms([&] { ref = reference_optimize_at_distance(spec, m); });
    const double t_serial = time_ms([&] { serial = optimize_at_distance(spec, m, Execution::Serial); });
    const double t_parallel = time_ms([&] { parallel = optimize_at_distance(spec, m, Execution::Parallel); });

    const bool agree = ref.best_rate == serial.best_rate && serial.best_rate == parallel.best_rate;
    std::printf("%-14s L=%5.0f km  reference %9.1f ms | kernel serial %7.1f ms (x%5.1f) | "
                "kernel omp %7.1f ms (x%5.1f)  rate=%.4e  results %s\n",
                label, km, t_ref, t_serial, t_ref / t_serial, t_parallel, t_ref / t_parallel,
                parallel.best_rate, agree ? "agree" : "DISAGREE");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; kernel serial and omp are the same path\n");
#endif
    bench("bb84", ProtocolKind::Bb84, 500.0);
    bench("sarg04", ProtocolKind::Sarg04, 500.0);
    bench("bb84-decoy", ProtocolKind::Bb84VacuumWeakDecoy, 1000.0);
    bench("sarg04-decoy", ProtocolKind::Sarg04VacuumTwoWeakDecoy, 1000.0);
    return 0;
}
