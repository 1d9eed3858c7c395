#include "qkd/optimizer.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "qkd/adversary.hpp"

namespace qkd {

namespace detail {

namespace {
std::vector<int> nu_ladder(const MuGridSpec& g, const NuPolicy& p) {
    // full resolution below the coarse step, coarse spacing above; the bound
    // estimates tighten as nu shrinks, so the sub-coarse rungs must be present
    // or the scan misses the long-distance optimum entirely
    std::vector<int> ladder;
    for (int i = 1; i < p.coarse_step_idx && i <= g.hi_idx - 2; ++i) ladder.push_back(i);
    for (int i = p.coarse_step_idx; i <= g.hi_idx - 2; i += p.coarse_step_idx) ladder.push_back(i);
    return ladder;
}
} // namespace

std::vector<std::pair<int, int>> coarse_nu_pairs(const MuGridSpec& g, const NuPolicy& p) {
    const std::vector<int> ladder = nu_ladder(g, p);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < ladder.size(); ++a)
        for (std::size_t b = a + 1; b < ladder.size(); ++b)
            if (ladder[a] + ladder[b] <= g.hi_idx - 1) pairs.emplace_back(ladder[a], ladder[b]);
    return pairs;
}

std::vector<std::pair<int, int>> refine_nu_pairs(const MuGridSpec& g, const NuPolicy& p, int c1, int c2) {
    std::vector<std::pair<int, int>> pairs;
    const int r = p.refine_radius_idx;
    for (int i1 = std::max(1, c1 - r); i1 <= c1 + r; ++i1)
        for (int i2 = std::max(i1 + 1, c2 - r); i2 <= c2 + r; ++i2)
            if (i1 + i2 <= g.hi_idx - 1) pairs.emplace_back(i1, i2);
    return pairs;
}

} // namespace detail

namespace {

struct Candidate {
    double rate = -1.0;
    int imu = INT_MAX;
    double mu = 0.0;
    int i1 = INT_MAX;  // nu indices; INT_MAX = not applicable
    int i2 = INT_MAX;
};

// total order: higher rate, then smaller mu, then smaller decoys
bool better(const Candidate& a, const Candidate& b) {
    if (a.rate != b.rate) return a.rate > b.rate;
    if (a.imu != b.imu) return a.imu < b.imu;
    if (a.mu != b.mu) return a.mu < b.mu;
    if (a.i1 != b.i1) return a.i1 < b.i1;
    return a.i2 < b.i2;
}

double distill(double x) { return 1.0 - binary_entropy(std::min(x, 0.5)); }
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Per-mu values shared by every decoy candidate at one transmittance. All
// expressions mirror the keyrate implementations term for term so the cached
// kernels agree with the reference path to the last bit.
struct MuTables {
    bool fixed = false;
    int lo_idx = 1;
    std::vector<int> idx;
    std::vector<double> mu;       // intensity
    std::vector<double> mue;      // mu e^{-mu}
    std::vector<double> mu2e;     // 0.5 mu^2 e^{-mu}
    std::vector<double> qmu;      // gain
    std::vector<double> qe;       // gain * e^{mu}
    std::vector<double> neg;      // gain * f * H2(E_mu)

    static MuTables build(const SweepSpec& spec, const DetectionModel& det) {
        MuTables t;
        std::vector<std::pair<int, double>> entries;
        if (spec.fixed_mu) {
            t.fixed = true;
            entries.emplace_back(0, *spec.fixed_mu);
        } else {
            t.lo_idx = spec.mu_grid.lo_idx;
            for (int i = spec.mu_grid.lo_idx; i <= spec.mu_grid.hi_idx; ++i)
                entries.emplace_back(i, spec.mu_grid.value(i));
        }
        const double f = spec.protocol.f_ec;
        for (auto [i, mu] : entries) {
            const GainQber g = gain_and_qber(mu, det);
            t.idx.push_back(i);
            t.mu.push_back(mu);
            t.mue.push_back(mu * std::exp(-mu));
            t.mu2e.push_back(0.5 * mu * mu * std::exp(-mu));
            t.qmu.push_back(g.q_mu);
            t.qe.push_back(g.q_mu * std::exp(mu));
            const double he = g.e_mu ? binary_entropy(std::min(*g.e_mu, 1.0)) : 0.0;
            t.neg.push_back(g.q_mu * f * he);
        }
        return t;
    }
};

// ---- BB84 vacuum + weak decoy kernel ----

struct Bb84DecoyEval {
    const MuTables& mt;
    double y0_est;
    double e0;
    std::vector<double> nu;    // index 0 unused
    std::vector<double> qnue;  // gain(nu) * e^{nu}

    Bb84DecoyEval(const SweepSpec& spec, const DetectionModel& det, const MuTables& tables)
        : mt(tables) {
        y0_est = gain_and_qber(0.0, det).q_mu;
        e0 = det.e0;
        const int n = spec.mu_grid.hi_idx;
        nu.assign(n, 0.0);
        qnue.assign(n, 0.0);
        for (int i = 1; i < n; ++i) {
            nu[i] = spec.mu_grid.value(i);
            qnue[i] = gain_and_qber(nu[i], det).q_mu * std::exp(nu[i]);
        }
    }

    double raw_rate(std::size_t slot, int inu) const {
        const double mu = mt.mu[slot];
        const double v = nu[inu];
        const double y1 = mu / (mu * v - v * v) *
                          (qnue[inu] - mt.qe[slot] * (v * v) / (mu * mu) -
                           (mu * mu - v * v) / (mu * mu) * y0_est);
        double positive = 0.0;
        if (y1 > 0.0) {
            const double y1c = clamp01(y1);
            const double e1 = clamp01(e0 * y0_est / y1c);
            positive = mt.mue[slot] * y1c * distill(e1);
        }
        return 0.5 * (positive - mt.neg[slot]);
    }
};

// ---- SARG04 vacuum + two weak decoys kernel ----

struct SargPairData {
    int i1 = 0, i2 = 0;
    double y1c = 0.0, d1 = 0.0;  // clamped lower yield and distillation factor
    double y2c = 0.0, d2 = 0.0;
};

struct SargDecoyEval {
    const MuTables& mt;
    double y0_est;
    double e0y0;
    std::vector<double> nu, g, gn, tc, wq;  // per nu index; gn = g/nu

    SargDecoyEval(const SweepSpec& spec, const DetectionModel& det, const MuTables& tables)
        : mt(tables) {
        y0_est = gain_and_qber(0.0, det).q_mu;
        e0y0 = det.e0 * y0_est;
        const int n = spec.mu_grid.hi_idx;
        nu.assign(n, 0.0);
        g.assign(n, 0.0);
        gn.assign(n, 0.0);
        tc.assign(n, 0.0);
        wq.assign(n, 0.0);
        for (int i = 1; i < n; ++i) {
            const double v = spec.mu_grid.value(i);
            const GainQber gq = gain_and_qber(v, det);
            nu[i] = v;
            g[i] = gq.q_mu * std::exp(v) - y0_est;
            gn[i] = g[i] / v;
            tc[i] = exp_tail(v, 3) / v;
            wq[i] = gq.e_mu ? *gq.e_mu * gq.q_mu * std::exp(v) : 0.0;
        }
    }

    SargPairData make_pair(int i1, int i2) const {
        SargPairData p;
        p.i1 = i1;
        p.i2 = i2;
        const double nu1 = nu[i1], nu2 = nu[i2];
        const double y1 = (nu2 * nu2 * g[i1] - nu1 * nu1 * g[i2]) / (nu1 * nu2 * (nu2 - nu1));
        const double tail_cap = tc[i2] - tc[i1];
        const double y2 = 2.0 * ((gn[i2] - gn[i1]) - tail_cap) / (nu2 - nu1);
        const double w1 = wq[i1] - e0y0;
        const double w2 = wq[i2] - e0y0;
        if (y1 > 0.0) {
            p.y1c = clamp01(y1);
            p.d1 = distill(clamp01(w1 / (nu1 * p.y1c)));
        }
        if (y2 > 0.0) {
            p.y2c = clamp01(y2);
            double e2 = 2.0 * (w2 / nu2 - w1 / nu1) / (p.y2c * (nu2 - nu1));
            if (!(e2 > 0.0)) e2 = 2.0 * w2 / (nu2 * nu2 * p.y2c);
            p.d2 = distill(clamp01(e2));
        }
        return p;
    }

    double raw_rate(std::size_t slot, const SargPairData& p) const {
        const double positive = mt.mue[slot] * p.y1c * p.d1 + mt.mu2e[slot] * p.y2c * p.d2;
        return 0.25 * (positive - mt.neg[slot]);
    }
};

// mu slots admissible for a decoy pair: nu1 + nu2 < mu
std::size_t first_slot_for_pair(const MuTables& mt, int i1, int i2) {
    if (mt.fixed) return 0;  // validity checked against the fixed value by the caller
    const int lowest = std::max(mt.lo_idx, i1 + i2 + 1);
    return static_cast<std::size_t>(lowest - mt.lo_idx);
}

bool pair_valid_fixed(const MuTables& mt, double nu1, double nu2) {
    return !mt.fixed || nu1 + nu2 < mt.mu[0];
}

// ---- non-decoy evaluation (direct calls; one point per mu) ----

double nondecoy_rate(const SweepSpec& spec, const DetectionModel& det, double mu) {
    const double delta = det.transmittance;
    double omega;
    if (spec.protocol.kind == ProtocolKind::Bb84)
        omega = 1.0 - mutual_info_bb84(mu, delta).i_eve;
    else
        omega = 1.0 - mutual_info_sarg04(mu, delta, spec.irud).i_eve;
    return rate_nondecoy(spec.protocol, mu, det, omega).rate_bits_per_pulse;
}

struct KernelResult {
    Candidate best;
};

KernelResult run_nondecoy(const SweepSpec& spec, const DetectionModel& det, bool parallel) {
    std::vector<std::pair<int, double>> mus;
    if (spec.fixed_mu)
        mus.emplace_back(0, *spec.fixed_mu);
    else
        for (int i = spec.mu_grid.lo_idx; i <= spec.mu_grid.hi_idx; ++i)
            mus.emplace_back(i, spec.mu_grid.value(i));

    Candidate best;
#pragma omp parallel if (parallel)
    {
        Candidate local;
#pragma omp for nowait schedule(static)
        for (long k = 0; k < static_cast<long>(mus.size()); ++k) {
            const double rate = nondecoy_rate(spec, det, mus[k].second);
            if (rate <= 0.0) continue;
            Candidate c{rate, mus[k].first, mus[k].second, INT_MAX, INT_MAX};
            if (better(c, local)) local = c;
        }
#pragma omp critical(qkd_opt_merge)
        {
            if (better(local, best)) best = local;
        }
    }
    return {best};
}

KernelResult run_bb84_decoy(const SweepSpec& spec, const DetectionModel& det, bool parallel) {
    const MuTables mt = MuTables::build(spec, det);
    const Bb84DecoyEval ev(spec, det, mt);
    const long slots = static_cast<long>(mt.mu.size());

    Candidate best;
#pragma omp parallel if (parallel)
    {
        Candidate local;
#pragma omp for nowait schedule(dynamic, 8)
        for (long k = 0; k < slots; ++k) {
            for (int inu = 1; inu < static_cast<int>(ev.nu.size()); ++inu) {
                if (!(ev.nu[inu] < mt.mu[k])) break;
                const double raw = ev.raw_rate(k, inu);
                if (raw <= 0.0) continue;
                Candidate c{raw, mt.idx[k], mt.mu[k], inu, INT_MAX};
                if (better(c, local)) local = c;
            }
        }
#pragma omp critical(qkd_opt_merge)
        {
            if (better(local, best)) best = local;
        }
    }
    return {best};
}

Candidate scan_sarg_pairs(const SargDecoyEval& ev, const MuTables& mt,
                          const std::vector<std::pair<int, int>>& pairs, bool parallel) {
    Candidate best;
#pragma omp parallel if (parallel)
    {
        Candidate local;
#pragma omp for nowait schedule(dynamic, 16)
        for (long k = 0; k < static_cast<long>(pairs.size()); ++k) {
            const auto [i1, i2] = pairs[k];
            if (!pair_valid_fixed(mt, ev.nu[i1], ev.nu[i2])) continue;
            const SargPairData pd = ev.make_pair(i1, i2);
            if (pd.y1c == 0.0 && pd.y2c == 0.0) continue;
            for (std::size_t slot = first_slot_for_pair(mt, i1, i2); slot < mt.mu.size(); ++slot) {
                const double raw = ev.raw_rate(slot, pd);
                if (raw <= 0.0) continue;
                Candidate c{raw, mt.idx[slot], mt.mu[slot], i1, i2};
                if (better(c, local)) local = c;
            }
        }
#pragma omp critical(qkd_opt_merge)
        {
            if (better(local, best)) best = local;
        }
    }
    return best;
}

KernelResult run_sarg_decoy(const SweepSpec& spec, const DetectionModel& det, bool parallel) {
    const MuTables mt = MuTables::build(spec, det);
    const SargDecoyEval ev(spec, det, mt);

    Candidate best = scan_sarg_pairs(ev, mt,
                                     detail::coarse_nu_pairs(spec.mu_grid, spec.nu_policy), parallel);
    if (best.rate > 0.0) {
        const auto refined = detail::refine_nu_pairs(spec.mu_grid, spec.nu_policy, best.i1, best.i2);
        const Candidate r = scan_sarg_pairs(ev, mt, refined, parallel);
        if (better(r, best)) best = r;
    }
    return {best};
}

KernelResult run_kernel(const SweepSpec& spec, const DetectionModel& det, bool parallel) {
    switch (spec.protocol.kind) {
        case ProtocolKind::Bb84:
        case ProtocolKind::Sarg04:
            return run_nondecoy(spec, det, parallel);
        case ProtocolKind::Bb84VacuumWeakDecoy:
            return run_bb84_decoy(spec, det, parallel);
        case ProtocolKind::Sarg04VacuumTwoWeakDecoy:
            return run_sarg_decoy(spec, det, parallel);
    }
    throw std::logic_error("run_kernel: unreachable");
}

OptimumPoint finish_point(const SweepSpec& spec, const DetectionModel& det, double distance_m,
                          const Candidate& best) {
    OptimumPoint pt;
    pt.distance_m = distance_m;
    pt.transmittance = det.transmittance;
    pt.loss_db = db_from_transmittance(det.transmittance);

    const auto attach_mu_details = [&](double mu) {
        pt.qber = gain_and_qber(mu, det).e_mu;
        if (spec.protocol.kind == ProtocolKind::Bb84)
            pt.eve_info = mutual_info_bb84(mu, det.transmittance).i_eve;
        else if (spec.protocol.kind == ProtocolKind::Sarg04)
            pt.eve_info = mutual_info_sarg04(mu, det.transmittance, spec.irud).i_eve;
    };

    if (best.rate <= 0.0) {
        pt.best_rate = 0.0;
        // a pinned intensity still has a well-defined adversary curve past the
        // secure range
        if (spec.fixed_mu) {
            pt.best_mu = *spec.fixed_mu;
            attach_mu_details(*spec.fixed_mu);
        }
        return pt;
    }
    pt.best_rate = best.rate;
    pt.best_mu = best.mu;
    if (best.i1 != INT_MAX) pt.best_nu1 = spec.mu_grid.value(best.i1);
    if (best.i2 != INT_MAX) pt.best_nu2 = spec.mu_grid.value(best.i2);
    attach_mu_details(best.mu);
    return pt;
}

} // namespace

OptimumPoint optimize_at_distance(const SweepSpec& spec, double distance_m, Execution exec) {
    const DetectionModel det = spec.scenario.detection_at(distance_m);
    const KernelResult res = run_kernel(spec, det, exec == Execution::Parallel);
    return finish_point(spec, det, distance_m, res.best);
}

bool positive_rate_exists(const SweepSpec& spec, double distance_m) {
    const DetectionModel det = spec.scenario.detection_at(distance_m);
    switch (spec.protocol.kind) {
        case ProtocolKind::Bb84:
        case ProtocolKind::Sarg04: {
            if (spec.fixed_mu) return nondecoy_rate(spec, det, *spec.fixed_mu) > 0.0;
            for (int i = spec.mu_grid.lo_idx; i <= spec.mu_grid.hi_idx; ++i)
                if (nondecoy_rate(spec, det, spec.mu_grid.value(i)) > 0.0) return true;
            return false;
        }
        case ProtocolKind::Bb84VacuumWeakDecoy: {
            const MuTables mt = MuTables::build(spec, det);
            const Bb84DecoyEval ev(spec, det, mt);
            for (long k = static_cast<long>(mt.mu.size()) - 1; k >= 0; --k)
                for (int inu = 1; inu < static_cast<int>(ev.nu.size()) && ev.nu[inu] < mt.mu[k]; ++inu)
                    if (ev.raw_rate(k, inu) > 0.0) return true;
            return false;
        }
        case ProtocolKind::Sarg04VacuumTwoWeakDecoy: {
            // refinement only runs off a positive coarse scan, so coarse
            // positivity decides the optimum's positivity too
            const MuTables mt = MuTables::build(spec, det);
            const SargDecoyEval ev(spec, det, mt);
            for (auto [i1, i2] : detail::coarse_nu_pairs(spec.mu_grid, spec.nu_policy)) {
                if (!pair_valid_fixed(mt, ev.nu[i1], ev.nu[i2])) continue;
                const SargPairData pd = ev.make_pair(i1, i2);
                if (pd.y1c == 0.0 && pd.y2c == 0.0) continue;
                for (std::size_t slot = mt.mu.size(); slot-- > first_slot_for_pair(mt, i1, i2);)
                    if (ev.raw_rate(slot, pd) > 0.0) return true;
            }
            return false;
        }
    }
    return false;
}

std::optional<CriticalBracket> critical_distance_bracket(const SweepSpec& spec, double tolerance_m) {
    const double start = spec.distances.min_km * 1000.0;
    if (!positive_rate_exists(spec, start)) return std::nullopt;
    double lo = start;
    double hi = start * 2.0;
    while (positive_rate_exists(spec, hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e10) throw std::runtime_error("critical_distance: no insecure distance below 1e7 km");
    }
    while (hi - lo > tolerance_m) {
        const double mid = 0.5 * (lo + hi);
        if (positive_rate_exists(spec, mid))
            lo = mid;
        else
            hi = mid;
    }
    return CriticalBracket{lo, hi};
}

std::optional<double> critical_distance_m(const SweepSpec& spec, double tolerance_m) {
    const auto bracket = critical_distance_bracket(spec, tolerance_m);
    if (!bracket) return std::nullopt;
    return bracket->secure_m;
}

std::vector<OptimumPoint> sweep_curve(const SweepSpec& spec, Execution exec) {
    std::vector<OptimumPoint> curve;
    for (double d : spec.distances.points_m()) curve.push_back(optimize_at_distance(spec, d, exec));
    return curve;
}

OptimumPoint reference_optimize_at_distance(const SweepSpec& spec, double distance_m) {
    const DetectionModel det = spec.scenario.detection_at(distance_m);
    const double f = spec.protocol.f_ec;

    std::vector<std::pair<int, double>> mus;
    if (spec.fixed_mu)
        mus.emplace_back(0, *spec.fixed_mu);
    else
        for (int i = spec.mu_grid.lo_idx; i <= spec.mu_grid.hi_idx; ++i)
            mus.emplace_back(i, spec.mu_grid.value(i));

    Candidate best;
    const auto consider = [&](double rate, int imu, double mu, int i1, int i2) {
        if (rate <= 0.0) return;
        Candidate c{rate, imu, mu, i1, i2};
        if (better(c, best)) best = c;
    };

    switch (spec.protocol.kind) {
        case ProtocolKind::Bb84:
        case ProtocolKind::Sarg04:
            for (auto [i, mu] : mus) consider(nondecoy_rate(spec, det, mu), i, mu, INT_MAX, INT_MAX);
            break;
        case ProtocolKind::Bb84VacuumWeakDecoy:
            for (auto [i, mu] : mus)
                for (int inu = 1; inu <= spec.mu_grid.hi_idx - 1; ++inu) {
                    const double nu = spec.mu_grid.value(inu);
                    if (!(nu < mu)) break;
                    consider(rate_bb84_decoy(mu, nu, det, f).rate_bits_per_pulse, i, mu, inu, INT_MAX);
                }
            break;
        case ProtocolKind::Sarg04VacuumTwoWeakDecoy: {
            const auto scan = [&](const std::vector<std::pair<int, int>>& pairs, Candidate& into) {
                for (auto [i1, i2] : pairs) {
                    const double nu1 = spec.mu_grid.value(i1);
                    const double nu2 = spec.mu_grid.value(i2);
                    for (auto [i, mu] : mus) {
                        // grid mode checks indices so admissibility matches the kernel exactly
                        const bool valid = spec.fixed_mu ? nu1 + nu2 < mu : i1 + i2 < i;
                        if (!valid) continue;
                        const double r = rate_sarg04_decoy(mu, nu1, nu2, det, f).rate_bits_per_pulse;
                        if (r <= 0.0) continue;
                        Candidate c{r, i, mu, i1, i2};
                        if (better(c, into)) into = c;
                    }
                }
            };
            scan(detail::coarse_nu_pairs(spec.mu_grid, spec.nu_policy), best);
            if (best.rate > 0.0) {
                Candidate refined = best;
                scan(detail::refine_nu_pairs(spec.mu_grid, spec.nu_policy, best.i1, best.i2), refined);
                best = refined;
            }
            break;
        }
    }
    return finish_point(spec, det, distance_m, best);
}

} // namespace qkd
