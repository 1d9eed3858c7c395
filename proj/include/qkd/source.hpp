#ifndef QKD_SOURCE_HPP
#define QKD_SOURCE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qkd {

// Photon-number statistics of a weak coherent pulse with mean photon number mu.

// P_n(mu) = e^{-mu} mu^n / n!, evaluated in log space once n! would overflow.
double poisson_pn(double mu, int n);

// Sum_{n >= n_min} P_n(mu), computed as the exact complement of the head so no
// truncation tolerance is involved.
double poisson_tail(double mu, int n_min);

// Sum_{k >= k_min} x^k / k! (no e^{-x} factor). Series form; the naive
// e^x - 1 - x - x^2/2 cancels catastrophically for small x.
double exp_tail(double x, int k_min);

// Signal intensity plus decoy intensities and pulse-allocation metadata.
struct SourceConfig {
    double mu = 0.5;
    std::vector<double> decoys;        // strictly increasing, may start at 0 (vacuum)
    double pulses_total = 1e8;         // N
    double signal_fraction = 0.95;     // N_mu / N
    double vacuum_fraction = 0.05;     // N_0 / N

    // Throws std::domain_error on violated invariants. `two_decoy_protocol`
    // additionally enforces 0 < nu1 < nu2 and nu1 + nu2 < mu.
    void validate(bool two_decoy_protocol = false) const;
};

} // namespace qkd

#endif
