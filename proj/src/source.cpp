#include "qkd/source.hpp"

namespace qkd {

double poisson_pn(double mu, int n) {
    if (mu < 0.0 || n < 0) throw std::domain_error("poisson_pn: mu and n must be non-negative");
    if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
    if (n <= 20) {
        double term = std::exp(-mu);
        for (int k = 1; k <= n; ++k) term *= mu / k;
        return term;
    }
    return std::exp(-mu + n * std::log(mu) - std::lgamma(double(n) + 1.0));
}

double poisson_tail(double mu, int n_min) {
    if (mu < 0.0 || n_min < 0) throw std::domain_error("poisson_tail: mu and n_min must be non-negative");
    if (n_min == 0) return 1.0;
    if (mu == 0.0) return 0.0;
    double head = 0.0;
    double term = std::exp(-mu);
    for (int n = 0; n < n_min; ++n) {
        head += term;
        term *= mu / (n + 1);
    }
    return 1.0 - head;
}

double exp_tail(double x, int k_min) {
    if (x < 0.0 || k_min < 0) throw std::domain_error("exp_tail: x and k_min must be non-negative");
    if (k_min == 0) return std::exp(x);
    double term = 1.0;
    for (int k = 1; k <= k_min; ++k) term *= x / k;
    double sum = 0.0;
    int k = k_min;
    while (term > sum * 1e-18 + 1e-300) {
        sum += term;
        ++k;
        term *= x / k;
    }
    return sum;
}

void SourceConfig::validate(bool two_decoy_protocol) const {
    if (mu < 0.0 || mu > 1.0) throw std::domain_error("SourceConfig: mu must lie in [0, 1]");
    for (std::size_t i = 0; i < decoys.size(); ++i) {
        if (decoys[i] < 0.0) throw std::domain_error("SourceConfig: decoy intensities must be non-negative");
        if (i > 0 && decoys[i] <= decoys[i - 1])
            throw std::domain_error("SourceConfig: decoy intensities must be strictly increasing");
    }
    if (signal_fraction < 0.0 || vacuum_fraction < 0.0 || signal_fraction + vacuum_fraction > 1.0 + 1e-12)
        throw std::domain_error("SourceConfig: pulse fractions must be non-negative and sum to at most 1");
    if (two_decoy_protocol) {
        // weak decoys only; a leading vacuum entry is allowed
        std::vector<double> weak;
        for (double v : decoys)
            if (v > 0.0) weak.push_back(v);
        if (weak.size() != 2) throw std::domain_error("SourceConfig: two weak decoys required");
        if (!(weak[0] < weak[1] && weak[0] + weak[1] < mu))
            throw std::domain_error("SourceConfig: decoys must satisfy 0 < nu1 < nu2 and nu1 + nu2 < mu");
    }
}

} // namespace qkd
