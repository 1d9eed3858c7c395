#ifndef QKD_ADVERSARY_HPP
#define QKD_ADVERSARY_HPP

#include <functional>
#include <stdexcept>

namespace qkd {

// Probability P_ok(n) that an unambiguous discrimination on n >= 3 photon
// copies is conclusive. The floor 1/2 is the only committed value; a custom
// model must stay within [1/2, 1].
struct PokModel {
    std::function<double(int)> fn;  // empty = constant 1/2

    static PokModel constant_half() { return {}; }
    static PokModel constant(double p);
    static PokModel custom(std::function<double(int)> f) { return {std::move(f)}; }

    bool is_constant_half() const { return !fn; }
    double operator()(int n) const;
};

// chi = sum_{n>=3} P_n(mu) P_ok(n): probability mass of multi-photon pulses
// Eve resolves conclusively.
double eve_chi(double mu, const PokModel& pok = PokModel::constant_half());

enum class EveAttack { PNS, IRUD };

enum class IrudRegime {
    TransparentBlockSingles,        // Eve blocks a fraction t of singles, keeps all doubles
    BlockAllSinglesBlockSomeDoubles,// t = 1, blocks a fraction s of doubles
    FullInfo,                       // even chi over-delivers; Eve reads everything
};

struct EveStrategy {
    EveAttack attack = EveAttack::IRUD;
    double t = 0.0;    // fraction of single-photon pulses blocked
    double s = 0.0;    // fraction of two-photon pulses blocked
    double chi = 0.0;  // conclusive multi-photon mass
    IrudRegime regime = IrudRegime::TransparentBlockSingles;
    bool eve_can_match = true;  // false when the channel is too transparent to hide in
};

struct IrudParams {
    PokModel pok = PokModel::constant_half();
    double i2 = 1.0;  // information per kept copy of an unblocked two-photon pulse

    void validate() const {
        if (!(i2 >= 0.0 && i2 <= 1.0)) throw std::domain_error("IrudParams: i2 must lie in [0, 1]");
    }
};

// Solve for the blocking fractions that make Eve's delivered mean photon
// number equal mu * delta (loss matching).
EveStrategy solve_irud_strategy(double mu, double delta,
                                const PokModel& pok = PokModel::constant_half());

struct MutualInfo {
    double i_ab = 0.0;
    double i_be = 0.0;
    double i_eve = 0.0;   // min(i_be / i_ab, 1)
    double raw_ratio = 0.0;  // unclamped i_be / i_ab, for diagnostics
};

// PNS adversary on BB84: every multi-photon pulse is tagged.
// i_ab = 1 - e^{-mu delta} (closed form of the detection sum), i_be = P(n>=2).
MutualInfo mutual_info_bb84(double mu, double delta);

// IRUD adversary on SARG04, using the loss-matched (t, s, chi).
MutualInfo mutual_info_sarg04(double mu, double delta, const IrudParams& params = {});

// Channel loss (dB) at which Eve's information reaches 1.
// BB84: exact root of 1 - e^{-mu delta} = P(n>=2).
// SARG04: entry into the FullInfo regime, mu delta = chi(mu) -- the loss
// beyond which every photon Bob expects is covered by a conclusive
// discrimination, independent of i2.
double crossing_loss_db_bb84(double mu);
double crossing_loss_db_sarg04(double mu, const PokModel& pok = PokModel::constant_half());

} // namespace qkd

#endif
