#include "parkshare/dimensioning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parkshare {

namespace {

// Compensated (Kahan) accumulator.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// log of the binomial pmf term C(M,k) phi^k (1-phi)^(M-k).
double log_binom_term(int m, int k, double log_phi, double log_1mphi) {
    return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) +
           k * log_phi + (m - k) * log_1mphi;
}

constexpr std::uint64_t kStreamPairs = 0x70616972u; // event-pair trials
constexpr std::uint64_t kStreamDays = 0x64617973u;  // M-space day trials

} // namespace

void validate(const ScenarioParams& params) {
    if (!(params.rental_window_end >= 0.0))
        throw std::invalid_argument("rental window end must be >= 0");
    if (params.secondary_spaces < 1)
        throw std::invalid_argument("need at least one secondary space");
}

double prob_home_early(const ScenarioParams& params) {
    validate(params);
    const double w = params.rental_window_end;
    const DurationDistribution& arrival = params.user_departure;
    KahanSum acc;
    params.landlord_return.for_each_mass([&](double t, double mass) {
        if (t <= w) acc.add(mass * arrival.prob_greater(t));
    });
    return std::clamp(acc.sum, 0.0, 1.0);
}

double prob_overstay_conflict(const ScenarioParams& params) {
    validate(params);
    const double w = params.rental_window_end;
    const DurationDistribution& ret = params.landlord_return;
    const double ret_by_w = ret.cdf(w);
    KahanSum acc;
    params.user_departure.for_each_mass([&](double a, double mass) {
        if (a > w) acc.add(mass * std::max(0.0, ret.prob_less(a) - ret_by_w));
    });
    return std::clamp(acc.sum, 0.0, 1.0);
}

double prob_reserve_insufficient(int spaces, int reserve, double phi) {
    if (reserve < 0 || reserve > spaces)
        throw std::invalid_argument("reserve must lie in 0..spaces");
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::invalid_argument("phi must lie in [0, 1]");
    if (reserve == 0) return 1.0; // full binomial sum
    if (phi == 0.0) return 0.0;
    if (phi == 1.0) return 1.0;  // the k = M term alone is 1

    const double log_phi = std::log(phi);
    const double log_1mphi = std::log1p(-phi);
    const double mode = (spaces + 1) * phi;

    KahanSum acc;
    if (static_cast<double>(reserve) > mode) {
        // Terms decay beyond the mode; accumulate the upper tail starting
        // from its smallest member.
        for (int k = spaces; k >= reserve; --k)
            acc.add(std::exp(log_binom_term(spaces, k, log_phi, log_1mphi)));
        return std::clamp(acc.sum, 0.0, 1.0);
    }
    // Mode lies inside the requested tail; the complement sum (terms
    // growing toward the mode) is the better-conditioned one.
    for (int k = 0; k < reserve; ++k)
        acc.add(std::exp(log_binom_term(spaces, k, log_phi, log_1mphi)));
    return std::clamp(1.0 - acc.sum, 0.0, 1.0);
}

std::optional<int> min_reserve(int spaces, double phi, double target) {
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("target must lie in (0, 1)");
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::invalid_argument("phi must lie in [0, 1]");
    // The printed tail formula is identically 1 at Q = 0, so judge the
    // no-reserve case by the underlying event instead: zero spaces are
    // enough when no landlord is ever displaced.
    const double any_event = 1.0 - std::pow(1.0 - phi, spaces);
    if (any_event <= target) return 0;
    for (int q = 1; q <= spaces; ++q) {
        if (prob_reserve_insufficient(spaces, q, phi) <= target) return q;
    }
    return std::nullopt;
}

double calibrate_window(const DurationDistribution& user_departure,
                        double overstay_fraction) {
    if (!(overstay_fraction > 0.0 && overstay_fraction < 1.0))
        throw std::invalid_argument("overstay fraction must lie in (0, 1)");
    if (user_departure.prob_greater(0.0) <= overstay_fraction) return 0.0;
    // P(A > w) only drops at support points, so the minimizer is one.
    for (double w : user_departure.support_points()) {
        if (user_departure.prob_greater(w) <= overstay_fraction) return w;
    }
    return user_departure.support_points().back(); // unreachable: tail hits 0
}

DimensionReport dimension(const ScenarioParams& params, double target) {
    validate(params);
    DimensionReport report;
    report.phi = prob_home_early(params);
    report.p_overstay = prob_overstay_conflict(params);
    report.target = target;
    report.curve.resize(params.secondary_spaces + 1);
    for (int q = 0; q <= params.secondary_spaces; ++q)
        report.curve[q] = prob_reserve_insufficient(params.secondary_spaces, q, report.phi);
    report.q_min = min_reserve(params.secondary_spaces, report.phi, target);
    return report;
}

EventEstimates monte_carlo_events(const ScenarioParams& params, long trials,
                                  std::uint64_t seed) {
    validate(params);
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const double w = params.rental_window_end;
    const int m = params.secondary_spaces;

    EventEstimates est;
    est.pair_trials = trials;

    // Per-space event probabilities from independent (T, A) pairs. Counts
    // are integers so the estimate is order-independent.
    long home_early = 0;
    long overstay = 0;
    for (long i = 0; i < trials; ++i) {
        RngStream rng = substream(seed, kStreamPairs, static_cast<std::uint64_t>(i));
        const double t = params.landlord_return.sample(rng);
        const double a = params.user_departure.sample(rng);
        if (t <= w && t < a) ++home_early;
        if (t > w && t < a) ++overstay;
    }
    est.phi_hat = static_cast<double>(home_early) / static_cast<double>(trials);
    est.p_overstay_hat = static_cast<double>(overstay) / static_cast<double>(trials);

    // Insufficiency curve from full M-space days.
    const long days = std::max(1L, trials / m);
    est.day_trials = days;
    std::vector<long> hist(m + 1, 0); // hist[s] = days with exactly s events
    for (long d = 0; d < days; ++d) {
        int events = 0;
        for (int s = 0; s < m; ++s) {
            RngStream rng = substream(seed, kStreamDays, static_cast<std::uint64_t>(d),
                                      static_cast<std::uint64_t>(s));
            const double t = params.landlord_return.sample(rng);
            const double a = params.user_departure.sample(rng);
            if (t <= w && t < a) ++events;
        }
        ++hist[events];
    }
    est.insufficiency_curve.resize(m + 1);
    long at_least = 0;
    for (int q = m; q >= 0; --q) {
        at_least += hist[q];
        est.insufficiency_curve[q] = static_cast<double>(at_least) / static_cast<double>(days);
    }
    return est;
}

} // namespace parkshare
