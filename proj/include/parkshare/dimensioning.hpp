#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parkshare/duration_distribution.hpp"

namespace parkshare {

// Inputs of the reserve-dimensioning problem: M leased secondary spaces,
// each with one landlord (return time ~ landlord_return) and one daytime
// user (departure time ~ user_departure), rented over [0, rental_window_end].
struct ScenarioParams {
    double rental_window_end = 0.0;      // W, minutes
    int secondary_spaces = 1;            // M
    DurationDistribution landlord_return;// F_T
    DurationDistribution user_departure; // F_A
};

void validate(const ScenarioParams& params);

// Probability that a landlord returns within the rental window while the
// daytime user is still parked: P(T in [0, W], T < A). Evaluated as the
// Stieltjes sum over the mass points t of F_T with t <= W of
// mass(t) * P(A > t); ties T == A contribute nothing.
double prob_home_early(const ScenarioParams& params);

// Probability that the daytime user overstays past the window and past
// the landlord's return: P(W < T < A). Stieltjes sum over mass points a
// of F_A above W of mass(a) * (P(T < a) - P(T <= W)). Never exceeds
// P(A > W).
double prob_overstay_conflict(const ScenarioParams& params);

// Upper binomial tail: sum_{k=Q}^{M} C(M,k) phi^k (1-phi)^{M-k},
// the probability that at least Q of M spaces see a home-early event.
// Evaluated with log-gamma terms and compensated summation from the
// smaller tail, so it stays accurate for M in the thousands.
double prob_reserve_insufficient(int spaces, int reserve, double phi);

// Smallest Q in 0..M with prob_reserve_insufficient(M, Q, phi) <= target,
// or nullopt when even Q = M exceeds the target. The Q = 0 candidate is
// judged by the underlying event (at least one landlord displaced, i.e.
// 1 - (1-phi)^M) because the printed tail expression is identically 1
// there; for Q >= 1 the conservative tail formula applies as printed.
std::optional<int> min_reserve(int spaces, double phi, double target);

// Smallest window end W such that P(A > W) <= overstay_fraction. The
// minimizer is always 0 or a support point of the distribution.
double calibrate_window(const DurationDistribution& user_departure,
                        double overstay_fraction);

struct DimensionReport {
    double phi = 0.0;
    double p_overstay = 0.0;
    std::vector<double> curve; // curve[Q] = p(M, Q), Q = 0..M
    std::optional<int> q_min;
    double target = 0.0;
};

DimensionReport dimension(const ScenarioParams& params, double target);

// Monte Carlo estimates of the same quantities, used as an independent
// oracle for the closed forms.
//
// phi_hat and p_overstay_hat come from `trials` i.i.d. (T, A) pairs, so
// their standard error is the plain binomial sqrt(p(1-p)/trials). The
// insufficiency curve is estimated from floor(trials / M) simulated
// M-space days (one full set of M pairs per day), counting days on which
// at least Q home-early events occurred.
//
// Every trial and every (day, space) cell draws from its own substream of
// the seed, so estimates are integer-count based and bitwise independent
// of the order the trials are processed in.
struct EventEstimates {
    double phi_hat = 0.0;
    double p_overstay_hat = 0.0;
    std::vector<double> insufficiency_curve; // index Q = 0..M
    long pair_trials = 0;
    long day_trials = 0;
};

EventEstimates monte_carlo_events(const ScenarioParams& params, long trials,
                                  std::uint64_t seed);

} // namespace parkshare
