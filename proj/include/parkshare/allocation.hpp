#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "parkshare/cost.hpp"
#include "parkshare/kkt.hpp"
#include "parkshare/rng.hpp"

namespace parkshare {

// One agent's private state. Nothing here ever crosses to another user;
// the only shared signal in the scheme is the broadcast gain.
struct UserState {
    int class_id = 0;
    double x_bar = 0.0; // running average of the allocation indicator
    int last_x = 0;
    long days = 0;      // index of the last recorded day (k)
};

// Folds one day's allocation into the running average:
//   x_bar <- x_bar + (x - x_bar) / (k + 2),  days <- k + 1,
// the incremental form of the mean over days 0..k+1.
void update_average(UserState& user, int x);

struct ClampRange {
    double min_prob = 1e-4;
    double max_prob = 1.0 - 1e-4;
};

// The per-user access probability clamp(gamma * x_bar / f'(x_bar)).
// Reads only the one user's average and cost. At x_bar = 0 the ratio is
// evaluated at a vanishing positive probe so the clamp sees the one-sided
// limit (p_max for steep power costs, gamma for quadratics).
double access_probability(double x_bar, const CostFunction& cost, double gamma,
                          const ClampRange& clamp);

// Bernoulli(p) draw from the caller's stream.
int draw_allocation(double p, RngStream& rng);

enum class ControllerMode { Integrator, Pi, Frozen };

// Broadcast-gain controller. The integrator follows
//   gamma <- max(0, gamma + alpha * (target - occupancy));
// the PI variant keeps the running error sum and adds a proportional
// term on top of the integral path:
//   gamma <- max(0, gamma_init + ki * sum(e) + kp * e).
// Frozen never updates (used for concentration experiments).
struct ControllerState {
    ControllerMode mode = ControllerMode::Integrator;
    double gamma = 0.0;
    double gamma_init = 0.0;
    double alpha = 0.0; // integrator step size
    double kp = 0.0;
    double ki = 0.0;
    double target = 0.0;     // N_E, expected-occupancy setpoint
    double error_accum = 0.0;
};

// Applies one day's occupancy observation; returns the new gain.
double update_gamma(ControllerState& ctrl, int occupancy);

// Upper bound on the stable integrator step size: the reciprocal of
// max over x in [floor, 1]^n of sum_i x_i / f_i'(x_i). The maximization
// runs over the box alone (coordinatewise, since the sum is separable);
// the floor regularizes the ratio's divergence at 0 for steep costs.
double alpha_upper_bound(const Population& pop, double domain_floor);

// max - min of the cost derivatives evaluated at the per-class means.
// Zero exactly at the optimum, where the derivatives are in consensus.
double consensus_residual(std::span<const double> class_means, const Population& pop);

struct ControllerConfig {
    ControllerMode mode = ControllerMode::Integrator;
    std::optional<double> alpha; // integrator step; default 0.5 * alpha_upper_bound
    double kp = 0.0;
    double ki = 0.0;
};

struct SimConfig {
    int users = 0;          // n; 0 derives it from the population, any other
                            // value must equal the class-size sum
    int premium_spaces = 1; // N: usable premium spaces (pass N - Q to compose
                            // with a dimensioned reserve)
    int horizon = 0;        // recorded days
    std::uint64_t seed = 0;
    Population population;  // class sizes must sum to the user count n > N
    std::optional<double> target_occupancy; // N_E; default N - margin * sqrt(N)
    double target_margin_sigmas = 0.0;
    ClampRange clamp;
    ControllerConfig controller;
    std::optional<double> gamma0; // default: bisected so initial expected
                                  // occupancy equals the target
};

struct DayRecord {
    int day = 0;        // 1-based step index
    int occupancy = 0;  // sum of allocations drawn this day
    double gamma = 0.0; // gain broadcast for this day's draws
    double residual = 0.0;
    std::vector<double> class_means;
};

struct SimTrace {
    std::vector<int> occupancy;
    std::vector<double> gamma_series;
    std::vector<std::vector<double>> class_averages; // [day][class]
    std::vector<double> consensus_residuals;
    std::vector<double> final_user_averages;
    int premium_spaces = 0;
    double target = 0.0;
    double gamma_initial = 0.0;

    int overshoot_days() const;      // days with occupancy > premium_spaces
    double overshoot_frequency() const;
};

// Day-by-day simulation state. Construction performs the day-0
// initialization: X_i(0) ~ Bernoulli(N_E / n) per user, averages seeded
// from those draws, and gamma0 bisected so the initial expected
// occupancy hits the target (unless given explicitly).
class Simulation {
public:
    explicit Simulation(SimConfig config);

    // One day: per-user probabilities under the current gain, independent
    // draws (one substream per (day, user)), average updates, then the
    // controller update from the realized occupancy.
    DayRecord step();

    const SimConfig& config() const { return config_; }
    const std::vector<UserState>& users() const { return users_; }
    const ControllerState& controller() const { return controller_; }
    double gamma_initial() const { return gamma_initial_; }
    std::vector<double> class_means() const;

private:
    SimConfig config_;
    std::vector<UserState> users_;
    ControllerState controller_;
    double gamma_initial_ = 0.0;
    int day_ = 0;
};

// Runs `horizon` steps and collects the trace.
SimTrace run(const SimConfig& config);

// Occupancy series for fixed per-user probabilities (no feedback, no
// average updates); the plain independent-Bernoulli benchmark that the
// concentration bounds describe.
std::vector<int> run_frozen(std::span<const double> probs, int days, std::uint64_t seed);

} // namespace parkshare
