#include "parkshare/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parkshare {

namespace {

constexpr std::uint64_t kStreamAlloc = 0x616c6c6fu;  // per-(day, user) draws
constexpr std::uint64_t kStreamFrozen = 0x66727a6eu; // frozen-probability runs

// Probe for the x_bar -> 0+ limit of x / f'(x); small enough that any
// divergent ratio saturates the clamp.
constexpr double kZeroProbe = 1e-12;

} // namespace

void update_average(UserState& user, int x) {
    user.x_bar += (static_cast<double>(x) - user.x_bar) / static_cast<double>(user.days + 2);
    user.last_x = x;
    user.days += 1;
}

double access_probability(double x_bar, const CostFunction& cost, double gamma,
                          const ClampRange& clamp) {
    const double x = x_bar > 0.0 ? x_bar : kZeroProbe;
    const double ratio = x / cost.derivative(x);
    return std::clamp(gamma * ratio, clamp.min_prob, clamp.max_prob);
}

int draw_allocation(double p, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
    return rng.bernoulli(p) ? 1 : 0;
}

double update_gamma(ControllerState& ctrl, int occupancy) {
    const double error = ctrl.target - static_cast<double>(occupancy);
    switch (ctrl.mode) {
    case ControllerMode::Integrator:
        ctrl.gamma = std::max(0.0, ctrl.gamma + ctrl.alpha * error);
        break;
    case ControllerMode::Pi:
        ctrl.error_accum += error;
        ctrl.gamma = std::max(0.0, ctrl.gamma_init + ctrl.ki * ctrl.error_accum + ctrl.kp * error);
        break;
    case ControllerMode::Frozen:
        break;
    }
    return ctrl.gamma;
}

double alpha_upper_bound(const Population& pop, double domain_floor) {
    if (!(domain_floor > 0.0)) throw std::invalid_argument("domain floor must be > 0");
    double total = 0.0;
    for (const PopulationClass& c : pop)
        total += c.count * c.cost.max_ratio_to_derivative(domain_floor);
    return 1.0 / total;
}

double consensus_residual(std::span<const double> class_means, const Population& pop) {
    if (class_means.size() != pop.size())
        throw std::invalid_argument("mean vector does not match class count");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t c = 0; c < pop.size(); ++c) {
        const double d = pop[c].cost.derivative(class_means[c]);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return hi - lo;
}

int SimTrace::overshoot_days() const {
    int n = 0;
    for (int occ : occupancy)
        if (occ > premium_spaces) ++n;
    return n;
}

double SimTrace::overshoot_frequency() const {
    if (occupancy.empty()) return 0.0;
    return static_cast<double>(overshoot_days()) / static_cast<double>(occupancy.size());
}

namespace {

// Expected occupancy if gamma were broadcast right now.
double expected_occupancy(const std::vector<UserState>& users, const Population& pop,
                          double gamma, const ClampRange& clamp) {
    double sum = 0.0;
    for (const UserState& u : users)
        sum += access_probability(u.x_bar, pop[u.class_id].cost, gamma, clamp);
    return sum;
}

// Smallest gamma whose expected occupancy reaches the target; the sum is
// non-decreasing in gamma and saturates at n * p_max.
double bisect_gamma0(const std::vector<UserState>& users, const Population& pop,
                     const ClampRange& clamp, double target) {
    double lo = 0.0;
    double hi = 1.0;
    while (expected_occupancy(users, pop, hi, clamp) < target && hi < 1e30) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (expected_occupancy(users, pop, mid, clamp) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Simulation::Simulation(SimConfig config) : config_(std::move(config)) {
    const int n = population_size(config_.population);
    if (config_.premium_spaces < 1)
        throw std::invalid_argument("need at least one premium space");
    if (n <= config_.premium_spaces)
        throw std::invalid_argument("user count must exceed the premium space count");
    if (config_.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (!(config_.clamp.min_prob > 0.0 && config_.clamp.min_prob < config_.clamp.max_prob &&
          config_.clamp.max_prob < 1.0))
        throw std::invalid_argument("probability clamp must satisfy 0 < min < max < 1");

    double target = config_.premium_spaces -
                    config_.target_margin_sigmas * std::sqrt(config_.premium_spaces);
    if (config_.target_occupancy) target = *config_.target_occupancy;
    if (!(target > 0.0 && target <= config_.premium_spaces))
        throw std::invalid_argument("target occupancy must lie in (0, N]");

    users_.reserve(n);
    const double p0 = target / static_cast<double>(n);
    int uid = 0;
    for (std::size_t c = 0; c < config_.population.size(); ++c) {
        for (int j = 0; j < config_.population[c].count; ++j, ++uid) {
            RngStream rng = substream(config_.seed, kStreamAlloc, 0,
                                      static_cast<std::uint64_t>(uid));
            UserState u;
            u.class_id = static_cast<int>(c);
            u.last_x = rng.bernoulli(p0) ? 1 : 0;
            u.x_bar = u.last_x; // X(0) is the first recorded day
            u.days = 0;
            users_.push_back(u);
        }
    }

    controller_.mode = config_.controller.mode;
    controller_.target = target;
    controller_.kp = config_.controller.kp;
    controller_.ki = config_.controller.ki;
    if (config_.controller.alpha)
        controller_.alpha = *config_.controller.alpha;
    else
        controller_.alpha = 0.5 * alpha_upper_bound(config_.population, config_.clamp.min_prob);

    if (config_.gamma0)
        controller_.gamma = *config_.gamma0;
    else
        controller_.gamma = bisect_gamma0(users_, config_.population, config_.clamp, target);
    controller_.gamma_init = controller_.gamma;
    gamma_initial_ = controller_.gamma;
}

std::vector<double> Simulation::class_means() const {
    std::vector<double> mean(config_.population.size(), 0.0);
    for (const UserState& u : users_) mean[u.class_id] += u.x_bar;
    for (std::size_t c = 0; c < mean.size(); ++c)
        mean[c] /= static_cast<double>(config_.population[c].count);
    return mean;
}

DayRecord Simulation::step() {
    ++day_;
    const double gamma = controller_.gamma;
    int occupancy = 0;
    for (std::size_t i = 0; i < users_.size(); ++i) {
        UserState& u = users_[i];
        const double p =
            access_probability(u.x_bar, config_.population[u.class_id].cost, gamma,
                               config_.clamp);
        RngStream rng = substream(config_.seed, kStreamAlloc,
                                  static_cast<std::uint64_t>(day_),
                                  static_cast<std::uint64_t>(i));
        const int x = draw_allocation(p, rng);
        occupancy += x;
        update_average(u, x);
    }
    update_gamma(controller_, occupancy);

    DayRecord rec;
    rec.day = day_;
    rec.occupancy = occupancy;
    rec.gamma = gamma;
    rec.class_means = class_means();
    rec.residual = consensus_residual(rec.class_means, config_.population);
    return rec;
}

SimTrace run(const SimConfig& config) {
    Simulation sim(config);
    SimTrace trace;
    trace.premium_spaces = config.premium_spaces;
    trace.target = sim.controller().target;
    trace.gamma_initial = sim.gamma_initial();
    trace.occupancy.reserve(config.horizon);
    trace.gamma_series.reserve(config.horizon);
    for (int d = 0; d < config.horizon; ++d) {
        DayRecord rec = sim.step();
        trace.occupancy.push_back(rec.occupancy);
        trace.gamma_series.push_back(rec.gamma);
        trace.class_averages.push_back(std::move(rec.class_means));
        trace.consensus_residuals.push_back(rec.residual);
    }
    trace.final_user_averages.reserve(sim.users().size());
    for (const UserState& u : sim.users()) trace.final_user_averages.push_back(u.x_bar);
    return trace;
}

std::vector<int> run_frozen(std::span<const double> probs, int days, std::uint64_t seed) {
    std::vector<int> occupancy(days, 0);
    for (int d = 0; d < days; ++d) {
        int occ = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            RngStream rng = substream(seed, kStreamFrozen, static_cast<std::uint64_t>(d),
                                      static_cast<std::uint64_t>(i));
            occ += rng.bernoulli(probs[i]) ? 1 : 0;
        }
        occupancy[d] = occ;
    }
    return occupancy;
}

} // namespace parkshare
