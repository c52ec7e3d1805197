#include "parkshare/kkt.hpp"

#include <algorithm>
#include <cmath>

namespace parkshare {

int population_size(const Population& pop) {
    int n = 0;
    for (const PopulationClass& c : pop) {
        if (c.count < 1) throw std::invalid_argument("class count must be >= 1");
        n += c.count;
    }
    return n;
}

std::vector<double> OptimalAllocation::per_user() const {
    std::vector<double> z;
    for (std::size_t c = 0; c < class_z.size(); ++c)
        z.insert(z.end(), static_cast<std::size_t>(class_counts[c]), class_z[c]);
    return z;
}

namespace {

double capped_inverse(const CostFunction& cost, double mu) {
    return std::min(1.0, cost.inverse_derivative(mu));
}

double allocated_at(const Population& pop, double mu) {
    double total = 0.0;
    for (const PopulationClass& c : pop) total += c.count * capped_inverse(c.cost, mu);
    return total;
}

} // namespace

OptimalAllocation solve_optimal(const Population& pop, double capacity) {
    if (pop.empty()) throw std::invalid_argument("population is empty");
    const int n = population_size(pop);
    if (!(capacity >= 0.0)) throw std::invalid_argument("capacity must be >= 0");
    if (capacity >= static_cast<double>(n))
        throw InfeasibleError("capacity meets or exceeds the population size; "
                              "frequencies are capped at 1");

    // sum_i min(1, (f_i')^{-1}(mu)) is non-decreasing in mu, 0 at mu = 0
    // and n at mu = max_i f_i'(1): bisect.
    double hi = 0.0;
    for (const PopulationClass& c : pop) hi = std::max(hi, c.cost.derivative(1.0));
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (allocated_at(pop, mid) < capacity)
            lo = mid;
        else
            hi = mid;
    }
    const double mu = 0.5 * (lo + hi);

    OptimalAllocation out;
    out.mu_star = mu;
    out.class_z.reserve(pop.size());
    out.class_counts.reserve(pop.size());
    for (const PopulationClass& c : pop) {
        const double z = capped_inverse(c.cost, mu);
        out.class_z.push_back(z);
        out.class_counts.push_back(c.count);
        if (z <= 0.0 || z >= 1.0) out.interior = false;
    }
    out.objective_value = objective(pop, out.class_z);
    return out;
}

double objective(const Population& pop, std::span<const double> class_z) {
    if (class_z.size() != pop.size())
        throw std::invalid_argument("frequency vector does not match class count");
    double total = 0.0;
    for (std::size_t c = 0; c < pop.size(); ++c) {
        const double z = class_z[c];
        if (!(z >= 0.0 && z <= 1.0))
            throw std::invalid_argument("frequencies must lie in [0, 1]");
        total += pop[c].count * pop[c].cost.value(z);
    }
    return total;
}

} // namespace parkshare
