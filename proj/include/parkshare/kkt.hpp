#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "parkshare/cost.hpp"

namespace parkshare {

// One homogeneous group of users sharing a cost function.
struct PopulationClass {
    int count = 1;
    CostFunction cost;
};
using Population = std::vector<PopulationClass>;

int population_size(const Population& pop);

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact optimum of   min sum_i f_i(z_i)  s.t.  sum_i z_i = capacity,
// 0 <= z_i <= 1.  Users within a class share a frequency, so the solution
// is stored per class.
struct OptimalAllocation {
    std::vector<double> class_z;   // optimal frequency per class
    std::vector<int> class_counts;
    double mu_star = 0.0;          // common derivative value at the optimum
    double objective_value = 0.0;  // sum over users of f_i(z*_i)
    bool interior = true;          // all z*_i strictly inside (0, 1)

    std::vector<double> per_user() const;
};

// Water-filling solve: outer bisection on the multiplier mu of
// sum_i min(1, (f_i')^{-1}(mu)) = capacity, inner inversion in closed
// form for power costs and by segment lookup for tabulated derivatives.
// At an interior optimum every unpinned user's derivative equals mu.
// A class pinned at z = 1 drops out of that consensus and the result is
// flagged non-interior (the consensus characterization assumed an
// interior optimum).
OptimalAllocation solve_optimal(const Population& pop, double capacity);

// sum over users of f_i(z_i) for per-class frequencies z.
double objective(const Population& pop, std::span<const double> class_z);

} // namespace parkshare
