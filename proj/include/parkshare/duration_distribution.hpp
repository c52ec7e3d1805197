#pragma once

#include <cstddef>
#include <vector>

#include "parkshare/rng.hpp"

namespace parkshare {

struct MassPoint {
    double value = 0.0; // minutes, >= 0
    double mass = 0.0;  // > 0
};

// Probability distribution of a non-negative duration, represented as a
// mixture of point masses (atoms) and an empirical sample cloud. The
// samples share the leftover mass 1 - sum(atom masses) uniformly, so a
// purely atomic table and a purely empirical estimate are both special
// cases of the same object.
//
// The CDF is right-continuous and non-decreasing with cdf(+inf) = 1.
// Values are immutable after construction and safe to share across
// threads; only sample() touches caller-owned generator state.
class DurationDistribution {
public:
    DurationDistribution(std::vector<MassPoint> atoms, std::vector<double> samples);

    static DurationDistribution from_atoms(std::vector<MassPoint> atoms);

    // Empirical distribution of the samples: cdf(z) = #{samples <= z} / n.
    static DurationDistribution estimate_empirical(std::vector<double> samples);

    // P(X <= x).
    double cdf(double x) const;

    // P(X > x); an atom exactly at x is excluded. Defined as 1 - cdf(x),
    // which for doubles in [0, 1] makes prob_greater(x) + cdf(x) == 1 exact.
    double prob_greater(double x) const { return 1.0 - cdf(x); }

    // P(X < x), strict.
    double prob_less(double x) const;

    // One draw; deterministic given the stream state.
    double sample(RngStream& rng) const;

    const std::vector<MassPoint>& atoms() const { return atoms_; }
    const std::vector<double>& samples() const { return samples_; } // sorted ascending
    double sample_weight() const { return sample_weight_; }

    // Applies fn(value, weight) to every point of support mass. Atoms come
    // first, then samples at weight sample_weight() / n each.
    template <typename Fn>
    void for_each_mass(Fn&& fn) const {
        for (const MassPoint& a : atoms_) fn(a.value, a.mass);
        if (!samples_.empty()) {
            const double w = sample_weight_ / static_cast<double>(samples_.size());
            for (double s : samples_) fn(s, w);
        }
    }

    // Support points in ascending order (atom values and samples merged).
    std::vector<double> support_points() const;

private:
    std::vector<MassPoint> atoms_;  // sorted by value
    std::vector<double> samples_;   // sorted ascending
    double sample_weight_ = 0.0;    // 1 - sum of atom masses (clamped at 0)
    double atom_mass_total_ = 0.0;
};

} // namespace parkshare
