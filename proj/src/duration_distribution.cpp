#include "parkshare/duration_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parkshare {

namespace {
constexpr double kMassTolerance = 1e-9;
}

DurationDistribution::DurationDistribution(std::vector<MassPoint> atoms,
                                           std::vector<double> samples)
    : atoms_(std::move(atoms)), samples_(std::move(samples)) {
    double total = 0.0;
    for (const MassPoint& a : atoms_) {
        if (!(a.mass > 0.0)) throw std::invalid_argument("atom mass must be > 0");
        if (!(a.value >= 0.0)) throw std::invalid_argument("atom value must be >= 0");
        total += a.mass;
    }
    if (total > 1.0 + kMassTolerance)
        throw std::invalid_argument("atom masses sum to more than 1");
    for (double s : samples_) {
        if (!(s >= 0.0)) throw std::invalid_argument("sample must be >= 0");
    }
    atom_mass_total_ = std::min(total, 1.0);
    sample_weight_ = std::max(0.0, 1.0 - total);
    if (sample_weight_ > kMassTolerance && samples_.empty())
        throw std::invalid_argument("atom masses sum below 1 but no samples given");

    std::sort(atoms_.begin(), atoms_.end(),
              [](const MassPoint& a, const MassPoint& b) { return a.value < b.value; });
    std::sort(samples_.begin(), samples_.end());
}

DurationDistribution DurationDistribution::from_atoms(std::vector<MassPoint> atoms) {
    return DurationDistribution(std::move(atoms), {});
}

DurationDistribution DurationDistribution::estimate_empirical(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical estimate needs samples");
    return DurationDistribution({}, std::move(samples));
}

double DurationDistribution::cdf(double x) const {
    double p = 0.0;
    for (const MassPoint& a : atoms_) {
        if (a.value > x) break;
        p += a.mass;
    }
    if (!samples_.empty()) {
        const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
        const double frac = static_cast<double>(it - samples_.begin()) /
                            static_cast<double>(samples_.size());
        p += sample_weight_ * frac;
    }
    return std::min(p, 1.0);
}

double DurationDistribution::prob_less(double x) const {
    double p = 0.0;
    for (const MassPoint& a : atoms_) {
        if (a.value >= x) break;
        p += a.mass;
    }
    if (!samples_.empty()) {
        const auto it = std::lower_bound(samples_.begin(), samples_.end(), x);
        const double frac = static_cast<double>(it - samples_.begin()) /
                            static_cast<double>(samples_.size());
        p += sample_weight_ * frac;
    }
    return std::min(p, 1.0);
}

double DurationDistribution::sample(RngStream& rng) const {
    const double u = rng.next_double();
    double cum = 0.0;
    for (const MassPoint& a : atoms_) {
        cum += a.mass;
        if (u < cum) return a.value;
    }
    if (samples_.empty()) return atoms_.back().value; // total atom mass ~ 1
    // Uniform pick among samples from the leftover uniform mass.
    const double v = (u - atom_mass_total_) / sample_weight_;
    auto idx = static_cast<std::size_t>(v * static_cast<double>(samples_.size()));
    if (idx >= samples_.size()) idx = samples_.size() - 1;
    return samples_[idx];
}

std::vector<double> DurationDistribution::support_points() const {
    std::vector<double> pts;
    pts.reserve(atoms_.size() + samples_.size());
    for (const MassPoint& a : atoms_) pts.push_back(a.value);
    pts.insert(pts.end(), samples_.begin(), samples_.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace parkshare
