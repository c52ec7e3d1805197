#include "parkshare/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parkshare {

CostFunction CostFunction::power(double exponent, double scale) {
    if (!(exponent > 1.0))
        throw std::invalid_argument("power cost needs exponent > 1 for strict convexity");
    if (!(scale > 0.0)) throw std::invalid_argument("cost scale must be > 0");
    return CostFunction(Power{exponent, scale});
}

CostFunction CostFunction::piecewise_derivative(std::vector<std::array<double, 2>> knots,
                                                double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("cost scale must be > 0");
    if (knots.size() < 2) throw std::invalid_argument("derivative table needs >= 2 knots");
    if (knots.front()[0] != 0.0 || knots.back()[0] != 1.0)
        throw std::invalid_argument("derivative table must span [0, 1]");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i][0] > knots[i - 1][0]))
            throw std::invalid_argument("derivative table abscissae must increase");
        if (!(knots[i][1] > knots[i - 1][1]))
            throw std::invalid_argument("derivative must be strictly increasing");
    }
    if (!(knots.front()[1] >= 0.0))
        throw std::invalid_argument("derivative must be non-negative");

    Table t;
    t.knots = std::move(knots);
    t.scale = scale;
    t.integral.resize(t.knots.size(), 0.0);
    for (std::size_t i = 1; i < t.knots.size(); ++i) {
        const double dz = t.knots[i][0] - t.knots[i - 1][0];
        t.integral[i] = t.integral[i - 1] + 0.5 * (t.knots[i][1] + t.knots[i - 1][1]) * dz;
    }
    return CostFunction(std::move(t));
}

double CostFunction::value(double z) const {
    z = std::clamp(z, 0.0, 1.0);
    if (const auto* p = std::get_if<Power>(&impl_))
        return p->scale * std::pow(z, p->exponent) / p->exponent;
    const auto& t = std::get<Table>(impl_);
    const auto& k = t.knots;
    auto it = std::upper_bound(k.begin(), k.end(), z,
                               [](double v, const std::array<double, 2>& kn) { return v < kn[0]; });
    const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
    if (i + 1 >= k.size()) return t.scale * t.integral.back();
    const double dz = z - k[i][0];
    const double slope = (k[i + 1][1] - k[i][1]) / (k[i + 1][0] - k[i][0]);
    return t.scale * (t.integral[i] + k[i][1] * dz + 0.5 * slope * dz * dz);
}

double CostFunction::derivative(double z) const {
    z = std::clamp(z, 0.0, 1.0);
    if (const auto* p = std::get_if<Power>(&impl_))
        return p->scale * std::pow(z, p->exponent - 1.0);
    const auto& t = std::get<Table>(impl_);
    const auto& k = t.knots;
    auto it = std::upper_bound(k.begin(), k.end(), z,
                               [](double v, const std::array<double, 2>& kn) { return v < kn[0]; });
    const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
    if (i + 1 >= k.size()) return t.scale * k.back()[1];
    const double frac = (z - k[i][0]) / (k[i + 1][0] - k[i][0]);
    return t.scale * (k[i][1] + frac * (k[i + 1][1] - k[i][1]));
}

double CostFunction::inverse_derivative(double y) const {
    if (const auto* p = std::get_if<Power>(&impl_)) {
        if (y <= 0.0) return 0.0;
        const double z = std::pow(y / p->scale, 1.0 / (p->exponent - 1.0));
        return std::min(z, 1.0);
    }
    const auto& t = std::get<Table>(impl_);
    const auto& k = t.knots;
    const double ys = y / t.scale;
    if (ys <= k.front()[1]) return 0.0;
    if (ys >= k.back()[1]) return 1.0;
    // f' is strictly increasing and piecewise linear: invert the segment.
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (ys <= k[i][1]) {
            const double frac = (ys - k[i - 1][1]) / (k[i][1] - k[i - 1][1]);
            return k[i - 1][0] + frac * (k[i][0] - k[i - 1][0]);
        }
    }
    return 1.0;
}

double CostFunction::max_ratio_to_derivative(double floor_z) const {
    if (!(floor_z > 0.0 && floor_z <= 1.0))
        throw std::invalid_argument("domain floor must lie in (0, 1]");
    if (const auto* p = std::get_if<Power>(&impl_)) {
        // z / f'(z) = z^(2-p) / scale is monotone, so it peaks at an endpoint.
        return std::max(std::pow(floor_z, 2.0 - p->exponent), 1.0) / p->scale;
    }
    // Piecewise-linear derivative: scan a fine grid plus the knots.
    const auto& t = std::get<Table>(impl_);
    double best = 0.0;
    auto consider = [&](double z) {
        if (z < floor_z || z > 1.0) return;
        const double d = derivative(z);
        if (d > 0.0) best = std::max(best, z / d);
    };
    constexpr int kGrid = 2048;
    for (int i = 0; i <= kGrid; ++i)
        consider(floor_z + (1.0 - floor_z) * static_cast<double>(i) / kGrid);
    for (const auto& kn : t.knots) consider(kn[0]);
    if (!(best > 0.0))
        throw std::invalid_argument("derivative vanishes on [floor, 1]");
    return best;
}

bool CostFunction::is_power() const { return std::holds_alternative<Power>(impl_); }

double CostFunction::power_exponent() const { return std::get<Power>(impl_).exponent; }

double CostFunction::scale() const {
    if (const auto* p = std::get_if<Power>(&impl_)) return p->scale;
    return std::get<Table>(impl_).scale;
}

const std::vector<std::array<double, 2>>* CostFunction::table_knots() const {
    if (const auto* t = std::get_if<Table>(&impl_)) return &t->knots;
    return nullptr;
}

} // namespace parkshare
