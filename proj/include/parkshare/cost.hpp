#pragma once

#include <array>
#include <variant>
#include <vector>

namespace parkshare {

// Per-user inconvenience cost f over access frequencies z in [0, 1].
// Strictly convex and continuously differentiable on (0, 1] with f' > 0
// for z > 0, which the constructors validate.
//
// Two concrete families:
//   power(p, scale):  f(z) = scale * z^p / p, so f'(z) = scale * z^(p-1)
//   piecewise_derivative(knots, scale): f' given as a strictly increasing
//     piecewise-linear function on knots spanning [0, 1]; f is its exact
//     integral from 0.
class CostFunction {
public:
    static CostFunction power(double exponent, double scale = 1.0);
    static CostFunction piecewise_derivative(std::vector<std::array<double, 2>> knots,
                                             double scale = 1.0);

    double value(double z) const;
    double derivative(double z) const;

    // (f')^{-1}(y), capped to [0, 1]; y below f'(0+) maps to 0.
    double inverse_derivative(double y) const;

    // max over z in [floor_z, 1] of z / f'(z); used for step-size bounds.
    double max_ratio_to_derivative(double floor_z) const;

    bool is_power() const;
    double power_exponent() const; // valid only for power costs
    double scale() const;

    // Serialization hooks.
    const std::vector<std::array<double, 2>>* table_knots() const;

private:
    struct Power {
        double exponent;
        double scale;
    };
    struct Table {
        std::vector<std::array<double, 2>> knots; // (z, f'(z)), z increasing over [0,1]
        std::vector<double> integral;              // exact integral of f' up to each knot
        double scale;
    };
    explicit CostFunction(Power p) : impl_(p) {}
    explicit CostFunction(Table t) : impl_(std::move(t)) {}

    std::variant<Power, Table> impl_;
};

} // namespace parkshare
