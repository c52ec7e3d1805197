// Regenerates the checked-in synthetic duration fixtures under data/.
//
// The daytime-user departure durations are a stratified sample of a
// lognormal: the n quantile midpoints Q((i + 0.5) / n) of
// lognormal(mu, sigma) with sigma = 0.6 and mu chosen so the 95th
// percentile sits at 170 minutes. By construction exactly 5% of the
// samples exceed 170, and the empirical CDF at the analytic median is
// exactly 0.5. Rows are shuffled deterministically so the CSV reads like
// field data; values are rounded to micro-minutes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "parkshare/io.hpp"
#include "parkshare/rng.hpp"

namespace {

// Wichura's AS241 (PPND16) inverse normal CDF, ~1 ulp over (0, 1).
double norm_quantile(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r +
                    4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r +
                  1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r +
                3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r +
                    2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r +
                  6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r +
                1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r +
                   1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r +
                 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r +
               1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r +
                   1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r +
                 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r +
               1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r +
                   2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r +
                 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r +
               6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r +
                   7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r +
                 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r +
               1.0);
    }
    return q < 0.0 ? -val : val;
}

double round_micro(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return std::stod(buf);
}

} // namespace

int main(int argc, char** argv) {
    std::string out_dir = "data";
    if (argc > 1) out_dir = argv[1];

    constexpr int kSamples = 100000;
    constexpr double kWindow = 170.0;
    constexpr double kSigma = 0.6;
    const double z95 = norm_quantile(0.95);
    const double mu = std::log(kWindow) - kSigma * z95;

    std::vector<double> samples(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        const double u = (i + 0.5) / kSamples;
        samples[i] = round_micro(std::exp(mu + kSigma * norm_quantile(u)));
    }

    // Deterministic Fisher-Yates shuffle for the CSV ordering.
    std::vector<double> shuffled = samples;
    parkshare::RngStream rng = parkshare::substream(20260809, 0x66697874u);
    for (int i = kSamples - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(shuffled[i], shuffled[j]);
    }

    std::string csv = "duration_minutes\n";
    char buf[40];
    for (double s : shuffled) {
        std::snprintf(buf, sizeof(buf), "%.6f\n", s);
        csv += buf;
    }
    parkshare::io::write_file(std::string(out_dir) + "/durations_lognormal.csv", csv);

    const auto dist = parkshare::DurationDistribution::estimate_empirical(samples);
    parkshare::io::write_json(std::string(out_dir) + "/user_departure_lognormal.json",
                              parkshare::io::to_json(dist));

    std::cout << "wrote " << kSamples << " durations; P(A > " << kWindow
              << ") = " << dist.prob_greater(kWindow)
              << ", median check cdf = " << dist.cdf(std::exp(mu)) << "\n";
    return 0;
}
