#include "crackmusic/special_fn.hpp"

#include <algorithm>
#include <limits>

namespace crackmusic {

namespace {

constexpr double kSeriesLimit = 14.0;

double j0_series(double x) {
    // sum_k (-1)^k (x^2/4)^k / (k!)^2
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

double j0_asymptotic(double x) {
    // J0(x) = sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4)), truncated at the
    // smallest term of the Hankel series.
    const double z8 = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(odd * odd) / (static_cast<double>(k) * z8);
        if (std::abs(term) >= last) break;
        last = std::abs(term);
        // P = sum (-1)^j t_{2j}, Q = sum (-1)^j t_{2j+1}
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1) {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if (last < 1e-17) break;
    }
    const double phase = x - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(phase) - q * std::sin(phase));
}

}  // namespace

double bessel_j0(double x) {
    if (!std::isfinite(x)) throw ArgumentError("bessel_j0: non-finite argument");
    const double ax = std::abs(x);
    return ax < kSeriesLimit ? j0_series(ax) : j0_asymptotic(ax);
}

Complex direction_average(double w, Point2 x, const DirectionSet& dirs) {
    if (dirs.size() == 0) throw ArgumentError("direction_average: empty direction set");
    if (!std::isfinite(w) || !is_finite(x)) throw ArgumentError("direction_average: non-finite input");
    const auto weights = dirs.quadrature_weights();
    Complex sum{0.0, 0.0};
    for (std::size_t n = 0; n < dirs.size(); ++n) {
        sum += weights[n] * std::polar(1.0, w * dot(dirs.direction(n), x));
    }
    return sum;
}

Complex direction_mean(double w, Point2 x, const DirectionSet& dirs) {
    if (dirs.size() == 0) throw ArgumentError("direction_mean: empty direction set");
    if (!std::isfinite(w) || !is_finite(x)) throw ArgumentError("direction_mean: non-finite input");
    Complex sum{0.0, 0.0};
    for (std::size_t n = 0; n < dirs.size(); ++n) {
        sum += std::polar(1.0, w * dot(dirs.direction(n), x));
    }
    return sum / static_cast<double>(dirs.size());
}

}  // namespace crackmusic
