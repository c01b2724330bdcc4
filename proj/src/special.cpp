#include "llagraph/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <gsl/gsl_sf_dawson.h>

#include "llagraph/error.hpp"

namespace llagraph::special {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 1000;

// Power series, z <= 1.
double e1_series(double z) {
    double sum = 0.0;
    double term = 1.0;  // z^k / k!
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= z / k;
        const double add = term / k;
        sum += (k % 2 == 1) ? add : -add;
        if (add < kEps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(z) + sum;
}

// Modified Lentz evaluation of the continued fraction for e^z E1(z), z > 1.
double scaled_e1_continued_fraction(double z) {
    constexpr double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

// g in 1 / (e^z E1(z)) = z + g, from the tail 1/(z+3 - 4/(z+5 - 9/(z+7 - ...))), z > 1.
double e1_reciprocal_tail(double z) {
    constexpr double tiny = 1e-300;
    double b = z + 3.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 2; i < kMaxTerms; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return 1.0 - h;
}

}  // namespace

double expint_e1(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw InputError("expint_e1 requires a finite z > 0");
    }
    if (z <= 1.0) return e1_series(z);
    return scaled_e1_continued_fraction(z) * std::exp(-z);
}

double scaled_expint_e1(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw InputError("scaled_expint_e1 requires a finite z > 0");
    }
    if (z <= 1.0) return std::exp(z) * e1_series(z);
    return scaled_e1_continued_fraction(z);
}

double one_minus_z_scaled_e1(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw InputError("one_minus_z_scaled_e1 requires a finite z > 0");
    }
    if (z <= 1.0) return 1.0 - z * std::exp(z) * e1_series(z);
    const double g = e1_reciprocal_tail(z);
    return g / (z + g);
}

double dawson(double y) {
    return gsl_sf_dawson(y);
}

}  // namespace llagraph::special
