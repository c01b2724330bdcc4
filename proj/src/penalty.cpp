#include "llagraph/penalty.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "llagraph/error.hpp"
#include "llagraph/special.hpp"

namespace llagraph {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kPi = std::numbers::pi;
constexpr unsigned kMaxDepth = 15;

struct Pair {
    double den = 0.0;
    double num = 0.0;
};

struct Panel {
    Pair value;
    Pair error;
};

// 15/31-point Gauss-Kronrod panel for two integrands evaluated on shared nodes.
// Gauss node j coincides with Kronrod node 2j. The error uses the QUADPACK
// scaling of |K - G|, which is much less pessimistic on smooth integrands.
template <class F>
Panel kronrod_panel(F& f, double a, double b) {
    using boost::math::quadrature::gauss;
    static const auto& nodes = gauss_kronrod<double, 31>::abscissa();
    static const auto& kw = gauss_kronrod<double, 31>::weights();
    static const auto& gw = gauss<double, 15>::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    Pair k, g;
    std::array<Pair, 16> sums;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Pair s = f(c - h * nodes[i]);
        if (i > 0) {
            const Pair r = f(c + h * nodes[i]);
            s.den += r.den;
            s.num += r.num;
        }
        sums[i] = s;
        k.den += kw[i] * s.den;
        k.num += kw[i] * s.num;
        if (i % 2 == 0) {
            g.den += gw[i / 2] * s.den;
            g.num += gw[i / 2] * s.num;
        }
    }
    auto error = [&](double kv, double gv, double Pair::*field) {
        // resasc approximates the integral of |f - mean| over the panel.
        const double mean = 0.5 * kv;
        double resasc = kw[0] * std::abs(sums[0].*field - mean);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            resasc += kw[i] * std::abs(sums[i].*field - 2.0 * mean);
        }
        resasc *= h;
        double err = std::abs((kv - gv) * h);
        if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        return std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kv * h));
    };
    return {{k.den * h, k.num * h}, {error(k.den, g.den, &Pair::den), error(k.num, g.num, &Pair::num)}};
}

template <class F>
Pair refine(F& f, double a, double b, const Panel& p, Pair target, unsigned depth) {
    if ((p.error.den <= target.den && p.error.num <= target.num) || depth == 0) return p.value;
    const double m = 0.5 * (a + b);
    const Pair half{0.5 * target.den, 0.5 * target.num};
    const Pair l = refine(f, a, m, kronrod_panel(f, a, m), half, depth - 1);
    const Pair r = refine(f, m, b, kronrod_panel(f, m, b), half, depth - 1);
    return {l.den + r.den, l.num + r.num};
}

// Every segment is estimated once; the absolute target is then rel_tol times
// the total, so negligible segments are not refined against their own size.
template <class F>
Pair integrate_segments(F&& f, const std::vector<double>& points, double rel_tol) {
    std::vector<Panel> panels;
    Pair total;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        panels.push_back(points[i + 1] > points[i] ? kronrod_panel(f, points[i], points[i + 1]) : Panel{});
        total.den += panels.back().value.den;
        total.num += panels.back().value.num;
    }
    const std::size_t segments = std::max<std::size_t>(panels.size(), 1);
    const Pair target{rel_tol * std::abs(total.den) / static_cast<double>(segments),
                      rel_tol * std::abs(total.num) / static_cast<double>(segments)};
    Pair out;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        if (points[i + 1] <= points[i]) continue;
        const Pair part = refine(f, points[i], points[i + 1], panels[i], target, kMaxDepth);
        out.den += part.den;
        out.num += part.num;
    }
    return out;
}

// Breakpoints around the scale where the integrands peak, plus one per decade
// between that scale and 1 so log-spread mass near the origin is resolved.
std::vector<double> breakpoints(double lo, double hi, double peak, std::initializer_list<double> interior,
                                double (*map)(double)) {
    std::vector<double> pts{lo, hi};
    for (double p : interior) {
        const double m = map(p);
        if (m > lo && m < hi) pts.push_back(m);
    }
    for (double d = 10.0 * peak; d < 1.0; d *= 10.0) {
        const double m = map(d);
        if (m > lo && m < hi) pts.push_back(m);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

struct MixtureIntegrals {
    // den = scaled marginal density, num = scaled numerator of the derivative ratio.
    double log_den;
    double deriv;
};

// Half-Cauchy local scale, lambda = tan(theta): the mixing measure becomes (2/pi) d theta.
MixtureIntegrals cauchy_mixture(double x, double tau, double rel_tol) {
    const double log_x = std::log(x);
    const double ref_den = -0.5 - log_x;
    const double ref_num = -0.5 - 3.0 * log_x;
    // The numerator integrand is the denominator one times (x/s)^2, since ref_num = ref_den - 2 log x.
    auto f = [&](double theta) {
        const double s = tau * std::tan(theta);
        const double r = x / s;
        const double d = std::exp(-0.5 * r * r - std::log(s) - ref_den);
        return Pair{d, d * r * r};
    };
    const double b = x / tau;
    const auto pts = breakpoints(0.0, kPi / 2.0, b, {b / 10.0, b, 10.0 * b, 1.0},
                                 [](double lambda) { return std::atan(lambda); });
    const Pair integrals = integrate_segments(f, pts, rel_tol);
    const double den = integrals.den;
    const double num = integrals.num;
    const double log_norm = std::log(2.0 / kPi) - 0.5 * std::log(2.0 * kPi);
    return {std::log(den) + ref_den + log_norm, x * std::exp(ref_num - ref_den) * num / den};
}

// Laplace scale mixture: p(y) = (2 / pi^1.5) int_0^inf D(a / sqrt2) e^{-a y} da at tau = 1,
// rewritten with u = a y so the exponential factor has unit scale.
MixtureIntegrals laplace_mixture(double x, double tau, double rel_tol) {
    const double y = x / tau;
    const double inv = 1.0 / (y * std::numbers::sqrt2);
    auto f = [&](double u) {
        const double d = special::dawson(u * inv) * std::exp(-u);
        return Pair{d, u * d};
    };
    const auto pts = breakpoints(0.0, 800.0, y, {y / 10.0, y, 10.0 * y, 1.0, 10.0, 40.0, 200.0},
                                 [](double u) { return u; });
    const Pair integrals = integrate_segments(f, pts, rel_tol);
    const double den = integrals.den;
    const double num = integrals.num;
    const double log_den = -std::log(tau) + std::log(2.0 / std::pow(kPi, 1.5)) - std::log(y) + std::log(den);
    return {log_den, num / (den * y * tau)};
}

double expint_deriv(double x, double tau) {
    const double z = 0.5 * (x / tau) * (x / tau);
    if (!(z > 0.0)) return std::numeric_limits<double>::infinity();
    const double scale = x / (tau * tau);
    if (z <= 1.0) {
        const double zf = z * special::scaled_expint_e1(z);
        return scale * (1.0 - zf) / zf;
    }
    // zf -> 1 as z grows, so take 1 - zf from the cancellation-free form.
    const double c = special::one_minus_z_scaled_e1(z);
    return scale * c / (1.0 - c);
}

double expint_log_density(double x, double tau) {
    const double z = 0.5 * (x / tau) * (x / tau);
    return -std::log(tau) - 0.5 * std::log(2.0 * kPi * kPi * kPi) +
           std::log(special::scaled_expint_e1(z));
}

void require_positive_finite(double x, double tau) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw InputError("horseshoe evaluation requires finite x > 0");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InputError("horseshoe evaluation requires finite tau > 0");
    }
}

void require_finite(double x) {
    if (!std::isfinite(x)) {
        throw InputError("penalty argument must be finite");
    }
}

}  // namespace

namespace horseshoe {

double log_density_deriv(HorseshoeBackend backend, double x, double tau, double rel_tol) {
    require_positive_finite(x, tau);
    switch (backend) {
        case HorseshoeBackend::cauchy_mixture_quadrature:
            return cauchy_mixture(x, tau, rel_tol).deriv;
        case HorseshoeBackend::laplace_mixture_quadrature:
            return laplace_mixture(x, tau, rel_tol).deriv;
        case HorseshoeBackend::expint_closed_form:
            return expint_deriv(x, tau);
    }
    throw InputError("unknown horseshoe backend");
}

double log_density(HorseshoeBackend backend, double x, double tau, double rel_tol) {
    require_positive_finite(x, tau);
    switch (backend) {
        case HorseshoeBackend::cauchy_mixture_quadrature:
            return cauchy_mixture(x, tau, rel_tol).log_den;
        case HorseshoeBackend::laplace_mixture_quadrature:
            return laplace_mixture(x, tau, rel_tol).log_den;
        case HorseshoeBackend::expint_closed_form:
            return expint_log_density(x, tau);
    }
    throw InputError("unknown horseshoe backend");
}

}  // namespace horseshoe

PenaltyConfig PenaltyConfig::horseshoe(double tau, HorseshoeBackend backend) {
    PenaltyConfig cfg;
    cfg.family = PenaltyFamily::horseshoe;
    cfg.scale = tau;
    cfg.backend = backend;
    return cfg;
}

PenaltyConfig PenaltyConfig::constant(double rho) {
    PenaltyConfig cfg;
    cfg.family = PenaltyFamily::constant;
    cfg.scale = rho;
    return cfg;
}

void PenaltyConfig::validate() const {
    if (!std::isfinite(scale)) {
        throw InputError("penalty scale must be finite");
    }
    if (family == PenaltyFamily::horseshoe) {
        if (!(scale > 0.0)) throw InputError("horseshoe tau must be > 0");
        if (!(quadrature_rel_tol > 0.0 && quadrature_rel_tol <= 1e-4)) {
            throw InputError("quadrature_rel_tol must lie in (0, 1e-4]");
        }
        if (!(deriv_cap > 0.0) || !std::isfinite(deriv_cap)) {
            throw InputError("deriv_cap must be finite and > 0");
        }
    } else if (scale < 0.0) {
        throw InputError("constant penalty rho must be >= 0");
    }
}

std::string to_string(PenaltyFamily family) {
    return family == PenaltyFamily::horseshoe ? "horseshoe" : "constant";
}

std::string to_string(HorseshoeBackend backend) {
    switch (backend) {
        case HorseshoeBackend::cauchy_mixture_quadrature: return "cauchy";
        case HorseshoeBackend::laplace_mixture_quadrature: return "laplace";
        case HorseshoeBackend::expint_closed_form: return "expint";
    }
    return "unknown";
}

PenaltyFamily parse_penalty_family(const std::string& s) {
    if (s == "horseshoe") return PenaltyFamily::horseshoe;
    if (s == "constant") return PenaltyFamily::constant;
    throw InputError("unknown penalty family: " + s);
}

HorseshoeBackend parse_horseshoe_backend(const std::string& s) {
    if (s == "cauchy") return HorseshoeBackend::cauchy_mixture_quadrature;
    if (s == "laplace") return HorseshoeBackend::laplace_mixture_quadrature;
    if (s == "expint") return HorseshoeBackend::expint_closed_form;
    throw InputError("unknown horseshoe backend: " + s);
}

Penalty::Penalty(PenaltyConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.family != PenaltyFamily::horseshoe) return;

    // The derivative is strictly decreasing, so bisect on log|x| for pen'(x) = cap.
    const double tau = cfg_.scale;
    double lo = std::log(tau) - 300.0 * std::numbers::ln10 / 2.0;
    double hi = std::log(tau * 1e3);
    if (expint_deriv(std::exp(hi), tau) >= cfg_.deriv_cap) {
        lo = hi;
    } else {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (expint_deriv(std::exp(mid), tau) > cfg_.deriv_cap) lo = mid;
            else hi = mid;
        }
    }
    cap_point_ = std::exp(hi);
    value_at_cap_ = -horseshoe::log_density(cfg_.backend, cap_point_, tau, cfg_.quadrature_rel_tol);
}

double Penalty::deriv(double x) const {
    require_finite(x);
    if (cfg_.family == PenaltyFamily::constant) return cfg_.scale;
    const double ax = std::abs(x);
    if (ax <= cap_point_) return cfg_.deriv_cap;
    const double raw =
        horseshoe::log_density_deriv(cfg_.backend, ax, cfg_.scale, cfg_.quadrature_rel_tol);
    return std::min(raw, cfg_.deriv_cap);
}

double Penalty::value(double x) const {
    require_finite(x);
    if (cfg_.family == PenaltyFamily::constant) return cfg_.scale * std::abs(x);
    const double ax = std::abs(x);
    if (ax < cap_point_) return value_at_cap_ - cfg_.deriv_cap * (cap_point_ - ax);
    return -horseshoe::log_density(cfg_.backend, ax, cfg_.scale, cfg_.quadrature_rel_tol);
}

double pen_deriv(const PenaltyConfig& cfg, double x) {
    cfg.validate();
    require_finite(x);
    if (cfg.family == PenaltyFamily::constant) return cfg.scale;
    const double ax = std::abs(x);
    if (ax == 0.0) return cfg.deriv_cap;
    return std::min(horseshoe::log_density_deriv(cfg.backend, ax, cfg.scale, cfg.quadrature_rel_tol),
                    cfg.deriv_cap);
}

double pen_value(const PenaltyConfig& cfg, double x) {
    return Penalty(cfg).value(x);
}

PenaltyBounds pen_deriv_bounds(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw InputError("pen_deriv_bounds requires finite x > 0");
    }
    const double lower = 2.0 / (x * std::log1p(2.0 / (x * x))) - x;
    const double upper = 4.0 / (x * std::log1p(4.0 / (x * x))) - x;
    return {x, lower, upper};
}

}  // namespace llagraph
