#pragma once

#include <string>

namespace llagraph {

enum class PenaltyFamily { horseshoe, constant };

/// Numerical route used to evaluate the horseshoe marginal and its log-derivative.
enum class HorseshoeBackend {
    /// Normal scale mixture over a half-Cauchy local scale, theta = atan(lambda) substitution.
    cauchy_mixture_quadrature,
    /// Laplace scale mixture whose mixing density is written with Dawson's integral.
    laplace_mixture_quadrature,
    /// Exponential-integral closed form of the marginal.
    expint_closed_form,
};

struct PenaltyConfig {
    PenaltyFamily family = PenaltyFamily::horseshoe;
    /// Global scale tau (horseshoe) or constant weight rho (constant).
    double scale = 1.0;
    HorseshoeBackend backend = HorseshoeBackend::expint_closed_form;
    double quadrature_rel_tol = 1e-9;
    /// Weight returned where the horseshoe derivative diverges (at and near zero).
    double deriv_cap = 1e12;

    static PenaltyConfig horseshoe(double tau,
                                   HorseshoeBackend backend = HorseshoeBackend::expint_closed_form);
    static PenaltyConfig constant(double rho);

    /// Throws InputError on an invalid combination.
    void validate() const;
};

std::string to_string(PenaltyFamily family);
std::string to_string(HorseshoeBackend backend);
PenaltyFamily parse_penalty_family(const std::string& s);
HorseshoeBackend parse_horseshoe_backend(const std::string& s);

/// Evaluator bound to one configuration. Construction precomputes the point
/// below which the horseshoe derivative is capped, so reuse one instance for
/// repeated queries.
///
/// For the horseshoe, value(x) = -log p(|x| | tau) exactly for |x| at or above
/// the cap point and continues linearly with slope deriv_cap below it, so the
/// penalty stays concave in |x| and finite at zero.
class Penalty {
public:
    explicit Penalty(PenaltyConfig cfg);

    const PenaltyConfig& config() const { return cfg_; }

    double deriv(double x) const;
    double value(double x) const;

    /// |x| below which deriv() returns the cap (0 for the constant family).
    double cap_point() const { return cap_point_; }

private:
    PenaltyConfig cfg_;
    double cap_point_ = 0.0;
    double value_at_cap_ = 0.0;
};

/// pen'(|x|); see Penalty::deriv.
double pen_deriv(const PenaltyConfig& cfg, double x);

/// pen(|x|) = -log p(|x|); see Penalty::value.
double pen_value(const PenaltyConfig& cfg, double x);

/// Analytic sandwich for the tau = 1 horseshoe derivative.
struct PenaltyBounds {
    double x;
    double lower;
    double upper;
};

PenaltyBounds pen_deriv_bounds(double x);

namespace horseshoe {

/// Uncapped -d/dx log p(x | tau) for x > 0.
double log_density_deriv(HorseshoeBackend backend, double x, double tau, double rel_tol = 1e-9);

/// log p(x | tau) for x > 0, normalized.
double log_density(HorseshoeBackend backend, double x, double tau, double rel_tol = 1e-9);

}  // namespace horseshoe

}  // namespace llagraph
