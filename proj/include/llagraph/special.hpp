#pragma once

namespace llagraph::special {

/// Exponential integral E1(z) for z > 0.
double expint_e1(double z);

/// e^z E1(z) for z > 0; finite for every representable z.
double scaled_expint_e1(double z);

/// 1 - z e^z E1(z) for z > 0, without the cancellation of the direct form at large z.
double one_minus_z_scaled_e1(double z);

/// Dawson's integral D(y) = exp(-y^2) * int_0^y exp(t^2) dt.
double dawson(double y);

}  // namespace llagraph::special
