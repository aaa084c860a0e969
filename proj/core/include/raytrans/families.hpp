#pragma once

#include <memory>

#include "raytrans/geometry.hpp"

namespace raytrans {

// Euclidean lines: gamma(t,s) = t - i s, mu = 1, s(z) = -Im z, t(z) = Re z.
// The sign of s makes X_perp_1 s = +1 under X_perp = i(-xi d_z + rho d_zbar).
std::shared_ptr<const PolarizedFamily> lines_family();

// Geodesics of the Poincare disc orthogonal to the real diameter, rotated by
// e^{i theta}. Transverse index v in (-1,1) and flow scaled so that all
// complexified coefficients are rational in lambda:
//   A(w1,w2) = (i/2)(1-w1^2)(1-w1 w2)/(1+w1 w2),
//   v_pol    = (w1+w2)/(1+w1 w2),
//   xi/rho   = (z^2-lambda^2)/(1-conj(z)^2 lambda^2)   (zeros at +-z).
std::shared_ptr<const PolarizedFamily> hyperbolic_family();

// Family defined by a JSON file of rational-function coefficients for
// A, B, s_pol, t_pol in (w1, w2). Curves are traced by integrating
// dz/dt = mu(z) from a Newton-solved seed point.
std::shared_ptr<const PolarizedFamily> family_from_json(const std::string& json_text);
std::shared_ptr<const PolarizedFamily> family_from_json_file(const std::string& path);

// Lookup by name: "euclidean-lines" ("lines"), "hyperbolic-geodesics"
// ("hyperbolic"), or a path to a JSON definition file.
std::shared_ptr<const PolarizedFamily> family_by_name(const std::string& name);

}  // namespace raytrans
