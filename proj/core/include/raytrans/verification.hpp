#pragma once

#include "raytrans/phantoms.hpp"
#include "raytrans/transforms.hpp"

namespace raytrans {

struct GreensEval {
    DiscPoint z, z0;
    cplx lambda;
    cplx value;
};

// G_lambda(z; z0) = sign(1-|lambda|) * (s_z(z0,lambda)/rho(z0,lambda)) / (pi (s(z,lambda)-s(z0,lambda))).
GreensEval greens_eval(const PolarizedFamily& fam, const DiscPoint& z, const DiscPoint& z0, cplx lambda);

struct SolveOptions {
    int nq = 256;        // midpoint nodes per axis over the support box
    int threads = 0;
};

// u(z,lambda) = integral of G_lambda(z; z0) f(z0) over the disc, by a tensor
// midpoint rule on the support box. The lattice is offset so that z falls on
// a node: the 1/w singular cell then cancels by symmetry and is skipped.
cplx solve_u(const Phantom& f, const PolarizedFamily& fam, const DiscPoint& z, cplx lambda,
             const SolveOptions& opt = {});

// | u(z,lambda0) - Cauchy circle mean |; small values certify holomorphy.
double holomorphy_residual(const Phantom& f, const PolarizedFamily& fam, const DiscPoint& z, cplx lambda0,
                           double radius, int nodes = 64, const SolveOptions& opt = {});

struct BoundaryPair {
    cplx u_plus, u_minus;
    double epsilon_used = 0.0;
};

struct BoundaryComparison {
    BoundaryPair pair;
    cplx rhs_plus, rhs_minus;   // -+ (1/2i) (H I_theta f)(s(z e^{-i theta})) + (D_theta f)(z)
    cplx hilbert_term;          // (H I_theta f)(s(z e^{-i theta}), theta)
    cplx beam_term;             // (D_theta f)(z)
    double richardson_gap = 0.0;
};

struct BoundaryOptions {
    SolveOptions solve{4096, 0};   // the |lambda| -> 1 ridge needs a fine lattice
    double quadrature_tol = 1e-3;
    int ray_ns = 1025;
    int ray_nt = 2048;
};

// u_{+-}(z, e^{i theta}) by Richardson extrapolation of u at
// |lambda| = 1 -+ eps, eps in {0.08, 0.04, 0.02} (eliminates eps and eps^2),
// plus the analytic right-hand sides for comparison.
BoundaryComparison boundary_limits(const Phantom& f, const PolarizedFamily& fam, const DiscPoint& z,
                                   double theta, const BoundaryOptions& opt = {});

struct VerifyCheck {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::string family;
    std::vector<VerifyCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::string to_json() const;
};

// Full numerical screening for one family: admissibility conditions, zero
// structure, transport annihilation, Jacobian signs, Poisson normalization,
// holomorphy and boundary-limit spot checks, and the attenuated-formula
// hypothesis |u(z, lambda_i)| (reported, not failed).
VerifyReport verify_family(const PolarizedFamily& fam, std::uint64_t seed = 0x5EEDF00DULL,
                           int threads = 0, bool quick = false);

}  // namespace raytrans
