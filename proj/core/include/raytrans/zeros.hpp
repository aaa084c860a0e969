#pragma once

#include <optional>

#include "raytrans/geometry.hpp"

namespace raytrans {

constexpr int kDefaultContourNodes = 2048;

// Argument-principle count of zeros of xi/rho inside |lambda| = 1.
// Trapezoid contour quadrature; the node count doubles (twice) on a
// non-integer winding before NonIntegerWinding is thrown.
int count_zeros(const PolarizedFamily& fam, const DiscPoint& z, int contour_nodes = kDefaultContourNodes);

// Locates all zeros with multiplicities via contour power-sum moments,
// Newton's identities and a multiplicity-aware Newton polish, then recovers
// the unimodular factor zeta from a probe point.
ZeroSet find_zeros(const PolarizedFamily& fam, const DiscPoint& z, int contour_nodes = kDefaultContourNodes);

// Reconstruct xi/rho from a ZeroSet: zeta * prod ((lambda-l_i)/(1-conj(l_i) lambda))^{m_i}.
cplx blaschke_eval(const ZeroSet& zs, cplx lambda);

struct TypeHCondition {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double threshold = 0.0;
    std::string detail;
};

class TypeHReport {
public:
    std::vector<TypeHCondition> conditions;
    std::string family;
    bool all_pass() const {
        for (const auto& c : conditions)
            if (!c.pass) return false;
        return true;
    }
};

// Numerically screens the four admissibility conditions plus the boundary
// modulus consequence |xi/rho| = 1 on |lambda| = 1. Always returns a report;
// failures are recorded, not thrown.
TypeHReport check_type_h(const PolarizedFamily& fam,
                         const std::vector<DiscPoint>& sample_points,
                         const std::vector<cplx>& sample_lambdas);

// Default sample sets used by ensure_type_h().
std::vector<DiscPoint> default_type_h_points();
std::vector<cplx> default_type_h_lambdas();

}  // namespace raytrans
