#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "raytrans/errors.hpp"

namespace raytrans {

using cplx = std::complex<double>;

constexpr double kBoundaryTol = 1e-12;
constexpr double kLambdaMin = 1e-14;
constexpr double kDefaultMaskDelta = 0.05;

// Point of the closed unit disc. Interior points satisfy |z| < 1; boundary
// points carry an explicit flag and must satisfy ||z| - 1| <= 1e-12.
struct DiscPoint {
    double re = 0.0;
    double im = 0.0;
    bool boundary = false;

    DiscPoint() = default;
    DiscPoint(double x, double y, bool on_boundary = false);
    explicit DiscPoint(cplx z, bool on_boundary = false) : DiscPoint(z.real(), z.imag(), on_boundary) {}
    cplx z() const { return {re, im}; }
    double abs2() const { return re * re + im * im; }
};

// Field coefficients of X_lambda = xi d_z + rho d_zbar at a fixed (z, lambda),
// together with the complexified transverse coordinate and its z-partials.
struct ComplexifiedCoeffs {
    cplx xi, rho, s_lambda, ds_dz, ds_dzbar;
};

// Blaschke zeros of xi/rho in the lambda-disc at one point z.
struct ZeroSet {
    struct Zero {
        cplx lambda;
        int multiplicity;
    };
    std::vector<Zero> zeros;
    cplx unimodular_factor{1.0, 0.0};
    DiscPoint at_point;

    int total_multiplicity() const {
        int n = 0;
        for (const auto& zr : zeros) n += zr.multiplicity;
        return n;
    }
};

using PolFn = std::function<cplx(cplx, cplx)>;
using PolPartials = std::function<std::array<cplx, 2>(cplx, cplx)>;

class TypeHReport;

// A rotation-indexed curve family given through its polarized coefficient
// functions. A(z, conj z) = mu(z), B(z, conj z) = conj(mu(z)); complexification
// is the substitution (w1, w2) = (z/lambda, lambda*conj(z)).
//
// Everything is immutable after construction except the per-z zero cache,
// which synchronizes internally (values are deterministic, races benign).
class PolarizedFamily {
public:
    PolarizedFamily() = default;
    // Copies carry the definition but start with fresh caches.
    PolarizedFamily(const PolarizedFamily& o) { copy_surface(o); }
    PolarizedFamily& operator=(const PolarizedFamily& o) {
        if (this != &o) copy_surface(o);
        return *this;
    }

    std::string name;

    PolFn A, B, s_pol, t_pol;
    // Analytic (d/dw1, d/dw2). Empty => Cauchy-circle quadrature fallback.
    PolPartials A_d, B_d, s_pol_d, t_pol_d;

    std::function<cplx(double, double)> curve;                     // (t, s) -> z
    std::function<std::array<double, 2>(cplx)> curve_params;       // z -> (t, s)
    std::function<std::array<double, 2>(double)> t_limits;         // s -> [t0, t1]
    std::array<double, 2> s_range{-1.0, 1.0};

    // Optional closed forms for xi/rho and its lambda-derivative; the generic
    // route through A/B is used when absent.
    std::function<cplx(cplx, cplx)> ratio_fn;          // (z, lambda)
    std::function<cplx(cplx, cplx)> ratio_dlambda_fn;  // (z, lambda)

    // Polarization domain predicate on (w1, w2); empty means all of C^2.
    std::function<bool(cplx, cplx)> domain_ok;
    // Largest phantom support radius for which the whole support stays inside
    // the polarization domain at this lambda (1.0 when unconstrained).
    std::function<double(cplx)> domain_radius;

    // Whether the attenuated reconstruction hypothesis u(z, lambda_i) = 0 is
    // certified for this family (analytically true for euclidean lines).
    bool attenuated_certified = false;

    const ZeroSet& cached_zeros(const DiscPoint& z) const;
    void ensure_type_h() const;  // lazily runs the default check, throws TypeHViolation
    std::shared_ptr<const TypeHReport> type_h_report() const;

private:
    void copy_surface(const PolarizedFamily& o) {
        name = o.name;
        A = o.A;
        B = o.B;
        s_pol = o.s_pol;
        t_pol = o.t_pol;
        A_d = o.A_d;
        B_d = o.B_d;
        s_pol_d = o.s_pol_d;
        t_pol_d = o.t_pol_d;
        curve = o.curve;
        curve_params = o.curve_params;
        t_limits = o.t_limits;
        s_range = o.s_range;
        ratio_fn = o.ratio_fn;
        ratio_dlambda_fn = o.ratio_dlambda_fn;
        domain_ok = o.domain_ok;
        domain_radius = o.domain_radius;
        attenuated_certified = o.attenuated_certified;
        zero_cache_.clear();
        type_h_.reset();
    }

    struct CacheKey {
        std::int64_t qx, qy;
        bool operator==(const CacheKey&) const = default;
    };
    struct CacheKeyHash {
        std::size_t operator()(const CacheKey& k) const {
            return std::hash<std::int64_t>()(k.qx * 1000003 + k.qy);
        }
    };
    mutable std::mutex cache_mtx_;
    mutable std::unordered_map<CacheKey, std::shared_ptr<const ZeroSet>, CacheKeyHash> zero_cache_;
    mutable std::mutex type_h_mtx_;
    mutable std::shared_ptr<const TypeHReport> type_h_;
};

// --- core evaluations -------------------------------------------------------

ComplexifiedCoeffs eval_coeffs(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda);
cplx mu_ratio(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda);
cplx mu_ratio_dlambda(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda);

// |s_z|^2 - |s_zbar|^2 at (z, lambda); positive inside the lambda-disc,
// negative outside.
double jacobian_ds(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda);

// Derivative of a holomorphic callable by Cauchy-circle quadrature (the
// fallback used when a family supplies no analytic partials).
cplx holomorphic_derivative(const std::function<cplx(cplx)>& f, cplx w, double radius = 1e-3, int nodes = 32);

// X_perp s = i(-xi s_z + rho s_zbar) at lambda = e^{i theta}; real for
// admissible families.
double xperp_s(const PolarizedFamily& fam, cplx z, double theta);
// Same contraction applied to the complexified flow coordinate t.
double xperp_t(const PolarizedFamily& fam, cplx z, double theta);

// --- sampled fields and directional derivatives -----------------------------

// Scalar field sampled on a uniform Cartesian grid patch.
struct GridField {
    double x0 = 0.0, y0 = 0.0, h = 1.0;
    int nx = 0, ny = 0;
    std::vector<double> values;  // row-major, index = ix*ny + iy

    double at(int ix, int iy) const { return values[static_cast<std::size_t>(ix) * ny + iy]; }
    double& at(int ix, int iy) { return values[static_cast<std::size_t>(ix) * ny + iy]; }
};

// Directional derivatives by 4th-order centered stencils at the grid node
// nearest to z. X = xi d_z + rho d_zbar; X_perp = i(-xi d_z + rho d_zbar).
cplx apply_X(const PolarizedFamily& fam, const GridField& field, const DiscPoint& z, double theta);
cplx apply_X_perp(const PolarizedFamily& fam, const GridField& field, const DiscPoint& z, double theta);

}  // namespace raytrans
