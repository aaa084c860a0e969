#include "raytrans/geometry.hpp"

#include <cmath>

#include "raytrans/zeros.hpp"

namespace raytrans {

DiscPoint::DiscPoint(double x, double y, bool on_boundary) : re(x), im(y), boundary(on_boundary) {
    const double r2 = x * x + y * y;
    if (on_boundary) {
        if (std::abs(std::sqrt(r2) - 1.0) > kBoundaryTol)
            throw DomainError("DiscPoint: boundary flag requires |z| = 1");
    } else if (r2 >= 1.0) {
        throw DomainError("DiscPoint: interior point requires |z| < 1");
    }
}

namespace {

std::array<cplx, 2> partials_or_fallback(const PolFn& f, const PolPartials& fd, cplx w1, cplx w2) {
    if (fd) return fd(w1, w2);
    const cplx d1 = holomorphic_derivative([&](cplx w) { return f(w, w2); }, w1);
    const cplx d2 = holomorphic_derivative([&](cplx w) { return f(w1, w); }, w2);
    return {d1, d2};
}

void check_domain(const PolarizedFamily& fam, cplx w1, cplx w2) {
    if (fam.domain_ok && !fam.domain_ok(w1, w2))
        throw DomainError("polarized evaluation outside the family domain");
}

}  // namespace

cplx holomorphic_derivative(const std::function<cplx(cplx)>& f, cplx w, double radius, int nodes) {
    // f'(w) = (1/2 pi i) contour integral of f / (zeta - w)^2; trapezoid on a
    // small circle is exponentially accurate and avoids subtractive
    // cancellation entirely.
    cplx acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double phi = 2.0 * M_PI * (k + 0.5) / nodes;
        const cplx e = std::polar(1.0, phi);
        acc += f(w + radius * e) / e;
    }
    return acc / (radius * static_cast<double>(nodes));
}

ComplexifiedCoeffs eval_coeffs(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda) {
    if (std::abs(lambda) < kLambdaMin) throw SingularLambda("eval_coeffs: |lambda| < 1e-14");
    const cplx zz = z.z();
    const cplx w1 = zz / lambda;
    const cplx w2 = lambda * std::conj(zz);
    check_domain(fam, w1, w2);
    ComplexifiedCoeffs c;
    c.xi = lambda * fam.A(w1, w2);
    c.rho = fam.B(w1, w2) / lambda;
    c.s_lambda = fam.s_pol(w1, w2);
    const auto d = partials_or_fallback(fam.s_pol, fam.s_pol_d, w1, w2);
    c.ds_dz = d[0] / lambda;
    c.ds_dzbar = d[1] * lambda;
    return c;
}

cplx mu_ratio(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda) {
    if (std::abs(lambda) < kLambdaMin) throw SingularLambda("mu_ratio: |lambda| < 1e-14");
    if (fam.ratio_fn) return fam.ratio_fn(z.z(), lambda);
    const cplx zz = z.z();
    const cplx w1 = zz / lambda;
    const cplx w2 = lambda * std::conj(zz);
    check_domain(fam, w1, w2);
    const cplx rho = fam.B(w1, w2) / lambda;
    if (std::abs(rho) < kLambdaMin) throw DegenerateField("mu_ratio: |rho| < 1e-14");
    return lambda * fam.A(w1, w2) / rho;
}

cplx mu_ratio_dlambda(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda) {
    if (fam.ratio_dlambda_fn) return fam.ratio_dlambda_fn(z.z(), lambda);
    if (fam.ratio_fn)
        return holomorphic_derivative([&](cplx l) { return fam.ratio_fn(z.z(), l); }, lambda, 2e-4);
    const cplx zz = z.z();
    const cplx zb = std::conj(zz);
    // d/dlambda of lambda^2 A(z/lambda, lambda zbar)/B(...) via the chain rule.
    const cplx w1 = zz / lambda, w2 = lambda * zb;
    check_domain(fam, w1, w2);
    const cplx a = fam.A(w1, w2), b = fam.B(w1, w2);
    if (std::abs(b) < kLambdaMin) throw DegenerateField("mu_ratio_dlambda: |rho| degenerate");
    const auto da = partials_or_fallback(fam.A, fam.A_d, w1, w2);
    const auto db = partials_or_fallback(fam.B, fam.B_d, w1, w2);
    const cplx dw1 = -zz / (lambda * lambda);
    const cplx a_l = da[0] * dw1 + da[1] * zb;
    const cplx b_l = db[0] * dw1 + db[1] * zb;
    const cplx r = lambda * lambda * a / b;
    return r * (2.0 / lambda + a_l / a - b_l / b);
}

double jacobian_ds(const PolarizedFamily& fam, const DiscPoint& z, cplx lambda) {
    const auto c = eval_coeffs(fam, z, lambda);
    return std::norm(c.ds_dz) - std::norm(c.ds_dzbar);
}

double xperp_s(const PolarizedFamily& fam, cplx z, double theta) {
    const auto c = eval_coeffs(fam, DiscPoint(z), std::polar(1.0, theta));
    return (cplx(0.0, 1.0) * (-c.xi * c.ds_dz + c.rho * c.ds_dzbar)).real();
}

double xperp_t(const PolarizedFamily& fam, cplx z, double theta) {
    const cplx lambda = std::polar(1.0, theta);
    const cplx w1 = z / lambda;
    const cplx w2 = lambda * std::conj(z);
    check_domain(fam, w1, w2);
    const cplx xi = lambda * fam.A(w1, w2);
    const cplx rho = fam.B(w1, w2) / lambda;
    const auto d = partials_or_fallback(fam.t_pol, fam.t_pol_d, w1, w2);
    const cplx t_z = d[0] / lambda;
    const cplx t_zb = d[1] * lambda;
    return (cplx(0.0, 1.0) * (-xi * t_z + rho * t_zb)).real();
}

namespace {

// 4th-order first-derivative stencil along one grid axis.
double stencil_d1(const GridField& f, int ix, int iy, int axis) {
    auto v = [&](int k) { return axis == 0 ? f.at(ix + k, iy) : f.at(ix, iy + k); };
    return (8.0 * (v(1) - v(-1)) - (v(2) - v(-2))) / (12.0 * f.h);
}

std::pair<int, int> nearest_node(const GridField& f, const DiscPoint& z) {
    if (f.nx < 5 || f.ny < 5) throw GridBoundary("apply_X: grid smaller than the stencil");
    const int ix = static_cast<int>(std::lround((z.re - f.x0) / f.h));
    const int iy = static_cast<int>(std::lround((z.im - f.y0) / f.h));
    if (ix < 2 || iy < 2 || ix > f.nx - 3 || iy > f.ny - 3)
        throw GridBoundary("apply_X: stencil exits the sampled region");
    return {ix, iy};
}

}  // namespace

cplx apply_X(const PolarizedFamily& fam, const GridField& field, const DiscPoint& z, double theta) {
    const auto [ix, iy] = nearest_node(field, z);
    const DiscPoint zn(field.x0 + ix * field.h, field.y0 + iy * field.h);
    const auto c = eval_coeffs(fam, zn, std::polar(1.0, theta));
    const double ux = stencil_d1(field, ix, iy, 0);
    const double uy = stencil_d1(field, ix, iy, 1);
    const cplx uz = cplx(ux, -uy) / 2.0;
    const cplx uzb = cplx(ux, uy) / 2.0;
    return c.xi * uz + c.rho * uzb;
}

cplx apply_X_perp(const PolarizedFamily& fam, const GridField& field, const DiscPoint& z, double theta) {
    const auto [ix, iy] = nearest_node(field, z);
    const DiscPoint zn(field.x0 + ix * field.h, field.y0 + iy * field.h);
    const auto c = eval_coeffs(fam, zn, std::polar(1.0, theta));
    const double ux = stencil_d1(field, ix, iy, 0);
    const double uy = stencil_d1(field, ix, iy, 1);
    const cplx uz = cplx(ux, -uy) / 2.0;
    const cplx uzb = cplx(ux, uy) / 2.0;
    return cplx(0.0, 1.0) * (-c.xi * uz + c.rho * uzb);
}

const ZeroSet& PolarizedFamily::cached_zeros(const DiscPoint& z) const {
    // Quantization at 1e-9 keeps reuse error far below every stated tolerance
    // while still coalescing repeated queries at the same pixel.
    const CacheKey key{static_cast<std::int64_t>(std::llround(z.re * 1e9)),
                       static_cast<std::int64_t>(std::llround(z.im * 1e9))};
    {
        std::lock_guard<std::mutex> g(cache_mtx_);
        auto it = zero_cache_.find(key);
        if (it != zero_cache_.end()) return *it->second;
    }
    auto fresh = std::make_shared<const ZeroSet>(find_zeros(*this, z));
    std::lock_guard<std::mutex> g(cache_mtx_);
    auto [it, inserted] = zero_cache_.emplace(key, std::move(fresh));
    return *it->second;
}

void PolarizedFamily::ensure_type_h() const {
    auto rep = type_h_report();
    if (!rep->all_pass()) {
        std::string what = "family '" + name + "' fails admissibility:";
        for (const auto& c : rep->conditions)
            if (!c.pass) what += " [" + c.name + "]";
        throw TypeHViolation(what);
    }
}

std::shared_ptr<const TypeHReport> PolarizedFamily::type_h_report() const {
    std::lock_guard<std::mutex> g(type_h_mtx_);
    if (!type_h_)
        type_h_ = std::make_shared<const TypeHReport>(
            check_type_h(*this, default_type_h_points(), default_type_h_lambdas()));
    return type_h_;
}

}  // namespace raytrans
