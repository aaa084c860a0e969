#include "raytrans/inversion.hpp"

#include <cmath>

#include "raytrans/parallel.hpp"
#include "raytrans/zeros.hpp"

namespace raytrans {

ReconImage::ReconImage(int n_, double delta_) : n(n_), delta(delta_) {
    if (n < 8) throw DomainError("ReconImage: grid too small");
    values.assign(static_cast<std::size_t>(n) * n, 0.0);
    mask.assign(static_cast<std::size_t>(n) * n, 0);
    const double rmax = 1.0 - delta;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx z = pixel(i, j);
            if (std::abs(z) <= rmax) mask[static_cast<std::size_t>(i) * n + j] = 1;
        }
}

double poisson_kernel(cplx lambda, double theta) {
    if (std::abs(lambda) >= 1.0) throw DomainError("poisson_kernel: |lambda| must be < 1");
    return (1.0 - std::norm(lambda)) / std::norm(1.0 - std::polar(1.0, -theta) * lambda);
}

cplx select_lambda(const ZeroSet& zs, int lambda_index) {
    if (zs.zeros.empty()) throw DomainError("select_lambda: family has no Blaschke zeros");
    // zeros are sorted by |lambda| then argument; the default picks the first
    // (Poisson weights closest to uniform).
    std::size_t idx = lambda_index < 0 ? 0 : static_cast<std::size_t>(lambda_index);
    if (idx >= zs.zeros.size()) throw DomainError("select_lambda: lambda index out of range");
    return zs.zeros[idx].lambda;
}

namespace {

struct ThetaGeom {
    double w;  // Xperp_theta s
    double s;  // s(z, e^{i theta})
};

ThetaGeom theta_geom(const PolarizedFamily& fam, const DiscPoint& z, double theta) {
    const auto c = eval_coeffs(fam, z, std::polar(1.0, theta));
    return {(cplx(0.0, 1.0) * (-c.xi * c.ds_dz + c.rho * c.ds_dzbar)).real(), c.s_lambda.real()};
}

void validate_family(const Sinogram& sino, const PolarizedFamily& fam) {
    if (sino.family_name != fam.name)
        throw GridMismatch("sinogram was recorded for family '" + sino.family_name + "', not '" +
                           fam.name + "'");
}

// Cubic Lagrange interpolation on four consecutive uniform s-rows.
struct Lagrange4 {
    double v[4], d[4];
    Lagrange4(double u, double ds) {
        // nodes at u = 0,1,2,3 in units of ds
        v[0] = -(u - 1) * (u - 2) * (u - 3) / 6.0;
        v[1] = u * (u - 2) * (u - 3) / 2.0;
        v[2] = -u * (u - 1) * (u - 3) / 2.0;
        v[3] = u * (u - 1) * (u - 2) / 6.0;
        d[0] = -((u - 2) * (u - 3) + (u - 1) * (u - 3) + (u - 1) * (u - 2)) / (6.0 * ds);
        d[1] = ((u - 2) * (u - 3) + u * (u - 3) + u * (u - 2)) / (2.0 * ds);
        d[2] = -((u - 1) * (u - 3) + u * (u - 3) + u * (u - 1)) / (2.0 * ds);
        d[3] = ((u - 1) * (u - 2) + u * (u - 1) + u * (u - 2)) / (6.0 * ds);
    }
};

}  // namespace

ReconImage reconstruct(const Sinogram& sino, const PolarizedFamily& fam, const ReconOptions& opt) {
    if (sino.kind != Sinogram::Kind::plain) throw DomainError("reconstruct: sinogram kind must be plain");
    validate_family(sino, fam);
    fam.ensure_type_h();

    const FilteredSinogram filt = hilbert_s(sino);
    const SGrid& g = sino.grid;
    std::vector<CubicSpline> rows;
    rows.reserve(g.ntheta);
    for (int k = 0; k < g.ntheta; ++k) rows.emplace_back(g.smin, g.ds(), filt.row(k));

    ReconImage img(opt.n, opt.delta);
    img.family_name = fam.name;
    parallel_for(static_cast<std::int64_t>(img.n) * img.n, opt.threads, [&](std::int64_t p0, std::int64_t p1) {
        for (std::int64_t p = p0; p < p1; ++p) {
            const int i = static_cast<int>(p / img.n), j = static_cast<int>(p % img.n);
            if (!img.in_mask(i, j)) continue;
            const DiscPoint z(img.pixel(i, j));
            const cplx lam = select_lambda(fam.cached_zeros(z), opt.lambda_index);
            double acc = 0.0;
            for (int k = 0; k < g.ntheta; ++k) {
                const auto geo = theta_geom(fam, z, g.theta(k));
                acc += poisson_kernel(lam, g.theta(k)) * geo.w * rows[k].deriv(geo.s);
            }
            img.at(i, j) = acc / (2.0 * g.ntheta);
        }
    });
    return img;
}

ReconImage reconstruct_attenuated(const Sinogram& sino_a, const AttenuationMap& a,
                                  const PolarizedFamily& fam, const ReconOptions& opt) {
    if (sino_a.kind != Sinogram::Kind::attenuated)
        throw DomainError("reconstruct_attenuated: sinogram kind must be attenuated");
    validate_family(sino_a, fam);
    fam.ensure_type_h();

    const SGrid& g = sino_a.grid;
    const Sinogram a_sino = ray_transform(a, fam, g, opt.threads);
    const FilteredSinogram filt = build_Ha(sino_a, a_sino);
    std::vector<CubicSpline> rows;
    rows.reserve(g.ntheta);
    for (int k = 0; k < g.ntheta; ++k) rows.emplace_back(g.smin, g.ds(), filt.row(k));

    ReconImage img(opt.n, opt.delta);
    img.family_name = fam.name;

    // Flattened list of masked pixels with their zero selection.
    struct Pix {
        int i, j;
        DiscPoint z;
        cplx lam;
        double az;
    };
    std::vector<Pix> pix;
    pix.reserve(static_cast<std::size_t>(img.n) * img.n);
    for (int i = 0; i < img.n; ++i)
        for (int j = 0; j < img.n; ++j)
            if (img.in_mask(i, j)) {
                Pix q;
                q.i = i;
                q.j = j;
                q.z = DiscPoint(img.pixel(i, j));
                q.az = a(q.z.z());
                pix.push_back(q);
            }
    parallel_for(static_cast<std::int64_t>(pix.size()), opt.threads, [&](std::int64_t p0, std::int64_t p1) {
        for (std::int64_t p = p0; p < p1; ++p)
            pix[p].lam = select_lambda(fam.cached_zeros(pix[p].z), opt.lambda_index);
    });

    std::vector<double> acc(pix.size(), 0.0);
    // Per theta: tabulate D_theta a along the curve grid (running integral per
    // s-row, natural cubic spline in t), then accumulate all pixels.
    std::vector<CubicSpline> drow(g.ns);
    std::vector<char> row_ok(g.ns, 0);
    std::vector<std::array<double, 2>> row_lim(g.ns);
    std::vector<double> row_half(g.ns, 0.0);
    for (int k = 0; k < g.ntheta; ++k) {
        const double theta = g.theta(k);
        const cplx rot = std::polar(1.0, theta);
        parallel_for(g.ns, opt.threads, [&](std::int64_t j0, std::int64_t j1) {
            std::vector<double> dvals(g.nt + 1);
            for (std::int64_t j = j0; j < j1; ++j) {
                const double s = g.s_node(static_cast<int>(j));
                const auto lim = fam.t_limits(s);
                row_lim[j] = lim;
                if (!(lim[1] > lim[0])) {
                    row_ok[j] = 0;
                    continue;
                }
                const double h = (lim[1] - lim[0]) / g.nt;
                double run = 0.0;
                double prev = a(rot * fam.curve(lim[0], s));
                dvals[0] = 0.0;
                for (int l = 1; l <= g.nt; ++l) {
                    const double cur = a(rot * fam.curve(lim[0] + h * l, s));
                    run += 0.5 * h * (prev + cur);
                    dvals[l] = run;
                    prev = cur;
                }
                row_half[j] = 0.5 * run;
                for (int l = 0; l <= g.nt; ++l) dvals[l] -= row_half[j];
                drow[j] = CubicSpline(lim[0], h, dvals);
                row_ok[j] = 1;
            }
        });
        parallel_for(static_cast<std::int64_t>(pix.size()), opt.threads,
                     [&](std::int64_t p0, std::int64_t p1) {
                         for (std::int64_t p = p0; p < p1; ++p) {
                             const Pix& q = pix[p];
                             const auto [tstar, sstar] = fam.curve_params(q.z.z() * std::conj(rot));
                             const auto geo = theta_geom(fam, q.z, theta);
                             const double wt = xperp_t(fam, q.z.z(), theta);
                             // 4-point Lagrange across s-rows for D and dD/ds at (tstar, sstar)
                             const double ds = g.ds();
                             int j0 = static_cast<int>(std::floor((sstar - g.smin) / ds)) - 1;
                             j0 = std::clamp(j0, 0, g.ns - 4);
                             const Lagrange4 L((sstar - g.s_node(j0)) / ds, ds);
                             double Dv = 0.0, Ds = 0.0;
                             for (int m = 0; m < 4; ++m) {
                                 double rowval;
                                 if (!row_ok[j0 + m]) {
                                     rowval = 0.0;
                                 } else {
                                     const auto& lim = row_lim[j0 + m];
                                     const double tc = std::clamp(tstar, lim[0], lim[1]);
                                     rowval = drow[j0 + m](tc);
                                     if (tstar < lim[0])
                                         rowval = -row_half[j0 + m];
                                     else if (tstar > lim[1])
                                         rowval = row_half[j0 + m];
                                 }
                                 Dv += L.v[m] * rowval;
                                 Ds += L.d[m] * rowval;
                             }
                             const double gval = rows[k](geo.s);
                             const double gder = rows[k].deriv(geo.s);
                             const double term =
                                 std::exp(-Dv) * (gder * geo.w - (q.az * wt + Ds * geo.w) * gval);
                             acc[p] += poisson_kernel(q.lam, theta) * term;
                         }
                     });
    }
    for (std::size_t p = 0; p < pix.size(); ++p)
        img.at(pix[p].i, pix[p].j) = acc[p] / (2.0 * g.ntheta);
    return img;
}

cplx jump_field(const Sinogram& sino, const PolarizedFamily& fam, const DiscPoint& z, double theta) {
    validate_family(sino, fam);
    const SGrid& g = sino.grid;
    const double step = 2.0 * M_PI / g.ntheta;
    const int k = static_cast<int>(std::lround(theta / step));
    if (k < 0 || k >= g.ntheta || std::abs(theta - k * step) > 1e-9)
        throw DomainError("jump_field: theta must lie on the sinogram angle grid");
    const FilteredSinogram filt = hilbert_s(sino);
    CubicSpline row(g.smin, g.ds(), filt.row(k));
    const auto [tstar, sstar] = fam.curve_params(z.z() * std::polar(1.0, -theta));
    (void)tstar;
    return cplx(0.0, 1.0) * row(sstar);
}

}  // namespace raytrans
