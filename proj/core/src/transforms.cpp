#include "raytrans/transforms.hpp"

#include <cmath>

#include "raytrans/parallel.hpp"

namespace raytrans {

SGrid::SGrid(int ntheta_, int ns_, double smin_, double smax_, int nt_)
    : ntheta(ntheta_), ns(ns_), smin(smin_), smax(smax_), nt(nt_) {
    if (ntheta < 4 || ntheta % 2 != 0) throw DomainError("SGrid: ntheta must be even and >= 4");
    if (ns < 9 || ns % 2 == 0) throw DomainError("SGrid: ns must be odd and >= 9");
    if (!(smin < smax)) throw DomainError("SGrid: s range must be increasing");
    if (nt < 8) throw DomainError("SGrid: nt too small");
}

SGrid SGrid::for_family(const PolarizedFamily& fam, int ntheta, int ns, int nt) {
    return SGrid(ntheta, ns, fam.s_range[0], fam.s_range[1], nt);
}

Sinogram ray_transform(const Phantom& f, const PolarizedFamily& fam, const SGrid& grid, int threads) {
    if (f.support_radius() > 1.0 - kDefaultMaskDelta / 2.0)
        throw SupportViolation("ray_transform: phantom support reaches within delta/2 of the boundary");
    Sinogram out;
    out.grid = grid;
    out.kind = Sinogram::Kind::plain;
    out.family_name = fam.name;
    out.values.assign(static_cast<std::size_t>(grid.ntheta) * grid.ns, 0.0);
    parallel_for(grid.ntheta, threads, [&](std::int64_t k0, std::int64_t k1) {
        for (std::int64_t k = k0; k < k1; ++k) {
            const cplx rot = std::polar(1.0, grid.theta(static_cast<int>(k)));
            for (int j = 0; j < grid.ns; ++j) {
                const double s = grid.s_node(j);
                const auto [t0, t1] = fam.t_limits(s);
                if (!(t1 > t0)) continue;
                const double h = (t1 - t0) / grid.nt;
                double acc = 0.5 * (f(rot * fam.curve(t0, s)) + f(rot * fam.curve(t1, s)));
                for (int l = 1; l < grid.nt; ++l) acc += f(rot * fam.curve(t0 + h * l, s));
                out.at(static_cast<int>(k), j) = acc * h;
            }
        }
    });
    return out;
}

double beam_transform(const std::function<double(cplx)>& psi, const PolarizedFamily& fam, const DiscPoint& z,
                      double theta, int nt) {
    const cplx rot = std::polar(1.0, theta);
    const auto [tstar, sstar] = fam.curve_params(z.z() * std::conj(rot));
    const auto [t0, t1] = fam.t_limits(sstar);
    if (!(t1 > t0)) return 0.0;
    auto seg = [&](double a, double b) {
        if (!(b > a)) return 0.0;
        const double h = (b - a) / nt;
        double acc = 0.5 * (psi(rot * fam.curve(a, sstar)) + psi(rot * fam.curve(b, sstar)));
        for (int l = 1; l < nt; ++l) acc += psi(rot * fam.curve(a + h * l, sstar));
        return acc * h;
    };
    const double tc = std::clamp(tstar, t0, t1);
    return 0.5 * (seg(t0, tc) - seg(tc, t1));
}

Sinogram attenuated_ray_transform(const Phantom& f, const AttenuationMap& a, const PolarizedFamily& fam,
                                  const SGrid& grid, int threads) {
    if (f.support_radius() > 1.0 - kDefaultMaskDelta / 2.0 || a.support_radius() > 1.0 - kDefaultMaskDelta / 2.0)
        throw SupportViolation("attenuated_ray_transform: support reaches within delta/2 of the boundary");
    Sinogram out;
    out.grid = grid;
    out.kind = Sinogram::Kind::attenuated;
    out.family_name = fam.name;
    out.values.assign(static_cast<std::size_t>(grid.ntheta) * grid.ns, 0.0);
    parallel_for(grid.ntheta, threads, [&](std::int64_t k0, std::int64_t k1) {
        std::vector<double> fv(grid.nt + 1), av(grid.nt + 1), cum(grid.nt + 1);
        for (std::int64_t k = k0; k < k1; ++k) {
            const cplx rot = std::polar(1.0, grid.theta(static_cast<int>(k)));
            for (int j = 0; j < grid.ns; ++j) {
                const double s = grid.s_node(j);
                const auto [t0, t1] = fam.t_limits(s);
                if (!(t1 > t0)) continue;
                const double h = (t1 - t0) / grid.nt;
                for (int l = 0; l <= grid.nt; ++l) {
                    const cplx zc = rot * fam.curve(t0 + h * l, s);
                    fv[l] = f(zc);
                    av[l] = a(zc);
                }
                cum[0] = 0.0;  // trapezoidal running integral of a along the curve
                for (int l = 1; l <= grid.nt; ++l) cum[l] = cum[l - 1] + 0.5 * h * (av[l - 1] + av[l]);
                const double half_total = 0.5 * cum[grid.nt];
                double acc = 0.5 * (fv[0] * std::exp(cum[0] - half_total) +
                                    fv[grid.nt] * std::exp(cum[grid.nt] - half_total));
                for (int l = 1; l < grid.nt; ++l) acc += fv[l] * std::exp(cum[l] - half_total);
                out.at(static_cast<int>(k), j) = acc * h;
            }
        }
    });
    return out;
}

}  // namespace raytrans
