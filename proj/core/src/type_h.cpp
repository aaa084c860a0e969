#include <algorithm>
#include <climits>
#include <cmath>

#include "raytrans/zeros.hpp"

namespace raytrans {

namespace {

// Winding number of a closed sample loop by unwrapped phase increments.
long winding_number(const std::vector<cplx>& samples) {
    double total = 0.0;
    const std::size_t n = samples.size();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx a = samples[k], b = samples[(k + 1) % n];
        if (std::abs(a) < 1e-300 || std::abs(b) < 1e-300) return LONG_MAX;
        double d = std::arg(b / a);
        total += d;
    }
    return std::lround(total / (2.0 * M_PI));
}

double median_abs(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

std::vector<DiscPoint> default_type_h_points() {
    std::vector<DiscPoint> pts;
    const double radii[] = {0.15, 0.45, 0.68};
    int k = 0;
    for (double r : radii)
        for (int j = 0; j < 3; ++j, ++k)
            pts.emplace_back(r * std::cos(0.7 * k + 0.3), r * std::sin(0.7 * k + 0.3));
    return pts;
}

std::vector<cplx> default_type_h_lambdas() {
    std::vector<cplx> ls;
    for (double r : {0.3, 0.6, 0.9})
        for (int j = 0; j < 8; ++j) ls.push_back(std::polar(r, 2.0 * M_PI * j / 8 + 0.13));
    for (int j = 0; j < 16; ++j) ls.push_back(std::polar(1.0, 2.0 * M_PI * j / 16));
    return ls;
}

TypeHReport check_type_h(const PolarizedFamily& fam,
                         const std::vector<DiscPoint>& sample_points,
                         const std::vector<cplx>& sample_lambdas) {
    TypeHReport rep;
    rep.family = fam.name;

    auto xi_at = [&](const DiscPoint& z, cplx lam) { return eval_coeffs(fam, z, lam).xi; };
    auto rho_at = [&](const DiscPoint& z, cplx lam) { return eval_coeffs(fam, z, lam).rho; };

    // (i) lambda-holomorphy of xi on the admissible annulus: two-circle Cauchy
    // reproduction (the inner circle subtracts any pole part at lambda = 0).
    {
        TypeHCondition c;
        c.name = "xi_holomorphic_in_lambda";
        c.threshold = 1e-6;
        double worst = 0.0;
        bool finite = true;
        const int nn = 512;
        const double r1 = 0.55, r2 = 0.98;
        for (const auto& z : sample_points) {
            std::vector<cplx> outer(nn), inner(nn);
            for (int k = 0; k < nn; ++k) {
                outer[k] = xi_at(z, std::polar(r2, 2.0 * M_PI * k / nn));
                inner[k] = xi_at(z, std::polar(r1, 2.0 * M_PI * k / nn));
            }
            double scale = 0.0;
            for (const auto& v : outer) scale = std::max(scale, std::abs(v));
            for (int j = 0; j < 4; ++j) {
                const cplx lam0 = std::polar(0.75, 2.0 * M_PI * j / 4 + 0.31);
                cplx acc = 0.0;
                for (int k = 0; k < nn; ++k) {
                    const cplx lo = std::polar(r2, 2.0 * M_PI * k / nn);
                    const cplx li = std::polar(r1, 2.0 * M_PI * k / nn);
                    acc += outer[k] * lo / (lo - lam0);
                    acc -= inner[k] * li / (li - lam0);
                }
                acc /= static_cast<double>(nn);
                const double res = std::abs(acc - xi_at(z, lam0));
                if (!std::isfinite(res)) finite = false;
                worst = std::max(worst, res / std::max(scale, 1e-30));
            }
        }
        c.residual = worst;
        c.pass = finite && worst < c.threshold;
        c.detail = "annulus Cauchy reproduction, circles 0.55/0.98";
        rep.conditions.push_back(c);
    }

    // (ii) rho has no zeros in the disc: estimate the pole order p at 0 from
    // |rho| growth, then winding(lambda^p rho) over |lambda|=1 must be 0.
    {
        TypeHCondition c;
        c.name = "rho_zero_free";
        c.threshold = 0.5;
        double worst = 0.0;
        bool ok = true;
        const int nn = 2048;
        for (const auto& z : sample_points) {
            std::vector<double> m1, m2;
            for (int k = 0; k < 64; ++k) {
                m1.push_back(std::abs(rho_at(z, std::polar(0.02, 2.0 * M_PI * k / 64))));
                m2.push_back(std::abs(rho_at(z, std::polar(0.04, 2.0 * M_PI * k / 64))));
            }
            const double p_raw = std::log2(median_abs(m1) / median_abs(m2));
            const long p = std::lround(std::max(0.0, p_raw));
            std::vector<cplx> loop(nn);
            for (int k = 0; k < nn; ++k) {
                const cplx lam = std::polar(1.0, 2.0 * M_PI * k / nn);
                loop[k] = std::pow(lam, static_cast<double>(p)) * rho_at(z, lam);
            }
            const long w = winding_number(loop);
            worst = std::max(worst, static_cast<double>(std::labs(w)));
            if (w != 0) ok = false;
        }
        c.residual = worst;
        c.pass = ok;
        c.detail = "pole order at 0 removed, then argument-principle winding on |lambda|=1";
        rep.conditions.push_back(c);
    }

    // (iii) xi/rho holomorphic on the disc with at least one zero, and the
    // boundary-modulus consequence |xi/rho| = 1 on |lambda| = 1.
    {
        TypeHCondition holo;
        holo.name = "ratio_holomorphic_with_zero";
        holo.threshold = 1e-6;
        TypeHCondition mod;
        mod.name = "ratio_boundary_modulus";
        mod.threshold = 1e-10;
        double worst = 0.0, worst_mod = 0.0;
        bool has_zero = true, winding_ok = true;
        const int nn = 2048;
        for (const auto& z : sample_points) {
            std::vector<cplx> bd(nn);
            double scale = 0.0;
            for (int k = 0; k < nn; ++k) {
                bd[k] = mu_ratio(fam, z, std::polar(1.0, 2.0 * M_PI * k / nn));
                scale = std::max(scale, std::abs(bd[k]));
            }
            for (int k = 0; k < 512; ++k) {
                const double m = std::abs(mu_ratio(fam, z, std::polar(1.0, 2.0 * M_PI * k / 512)));
                worst_mod = std::max(worst_mod, std::abs(m - 1.0));
            }
            for (const cplx lam0 : {std::polar(0.35, 0.77), std::polar(0.62, 2.45)}) {
                cplx acc = 0.0;
                for (int k = 0; k < nn; ++k) {
                    const cplx lam = std::polar(1.0, 2.0 * M_PI * k / nn);
                    acc += bd[k] * lam / (lam - lam0);
                }
                acc /= static_cast<double>(nn);
                worst = std::max(worst, std::abs(acc - mu_ratio(fam, z, lam0)) / std::max(scale, 1e-30));
            }
            try {
                if (count_zeros(fam, z) < 1) has_zero = false;
            } catch (const NonIntegerWinding&) {
                winding_ok = false;
            }
        }
        holo.residual = worst;
        holo.pass = worst < holo.threshold && has_zero && winding_ok;
        holo.detail = has_zero ? "Cauchy reproduction from |lambda|=1; count_zeros >= 1"
                               : "no zero of xi/rho found in the disc";
        mod.residual = worst_mod;
        mod.pass = worst_mod < mod.threshold;
        mod.detail = "max | |xi/rho| - 1 | over 512 boundary nodes";
        rep.conditions.push_back(holo);
        rep.conditions.push_back(mod);
    }

    // (iv) meromorphy proxy for s, s_z, s_zbar: finite on the admissible
    // samples and geometric Laurent-tail decay on a circle near |lambda| = 1.
    {
        TypeHCondition c;
        c.name = "s_meromorphic_in_lambda";
        c.threshold = 1e-8;
        double worst = 0.0;
        bool finite = true;
        const int nn = 512;
        for (const auto& z : sample_points) {
            for (const cplx lam : sample_lambdas) {
                if (std::abs(lam) < 0.02) continue;
                try {
                    const auto cc = eval_coeffs(fam, z, lam);
                    if (!std::isfinite(std::abs(cc.s_lambda)) || !std::isfinite(std::abs(cc.ds_dz)) ||
                        !std::isfinite(std::abs(cc.ds_dzbar)))
                        finite = false;
                } catch (const DomainError&) {
                    // admissibility is allowed to exclude isolated samples
                }
            }
            for (int which = 0; which < 3; ++which) {
                std::vector<cplx> ring(nn);
                for (int k = 0; k < nn; ++k) {
                    const auto cc = eval_coeffs(fam, z, std::polar(0.95, 2.0 * M_PI * k / nn));
                    ring[k] = which == 0 ? cc.s_lambda : (which == 1 ? cc.ds_dz : cc.ds_dzbar);
                }
                // DFT; tail = highest-frequency quartile.
                double cmax = 1e-30, tail = 0.0;
                for (int m = -nn / 2; m < nn / 2; ++m) {
                    cplx acc = 0.0;
                    for (int k = 0; k < nn; ++k)
                        acc += ring[k] * std::polar(1.0, -2.0 * M_PI * m * k / nn);
                    const double a = std::abs(acc) / nn;
                    cmax = std::max(cmax, a);
                    if (std::abs(m) >= 3 * nn / 8) tail = std::max(tail, a);
                }
                worst = std::max(worst, tail / cmax);
            }
        }
        c.residual = worst;
        c.pass = finite && worst < c.threshold;
        c.detail = "Laurent tail decay on |lambda| = 0.95 plus finiteness on samples";
        rep.conditions.push_back(c);
    }

    return rep;
}

}  // namespace raytrans
