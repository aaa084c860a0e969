#include "raytrans/zeros.hpp"

#include <algorithm>
#include <cmath>

namespace raytrans {

namespace {

struct ContourData {
    double winding_raw;
    std::vector<cplx> moments;  // p_k, k = 1..n
};

// (1/2 pi i) * contour integrals of lambda^k r'(lambda)/r(lambda) over |lambda|=1.
ContourData contour_moments(const PolarizedFamily& fam, const DiscPoint& z, int nmax, int nodes) {
    ContourData out;
    out.moments.assign(nmax, cplx(0.0, 0.0));
    cplx w0 = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double phi = 2.0 * M_PI * k / nodes;
        const cplx lam = std::polar(1.0, phi);
        const cplx r = mu_ratio(fam, z, lam);
        const cplx dr = mu_ratio_dlambda(fam, z, lam);
        // dlambda = i lam dphi; (1/2 pi i) integrand dlambda -> mean of lam r'/r.
        const cplx base = dr / r * lam / static_cast<double>(nodes);
        w0 += base;
        cplx lp = lam;
        for (int m = 0; m < nmax; ++m) {
            out.moments[m] += base * lp;
            lp *= lam;
        }
    }
    out.winding_raw = w0.real();
    if (std::abs(w0.imag()) > 1e-6) out.winding_raw = std::nan("");
    return out;
}

std::pair<int, int> integer_winding(const PolarizedFamily& fam, const DiscPoint& z, int nodes) {
    for (int attempt = 0; attempt < 3; ++attempt, nodes *= 2) {
        const auto c = contour_moments(fam, z, 0, nodes);
        if (std::isnan(c.winding_raw)) continue;
        const double n = std::round(c.winding_raw);
        if (std::abs(c.winding_raw - n) < 1e-6 && n >= 0.0) return {static_cast<int>(n), nodes};
    }
    throw NonIntegerWinding("count_zeros: contour winding not integer-close (zero on/near |lambda|=1?)");
}

// Roots of the monic polynomial lambda^n + c[1] lambda^{n-1} + ... + c[n].
std::vector<cplx> durand_kerner(const std::vector<cplx>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n <= 0) return {};
    auto poly = [&](cplx x) {
        cplx v = 1.0;
        for (int i = 1; i <= n; ++i) v = v * x + coeffs[i];
        return v;
    };
    std::vector<cplx> roots(n);
    for (int k = 0; k < n; ++k) roots[k] = std::polar(0.4, 2.0 * M_PI * (k + 0.5) / n + 0.1);
    for (int it = 0; it < 500; ++it) {
        double moved = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx den = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= roots[i] - roots[j];
            if (std::abs(den) < 1e-300) den = 1e-300;
            const cplx step = poly(roots[i]) / den;
            roots[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    return roots;
}

}  // namespace

int count_zeros(const PolarizedFamily& fam, const DiscPoint& z, int contour_nodes) {
    return integer_winding(fam, z, contour_nodes).first;
}

cplx blaschke_eval(const ZeroSet& zs, cplx lambda) {
    cplx v = zs.unimodular_factor;
    for (const auto& zr : zs.zeros) {
        const cplx b = (lambda - zr.lambda) / (1.0 - std::conj(zr.lambda) * lambda);
        for (int m = 0; m < zr.multiplicity; ++m) v *= b;
    }
    return v;
}

ZeroSet find_zeros(const PolarizedFamily& fam, const DiscPoint& z, int contour_nodes) {
    ZeroSet out;
    out.at_point = z;
    const auto [n, nodes_used] = integer_winding(fam, z, contour_nodes);
    if (n == 0) {
        out.unimodular_factor = mu_ratio(fam, z, std::polar(0.73, 0.41));
        return out;
    }

    const auto c = contour_moments(fam, z, n, nodes_used);
    // Newton identities: e_k = (1/k) sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.
    std::vector<cplx> e(n + 1, cplx(0.0, 0.0));
    e[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        cplx acc = 0.0;
        double sgn = 1.0;
        for (int i = 1; i <= k; ++i, sgn = -sgn) acc += sgn * e[k - i] * c.moments[i - 1];
        e[k] = acc / static_cast<double>(k);
    }
    std::vector<cplx> coeffs(n + 1);
    coeffs[0] = 1.0;
    double sgn = -1.0;
    for (int k = 1; k <= n; ++k, sgn = -sgn) coeffs[k] = sgn * e[k];

    auto roots = durand_kerner(coeffs);

    // Cluster near-coincident roots into multiplicities (Durand-Kerner leaves
    // multiple-root copies ~1e-5 apart).
    constexpr double kClusterTol = 1e-4;
    for (const cplx r : roots) {
        bool merged = false;
        for (auto& zr : out.zeros) {
            if (std::abs(r - zr.lambda) < kClusterTol) {
                zr.lambda = (zr.lambda * static_cast<double>(zr.multiplicity) + r) /
                            static_cast<double>(zr.multiplicity + 1);
                zr.multiplicity += 1;
                merged = true;
                break;
            }
        }
        if (!merged) out.zeros.push_back({r, 1});
    }

    // Multiplicity-aware Newton polish on xi/rho.
    for (auto& zr : out.zeros) {
        cplx x = zr.lambda;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            if (std::abs(x) < 1e-12) {  // zero at the origin: exact from the moments
                converged = true;
                break;
            }
            const cplx r = mu_ratio(fam, z, x);
            if (std::abs(r) < 1e-15) {
                converged = true;
                break;
            }
            const cplx dr = mu_ratio_dlambda(fam, z, x);
            if (std::abs(dr) < 1e-300) break;
            const cplx step = static_cast<double>(zr.multiplicity) * r / dr;
            x -= step;
            if (std::abs(step) < 1e-10) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ZeroClusterUnresolved("find_zeros: Newton polish did not converge");
        if (std::abs(x) < 1.0) zr.lambda = x;  // keep the moment estimate if polish left the disc
    }

    // Deterministic order: ascending |lambda|, ties by argument in [0, 2 pi).
    std::sort(out.zeros.begin(), out.zeros.end(), [](const ZeroSet::Zero& a, const ZeroSet::Zero& b) {
        const double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
        if (std::abs(ma - mb) > 1e-13) return ma < mb;
        auto arg2pi = [](cplx w) {
            double t = std::arg(w);
            if (t < 0.0) t += 2.0 * M_PI;
            return t;
        };
        return arg2pi(a.lambda) < arg2pi(b.lambda);
    });

    // Unimodular factor from a probe; pick another probe if the first sits on
    // a zero.
    for (const double probe_arg : {0.41, 1.77, 3.02}) {
        const cplx lam0 = std::polar(0.73, probe_arg);
        ZeroSet tmp = out;
        tmp.unimodular_factor = 1.0;
        const cplx b = blaschke_eval(tmp, lam0);
        if (std::abs(b) < 1e-8) continue;
        out.unimodular_factor = mu_ratio(fam, z, lam0) / b;
        break;
    }
    if (std::abs(std::abs(out.unimodular_factor) - 1.0) > 1e-8)
        throw ZeroClusterUnresolved("find_zeros: |zeta| != 1, zero structure unresolved");
    return out;
}

}  // namespace raytrans
