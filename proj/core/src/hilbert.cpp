#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "raytrans/transforms.hpp"

namespace raytrans {

namespace {

// FFTW planning is not thread safe; execution on distinct arrays is.
struct PlanPair {
    fftw_plan fwd = nullptr, bwd = nullptr;
};

std::mutex g_plan_mtx;
std::map<int, PlanPair> g_plans;

PlanPair plans_for(int m) {
    std::lock_guard<std::mutex> g(g_plan_mtx);
    auto it = g_plans.find(m);
    if (it != g_plans.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(m);
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_1d(m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(buf);
    g_plans.emplace(m, p);
    return p;
}

}  // namespace

std::vector<double> hilbert_line(std::span<const double> row, double spacing, int pad_factor,
                                 int correction_terms) {
    const int n = static_cast<int>(row.size());
    int m = 1;
    while (m < pad_factor * n) m <<= 1;
    const PlanPair plans = plans_for(m);

    std::vector<fftw_complex> buf(m);
    for (int i = 0; i < n; ++i) {
        buf[i][0] = row[i];
        buf[i][1] = 0.0;
    }
    for (int i = n; i < m; ++i) buf[i][0] = buf[i][1] = 0.0;
    fftw_execute_dft(plans.fwd, buf.data(), buf.data());
    // multiplier -i sign(omega); DC and Nyquist annihilated
    buf[0][0] = buf[0][1] = 0.0;
    for (int k = 1; k < m / 2; ++k) {
        // (a+bi) * (-i) = b - ai
        double a = buf[k][0], b = buf[k][1];
        buf[k][0] = b;
        buf[k][1] = -a;
        a = buf[m - k][0];
        b = buf[m - k][1];
        buf[m - k][0] = -b;
        buf[m - k][1] = a;
    }
    buf[m / 2][0] = buf[m / 2][1] = 0.0;
    fftw_execute_dft(plans.bwd, buf.data(), buf.data());

    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = buf[i][0] / m;

    if (correction_terms > 0) {
        // The DFT computes the periodized transform, kernel (pi/L) cot(pi u/L)
        // with L = m*spacing. Restore the line kernel 1/u through the cot
        // expansion: 1/u - (pi/L)^2 u/3 - (pi/L)^4 u^3/45 - 2(pi/L)^6 u^5/945.
        const double L = m * spacing;
        double mom[6] = {0, 0, 0, 0, 0, 0};
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? spacing / 2 : spacing;
            const double y = i * spacing;
            double yp = 1.0;
            for (int p = 0; p < 6; ++p, yp *= y) mom[p] += w * row[i] * yp;
        }
        const double c1 = std::pow(M_PI / L, 2) / 3.0;
        const double c2 = std::pow(M_PI / L, 4) / 45.0;
        const double c3 = 2.0 * std::pow(M_PI / L, 6) / 945.0;
        for (int i = 0; i < n; ++i) {
            const double x = i * spacing;
            double corr = c1 * (x * mom[0] - mom[1]);
            if (correction_terms > 1)
                corr += c2 * (x * x * x * mom[0] - 3 * x * x * mom[1] + 3 * x * mom[2] - mom[3]);
            if (correction_terms > 2)
                corr += c3 * (std::pow(x, 5) * mom[0] - 5 * std::pow(x, 4) * mom[1] +
                              10 * x * x * x * mom[2] - 10 * x * x * mom[3] + 5 * x * mom[4] - mom[5]);
            out[i] += corr / M_PI;
        }
    }
    return out;
}

FilteredSinogram hilbert_s(const Sinogram& sino) {
    const int ns = sino.grid.ns;
    for (int k = 0; k < sino.grid.ntheta; ++k) {
        if (std::abs(sino.at(k, 0)) >= 1e-9 || std::abs(sino.at(k, ns - 1)) >= 1e-9)
            throw SupportViolation("hilbert_s: row has not decayed below 1e-9 at the grid ends");
    }
    FilteredSinogram out;
    out.grid = sino.grid;
    out.filter_kind = FilteredSinogram::Filter::hilbert;
    out.family_name = sino.family_name;
    out.values.resize(sino.values.size());
    for (int k = 0; k < sino.grid.ntheta; ++k) {
        const auto f = hilbert_line(sino.row(k), sino.grid.ds());
        std::copy(f.begin(), f.end(), out.values.begin() + static_cast<std::size_t>(k) * ns);
    }
    return out;
}

FilteredSinogram build_Ha(const Sinogram& sino_a, const Sinogram& a_sino) {
    if (!(sino_a.grid == a_sino.grid) || sino_a.family_name != a_sino.family_name)
        throw GridMismatch("build_Ha: sinogram grids or families differ");
    if (a_sino.kind != Sinogram::Kind::plain)
        throw GridMismatch("build_Ha: a_sino must be the plain ray transform of the attenuation");
    const int ns = sino_a.grid.ns;
    const double ds = sino_a.grid.ds();
    FilteredSinogram out;
    out.grid = sino_a.grid;
    out.filter_kind = FilteredSinogram::Filter::h_a;
    out.family_name = sino_a.family_name;
    out.values.resize(sino_a.values.size());
    std::vector<double> cg(ns), sg(ns);
    for (int k = 0; k < sino_a.grid.ntheta; ++k) {
        const auto ha = hilbert_line(a_sino.row(k), ds);
        for (int j = 0; j < ns; ++j) {
            const double c = std::cos(ha[j] / 2.0), s = std::sin(ha[j] / 2.0);
            cg[j] = c * sino_a.at(k, j);
            sg[j] = s * sino_a.at(k, j);
        }
        const auto hc = hilbert_line(cg, ds);
        const auto hs = hilbert_line(sg, ds);
        for (int j = 0; j < ns; ++j) {
            const double c = std::cos(ha[j] / 2.0), s = std::sin(ha[j] / 2.0);
            out.values[static_cast<std::size_t>(k) * ns + j] = c * hc[j] + s * hs[j];
        }
    }
    return out;
}

}  // namespace raytrans
