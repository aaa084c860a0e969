#pragma once

#include <span>
#include <string>
#include <vector>

#include "raytrans/geometry.hpp"
#include "raytrans/phantoms.hpp"
#include "raytrans/spline.hpp"

namespace raytrans {

// Sampling grid for sinograms: uniform angles on [0, 2 pi), uniform transverse
// nodes over the family's s-range, fixed quadrature subdivision along curves.
struct SGrid {
    int ntheta = 0;
    int ns = 0;
    double smin = 0.0, smax = 0.0;
    int nt = 1024;  // trapezoid subdivisions per curve

    SGrid() = default;
    SGrid(int ntheta_, int ns_, double smin_, double smax_, int nt_ = 1024);
    static SGrid for_family(const PolarizedFamily& fam, int ntheta, int ns, int nt = 1024);

    double theta(int k) const { return 2.0 * M_PI * k / ntheta; }
    double s_node(int j) const { return smin + (smax - smin) * j / (ns - 1); }
    double ds() const { return (smax - smin) / (ns - 1); }
    bool operator==(const SGrid& o) const {
        return ntheta == o.ntheta && ns == o.ns && smin == o.smin && smax == o.smax;
    }
};

struct Sinogram {
    enum class Kind { plain, attenuated };
    SGrid grid;
    Kind kind = Kind::plain;
    std::string family_name;
    std::vector<double> values;  // ntheta x ns, row-major

    double& at(int k, int j) { return values[static_cast<std::size_t>(k) * grid.ns + j]; }
    double at(int k, int j) const { return values[static_cast<std::size_t>(k) * grid.ns + j]; }
    std::span<const double> row(int k) const {
        return {values.data() + static_cast<std::size_t>(k) * grid.ns, static_cast<std::size_t>(grid.ns)};
    }
};

struct FilteredSinogram {
    enum class Filter { hilbert, h_a };
    SGrid grid;
    Filter filter_kind = Filter::hilbert;
    std::string family_name;
    std::vector<double> values;

    double at(int k, int j) const { return values[static_cast<std::size_t>(k) * grid.ns + j]; }
    std::span<const double> row(int k) const {
        return {values.data() + static_cast<std::size_t>(k) * grid.ns, static_cast<std::size_t>(grid.ns)};
    }
};

// Hilbert transform of one uniformly sampled row, convention
// (H psi)(x) = (1/pi) p.v. integral psi(y)/(x-y) dy.
// DFT multiplier -i sign(omega) on a zero-padded copy (pad_factor times the
// row, rounded up to a power of two) plus analytic moment corrections for the
// periodized-kernel tail; correction_terms in {0,1,2,3}.
std::vector<double> hilbert_line(std::span<const double> row, double spacing, int pad_factor = 4,
                                 int correction_terms = 3);

// Forward ray transform (I_theta f)(s_j) by composite trapezoid along curves.
Sinogram ray_transform(const Phantom& f, const PolarizedFamily& fam, const SGrid& grid, int threads = 0);

// Symmetrized beam transform (D_theta psi)(z): half the difference of the
// backward and forward partial integrals along the rotated curve through z.
double beam_transform(const std::function<double(cplx)>& psi, const PolarizedFamily& fam, const DiscPoint& z,
                      double theta, int nt = 2048);

// Per-row Hilbert filter; requires rows to have decayed below 1e-9 at both
// grid ends (wraparound would corrupt the filter otherwise).
FilteredSinogram hilbert_s(const Sinogram& sino);

// Attenuated ray transform I_{a,theta} f: one cumulative sweep per curve gives
// D_theta a at every quadrature node.
Sinogram attenuated_ray_transform(const Phantom& f, const AttenuationMap& a, const PolarizedFamily& fam,
                                  const SGrid& grid, int threads = 0);

// Attenuated filter: C H(C g) + S H(S g) with C = cos(H(I_theta a)/2),
// S = sin(H(I_theta a)/2) formed row by row.
FilteredSinogram build_Ha(const Sinogram& sino_a, const Sinogram& a_sino);

}  // namespace raytrans
