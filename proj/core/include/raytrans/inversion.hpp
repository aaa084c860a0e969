#pragma once

#include "raytrans/transforms.hpp"

namespace raytrans {

// Reconstruction on an n x n Cartesian grid over [-1,1]^2; pixels outside the
// disc of radius 1 - delta are masked to zero.
class ReconImage {
public:
    int n = 0;
    double delta = kDefaultMaskDelta;
    std::vector<double> values;  // row-major, index = i*n + j, i along x
    std::vector<std::uint8_t> mask;
    std::string family_name;

    ReconImage() = default;
    ReconImage(int n_, double delta_);

    double coord(int i) const { return -1.0 + 2.0 * i / (n - 1); }
    cplx pixel(int i, int j) const { return {coord(i), coord(j)}; }
    bool in_mask(int i, int j) const { return mask[static_cast<std::size_t>(i) * n + j] != 0; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
};

struct ReconOptions {
    int n = 256;
    double delta = kDefaultMaskDelta;
    int lambda_index = -1;  // -1: smallest |lambda_i| (ties by argument); else pick i-th
    int threads = 0;        // 0: hardware concurrency
};

// Poisson kernel of the unit disc P(lambda, theta) = (1-|lambda|^2)/|1-e^{-i theta} lambda|^2.
double poisson_kernel(cplx lambda, double theta);

// Filtered backprojection through the Poisson weight at the Blaschke zeros:
// f(z) = (1/4 pi) integral P(lambda_i(z), theta) * d/ds[H I_theta f](s(z,e^{i theta}))
//        * Xperp_theta s (z, e^{i theta}) dtheta.
ReconImage reconstruct(const Sinogram& sino, const PolarizedFamily& fam, const ReconOptions& opt = {});

// Attenuated variant with integrating factor:
// f(z) = (1/4 pi) integral P * Xperp_theta[ e^{-D_theta a(z)} (H_a I_{a,theta} f)(s(z,e^{i theta})) ] dtheta.
ReconImage reconstruct_attenuated(const Sinogram& sino_a, const AttenuationMap& a,
                                  const PolarizedFamily& fam, const ReconOptions& opt = {});

// phi(z, e^{i theta}) = i * (H I_theta f)(s(z e^{-i theta}), theta); theta must
// lie on the sinogram's angle grid.
cplx jump_field(const Sinogram& sino, const PolarizedFamily& fam, const DiscPoint& z, double theta);

// Deterministic zero selection shared by both reconstructions.
cplx select_lambda(const ZeroSet& zs, int lambda_index);

}  // namespace raytrans
