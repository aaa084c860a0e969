#pragma once

#include <string>
#include <vector>

#include "raytrans/geometry.hpp"

namespace raytrans {

// Smooth compactly supported synthetic density: a sum of radial bumps.
// Mollifier bumps vanish identically outside their radius; gaussian bumps are
// truncated where the tail drops below 1e-14 (radius sigma*sqrt(ln 1e14)).
struct Bump {
    enum class Kind { gaussian, mollifier };
    cplx center{0.0, 0.0};
    double radius = 0.1;  // sigma for gaussian, support radius for mollifier
    double amplitude = 1.0;
    Kind kind = Kind::gaussian;

    // Ideal truncation radius (1e-14 tail for gaussians, hard edge for
    // mollifiers). Wide gaussians get clipped at the phantom's declared
    // support instead.
    double effective_radius() const;
    double eval(cplx z, double clip_radius = -1.0) const;
};

class Phantom {
public:
    Phantom() = default;
    Phantom(std::vector<Bump> bumps, double support_radius);

    double operator()(cplx z) const;
    double support_radius() const { return support_radius_; }
    const std::vector<Bump>& bumps() const { return bumps_; }

    static Phantom from_json(const std::string& json_text);
    static Phantom from_json_file(const std::string& path);
    std::string to_json() const;

private:
    std::vector<Bump> bumps_;
    std::vector<double> clip_;  // per-bump truncation radius
    double support_radius_ = 0.0;
};

// Real-valued attenuation map; same structure and support rules.
using AttenuationMap = Phantom;

double eval_phantom(const Phantom& p, const DiscPoint& z);

struct ErrorMetrics {
    double l2_rel = 0.0;
    double linf_rel = 0.0;
};

class ReconImage;
ErrorMetrics error_metrics(const ReconImage& img, const Phantom& reference);

}  // namespace raytrans
