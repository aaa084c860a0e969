#include "raytrans/phantoms.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "raytrans/inversion.hpp"

namespace raytrans {

namespace {
const double kGaussTruncFactor = std::sqrt(std::log(1e14));  // tail < 1e-14 beyond this many sigma
}

double Bump::effective_radius() const {
    return kind == Kind::gaussian ? radius * kGaussTruncFactor : radius;
}

double Bump::eval(cplx z, double clip_radius) const {
    const double r2 = std::norm(z - center);
    const double tr = clip_radius >= 0.0 ? clip_radius : effective_radius();
    if (r2 >= tr * tr) return 0.0;
    if (kind == Kind::gaussian) return amplitude * std::exp(-r2 / (radius * radius));
    const double u = r2 / (radius * radius);
    if (u >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - u));
}

Phantom::Phantom(std::vector<Bump> bumps, double support_radius)
    : bumps_(std::move(bumps)), support_radius_(support_radius) {
    if (support_radius_ > 1.0 - kDefaultMaskDelta + 1e-12)
        throw DomainError("Phantom: support radius must stay at least delta inside the disc");
    clip_.reserve(bumps_.size());
    for (const auto& b : bumps_) {
        const double room = support_radius_ - std::abs(b.center);
        if (b.kind == Bump::Kind::mollifier) {
            if (b.radius > room + 1e-12)
                throw DomainError("Phantom: mollifier bump exceeds the declared support radius");
            clip_.push_back(b.radius);
        } else {
            if (room <= 0.0) throw DomainError("Phantom: gaussian bump centered outside the support");
            clip_.push_back(std::min(b.effective_radius(), room));
        }
    }
}

double Phantom::operator()(cplx z) const {
    double v = 0.0;
    for (std::size_t i = 0; i < bumps_.size(); ++i) v += bumps_[i].eval(z, clip_[i]);
    return v;
}

double eval_phantom(const Phantom& p, const DiscPoint& z) { return p(z.z()); }

Phantom Phantom::from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    std::vector<Bump> bumps;
    for (const auto& bj : j.at("bumps")) {
        Bump b;
        b.center = cplx(bj.at("center").at(0).get<double>(), bj.at("center").at(1).get<double>());
        b.radius = bj.at("radius").get<double>();
        b.amplitude = bj.value("amplitude", 1.0);
        const std::string kind = bj.value("kind", "gaussian");
        if (kind == "gaussian")
            b.kind = Bump::Kind::gaussian;
        else if (kind == "mollifier")
            b.kind = Bump::Kind::mollifier;
        else
            throw DomainError("phantom JSON: unknown bump kind '" + kind + "'");
        bumps.push_back(b);
    }
    return Phantom(std::move(bumps), j.at("support_radius").get<double>());
}

Phantom Phantom::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open phantom file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string Phantom::to_json() const {
    nlohmann::json j;
    j["support_radius"] = support_radius_;
    j["bumps"] = nlohmann::json::array();
    for (const auto& b : bumps_) {
        nlohmann::json bj;
        bj["center"] = {b.center.real(), b.center.imag()};
        bj["radius"] = b.radius;
        bj["amplitude"] = b.amplitude;
        bj["kind"] = b.kind == Bump::Kind::gaussian ? "gaussian" : "mollifier";
        j["bumps"].push_back(bj);
    }
    return j.dump(2);
}

ErrorMetrics error_metrics(const ReconImage& img, const Phantom& reference) {
    double num2 = 0.0, den2 = 0.0, numi = 0.0, deni = 0.0;
    bool any = false;
    for (int i = 0; i < img.n; ++i)
        for (int j = 0; j < img.n; ++j) {
            if (!img.in_mask(i, j)) continue;
            any = true;
            const double ref = reference(img.pixel(i, j));
            const double d = img.at(i, j) - ref;
            num2 += d * d;
            den2 += ref * ref;
            numi = std::max(numi, std::abs(d));
            deni = std::max(deni, std::abs(ref));
        }
    if (!any) throw DomainError("error_metrics: empty mask");
    ErrorMetrics m;
    m.l2_rel = den2 > 0.0 ? std::sqrt(num2 / den2) : std::sqrt(num2);
    m.linf_rel = deni > 0.0 ? numi / deni : numi;
    return m;
}

}  // namespace raytrans
