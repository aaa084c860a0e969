#include "raytrans/families.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace raytrans {

namespace {

constexpr cplx kI{0.0, 1.0};

// ---------------------------------------------------------------- lines ----

std::shared_ptr<PolarizedFamily> make_lines() {
    auto f = std::make_shared<PolarizedFamily>();
    f->name = "euclidean-lines";
    f->A = [](cplx, cplx) { return cplx(1.0, 0.0); };
    f->B = [](cplx, cplx) { return cplx(1.0, 0.0); };
    f->A_d = [](cplx, cplx) { return std::array<cplx, 2>{0.0, 0.0}; };
    f->B_d = [](cplx, cplx) { return std::array<cplx, 2>{0.0, 0.0}; };
    f->s_pol = [](cplx w1, cplx w2) { return (w2 - w1) / (2.0 * kI); };
    f->s_pol_d = [](cplx, cplx) { return std::array<cplx, 2>{kI / 2.0, -kI / 2.0}; };
    f->t_pol = [](cplx w1, cplx w2) { return (w1 + w2) / 2.0; };
    f->t_pol_d = [](cplx, cplx) { return std::array<cplx, 2>{0.5, 0.5}; };
    f->curve = [](double t, double s) { return cplx(t, -s); };
    f->curve_params = [](cplx z) { return std::array<double, 2>{z.real(), -z.imag()}; };
    f->t_limits = [](double s) {
        const double R = 0.999;
        const double d = R * R - s * s;
        if (d <= 0.0) return std::array<double, 2>{0.0, 0.0};
        const double r = std::sqrt(d);
        return std::array<double, 2>{-r, r};
    };
    f->s_range = {-1.0, 1.0};
    f->ratio_fn = [](cplx, cplx l) { return l * l; };
    f->ratio_dlambda_fn = [](cplx, cplx l) { return 2.0 * l; };
    f->attenuated_certified = true;  // u(z, lambda) = O(lambda), so u(z, 0) = 0
    return f;
}

// ----------------------------------------------------------- hyperbolic ----

double sigma_of_v(double v) { return v / (1.0 + std::sqrt(1.0 - v * v)); }

std::shared_ptr<PolarizedFamily> make_hyperbolic() {
    auto f = std::make_shared<PolarizedFamily>();
    f->name = "hyperbolic-geodesics";
    f->A = [](cplx w1, cplx w2) {
        return kI / 2.0 * (1.0 - w1 * w1) * (1.0 - w1 * w2) / (1.0 + w1 * w2);
    };
    f->B = [](cplx w1, cplx w2) {
        return -kI / 2.0 * (1.0 - w2 * w2) * (1.0 - w1 * w2) / (1.0 + w1 * w2);
    };
    f->A_d = [](cplx w1, cplx w2) {
        const cplx den = 1.0 + w1 * w2;
        const cplx q = (1.0 - w1 * w2) / den;
        const cplx d1 = -kI * (w1 * q + w2 * (1.0 - w1 * w1) / (den * den));
        const cplx d2 = -kI * w1 * (1.0 - w1 * w1) / (den * den);
        return std::array<cplx, 2>{d1, d2};
    };
    f->B_d = [](cplx w1, cplx w2) {
        const cplx den = 1.0 + w1 * w2;
        const cplx q = (1.0 - w1 * w2) / den;
        const cplx d1 = kI * w2 * (1.0 - w2 * w2) / (den * den);
        const cplx d2 = kI * (w2 * q + w1 * (1.0 - w2 * w2) / (den * den));
        return std::array<cplx, 2>{d1, d2};
    };
    f->s_pol = [](cplx w1, cplx w2) { return (w1 + w2) / (1.0 + w1 * w2); };
    f->s_pol_d = [](cplx w1, cplx w2) {
        const cplx den = (1.0 + w1 * w2) * (1.0 + w1 * w2);
        return std::array<cplx, 2>{(1.0 - w2 * w2) / den, (1.0 - w1 * w1) / den};
    };
    // Flow coordinate: t' = 2 artanh(u) cosh(s_arc) with u = -i(w1-sigma)/(1-sigma w1),
    // sigma the quadratic root with |sigma| < 1 at real pairs.
    auto sigma_pair = [](cplx w1, cplx w2) {
        const cplx sq = std::sqrt((1.0 - w1 * w1) * (1.0 - w2 * w2));
        return (w1 + w2) / (1.0 + w1 * w2 + sq);
    };
    f->t_pol = [sigma_pair](cplx w1, cplx w2) {
        const cplx sg = sigma_pair(w1, w2);
        const cplx u = -kI * (w1 - sg) / (1.0 - sg * w1);
        const cplx ch = (1.0 + sg * sg) / (1.0 - sg * sg);
        return std::log((1.0 + u) / (1.0 - u)) * ch;  // 2 artanh(u) * cosh(s)
    };
    f->t_pol_d = [sigma_pair](cplx w1, cplx w2) {
        const cplx sg = sigma_pair(w1, w2);
        const cplx dq = 2.0 * ((w1 + w2) * sg - (1.0 + w1 * w2));
        const cplx sg1 = (2.0 * w2 * sg - sg * sg - 1.0) / dq;
        const cplx sg2 = (2.0 * w1 * sg - sg * sg - 1.0) / dq;
        const cplx den = 1.0 - sg * w1;
        const cplx u = -kI * (w1 - sg) / den;
        const cplx u1 = -kI * ((1.0 - sg1) * den + (w1 - sg) * (sg + w1 * sg1)) / (den * den);
        const cplx u2 = -kI * sg2 * (w1 * w1 - 1.0) / (den * den);
        const cplx ch = (1.0 + sg * sg) / (1.0 - sg * sg);
        const cplx t0 = std::log((1.0 + u) / (1.0 - u));
        const cplx dch = 4.0 * sg / ((1.0 - sg * sg) * (1.0 - sg * sg));
        const cplx f1 = 2.0 * u1 / (1.0 - u * u) * ch + t0 * dch * sg1;
        const cplx f2 = 2.0 * u2 / (1.0 - u * u) * ch + t0 * dch * sg2;
        return std::array<cplx, 2>{f1, f2};
    };
    f->curve = [](double t, double v) {
        const double sg = sigma_of_v(v);
        const double ch = 1.0 / std::sqrt(1.0 - v * v);
        const cplx w = kI * std::tanh(t / (2.0 * ch));
        return (w + sg) / (1.0 + sg * w);
    };
    f->curve_params = [](cplx z) {
        const double x = z.real();
        const double zz = std::norm(z);
        const double sg = 2.0 * x / (1.0 + zz + std::abs(1.0 - z * z));
        const double v = 2.0 * sg / (1.0 + sg * sg);
        const cplx w = (z - sg) / (1.0 - sg * z);
        const double ch = 1.0 / std::sqrt(1.0 - v * v);
        const double t = 2.0 * ch * std::atanh(w.imag());
        return std::array<double, 2>{t, v};
    };
    f->t_limits = [](double v) {
        const double R = 0.9875;
        const double sg = sigma_of_v(v);
        const double num = R * R - sg * sg;
        if (num <= 0.0) return std::array<double, 2>{0.0, 0.0};
        const double tau = std::sqrt(num / (1.0 - sg * sg * R * R));
        const double ch = 1.0 / std::sqrt(1.0 - v * v);
        const double tm = 2.0 * ch * std::atanh(std::min(tau, 1.0 - 1e-15));
        return std::array<double, 2>{-tm, tm};
    };
    {
        const double R = 0.97;
        const double vm = 2.0 * R / (1.0 + R * R);
        f->s_range = {-vm, vm};
    }
    f->ratio_fn = [](cplx z, cplx l) {
        const cplx zb = std::conj(z);
        return (z * z - l * l) / (1.0 - zb * zb * l * l);
    };
    f->ratio_dlambda_fn = [](cplx z, cplx l) {
        const cplx zb = std::conj(z);
        const cplx den = 1.0 - zb * zb * l * l;
        return 2.0 * l * (std::norm(z) * std::norm(z) - 1.0) / (den * den);
    };
    f->domain_ok = [](cplx w1, cplx w2) { return std::abs(1.0 + w1 * w2) > 1e-12; };
    return f;
}

// ----------------------------------------------------------------- JSON ----

// Bivariate polynomial: list of (i, j, coeff) terms in w1^i w2^j.
struct Poly2 {
    struct Term {
        int i, j;
        cplx c;
    };
    std::vector<Term> terms;

    cplx eval(cplx w1, cplx w2) const {
        cplx acc = 0.0;
        for (const auto& t : terms) acc += t.c * ipow(w1, t.i) * ipow(w2, t.j);
        return acc;
    }
    std::array<cplx, 2> deriv(cplx w1, cplx w2) const {
        cplx d1 = 0.0, d2 = 0.0;
        for (const auto& t : terms) {
            if (t.i > 0) d1 += t.c * static_cast<double>(t.i) * ipow(w1, t.i - 1) * ipow(w2, t.j);
            if (t.j > 0) d2 += t.c * static_cast<double>(t.j) * ipow(w1, t.i) * ipow(w2, t.j - 1);
        }
        return {d1, d2};
    }
    static cplx ipow(cplx w, int p) {
        cplx r = 1.0;
        for (int k = 0; k < p; ++k) r *= w;
        return r;
    }
};

struct Rational2 {
    Poly2 num, den;
    cplx eval(cplx w1, cplx w2) const {
        const cplx d = den.eval(w1, w2);
        if (std::abs(d) < 1e-300) throw DomainError("rational family: denominator vanished");
        return num.eval(w1, w2) / d;
    }
    std::array<cplx, 2> deriv(cplx w1, cplx w2) const {
        const cplx n = num.eval(w1, w2), d = den.eval(w1, w2);
        const auto dn = num.deriv(w1, w2);
        const auto dd = den.deriv(w1, w2);
        return {(dn[0] * d - n * dd[0]) / (d * d), (dn[1] * d - n * dd[1]) / (d * d)};
    }
};

Poly2 parse_poly(const nlohmann::json& j) {
    Poly2 p;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 4)
            throw DomainError("family JSON: polynomial term must be [i, j, re, im]");
        p.terms.push_back({term[0].get<int>(), term[1].get<int>(),
                           cplx(term[2].get<double>(), term[3].get<double>())});
    }
    return p;
}

Rational2 parse_rational(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("family JSON: missing '") + key + "'");
    Rational2 r;
    r.num = parse_poly(j.at(key).at("num"));
    if (j.at(key).contains("den"))
        r.den = parse_poly(j.at(key).at("den"));
    else
        r.den.terms.push_back({0, 0, cplx(1.0, 0.0)});
    return r;
}

std::shared_ptr<PolarizedFamily> make_json_family(const nlohmann::json& j) {
    auto f = std::make_shared<PolarizedFamily>();
    f->name = j.value("name", "user-family");
    auto A = parse_rational(j, "A");
    auto B = parse_rational(j, "B");
    auto S = parse_rational(j, "s_pol");
    auto T = parse_rational(j, "t_pol");
    f->A = [A](cplx w1, cplx w2) { return A.eval(w1, w2); };
    f->B = [B](cplx w1, cplx w2) { return B.eval(w1, w2); };
    f->s_pol = [S](cplx w1, cplx w2) { return S.eval(w1, w2); };
    f->t_pol = [T](cplx w1, cplx w2) { return T.eval(w1, w2); };
    f->A_d = [A](cplx w1, cplx w2) { return A.deriv(w1, w2); };
    f->B_d = [B](cplx w1, cplx w2) { return B.deriv(w1, w2); };
    f->s_pol_d = [S](cplx w1, cplx w2) { return S.deriv(w1, w2); };
    f->t_pol_d = [T](cplx w1, cplx w2) { return T.deriv(w1, w2); };

    const double t_radius = j.value("t_radius", 0.999);
    if (j.contains("s_range")) {
        f->s_range = {j.at("s_range").at(0).get<double>(), j.at("s_range").at(1).get<double>()};
    }

    // Coordinate functions at real pairs.
    auto t_of = [T](cplx z) { return T.eval(z, std::conj(z)).real(); };
    auto s_of = [S](cplx z) { return S.eval(z, std::conj(z)).real(); };
    f->curve_params = [t_of, s_of](cplx z) { return std::array<double, 2>{t_of(z), s_of(z)}; };

    // curve(t, s): 2D Newton on (t_pol, s_pol) from a deterministic seed scan.
    auto newton_curve = [T, S, t_of, s_of](double t, double s) -> cplx {
        auto step = [&](cplx z) -> std::optional<cplx> {
            for (int it = 0; it < 60; ++it) {
                const cplx zb = std::conj(z);
                const double ft = T.eval(z, zb).real() - t;
                const double fs = S.eval(z, zb).real() - s;
                if (std::abs(ft) + std::abs(fs) < 1e-13) return z;
                const auto dT = T.deriv(z, zb);
                const auto dS = S.deriv(z, zb);
                // d/dx = d_w1 + d_w2, d/dy = i(d_w1 - d_w2); coordinates are real-valued.
                const double a = (dT[0] + dT[1]).real(), b = (kI * (dT[0] - dT[1])).real();
                const double c = (dS[0] + dS[1]).real(), d = (kI * (dS[0] - dS[1])).real();
                const double det = a * d - b * c;
                if (std::abs(det) < 1e-14) return std::nullopt;
                const double dx = (d * ft - b * fs) / det;
                const double dy = (-c * ft + a * fs) / det;
                z -= cplx(dx, dy);
                if (std::abs(z) > 1.5) return std::nullopt;
            }
            return std::nullopt;
        };
        for (int ix = -8; ix <= 8; ++ix)
            for (int iy = -8; iy <= 8; ++iy) {
                const cplx seed(0.118 * ix, 0.118 * iy);
                if (std::abs(seed) > 0.96) continue;
                if (auto z = step(seed)) {
                    if (std::abs(*z) < 1.0 && std::abs(t_of(*z) - t) < 1e-9 && std::abs(s_of(*z) - s) < 1e-9)
                        return *z;
                }
            }
        throw DomainError("user family: curve(t, s) not found inside the disc");
    };
    f->curve = newton_curve;

    f->t_limits = [newton_curve, t_radius](double s) -> std::array<double, 2> {
        // March outward from t = 0 until the curve leaves |z| <= t_radius.
        auto edge = [&](double dir) {
            double t_in = 0.0;
            try {
                if (std::abs(newton_curve(0.0, s)) > t_radius) return 0.0;
            } catch (const DomainError&) {
                return 0.0;
            }
            double t_out = dir * 0.25;
            for (int k = 0; k < 400; ++k) {
                bool outside = true;
                try {
                    outside = std::abs(newton_curve(t_out, s)) > t_radius;
                } catch (const DomainError&) {
                    outside = true;
                }
                if (outside) break;
                t_in = t_out;
                t_out += dir * 0.25;
                if (std::abs(t_out) > 60.0) return t_in;
            }
            for (int k = 0; k < 60; ++k) {
                const double mid = 0.5 * (t_in + t_out);
                bool outside = true;
                try {
                    outside = std::abs(newton_curve(mid, s)) > t_radius;
                } catch (const DomainError&) {
                    outside = true;
                }
                (outside ? t_out : t_in) = mid;
            }
            return t_in;
        };
        const double lo = edge(-1.0), hi = edge(+1.0);
        if (hi <= lo) return {0.0, 0.0};
        return {lo, hi};
    };
    return f;
}

}  // namespace

std::shared_ptr<const PolarizedFamily> lines_family() {
    static std::shared_ptr<const PolarizedFamily> f = make_lines();
    return f;
}

std::shared_ptr<const PolarizedFamily> hyperbolic_family() {
    static std::shared_ptr<const PolarizedFamily> f = make_hyperbolic();
    return f;
}

std::shared_ptr<const PolarizedFamily> family_from_json(const std::string& json_text) {
    return make_json_family(nlohmann::json::parse(json_text));
}

std::shared_ptr<const PolarizedFamily> family_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open family definition: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return family_from_json(ss.str());
}

std::shared_ptr<const PolarizedFamily> family_by_name(const std::string& name) {
    if (name == "euclidean-lines" || name == "lines") return lines_family();
    if (name == "hyperbolic-geodesics" || name == "hyperbolic") return hyperbolic_family();
    if (name.size() > 5 && name.substr(name.size() - 5) == ".json") return family_from_json_file(name);
    throw DomainError("unknown family: " + name);
}

}  // namespace raytrans
