#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "raytrans/errors.hpp"

namespace raytrans {

// Natural cubic spline on a uniform grid. The inversion differentiates the
// interpolant in s, so a C^2 interpolant is required (linear would not do).
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(double x0, double dx, std::span<const double> y) : x0_(x0), dx_(dx), y_(y.begin(), y.end()) {
        const std::size_t n = y_.size();
        m_.assign(n, 0.0);
        if (n < 3 || dx_ <= 0.0) throw DomainError("CubicSpline: need >= 3 uniform nodes");
        // Solve tridiagonal system for second derivatives, natural ends (m_0 = m_{n-1} = 0).
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double rhs = 6.0 * (y_[i - 1] - 2.0 * y_[i] + y_[i + 1]) / (dx_ * dx_);
            if (i == 1) {
                c[i] = 1.0 / 4.0;
                d[i] = rhs / 4.0;
            } else {
                const double denom = 4.0 - c[i - 1];
                c[i] = 1.0 / denom;
                d[i] = (rhs - d[i - 1]) / denom;
            }
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    double xmin() const { return x0_; }
    double xmax() const { return x0_ + dx_ * static_cast<double>(y_.size() - 1); }

    double operator()(double x) const {
        const auto [i, u] = locate(x);
        const double a = y_[i], b = y_[i + 1];
        const double ma = m_[i], mb = m_[i + 1];
        const double om = 1.0 - u;
        return om * a + u * b + dx_ * dx_ / 6.0 * (om * (om * om - 1.0) * ma + u * (u * u - 1.0) * mb);
    }

    double deriv(double x) const {
        const auto [i, u] = locate(x);
        const double a = y_[i], b = y_[i + 1];
        const double ma = m_[i], mb = m_[i + 1];
        return (b - a) / dx_ + dx_ / 6.0 * ((3.0 * u * u - 1.0) * mb - (3.0 * (1.0 - u) * (1.0 - u) - 1.0) * ma);
    }

private:
    std::pair<std::size_t, double> locate(double x) const {
        const double span = dx_ * static_cast<double>(y_.size() - 1);
        const double tol = 1e-9 * (std::abs(span) + 1.0);
        double t = x - x0_;
        if (t < -tol || t > span + tol) throw SupportViolation("spline evaluation outside node range");
        t = std::clamp(t, 0.0, span);
        std::size_t i = std::min(static_cast<std::size_t>(t / dx_), y_.size() - 2);
        return {i, t / dx_ - static_cast<double>(i)};
    }

    double x0_ = 0.0, dx_ = 1.0;
    std::vector<double> y_, m_;
};

}  // namespace raytrans
