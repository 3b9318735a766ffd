#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "weaktype/families.hpp"

namespace weaktype {

struct NonpositiveDenominator : std::domain_error {
    using std::domain_error::domain_error;
};

enum class RatioSource { ClosedForm, Oracle };

struct RatioReport {
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    RatioSource source = RatioSource::ClosedForm;
};

struct AsymptoticPoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline double W(double b, double d, int m) {
    const double mm = m;
    const double den = mm / (2.0 + mm) - (2.0 + mm) / mm * d - 2.0 * mm / (2.0 + mm) * b +
                       4.0 * (1.0 + mm) / (mm * (2.0 + mm)) * (2.0 * std::pow(b, -0.5 * mm) - 1.0) *
                           std::pow(d, 1.0 + 0.5 * mm) +
                       2.0 * t0(b, m);
    if (!(den > 0.0)) throw NonpositiveDenominator("W: nonpositive denominator (infeasible input)");
    return (d - 1.0) / den;
}

inline double W_star(double b_star, double d_star, int m) {
    const double mm = m;
    const double den = -(2.0 + mm) / mm + mm / (2.0 + mm) * d_star + 2.0 * (2.0 + mm) / mm * b_star +
                       4.0 * (1.0 + mm) / (mm * (2.0 + mm)) * (2.0 * std::pow(b_star, 1.0 + 0.5 * mm) - 1.0) *
                           std::pow(d_star, -0.5 * mm) -
                       2.0 * t0_star(b_star, m);
    if (!(den > 0.0)) throw NonpositiveDenominator("W_star: nonpositive denominator (infeasible input)");
    return (1.0 - d_star) / den;
}

namespace detail {

// Integral of |k + D t^e| over [lo, hi]; F is an antiderivative of k + D t^e.
template <class F>
double abs_power_integral(double k, double D, double e, double lo, double hi, const F& anti) {
    std::vector<double> cuts{lo};
    if (D != 0.0 && -k / D > 0.0) {
        const double r = std::pow(-k / D, 1.0 / e);
        if (r > lo && r < hi) cuts.push_back(r);
    }
    cuts.push_back(hi);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += std::abs(anti(cuts[i + 1]) - anti(cuts[i]));
    return s;
}

}  // namespace detail

// a = 1, 1 < b <= c < d
inline RatioReport general_ratio(const GeneralFamilyParams& p) {
    if (p.a != 1.0) throw std::domain_error("general_ratio: requires a = 1");
    detail::throw_if_violated(validate(p));
    const double m = p.m, h = 0.5 * m, b = p.b, c = p.c, d = p.d;
    const double k = (2.0 + m) / m;
    const double D = 2.0 * (1.0 + m) / (m * std::pow(c, h)) * (1.0 + std::pow(b / c, 1.0 + h) * (1.0 - std::pow(b, h)));
    const double xb = -1.0 - k + 2.0 * (1.0 + m) / m * std::pow(b, h);
    const double b_hat = std::min(std::max(b, b * std::pow(std::max(xb, 0.0), 2.0 / (2.0 + m))), c);
    const double xd = std::abs(-1.0 - k + D * std::pow(d, h));
    const double d_hat = std::max(d, d * std::pow(xd, 2.0 / (2.0 + m)));
    RatioReport r;
    r.numerator = b_hat - 1.0 + d_hat - c;
    auto anti = [&](double t) { return -k * t + D * std::pow(t, 1.0 + h) / (1.0 + h); };
    r.denominator = m / (2.0 + m) - k * b + 4.0 * (1.0 + m) / (m * (2.0 + m)) * std::pow(b, 1.0 + h) +
                    detail::abs_power_integral(-k, D, h, c, d, anti);
    r.ratio = r.numerator / r.denominator;
    return r;
}

// a* = 1, 0 < d* < c* <= b* < 1
inline RatioReport general_ratio_star(const GeneralStarFamilyParams& p) {
    if (p.a_star != 1.0) throw std::domain_error("general_ratio_star: requires a* = 1");
    detail::throw_if_violated(validate(p));
    const double m = p.m, h = 0.5 * m, bs = p.b_star, cs = p.c_star, ds = p.d_star;
    const double k = m / (2.0 + m);
    const double Ds = 2.0 * (1.0 + m) * std::pow(cs, 1.0 + h) / (2.0 + m) *
                      (1.0 + std::pow(cs / bs, h) * (1.0 - std::pow(bs, -1.0 - h)));
    const double xb = -1.0 - k + 2.0 * (1.0 + m) / (2.0 + m) * std::pow(bs, -1.0 - h);
    const double b_hat = std::max(cs, std::min(bs * std::pow(xb, -2.0 / m), bs));
    const double xd = std::abs(-1.0 - k + Ds * std::pow(ds, -1.0 - h));
    const double d_hat = std::min(ds, ds * std::pow(xd, -2.0 / m));
    RatioReport r;
    r.numerator = 1.0 - b_hat + cs - d_hat;
    auto anti = [&](double t) { return -k * t - 2.0 * Ds / m * std::pow(t, -h); };
    r.denominator = -(2.0 + m) / m + k * bs + 4.0 * (1.0 + m) / (m * (2.0 + m)) * std::pow(bs, -h) +
                    detail::abs_power_integral(-k, Ds, -1.0 - h, ds, cs, anti);
    r.ratio = r.numerator / r.denominator;
    return r;
}

inline constexpr double kSeamTol = 1e-12;

inline double asymptotic_restricted(double x, double y) {
    const double ex = std::exp(x);
    const double z = 2.0 * (2.0 - ex);
    const double tol = kSeamTol;
    if (!(x >= std::log(1.5) - tol && x < std::log(2.0)))
        throw ConstraintViolation("asymptotic_restricted: x must lie in [ln(3/2), ln 2)");
    if (!(std::exp(-y) <= z * (1.0 + tol) && z <= 3.0 * std::exp(-y) * (1.0 + tol)))
        throw ConstraintViolation("asymptotic_restricted: need e^-y <= 2(2-e^x) <= 3e^-y");
    return (x + y) / (2.0 * ex - x - 4.0 - y + z * (std::exp(y) + 1.0) - 2.0 * std::log(z));
}

inline double x_hat(double x, double z) {
    const double l = std::log(2.0 * std::exp(x) - 2.0);
    return x + std::min(std::max(0.0, l), l - std::log(2.0 - z));
}

inline double y_hat(double y, double z) {
    return y + std::max(0.0, std::log(std::abs(-2.0 + z * std::exp(y))));
}

// Integral over [0, y] of |-1 + z e^s|.
inline double abs_exp_integral(double y, double z) {
    const double ey = std::exp(y);
    if (z >= 1.0) return z * (ey - 1.0) - y;
    if (z * ey <= 1.0) return y - z * (ey - 1.0);
    return -2.0 * std::log(z) - y + z * (ey + 1.0) - 2.0;
}

inline double asymptotic_general(const AsymptoticPoint& p) {
    if (!(p.x > 0.0) || !(p.y > 0.0)) throw ConstraintViolation("asymptotic_general: need x > 0, y > 0");
    const double ex = std::exp(p.x);
    if (!(p.z >= 2.0 * (2.0 - ex) - kSeamTol && p.z <= 2.0))
        throw ConstraintViolation("asymptotic_general: need 2(2-e^x) <= z <= 2");
    const double U = x_hat(p.x, p.z) + y_hat(p.y, p.z);
    const double V = 2.0 * ex - p.x - 2.0 + abs_exp_integral(p.y, p.z);
    return U / V;
}

}  // namespace weaktype
