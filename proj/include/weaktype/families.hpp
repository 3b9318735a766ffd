#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "weaktype/piecewise.hpp"

namespace weaktype {

struct ConstraintViolation : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Closure { Open, Closed };

// Closed-domain checks accept slacks down to -kClosureTol (relative).
inline constexpr double kClosureTol = 1e-12;

struct GeneralFamilyParams {
    int m = 1;
    double a = 1.0, b = 0.0, c = 0.0, d = 0.0;
};

// 0 < d* < c* <= b* < a*
struct GeneralStarFamilyParams {
    int m = 1;
    double a_star = 1.0, b_star = 0.0, c_star = 0.0, d_star = 0.0;
};

struct FSpecParams {
    int m = 1;
    double b = 0.0, d = 0.0;
};

struct FStarSpecParams {
    int m = 1;
    double b_star = 0.0, d_star = 0.0;
};

struct ConstraintDiagnostic {
    std::string name;
    double slack = 0.0;
    bool satisfied = false;
};

// ---- coefficients and boundary curves ----

inline double coef_B(double a, int m) { return -2.0 * (1.0 + m) / (m * std::pow(a, 0.5 * m)); }

inline double coef_D(double a, double b, double c, int m) {
    const double h = 0.5 * m;
    const double k = 2.0 * (1.0 + m) / (m * std::pow(c, h));
    return k + k * std::pow(b / c, 1.0 + h) + coef_B(a, m) * std::pow(b / c, 1.0 + m);
}

inline double coef_B_star(double a_star, int m) {
    return -2.0 * (1.0 + m) * std::pow(a_star, 1.0 + 0.5 * m) / (2.0 + m);
}

inline double coef_D_star(double a_star, double b_star, double c_star, int m) {
    const double h = 0.5 * m;
    const double k = 2.0 * (1.0 + m) * std::pow(c_star, 1.0 + h) / (2.0 + m);
    return k * (1.0 + std::pow(c_star / b_star, h)) + coef_B_star(a_star, m) * std::pow(c_star / b_star, 1.0 + m);
}

inline double D_spec(double b, int m) { return 2.0 * (1.0 + m) / m * (2.0 * std::pow(b, -0.5 * m) - 1.0); }

inline double D_star_spec(double b_star, int m) {
    return 2.0 * (1.0 + m) / (2.0 + m) * (2.0 * std::pow(b_star, 1.0 + 0.5 * m) - 1.0);
}

inline double b_min(int m) { return std::pow((2.0 + 3.0 * m) / (2.0 + 2.0 * m), 2.0 / m); }
inline double b_max(int m) { return std::pow(2.0, 2.0 / m); }

inline double t0(double b, int m) {
    return std::pow((2.0 + m) / (2.0 * (1.0 + m)), 2.0 / m) * std::pow(2.0 * std::pow(b, -0.5 * m) - 1.0, -2.0 / m);
}
inline double d_min(double b, int m) { return t0(b, m); }
inline double d_max(double b, int m) {
    return std::pow((2.0 + 3.0 * m) / (2.0 * (1.0 + m) * (2.0 * std::pow(b, -0.5 * m) - 1.0)), 2.0 / m);
}

inline double b_star_min(int m) { return std::pow(2.0, -2.0 / (2.0 + m)); }
inline double b_star_max(int m) { return std::pow((2.0 + 2.0 * m) / (4.0 + 3.0 * m), 2.0 / (2.0 + m)); }

inline double t0_star(double b_star, int m) {
    const double e = 2.0 / (2.0 + m);
    return std::pow(2.0 * (1.0 + m) / m, e) * std::pow(2.0 * std::pow(b_star, 1.0 + 0.5 * m) - 1.0, e);
}
inline double d_star_min(double b_star, int m) {
    const double s = 2.0 * (1.0 + m) * (2.0 * std::pow(b_star, 1.0 + 0.5 * m) - 1.0);
    return std::pow((4.0 + 3.0 * m) / s, -2.0 / (2.0 + m));
}
inline double d_star_max(double b_star, int m) { return t0_star(b_star, m); }

inline double b_sp() { return std::pow(7.0, 2.0 / 3.0); }
inline double b_star_sp() {
    const double r = 2.0 - std::cbrt(7.0);
    return std::pow(27.0 / (54.0 - 16.0 * r * r * r), 2.0 / 3.0);
}

struct DomainBoundaries {
    int m = 1;
    double b_min = 0.0, b_max = 0.0, b_tilde_max = 0.0;
    double b_star_min = 0.0, b_star_max = 0.0, b_star_tilde_min = 0.0;
    double b_sp = std::numeric_limits<double>::quiet_NaN();       // m = 1 only
    double b_star_sp = std::numeric_limits<double>::quiet_NaN();  // m = 1 only

    double d_min(double b) const { return weaktype::d_min(b, m); }
    double d_max(double b) const { return weaktype::d_max(b, m); }
    double t0(double b) const { return weaktype::t0(b, m); }
    double d_star_min(double bs) const { return weaktype::d_star_min(bs, m); }
    double d_star_max(double bs) const { return weaktype::d_star_max(bs, m); }
    double t0_star(double bs) const { return weaktype::t0_star(bs, m); }
};

inline DomainBoundaries boundaries(int m) {
    if (m < 1) throw std::domain_error("boundaries: m must be >= 1");
    DomainBoundaries r;
    r.m = m;
    r.b_min = b_min(m);
    r.b_max = b_max(m);
    r.b_star_min = b_star_min(m);
    r.b_star_max = b_star_max(m);
    r.b_tilde_max = r.b_max;
    r.b_star_tilde_min = r.b_star_min;
    if (m == 1) {
        r.b_sp = b_sp();
        r.b_star_sp = b_star_sp();
        r.b_tilde_max = r.b_sp;
        r.b_star_tilde_min = r.b_star_sp;
    }
    return r;
}

// ---- validation ----

namespace detail {

inline void push_check(std::vector<ConstraintDiagnostic>& out, std::string name, double slack, double scale,
                       Closure cl) {
    const bool ok = cl == Closure::Open ? slack > 0.0 : slack >= -kClosureTol * std::max(1.0, std::abs(scale));
    out.push_back({std::move(name), slack, ok});
}

inline void throw_if_violated(const std::vector<ConstraintDiagnostic>& diags) {
    std::string msg;
    for (const auto& d : diags)
        if (!d.satisfied) msg += (msg.empty() ? "" : "; ") + d.name + " (slack " + std::to_string(d.slack) + ")";
    if (!msg.empty()) throw ConstraintViolation("constraint violated: " + msg);
}

}  // namespace detail

inline bool all_satisfied(const std::vector<ConstraintDiagnostic>& diags) {
    for (const auto& d : diags)
        if (!d.satisfied) return false;
    return true;
}

inline std::vector<ConstraintDiagnostic> validate(const GeneralFamilyParams& p, Closure cl = Closure::Open) {
    std::vector<ConstraintDiagnostic> out;
    out.push_back({"m > 0", static_cast<double>(p.m), p.m >= 1});
    detail::push_check(out, "a > 0", p.a, 1.0, Closure::Open);
    detail::push_check(out, "a < b", p.b - p.a, p.b, Closure::Open);
    detail::push_check(out, "b <= c", p.c - p.b, p.c, Closure::Closed);
    detail::push_check(out, "c < d", p.d - p.c, p.d, cl);
    return out;
}

inline std::vector<ConstraintDiagnostic> validate(const GeneralStarFamilyParams& p, Closure cl = Closure::Open) {
    std::vector<ConstraintDiagnostic> out;
    out.push_back({"m > 0", static_cast<double>(p.m), p.m >= 1});
    detail::push_check(out, "d* > 0", p.d_star, 1.0, Closure::Open);
    detail::push_check(out, "d* < c*", p.c_star - p.d_star, p.c_star, cl);
    detail::push_check(out, "c* <= b*", p.b_star - p.c_star, p.b_star, Closure::Closed);
    detail::push_check(out, "b* < a*", p.a_star - p.b_star, p.a_star, Closure::Open);
    return out;
}

inline std::vector<ConstraintDiagnostic> validate(const FSpecParams& p, Closure cl = Closure::Open) {
    std::vector<ConstraintDiagnostic> out;
    const int m = p.m;
    out.push_back({"m > 0", static_cast<double>(m), m >= 1});
    if (m < 1) return out;
    const double bmin = b_min(m), bmax = b_max(m);
    detail::push_check(out, "b > b_min", p.b - bmin, bmin, cl);
    detail::push_check(out, "b < b_max", bmax - p.b, bmax, Closure::Open);
    const double dlo = d_min(p.b, m), dhi = d_max(p.b, m);
    detail::push_check(out, "d > d_min(b)", p.d - dlo, dlo, cl);
    detail::push_check(out, "d < d_max(b)", dhi - p.d, dhi, cl);
    // raw chain, redundant with the derived intervals
    const double D = D_spec(p.b, m);
    const double k = (2.0 + m) / m;
    detail::push_check(out, "D(b,m) > 0", D, 1.0, Closure::Open);
    detail::push_check(out, "-(2+m)/m + D b^{m/2} < 0", k - D * std::pow(p.b, 0.5 * m), k, cl);
    const double hd = -k + D * std::pow(p.d, 0.5 * m);
    detail::push_check(out, "0 < -(2+m)/m + D d^{m/2}", hd, k, cl);
    detail::push_check(out, "-(2+m)/m + D d^{m/2} < 2", 2.0 - hd, 2.0, cl);
    return out;
}

inline std::vector<ConstraintDiagnostic> validate(const FStarSpecParams& p, Closure cl = Closure::Open) {
    std::vector<ConstraintDiagnostic> out;
    const int m = p.m;
    out.push_back({"m > 0", static_cast<double>(m), m >= 1});
    if (m < 1) return out;
    const double bmin = b_star_min(m), bmax = b_star_max(m);
    detail::push_check(out, "b* > b*_min", p.b_star - bmin, bmin, Closure::Open);
    detail::push_check(out, "b* < b*_max", bmax - p.b_star, bmax, cl);
    const double dlo = d_star_min(p.b_star, m), dhi = d_star_max(p.b_star, m);
    detail::push_check(out, "d* > d*_min(b*)", p.d_star - dlo, dlo, cl);
    detail::push_check(out, "d* < d*_max(b*)", dhi - p.d_star, dhi, cl);
    detail::push_check(out, "d* > 0", p.d_star, 1.0, Closure::Open);
    const double Ds = D_star_spec(p.b_star, m);
    const double k = m / (2.0 + m);
    const double e = -1.0 - 0.5 * m;
    detail::push_check(out, "D*(b*,m) > 0", Ds, 1.0, Closure::Open);
    const double hd = -k + Ds * std::pow(p.d_star, e);
    detail::push_check(out, "-m/(2+m) + D* d*^{-1-m/2} < 2", 2.0 - hd, 2.0, cl);
    detail::push_check(out, "-m/(2+m) + D* d*^{-1-m/2} > 0", hd, k, cl);
    detail::push_check(out, "-m/(2+m) + D* b*^{-1-m/2} < 0", k - Ds * std::pow(p.b_star, e), k, cl);
    return out;
}

// ---- constructors ----

inline PiecewisePowerFunction build_general(const GeneralFamilyParams& p) {
    detail::throw_if_violated(validate(p));
    const int m = p.m;
    const double h = 0.5 * m;
    const double k = (2.0 + m) / m;
    return PiecewisePowerFunction({PowerPiece{p.a, p.b, k, coef_B(p.a, m), h},
                                   PowerPiece{p.c, p.d, -k, coef_D(p.a, p.b, p.c, m), h}});
}

inline PiecewisePowerFunction build_general_star(const GeneralStarFamilyParams& p) {
    detail::throw_if_violated(validate(p));
    const int m = p.m;
    const double e = -1.0 - 0.5 * m;
    const double k = m / (2.0 + m);
    return PiecewisePowerFunction(
        {PowerPiece{p.d_star, p.c_star, -k, coef_D_star(p.a_star, p.b_star, p.c_star, m), e},
         PowerPiece{p.b_star, p.a_star, k, coef_B_star(p.a_star, m), e}});
}

inline PiecewisePowerFunction build_spec(const FSpecParams& p, Closure cl = Closure::Open) {
    detail::throw_if_violated(validate(p, cl));
    const int m = p.m;
    const double h = 0.5 * m;
    const double k = (2.0 + m) / m;
    return PiecewisePowerFunction(
        {PowerPiece{1.0, p.b, k, -2.0 * (1.0 + m) / m, h}, PowerPiece{p.b, p.d, -k, D_spec(p.b, m), h}});
}

inline PiecewisePowerFunction build_star_spec(const FStarSpecParams& p, Closure cl = Closure::Open) {
    detail::throw_if_violated(validate(p, cl));
    const int m = p.m;
    const double e = -1.0 - 0.5 * m;
    const double k = m / (2.0 + m);
    return PiecewisePowerFunction({PowerPiece{p.d_star, p.b_star, -k, D_star_spec(p.b_star, m), e},
                                   PowerPiece{p.b_star, 1.0, k, -2.0 * (1.0 + m) / (2.0 + m), e}});
}

}  // namespace weaktype
