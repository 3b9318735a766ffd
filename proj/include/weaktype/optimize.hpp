#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "weaktype/families.hpp"
#include "weaktype/functionals.hpp"

namespace weaktype {

enum class OptimumMethod { GridThenNelderMead, CurveScan };

struct OptimumRecord {
    int m = 1;
    double b = 0.0, d = 0.0, value = 0.0;
    long evaluations = 0;
    OptimumMethod method = OptimumMethod::GridThenNelderMead;
};

namespace detail {

inline constexpr double kDomainSlack = 1e-12;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Simplex2 {
    std::array<std::array<double, 2>, 3> x{};
    std::array<double, 3> f{};
};

// Nelder-Mead maximization on a box. Coefficients: reflect 1, expand 2, contract 0.5, shrink 0.5.
template <class F>
std::array<double, 2> nelder_mead_max(const F& obj, std::array<double, 2> start, double step,
                                      std::array<double, 2> lo, std::array<double, 2> hi, double tol,
                                      long& evals, int max_iter = 5000) {
    auto clip = [&](std::array<double, 2> p) {
        for (int i = 0; i < 2; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
        return p;
    };
    auto eval = [&](const std::array<double, 2>& p) {
        ++evals;
        return obj(p[0], p[1]);
    };
    Simplex2 s;
    s.x[0] = clip(start);
    s.x[1] = clip({start[0] + step, start[1]});
    s.x[2] = clip({start[0], start[1] + step});
    if (s.x[1] == s.x[0]) s.x[1] = clip({start[0] - step, start[1]});
    if (s.x[2] == s.x[0]) s.x[2] = clip({start[0], start[1] - step});
    for (int i = 0; i < 3; ++i) s.f[i] = eval(s.x[i]);

    for (int it = 0; it < max_iter; ++it) {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s.f[a] > s.f[b]; });
        Simplex2 t;
        for (int i = 0; i < 3; ++i) {
            t.x[i] = s.x[idx[i]];
            t.f[i] = s.f[idx[i]];
        }
        s = t;
        double size = 0.0;
        for (int i = 1; i < 3; ++i)
            size = std::max(size, std::max(std::abs(s.x[i][0] - s.x[0][0]), std::abs(s.x[i][1] - s.x[0][1])));
        if (std::isfinite(s.f[2]) && s.f[0] - s.f[2] <= tol && size <= 1e-10) break;

        const std::array<double, 2> c{0.5 * (s.x[0][0] + s.x[1][0]), 0.5 * (s.x[0][1] + s.x[1][1])};
        auto along = [&](double k) {
            return clip({c[0] + k * (s.x[2][0] - c[0]), c[1] + k * (s.x[2][1] - c[1])});
        };
        const auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr > s.f[0]) {
            const auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe > fr) { s.x[2] = xe; s.f[2] = fe; }
            else { s.x[2] = xr; s.f[2] = fr; }
            continue;
        }
        if (fr > s.f[1]) { s.x[2] = xr; s.f[2] = fr; continue; }
        const bool outside = fr > s.f[2];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc > std::max(fr, s.f[2]) || (!outside && fc > s.f[2])) {
            s.x[2] = xc;
            s.f[2] = fc;
            continue;
        }
        for (int i = 1; i < 3; ++i) {
            s.x[i] = clip({s.x[0][0] + 0.5 * (s.x[i][0] - s.x[0][0]), s.x[0][1] + 0.5 * (s.x[i][1] - s.x[0][1])});
            s.f[i] = eval(s.x[i]);
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (s.f[i] > s.f[best]) best = i;
    return s.x[best];
}

// Golden-section maximization of a unimodal function on [a, b].
template <class F>
double golden_max(const F& f, double a, double b, double tol, long& evals) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    evals += 2;
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
        ++evals;
    }
    return 0.5 * (a + b);
}

struct ScanMax {
    double x = 0.0, value = kNegInf;
    long evaluations = 0;
};

// Grid scan on [lo, hi] followed by golden section in the best cell.
template <class F>
ScanMax scan_then_golden(const F& f, double lo, double hi, int n, double tol) {
    ScanMax r;
    int best = 0;
    std::vector<double> xs(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = lo + (hi - lo) * i / n;
        const double v = f(xs[i]);
        ++r.evaluations;
        if (v > r.value) {
            r.value = v;
            best = i;
        }
    }
    r.x = xs[best];
    const double a = xs[std::max(best - 1, 0)], b = xs[std::min(best + 1, n)];
    const double xg = golden_max(f, a, b, tol, r.evaluations);
    const double vg = f(xg);
    ++r.evaluations;
    if (vg > r.value) {
        r.value = vg;
        r.x = xg;
    }
    return r;
}

inline double safe_W(double b, double d, int m) {
    try {
        const double v = W(b, d, m);
        return std::isfinite(v) ? v : kNegInf;
    } catch (const NonpositiveDenominator&) {
        return kNegInf;
    }
}

}  // namespace detail

// Unit square -> closure of the feasible domain: b along [b_min, b_max), d along [d_min(b), d_max(b)].
struct FeasibleMap {
    int m;
    double u_cap = 1.0 - 1e-6;
    std::array<double, 2> operator()(double u, double v) const {
        const double b = b_min(m) + u * (b_max(m) - b_min(m));
        const double lo = d_min(b, m), hi = d_max(b, m);
        return {b, lo + v * (hi - lo)};
    }
};

inline OptimumRecord maximize_W(int m, int grid_resolution = 64, double refine_tol = 1e-13) {
    if (m < 1) throw std::domain_error("maximize_W: m must be >= 1");
    if (grid_resolution < 2) throw std::domain_error("maximize_W: grid resolution must be >= 2");
    const FeasibleMap map{m};
    long evals = 0;
    auto obj = [&](double u, double v) {
        const auto bd = map(u, v);
        return detail::safe_W(bd[0], bd[1], m);
    };
    const int n = grid_resolution;
    double best = detail::kNegInf;
    std::array<double, 2> arg{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double u = std::min(static_cast<double>(i) / n, map.u_cap);
        for (int j = 0; j < n; ++j) {
            const double v = static_cast<double>(j) / (n - 1);
            const double w = obj(u, v);
            ++evals;
            if (w > best) {
                best = w;
                arg = {u, v};
            }
        }
    }
    const auto x = detail::nelder_mead_max(obj, arg, 1.0 / n, {0.0, 0.0}, {map.u_cap, 1.0}, refine_tol, evals);
    OptimumRecord r;
    r.m = m;
    const auto bd = map(x[0], x[1]);
    r.b = bd[0];
    r.d = bd[1];
    r.value = W(r.b, r.d, m);
    if (r.value < best) {
        const auto g = map(arg[0], arg[1]);
        r.b = g[0];
        r.d = g[1];
        r.value = best;
    }
    r.evaluations = evals;
    r.method = OptimumMethod::GridThenNelderMead;
    return r;
}

inline double d_opt(double b, int m) {
    const double bmin = b_min(m), bmax = b_max(m);
    if (!(b >= bmin * (1.0 - detail::kDomainSlack) && b < bmax))
        throw std::domain_error("d_opt: b outside [b_min, b_max)");
    const double mm = m;
    const double s = 2.0 * std::pow(b, -0.5 * mm) - 1.0;
    const double rhs = -mm * s * std::pow(b, 1.0 + 0.5 * mm) + 2.0 * (2.0 + mm) * t0(b, m);
    return std::pow(rhs / (2.0 * (1.0 + mm) * s), 2.0 / (2.0 + mm));
}

inline double d_star_opt(double b_star, int m) {
    const double lo = b_star_min(m), hi = b_star_max(m);
    if (!(b_star > lo && b_star <= hi * (1.0 + detail::kDomainSlack)))
        throw std::domain_error("d_star_opt: b* outside (b*_min, b*_max]");
    const double mm = m;
    const double s = 2.0 * std::pow(b_star, 1.0 + 0.5 * mm) - 1.0;
    const double rhs = -(2.0 + mm) * s * std::pow(b_star, -0.5 * mm) + 2.0 * mm * t0_star(b_star, m);
    const double q = rhs / (2.0 * (1.0 + mm) * s);
    if (!(q > 0.0)) throw std::domain_error("d_star_opt: no positive solution");
    return std::pow(q, -2.0 / mm);
}

struct DualityResult {
    double b_star = 0.0;
    double residual_t0 = 0.0;    // |t0*(b*) - b/d_opt|
    double residual_dopt = 0.0;  // |d*_opt(b*) - 1/d_opt|
    double residual_W = 0.0;     // |W*(b*, d*_opt) - W(b, d_opt)|
};

inline DualityResult duality_map(double b, int m) {
    const double dop = d_opt(b, m);
    DualityResult r;
    r.b_star = t0(b, m) / dop;
    r.residual_t0 = std::abs(t0_star(r.b_star, m) - b / dop);
    const double dso = d_star_opt(r.b_star, m);
    r.residual_dopt = std::abs(dso - 1.0 / dop);
    r.residual_W = std::abs(W_star(r.b_star, dso, m) - W(b, dop, m));
    return r;
}

// Upper end of the b-range used on the optimal curve.
inline double curve_b_upper(int m) {
    if (m == 1) return b_sp();
    return b_max(m) - 1e-9 * (b_max(m) - b_min(m));
}

inline OptimumRecord maximize_on_curve(int m, int scan = 2000) {
    if (m < 1) throw std::domain_error("maximize_on_curve: m must be >= 1");
    auto f = [&](double b) {
        try {
            return detail::safe_W(b, d_opt(b, m), m);
        } catch (const std::domain_error&) {
            return detail::kNegInf;
        }
    };
    const auto s = detail::scan_then_golden(f, b_min(m), curve_b_upper(m), scan, 1e-12);
    OptimumRecord r;
    r.m = m;
    r.b = s.x;
    r.d = d_opt(s.x, m);
    r.value = s.value;
    r.evaluations = s.evaluations;
    r.method = OptimumMethod::CurveScan;
    return r;
}

struct BracketFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double h_infinity(double x) {
    const double ex = std::exp(x);
    return ex * (1.0 - 2.0 * x) - (2.0 - ex) * std::log(2.0 * (2.0 - ex));
}

inline double x_infinity(double tol = 1e-13) {
    if (!(tol > 0.0)) throw std::domain_error("x_infinity: tol must be positive");
    double lo = std::log(1.5), hi = std::log(2.0) - 1e-12;
    const int n = 1000;
    double prev = h_infinity(lo);
    for (int i = 1; i <= n; ++i) {
        const double v = h_infinity(lo + (hi - lo) * i / n);
        if (!(v < prev)) throw BracketFailure("x_infinity: h is not strictly decreasing on the bracket");
        prev = v;
    }
    if (!(h_infinity(lo) > 0.0 && h_infinity(hi) < 0.0)) throw BracketFailure("x_infinity: no sign change");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (h_infinity(mid) > 0.0) lo = mid;
        else hi = mid;
        if (mid == lo && mid == hi) break;
    }
    return 0.5 * (lo + hi);
}

inline double asymptotic_bound() { return 1.0 / (std::exp(x_infinity()) - 1.0); }

inline double gill_bound(double m) {
    const double q = std::pow(2.0, 2.0 / (2.0 + m));
    return m * q / ((2.0 + m) * (2.0 - q));
}

// ---- uniform bound ----

struct UniformBoundConstants {
    double theta = 2.0 * std::exp(-0.5) - 1.0;
    double K = 4.0 * (2.0 * std::exp(-0.5) - 1.0) * std::exp(1.5);
    double L = -4.0 * std::log(2.0 * (2.0 * std::exp(-0.5) - 1.0));

    double u0(double m) const { return 2.0 * std::log((2.0 + m) / (2.0 * (1.0 + m) * theta)); }

    double P(double m, double M) const {
        const double m2 = m * m, m3 = m2 * m, m4 = m3 * m;
        return (2 * K + 2 * L - 10) * m4 + (10 * K + 6 * L + 2 * M - 45) * m3 + (23 * K + 4 * L + 6 * M - 87) * m2 +
               (24 * K + 4 * M - 96) * m + (9 * K - 36);
    }

    double rational_bound(double m, double M = 3.3) const {
        return 6.0 * m * (m + 1.0) * (m + 1.5) * (m + 2.0) / P(m, M);
    }
};

struct Bound134Row {
    int m = 1;
    bool feasible = false;  // (e^{1/m}, e^{3/m}) in the open domain
    bool maximized = false; // value taken from maximize_W
    double b = 0.0, d = 0.0, value = 0.0;
    double u0 = 0.0;
    double rational = std::numeric_limits<double>::quiet_NaN();  // m >= 25 only
};

inline std::vector<Bound134Row> bound_134(int m_lo, int m_hi) {
    if (m_lo < 1 || m_hi < m_lo) throw std::domain_error("bound_134: need 1 <= m_lo <= m_hi");
    const UniformBoundConstants C;
    std::vector<Bound134Row> rows;
    for (int m = m_lo; m <= m_hi; ++m) {
        Bound134Row r;
        r.m = m;
        r.b = std::exp(1.0 / m);
        r.d = std::exp(3.0 / m);
        r.feasible = all_satisfied(validate(FSpecParams{m, r.b, r.d}));
        r.u0 = C.u0(m);
        if (m <= 3) {
            const auto opt = maximize_W(m);
            r.b = opt.b;
            r.d = opt.d;
            r.value = opt.value;
            r.maximized = true;
        } else {
            r.value = detail::safe_W(r.b, r.d, m);
        }
        if (m >= 25) r.rational = C.rational_bound(m);
        rows.push_back(r);
    }
    return rows;
}

// ---- push property over the general asymptotic program ----

struct PushReport {
    double curve_supremum = 0.0;
    double max_violation = detail::kNegInf;  // max of value - curve_supremum over the capped grid
    double x = 0.0, y = 0.0, z = 0.0;        // argmax
    double beyond_cap_violation = detail::kNegInf;
    long evaluations = 0;
};

inline PushReport push_check(int grid_resolution) {
    if (grid_resolution < 16) throw std::domain_error("push_check: resolution must be >= 16");
    PushReport r;
    r.curve_supremum = asymptotic_bound();
    const int n = grid_resolution;
    const double z_hi = 2.0 - 1e-9;
    for (int i = 1; i <= n; ++i) {
        const double x = 3.0 * i / n;
        const double z_lo = 2.0 * (2.0 - std::exp(x));
        for (int j = 1; j <= n; ++j) {
            const double y = 5.0 * j / n;
            for (int k = 0; k < n; ++k) {
                const double z = z_lo + (z_hi - z_lo) * k / (n - 1);
                const double v = asymptotic_general({x, y, z}) - r.curve_supremum;
                ++r.evaluations;
                if (v > r.max_violation) {
                    r.max_violation = v;
                    r.x = x;
                    r.y = y;
                    r.z = z;
                }
            }
        }
    }
    // sparse look outside the window
    const int s = 16;
    for (int i = 0; i < s; ++i) {
        const double x = 0.1 * std::pow(300.0, static_cast<double>(i) / (s - 1));
        const double z_lo = 2.0 * (2.0 - std::exp(x));
        for (int j = 0; j < s; ++j) {
            const double y = 0.1 * std::pow(500.0, static_cast<double>(j) / (s - 1));
            if (x <= 3.0 && y <= 5.0) continue;
            for (int k = 0; k < s; ++k) {
                const double z = z_lo + (z_hi - z_lo) * k / (s - 1);
                const double v = asymptotic_general({x, y, z});
                ++r.evaluations;
                if (std::isfinite(v)) r.beyond_cap_violation = std::max(r.beyond_cap_violation, v - r.curve_supremum);
            }
        }
    }
    return r;
}

// ---- one-dimensional auxiliary suprema ----

struct SupremumReport {
    std::string name;
    double lo = 0.0, hi = 0.0;
    double argmax = 0.0, value = 0.0, bound = 0.0;
    bool ok = false;
};

inline std::vector<SupremumReport> auxiliary_suprema() {
    const double l15 = std::log(1.5), l2 = std::log(2.0);
    struct Item {
        const char* name;
        double lo, hi, bound;
        std::function<double(double)> f;
    };
    const std::vector<Item> items{
        {"aux-1a", l15, l2, 1.1,
         [](double y) { return (y + std::log(2.0 * std::exp(y) - 2.0)) / (-y + 2.0 * (std::exp(y) - 1.0)); }},
        {"aux-1b", 1e-9, l15, 1.1,
         [](double x) {
             const double e = std::exp(x);
             return (2.0 * x + std::log(2.0) + std::log(4.0 * (2.0 - e) * e - 2.0)) /
                    (2.0 * e - 2.0 * x - 2.0 - std::log(2.0) + 2.0 * (2.0 - e) * (2.0 * e - 1.0));
         }},
        {"aux-2", 1e-6, l15, 1.18,
         [](double x) { return x / (4.0 * std::exp(x) - std::exp(2.0 * x) - x - 3.0); }},
        {"aux-3", l15, l2 - 1e-9, 1.3,
         [](double x) {
             const double e = std::exp(x);
             return (2.0 * x - std::log(2.0 - e) + std::log(2.0 * e - 2.0)) /
                    (2.0 * e - 2.0 * x - 2.0 * std::log(2.0) - std::log(2.0 - e));
         }},
        {"aux-4", 1.0, 2.0, 1.1,
         [l15](double z) {
             const double l = std::log(2.0 / z);
             return (2.0 * l15 + l) / (4.0 - 2.0 * l15 - l - z);
         }},
    };
    std::vector<SupremumReport> out;
    for (const auto& it : items) {
        const auto s = detail::scan_then_golden(it.f, it.lo, it.hi, 4000, 1e-13);
        out.push_back({it.name, it.lo, it.hi, s.x, s.value, it.bound, s.value <= it.bound});
    }
    return out;
}

}  // namespace weaktype
