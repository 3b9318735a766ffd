#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "weaktype/piecewise.hpp"
#include "weaktype/quadrature.hpp"

namespace weaktype {

enum class Kind { Lambda, LambdaStar };

struct OperatorKind {
    Kind kind = Kind::Lambda;
    int m = 1;

    OperatorKind() = default;
    OperatorKind(Kind k, int m_) : kind(k), m(m_) {
        if (m_ < 1) throw std::domain_error("operator order m must be >= 1");
    }
    double half() const { return 0.5 * m; }
};

inline OperatorKind lambda_op(int m) { return {Kind::Lambda, m}; }
inline OperatorKind lambda_star_op(int m) { return {Kind::LambdaStar, m}; }

struct SuperlevelResult {
    double measure = 0.0;
    std::vector<std::pair<double, double>> intervals;
};

struct CertificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Level sets are taken at threshold * (1 - kLevelSlack) so that segments where
// |Tf| equals the threshold identically survive rounding.
inline constexpr double kLevelSlack = 1e-10;

inline double apply_closed_form(const OperatorKind& op, const PiecewisePowerFunction& f, double t) {
    if (!(t > 0.0)) throw std::domain_error("apply: t must be positive");
    const double h = op.half();
    const double m = op.m;
    if (op.kind == Kind::Lambda) {
        const double lo = f.support_lo();
        const double I = (f.empty() || t <= lo) ? 0.0 : moment_integral(f, h, lo, t);
        return (1.0 + m) * I / std::pow(t, 1.0 + h) - evaluate(f, t);
    }
    const double hi = f.support_hi();
    const double I = (f.empty() || t >= hi) ? 0.0 : moment_integral(f, -1.0 - h, std::max(t, f.support_lo()), hi);
    return (1.0 + m) * std::pow(t, h) * I - evaluate(f, t);
}

inline double apply_quadrature_oracle(const OperatorKind& op, const PiecewisePowerFunction& f, double t,
                                      double tol) {
    if (!(t > 0.0)) throw std::domain_error("apply: t must be positive");
    const double h = op.half();
    const double m = op.m;
    const bool lam = op.kind == Kind::Lambda;
    const double w = lam ? h : -1.0 - h;
    const double scale = lam ? (1.0 + m) / std::pow(t, 1.0 + h) : (1.0 + m) * std::pow(t, h);
    const std::size_t n = std::max<std::size_t>(1, f.pieces().size());
    const double itol = tol / scale / static_cast<double>(n);
    double I = 0.0;
    for (const auto& q : f.pieces()) {
        const double a = lam ? q.t_lo : std::max(q.t_lo, t);
        const double b = lam ? std::min(q.t_hi, t) : q.t_hi;
        if (!(a < b)) continue;
        auto g = [&](double s) { return (q.c0 + q.c1 * std::pow(s, q.p)) * std::pow(s, w); };
        if (a > 0.0) {
            I += adaptive_simpson(g, a, b, itol);
        } else {
            // s = u^2 tames the algebraic endpoint behaviour at 0
            I += adaptive_simpson([&](double u) { return u > 0.0 ? 2.0 * u * g(u * u) : 0.0; }, 0.0, std::sqrt(b), itol);
        }
    }
    return scale * I - evaluate(f, t);
}

namespace detail {

// g(t) = (a0 + a1 ln t) t^q + b1 t^p + b0 on one segment between breakpoints.
struct SegmentExpr {
    double a0 = 0.0, a1 = 0.0, q = 0.0, b1 = 0.0, p = 0.0, b0 = 0.0;

    double operator()(double t) const {
        double v = b0;
        if (a0 != 0.0 || a1 != 0.0) v += (a0 + a1 * std::log(t)) * std::pow(t, q);
        if (b1 != 0.0) v += b1 * std::pow(t, p);
        return v;
    }

    std::optional<double> critical_point() const {
        if (a1 != 0.0) {
            if (q == 0.0) return std::nullopt;
            return std::exp(-(a1 + q * a0) / (q * a1));
        }
        if (a0 == 0.0 || b1 == 0.0 || p == 0.0 || q == p || q == 0.0) return std::nullopt;
        const double r = -p * b1 / (q * a0);
        if (!(r > 0.0)) return std::nullopt;
        return std::pow(r, 1.0 / (q - p));
    }

    // Root of g = level on [u, v] where g is monotone and changes sign.
    double solve(double level, double u, double v) const {
        if (a1 == 0.0 && (a0 == 0.0) != (b1 == 0.0)) {
            const double c = a0 != 0.0 ? a0 : b1;
            const double e = a0 != 0.0 ? q : p;
            const double r = (level - b0) / c;
            if (r > 0.0 && e != 0.0) {
                const double t = std::pow(r, 1.0 / e);
                if (t >= u && t <= v) return t;
            }
        }
        double lo = u, hi = v;
        const double slo = (*this)(lo) - level;
        for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double s = (*this)(mid) - level;
            if ((s < 0.0) == (slo < 0.0)) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }
};

inline SegmentExpr lambda_segment(const PiecewisePowerFunction& f, double m, double lo, const PowerPiece* q) {
    const double h = 0.5 * m;
    SegmentExpr g;
    g.q = -1.0 - h;
    const double mass = (lo > f.support_lo() && !f.empty()) ? moment_integral(f, h, f.support_lo(), lo) : 0.0;
    double a0 = mass;
    if (q) {
        const double lo_pow = lo > 0.0 ? std::pow(lo, 1.0 + h) : 0.0;
        a0 -= q->c0 * lo_pow / (1.0 + h);
        g.b0 = q->c0 * ((1.0 + m) / (1.0 + h) - 1.0);
        const double e1 = q->p + 1.0 + h;
        if (std::abs(e1) < kLogBranch) {
            if (lo <= 0.0) throw std::domain_error("divergent integral at 0");
            a0 -= q->c1 * std::log(lo);
            g.a1 = (1.0 + m) * q->c1;
            g.a0 = (1.0 + m) * a0 - q->c1;
            return g;
        }
        if (lo <= 0.0 && e1 < 0.0) throw std::domain_error("divergent integral at 0");
        a0 -= q->c1 * (lo > 0.0 ? std::pow(lo, e1) : 0.0) / e1;
        g.b1 = q->c1 * ((1.0 + m) / e1 - 1.0);
        g.p = q->p;
    }
    g.a0 = (1.0 + m) * a0;
    return g;
}

inline SegmentExpr lambda_star_segment(const PiecewisePowerFunction& f, double m, double hi, const PowerPiece* q) {
    const double h = 0.5 * m;
    SegmentExpr g;
    g.q = h;
    const double tail = (!f.empty() && hi < f.support_hi()) ? moment_integral(f, -1.0 - h, hi, f.support_hi()) : 0.0;
    double a0 = tail;
    if (q) {
        a0 -= (2.0 / m) * q->c0 * std::pow(hi, -h);
        g.b0 = q->c0 * (2.0 * (1.0 + m) / m - 1.0);
        const double e = q->p - h;
        if (std::abs(e) < kLogBranch) {
            a0 += q->c1 * std::log(hi);
            g.a1 = -(1.0 + m) * q->c1;
            g.a0 = (1.0 + m) * a0 - q->c1;
            return g;
        }
        a0 += q->c1 * std::pow(hi, e) / e;
        g.b1 = q->c1 * (-(1.0 + m) / e - 1.0);
        g.p = q->p;
    }
    g.a0 = (1.0 + m) * a0;
    return g;
}

inline void certify_crossing(const OperatorKind& op, const PiecewisePowerFunction& f, double t, double level) {
    const double s = std::max(1.0, t);
    auto h = [&](double x) { return std::abs(apply_quadrature_oracle(op, f, x, 1e-13)) - level; };
    double lo = t - 1e-8 * s, hi = t + 1e-8 * s;
    const double hlo = h(lo), hhi = h(hi);
    if ((hlo < 0.0) == (hhi < 0.0))
        throw CertificationFailure("superlevel crossing at t=" + std::to_string(t) +
                                   " not confirmed by the quadrature oracle within 1e-8");
    while (hi - lo > 1e-10 * s) {
        const double mid = 0.5 * (lo + hi);
        if ((h(mid) < 0.0) == (hlo < 0.0)) lo = mid;
        else hi = mid;
    }
}

inline void add_interval(std::vector<std::pair<double, double>>& out, double a, double b) {
    if (!(a < b)) return;
    if (!out.empty() && a <= out.back().second + 1e-12 * std::max(1.0, out.back().second)) {
        out.back().second = std::max(out.back().second, b);
        return;
    }
    out.emplace_back(a, b);
}

// Superlevel intervals of |g| >= level on the finite segment [lo, hi].
inline void segment_superlevel(const OperatorKind& op, const PiecewisePowerFunction& f, const SegmentExpr& g,
                               double lo, double hi, double level, bool certify,
                               std::vector<std::pair<double, double>>& out) {
    const double lo_eff = lo > 0.0 ? lo : hi * 1e-14;
    std::vector<double> nodes{lo_eff};
    if (auto c = g.critical_point(); c && *c > lo_eff && *c < hi) nodes.push_back(*c);
    nodes.push_back(hi);
    std::vector<double> pts = nodes;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double gu = g(nodes[i]), gv = g(nodes[i + 1]);
        for (double lv : {level, -level}) {
            if ((gu - lv) * (gv - lv) < 0.0) {
                const double r = g.solve(lv, nodes[i], nodes[i + 1]);
                if (certify) certify_crossing(op, f, r, level);
                pts.push_back(r);
            }
        }
    }
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        if (!(a < b)) continue;
        if (std::abs(g(0.5 * (a + b))) >= level) add_interval(out, i == 0 ? lo : a, b);
    }
}

}  // namespace detail

inline SuperlevelResult superlevel_measure(const OperatorKind& op, const PiecewisePowerFunction& f,
                                           double threshold = 1.0, bool certify = true) {
    if (!(threshold > 0.0)) throw std::domain_error("threshold must be positive");
    SuperlevelResult res;
    if (f.empty()) return res;
    const double level = threshold * (1.0 - kLevelSlack);
    const double m = op.m;
    const double h = op.half();

    std::vector<double> br;
    for (const auto& q : f.pieces()) {
        br.push_back(q.t_lo);
        br.push_back(q.t_hi);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());

    auto piece_at = [&](double mid) -> const PowerPiece* {
        for (const auto& q : f.pieces())
            if (q.contains(mid)) return &q;
        return nullptr;
    };

    auto& out = res.intervals;
    if (op.kind == Kind::LambdaStar && br.front() > 0.0) {
        // (0, first breakpoint): Tf = a0 t^{m/2}, |Tf| increasing
        const auto g = detail::lambda_star_segment(f, m, br.front(), nullptr);
        if (std::abs(g(br.front())) >= level) {
            const double tc = std::pow(level / std::abs(g.a0), 1.0 / h);
            if (certify) detail::certify_crossing(op, f, tc, level);
            detail::add_interval(out, tc, br.front());
        }
    }
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double lo = br[i], hi = br[i + 1];
        const PowerPiece* q = piece_at(0.5 * (lo + hi));
        const auto g = op.kind == Kind::Lambda ? detail::lambda_segment(f, m, lo, q)
                                               : detail::lambda_star_segment(f, m, hi, q);
        detail::segment_superlevel(op, f, g, lo, hi, level, certify, out);
    }
    if (op.kind == Kind::Lambda) {
        // beyond the support: Tf = a0 t^{-1-m/2}, |Tf| decreasing
        const double lo = br.back();
        const auto g = detail::lambda_segment(f, m, lo, nullptr);
        if (g.a0 != 0.0 && std::abs(g(lo)) >= level) {
            const double tc = std::pow(std::abs(g.a0) / level, 1.0 / (1.0 + h));
            if (certify) detail::certify_crossing(op, f, tc, level);
            detail::add_interval(out, lo, tc);
        }
    }
    for (const auto& iv : out) res.measure += iv.second - iv.first;
    return res;
}

inline double eigenvalue(const OperatorKind& op, double alpha) {
    const double h = op.half();
    if (op.kind == Kind::Lambda) {
        if (!(alpha > -1.0 - h)) throw std::domain_error("Lambda eigenfunction needs alpha > -1-m/2");
        return (h - alpha) / (1.0 + alpha + h);
    }
    if (!(alpha < h)) throw std::domain_error("LambdaStar eigenfunction needs alpha < m/2");
    return (1.0 + alpha + h) / (h - alpha);
}

inline constexpr double kStarTruncation = 1e6;

inline double eigen_check(const OperatorKind& op, double alpha, const std::vector<double>& t_samples) {
    const double lam = eigenvalue(op, alpha);
    if (t_samples.empty()) return 0.0;
    double tmax = 0.0;
    for (double t : t_samples) {
        if (!(t > 0.0)) throw std::domain_error("eigen_check: samples must be positive");
        tmax = std::max(tmax, t);
    }
    double T = 2.0 * tmax;
    if (op.kind == Kind::LambdaStar) {
        T = kStarTruncation;
        if (tmax > T * 1e-3) throw std::domain_error("eigen_check: LambdaStar samples must satisfy t <= 1e3");
    }
    const PiecewisePowerFunction f({PowerPiece{0.0, T, 0.0, 1.0, alpha}});
    double worst = 0.0;
    for (double t : t_samples)
        worst = std::max(worst, std::abs(apply_closed_form(op, f, t) - lam * std::pow(t, alpha)));
    return worst;
}

}  // namespace weaktype
