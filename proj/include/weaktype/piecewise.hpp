#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace weaktype {

// Value c0 + c1*t^p on (t_lo, t_hi], zero elsewhere.
struct PowerPiece {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double p = 0.0;

    double value(double t) const { return c0 + c1 * std::pow(t, p); }
    bool contains(double t) const { return t > t_lo && t <= t_hi; }
};

class PiecewisePowerFunction {
public:
    PiecewisePowerFunction() = default;

    explicit PiecewisePowerFunction(std::vector<PowerPiece> pieces) : pieces_(std::move(pieces)) {
        std::sort(pieces_.begin(), pieces_.end(),
                  [](const PowerPiece& a, const PowerPiece& b) { return a.t_lo < b.t_lo; });
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto& q = pieces_[i];
            if (!(q.t_lo >= 0.0) || !(q.t_lo < q.t_hi) || !std::isfinite(q.t_hi))
                throw std::invalid_argument("piece interval must satisfy 0 <= t_lo < t_hi < inf");
            if (i > 0 && q.t_lo < pieces_[i - 1].t_hi)
                throw std::invalid_argument("pieces overlap");
        }
    }

    const std::vector<PowerPiece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }

    double support_lo() const { return pieces_.empty() ? 0.0 : pieces_.front().t_lo; }
    double support_hi() const { return pieces_.empty() ? 0.0 : pieces_.back().t_hi; }

private:
    std::vector<PowerPiece> pieces_;
};

namespace detail {

inline constexpr double kLogBranch = 1e-13;
inline constexpr double kBoundaryRoot = 1e-12;

// Integral of s^e over [lo, hi].
inline double power_integral(double e, double lo, double hi) {
    if (std::abs(e + 1.0) < kLogBranch) {
        if (lo <= 0.0) throw std::domain_error("divergent integral of 1/s at 0");
        return std::log(hi / lo);
    }
    const double k = e + 1.0;
    if (lo <= 0.0 && k < 0.0) throw std::domain_error("divergent integral at 0");
    const double at_lo = lo <= 0.0 ? 0.0 : std::pow(lo, k);
    return (std::pow(hi, k) - at_lo) / k;
}

inline double piece_moment(const PowerPiece& q, double w, double lo, double hi) {
    double r = 0.0;
    if (q.c0 != 0.0) r += q.c0 * power_integral(w, lo, hi);
    if (q.c1 != 0.0) r += q.c1 * power_integral(q.p + w, lo, hi);
    return r;
}

// Interior root of c0 + c1 t^p on (t_lo, t_hi), or NaN.
inline double piece_root(const PowerPiece& q) {
    if (q.c1 == 0.0 || q.p == 0.0) return std::nan("");
    const double r = -q.c0 / q.c1;
    if (!(r > 0.0)) return std::nan("");
    const double t = std::pow(r, 1.0 / q.p);
    const double scale = std::max(1.0, q.t_hi);
    if (t <= q.t_lo + kBoundaryRoot * scale || t >= q.t_hi - kBoundaryRoot * scale) return std::nan("");
    return t;
}

}  // namespace detail

inline double evaluate(const PiecewisePowerFunction& f, double t) {
    if (!(t > 0.0)) throw std::domain_error("evaluate: t must be positive");
    for (const auto& q : f.pieces())
        if (q.contains(t)) return q.value(t);
    return 0.0;
}

inline double moment_integral(const PiecewisePowerFunction& f, double weight_exponent, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("moment_integral: need lo < hi");
    double total = 0.0;
    for (const auto& q : f.pieces()) {
        const double a = std::max(lo, q.t_lo);
        const double b = std::min(hi, q.t_hi);
        if (a < b) total += detail::piece_moment(q, weight_exponent, a, b);
    }
    return total;
}

inline double l1_norm(const PiecewisePowerFunction& f) {
    double total = 0.0;
    for (const auto& q : f.pieces()) {
        std::vector<double> cuts{q.t_lo};
        const double r = detail::piece_root(q);
        if (!std::isnan(r)) cuts.push_back(r);
        cuts.push_back(q.t_hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double v = detail::piece_moment(q, 0.0, cuts[i], cuts[i + 1]);
            total += std::abs(v);
        }
    }
    return total;
}

inline std::vector<double> sign_change_points(const PiecewisePowerFunction& f) {
    std::vector<double> out;
    for (const auto& q : f.pieces()) {
        const double r = detail::piece_root(q);
        if (!std::isnan(r)) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// t -> f(t / lambda)
inline PiecewisePowerFunction rescale(const PiecewisePowerFunction& f, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("rescale: lambda must be positive");
    std::vector<PowerPiece> out;
    for (auto q : f.pieces()) {
        q.t_lo *= lambda;
        q.t_hi *= lambda;
        q.c1 *= std::pow(lambda, -q.p);
        out.push_back(q);
    }
    return PiecewisePowerFunction(std::move(out));
}

}  // namespace weaktype
