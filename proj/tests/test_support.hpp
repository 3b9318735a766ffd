#pragma once

// Test-only helpers: an independent quadrature (composite Gauss-Legendre) and
// fixed-seed generators for property tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace testsupport {

// 5-point Gauss-Legendre on n equal panels of [a, b].
template <class F>
double gauss_legendre(const F& f, double a, double b, int n = 2000) {
    static constexpr std::array<double, 5> x{0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                             -0.9061798459386640};
    static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                             0.2369268850561891, 0.2369268850561891};
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = a + (i + 0.5) * h;
        double p = 0.0;
        for (int k = 0; k < 5; ++k) p += w[k] * f(c + 0.5 * h * x[k]);
        s += 0.5 * h * p;
    }
    return s;
}

// Geometric panels: suits integrands spanning several decades.
template <class F>
double gauss_legendre_geometric(const F& f, double a, double b, int n = 4000) {
    const double r = std::pow(b / a, 1.0 / n);
    double s = 0.0, lo = a;
    for (int i = 0; i < n; ++i) {
        const double hi = (i == n - 1) ? b : lo * r;
        s += gauss_legendre(f, lo, hi, 1);
        lo = hi;
    }
    return s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

private:
    std::mt19937_64 eng_;
};

}  // namespace testsupport
