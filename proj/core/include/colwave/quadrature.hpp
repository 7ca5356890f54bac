#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace colwave {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> kGL8Nodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGL8Weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// Composite 8-point Gauss-Legendre over [a, b] with `panels` subintervals.
// Never evaluates f at the interval endpoints.
template <typename F>
double gauss_legendre(F&& f, double a, double b, int panels) {
    double total = 0.0;
    double hp = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * hp;
        double mid = lo + 0.5 * hp;
        double half = 0.5 * hp;
        double s = 0.0;
        for (int i = 0; i < 8; ++i) s += kGL8Weights[i] * f(mid + half * kGL8Nodes[i]);
        total += s * half;
    }
    return total;
}

// Composite Simpson over [a, b] with n subintervals (n rounded up to even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace colwave
