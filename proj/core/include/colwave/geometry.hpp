#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace colwave {

// Small fixed-capacity vector for points and covector directions.
// Dimensions 1..4 cover everything in this project (base spaces up to
// the 4-D tensor product, frequency spaces likewise).
struct Vec {
    int dim = 0;
    std::array<double, 4> c{};

    Vec() = default;
    Vec(std::initializer_list<double> xs) {
        if (xs.size() > 4) throw std::invalid_argument("Vec: dim > 4");
        dim = static_cast<int>(xs.size());
        int i = 0;
        for (double x : xs) c[i++] = x;
    }
    static Vec zero(int n) {
        Vec v;
        v.dim = n;
        return v;
    }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec operator+(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < dim; ++i) r.c[i] += o.c[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r = *this;
        for (int i = 0; i < dim; ++i) r.c[i] -= o.c[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r = *this;
        for (int i = 0; i < dim; ++i) r.c[i] *= s;
        return r;
    }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

inline Vec normalized(const Vec& v) {
    double n = norm(v);
    if (n == 0) throw std::domain_error("normalized: zero vector");
    return v * (1.0 / n);
}

// Geodesic distance between the directions of two nonzero vectors, in radians.
inline double angular_distance(const Vec& a, const Vec& b) {
    double cosang = dot(a, b) / (norm(a) * norm(b));
    if (cosang > 1.0) cosang = 1.0;
    if (cosang < -1.0) cosang = -1.0;
    return std::acos(cosang);
}

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

// Concatenate (x, y) into a product-space vector.
inline Vec concat(const Vec& a, const Vec& b) {
    if (a.dim + b.dim > 4) throw std::invalid_argument("concat: dim > 4");
    Vec r = Vec::zero(a.dim + b.dim);
    for (int i = 0; i < a.dim; ++i) r[i] = a[i];
    for (int i = 0; i < b.dim; ++i) r[a.dim + i] = b[i];
    return r;
}

}  // namespace colwave
