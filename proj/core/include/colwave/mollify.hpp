#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "colwave/geometry.hpp"

namespace colwave {

/// Compactly supported smooth bump with unit integral and vanishing moments
/// up to `moment_order`.  Built as bump * polynomial where the polynomial
/// coefficients solve the moment linear system.
class Mollifier {
  public:
    Mollifier(double support_radius, int moment_order, int quadrature_resolution,
              std::vector<double> poly_coeffs);

    double operator()(double x) const;
    double derivative(double x) const;

    double support_radius() const { return d_; }
    int moment_order() const { return q_; }
    int quadrature_resolution() const { return quad_res_; }
    const std::vector<double>& poly_coeffs() const { return poly_; }

  private:
    double d_;
    int q_;
    int quad_res_;
    std::vector<double> poly_;  // includes the normalization
};

Mollifier build_mollifier(double support_radius, int moment_order,
                          int quadrature_resolution = 4096);

/// Bounded net eps -> R; the generalized constants a_eps of the transport
/// example, with |a_eps| <= bound on every ladder.
class GeneralizedConstant {
  public:
    GeneralizedConstant(std::function<double(double)> eval, double bound)
        : eval_(std::move(eval)), bound_(bound) {}

    double operator()(double eps) const { return eval_(eps); }
    double bound() const { return bound_; }

  private:
    std::function<double(double)> eval_;
    double bound_;
};

GeneralizedConstant constant_net(double b);

enum class OscillationMode { DyadicAlternating, LogSinusoidal };

/// dyadic-alternating: a_eps = b1 if floor(log2(1/eps)) is even, else b2.
/// log-sinusoidal:     a_eps = b1 + (b2-b1)(1 + sin ln(1/eps))/2.
GeneralizedConstant oscillating_constant(double b1, double b2, OscillationMode mode);

/// An evaluable eps-parametrized family (eps, x) -> C on R^n.  The
/// computational stand-in for a generalized function in the fixed-mollifier
/// slice; evaluators are pure and safe to call concurrently.
class ScaledFamily {
  public:
    using Evaluator = std::function<std::complex<double>(double, const Vec&)>;

    ScaledFamily(int dim, Evaluator eval, double eps_floor, std::string label)
        : dim_(dim), eval_(std::move(eval)), eps_floor_(eps_floor), label_(std::move(label)) {}

    std::complex<double> operator()(double eps, const Vec& x) const { return eval_(eps, x); }

    int dim() const { return dim_; }
    double eps_floor() const { return eps_floor_; }
    const std::string& label() const { return label_; }

  private:
    int dim_;
    Evaluator eval_;
    double eps_floor_;
    std::string label_;
};

/// (eps, x) -> eps^{-n} prod_i phi(x_i/eps); the embedded delta in dimension n.
ScaledFamily scaled_tensor(const Mollifier& phi, int dim);

/// A fixed smooth function promoted to an eps-independent family.
ScaledFamily smooth_family(int dim, std::function<double(const Vec&)> f, std::string label);

/// 1-D family of the embedded 1/(x+i0):
///   a_eps(s) = int_0^inf [phi_eps(s-z) - phi_eps(s+z)]/z dz - i pi phi_eps(s).
/// Self-similar: a_eps(s) = A(s/eps)/eps with A precomputed once (table on
/// |sigma| <= 4d, moment series beyond), so evaluation is O(1).
ScaledFamily pv_complex_family(const Mollifier& phi);

/// u_eps(x,y) = (1/eps) phi(x/eps - y/sqrt(eps)).
ScaledFamily family_U(const Mollifier& phi);

/// v_eps(x,y) = (1/eps) phi(x/eps + y/sqrt(eps)).
ScaledFamily family_V(const Mollifier& phi);

/// b_eps(x,y) = a_eps(sqrt(eps) x + y) with a_eps from pv_complex_family.
ScaledFamily family_B(const Mollifier& phi);

/// Transport solution U(eps,(x,t)) = U0(eps, x - a_eps t).
ScaledFamily transport_solution(const ScaledFamily& u0, const GeneralizedConstant& a);

/// Standard eps ladder 2^-k, k = k_min..k_max.
std::vector<double> eps_ladder(int k_min, int k_max);

}  // namespace colwave
