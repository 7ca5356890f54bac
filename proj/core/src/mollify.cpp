#include "colwave/mollify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "colwave/errors.hpp"
#include "colwave/quadrature.hpp"

namespace colwave {

namespace {

// The C-infinity bump exp(-1/(1-u^2)) on |u| < 1, scaled to radius d.
double base_bump(double x, double d) {
    double u = x / d;
    double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    return std::exp(-1.0 / w);
}

double base_bump_derivative(double x, double d) {
    double u = x / d;
    double w = 1.0 - u * u;
    if (w <= 0.0) return 0.0;
    // d/dx exp(-1/w) = exp(-1/w) * (-2u/d) / w^2
    return std::exp(-1.0 / w) * (-2.0 * u / d) / (w * w);
}

double eval_poly(const std::vector<double>& p, double x) {
    double r = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

double eval_poly_derivative(const std::vector<double>& p, double x) {
    double r = 0.0;
    for (std::size_t i = p.size(); i-- > 1;) r = r * x + p[i] * static_cast<double>(i);
    return r;
}

}  // namespace

Mollifier::Mollifier(double support_radius, int moment_order, int quadrature_resolution,
                     std::vector<double> poly_coeffs)
    : d_(support_radius),
      q_(moment_order),
      quad_res_(quadrature_resolution),
      poly_(std::move(poly_coeffs)) {}

double Mollifier::operator()(double x) const {
    if (std::abs(x) >= d_) return 0.0;
    return eval_poly(poly_, x) * base_bump(x, d_);
}

double Mollifier::derivative(double x) const {
    if (std::abs(x) >= d_) return 0.0;
    return eval_poly_derivative(poly_, x) * base_bump(x, d_) +
           eval_poly(poly_, x) * base_bump_derivative(x, d_);
}

Mollifier build_mollifier(double support_radius, int moment_order, int quadrature_resolution) {
    if (support_radius <= 0) throw ConfigError("build_mollifier: support radius must be > 0");
    if (moment_order < 0) throw ConfigError("build_mollifier: moment order must be >= 0");
    if (quadrature_resolution < 64)
        throw ConfigError("build_mollifier: quadrature resolution too low");

    const double d = support_radius;
    const int q = moment_order;
    const int n = q + 1;

    // Moments mu_m = int x^m b(x) dx of the unnormalized bump.
    std::vector<double> mu(2 * q + 1);
    for (int m = 0; m <= 2 * q; ++m) {
        mu[m] = simpson([&](double x) { return std::pow(x, m) * base_bump(x, d); }, -d, d,
                        quadrature_resolution);
    }

    // Solve int x^k p(x) b(x) dx = delta_{k0} for p of degree q.
    Eigen::MatrixXd M(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) M(k, j) = mu[k + j];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible())
        throw ConfigError("build_mollifier: moment system singular; raise quadrature resolution");
    Eigen::VectorXd coef = lu.solve(rhs);
    if ((M * coef - rhs).norm() > 1e-8 * rhs.norm())
        throw ConfigError("build_mollifier: moment system ill-conditioned");

    std::vector<double> poly(coef.data(), coef.data() + n);

    // Re-normalize against the reference quadrature so the unit-integral
    // invariant holds to 1e-8 regardless of the solve's conditioning.
    Mollifier raw(d, q, quadrature_resolution, poly);
    double mass = simpson([&](double x) { return raw(x); }, -d, d, quadrature_resolution);
    for (double& c : poly) c /= mass;
    return Mollifier(d, q, quadrature_resolution, std::move(poly));
}

GeneralizedConstant constant_net(double b) {
    return GeneralizedConstant([b](double) { return b; }, std::abs(b));
}

GeneralizedConstant oscillating_constant(double b1, double b2, OscillationMode mode) {
    if (!(b1 < b2)) throw ConfigError("oscillating_constant: requires b1 < b2");
    double bound = std::max(std::abs(b1), std::abs(b2));
    switch (mode) {
        case OscillationMode::DyadicAlternating:
            return GeneralizedConstant(
                [b1, b2](double eps) {
                    auto k = static_cast<long long>(std::floor(std::log2(1.0 / eps)));
                    return (k % 2 == 0) ? b1 : b2;
                },
                bound);
        case OscillationMode::LogSinusoidal:
            return GeneralizedConstant(
                [b1, b2](double eps) {
                    return b1 + (b2 - b1) * (1.0 + std::sin(std::log(1.0 / eps))) / 2.0;
                },
                bound);
    }
    throw ConfigError("oscillating_constant: unknown mode");
}

ScaledFamily scaled_tensor(const Mollifier& phi, int dim) {
    if (dim < 1 || dim > 4) throw ConfigError("scaled_tensor: dim must be in 1..4");
    return ScaledFamily(
        dim,
        [phi, dim](double eps, const Vec& x) -> std::complex<double> {
            double v = 1.0;
            for (int i = 0; i < dim; ++i) v *= phi(x[i] / eps);
            return v / std::pow(eps, dim);
        },
        1e-9, "iota_delta_" + std::to_string(dim) + "d");
}

ScaledFamily smooth_family(int dim, std::function<double(const Vec&)> f, std::string label) {
    return ScaledFamily(
        dim, [f = std::move(f)](double, const Vec& x) -> std::complex<double> { return f(x); },
        1e-9, std::move(label));
}

namespace {

// Profile of the embedded 1/(x+i0) at eps = 1:
//   A(sigma) = H(sigma) - i pi phi(sigma),
//   H(sigma) = int_0^{|sigma|+d} [phi(sigma-w) - phi(sigma+w)]/w dw.
// a_eps(s) = A(s/eps)/eps by the substitution z = eps w.  H is tabulated on
// |sigma| <= 4d; beyond 3.5d the moment series sum_k m_k / sigma^{k+1}
// converges geometrically (ratio <= 2/7) and bounds the tail analytically.
struct HilbertProfile {
    double d;
    double sigma_max;
    double step;
    std::vector<double> table;    // H on [-sigma_max, sigma_max]
    std::vector<double> moments;  // m_k = int t^k phi(t) dt

    explicit HilbertProfile(const Mollifier& phi) : d(phi.support_radius()) {
        sigma_max = 4.0 * d;
        const int npts = 32769;
        step = 2.0 * sigma_max / (npts - 1);
        table.resize(npts);
        for (int i = 0; i < npts; ++i) {
            double sigma = -sigma_max + i * step;
            table[i] = direct(phi, sigma);
        }
        const int nmom = 48;
        moments.resize(nmom);
        for (int k = 0; k < nmom; ++k) {
            moments[k] = gauss_legendre([&](double t) { return std::pow(t, k) * phi(t); }, -d, d,
                                        256);
        }
    }

    static double direct(const Mollifier& phi, double sigma) {
        double upper = std::abs(sigma) + phi.support_radius();
        return gauss_legendre(
            [&](double w) { return (phi(sigma - w) - phi(sigma + w)) / w; }, 0.0, upper, 256);
    }

    double series(double sigma) const {
        double inv = 1.0 / sigma;
        double pw = inv;
        double acc = 0.0;
        for (double m : moments) {
            acc += m * pw;
            pw *= inv;
        }
        return acc;
    }

    double operator()(double sigma) const {
        if (std::abs(sigma) > 3.5 * d) return series(sigma);
        // Catmull-Rom cubic interpolation in the table.
        double u = (sigma + sigma_max) / step;
        auto i = static_cast<long>(std::floor(u));
        if (i < 1) i = 1;
        if (i > static_cast<long>(table.size()) - 3) i = static_cast<long>(table.size()) - 3;
        double t = u - i;
        double p0 = table[i - 1], p1 = table[i], p2 = table[i + 1], p3 = table[i + 2];
        return p1 + 0.5 * t *
                        (p2 - p0 +
                         t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
    }
};

}  // namespace

ScaledFamily pv_complex_family(const Mollifier& phi) {
    auto profile = std::make_shared<HilbertProfile>(phi);
    const double pi = 4.0 * std::atan(1.0);
    return ScaledFamily(
        1,
        [profile, phi, pi](double eps, const Vec& x) -> std::complex<double> {
            double sigma = x[0] / eps;
            return {(*profile)(sigma) / eps, -pi * phi(sigma) / eps};
        },
        1e-9, "pv_one_over_x_plus_i0");
}

ScaledFamily family_U(const Mollifier& phi) {
    return ScaledFamily(
        2,
        [phi](double eps, const Vec& x) -> std::complex<double> {
            return phi(x[0] / eps - x[1] / std::sqrt(eps)) / eps;
        },
        1e-9, "family_U");
}

ScaledFamily family_V(const Mollifier& phi) {
    return ScaledFamily(
        2,
        [phi](double eps, const Vec& x) -> std::complex<double> {
            return phi(x[0] / eps + x[1] / std::sqrt(eps)) / eps;
        },
        1e-9, "family_V");
}

ScaledFamily family_B(const Mollifier& phi) {
    ScaledFamily a = pv_complex_family(phi);
    return ScaledFamily(
        2,
        [a](double eps, const Vec& x) -> std::complex<double> {
            Vec s{std::sqrt(eps) * x[0] + x[1]};
            return a(eps, s);
        },
        a.eps_floor(), "family_B");
}

ScaledFamily transport_solution(const ScaledFamily& u0, const GeneralizedConstant& a) {
    if (u0.dim() != 1) throw DomainError("transport_solution: initial data must be 1-D");
    return ScaledFamily(
        2,
        [u0, a](double eps, const Vec& xt) -> std::complex<double> {
            Vec s{xt[0] - a(eps) * xt[1]};
            return u0(eps, s);
        },
        u0.eps_floor(), "transport[" + u0.label() + "]");
}

std::vector<double> eps_ladder(int k_min, int k_max) {
    if (k_min > k_max) throw ConfigError("eps_ladder: k_min > k_max");
    std::vector<double> out;
    for (int k = k_min; k <= k_max; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

}  // namespace colwave
