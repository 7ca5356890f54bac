#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>

#include "colwave/errors.hpp"
#include "colwave/mollify.hpp"
#include "colwave/quadrature.hpp"
#include "colwave/spectral.hpp"

using namespace colwave;

namespace {

constexpr double kPi = 3.14159265358979323846;

CutoffWindow window_1d(double center, double r1, double r2) {
    CutoffWindow w;
    w.center = Vec{center};
    w.plateau_radius = r1;
    w.support_radius = r2;
    return w;
}

std::complex<double> ft_oracle_1d(const std::function<double(double)>& f, double a, double b,
                                  double xi) {
    double re = gauss_legendre([&](double x) { return f(x) * std::cos(-x * xi); }, a, b, 512);
    double im = gauss_legendre([&](double x) { return f(x) * std::sin(-x * xi); }, a, b, 512);
    return {re, im};
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("cutoff window plateau, support and smooth transition") {
    CutoffWindow w = window_1d(0.0, 0.25, 0.5);
    CHECK(w(Vec{0.0}) == 1.0);
    CHECK(w(Vec{0.2}) == 1.0);
    CHECK(w(Vec{0.5}) == 0.0);
    CHECK(w(Vec{0.7}) == 0.0);
    double mid = w(Vec{0.375});
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    // monotone on the transition
    CHECK(w(Vec{0.3}) > w(Vec{0.4}));
    CHECK(w(Vec{0.4}) > w(Vec{0.45}));
}

TEST_CASE("evaluate_on_grid peak and mass of the delta family") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    double eps = 1.0 / 16;
    std::array<int, 4> shape{512, 0, 0, 0};
    SampledField f = evaluate_on_grid(d1, eps, Vec{-1.0}, Vec{1.0}, shape);
    // node 256 is exactly x = 0
    CHECK(f.values[256].real() == doctest::Approx(phi(0.0) / eps));
    // mass conservation across the ladder on grids resolving the bump
    for (double e : eps_ladder(4, 12)) {
        std::array<int, 4> s2{256, 0, 0, 0};
        SampledField g = evaluate_on_grid(d1, e, Vec{-2.0 * e}, Vec{2.0 * e}, s2);
        double mass = 0.0;
        for (const auto& v : g.values) mass += v.real() * g.h[0];
        CHECK(std::abs(mass - 1.0) <= 1e-6);
    }
}

TEST_CASE("resolution guard refuses with the required shape") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    std::array<int, 4> shape{128, 0, 0, 0};
    try {
        evaluate_on_grid(d1, 1.0 / 256, Vec{-1.0}, Vec{1.0}, shape);
        FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
        // need h <= eps/8: shape >= 2 * 8 * 256 = 4096
        CHECK(e.required_shape[0] >= 4096);
        CHECK(e.dim == 1);
    }
}

TEST_CASE("family U slice is supported in the expected band") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily u = family_U(phi);
    double eps = 1.0 / 16;
    std::array<int, 4> shape{256, 256, 0, 0};
    SampledField f = evaluate_on_grid(u, eps, Vec{-0.5, -0.5}, Vec{0.5, 0.5}, shape);
    for (int i = 0; i < 256; ++i) {
        for (int j = 0; j < 256; ++j) {
            double x = f.node(0, i), y = f.node(1, j);
            double arg = x / eps - y / std::sqrt(eps);
            double v = std::abs(f.values[static_cast<std::size_t>(i) * 256 + j]);
            if (std::abs(arg) > 1.0)
                CHECK(v == 0.0);
        }
    }
}

TEST_CASE("windowed FT matches the quadrature oracle for a constant field") {
    ScaledFamily one = smooth_family(1, [](const Vec&) { return 1.0; }, "one");
    std::array<int, 4> shape{1024, 0, 0, 0};
    SampledField f = evaluate_on_grid(one, 1.0, Vec{-1.0}, Vec{1.0}, shape);
    CutoffWindow w = window_1d(0.0, 0.3, 0.6);
    SampledField ft = windowed_ft(f, w);
    auto wf = [&](double x) { return w(Vec{x}); };
    for (int k = 1; k <= 10; ++k) {
        int idx = ft.shape[0] / 2 + 17 * k;  // on-grid frequencies
        double xi = ft.node(0, idx);
        std::complex<double> oracle = ft_oracle_1d(wf, -0.6, 0.6, xi);
        CHECK(std::abs(ft.values[idx] - oracle) <= 1e-8 * (1.0 + std::abs(oracle)));
    }
}

TEST_CASE("real even input gives real even output") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    std::array<int, 4> shape{512, 0, 0, 0};
    SampledField f = evaluate_on_grid(d1, 1.0 / 16, Vec{-1.0}, Vec{1.0}, shape);
    CutoffWindow w = window_1d(0.0, 0.25, 0.5);
    SampledField ft = windowed_ft(f, w);
    int n = ft.shape[0];
    for (int k = 1; k < n / 2; ++k) {
        std::complex<double> plus = ft.values[n / 2 + k];
        std::complex<double> minus = ft.values[n / 2 - k];
        CHECK(std::abs(plus.imag()) <= 1e-10 * (1.0 + std::abs(plus)));
        CHECK(std::abs(plus - minus) <= 1e-10 * (1.0 + std::abs(plus)));
    }
}

TEST_CASE("windowed delta-family FT matches |phi_hat(eps xi)|") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    double eps = 1.0 / 32;
    std::array<int, 4> shape{2048, 0, 0, 0};
    SampledField f = evaluate_on_grid(d1, eps, Vec{-1.0}, Vec{1.0}, shape);
    CutoffWindow w = window_1d(0.0, 0.25, 0.5);  // identically 1 on the support
    SampledField ft = windowed_ft(f, w);
    auto phif = [&](double x) { return phi(x); };
    for (int k = 1; k <= 8; ++k) {
        int idx = ft.shape[0] / 2 + 50 * k;
        double xi = ft.node(0, idx);
        std::complex<double> oracle = ft_oracle_1d(phif, -1.0, 1.0, eps * xi);
        CHECK(std::abs(std::abs(ft.values[idx]) - std::abs(oracle)) <=
              1e-6 * (1.0 + std::abs(oracle)));
    }
}

TEST_CASE("Plancherel identity on the grid") {
    Mollifier phi = build_mollifier(1.0, 0);
    for (int dim : {1, 2}) {
        ScaledFamily d = scaled_tensor(phi, dim);
        std::array<int, 4> shape{dim == 1 ? 1024 : 256, 256, 0, 0};
        Vec lo = dim == 1 ? Vec{-1.0} : Vec{-1.0, -1.0};
        Vec hi = dim == 1 ? Vec{1.0} : Vec{1.0, 1.0};
        SampledField f = evaluate_on_grid(d, 1.0 / 16, lo, hi, shape);
        CutoffWindow w;
        w.center = Vec::zero(dim);
        w.plateau_radius = 0.25;
        w.support_radius = 0.5;
        SampledField fw = apply_window(f, w);
        SampledField ft = windowed_ft(f, w);
        double cell_x = 1.0, cell_xi = 1.0;
        for (int a = 0; a < dim; ++a) {
            cell_x *= fw.h[a];
            cell_xi *= ft.h[a];
        }
        double nx = 0.0, nxi = 0.0;
        for (const auto& v : fw.values) nx += std::norm(v);
        for (const auto& v : ft.values) nxi += std::norm(v);
        nx *= cell_x;
        nxi *= cell_xi;
        double lhs = std::sqrt(nx);
        double rhs = std::pow(2.0 * kPi, -dim / 2.0) * std::sqrt(nxi);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * lhs);
    }
}

TEST_CASE("directional samples: separable oracle and Hermitian symmetry") {
    Mollifier phi = build_mollifier(1.0, 0);
    double eps = 1.0 / 16;
    ScaledFamily sep(
        2,
        [phi, eps](double e, const Vec& x) -> std::complex<double> {
            double g = std::abs(x[1]) < 0.45
                           ? std::exp(-1.0 / (1.0 - (x[1] / 0.45) * (x[1] / 0.45)))
                           : 0.0;
            return phi(x[0] / e) / e * g;
        },
        1e-9, "sep");
    std::array<int, 4> shape{512, 512, 0, 0};
    SampledField f = evaluate_on_grid(sep, eps, Vec{-0.55, -0.55}, Vec{0.55, 0.55}, shape);
    CutoffWindow w;
    w.center = Vec{0.0, 0.0};
    w.plateau_radius = 0.25;
    w.support_radius = 0.5;
    SampledField ft = windowed_ft(f, w);

    std::vector<double> ladder = lambda_ladder(8.0, 256.0, std::sqrt(2.0));
    DirectionalSamples along_x = directional_samples(ft, Vec{1.0, 0.0}, ladder);
    DirectionalSamples along_mx = directional_samples(ft, Vec{-1.0, 0.0}, ladder);
    REQUIRE(along_x.lambda.size() == along_mx.lambda.size());
    REQUIRE(!along_x.lambda.empty());
    for (std::size_t i = 0; i < along_x.lambda.size(); ++i) {
        CHECK(along_x.lambda[i] > 0.0);  // ladder never contains 0
        CHECK(along_x.magnitude[i] ==
              doctest::Approx(along_mx.magnitude[i]).epsilon(1e-9));
    }
    // separable oracle along (1,0): |phi_hat(eps lam)| * |(w g)_hat(0)|,
    // with the window profile folded into each factor
    auto g1 = [&](double y) {
        double bare =
            std::abs(y) < 0.45 ? std::exp(-1.0 / (1.0 - (y / 0.45) * (y / 0.45))) : 0.0;
        return bare * w.axis_profile(y);
    };
    double ghat0 = std::abs(ft_oracle_1d(g1, -0.5, 0.5, 0.0));
    for (std::size_t i = 0; i < along_x.lambda.size(); ++i) {
        double lam = along_x.lambda[i];
        double oracle =
            std::abs(ft_oracle_1d([&](double x) { return phi(x); }, -1.0, 1.0, eps * lam)) *
            ghat0;
        CHECK(std::abs(along_x.magnitude[i] - oracle) <= 0.02 * (oracle + 1e-6));
    }
}

TEST_CASE("ladder truncation beyond the Nyquist guard") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    std::array<int, 4> shape{512, 0, 0, 0};
    SampledField f = evaluate_on_grid(d1, 1.0 / 16, Vec{-1.0}, Vec{1.0}, shape);
    SampledField ft = windowed_ft(f, window_1d(0.0, 0.25, 0.5));
    double nyq = -ft.lo[0];
    std::vector<double> ladder = {4.0, nyq, 2.0 * nyq};
    DirectionalSamples ds = directional_samples(ft, Vec{1.0}, ladder);
    CHECK(ds.truncated);
    CHECK(ds.lambda.size() == 1);
}

TEST_CASE("grid refinement changes directional samples by less than 1%") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    double eps = 1.0 / 16;
    CutoffWindow w = window_1d(0.0, 0.25, 0.5);
    std::vector<double> ladder = lambda_ladder(8.0, 128.0, std::sqrt(2.0));
    std::vector<DirectionalSamples> out;
    for (int n : {1024, 2048}) {
        std::array<int, 4> shape{n, 0, 0, 0};
        SampledField f = evaluate_on_grid(d1, eps, Vec{-1.0}, Vec{1.0}, shape);
        out.push_back(directional_samples(windowed_ft(f, w), Vec{1.0}, ladder));
    }
    REQUIRE(out[0].lambda.size() == out[1].lambda.size());
    for (std::size_t i = 0; i < out[0].lambda.size(); ++i)
        CHECK(std::abs(out[0].magnitude[i] - out[1].magnitude[i]) <=
              0.01 * (out[1].magnitude[i] + 1e-12));
}

TEST_CASE("projection sampler agrees with the grid sampler where both are valid") {
    // cross-validation on a field whose |FT| is smooth and positive over the
    // probed band (oscillation dips would stress the bilinear interpolation
    // far beyond the projection path's error)
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d2 = scaled_tensor(phi, 2);
    double eps = 1.0 / 16;
    std::array<int, 4> shape{512, 512, 0, 0};
    SampledField f = evaluate_on_grid(d2, eps, Vec{-0.55, -0.55}, Vec{0.55, 0.55}, shape);
    CutoffWindow w;
    w.center = Vec{0.0, 0.0};
    w.plateau_radius = 0.25;
    w.support_radius = 0.5;
    SampledField ft = windowed_ft(f, w, 2);
    std::vector<double> ladder = lambda_ladder(9.0, 45.0, std::sqrt(2.0));
    for (const Vec& dir : {Vec{1.0, 0.0}, Vec{0.6, 0.8}, Vec{0.0, -1.0}, Vec{-0.7, 0.3}}) {
        DirectionalSamples grid = directional_samples(ft, dir, ladder);
        DirectionalSamples proj = directional_samples_projection(f, w, dir, ladder);
        REQUIRE(grid.lambda.size() == proj.lambda.size());
        for (std::size_t i = 0; i < grid.lambda.size(); ++i) {
            double scale = std::max(grid.magnitude[i], 1e-3);
            CHECK(std::abs(grid.magnitude[i] - proj.magnitude[i]) <= 0.05 * scale);
        }
    }
}

TEST_CASE("fit_decay recovers a synthetic power-law model") {
    std::vector<EpsSamples> rows;
    std::vector<double> ladder = lambda_ladder(4.0, 256.0, std::sqrt(2.0));
    for (int k = 4; k <= 10; ++k) {
        EpsSamples r;
        r.eps = std::ldexp(1.0, -k);
        for (double lam : ladder) {
            r.samples.lambda.push_back(lam);
            r.samples.magnitude.push_back(3.0 * std::pow(r.eps, -2.0) *
                                          std::pow(1.0 + lam, -7.0));
        }
        rows.push_back(r);
    }
    DecayFit fit = fit_decay(rows, Vec{1.0, 0.0});
    CHECK(std::abs(fit.p_hat - 7.0) <= 0.05);
    CHECK(std::abs(fit.n_hat - 2.0) <= 0.05);
    CHECK(std::abs(fit.c - 3.0) <= 0.1);
    CHECK(fit.residual <= 1e-9);
    CHECK_FALSE(fit.negligible);
}

TEST_CASE("fit_decay on constant samples") {
    std::vector<EpsSamples> rows;
    for (int k = 4; k <= 8; ++k) {
        EpsSamples r;
        r.eps = std::ldexp(1.0, -k);
        for (double lam : lambda_ladder(4.0, 64.0, std::sqrt(2.0))) {
            r.samples.lambda.push_back(lam);
            r.samples.magnitude.push_back(2.5);
        }
        rows.push_back(r);
    }
    DecayFit fit = fit_decay(rows, Vec{1.0, 0.0});
    CHECK(fit.p_hat == doctest::Approx(0.0));
    CHECK(fit.n_hat == doctest::Approx(0.0));
}

TEST_CASE("fit_decay slope invariance under uniform scaling") {
    std::vector<EpsSamples> rows;
    for (int k = 4; k <= 8; ++k) {
        EpsSamples r;
        r.eps = std::ldexp(1.0, -k);
        for (double lam : lambda_ladder(4.0, 64.0, std::sqrt(2.0))) {
            r.samples.lambda.push_back(lam);
            r.samples.magnitude.push_back(std::pow(r.eps, -1.0) * std::pow(1.0 + lam, -3.0));
        }
        rows.push_back(r);
    }
    DecayFit base = fit_decay(rows, Vec{1.0, 0.0});
    for (auto& r : rows)
        for (auto& m : r.samples.magnitude) m *= 137.0;
    DecayFit scaled = fit_decay(rows, Vec{1.0, 0.0});
    // slopes are invariant under a uniform log shift (up to roundoff in log)
    CHECK(scaled.p_hat == doctest::Approx(base.p_hat).epsilon(1e-12));
    CHECK(scaled.n_hat == doctest::Approx(base.n_hat).epsilon(1e-12));
    CHECK(scaled.c == doctest::Approx(base.c * 137.0).epsilon(1e-10));
}

TEST_CASE("fit_decay drops identically-vanishing rows") {
    std::vector<EpsSamples> rows;
    for (int k = 4; k <= 8; ++k) {
        EpsSamples r;
        r.eps = std::ldexp(1.0, -k);
        for (double lam : lambda_ladder(4.0, 64.0, std::sqrt(2.0))) {
            r.samples.lambda.push_back(lam);
            r.samples.magnitude.push_back(0.0);
        }
        rows.push_back(r);
    }
    DecayFit fit = fit_decay(rows, Vec{1.0, 0.0});
    CHECK(fit.negligible);
    CHECK(fit.p_hat == kNegligibleExponent);
    CHECK(fit.n_hat == 0.0);
}

TEST_CASE("field binary round trip") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d2 = scaled_tensor(phi, 2);
    std::array<int, 4> shape{64, 64, 0, 0};
    SampledField f = evaluate_on_grid(d2, 1.0 / 8, Vec{-0.5, -0.5}, Vec{0.5, 0.5}, shape);
    auto path = std::filesystem::temp_directory_path() / "colwave_field_test.bin";
    save_field(f, path.string());
    SampledField g = load_field(path.string());
    CHECK(g.dim == f.dim);
    CHECK(g.shape == f.shape);
    CHECK(g.lo == f.lo);
    CHECK(g.hi == f.hi);
    REQUIRE(g.values.size() == f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(g.values[i] == f.values[i]);
    CHECK(std::filesystem::exists(path.string() + ".json"));
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".json");
}

TEST_SUITE_END();
