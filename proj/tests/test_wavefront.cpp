#include <doctest.h>

#include <cmath>

#include "colwave/errors.hpp"
#include "colwave/wavefront.hpp"

using namespace colwave;

namespace {

// Fast estimator settings: coarse grids and a shallow ladder.
EstimatorParams fast_params_1d() {
    EstimatorParams p;
    p.eps_k_min = 4;
    p.eps_k_max = 8;
    p.min_eps_rows = 4;
    p.window_radii = {0.4, 0.2, 0.1};
    p.base_shape_1d = 1024;
    p.shape_cap_1d = 16384;
    p.lambda_min = 4.0;
    p.lambda_max = 64.0;
    p.pad_factor = 2;
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("wavefront");

TEST_CASE("direction bins per dimension") {
    EstimatorParams p;
    CHECK(direction_bins(1, p).size() == 2);
    CHECK(direction_bins(2, p).size() == 72);
    CHECK(direction_bins(3, p).size() == 320);
    for (const auto& d : direction_bins(3, p))
        CHECK(norm(d) == doctest::Approx(1.0).epsilon(1e-12));
    // 5-degree bins include the coordinate axes exactly
    auto b2 = direction_bins(2, p);
    CHECK(angular_distance(b2[0], Vec{1.0, 0.0}) <= 1e-12);
    CHECK(angular_distance(b2[18], Vec{0.0, 1.0}) <= 1e-12);
}

TEST_CASE("embedded delta: all directions irregular at the origin") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    EstimatorParams p = fast_params_1d();
    PointEstimate pe = sigma_g_at(d1, Vec{0.0}, p.window_radii, p);
    REQUIRE(pe.bins.size() == 2);
    for (const auto& b : pe.bins) {
        CHECK(b.verdict == Verdict::Irregular);
        CHECK(b.fit.p_hat <= 1.0);
    }
    CHECK_FALSE(pe.fiber_cone(p.delta).empty());
}

TEST_CASE("embedded delta: regular away from the origin") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    EstimatorParams p = fast_params_1d();
    for (double x0 : {0.5, -0.5}) {
        PointEstimate pe = sigma_g_at(d1, Vec{x0}, p.window_radii, p);
        for (const auto& b : pe.bins) {
            CHECK(b.verdict == Verdict::Regular);
            CHECK(b.fit.p_hat >= p.p_threshold);
        }
        CHECK(pe.fiber_cone(p.delta).empty());
    }
}

TEST_CASE("smooth family: empty wave front with flat scale exponent") {
    ScaledFamily smooth = smooth_family(
        1,
        [](const Vec& x) {
            double u = x[0] / 0.3, w = 1.0 - u * u;
            return w > 0 ? std::exp(-1.0 / w) : 0.0;
        },
        "bump");
    EstimatorParams p = fast_params_1d();
    WaveFrontEstimate est = wavefront(smooth, {Vec{0.0}, Vec{0.5}}, p);
    for (const auto& pt : est.points) {
        for (const auto& b : pt.bins) {
            CHECK(b.verdict == Verdict::Regular);
            CHECK(std::abs(b.fit.n_hat) <= 0.1);
        }
    }
    CHECK(est.to_wavefront_set().entries.size() == 2);
}

TEST_CASE("reflection equivariance of verdicts") {
    Mollifier phi = build_mollifier(1.0, 0);
    // delta centered at +0.2, and its reflection x -> -x
    ScaledFamily right(
        1,
        [phi](double eps, const Vec& x) -> std::complex<double> {
            return phi((x[0] - 0.2) / eps) / eps;
        },
        1e-9, "delta_at_0.2");
    ScaledFamily left(
        1,
        [phi](double eps, const Vec& x) -> std::complex<double> {
            return phi((-x[0] - 0.2) / eps) / eps;
        },
        1e-9, "reflected");
    EstimatorParams p = fast_params_1d();
    PointEstimate a = sigma_g_at(right, Vec{0.2}, p.window_radii, p);
    PointEstimate b = sigma_g_at(left, Vec{-0.2}, p.window_radii, p);
    // bins are (+1, -1); reflection swaps them
    CHECK(a.bins[0].verdict == b.bins[1].verdict);
    CHECK(a.bins[1].verdict == b.bins[0].verdict);
}

TEST_CASE("antipodal verdicts agree for real families") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    EstimatorParams p = fast_params_1d();
    for (double x0 : {0.0, 0.5}) {
        PointEstimate pe = sigma_g_at(d1, Vec{x0}, p.window_radii, p);
        CHECK(pe.bins[0].verdict == pe.bins[1].verdict);
    }
}

TEST_CASE("verdicts invariant under scaling the family") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    ScaledFamily scaled(
        1, [d1](double eps, const Vec& x) { return 37.0 * d1(eps, x); }, d1.eps_floor(),
        "scaled");
    EstimatorParams p = fast_params_1d();
    PointEstimate a = sigma_g_at(d1, Vec{0.0}, p.window_radii, p);
    PointEstimate b = sigma_g_at(scaled, Vec{0.0}, p.window_radii, p);
    REQUIRE(a.bins.size() == b.bins.size());
    for (std::size_t i = 0; i < a.bins.size(); ++i) {
        CHECK(a.bins[i].verdict == b.bins[i].verdict);
        CHECK(a.bins[i].fit.p_hat == doctest::Approx(b.bins[i].fit.p_hat).epsilon(1e-9));
        CHECK(a.bins[i].fit.n_hat == doctest::Approx(b.bins[i].fit.n_hat).epsilon(1e-9));
    }
}

TEST_CASE("window schedule: under-resolved radius dropped with a warning") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    EstimatorParams p = fast_params_1d();
    p.shape_cap_1d = 1024;  // the tiny window's transition cannot be resolved
    PointEstimate pe = sigma_g_at(d1, Vec{0.0}, {0.4, 0.001}, p);
    CHECK(!pe.warnings.empty());
    CHECK(pe.window_details.size() == 1);
    // wholly unresolvable schedules raise the resolution error
    CHECK_THROWS_AS(sigma_g_at(d1, Vec{0.0}, {0.001, 0.0005}, p), ResolutionError);
}

TEST_CASE("ladder eps dropped when the grid cap is hit") {
    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    EstimatorParams p = fast_params_1d();
    p.eps_k_max = 12;
    p.shape_cap_1d = 2048;  // cannot resolve the deepest eps
    CutoffWindow w;
    w.center = Vec{0.0};
    w.support_radius = 0.4;
    w.plateau_radius = 0.2;
    WindowEstimate we = sigma_g(d1, w, p);
    CHECK(!we.warnings.empty());
    CHECK(we.eps_used.size() < eps_ladder(p.eps_k_min, p.eps_k_max).size());
}

TEST_CASE("uniform order: flat for smooth families, refused on the delta") {
    EstimatorParams p = fast_params_1d();
    ScaledFamily smooth = smooth_family(
        1,
        [](const Vec& x) {
            double u = x[0] / 0.3, w = 1.0 - u * u;
            return w > 0 ? std::exp(-1.0 / w) : 0.0;
        },
        "bump");
    CutoffWindow w;
    w.center = Vec{0.0};
    w.support_radius = 0.4;
    w.plateau_radius = 0.2;
    UniformOrderResult res = uniform_order_check(smooth, w, Cone(1, {Vec{1.0}}), p);
    CHECK(res.bins_in_gamma == 1);
    CHECK(std::abs(res.n_uniform) <= 0.1);
    CHECK(res.min_p >= p.p_threshold);

    Mollifier phi = build_mollifier(1.0, 0);
    ScaledFamily d1 = scaled_tensor(phi, 1);
    CHECK_THROWS_AS(uniform_order_check(d1, w, Cone(1, {Vec{1.0}}), p), DomainError);
}

TEST_SUITE_END();
