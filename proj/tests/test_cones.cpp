#include <doctest.h>

#include <cmath>
#include <random>

#include "colwave/cones.hpp"
#include "colwave/errors.hpp"

using namespace colwave;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE_BEGIN("cones");

TEST_CASE("ray membership and scale invariance") {
    Cone g = Cone::ray(Vec{1.0, 0.0});
    CHECK(g.contains(Vec{5.0, 0.0}));
    CHECK_FALSE(g.contains(Vec{0.0, 1.0}));
    for (double lam : {1e-3, 0.1, 1.0, 42.0, 1e3}) {
        CHECK(g.contains(Vec{lam, 0.0}));
        CHECK_FALSE(g.contains(Vec{0.0, lam}));
    }
    CHECK_THROWS_AS(g.contains(Vec{0.0, 0.0}), DomainError);
}

TEST_CASE("curve cone membership on the curve") {
    GeneratorCurve c1{[](double t) { return Vec{-1.0, t, t * t}; }, 0.0, 1.0, 129};
    Cone g1 = Cone::from_curves(3, {c1});
    // (-2, 1, 0.5) = 2 * (-1, 1/2, 1/4), the curve point at t = 1/2
    CHECK(g1.contains(Vec{-2.0, 1.0, 0.5}));
    CHECK_FALSE(g1.contains(Vec{1.0, 0.0, 0.0}));
    for (const auto& s : g1.samples()) CHECK(norm(s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("minkowski sum of orthogonal rays fills the open quadrant") {
    Cone g1 = Cone::ray(Vec{1.0, 0.0});
    Cone g2 = Cone::ray(Vec{0.0, 1.0});
    MinkowskiSum ms = minkowski_sum(g1, g2);
    CHECK_FALSE(ms.zero_in_sum);
    // brute-force oracle: directions (cos a, sin a) with a in (0, 90) degrees
    for (double adeg : {5.0, 20.0, 45.0, 70.0, 85.0}) {
        double a = adeg * kPi / 180.0;
        CHECK(ms.cone.contains(Vec{std::cos(a), std::sin(a)}));
    }
    CHECK_FALSE(ms.cone.contains(Vec{-1.0, 0.0}));
    CHECK_FALSE(ms.cone.contains(Vec{0.5, -0.5}));
}

TEST_CASE("sum of a cone with itself is itself") {
    Cone g = Cone::ray(Vec{1.0, 0.0});
    MinkowskiSum ms = minkowski_sum(g, g);
    CHECK_FALSE(ms.zero_in_sum);
    for (const auto& d : ms.cone.samples())
        CHECK(angular_distance(d, Vec{1.0, 0.0}) <= 1e-9);
}

TEST_CASE("antipodal rays flag a zero in the sum") {
    Cone g1 = Cone::ray(Vec{1.0, 0.0});
    Cone g2 = Cone::ray(Vec{-1.0, 0.0});
    CHECK(zero_in_sum(g1, g2));
    CHECK(minkowski_sum(g1, g2).zero_in_sum);
    CHECK_THROWS_AS(closure_of_sum(g1, g2), DomainError);
}

TEST_CASE("closure of sum of disjoint rays is the closed sector") {
    Cone g1 = Cone::ray(Vec{1.0, 0.0});
    Cone g2 = Cone::ray(Vec{0.0, 1.0});
    Cone cl = closure_of_sum(g1, g2);
    // dense sampling oracle including both boundary rays
    for (int k = 0; k <= 90; k += 3) {
        double a = k * kPi / 180.0;
        CHECK(cl.contains(Vec{std::cos(a), std::sin(a)}));
    }
    CHECK_FALSE(cl.contains(Vec{-0.5, 0.5}));
}

TEST_CASE("separation constant for orthogonal and oblique rays") {
    Cone s1 = Cone::ray(Vec{1.0, 0.0});
    CHECK(separation_constant(s1, Cone::ray(Vec{0.0, 1.0})) == doctest::Approx(1.0));
    // point-to-ray oracle: alpha = sin(theta) for theta within (0, 90]
    for (double deg : {15.0, 30.0, 60.0, 90.0}) {
        double th = deg * kPi / 180.0;
        Cone s2 = Cone::ray(Vec{std::cos(th), std::sin(th)});
        double brute = 1e18;
        for (int i = 0; i <= 100000; ++i) {
            double lam = i * 1e-4;
            Vec p{lam, 0.0};
            brute = std::min(brute, norm(p - Vec{std::cos(th), std::sin(th)}));
        }
        double alpha = separation_constant(s1, s2);
        CHECK(alpha == doctest::Approx(std::sin(th)).epsilon(1e-6));
        CHECK(alpha == doctest::Approx(brute).epsilon(1e-4));
    }
}

TEST_CASE("separation constant rejects intersecting cones") {
    Cone s1 = Cone::ray(Vec{1.0, 0.0});
    CHECK_THROWS_AS(separation_constant(s1, s1), DomainError);
}

TEST_CASE("separation certificate on random scaled pairs") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uang(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> ulog(std::log(1e-3), std::log(1e3));
    Cone s1(2, {Vec{1.0, 0.2}, Vec{1.0, -0.2}});
    Cone s2(2, {Vec{-0.3, 1.0}, Vec{0.1, 1.0}});
    double alpha = separation_constant(s1, s2);
    CHECK(alpha > 0.0);
    for (int i = 0; i < 10000; ++i) {
        const auto& xs = s1.samples()[i % s1.samples().size()];
        const auto& es = s2.samples()[i % s2.samples().size()];
        Vec xi = xs * std::exp(ulog(rng));
        Vec eta = es * std::exp(ulog(rng));
        CHECK(norm(xi - eta) >= (alpha - 1e-9) * norm(eta));
    }
}

TEST_CASE("conic neighborhood reaches the requested half angle") {
    Cone g = Cone::ray(Vec{1.0, 0.0});
    Cone nb = conic_neighborhood(g, kPi / 4);
    CHECK(nb.contains(Vec{1.0, 1.0}));  // 45 degrees, on the boundary
    CHECK(nb.contains(Vec{1.0, 0.0}));
    CHECK_FALSE(nb.contains(Vec{0.0, 1.0}));
    // tiny theta keeps the original samples
    Cone nb0 = conic_neighborhood(g, 1e-6);
    CHECK(nb0.contains(Vec{1.0, 0.0}));
    CHECK_FALSE(nb0.contains(Vec{std::cos(0.1), std::sin(0.1)}));
}

TEST_CASE("neighborhoods with sum inside a widened quadrant") {
    Cone g1 = Cone::ray(Vec{1.0, 0.0});
    Cone g2 = Cone::ray(Vec{0.0, 1.0});
    Cone w = conic_neighborhood(closure_of_sum(g1, g2), 10.0 * kPi / 180.0);
    NeighborhoodsResult res = neighborhoods_with_sum_inside(g1, g2, w);
    CHECK(res.success);
    CHECK(res.theta >= 4.0 * kPi / 180.0);
    for (const auto& d : res.certificate) CHECK(w.contains(d));
}

TEST_CASE("neighborhoods succeed immediately when W is everything") {
    Cone g1 = Cone::ray(Vec{1.0, 0.0});
    Cone g2 = Cone::ray(Vec{0.0, 1.0});
    std::vector<Vec> all;
    for (int k = 0; k < 360; ++k)
        all.push_back(Vec{std::cos(k * kPi / 180.0), std::sin(k * kPi / 180.0)});
    NeighborhoodsResult res = neighborhoods_with_sum_inside(g1, g2, Cone(2, all));
    CHECK(res.success);
    CHECK(res.theta == doctest::Approx(kPi / 6));
}

TEST_CASE("neighborhoods fail for antipodal rays") {
    NeighborhoodsResult res = neighborhoods_with_sum_inside(
        Cone::ray(Vec{1.0, 0.0}), Cone::ray(Vec{-1.0, 0.0}), Cone::ray(Vec{0.0, 1.0}));
    CHECK_FALSE(res.success);
}

TEST_CASE("grosser cones: sampled sums reach the limit, exact membership refuses it") {
    GeneratorCurve c1{[](double t) { return Vec{-1.0, t, t * t}; }, 0.0, 1.0, 129};
    GeneratorCurve c2{[](double t) { return Vec{1.0, t, t * t}; }, 0.0, 1.0, 129};
    Cone g1 = Cone::from_curves(3, {c1});
    Cone g2 = Cone::from_curves(3, {c2});

    // the sequence n(-1,1/n,1/n^2) + n(1,1/n,1/n^2) tends to (0,2,0)
    double n = 1000.0;
    Vec xi = n * Vec{-1.0, 1.0 / n, 1.0 / (n * n)} + n * Vec{1.0, 1.0 / n, 1.0 / (n * n)};
    CHECK(angular_distance(xi, Vec{0.0, 2.0, 0.0}) <= 2e-3);

    MinkowskiSum ms = minkowski_sum(g1, g2);
    CHECK(ms.zero_in_sum);                        // antipodal generators at t = 0
    CHECK(ms.cone.contains(Vec{0.0, 2.0, 0.0}));  // sampled sums get arbitrarily close

    // but (0,2,0) has no attained representation in (G1+G2) u G1 u G2
    CHECK_FALSE(sum_union_contains_exact(g1, g2, Vec{0.0, 2.0, 0.0}));
    CHECK_FALSE(contains_exact(g1, Vec{0.0, 2.0, 0.0}));
    CHECK_FALSE(contains_exact(g2, Vec{0.0, 2.0, 0.0}));

    // attained members are recognized
    Vec in1 = Vec{-1.0, 0.3, 0.09} + 2.0 * Vec{1.0, 0.7, 0.49};
    CHECK(sum_union_contains_exact(g1, g2, in1));
    CHECK(sum_union_contains_exact(g1, g2, 3.0 * Vec{-1.0, 0.5, 0.25}));  // on G1 itself
    Vec in2 = 0.5 * Vec{-1.0, 1.0, 1.0} + 0.5 * Vec{1.0, 1.0, 1.0};       // (0,1,1): t=s=1
    CHECK(sum_union_contains_exact(g1, g2, in2));
}

TEST_CASE("gamma_B cones") {
    LimitPointSet b0;
    b0.points = {0.0};
    Cone g0 = gamma_B(b0);
    CHECK(g0.contains(Vec{1.0, 0.0}));
    CHECK(g0.contains(Vec{-1.0, 0.0}));
    CHECK_FALSE(g0.contains(Vec{0.0, 1.0}));

    LimitPointSet b1;
    b1.points = {1.0};
    Cone g1 = gamma_B(b1);
    CHECK(g1.contains(Vec{1.0, -1.0}));
    CHECK(g1.contains(Vec{-1.0, 1.0}));
    CHECK_FALSE(g1.contains(Vec{1.0, 1.0}));

    LimitPointSet bi;
    bi.intervals = {{0.0, 1.0}};
    Cone gi = gamma_B(bi);
    for (double b = 0.0; b <= 1.0; b += 0.01) {
        double nn = std::sqrt(1.0 + b * b);
        CHECK(gi.contains(Vec{1.0 / nn, -b / nn}));
    }
    CHECK_FALSE(gi.contains(Vec{1.0, 1.0}));
    CHECK_FALSE(gi.contains(Vec{1.0, -1.5}));
}

TEST_CASE("normal set of the diagonal, identity and constant maps") {
    AffineMap d = AffineMap::diagonal(1);
    WaveFrontSet nd = normal_set(d, {Vec{0.0}, Vec{1.0}});
    REQUIRE(nd.entries.size() == 2);
    // kernel of [1 1]: direction (1,-1)/sqrt(2)
    const Cone& f = nd.entries[0].fiber;
    CHECK(f.contains(Vec{1.0, -1.0}));
    CHECK(f.contains(Vec{-1.0, 1.0}));
    CHECK_FALSE(f.contains(Vec{1.0, 1.0}));

    WaveFrontSet ni = normal_set(AffineMap::identity(2), {Vec{0.0, 0.0}});
    CHECK(ni.entries.empty());

    AffineMap constm{Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Zero(2)};
    WaveFrontSet nc = normal_set(constm, {Vec{0.5}});
    REQUIRE(nc.entries.size() == 1);
    for (int k = 0; k < 36; ++k) {
        double a = 2.0 * kPi * k / 36;
        CHECK(nc.entries[0].fiber.contains(Vec{std::cos(a), std::sin(a)}));
    }
}

TEST_CASE("pullback cone under identity, rotation and the diagonal") {
    WaveFrontSet gamma;
    gamma.add(Vec{0.3, -0.2}, Cone(2, {Vec{1.0, 0.0}}));

    WaveFrontSet id = pullback_cone(AffineMap::identity(2), gamma);
    REQUIRE(id.entries.size() == 1);
    CHECK(distance(id.entries[0].base, Vec{0.3, -0.2}) <= 1e-9);
    CHECK(id.entries[0].fiber.contains(Vec{1.0, 0.0}));

    // rotation by 90 degrees: fibers rotate by -90
    Eigen::MatrixXd r(2, 2);
    r << 0, -1, 1, 0;
    WaveFrontSet rot = pullback_cone(AffineMap{r, Eigen::VectorXd::Zero(2)}, gamma);
    REQUIRE(rot.entries.size() == 1);
    CHECK(rot.entries[0].fiber.contains(Vec{0.0, -1.0}));

    // diagonal on R^2 and the worked pullback: fibers (xi1+xi3, 0)
    WaveFrontSet gt;
    gt.add(Vec{0.0, 0.7, 0.0, 0.7},
           Cone(4, {Vec{1.0, 0.0, 0.4, 0.0}, Vec{-1.0, 0.0, -0.2, 0.0}}));
    WaveFrontSet pb = pullback_cone(AffineMap::diagonal(2), gt);
    REQUIRE(pb.entries.size() == 1);
    CHECK(distance(pb.entries[0].base, Vec{0.0, 0.7}) <= 1e-9);
    CHECK(pb.entries[0].fiber.contains(Vec{1.0, 0.0}));
    CHECK(pb.entries[0].fiber.contains(Vec{-1.0, 0.0}));
    CHECK_FALSE(pb.entries[0].fiber.contains(Vec{0.0, 1.0}));
}

TEST_CASE("pullback composes along affine maps") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd jf(2, 2), jg(2, 2);
        jf << u(rng) + 2, u(rng), u(rng), u(rng) + 2;  // well-conditioned
        jg << u(rng) + 2, u(rng), u(rng), u(rng) + 2;
        Eigen::VectorXd cf = Eigen::VectorXd::Zero(2), cg = Eigen::VectorXd::Zero(2);
        cf << u(rng), u(rng);
        cg << u(rng), u(rng);
        AffineMap f{jf, cf}, g{jg, cg};
        AffineMap gf{jg * jf, jg * cf + cg};

        WaveFrontSet gamma;
        Vec base = gf.apply(Vec{0.25, -0.5});
        gamma.add(base, Cone(2, {normalized(Vec{u(rng) + 1.5, u(rng)})}));

        WaveFrontSet lhs = pullback_cone(f, pullback_cone(g, gamma));
        WaveFrontSet rhs = pullback_cone(gf, gamma);
        REQUIRE(lhs.entries.size() == rhs.entries.size());
        REQUIRE(!lhs.entries.empty());
        CHECK(distance(lhs.entries[0].base, rhs.entries[0].base) <= 1e-8);
        for (const auto& dird : rhs.entries[0].fiber.samples())
            CHECK(lhs.entries[0].fiber.angular_distance_to(dird) <= 1e-8);
    }
}

TEST_CASE("favorable position") {
    WaveFrontSet wf_u;
    wf_u.add(Vec{0.0, 0.0}, Cone(2, {Vec{1.0, 0.0}, Vec{-1.0, 0.0}}));
    WaveFrontSet wf_b;
    wf_b.add(Vec{0.0, 0.0}, Cone(2, {Vec{0.0, 1.0}}));
    CHECK(favorable_position(wf_u, wf_b));

    WaveFrontSet wf_v;
    wf_v.add(Vec{0.0, 0.0}, Cone(2, {Vec{1.0, 0.0}, Vec{-1.0, 0.0}}));
    CHECK_FALSE(favorable_position(wf_u, wf_v));

    // disjoint base points are vacuously favorable
    WaveFrontSet far;
    far.add(Vec{5.0, 5.0}, Cone(2, {Vec{-1.0, 0.0}}));
    CHECK(favorable_position(wf_u, far));
}

TEST_CASE("boxtimes union structure") {
    WaveFrontSet wf1, wf2;
    wf1.add(Vec{0.0}, Cone(1, {Vec{1.0}, Vec{-1.0}}));
    wf2.add(Vec{0.0}, Cone(1, {Vec{1.0}, Vec{-1.0}}));
    std::vector<Vec> supp = {Vec{0.0}};
    WaveFrontSet bt = boxtimes(wf1, wf2, supp, supp);
    REQUIRE(!bt.entries.empty());
    const Cone* fiber = bt.fiber_at(Vec{0.0, 0.0});
    REQUIRE(fiber != nullptr);
    CHECK(fiber->contains(Vec{1.0, 0.0}));          // supp x {0} term
    CHECK(fiber->contains(Vec{0.0, 1.0}));          // {0} x supp term
    CHECK(fiber->contains(Vec{1.0, 1.0}));          // mixed term
    CHECK(fiber->contains(Vec{1.0, -1.0}));
    CHECK(fiber->contains(Vec{-0.3, 1.0}));

    // empty factor with empty support produces nothing
    WaveFrontSet empty;
    CHECK(boxtimes(wf1, empty, supp, {}).entries.empty());
    // both wave fronts empty: the support terms have no fibers to pair with
    WaveFrontSet bt2 = boxtimes(empty, empty, supp, supp);
    CHECK(bt2.entries.empty());
}

TEST_SUITE_END();
