#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <set>
#include <sstream>

#include "colwave/errors.hpp"
#include "colwave/harness.hpp"
#include "colwave/quadrature.hpp"

namespace colwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void check(ScenarioReport& rep, const std::string& name, const std::string& expected,
           const std::string& observed, bool pass) {
    rep.assertions.push_back({name, expected, observed, pass});
}

// ---- cone comparison at bin granularity ----------------------------------

double bin_match_tol(const EstimatorParams& p) { return 2.0 * kPi / p.bins_s1 + p.delta; }

bool covers(const Cone& big, const Cone& small, double tol) {
    if (small.empty()) return true;
    if (big.empty()) return false;
    for (const auto& s : small.samples())
        if (big.angular_distance_to(s) > tol) return false;
    return true;
}

bool cone_match(const Cone& a, const Cone& b, double tol) {
    return covers(a, b, tol) && covers(b, a, tol);
}

const PointEstimate& point_at(const WaveFrontEstimate& est, const Vec& x) {
    for (const auto& p : est.points)
        if (distance(p.base, x) < 1e-9) return p;
    throw DomainError("scenario: estimate missing base point");
}

// Small-window irregular bins must stay non-regular in larger windows.
void assert_window_monotonicity(ScenarioReport& rep, const std::string& label,
                                const WaveFrontEstimate& est) {
    int violations = 0, pairs = 0;
    for (const auto& pt : est.points) {
        for (std::size_t wi = 0; wi + 1 < pt.window_details.size(); ++wi) {
            const auto& big = pt.window_details[wi];    // schedule is descending radii
            const auto& small = pt.window_details[wi + 1];
            for (std::size_t b = 0; b < small.bins.size(); ++b) {
                if (small.bins[b].verdict != Verdict::Irregular) continue;
                ++pairs;
                if (big.bins[b].verdict == Verdict::Regular) ++violations;
            }
        }
    }
    check(rep, label + ": window monotonicity", "0 violations",
          fmt(violations) + " of " + fmt(pairs), violations == 0);
}

Cone bins_cone(const std::vector<Vec>& dirs, double tol) {
    if (dirs.empty()) return Cone(2, {}, tol);
    return Cone(dirs.front().dim, dirs, tol);
}

// ---- exact wave front sets demonstrated in the worked examples ------------

WaveFrontSet exact_wf_U(double tol) {
    WaveFrontSet wf;
    for (double y : {-0.5, 0.0, 0.5})
        wf.add(Vec{0.0, y}, Cone(2, {Vec{1, 0}, Vec{-1, 0}}, tol));
    return wf;
}

std::vector<Vec> supp_U_samples() {
    return {Vec{0.0, -0.5}, Vec{0.0, 0.0}, Vec{0.0, 0.5}};
}

// ---- scenarios ------------------------------------------------------------

void scenario_smoke(const ExperimentConfig& cfg, ScenarioReport& rep) {
    Mollifier phi = build_mollifier(cfg.mollifier_support_radius, cfg.mollifier_moment_order,
                                    cfg.mollifier_quadrature_resolution);
    const auto& params = cfg.estimator;
    std::vector<Vec> bases = {Vec{0.0}, Vec{0.5}, Vec{-0.5}};

    ScaledFamily delta1 = scaled_tensor(phi, 1);
    WaveFrontEstimate est = wavefront(delta1, bases, params);

    const auto& at0 = point_at(est, Vec{0.0});
    bool all_irr = !at0.bins.empty();
    for (const auto& b : at0.bins) all_irr = all_irr && b.verdict == Verdict::Irregular;
    check(rep, "delta fiber at 0", "both directions irregular",
          to_string(at0.bins[0].verdict) + "/" + to_string(at0.bins[1].verdict), all_irr);

    for (double x0 : {0.5, -0.5}) {
        const auto& pt = point_at(est, Vec{x0});
        bool all_reg = true;
        double min_p = 1e18;
        for (const auto& b : pt.bins) {
            all_reg = all_reg && b.verdict == Verdict::Regular;
            min_p = std::min(min_p, b.fit.p_hat);
        }
        check(rep, "delta fiber at " + fmt(x0), "empty (all regular, p_hat >= 5)",
              std::string(all_reg ? "all regular" : "not all regular") + ", min p_hat " +
                  fmt(min_p),
              all_reg && min_p >= params.p_threshold);
    }

    ScaledFamily smooth = smooth_family(
        1,
        [](const Vec& x) {
            double u = x[0] / 0.3;
            double w = 1.0 - u * u;
            return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
        },
        "smooth_bump");
    WaveFrontEstimate est2 = wavefront(smooth, bases, params);
    bool all_reg = true;
    double max_n = -1e18;
    for (const auto& p : est2.points) {
        for (const auto& b : p.bins) {
            all_reg = all_reg && b.verdict == Verdict::Regular;
            max_n = std::max(max_n, b.fit.n_hat);
        }
    }
    check(rep, "smooth bump WF", "empty, N_hat <= 0.1",
          std::string(all_reg ? "all regular" : "not all regular") + ", max N_hat " + fmt(max_n),
          all_reg && max_n <= 0.1);

    assert_window_monotonicity(rep, "delta", est);

    rep.estimates.push_back({"delta_1d", std::move(est)});
    rep.estimates.push_back({"smooth_bump", std::move(est2)});
    rep.cones.push_back(
        {"delta_fiber_at_0", point_at(rep.estimates[0].second, Vec{0.0}).fiber_cone(params.delta)});
}

void scenario_cones_remark(const ExperimentConfig& cfg, ScenarioReport& rep) {
    const double delta = cfg.estimator.delta;

    GeneratorCurve c1{[](double t) { return Vec{-1.0, t, t * t}; }, 0.0, 1.0, 129};
    GeneratorCurve c2{[](double t) { return Vec{1.0, t, t * t}; }, 0.0, 1.0, 129};
    Cone g1 = Cone::from_curves(3, {c1}, delta);
    Cone g2 = Cone::from_curves(3, {c2}, delta);

    // membership on the curve itself
    check(rep, "curve membership (-2,1,0.5)", "true",
          g1.contains(Vec{-2, 1, 0.5}) ? "true" : "false", g1.contains(Vec{-2, 1, 0.5}));

    // the sequence n(-1,1/n,1/n^2) + n(1,1/n,1/n^2) at n = 1000
    double n = 1000.0;
    Vec xi_n = n * Vec{-1.0, 1.0 / n, 1.0 / (n * n)} + n * Vec{1.0, 1.0 / n, 1.0 / (n * n)};
    double ang = angular_distance(xi_n, Vec{0, 2, 0});
    check(rep, "sum sequence at n=1000", "within 2e-3 of (0,2,0)", fmt(ang) + " rad",
          ang <= 2e-3);

    // sampled sums do reach the limit direction ...
    MinkowskiSum ms = minkowski_sum(g1, g2);
    bool sampled_hits = ms.cone.contains(Vec{0, 2, 0});
    check(rep, "sampled sum membership of (0,2,0)", "true (limit reached by samples)",
          sampled_hits ? "true" : "false", sampled_hits);
    check(rep, "zero_in_sum for the curved cones", "true", ms.zero_in_sum ? "true" : "false",
          ms.zero_in_sum);

    // ... but no attained exact representation exists
    bool exact = sum_union_contains_exact(g1, g2, Vec{0, 2, 0});
    check(rep, "exact membership of (0,2,0) in (G1+G2) u G1 u G2", "false",
          exact ? "true" : "false", !exact);
    // positive control: a point genuinely in the sum
    Vec inside = Vec{-1.0, 0.3, 0.09} + 2.0 * Vec{1.0, 0.7, 0.49};
    bool exact_in = sum_union_contains_exact(g1, g2, inside);
    check(rep, "exact membership of an interior sum point", "true", exact_in ? "true" : "false",
          exact_in);

    // closure_of_sum refuses when 0 is in the sum
    bool refused = false;
    try {
        closure_of_sum(g1, g2);
    } catch (const DomainError&) {
        refused = true;
    }
    check(rep, "closure_of_sum refusal", "favorable-position error", refused ? "thrown" : "none",
          refused);

    // antipodal rays in R^2
    Cone r1 = Cone::ray(Vec{1, 0}, delta);
    Cone r2 = Cone::ray(Vec{-1, 0}, delta);
    check(rep, "antipodal rays zero_in_sum", "true", zero_in_sum(r1, r2) ? "true" : "false",
          zero_in_sum(r1, r2));
    Cone all2(2, direction_bins(2, cfg.estimator), delta);
    NeighborhoodsResult nb = neighborhoods_with_sum_inside(r1, r2, all2);
    check(rep, "antipodal neighborhoods", "failure report", nb.success ? "success" : "failure",
          !nb.success);

    // positive case from the lemma: orthogonal rays inside a widened quadrant
    Cone q1 = Cone::ray(Vec{1, 0}, delta);
    Cone q2 = Cone::ray(Vec{0, 1}, delta);
    Cone w = conic_neighborhood(closure_of_sum(q1, q2), 10.0 * kPi / 180.0);
    NeighborhoodsResult nb2 = neighborhoods_with_sum_inside(q1, q2, w);
    check(rep, "orthogonal rays neighborhoods", "success with theta >= 4 deg",
          nb2.success ? ("theta " + fmt(nb2.theta * 180.0 / kPi) + " deg") : "failure",
          nb2.success && nb2.theta >= 4.0 * kPi / 180.0);

    rep.cones.push_back({"grosser_g1", g1});
    rep.cones.push_back({"grosser_g2", g2});
    rep.cones.push_back({"grosser_sampled_sum", ms.cone});
}

void scenario_ex2_2(const ExperimentConfig& cfg, ScenarioReport& rep) {
    Mollifier phi = build_mollifier(cfg.mollifier_support_radius, cfg.mollifier_moment_order,
                                    cfg.mollifier_quadrature_resolution);
    const auto& params = cfg.estimator;
    const double tol = bin_match_tol(params);

    GeneralizedConstant a = oscillating_constant(0.0, 1.0, OscillationMode::DyadicAlternating);
    ScaledFamily u = transport_solution(scaled_tensor(phi, 1), a);

    // S = {x = 0} u {x = t}; base points on each line plus the crossing
    std::vector<Vec> on_s = {Vec{0.0, 0.0}, Vec{0.0, 0.75}, Vec{0.0, -0.6}, Vec{0.75, 0.75},
                             Vec{-0.5, -0.5}};
    std::vector<Vec> off_s = {Vec{0.9, 0.1}, Vec{-0.7, 0.4}};

    std::vector<Vec> bases = on_s;
    bases.insert(bases.end(), off_s.begin(), off_s.end());
    WaveFrontEstimate est = wavefront(u, bases, params);

    LimitPointSet B;
    B.points = {0.0, 1.0};
    Cone gamma = gamma_B(B, params.delta);

    // crossing point carries the full cone
    const auto& origin = point_at(est, Vec{0.0, 0.0});
    Cone fiber0 = origin.fiber_cone(params.delta);
    check(rep, "fiber at the crossing (0,0)", "matches Gamma_{0,1} within one bin",
          fmt(fiber0.directions().size()) + " irregular bins", cone_match(fiber0, gamma, tol));

    // every S point: nonempty fiber inside Gamma_B; union recovers Gamma_B
    bool inside = true, nonempty = true;
    std::vector<Vec> union_dirs;
    for (const auto& x : on_s) {
        Cone f = point_at(est, x).fiber_cone(params.delta);
        nonempty = nonempty && !f.empty();
        inside = inside && covers(gamma, f, tol);
        for (const auto& d : f.directions()) union_dirs.push_back(d);
    }
    check(rep, "fibers on S inside Gamma_B", "all within one bin", inside ? "yes" : "no", inside);
    check(rep, "fibers on S nonempty", "yes", nonempty ? "yes" : "no", nonempty);
    Cone union_cone = bins_cone(union_dirs, params.delta);
    check(rep, "union of S fibers", "matches Gamma_{0,1} within one bin",
          fmt(union_cone.directions().size()) + " bins", cone_match(union_cone, gamma, tol));

    bool off_empty = true;
    for (const auto& x : off_s) off_empty = off_empty && point_at(est, x).fiber_cone(params.delta).empty();
    check(rep, "fibers off S", "empty", off_empty ? "empty" : "nonempty", off_empty);

    // characteristic set of d_t + a d_x equals Gamma_B up to bin tolerance
    FirstOrderOperator P{a};
    std::vector<double> dense = dense_eps_ladder();
    CharSetResult cs = char_set(P, dense, params.bins_s1);
    check(rep, "char set vs Gamma_{0,1}", "bin-for-bin within one bin",
          fmt(cs.characteristic.directions().size()) + " characteristic bins",
          cone_match(cs.characteristic, gamma, tol));

    LimitPointSet lp = limit_points(a, dense);
    bool lp_ok = lp.intervals.empty() && lp.points.size() == 2 &&
                 std::abs(lp.points[0] - 0.0) < 0.01 && std::abs(lp.points[1] - 1.0) < 0.01;
    check(rep, "limit points of a", "{0, 1}",
          fmt(lp.points.size()) + " points, " + fmt(lp.intervals.size()) + " intervals", lp_ok);

    // propagation bound: estimated WF inside Char P everywhere (rhs = 0)
    WaveFrontSet bound = propagation_bound(P, WaveFrontSet{}, bases, dense);
    InclusionReport incl = check_inclusion(est, bound);
    check(rep, "estimate inside Char P (propagation)", "holds",
          incl.holds ? "holds" : fmt(incl.witnesses.size()) + " witnesses", incl.holds);

    assert_window_monotonicity(rep, "transport", est);

    rep.notes.push_back(cs.caveat);
    rep.estimates.push_back({"transport", std::move(est)});
    rep.cones.push_back({"char_set", cs.characteristic});
    rep.cones.push_back({"gamma_B", gamma});
    rep.inclusions.push_back({"propagation", incl});
}

void scenario_ex4_1(const ExperimentConfig& cfg, ScenarioReport& rep) {
    Mollifier phi = build_mollifier(cfg.mollifier_support_radius, cfg.mollifier_moment_order,
                                    cfg.mollifier_quadrature_resolution);
    const auto& params = cfg.estimator;
    const double tol = bin_match_tol(params);

    ScaledFamily u = family_U(phi);
    ScaledFamily b = family_B(phi);
    ScaledFamily bu = product(b, u);

    WaveFrontEstimate est_u = wavefront(u, {Vec{0.0, 0.0}, Vec{0.0, 0.5}}, params);

    // B is dense on the grid; cap the grid and shift the fit window upward
    EstimatorParams params_b = params;
    params_b.shape_cap_2d = std::min(params.shape_cap_2d, 2048);
    params_b.lambda_min = 8.0;
    params_b.lambda_max = 90.0;
    rep.notes.push_back("family B estimated with lambda in [8,90] and grid cap 2048");
    WaveFrontEstimate est_b = wavefront(b, {Vec{0.0, 0.0}, Vec{0.3, 0.3}}, params_b);

    WaveFrontEstimate est_bu = wavefront(bu, {Vec{0.0, 0.0}}, params);

    Cone expected_u(2, {Vec{1, 0}, Vec{-1, 0}}, params.delta);
    for (double y0 : {0.0, 0.5}) {
        Cone f = point_at(est_u, Vec{0.0, y0}).fiber_cone(params.delta);
        check(rep, "U fiber at (0," + fmt(y0) + ")", "{+-(1,0)} within one bin",
              fmt(f.directions().size()) + " bins", cone_match(f, expected_u, tol));
    }

    Cone expected_b(2, {Vec{0, 1}}, params.delta);
    Cone fb = point_at(est_b, Vec{0.0, 0.0}).fiber_cone(params.delta);
    check(rep, "B fiber at origin", "contained in {(0,+1)} within one bin",
          fmt(fb.directions().size()) + " bins", !fb.empty() && covers(expected_b, fb, tol));

    const auto& b_off = point_at(est_b, Vec{0.3, 0.3});
    bool b_reg = true;
    double b_minp = 1e18;
    for (const auto& bin : b_off.bins) {
        b_reg = b_reg && bin.verdict == Verdict::Regular;
        b_minp = std::min(b_minp, bin.fit.p_hat);
    }
    check(rep, "B regular at (0.3,0.3)", "all bins regular, p_hat >= 5",
          std::string(b_reg ? "all regular" : "not all regular") + ", min p_hat " + fmt(b_minp),
          b_reg && b_minp >= params.p_threshold);

    WaveFrontSet wfs_u = est_u.to_wavefront_set();
    WaveFrontSet wfs_b = est_b.to_wavefront_set();
    bool fav = favorable_position(wfs_u, wfs_b);
    check(rep, "favorable position of WF(U), WF(B)", "true", fav ? "true" : "false", fav);

    ProductBound bound = product_wf_bound(wfs_u, wfs_b);
    InclusionReport incl = check_inclusion(est_bu, bound.bound);
    check(rep, "product inclusion (BU vs theorem bound)", "holds",
          incl.holds ? "holds" : fmt(incl.witnesses.size()) + " witnesses",
          bound.applicable && incl.holds);

    // two-sided result at the origin: irregular bins fill the upper half plane
    const auto& pbu = point_at(est_bu, Vec{0.0, 0.0});
    int upper = 0, upper_irr = 0, lower_irr = 0;
    for (const auto& bin : pbu.bins) {
        if (bin.direction[1] > 1e-9) {
            ++upper;
            if (bin.verdict == Verdict::Irregular) ++upper_irr;
        } else if (bin.direction[1] < -1e-9 && bin.verdict == Verdict::Irregular) {
            ++lower_irr;
        }
    }
    check(rep, "Sigma(BU) covers the upper half plane",
          ">= 90% of upper bins irregular, none below",
          fmt(upper_irr) + "/" + fmt(upper) + " upper, " + fmt(lower_irr) + " lower",
          upper > 0 && upper_irr * 10 >= upper * 9 && lower_irr == 0);

    // uniform order over a closed cone below the axis
    std::vector<Vec> lower_dirs;
    for (int k = 0; k < 72; ++k) {
        double ang = 2.0 * kPi * k / 72;
        if (std::sin(ang) <= -std::sin(20.0 * kPi / 180.0))
            lower_dirs.push_back(Vec{std::cos(ang), std::sin(ang)});
    }
    CutoffWindow w0;
    w0.center = Vec{0.0, 0.0};
    w0.support_radius = 0.25;
    w0.plateau_radius = 0.125;
    UniformOrderResult uo = uniform_order_check(b, w0, Cone(2, lower_dirs, params.delta), params_b);
    check(rep, "uniform order of B on the lower cone", "finite N, p_hat >= 5 on all bins",
          "N_uniform " + fmt(uo.n_uniform) + ", min p " + fmt(uo.min_p) + ", bins " +
              fmt(uo.bins_in_gamma),
          uo.bins_in_gamma > 0 && uo.min_p >= params.p_threshold &&
              uo.n_uniform <= params.n_cap);

    // association checks (weak limits) by quadrature
    double d = phi.support_radius();
    int n_assoc = 0;
    for (double radius : {0.5, 0.35, 0.25}) {
        CutoffWindow wnd;
        wnd.center = Vec{0.0, 0.0};
        wnd.support_radius = radius;
        wnd.plateau_radius = radius / 2;
        double eps = std::ldexp(1.0, -12);
        auto psi = [&](double x, double y) {
            return wnd.axis_profile(x) * wnd.axis_profile(y);
        };
        double inner = gauss_legendre(
            [&](double y) {
                return gauss_legendre(
                    [&](double s) { return phi(s) * psi(eps * s + std::sqrt(eps) * y, y); }, -d,
                    d, 64);
            },
            -radius, radius, 128);
        double limit = gauss_legendre([&](double y) { return psi(0.0, y); }, -radius, radius, 128);
        if (std::abs(inner - limit) <= 0.01 * std::abs(limit)) ++n_assoc;
    }
    check(rep, "association <u_eps,psi> -> int psi(0,y) dy", "within 1% for 3 windows",
          fmt(n_assoc) + "/3", n_assoc == 3);

    // F(psi u_eps)(xi,0) -> g_hat(0)
    {
        CutoffWindow wnd;
        wnd.center = Vec{0.0, 0.0};
        wnd.support_radius = 0.5;
        wnd.plateau_radius = 0.25;
        double eps = std::ldexp(1.0, -12);
        double xi = 5.0;
        auto g = [&](double y) { return wnd.axis_profile(y); };
        auto f = [&](double x) { return wnd.axis_profile(x); };
        std::complex<double> acc{0.0, 0.0};
        const int ny = 512, ns = 128;
        for (int iy = 0; iy < ny; ++iy) {
            double y = -0.5 + (iy + 0.5) / ny;
            for (int is = 0; is < ns; ++is) {
                double s = -d + (is + 0.5) * 2.0 * d / ns;
                double x = eps * s + std::sqrt(eps) * y;
                acc += std::exp(std::complex<double>(0.0, -xi * x)) * phi(s) * f(x) * g(y) *
                       (2.0 * d / ns) * (1.0 / ny);
            }
        }
        double ghat0 = gauss_legendre(g, -0.5, 0.5, 128);
        bool ok = std::abs(std::abs(acc) - ghat0) <= 0.02 * ghat0;
        check(rep, "F(psi u_eps)(xi,0) -> g_hat(0)", "within 2%",
              fmt(std::abs(acc)) + " vs " + fmt(ghat0), ok);
    }

    assert_window_monotonicity(rep, "U", est_u);
    assert_window_monotonicity(rep, "BU", est_bu);

    rep.estimates.push_back({"U", std::move(est_u)});
    rep.estimates.push_back({"B", std::move(est_b)});
    rep.estimates.push_back({"BU", std::move(est_bu)});
    rep.cones.push_back({"bound_at_origin", *bound.bound.fiber_at(Vec{0.0, 0.0})});
    rep.inclusions.push_back({"thm_product_bound", incl});
}

void scenario_ex4_2(const ExperimentConfig& cfg, ScenarioReport& rep) {
    Mollifier phi = build_mollifier(cfg.mollifier_support_radius, cfg.mollifier_moment_order,
                                    cfg.mollifier_quadrature_resolution);
    const auto& params = cfg.estimator;

    ScaledFamily u = family_U(phi);
    ScaledFamily v = family_V(phi);
    ScaledFamily w = product(u, v);
    std::vector<double> ladder = eps_ladder(params.eps_k_min, params.eps_k_max);

    // support of W is the origin: balls away from it see exact zeros
    std::vector<Vec> centers = {Vec{0.0, 1.0},  Vec{0.0, -1.0}, Vec{0.0, 0.6},  Vec{0.0, -0.6},
                                Vec{0.5, 0.5},  Vec{-0.5, 0.5}, Vec{0.5, -0.5}, Vec{-0.5, -0.5}};
    int vanish = 0;
    for (const auto& c : centers)
        if (vanishes_on_ball(w, c, 0.3, ladder)) ++vanish;
    check(rep, "W vanishes on 8 balls away from origin", "8/8", fmt(vanish) + "/8", vanish == 8);
    bool at_origin = vanishes_on_ball(w, Vec{0.0, 0.0}, 0.1, ladder);
    check(rep, "W near the origin", "does not vanish", at_origin ? "vanishes" : "peak present",
          !at_origin);

    WaveFrontEstimate est_w = wavefront(w, {Vec{0.0, 0.0}}, params);
    const auto& pt = point_at(est_w, Vec{0.0, 0.0});

    // eight tested directions, 45 degrees apart
    int step = params.bins_s1 / 8;
    int n_ok = 0, n_irr = 0;
    std::string ns;
    for (int k = 0; k < 8; ++k) {
        const auto& bin = pt.bins[static_cast<std::size_t>(k * step)];
        bool ok = std::abs(bin.fit.n_hat - 0.5) <= 0.1 && bin.fit.p_hat <= 1.0;
        if (ok) ++n_ok;
        if (bin.verdict == Verdict::Irregular) ++n_irr;
        ns += (k ? "," : "") + fmt(bin.fit.n_hat);
    }
    check(rep, "growth exponent N_hat at origin", "0.5 +- 0.1 with p_hat <= 1 in 8/8 directions",
          fmt(n_ok) + "/8 (N_hat: " + ns + ")", n_ok == 8);
    check(rep, "all tested directions irregular", "8/8", fmt(n_irr) + "/8", n_irr == 8);

    // the product theorem's right-hand side fails here
    WaveFrontSet wf_u = exact_wf_U(params.delta);
    WaveFrontSet wf_v = exact_wf_U(params.delta);  // V has the same wave front set
    bool fav = favorable_position(wf_u, wf_v);
    check(rep, "favorable position of WF(U), WF(V)", "false", fav ? "true" : "false", !fav);

    ProductBound bound = product_wf_bound(wf_u, wf_v);
    check(rep, "theorem bound applicability", "not applicable",
          bound.applicable ? "applicable" : "not applicable", !bound.applicable);
    InclusionReport incl = check_inclusion(est_w, bound.bound);
    check(rep, "inclusion violation (UV)", "holds = false with >= 8 witnesses",
          std::string(incl.holds ? "holds" : "violated") + ", " + fmt(incl.witnesses.size()) +
              " witnesses",
          !incl.holds && incl.witnesses.size() >= 8);

    assert_window_monotonicity(rep, "UV", est_w);

    rep.estimates.push_back({"UV", std::move(est_w)});
    rep.inclusions.push_back({"eq19_rhs_violation", incl});
}

void scenario_ex5_1(const ExperimentConfig& cfg, ScenarioReport& rep) {
    Mollifier phi = build_mollifier(cfg.mollifier_support_radius, cfg.mollifier_moment_order,
                                    cfg.mollifier_quadrature_resolution);
    const auto& params = cfg.estimator;

    ScaledFamily u = family_U(phi);
    ScaledFamily v = family_V(phi);

    // exact wave front sets of the factors and the tensor bound
    WaveFrontSet wf_u = exact_wf_U(params.delta);
    WaveFrontSet wf_v = exact_wf_U(params.delta);
    WaveFrontSet bound = boxtimes(wf_u, wf_v, supp_U_samples(), supp_U_samples());

    // 2-D slices of T = U (x) V through (x2, x4) = const
    bool slices_ok = true;
    std::string slice_counts;
    for (double c : {0.0, 0.5}) {
        ScaledFamily slice(
            2,
            [u, v, c](double eps, const Vec& x) {
                return u(eps, Vec{x[0], c}) * v(eps, Vec{x[1], c});
            },
            u.eps_floor(), "T_slice");
        WaveFrontEstimate est = wavefront(slice, {Vec{0.0, 0.0}}, params);
        const auto& pt = point_at(est, Vec{0.0, 0.0});
        const Cone* fiber4 = bound.fiber_at(Vec{0.0, c, 0.0, c});
        int irr = 0;
        for (const auto& bin : pt.bins) {
            if (bin.verdict != Verdict::Irregular) continue;
            ++irr;
            Vec dir4{bin.direction[0], 0.0, bin.direction[1], 0.0};
            if (!fiber4 || fiber4->angular_distance_to(dir4) > params.delta) slices_ok = false;
        }
        if (irr == 0) slices_ok = false;
        slice_counts += (slice_counts.empty() ? "" : "; ") + fmt(irr) + " irregular bins";
        rep.estimates.push_back({"T_slice_x2_x4_" + fmt(c), std::move(est)});
    }
    check(rep, "tensor bound contains slice estimates", "all irregular bins inside",
          slice_counts, slices_ok);

    // exact WF(T) and its diagonal pullback
    WaveFrontSet wf_t;
    {
        std::vector<Vec> dirs;
        for (int k = 0; k < 12; ++k) {
            double ang = 2.0 * kPi * k / 12;
            dirs.push_back(Vec{std::cos(ang), 0.0, std::sin(ang), 0.0});
        }
        for (double x2 : {-0.5, 0.0, 0.5})
            for (double x4 : {-0.5, 0.0, 0.5})
                wf_t.add(Vec{0.0, x2, 0.0, x4}, Cone(4, dirs, params.delta));
    }
    AffineMap dmap = AffineMap::diagonal(2);
    WaveFrontSet pb = pullback_cone(dmap, wf_t, params.delta);
    Cone expected(2, {Vec{1, 0}, Vec{-1, 0}}, params.delta);
    bool pb_ok = !pb.entries.empty();
    for (const auto& e : pb.entries) {
        pb_ok = pb_ok && covers(expected, e.fiber, params.delta + 1e-9) &&
                covers(e.fiber, expected, params.delta + 1e-9);
        pb_ok = pb_ok && std::abs(e.base[0]) < 1e-9;
    }
    check(rep, "diagonal pullback of WF(T)", "fibers {(mu,0)} at (0,r)",
          fmt(pb.entries.size()) + " entries", pb_ok);

    // the pullback inclusion fails for d*T = UV
    ScaledFamily uv = product(u, v);
    WaveFrontEstimate est_uv = wavefront(uv, {Vec{0.0, 0.0}}, params);
    InclusionReport incl = check_inclusion(est_uv, pb);
    check(rep, "pullback inclusion violated", "holds = false",
          std::string(incl.holds ? "holds" : "violated") + ", " + fmt(incl.witnesses.size()) +
              " witnesses",
          !incl.holds && !incl.witnesses.empty());

    rep.estimates.push_back({"UV_diagonal", std::move(est_uv)});
    rep.inclusions.push_back({"pullback_violation", incl});
    rep.cones.push_back({"pullback_fiber", pb.entries.empty() ? Cone() : pb.entries[0].fiber});
}

}  // namespace

ScenarioReport run_scenario(const std::string& id, const ExperimentConfig& config) {
    config.validate();
    ScenarioReport rep;
    rep.scenario = id;
    rep.config = config;

    auto t0 = std::chrono::steady_clock::now();
    if (id == "smoke")
        scenario_smoke(config, rep);
    else if (id == "cones_remark")
        scenario_cones_remark(config, rep);
    else if (id == "ex2_2")
        scenario_ex2_2(config, rep);
    else if (id == "ex4_1")
        scenario_ex4_1(config, rep);
    else if (id == "ex4_2")
        scenario_ex4_2(config, rep);
    else if (id == "ex5_1")
        scenario_ex5_1(config, rep);
    else
        throw ConfigError("unknown scenario id: " + id);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_report_files(rep, config.output_dir);
    return rep;
}

}  // namespace colwave
