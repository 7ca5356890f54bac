#include "colwave/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "colwave/errors.hpp"

namespace colwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Vec> icosphere_directions(int level) {
    struct Tri {
        Vec a, b, c;
    };
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec> v = {
        Vec{-1, phi, 0}, Vec{1, phi, 0},   Vec{-1, -phi, 0}, Vec{1, -phi, 0},
        Vec{0, -1, phi}, Vec{0, 1, phi},   Vec{0, -1, -phi}, Vec{0, 1, -phi},
        Vec{phi, 0, -1}, Vec{phi, 0, 1},   Vec{-phi, 0, -1}, Vec{-phi, 0, 1},
    };
    for (auto& x : v) x = normalized(x);
    const int F[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                          {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                          {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                          {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    std::vector<Tri> tris;
    for (auto& f : F) tris.push_back({v[f[0]], v[f[1]], v[f[2]]});
    for (int l = 0; l < level; ++l) {
        std::vector<Tri> next;
        for (const auto& t : tris) {
            Vec ab = normalized(t.a + t.b);
            Vec bc = normalized(t.b + t.c);
            Vec ca = normalized(t.c + t.a);
            next.push_back({t.a, ab, ca});
            next.push_back({t.b, bc, ab});
            next.push_back({t.c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }
    std::vector<Vec> dirs;
    for (const auto& t : tris) dirs.push_back(normalized(t.a + t.b + t.c));
    return dirs;
}

Verdict classify(const DecayFit& f, const EstimatorParams& p) {
    if (f.p_hat >= p.p_threshold && f.n_hat <= p.n_cap && f.residual <= p.residual_cap)
        return Verdict::Regular;
    if (f.p_hat <= 1.0) return Verdict::Irregular;
    return Verdict::Inconclusive;
}

// The decay model bounds an envelope; oscillatory transforms dip through
// zero at isolated frequencies, so each rung probes a 5% neighborhood and
// keeps the largest magnitude.  Requires ladder ratio > 1.11 so the probe
// triples stay ordered.
std::vector<double> envelope_probes(const std::vector<double>& ladder) {
    std::vector<double> probes;
    probes.reserve(3 * ladder.size());
    for (double lam : ladder) {
        probes.push_back(0.95 * lam);
        probes.push_back(lam);
        probes.push_back(1.05 * lam);
    }
    return probes;
}

DirectionalSamples envelope_reduce(const DirectionalSamples& raw,
                                   const std::vector<double>& ladder) {
    DirectionalSamples out;
    out.truncated = raw.truncated;
    std::size_t full = raw.lambda.size() / 3;  // truncation drops a suffix
    for (std::size_t i = 0; i < full; ++i) {
        double m = std::max({raw.magnitude[3 * i], raw.magnitude[3 * i + 1],
                             raw.magnitude[3 * i + 2]});
        out.lambda.push_back(ladder[i]);
        out.magnitude.push_back(m);
    }
    if (full < ladder.size()) out.truncated = true;
    return out;
}

int pow2_at_least(double x) {
    int n = 2;
    while (n < x) n *= 2;
    return n;
}

// One sparse pass over the windowed field, then a splat per direction.
std::vector<DirectionalSamples> projection_samples_multi(const SampledField& field,
                                                         const CutoffWindow& w,
                                                         const std::vector<Vec>& dirs,
                                                         const std::vector<double>& ladder) {
    const int dim = field.dim;
    double cell = 1.0;
    double hmin = field.h[0];
    for (int a = 0; a < dim; ++a) {
        cell *= field.h[a];
        hmin = std::min(hmin, field.h[a]);
    }
    const double ht = hmin;

    struct Point {
        Vec x;
        std::complex<double> v;
    };
    std::vector<Point> pts;
    {
        std::array<int, 4> idx{};
        Vec x = Vec::zero(dim);
        for (std::size_t flat = 0; flat < field.values.size(); ++flat) {
            std::size_t rem = flat;
            for (int a = dim - 1; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % field.shape[a]);
                rem /= field.shape[a];
            }
            for (int a = 0; a < dim; ++a) x[a] = field.node(a, idx[a]);
            if (field.values[flat] == std::complex<double>(0.0, 0.0)) continue;
            double wgt = w(x);
            if (wgt == 0.0) continue;
            pts.push_back({x, field.values[flat] * (wgt * cell)});
        }
    }

    double tmin = 0, tmax = 0;
    for (int a = 0; a < dim; ++a) {
        double c0 = field.lo[a], c1 = field.hi[a];
        tmin -= std::max(std::abs(c0), std::abs(c1));
        tmax += std::max(std::abs(c0), std::abs(c1));
    }
    int nt = static_cast<int>(std::ceil((tmax - tmin) / ht)) + 2;
    const double guard = 0.8 * kPi / ht;

    std::vector<DirectionalSamples> out;
    std::vector<std::complex<double>> profile(nt);
    for (const auto& dir : dirs) {
        Vec d = normalized(dir);
        std::fill(profile.begin(), profile.end(), std::complex<double>(0.0, 0.0));
        for (const auto& p : pts) {
            double t = dot(p.x, d);
            double u = (t - tmin) / ht;
            int b = static_cast<int>(std::floor(u));
            double frac = u - b;
            profile[b] += p.v * (1.0 - frac);
            profile[b + 1] += p.v * frac;
        }
        DirectionalSamples ds;
        for (double lam : ladder) {
            if (lam > guard) {
                ds.truncated = true;
                continue;
            }
            std::complex<double> acc{0.0, 0.0};
            std::complex<double> rot = std::exp(std::complex<double>(0.0, -lam * ht));
            std::complex<double> ph = std::exp(std::complex<double>(0.0, -lam * tmin));
            for (int b = 0; b < nt; ++b) {
                acc += profile[b] * ph;
                ph *= rot;
            }
            double arg = 0.5 * lam * ht;
            double s = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
            ds.lambda.push_back(lam);
            ds.magnitude.push_back(std::abs(acc) / (s * s));
        }
        out.push_back(std::move(ds));
    }
    return out;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Regular: return "regular";
        case Verdict::Irregular: return "irregular";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<Vec> direction_bins(int dim, const EstimatorParams& params) {
    std::vector<Vec> bins;
    if (dim == 1) {
        bins.push_back(Vec{1.0});
        bins.push_back(Vec{-1.0});
    } else if (dim == 2) {
        for (int k = 0; k < params.bins_s1; ++k) {
            double a = 2.0 * kPi * k / params.bins_s1;
            bins.push_back(Vec{std::cos(a), std::sin(a)});
        }
    } else if (dim == 3) {
        bins = icosphere_directions(params.icosphere_level);
    } else {
        throw ConfigError("direction_bins: dim must be 1..3");
    }
    return bins;
}

Cone WindowEstimate::sigma_cone(double tolerance) const {
    std::vector<Vec> dirs;
    for (const auto& b : bins)
        if (b.verdict != Verdict::Regular) dirs.push_back(b.direction);
    int d = bins.empty() ? 0 : bins.front().direction.dim;
    return Cone(d, dirs, tolerance);
}

Cone WindowEstimate::irregular_cone(double tolerance) const {
    std::vector<Vec> dirs;
    for (const auto& b : bins)
        if (b.verdict == Verdict::Irregular) dirs.push_back(b.direction);
    int d = bins.empty() ? 0 : bins.front().direction.dim;
    return Cone(d, dirs, tolerance);
}

Cone PointEstimate::fiber_cone(double tolerance) const {
    std::vector<Vec> dirs;
    for (const auto& b : bins)
        if (b.verdict == Verdict::Irregular) dirs.push_back(b.direction);
    int d = bins.empty() ? 0 : bins.front().direction.dim;
    return Cone(d, dirs, tolerance);
}

Cone PointEstimate::conservative_cone(double tolerance) const {
    std::vector<Vec> dirs;
    for (const auto& b : bins)
        if (b.verdict != Verdict::Regular) dirs.push_back(b.direction);
    int d = bins.empty() ? 0 : bins.front().direction.dim;
    return Cone(d, dirs, tolerance);
}

WaveFrontSet WaveFrontEstimate::to_wavefront_set() const {
    WaveFrontSet wf;
    for (const auto& p : points) wf.entries.push_back({p.base, p.fiber_cone(params.delta)});
    return wf;
}

WindowEstimate sigma_g(const ScaledFamily& f, const CutoffWindow& window,
                       const EstimatorParams& params) {
    const int dim = f.dim();
    WindowEstimate est;
    est.window = window;

    Vec lo = Vec::zero(dim), hi = Vec::zero(dim);
    double boxwidth = 2.0 * window.support_radius * params.box_margin;
    for (int a = 0; a < dim; ++a) {
        lo[a] = window.center[a] - 0.5 * boxwidth;
        hi[a] = window.center[a] + 0.5 * boxwidth;
    }

    std::vector<double> ladder = eps_ladder(params.eps_k_min, params.eps_k_max);
    std::vector<std::pair<double, std::array<int, 4>>> usable;
    for (double eps : ladder) {
        int need = pow2_at_least(std::max<double>(params.base_shape(dim), 8.0 * boxwidth / eps));
        if (need > params.shape_cap(dim)) {
            std::ostringstream msg;
            msg << "eps=" << eps << " dropped: required shape " << need << " exceeds cap "
                << params.shape_cap(dim);
            est.warnings.push_back(msg.str());
            continue;
        }
        std::array<int, 4> shape{};
        for (int a = 0; a < dim; ++a) shape[a] = need;
        usable.push_back({eps, shape});
    }
    if (static_cast<int>(usable.size()) < params.min_eps_rows) {
        est.warnings.push_back("window dropped: fewer than the minimum usable eps rows");
        return est;
    }

    // transition width must be resolved by the coarsest usable grid
    double hmax_coarse = boxwidth / usable.front().second[0];
    if (window.support_radius - window.plateau_radius < 8.0 * hmax_coarse) {
        est.warnings.push_back("window dropped: transition under-resolved on the base grid");
        return est;
    }

    std::vector<double> ladder_l =
        lambda_ladder(params.lambda_min, params.lambda_max, params.lambda_ratio);
    std::vector<Vec> bins = direction_bins(dim, params);

    bool use_projection = false;
    switch (params.sampler) {
        case SamplerChoice::Grid: use_projection = false; break;
        case SamplerChoice::Projection: use_projection = true; break;
        case SamplerChoice::Auto: {
            double dxi = 2.0 * kPi / (boxwidth * params.pad_factor);
            use_projection = params.lambda_min < 3.0 * dxi;
            break;
        }
    }
    est.sampler = use_projection ? "projection" : "grid";

    std::vector<double> probes = envelope_probes(ladder_l);
    std::vector<std::vector<EpsSamples>> per_bin(bins.size());
    for (auto& [eps, shape] : usable) {
        SampledField field = evaluate_on_grid(f, eps, lo, hi, shape);
        if (use_projection) {
            auto rows = projection_samples_multi(field, window, bins, probes);
            for (std::size_t b = 0; b < bins.size(); ++b)
                per_bin[b].push_back({eps, envelope_reduce(rows[b], ladder_l)});
        } else {
            SampledField ft = windowed_ft(field, window, params.pad_factor);
            for (std::size_t b = 0; b < bins.size(); ++b)
                per_bin[b].push_back(
                    {eps, envelope_reduce(directional_samples(ft, bins[b], probes), ladder_l)});
        }
        est.eps_used.push_back(eps);
    }

    for (std::size_t b = 0; b < bins.size(); ++b) {
        DirectionBin db;
        db.direction = bins[b];
        db.fit = fit_decay(per_bin[b], bins[b]);
        db.verdict = classify(db.fit, params);
        db.series = std::move(per_bin[b]);
        est.bins.push_back(std::move(db));
    }
    return est;
}

PointEstimate sigma_g_at(const ScaledFamily& f, const Vec& x0,
                         const std::vector<double>& window_radii, const EstimatorParams& params) {
    if (window_radii.size() < 2) throw ConfigError("sigma_g_at: need at least 2 window radii");
    PointEstimate pe;
    pe.base = x0;

    for (double r : window_radii) {
        CutoffWindow w;
        w.center = x0;
        w.support_radius = r;
        w.plateau_radius = r * params.plateau_fraction;
        WindowEstimate we = sigma_g(f, w, params);
        for (const auto& warn : we.warnings) pe.warnings.push_back(warn);
        if (!we.bins.empty()) pe.window_details.push_back(std::move(we));
    }
    if (pe.window_details.empty())
        throw ResolutionError("sigma_g_at: every window in the schedule was dropped", {}, f.dim());

    const auto& bins0 = pe.window_details.front().bins;
    for (std::size_t b = 0; b < bins0.size(); ++b) {
        DirectionBin agg;
        agg.direction = bins0[b].direction;
        bool any_regular = false, all_irregular = true;
        const DecayFit* regular_fit = nullptr;
        const DecayFit* minp_fit = nullptr;
        for (const auto& we : pe.window_details) {
            const auto& wb = we.bins[b];
            if (wb.verdict == Verdict::Regular) {
                any_regular = true;
                if (!regular_fit || wb.fit.p_hat > regular_fit->p_hat) regular_fit = &wb.fit;
            }
            if (wb.verdict != Verdict::Irregular) all_irregular = false;
            if (!minp_fit || wb.fit.p_hat < minp_fit->p_hat) minp_fit = &wb.fit;
        }
        if (any_regular) {
            agg.verdict = Verdict::Regular;
            agg.fit = *regular_fit;
        } else {
            agg.verdict = all_irregular ? Verdict::Irregular : Verdict::Inconclusive;
            agg.fit = *minp_fit;
        }
        // carry the series of the window whose fit was chosen
        for (const auto& we : pe.window_details) {
            if (&we.bins[b].fit == (any_regular ? regular_fit : minp_fit)) {
                agg.series = we.bins[b].series;
                break;
            }
        }
        pe.bins.push_back(std::move(agg));
    }
    return pe;
}

WaveFrontEstimate wavefront(const ScaledFamily& f, const std::vector<Vec>& base_grid,
                            const EstimatorParams& params) {
    WaveFrontEstimate est;
    est.params = params;
    for (const auto& x0 : base_grid)
        est.points.push_back(sigma_g_at(f, x0, params.window_radii, params));
    return est;
}

UniformOrderResult uniform_order_check(const ScaledFamily& f, const CutoffWindow& window,
                                       const Cone& gamma, const EstimatorParams& params) {
    WindowEstimate we = sigma_g(f, window, params);
    if (we.bins.empty()) throw ResolutionError("uniform_order_check: window dropped", {}, f.dim());

    Cone sigma = we.sigma_cone(params.delta);
    if (!sigma.empty()) {
        for (const auto& s : gamma.samples()) {
            if (sigma.angular_distance_to(s) <= params.delta)
                throw DomainError("uniform_order_check: gamma touches the estimated Sigma_g");
        }
    }

    UniformOrderResult res;
    res.min_p = std::numeric_limits<double>::max();
    for (const auto& b : we.bins) {
        if (!gamma.contains(b.direction)) continue;
        ++res.bins_in_gamma;
        res.n_uniform = std::max(res.n_uniform, b.fit.n_hat);
        res.min_p = std::min(res.min_p, b.fit.p_hat);
    }
    if (res.bins_in_gamma == 0) res.min_p = 0.0;
    return res;
}

}  // namespace colwave
