#include "colwave/operations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "colwave/errors.hpp"

namespace colwave {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kClusterGap = 0.05;
}  // namespace

ScaledFamily product(const ScaledFamily& f, const ScaledFamily& g) {
    if (f.dim() != g.dim()) throw DomainError("product: dimension mismatch");
    return ScaledFamily(
        f.dim(),
        [f, g](double eps, const Vec& x) { return f(eps, x) * g(eps, x); },
        std::max(f.eps_floor(), g.eps_floor()), f.label() + "*" + g.label());
}

ScaledFamily tensor(const ScaledFamily& f, const ScaledFamily& g) {
    int m = f.dim(), n = g.dim();
    if (m + n > 4) throw DomainError("tensor: product dimension exceeds 4");
    return ScaledFamily(
        m + n,
        [f, g, m, n](double eps, const Vec& xy) {
            Vec x = Vec::zero(m), y = Vec::zero(n);
            for (int i = 0; i < m; ++i) x[i] = xy[i];
            for (int i = 0; i < n; ++i) y[i] = xy[m + i];
            return f(eps, x) * g(eps, y);
        },
        std::max(f.eps_floor(), g.eps_floor()), f.label() + "(x)" + g.label());
}

FamilyMap FamilyMap::from_affine(const AffineMap& f) {
    FamilyMap m;
    m.dim_in = f.dim_in();
    m.dim_out = f.dim_out();
    m.apply = [f](double, const Vec& x) { return f.apply(x); };
    return m;
}

ScaledFamily pullback(const ScaledFamily& f, const FamilyMap& map) {
    if (map.dim_out != f.dim()) throw DomainError("pullback: dimension mismatch");
    return ScaledFamily(
        map.dim_in,
        [f, map](double eps, const Vec& x) { return f(eps, map.apply(eps, x)); },
        f.eps_floor(), f.label() + "_pullback");
}

std::vector<double> dense_eps_ladder(double eps_max, double eps_min, int count) {
    if (count < 2 || eps_min >= eps_max) throw ConfigError("dense_eps_ladder: bad range");
    std::vector<double> out(count);
    double l0 = std::log(eps_max), l1 = std::log(eps_min);
    for (int i = 0; i < count; ++i) out[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
    return out;
}

LimitPointSet limit_points(const GeneralizedConstant& a, const std::vector<double>& ladder) {
    if (ladder.size() < 32) throw ConfigError("limit_points: ladder length must be >= 32");
    std::vector<double> eps_sorted = ladder;
    std::sort(eps_sorted.begin(), eps_sorted.end());  // ascending: tail = smallest eps
    std::size_t tail_len = eps_sorted.size() / 2;

    std::vector<double> vals;
    for (std::size_t i = 0; i < tail_len; ++i) {
        double v = a(eps_sorted[i]);
        if (std::abs(v) > a.bound() + 1e-12)
            throw DomainError("limit_points: net exceeds its declared bound");
        vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());

    LimitPointSet out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= vals.size(); ++i) {
        if (i == vals.size() || vals[i] - vals[i - 1] > kClusterGap) {
            double lo = vals[start], hi = vals[i - 1];
            if (hi - lo >= kClusterGap)
                out.intervals.push_back({lo, hi});
            else
                out.points.push_back(0.5 * (lo + hi));
            start = i;
        }
    }
    return out;
}

CharSetResult char_set(const FirstOrderOperator& p, const std::vector<double>& ladder, int bins,
                       double floor) {
    CharSetResult res;
    res.floor = floor;
    res.caveat =
        "fixed-mollifier slice: the uniform bound is tested along one ladder, "
        "not over all mollifier classes";
    std::vector<Vec> dirs;
    for (int k = 0; k < bins; ++k) {
        double ang = 2.0 * kPi * k / bins;
        Vec d{std::cos(ang), std::sin(ang)};
        double inf = std::numeric_limits<double>::max();
        for (double eps : ladder) inf = std::min(inf, std::abs(d[1] + p.a(eps) * d[0]));
        res.bin_dirs.push_back(d);
        res.bin_infima.push_back(inf);
        if (inf < floor) dirs.push_back(d);
    }
    res.characteristic = Cone(2, std::move(dirs));
    return res;
}

WaveFrontSet propagation_bound(const FirstOrderOperator& p, const WaveFrontSet& wf_rhs,
                               const std::vector<Vec>& base_points,
                               const std::vector<double>& ladder) {
    CharSetResult cs = char_set(p, ladder);
    WaveFrontSet out;
    for (const auto& x : base_points) {
        Cone fiber = cs.characteristic;
        if (const Cone* rhs = wf_rhs.fiber_at(x)) fiber = union_cones(fiber, *rhs);
        out.add(x, std::move(fiber));
    }
    for (const auto& e : wf_rhs.entries) {
        if (!out.fiber_at(e.base)) out.add(e.base, union_cones(e.fiber, cs.characteristic));
    }
    return out;
}

bool vanishes_on_ball(const ScaledFamily& f, const Vec& center, double radius,
                      const std::vector<double>& ladder, int grid_per_axis) {
    const int dim = f.dim();
    std::vector<double> eps_sorted = ladder;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    std::size_t n_eps = std::min<std::size_t>(4, eps_sorted.size());

    std::array<int, 4> idx{};
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(grid_per_axis);

    for (std::size_t e = 0; e < n_eps; ++e) {
        double eps = eps_sorted[e];
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            for (int a = dim - 1; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % grid_per_axis);
                rem /= grid_per_axis;
            }
            Vec x = Vec::zero(dim);
            double r2 = 0.0;
            for (int a = 0; a < dim; ++a) {
                x[a] = center[a] - radius + 2.0 * radius * idx[a] / (grid_per_axis - 1);
                r2 += (x[a] - center[a]) * (x[a] - center[a]);
            }
            if (r2 > radius * radius + 1e-15) continue;
            if (std::abs(f(eps, x)) != 0.0) return false;
        }
    }
    return true;
}

ProductBound product_wf_bound(const WaveFrontSet& wf1, const WaveFrontSet& wf2) {
    ProductBound out;
    out.applicable = favorable_position(wf1, wf2);

    for (const auto& e1 : wf1.entries) {
        const Cone* f2 = wf2.fiber_at(e1.base);
        if (!f2 || f2->empty()) {
            out.bound.add(e1.base, e1.fiber);
            continue;
        }
        if (e1.fiber.empty()) {
            out.bound.add(e1.base, *f2);
            continue;
        }
        Cone fiber = zero_in_sum(e1.fiber, *f2)
                         ? union_cones(minkowski_sum(e1.fiber, *f2).cone,
                                       union_cones(e1.fiber, *f2))
                         : closure_of_sum(e1.fiber, *f2);
        out.bound.add(e1.base, std::move(fiber));
    }
    for (const auto& e2 : wf2.entries) {
        if (!out.bound.fiber_at(e2.base)) out.bound.add(e2.base, e2.fiber);
    }
    return out;
}

InclusionReport check_inclusion(const WaveFrontEstimate& estimated, const WaveFrontSet& bound,
                                double base_radius) {
    InclusionReport rep;
    rep.tolerance = estimated.params.delta;
    for (const auto& pt : estimated.points) {
        const Cone* fiber = bound.fiber_at(pt.base, base_radius);
        for (const auto& bin : pt.bins) {
            if (bin.verdict != Verdict::Irregular) continue;
            bool inside = fiber && !fiber->empty() &&
                          fiber->angular_distance_to(bin.direction) <= rep.tolerance;
            if (!inside) rep.witnesses.push_back({pt.base, bin.direction, bin.fit});
        }
    }
    rep.holds = rep.witnesses.empty();
    return rep;
}

}  // namespace colwave
