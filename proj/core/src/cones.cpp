#include "colwave/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "colwave/errors.hpp"

namespace colwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Quantized spatial dedupe for unit vectors: one representative per cell.
struct DirectionDedupe {
    double cell;
    std::unordered_set<long long> seen;

    explicit DirectionDedupe(double tolerance) : cell(std::max(tolerance / 3.0, 1e-6)) {}

    bool insert(const Vec& d) {
        long long key = 0;
        for (int i = 0; i < d.dim; ++i) {
            auto q = static_cast<long long>(std::floor(d[i] / cell)) & 0x1FFFFF;
            key = (key << 21) | q;
        }
        return seen.insert(key).second;
    }
};

double point_to_ray_distance(const Vec& unit_point, const Vec& unit_ray) {
    double c = dot(unit_point, unit_ray);
    if (c <= 0.0) return 1.0;  // nearest cone point is the apex
    double s2 = 1.0 - c * c;
    return s2 > 0.0 ? std::sqrt(s2) : 0.0;
}

}  // namespace

Cone::Cone(int dim, std::vector<Vec> directions, double tolerance) : dim_(dim), tol_(tolerance) {
    for (auto& d : directions) {
        if (d.dim != dim) throw DomainError("Cone: direction dimension mismatch");
        directions_.push_back(normalized(d));
    }
    rebuild_samples();
}

Cone Cone::from_curves(int dim, std::vector<GeneratorCurve> curves, double tolerance) {
    Cone c;
    c.dim_ = dim;
    c.tol_ = tolerance;
    c.curves_ = std::move(curves);
    c.rebuild_samples();
    return c;
}

Cone Cone::ray(const Vec& direction, double tolerance) {
    return Cone(direction.dim, {direction}, tolerance);
}

void Cone::rebuild_samples() {
    samples_ = directions_;
    for (const auto& g : curves_) {
        int n = std::max(g.sample_count, 2);
        for (int i = 0; i < n; ++i) {
            double t = g.t0 + (g.t1 - g.t0) * i / (n - 1);
            Vec p = g.point(t);
            if (norm(p) > 0) samples_.push_back(normalized(p));
        }
    }
}

void Cone::add_direction(const Vec& d) {
    directions_.push_back(normalized(d));
    samples_.push_back(directions_.back());
}

double Cone::angular_distance_to(const Vec& xi) const {
    if (norm(xi) == 0) throw DomainError("Cone: zero covector queried");
    double best = kPi;
    for (const auto& s : samples_) best = std::min(best, angular_distance(xi, s));
    return best;
}

bool Cone::contains(const Vec& xi) const {
    if (empty()) return false;
    return angular_distance_to(xi) <= tol_;
}

Cone union_cones(const Cone& a, const Cone& b) {
    if (a.dim() != b.dim()) throw DomainError("union_cones: dimension mismatch");
    std::vector<Vec> dirs = a.directions();
    for (const auto& d : b.directions()) dirs.push_back(d);
    std::vector<GeneratorCurve> curves = a.curves();
    for (const auto& g : b.curves()) curves.push_back(g);
    Cone u = Cone::from_curves(a.dim(), std::move(curves), std::max(a.tolerance(), b.tolerance()));
    for (const auto& d : dirs) u.add_direction(d);
    return u;
}

bool zero_in_sum(const Cone& g1, const Cone& g2) {
    double tol = std::max(g1.tolerance(), g2.tolerance());
    for (const auto& a : g1.samples())
        for (const auto& b : g2.samples())
            if (norm(a + b) < tol) return true;
    return false;
}

MinkowskiSum minkowski_sum(const Cone& g1, const Cone& g2) {
    if (g1.dim() != g2.dim()) throw DomainError("minkowski_sum: dimension mismatch");
    double tol = std::max(g1.tolerance(), g2.tolerance());
    MinkowskiSum out;
    out.zero_in_sum = false;

    // Scale ratios r = lambda2/lambda1 on a log grid over [tol^2, 1/tol^2];
    // step chosen so consecutive sum directions differ by < tol.
    const int nratio = 1025;
    const double lo = std::log(tol * tol), hi = -lo;
    std::vector<double> ratios(nratio);
    for (int i = 0; i < nratio; ++i) ratios[i] = std::exp(lo + (hi - lo) * i / (nratio - 1));

    DirectionDedupe dedupe(tol);
    std::vector<Vec> dirs;
    for (const auto& a : g1.samples()) {
        for (const auto& b : g2.samples()) {
            if (norm(a + b) < tol) {
                out.zero_in_sum = true;
                continue;
            }
            for (double r : ratios) {
                Vec s = a + r * b;
                double n = norm(s);
                if (n < tol * std::max(1.0, r)) continue;  // near-cancelling
                Vec d = s * (1.0 / n);
                if (dedupe.insert(d)) dirs.push_back(d);
            }
        }
    }
    out.cone = Cone(g1.dim(), std::move(dirs), tol);
    return out;
}

Cone closure_of_sum(const Cone& g1, const Cone& g2) {
    MinkowskiSum ms = minkowski_sum(g1, g2);
    if (ms.zero_in_sum)
        throw DomainError(
            "closure_of_sum: 0 in G1+G2 (cones not in favorable position); "
            "the closure identity fails");
    return union_cones(ms.cone, union_cones(g1, g2));
}

double separation_constant(const Cone& s1, const Cone& s2) {
    if (s1.dim() != s2.dim()) throw DomainError("separation_constant: dimension mismatch");
    if (s1.empty() || s2.empty()) throw DomainError("separation_constant: empty cone");
    double tol = std::max(s1.tolerance(), s2.tolerance());

    double min_angle = kPi;
    for (const auto& a : s1.samples())
        for (const auto& b : s2.samples()) min_angle = std::min(min_angle, angular_distance(a, b));
    if (min_angle <= tol)
        throw DomainError("separation_constant: cones intersect at sample level");

    double alpha = 1.0;
    for (const auto& eta : s2.samples()) {
        double best = 1.0;
        for (const auto& xi : s1.samples()) best = std::min(best, point_to_ray_distance(eta, xi));
        alpha = std::min(alpha, best);
    }

    // Certify on random scaled pairs.
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> ulog(std::log(1e-3), std::log(1e3));
    std::uniform_int_distribution<std::size_t> pick1(0, s1.samples().size() - 1);
    std::uniform_int_distribution<std::size_t> pick2(0, s2.samples().size() - 1);
    for (int i = 0; i < 10000; ++i) {
        Vec xi = s1.samples()[pick1(rng)] * std::exp(ulog(rng));
        Vec eta = s2.samples()[pick2(rng)] * std::exp(ulog(rng));
        if (norm(xi - eta) < (alpha - 1e-9) * norm(eta))
            throw DomainError("separation_constant: certificate failed");
    }
    return alpha;
}

Cone conic_neighborhood(const Cone& g, double theta) {
    if (theta <= 0) throw DomainError("conic_neighborhood: theta must be > 0");
    std::vector<Vec> dirs = g.samples();

    if (g.dim() == 2) {
        int m = std::max(1, static_cast<int>(std::ceil(theta / 0.01)));
        for (const auto& d : g.samples()) {
            double a0 = std::atan2(d[1], d[0]);
            for (int j = 1; j <= m; ++j) {
                double a = theta * j / m;
                dirs.push_back(Vec{std::cos(a0 + a), std::sin(a0 + a)});
                dirs.push_back(Vec{std::cos(a0 - a), std::sin(a0 - a)});
            }
        }
    } else if (g.dim() == 3) {
        int m = std::max(1, static_cast<int>(std::ceil(theta / 0.02)));
        for (const auto& d : g.samples()) {
            // local orthonormal frame
            Vec up = std::abs(d[2]) < 0.9 ? Vec{0, 0, 1} : Vec{1, 0, 0};
            Vec e1 = up - dot(up, d) * d;
            e1 = normalized(e1);
            Vec e2{d[1] * e1[2] - d[2] * e1[1], d[2] * e1[0] - d[0] * e1[2],
                   d[0] * e1[1] - d[1] * e1[0]};
            for (int j = 1; j <= m; ++j) {
                double rho = theta * j / m;
                for (int k = 0; k < 16; ++k) {
                    double psi = 2.0 * kPi * k / 16;
                    Vec dir = std::cos(rho) * d +
                              std::sin(rho) * (std::cos(psi) * e1 + std::sin(psi) * e2);
                    dirs.push_back(dir);
                }
            }
        }
    }
    // dim 1: the sample set is already all of {-1, +1} reachable below pi.

    DirectionDedupe dedupe(std::min(g.tolerance(), theta) / 2);
    std::vector<Vec> unique;
    for (const auto& d : dirs) {
        Vec u = normalized(d);
        if (dedupe.insert(u)) unique.push_back(u);
    }
    return Cone(g.dim(), std::move(unique), g.tolerance());
}

NeighborhoodsResult neighborhoods_with_sum_inside(const Cone& g1, const Cone& g2, const Cone& w) {
    NeighborhoodsResult res;
    if (zero_in_sum(g1, g2)) {
        res.message = "0 in G1+G2: no conic neighborhoods with bounded sum exist";
        return res;
    }
    double theta = kPi / 6.0;
    while (theta >= 1e-4) {
        Cone w1 = conic_neighborhood(g1, theta);
        Cone w2 = conic_neighborhood(g2, theta);
        MinkowskiSum ms = minkowski_sum(w1, w2);
        if (!ms.zero_in_sum) {
            bool inside = true;
            for (const auto& d : ms.cone.samples()) {
                if (!w.contains(d)) {
                    inside = false;
                    break;
                }
            }
            if (inside) {
                res.success = true;
                res.theta = theta;
                res.w1 = std::move(w1);
                res.w2 = std::move(w2);
                res.certificate = ms.cone.samples();
                res.message = "ok";
                return res;
            }
        }
        theta *= 0.5;
    }
    res.message = "bisection exhausted below 1e-4 rad";
    return res;
}

namespace {

struct Generator {
    bool is_curve = false;
    Vec fixed;
    const GeneratorCurve* curve = nullptr;

    Vec unit_at(double t) const {
        if (!is_curve) return fixed;
        double tc = std::clamp(t, curve->t0, curve->t1);
        return normalized(curve->point(tc));
    }
};

std::vector<Generator> generators_of(const Cone& g) {
    std::vector<Generator> out;
    for (const auto& d : g.directions()) out.push_back({false, d, nullptr});
    for (const auto& c : g.curves()) out.push_back({true, Vec{}, &c});
    return out;
}

// Residual of the best exact representation xi = a c1 + b c2 with a,b >= 0.
// Returns a large value when the required coefficients exceed the cap.
double pair_residual(const Vec& c1, const Vec& c2, const Vec& xi, double coeff_cap) {
    const double big = std::numeric_limits<double>::max() / 4;
    double nxi = norm(xi);
    double g12 = dot(c1, c2);
    double b1 = dot(c1, xi), b2 = dot(c2, xi);
    double det = 1.0 - g12 * g12;

    auto ray_resid = [&](const Vec& c, double proj) {
        if (proj < 0) return nxi;
        Vec r = xi - proj * c;
        return norm(r);
    };

    if (det < 1e-14) {
        // Parallel generators: the reachable set is the ray (same direction)
        // or the full line (antipodal).
        if (g12 > 0) return ray_resid(c1, b1);
        Vec r = xi - b1 * c1;
        return norm(r);
    }
    double a = (b1 - g12 * b2) / det;
    double b = (b2 - g12 * b1) / det;
    if (a < -1e-12 * nxi || b < -1e-12 * nxi)
        return std::min(ray_resid(c1, b1), ray_resid(c2, b2));
    if (std::max(a, b) > coeff_cap * std::max(nxi, 1e-300)) return big;
    Vec r = xi - a * c1 - b * c2;
    return norm(r);
}

}  // namespace

bool contains_exact(const Cone& g, const Vec& xi, double angle_tol) {
    for (const auto& d : g.directions())
        if (angular_distance(xi, d) <= angle_tol) return true;
    for (const auto& c : g.curves()) {
        const int n = 257;
        double best_t = c.t0, best = kPi;
        for (int i = 0; i < n; ++i) {
            double t = c.t0 + (c.t1 - c.t0) * i / (n - 1);
            Vec p = c.point(t);
            if (norm(p) == 0) continue;
            double a = angular_distance(xi, p);
            if (a < best) {
                best = a;
                best_t = t;
            }
        }
        // golden-section polish around the best grid parameter
        double h = (c.t1 - c.t0) / (n - 1);
        double lo = std::max(c.t0, best_t - h), hi = std::min(c.t1, best_t + h);
        for (int it = 0; it < 80; ++it) {
            double m1 = lo + 0.381966 * (hi - lo);
            double m2 = hi - 0.381966 * (hi - lo);
            double a1 = angular_distance(xi, c.point(m1));
            double a2 = angular_distance(xi, c.point(m2));
            if (a1 < a2)
                hi = m2;
            else
                lo = m1;
            best = std::min(best, std::min(a1, a2));
        }
        if (best <= angle_tol) return true;
    }
    return false;
}

bool sum_union_contains_exact(const Cone& g1, const Cone& g2, const Vec& xi, double residual_tol,
                              double coeff_cap) {
    if (norm(xi) == 0) throw DomainError("sum_union_contains_exact: zero covector");
    if (contains_exact(g1, xi) || contains_exact(g2, xi)) return true;

    const double accept = residual_tol * norm(xi);
    for (const auto& gen1 : generators_of(g1)) {
        for (const auto& gen2 : generators_of(g2)) {
            const int n1 = gen1.is_curve ? 129 : 1;
            const int n2 = gen2.is_curve ? 129 : 1;
            auto param = [](const Generator& g, int i, int n) {
                if (!g.is_curve || n == 1) return 0.0;
                return g.curve->t0 + (g.curve->t1 - g.curve->t0) * i / (n - 1);
            };
            auto resid = [&](double t, double s) {
                return pair_residual(gen1.unit_at(t), gen2.unit_at(s), xi, coeff_cap);
            };

            double best = std::numeric_limits<double>::max();
            double bt = 0, bs = 0;
            for (int i = 0; i < n1; ++i) {
                for (int j = 0; j < n2; ++j) {
                    double t = param(gen1, i, n1), s = param(gen2, j, n2);
                    double r = resid(t, s);
                    if (r < best) {
                        best = r;
                        bt = t;
                        bs = s;
                    }
                }
            }
            if (best <= accept) return true;

            // Bounded pattern search from the best grid cell.  A direction in
            // the sum proper has an attained interior/boundary minimum with
            // residual ~ machine precision; closure-only directions stall at
            // the coefficient cap with residual well above `accept`.
            double ht = gen1.is_curve ? (gen1.curve->t1 - gen1.curve->t0) / (n1 - 1) : 0.0;
            double hs = gen2.is_curve ? (gen2.curve->t1 - gen2.curve->t0) / (n2 - 1) : 0.0;
            double t = bt, s = bs;
            for (int it = 0; it < 200 && best > accept; ++it) {
                bool improved = false;
                const double cand[4][2] = {{t + ht, s}, {t - ht, s}, {t, s + hs}, {t, s - hs}};
                for (auto& c : cand) {
                    if (ht == 0.0 && c[0] != t) continue;
                    if (hs == 0.0 && c[1] != s) continue;
                    double r = resid(c[0], c[1]);
                    if (r < best) {
                        best = r;
                        t = c[0];
                        s = c[1];
                        improved = true;
                    }
                }
                if (!improved) {
                    ht *= 0.5;
                    hs *= 0.5;
                    if (std::max(ht, hs) < 1e-15) break;
                }
            }
            if (best <= accept) return true;
        }
    }
    return false;
}

Cone gamma_B(const LimitPointSet& B, double tolerance) {
    std::vector<double> bs = B.points;
    for (auto [lo, hi] : B.intervals) {
        if (hi < lo) std::swap(lo, hi);
        int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.05)));
        for (int i = 0; i <= n; ++i) bs.push_back(lo + (hi - lo) * i / n);
    }
    if (bs.empty()) throw DomainError("gamma_B: empty limit point set");
    std::vector<Vec> dirs;
    for (double b : bs) {
        double n = std::sqrt(1.0 + b * b);
        dirs.push_back(Vec{1.0 / n, -b / n});
        dirs.push_back(Vec{-1.0 / n, b / n});
    }
    return Cone(2, std::move(dirs), tolerance);
}

Vec AffineMap::apply(const Vec& x) const {
    Eigen::VectorXd v(dim_in());
    for (int i = 0; i < dim_in(); ++i) v(i) = x[i];
    Eigen::VectorXd y = jacobian * v + offset;
    Vec out = Vec::zero(dim_out());
    for (int i = 0; i < dim_out(); ++i) out[i] = y(i);
    return out;
}

AffineMap AffineMap::identity(int n) {
    return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

AffineMap AffineMap::diagonal(int n) {
    Eigen::MatrixXd j(2 * n, n);
    j << Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n);
    return {j, Eigen::VectorXd::Zero(2 * n)};
}

const Cone* WaveFrontSet::fiber_at(const Vec& x, double radius) const {
    for (const auto& e : entries)
        if (distance(e.base, x) <= radius) return &e.fiber;
    return nullptr;
}

void WaveFrontSet::add(const Vec& base, Cone fiber, double radius) {
    for (auto& e : entries) {
        if (distance(e.base, base) <= radius) {
            e.fiber = union_cones(e.fiber, fiber);
            return;
        }
    }
    entries.push_back({base, std::move(fiber)});
}

namespace {

// Unit samples of the subspace spanned by the columns of K (dim <= 3).
std::vector<Vec> subspace_directions(const Eigen::MatrixXd& K) {
    std::vector<Vec> dirs;
    int n = static_cast<int>(K.rows());
    int kdim = static_cast<int>(K.cols());
    auto push = [&](const Eigen::VectorXd& v) {
        double nn = v.norm();
        if (nn < 1e-14) return;
        Vec d = Vec::zero(n);
        for (int i = 0; i < n; ++i) d[i] = v(i) / nn;
        dirs.push_back(d);
    };
    if (kdim == 1) {
        push(K.col(0));
        push(-K.col(0));
    } else if (kdim == 2) {
        for (int i = 0; i < 180; ++i) {
            double a = 2.0 * kPi * i / 180;
            push(std::cos(a) * K.col(0) + std::sin(a) * K.col(1));
        }
    } else if (kdim >= 3) {
        // dense-enough sphere sampling of the first three basis vectors
        for (int i = 0; i < 24; ++i) {
            double ph = kPi * (i + 0.5) / 24;
            for (int j = 0; j < 48; ++j) {
                double th = 2.0 * kPi * j / 48;
                push(std::sin(ph) * std::cos(th) * K.col(0) +
                     std::sin(ph) * std::sin(th) * K.col(1) + std::cos(ph) * K.col(2));
            }
        }
    }
    return dirs;
}

}  // namespace

WaveFrontSet normal_set(const AffineMap& f, const std::vector<Vec>& domain_samples,
                        double tolerance) {
    WaveFrontSet out;
    Eigen::MatrixXd jt = f.jacobian.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jt);
    lu.setThreshold(1e-10);
    Eigen::MatrixXd K = lu.kernel();
    if (lu.dimensionOfKernel() == 0) return out;
    std::vector<Vec> dirs = subspace_directions(K);
    for (const auto& x : domain_samples)
        out.add(f.apply(x), Cone(f.dim_out(), dirs, tolerance));
    return out;
}

WaveFrontSet pullback_cone(const AffineMap& f, const WaveFrontSet& gamma, double tolerance) {
    WaveFrontSet out;
    auto cod = f.jacobian.completeOrthogonalDecomposition();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(f.jacobian);
    lu.setThreshold(1e-10);
    Eigen::MatrixXd K = lu.dimensionOfKernel() > 0 ? Eigen::MatrixXd(lu.kernel())
                                                   : Eigen::MatrixXd(f.dim_in(), 0);

    for (const auto& e : gamma.entries) {
        Eigen::VectorXd rhs(f.dim_out());
        for (int i = 0; i < f.dim_out(); ++i) rhs(i) = e.base[i] - f.offset(i);
        Eigen::VectorXd x0 = cod.solve(rhs);
        if ((f.jacobian * x0 - rhs).norm() > 1e-8 * (1.0 + rhs.norm())) continue;  // no preimage

        std::vector<Vec> fiber_dirs;
        for (const auto& d : e.fiber.samples()) {
            Eigen::VectorXd xi(f.dim_out());
            for (int i = 0; i < f.dim_out(); ++i) xi(i) = d[i];
            Eigen::VectorXd w = f.jacobian.transpose() * xi;
            if (w.norm() < 1e-12) continue;  // zero image dropped
            w.normalize();
            Vec dir = Vec::zero(f.dim_in());
            for (int i = 0; i < f.dim_in(); ++i) dir[i] = w(i);
            fiber_dirs.push_back(dir);
        }
        if (fiber_dirs.empty()) continue;

        std::vector<Eigen::VectorXd> preimages{x0};
        for (int k = 0; k < K.cols(); ++k)
            for (double t : {-1.0, -0.5, 0.5, 1.0}) preimages.push_back(x0 + t * K.col(k));
        for (const auto& p : preimages) {
            Vec base = Vec::zero(f.dim_in());
            for (int i = 0; i < f.dim_in(); ++i) base[i] = p(i);
            out.add(base, Cone(f.dim_in(), fiber_dirs, tolerance));
        }
    }
    return out;
}

bool favorable_position(const WaveFrontSet& wf1, const WaveFrontSet& wf2) {
    for (const auto& e1 : wf1.entries) {
        const Cone* f2 = wf2.fiber_at(e1.base);
        if (!f2 || e1.fiber.empty() || f2->empty()) continue;
        if (zero_in_sum(e1.fiber, *f2)) return false;
    }
    return true;
}

WaveFrontSet boxtimes(const WaveFrontSet& wf1, const WaveFrontSet& wf2,
                      const std::vector<Vec>& supp1, const std::vector<Vec>& supp2) {
    WaveFrontSet out;
    auto mixed_dirs = [](const Cone& f1, const Cone& f2) {
        // interior weights dense enough that consecutive directions differ by
        // less than the membership tolerance
        double tol = std::max(f1.tolerance(), f2.tolerance());
        DirectionDedupe dedupe(tol);
        std::vector<Vec> dirs;
        for (const auto& a : f1.samples()) {
            for (const auto& b : f2.samples()) {
                for (int j = 1; j <= 127; ++j) {
                    double w = kPi / 2.0 * j / 128.0;
                    Vec d = normalized(concat(std::cos(w) * a, std::sin(w) * b));
                    if (dedupe.insert(d)) dirs.push_back(d);
                }
            }
        }
        return dirs;
    };

    // WF1 x WF2 (both covector parts nonzero)
    for (const auto& e1 : wf1.entries) {
        if (e1.fiber.empty()) continue;
        for (const auto& e2 : wf2.entries) {
            if (e2.fiber.empty()) continue;
            int pd = e1.base.dim + e2.base.dim;
            out.add(concat(e1.base, e2.base),
                    Cone(pd, mixed_dirs(e1.fiber, e2.fiber),
                         std::max(e1.fiber.tolerance(), e2.fiber.tolerance())));
        }
    }
    // (supp1 x {0}) x WF2
    for (const auto& x : supp1) {
        for (const auto& e2 : wf2.entries) {
            if (e2.fiber.empty()) continue;
            std::vector<Vec> dirs;
            for (const auto& b : e2.fiber.samples())
                dirs.push_back(concat(Vec::zero(x.dim), b));
            out.add(concat(x, e2.base), Cone(x.dim + e2.base.dim, dirs, e2.fiber.tolerance()));
        }
    }
    // WF1 x (supp2 x {0})
    for (const auto& e1 : wf1.entries) {
        if (e1.fiber.empty()) continue;
        for (const auto& y : supp2) {
            std::vector<Vec> dirs;
            for (const auto& a : e1.fiber.samples())
                dirs.push_back(concat(a, Vec::zero(y.dim)));
            out.add(concat(e1.base, y), Cone(e1.base.dim + y.dim, dirs, e1.fiber.tolerance()));
        }
    }
    return out;
}

}  // namespace colwave
