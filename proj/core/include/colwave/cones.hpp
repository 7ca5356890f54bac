#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colwave/geometry.hpp"

namespace colwave {

inline constexpr double kDefaultConeTolerance = 0.02;  // radians
inline constexpr double kBaseMatchRadius = 0.05;

/// Parametric generator curve t -> direction (not necessarily unit; membership
/// and sampling normalize).  Gives exact generators for curved cones that
/// sampled direction sets cannot express, e.g. t -> (-1, t, t^2).
struct GeneratorCurve {
    std::function<Vec(double)> point;
    double t0 = 0.0;
    double t1 = 1.0;
    int sample_count = 129;
};

/// Closed cone in R^n \ 0 represented by unit direction samples with an
/// angular tolerance, plus optional exact generator curves.
class Cone {
  public:
    Cone() = default;
    Cone(int dim, std::vector<Vec> directions, double tolerance = kDefaultConeTolerance);

    static Cone from_curves(int dim, std::vector<GeneratorCurve> curves,
                            double tolerance = kDefaultConeTolerance);
    static Cone ray(const Vec& direction, double tolerance = kDefaultConeTolerance);

    int dim() const { return dim_; }
    double tolerance() const { return tol_; }
    bool empty() const { return directions_.empty() && curves_.empty(); }

    const std::vector<Vec>& directions() const { return directions_; }
    const std::vector<GeneratorCurve>& curves() const { return curves_; }

    /// All unit samples: stored directions plus curve samples.
    const std::vector<Vec>& samples() const { return samples_; }

    /// Angular distance from xi's direction to the sample set (pi if empty).
    double angular_distance_to(const Vec& xi) const;

    /// Membership: within tolerance of the samples.  Scale-invariant.
    bool contains(const Vec& xi) const;

    void add_direction(const Vec& d);

  private:
    int dim_ = 0;
    double tol_ = kDefaultConeTolerance;
    std::vector<Vec> directions_;
    std::vector<GeneratorCurve> curves_;
    std::vector<Vec> samples_;

    void rebuild_samples();
};

/// Union of direction samples and curves; tolerance is the max of the two.
Cone union_cones(const Cone& a, const Cone& b);

/// True iff some pair of unit samples is antipodal to within the tolerance,
/// i.e. 0 lies in the sampled Minkowski sum.
bool zero_in_sum(const Cone& g1, const Cone& g2);

struct MinkowskiSum {
    Cone cone;
    bool zero_in_sum = false;
};

/// Sampled Minkowski sum: normalized sums d1 + r d2 over a log grid of scale
/// ratios r in [tol^2, 1/tol^2].  Near-cancelling sums are skipped and flagged.
MinkowskiSum minkowski_sum(const Cone& g1, const Cone& g2);

/// (G1 + G2) u G1 u G2 — the closure of the sum in R^n \ 0 when 0 is not in
/// G1 + G2.  Throws DomainError when zero_in_sum (the identity fails then).
Cone closure_of_sum(const Cone& g1, const Cone& g2);

/// Largest alpha with |xi - eta| >= alpha |eta| for xi in S1, eta in S2.
/// Requires sample-level disjointness; the returned value is re-certified on
/// a dense random sample of scaled pairs.
double separation_constant(const Cone& s1, const Cone& s2);

/// All directions within angular distance theta of the cone (enriched sample
/// representation; membership keeps the base tolerance).
Cone conic_neighborhood(const Cone& g, double theta);

struct NeighborhoodsResult {
    bool success = false;
    double theta = 0.0;
    Cone w1, w2;
    std::vector<Vec> certificate;  // sum samples verified inside W
    std::string message;
};

/// Open conic neighborhoods W1, W2 of G1, G2 with W1 + W2 inside W, found by
/// halving the half-angle from 30 degrees.  Returns a failure report instead
/// of throwing: the construction cannot succeed when 0 in G1 + G2.
NeighborhoodsResult neighborhoods_with_sum_inside(const Cone& g1, const Cone& g2, const Cone& w);

/// Exact attained-witness membership of xi in (G1 + G2) u G1 u G2 using the
/// cones' generators (curves swept over their parameters).  Membership
/// requires an exact representation xi = a c1(t) + b c2(s) with a,b >= 0 at
/// finite coefficients; limit directions that are only in the closure of the
/// sum are rejected.  This is what distinguishes the curved-cone example
/// where the closure identity fails.
bool sum_union_contains_exact(const Cone& g1, const Cone& g2, const Vec& xi,
                              double residual_tol = 1e-9, double coeff_cap = 1e7);

/// Exact membership of xi in a single cone (angle to a generator below tol).
bool contains_exact(const Cone& g, const Vec& xi, double angle_tol = 1e-9);

/// Finite set of limit points and/or closed intervals of a bounded net.
struct LimitPointSet {
    std::vector<double> points;
    std::vector<std::pair<double, double>> intervals;
};

/// Cone {(xi,tau) : tau = -b xi, b in B} in R^2; intervals sampled at 0.05.
Cone gamma_B(const LimitPointSet& B, double tolerance = kDefaultConeTolerance);

/// Affine map x -> J x + offset between R^{n1} and R^{n2}.
struct AffineMap {
    Eigen::MatrixXd jacobian;
    Eigen::VectorXd offset;

    int dim_in() const { return static_cast<int>(jacobian.cols()); }
    int dim_out() const { return static_cast<int>(jacobian.rows()); }
    Vec apply(const Vec& x) const;
    static AffineMap identity(int n);
    static AffineMap diagonal(int n);  // x -> (x, x)
};

/// Wave front set as finite (base point, fiber cone) entries.
struct WaveFrontSet {
    struct Entry {
        Vec base;
        Cone fiber;
    };
    std::vector<Entry> entries;

    const Cone* fiber_at(const Vec& x, double radius = kBaseMatchRadius) const;
    void add(const Vec& base, Cone fiber, double radius = kBaseMatchRadius);
};

/// N_f = {(f(x1), xi2) : tJ xi2 = 0} over the given domain samples; fibers are
/// the kernel directions of the transposed Jacobian (pivot tolerance 1e-10).
WaveFrontSet normal_set(const AffineMap& f, const std::vector<Vec>& domain_samples,
                        double tolerance = kDefaultConeTolerance);

/// f* Gamma = {(x1, tJ xi2) : (f(x1), xi2) in Gamma}; zero images dropped.
WaveFrontSet pullback_cone(const AffineMap& f, const WaveFrontSet& gamma,
                           double tolerance = kDefaultConeTolerance);

/// True iff at every shared base point the fiberwise sum avoids the zero
/// covector (sample-level test).
bool favorable_position(const WaveFrontSet& wf1, const WaveFrontSet& wf2);

/// Tensor bound of Lemma 5.1:
///   (WF1 x WF2) u ((supp1 x {0}) x WF2) u (WF1 x (supp2 x {0}))
/// over the product base, with mixed directions sampled on interior weights.
WaveFrontSet boxtimes(const WaveFrontSet& wf1, const WaveFrontSet& wf2,
                      const std::vector<Vec>& supp1, const std::vector<Vec>& supp2);

}  // namespace colwave
