#pragma once

#include <functional>
#include <string>
#include <vector>

#include "colwave/cones.hpp"
#include "colwave/geometry.hpp"
#include "colwave/mollify.hpp"
#include "colwave/wavefront.hpp"

namespace colwave {

/// Pointwise product at shared eps.
ScaledFamily product(const ScaledFamily& f, const ScaledFamily& g);

/// Tensor product on the product space.
ScaledFamily tensor(const ScaledFamily& f, const ScaledFamily& g);

/// Possibly eps-dependent affine map for pullbacks.
struct FamilyMap {
    int dim_in = 0;
    int dim_out = 0;
    std::function<Vec(double, const Vec&)> apply;  // (eps, x) -> f_eps(x)

    static FamilyMap from_affine(const AffineMap& f);
};

/// Composition F(eps, f_eps(x)).
ScaledFamily pullback(const ScaledFamily& f, const FamilyMap& map);

/// Dense log-spaced ladder for limit-point analysis.
std::vector<double> dense_eps_ladder(double eps_max = 1.0 / 16, double eps_min = 1.0 / 1048576,
                                     int count = 257);

/// Limit points of a bounded net: 1-D clustering of the sampled tail, gaps
/// below 0.05 merged; clusters wider than 0.05 reported as intervals.
LimitPointSet limit_points(const GeneralizedConstant& a, const std::vector<double>& ladder);

/// First-order operator d_t + a d_x on (x,t) with symbol i(tau + a_eps xi).
struct FirstOrderOperator {
    GeneralizedConstant a;

    std::complex<double> symbol(double eps, const Vec& xitau) const {
        return {0.0, xitau[1] + a(eps) * xitau[0]};
    }
};

struct CharSetResult {
    Cone characteristic;            // bins failing the uniform lower bound
    std::vector<double> bin_infima; // inf over the ladder of |symbol|/|(xi,tau)| per bin
    std::vector<Vec> bin_dirs;
    double floor = 0.0;
    std::string caveat;  // fixed-mollifier-slice caveat, echoed into reports
};

/// Characteristic directions: bins where the eps-uniform lower bound
/// |tau + a_eps xi| >= C |(xi,tau)| fails along the ladder (r_cap = 0 model:
/// the infimum must stay above `floor`).  Equals gamma_B(limit_points(a)) up
/// to bin tolerance.
CharSetResult char_set(const FirstOrderOperator& p, const std::vector<double>& ladder,
                       int bins = 72, double floor = 0.05233595624294383 /* sin 3 deg */);

/// Propagation bound WF_g(U) within Char P union WF_g(P U): the characteristic
/// cone at every base point of interest, union the right-hand side fibers.
WaveFrontSet propagation_bound(const FirstOrderOperator& p, const WaveFrontSet& wf_rhs,
                               const std::vector<Vec>& base_points,
                               const std::vector<double>& ladder);

/// True iff the grid max of |F(eps,.)| over the closed ball is exactly zero
/// for the four smallest ladder eps (the families here have compact support,
/// so off-support values are exact zeros).
bool vanishes_on_ball(const ScaledFamily& f, const Vec& center, double radius,
                      const std::vector<double>& ladder, int grid_per_axis = 33);

struct ProductBound {
    WaveFrontSet bound;
    bool applicable = true;  // false when the factors are not in favorable position
};

/// Fiberwise product bound: closure_of_sum of shared fibers union both
/// fibers; the present fiber at unshared points.  Computable but flagged
/// not-applicable when favorable position fails.
ProductBound product_wf_bound(const WaveFrontSet& wf1, const WaveFrontSet& wf2);

struct InclusionReport {
    bool holds = false;
    bool applicable = true;
    double tolerance = kDefaultConeTolerance;
    struct Witness {
        Vec base;
        Vec direction;
        DecayFit fit;
    };
    std::vector<Witness> witnesses;
};

/// Every irregular bin of the estimate must lie within the cone tolerance of
/// the bound fiber at the delta-matched base point; violations are listed
/// with their fits.
InclusionReport check_inclusion(const WaveFrontEstimate& estimated, const WaveFrontSet& bound,
                                double base_radius = kBaseMatchRadius);

}  // namespace colwave
