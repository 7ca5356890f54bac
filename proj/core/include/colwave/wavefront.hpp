#pragma once

#include <string>
#include <vector>

#include "colwave/cones.hpp"
#include "colwave/geometry.hpp"
#include "colwave/mollify.hpp"
#include "colwave/spectral.hpp"

namespace colwave {

enum class Verdict { Regular, Irregular, Inconclusive };

std::string to_string(Verdict v);

enum class SamplerChoice { Auto, Grid, Projection };

struct EstimatorParams {
    int eps_k_min = 4;
    int eps_k_max = 12;
    int min_eps_rows = 4;

    std::vector<double> window_radii = {0.5, 0.25, 0.125};
    double plateau_fraction = 0.5;
    double box_margin = 1.1;

    int bins_s1 = 72;         // 5-degree bins on the circle
    int icosphere_level = 2;  // 320 face directions on the sphere

    double p_threshold = 5.0;
    double n_cap = 6.0;
    double residual_cap = 0.5;
    double delta = kDefaultConeTolerance;

    double lambda_min = 4.0;
    double lambda_max = 256.0;
    double lambda_ratio = 1.4142135623730951;

    int base_shape_1d = 4096;
    int base_shape_2d = 512;
    int shape_cap_1d = 65536;
    int shape_cap_2d = 2048;
    int pad_factor = 1;

    SamplerChoice sampler = SamplerChoice::Auto;

    int base_shape(int dim) const { return dim == 1 ? base_shape_1d : base_shape_2d; }
    int shape_cap(int dim) const { return dim == 1 ? shape_cap_1d : shape_cap_2d; }
};

/// Direction bin set: {-1,+1} in 1-D, uniform 5-degree bins on S^1,
/// icosahedral face directions on S^2.
std::vector<Vec> direction_bins(int dim, const EstimatorParams& params);

struct DirectionBin {
    Vec direction;
    DecayFit fit;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<EpsSamples> series;  // raw (eps, lambda, |FT|) rows behind the fit
};

/// Single-window estimate of the irregular-direction cone of (window * F).
struct WindowEstimate {
    CutoffWindow window;
    std::vector<double> eps_used;
    std::vector<DirectionBin> bins;
    std::vector<std::string> warnings;
    std::string sampler;  // "grid" or "projection"

    /// Conservative upper estimate of Sigma_g: irregular and inconclusive bins.
    Cone sigma_cone(double tolerance) const;
    /// Irregular bins only.
    Cone irregular_cone(double tolerance) const;
};

/// Per-base-point estimate aggregated over the window schedule; a bin is
/// regular as soon as one window certifies rapid decay, irregular when every
/// window that produced data says irregular.
struct PointEstimate {
    Vec base;
    std::vector<DirectionBin> bins;
    std::vector<WindowEstimate> window_details;
    std::vector<std::string> warnings;

    Cone fiber_cone(double tolerance) const;        // irregular bins
    Cone conservative_cone(double tolerance) const; // irregular + inconclusive
};

struct WaveFrontEstimate {
    std::vector<PointEstimate> points;
    EstimatorParams params;

    WaveFrontSet to_wavefront_set() const;
};

/// Decay estimate of window * F per direction bin over the usable eps ladder.
WindowEstimate sigma_g(const ScaledFamily& f, const CutoffWindow& window,
                       const EstimatorParams& params);

/// Intersection over the window schedule (radii descending) at base point x0.
/// Under-resolved radii are dropped with a warning.
PointEstimate sigma_g_at(const ScaledFamily& f, const Vec& x0,
                         const std::vector<double>& window_radii, const EstimatorParams& params);

/// Full estimate over a base grid.
WaveFrontEstimate wavefront(const ScaledFamily& f, const std::vector<Vec>& base_grid,
                            const EstimatorParams& params);

struct UniformOrderResult {
    double n_uniform = 0.0;  // max N_hat over bins inside gamma
    double min_p = 0.0;      // smallest fitted p over those bins
    int bins_in_gamma = 0;
};

/// Uniform order over a closed cone in the complement of the estimated
/// irregular set: max per-bin N_hat over bins of gamma.  Throws DomainError
/// if gamma touches the estimated Sigma_g cone.
UniformOrderResult uniform_order_check(const ScaledFamily& f, const CutoffWindow& window,
                                       const Cone& gamma, const EstimatorParams& params);

}  // namespace colwave
