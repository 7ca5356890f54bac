#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "colwave/geometry.hpp"
#include "colwave/mollify.hpp"

namespace colwave {

/// Complex field sampled on a uniform grid over an axis-aligned box.
/// Spatial convention: node i is lo + i*h with h = (hi-lo)/shape (endpoint
/// exclusive).  Frequency-domain fields use the same structure with lo/hi
/// holding the frequency bounds and h the frequency step.
struct SampledField {
    int dim = 0;
    std::array<double, 4> lo{};
    std::array<double, 4> hi{};
    std::array<int, 4> shape{};
    std::array<double, 4> h{};
    std::vector<std::complex<double>> values;  // row-major
    bool frequency_domain = false;

    std::size_t size() const {
        std::size_t n = 1;
        for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(shape[i]);
        return n;
    }
    double node(int axis, int index) const { return lo[axis] + h[axis] * index; }
};

/// Tensor-product smooth cutoff: identically 1 on the sup-ball of radius
/// plateau_radius around the center, 0 outside support_radius, with a
/// C-infinity transition per axis.
struct CutoffWindow {
    Vec center;
    double plateau_radius = 0.25;
    double support_radius = 0.5;

    double operator()(const Vec& x) const;
    double axis_profile(double distance) const;
};

/// Pointwise evaluation of a family at fixed eps on a grid.  Guard: the grid
/// must resolve the regularization scale, eps >= 8 * max(h); violations throw
/// ResolutionError carrying the shape that would satisfy the guard.
SampledField evaluate_on_grid(const ScaledFamily& f, double eps, const Vec& box_lo,
                              const Vec& box_hi, const std::array<int, 4>& shape);

/// Apply the window pointwise (support must lie inside the field box).
SampledField apply_window(const SampledField& field, const CutoffWindow& w);

/// Discrete Fourier transform of window * field, normalized to approximate
/// the continuous integral with convention e^{-i<x,xi>} (no 2 pi forward
/// factor).  pad_factor zero-pads each axis to refine the frequency grid.
SampledField windowed_ft(const SampledField& field, const CutoffWindow& w, int pad_factor = 1);

struct DirectionalSamples {
    std::vector<double> lambda;
    std::vector<double> magnitude;
    bool truncated = false;  // ladder clipped at the Nyquist guard
};

/// |FT| along lambda * dir by multilinear interpolation on the frequency
/// grid.  Ladder entries beyond 0.8 * Nyquist are dropped and flagged.
DirectionalSamples directional_samples(const SampledField& ft, const Vec& dir,
                                       const std::vector<double>& lambda_ladder);

/// |FT(lambda dir)| computed from the spatial field by projecting onto the
/// direction (projection-slice) and a direct 1-D transform of the profile.
/// Exact in lambda placement, so usable at frequencies far below the FFT
/// grid's resolution; agrees with the grid path where both are valid.
DirectionalSamples directional_samples_projection(const SampledField& spatial_field,
                                                  const CutoffWindow& w, const Vec& dir,
                                                  const std::vector<double>& lambda_ladder);

/// Geometric ladder lambda_min * ratio^j clipped to lambda_max.
std::vector<double> lambda_ladder(double lambda_min, double lambda_max, double ratio);

/// Fitted directional decay: |FT| ~ c * eps^{-N} (1+lambda)^{-p}.
struct DecayFit {
    Vec direction;
    double p_hat = 0.0;
    double n_hat = 0.0;
    double c = 0.0;
    double residual = 0.0;
    double lambda_min = 0.0, lambda_max = 0.0;
    double eps_min = 0.0, eps_max = 0.0;
    bool negligible = false;      // all samples below the zero floor
    bool residual_flag = false;   // pathological / non-monotone samples
    int rows_used = 0;
};

struct EpsSamples {
    double eps;
    DirectionalSamples samples;
};

/// Sentinel exponent reported for identically-vanishing windowed fields.
inline constexpr double kNegligibleExponent = 999.0;

/// Two-stage fit per the eps-uniform decay model: per-eps slope of log|FT|
/// against log(1+lambda) over the upper half of the ladder gives p_eps and
/// intercept I_eps; p_hat = min over eps of p_eps, N_hat = slope of I_eps
/// against log(1/eps), c = exp of the largest adjusted intercept.  Rows whose
/// samples all sit below 1e-250 are dropped (exactly-zero windowed fields).
/// Never throws on pathological data; sets residual_flag instead.
DecayFit fit_decay(const std::vector<EpsSamples>& rows, const Vec& direction);

/// Flat binary field layout (header: dim, shape, box; payload re/im 64-bit
/// little-endian) with a JSON sidecar describing the same metadata.
void save_field(const SampledField& f, const std::string& path);
SampledField load_field(const std::string& path);

}  // namespace colwave
