#include "colwave/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <limits>

#include "colwave/errors.hpp"

namespace colwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kZeroFloor = 1e-250;
constexpr double kLogFloor = 1e-300;

double smooth_step(double u) {
    // C-infinity transition 1 -> 0 on [0, 1].
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    double a = std::exp(-1.0 / (1.0 - u));
    double b = std::exp(-1.0 / u);
    return a / (a + b);
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    LineFit f;
    if (std::abs(det) < 1e-30) {
        f.slope = 0.0;
        f.intercept = n > 0 ? sy / n : 0.0;
    } else {
        f.slope = (n * sxy - sx * sy) / det;
        f.intercept = (sy * sxx - sx * sxy) / det;
    }
    return f;
}

}  // namespace

double CutoffWindow::axis_profile(double distance) const {
    double d = std::abs(distance);
    if (d <= plateau_radius) return 1.0;
    if (d >= support_radius) return 0.0;
    return smooth_step((d - plateau_radius) / (support_radius - plateau_radius));
}

double CutoffWindow::operator()(const Vec& x) const {
    double w = 1.0;
    for (int i = 0; i < x.dim; ++i) w *= axis_profile(x[i] - center[i]);
    return w;
}

SampledField evaluate_on_grid(const ScaledFamily& f, double eps, const Vec& box_lo,
                              const Vec& box_hi, const std::array<int, 4>& shape) {
    const int dim = f.dim();
    if (box_lo.dim != dim || box_hi.dim != dim)
        throw DomainError("evaluate_on_grid: box dimension mismatch");
    if (eps < f.eps_floor()) throw DomainError("evaluate_on_grid: eps below family floor");

    SampledField out;
    out.dim = dim;
    double hmax = 0.0;
    for (int a = 0; a < dim; ++a) {
        if (shape[a] < 2) throw ConfigError("evaluate_on_grid: shape must be >= 2 per axis");
        out.lo[a] = box_lo[a];
        out.hi[a] = box_hi[a];
        out.shape[a] = shape[a];
        out.h[a] = (box_hi[a] - box_lo[a]) / shape[a];
        hmax = std::max(hmax, out.h[a]);
    }
    if (eps < 8.0 * hmax) {
        std::array<int, 4> required{};
        for (int a = 0; a < dim; ++a) {
            double need = (box_hi[a] - box_lo[a]) * 8.0 / eps;
            int n = 1;
            while (n < need) n *= 2;
            required[a] = n;
        }
        throw ResolutionError("evaluate_on_grid: eps < 8h; refine the grid", required, dim);
    }

    out.values.resize(out.size());
    std::array<int, 4> idx{};
    Vec x = Vec::zero(dim);
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        std::size_t rem = flat;
        for (int a = dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % shape[a]);
            rem /= shape[a];
        }
        for (int a = 0; a < dim; ++a) x[a] = out.node(a, idx[a]);
        std::complex<double> v = f(eps, x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("evaluate_on_grid: non-finite family value");
        out.values[flat] = v;
    }
    return out;
}

namespace {

void check_window_inside(const SampledField& field, const CutoffWindow& w) {
    for (int a = 0; a < field.dim; ++a) {
        if (w.center[a] - w.support_radius < field.lo[a] - 1e-12 ||
            w.center[a] + w.support_radius > field.hi[a] + 1e-12)
            throw DomainError("window support exceeds the field box");
    }
}

}  // namespace

SampledField apply_window(const SampledField& field, const CutoffWindow& w) {
    check_window_inside(field, w);
    SampledField out = field;
    std::array<int, 4> idx{};
    Vec x = Vec::zero(field.dim);
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        std::size_t rem = flat;
        for (int a = field.dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % field.shape[a]);
            rem /= field.shape[a];
        }
        for (int a = 0; a < field.dim; ++a) x[a] = field.node(a, idx[a]);
        out.values[flat] *= w(x);
    }
    return out;
}

SampledField windowed_ft(const SampledField& field, const CutoffWindow& w, int pad_factor) {
    if (field.frequency_domain) throw DomainError("windowed_ft: field already in frequency domain");
    if (pad_factor < 1) throw ConfigError("windowed_ft: pad_factor must be >= 1");
    SampledField windowed = apply_window(field, w);

    const int dim = field.dim;
    std::array<int, 4> pshape{};
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) {
        pshape[a] = field.shape[a] * pad_factor;
        total *= static_cast<std::size_t>(pshape[a]);
    }

    std::vector<std::complex<double>> buf(total, {0.0, 0.0});
    // copy into the zero-padded buffer
    {
        std::array<int, 4> idx{};
        for (std::size_t flat = 0; flat < windowed.values.size(); ++flat) {
            std::size_t rem = flat;
            for (int a = dim - 1; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % field.shape[a]);
                rem /= field.shape[a];
            }
            std::size_t pflat = 0;
            for (int a = 0; a < dim; ++a) pflat = pflat * pshape[a] + idx[a];
            buf[pflat] = windowed.values[flat];
        }
    }

    {
        int dims[4];
        for (int a = 0; a < dim; ++a) dims[a] = pshape[a];
        fftw_plan plan = fftw_plan_dft(dim, dims, reinterpret_cast<fftw_complex*>(buf.data()),
                                       reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                                       FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    SampledField out;
    out.dim = dim;
    out.frequency_domain = true;
    double cell = 1.0;
    for (int a = 0; a < dim; ++a) {
        double dxi = 2.0 * kPi / (pshape[a] * field.h[a]);
        out.shape[a] = pshape[a];
        out.h[a] = dxi;
        out.lo[a] = -dxi * (pshape[a] / 2);
        out.hi[a] = out.lo[a] + dxi * pshape[a];
        cell *= field.h[a];
    }
    out.values.resize(total);

    // fftshift + continuous normalization: F(xi_k) = prod(h) e^{-i<lo,xi_k>} D_k
    std::array<int, 4> idx{};
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int a = dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % pshape[a]);
            rem /= pshape[a];
        }
        double phase = 0.0;
        std::size_t src = 0;
        for (int a = 0; a < dim; ++a) {
            int fidx = idx[a] - pshape[a] / 2;  // signed frequency index
            double xi = fidx * out.h[a];
            phase -= field.lo[a] * xi;
            int m = fidx >= 0 ? fidx : fidx + pshape[a];
            src = src * pshape[a] + m;
        }
        out.values[flat] = buf[src] * cell * std::exp(std::complex<double>(0.0, phase));
    }
    return out;
}

DirectionalSamples directional_samples(const SampledField& ft, const Vec& dir,
                                       const std::vector<double>& lambda_ladder) {
    if (!ft.frequency_domain) throw DomainError("directional_samples: need a frequency field");
    Vec d = normalized(dir);

    double nyquist = std::numeric_limits<double>::max();
    for (int a = 0; a < ft.dim; ++a) nyquist = std::min(nyquist, -ft.lo[a]);
    const double guard = 0.8 * nyquist;

    DirectionalSamples out;
    for (double lam : lambda_ladder) {
        if (lam <= 0) continue;
        if (lam > guard) {
            out.truncated = true;
            continue;
        }
        // multilinear interpolation of |FT| at lam * d
        double weight[4][2];
        int base[4];
        bool ok = true;
        for (int a = 0; a < ft.dim; ++a) {
            double u = (lam * d[a] - ft.lo[a]) / ft.h[a];
            int i0 = static_cast<int>(std::floor(u));
            if (i0 < 0 || i0 + 1 >= ft.shape[a]) {
                ok = false;
                break;
            }
            base[a] = i0;
            weight[a][1] = u - i0;
            weight[a][0] = 1.0 - weight[a][1];
        }
        if (!ok) {
            out.truncated = true;
            continue;
        }
        double acc = 0.0;
        int corners = 1 << ft.dim;
        for (int c = 0; c < corners; ++c) {
            double wgt = 1.0;
            std::size_t flat = 0;
            for (int a = 0; a < ft.dim; ++a) {
                int bit = (c >> a) & 1;
                wgt *= weight[a][bit];
                flat = flat * ft.shape[a] + (base[a] + bit);
            }
            acc += wgt * std::abs(ft.values[flat]);
        }
        out.lambda.push_back(lam);
        out.magnitude.push_back(acc);
    }
    return out;
}

DirectionalSamples directional_samples_projection(const SampledField& spatial_field,
                                                  const CutoffWindow& w, const Vec& dir,
                                                  const std::vector<double>& lambda_ladder) {
    if (spatial_field.frequency_domain)
        throw DomainError("directional_samples_projection: need a spatial field");
    check_window_inside(spatial_field, w);
    Vec d = normalized(dir);
    const int dim = spatial_field.dim;

    double hmin = spatial_field.h[0];
    for (int a = 1; a < dim; ++a) hmin = std::min(hmin, spatial_field.h[a]);
    const double ht = hmin;

    // range of t = <x, d> over the box corners
    double tmin = 0, tmax = 0;
    for (int a = 0; a < dim; ++a) {
        double c0 = spatial_field.lo[a] * d[a];
        double c1 = spatial_field.hi[a] * d[a];
        tmin += std::min(c0, c1);
        tmax += std::max(c0, c1);
    }
    int nt = static_cast<int>(std::ceil((tmax - tmin) / ht)) + 2;
    std::vector<std::complex<double>> profile(nt, {0.0, 0.0});

    double cell = 1.0;
    for (int a = 0; a < dim; ++a) cell *= spatial_field.h[a];

    std::array<int, 4> idx{};
    Vec x = Vec::zero(dim);
    for (std::size_t flat = 0; flat < spatial_field.values.size(); ++flat) {
        std::size_t rem = flat;
        for (int a = dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % spatial_field.shape[a]);
            rem /= spatial_field.shape[a];
        }
        double t = 0.0;
        for (int a = 0; a < dim; ++a) {
            x[a] = spatial_field.node(a, idx[a]);
            t += x[a] * d[a];
        }
        double wgt = w(x);
        if (wgt == 0.0) continue;
        std::complex<double> v = spatial_field.values[flat] * (wgt * cell);
        double u = (t - tmin) / ht;
        int b = static_cast<int>(std::floor(u));
        double frac = u - b;
        profile[b] += v * (1.0 - frac);
        profile[b + 1] += v * frac;
    }

    const double guard = 0.8 * kPi / ht;
    DirectionalSamples out;
    for (double lam : lambda_ladder) {
        if (lam <= 0) continue;
        if (lam > guard) {
            out.truncated = true;
            continue;
        }
        std::complex<double> acc{0.0, 0.0};
        // direct transform of the projected profile at frequency lam
        std::complex<double> rot = std::exp(std::complex<double>(0.0, -lam * ht));
        std::complex<double> ph = std::exp(std::complex<double>(0.0, -lam * tmin));
        for (int b = 0; b < nt; ++b) {
            acc += profile[b] * ph;
            ph *= rot;
        }
        // deconvolve the linear splat kernel
        double arg = 0.5 * lam * ht;
        double s = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
        out.lambda.push_back(lam);
        out.magnitude.push_back(std::abs(acc) / (s * s));
    }
    return out;
}

std::vector<double> lambda_ladder(double lambda_min, double lambda_max, double ratio) {
    if (lambda_min <= 0 || lambda_max < lambda_min || ratio <= 1.0)
        throw ConfigError("lambda_ladder: need 0 < min <= max and ratio > 1");
    std::vector<double> out;
    for (double lam = lambda_min; lam <= lambda_max * (1.0 + 1e-9); lam *= ratio)
        out.push_back(lam);
    return out;
}

DecayFit fit_decay(const std::vector<EpsSamples>& rows, const Vec& direction) {
    DecayFit fit;
    fit.direction = direction;

    struct RowFit {
        double eps;
        double p;
        double intercept;
        std::vector<double> res;
    };
    std::vector<RowFit> used;
    double lam_lo = std::numeric_limits<double>::max(), lam_hi = 0.0;

    for (const auto& row : rows) {
        const auto& s = row.samples;
        if (s.lambda.size() < 2) continue;
        double mx = 0.0;
        for (double m : s.magnitude) mx = std::max(mx, m);
        if (mx < kZeroFloor) continue;  // identically-vanishing window: drop row

        std::size_t start = s.lambda.size() / 2;
        if (s.lambda.size() - start < 2) start = s.lambda.size() - 2;
        std::vector<double> x, y;
        for (std::size_t i = start; i < s.lambda.size(); ++i) {
            x.push_back(std::log1p(s.lambda[i]));
            y.push_back(std::log(std::max(s.magnitude[i], kLogFloor)));
        }
        LineFit lf = least_squares(x, y);
        RowFit rf;
        rf.eps = row.eps;
        rf.p = -lf.slope;
        rf.intercept = lf.intercept;
        for (std::size_t i = 0; i < x.size(); ++i)
            rf.res.push_back(y[i] - (lf.intercept + lf.slope * x[i]));
        used.push_back(std::move(rf));
        lam_lo = std::min(lam_lo, s.lambda[start]);
        lam_hi = std::max(lam_hi, s.lambda.back());
    }

    if (used.empty()) {
        fit.negligible = true;
        fit.p_hat = kNegligibleExponent;
        return fit;
    }

    fit.rows_used = static_cast<int>(used.size());
    fit.lambda_min = lam_lo;
    fit.lambda_max = lam_hi;
    fit.eps_min = std::numeric_limits<double>::max();
    fit.eps_max = 0.0;

    double pmin = std::numeric_limits<double>::max();
    for (const auto& rf : used) {
        pmin = std::min(pmin, rf.p);
        fit.eps_min = std::min(fit.eps_min, rf.eps);
        fit.eps_max = std::max(fit.eps_max, rf.eps);
    }
    fit.p_hat = pmin;

    if (used.size() >= 2) {
        std::vector<double> lx, ly;
        for (const auto& rf : used) {
            lx.push_back(std::log(1.0 / rf.eps));
            ly.push_back(rf.intercept);
        }
        fit.n_hat = least_squares(lx, ly).slope;
    } else {
        fit.n_hat = 0.0;
    }

    double cmax = -std::numeric_limits<double>::max();
    double ss = 0.0;
    std::size_t cnt = 0;
    for (const auto& rf : used) {
        cmax = std::max(cmax, rf.intercept - fit.n_hat * std::log(1.0 / rf.eps));
        for (double r : rf.res) {
            ss += r * r;
            ++cnt;
        }
    }
    fit.c = std::exp(cmax);
    fit.residual = cnt ? std::sqrt(ss / cnt) : 0.0;
    fit.residual_flag = fit.residual > 1.0;
    return fit;
}

void save_field(const SampledField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("save_field: cannot open " + path);
    os.write("CWF1", 4);
    auto w32 = [&](std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); };
    auto w64 = [&](double v) { os.write(reinterpret_cast<const char*>(&v), 8); };
    w32(static_cast<std::uint32_t>(f.dim));
    w32(f.frequency_domain ? 1u : 0u);
    for (int a = 0; a < f.dim; ++a) {
        w32(static_cast<std::uint32_t>(f.shape[a]));
        w64(f.lo[a]);
        w64(f.hi[a]);
    }
    for (const auto& v : f.values) {
        w64(v.real());
        w64(v.imag());
    }
    os.close();

    nlohmann::json side;
    side["format"] = "CWF1";
    side["dim"] = f.dim;
    side["frequency_domain"] = f.frequency_domain;
    for (int a = 0; a < f.dim; ++a) {
        side["shape"].push_back(f.shape[a]);
        side["lo"].push_back(f.lo[a]);
        side["hi"].push_back(f.hi[a]);
    }
    side["count"] = f.values.size();
    std::ofstream js(path + ".json");
    js << side.dump(2) << "\n";
}

SampledField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("load_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (std::memcmp(magic, "CWF1", 4) != 0) throw ConfigError("load_field: bad magic");
    auto r32 = [&]() {
        std::uint32_t v;
        is.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto r64 = [&]() {
        double v;
        is.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    SampledField f;
    f.dim = static_cast<int>(r32());
    if (f.dim < 1 || f.dim > 4) throw ConfigError("load_field: bad dimension");
    f.frequency_domain = r32() != 0;
    for (int a = 0; a < f.dim; ++a) {
        f.shape[a] = static_cast<int>(r32());
        f.lo[a] = r64();
        f.hi[a] = r64();
        f.h[a] = (f.hi[a] - f.lo[a]) / f.shape[a];
    }
    f.values.resize(f.size());
    for (auto& v : f.values) {
        double re = r64(), im = r64();
        v = {re, im};
    }
    if (!is) throw ConfigError("load_field: truncated payload");
    return f;
}

}  // namespace colwave
