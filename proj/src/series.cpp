#include "saftkit/series.hpp"

#include <algorithm>
#include <cmath>

namespace saftkit {

SparseSignal::SparseSignal(std::vector<Spike> s, double window) : spikes(std::move(s)), T(window) {
    if (T <= 0.0) throw ConfigInvalid("SparseSignal: window length must be positive");
    if (spikes.empty()) throw ConfigInvalid("SparseSignal: need at least one spike");
    for (std::size_t k = 0; k < spikes.size(); ++k) {
        if (spikes[k].t < 0.0 || spikes[k].t >= T)
            throw ConfigInvalid("SparseSignal: spike location outside [0, T)");
        if (std::abs(spikes[k].c) == 0.0)
            throw ConfigInvalid("SparseSignal: zero amplitude spike");
        if (k > 0 && !(spikes[k].t > spikes[k - 1].t))
            throw ConfigInvalid("SparseSignal: locations must be strictly increasing");
    }
}

namespace {

// The analysis grid carries samples at i*dt, i = 0..N-1, representing the
// window [0, T) with T = N*dt. The rectangle rule is the periodic trapezoid
// rule here and is spectrally accurate for integrands smooth on the circle.
double window_of(const GridSignal& f) {
    if (f.samples.size() < 2) throw GridMismatch("series grid too short");
    if (std::abs(f.t0) > 1e-9 * f.dt * static_cast<double>(f.size()))
        throw GridMismatch("series grid must start at t = 0");
    return f.dt * static_cast<double>(f.size());
}

}  // namespace

std::size_t safs_recommended_points(const SaftParams& params, double T, int n_max) {
    params.require_transform_path("safs_recommended_points");
    const double omega0 = 2.0 * kPi * params.b / T;
    // Fastest instantaneous frequency of exp(j E(t, n w0)) over [0, T].
    const double peak =
        (std::abs(params.a) * T + std::abs(params.p) +
         std::abs(static_cast<double>(n_max) * omega0)) /
        std::abs(params.b);
    const double cycles = peak * T / (2.0 * kPi);
    const auto pts = static_cast<std::size_t>(std::ceil(64.0 * std::max(1.0, cycles)));
    return std::max<std::size_t>(pts, 512);
}

SeriesCoeffs safs_analyze(const GridSignal& f, const SaftParams& params,
                          int n_min, int n_max) {
    params.require_transform_path("safs_analyze");
    if (n_max < n_min) throw ConfigInvalid("safs_analyze: empty harmonic range");
    const double T = window_of(f);
    const double omega0 = 2.0 * kPi * params.b / T;

    SeriesCoeffs out;
    out.params = params;
    out.T = T;
    out.n_min = n_min;
    out.n_max = n_max;
    out.omega0 = omega0;
    out.values.resize(static_cast<std::size_t>(n_max - n_min + 1));

    const Complex constant = kernel_constant(params);
    for (int n = n_min; n <= n_max; ++n) {
        const double w = omega0 * static_cast<double>(n);
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < f.size(); ++i) {
            acc += f.samples[i] * std::exp(kJ * kernel_exponent(params, f.t(i), w));
        }
        out.values[static_cast<std::size_t>(n - n_min)] = constant * acc * f.dt;
    }
    return out;
}

GridSignal safs_synthesize(const SeriesCoeffs& coeffs, const std::vector<double>& ts) {
    coeffs.params.require_transform_path("safs_synthesize");
    if (ts.size() < 2) throw EmptyGrid("safs_synthesize: need at least two outputs");
    // Gram diagonal; dividing by it makes analyze o synthesize the identity.
    const double w0 = std::norm(kernel_constant(coeffs.params)) * coeffs.T;

    std::vector<Complex> values(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        Complex acc{0.0, 0.0};
        for (int n = coeffs.n_min; n <= coeffs.n_max; ++n) {
            const double w = coeffs.omega0 * static_cast<double>(n);
            acc += coeffs.at(n) * std::conj(inverse_kernel_eval(coeffs.params, w, ts[i]));
        }
        values[i] = acc / w0;
    }
    return GridSignal(ts.front(), ts[1] - ts.front(), std::move(values));
}

Complex safs_gram(const SaftParams& params, double T, int n, int k,
                  double omega0, std::size_t min_points) {
    params.require_transform_path("safs_gram");
    if (omega0 == 0.0) omega0 = 2.0 * kPi * params.b / T;
    const int n_abs = std::max(std::abs(n), std::abs(k));
    std::size_t pts = std::max(min_points, safs_recommended_points(params, T, n_abs));

    const double wn = omega0 * static_cast<double>(n);
    const double wk = omega0 * static_cast<double>(k);
    // Closed trapezoid over [0, T]: reduces to the exact periodic rule at the
    // matched fundamental and keeps detuned integrands second-order accurate.
    const double dt = T / static_cast<double>(pts);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i <= pts; ++i) {
        const double t = dt * static_cast<double>(i);
        acc += kernel_eval(params, t, wn) * inverse_kernel_eval(params, wk, t) *
               trapezoid_weight(i, pts + 1, dt);
    }
    return acc;
}

FourierCoeffs sparse_safs(const SparseSignal& s, const SaftParams& params, int fc) {
    params.require_transform_path("sparse_safs");
    if (fc < 0) throw ConfigInvalid("sparse_safs: fc must be nonnegative");
    FourierCoeffs out(fc, s.T, params.b);
    for (int m = -fc; m <= fc; ++m) {
        Complex acc{0.0, 0.0};
        for (const auto& spike : s.spikes) {
            const double phase = q_poly(params, spike.t) -
                                 2.0 * kPi * static_cast<double>(m) * spike.t / s.T;
            acc += spike.c * std::exp(kJ * phase);
        }
        out.at(m) = acc;
    }
    return out;
}

GridSignal band_synthesize(const FourierCoeffs& coeffs, const SaftParams& params,
                           const std::vector<double>& ts) {
    params.require_transform_path("band_synthesize");
    if (ts.size() < 2) throw EmptyGrid("band_synthesize: need at least two outputs");
    std::vector<Complex> values(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        Complex acc{0.0, 0.0};
        for (int m = -coeffs.fc; m <= coeffs.fc; ++m) {
            acc += coeffs.at(m) *
                   std::exp(kJ * 2.0 * kPi * static_cast<double>(m) * ts[i] / coeffs.T);
        }
        values[i] = acc * std::exp(-kJ * q_poly(params, ts[i]));
    }
    return GridSignal(ts.front(), ts[1] - ts.front(), std::move(values));
}

GridSignal sparse_synthesize_band(const SparseSignal& s, const SaftParams& params,
                                  int fc, const std::vector<double>& ts) {
    return band_synthesize(sparse_safs(s, params, fc), params, ts);
}

}  // namespace saftkit
