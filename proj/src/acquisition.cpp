#include "saftkit/acquisition.hpp"

#include <algorithm>
#include <cmath>

namespace saftkit {

double normalized_sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

namespace {

Complex chirp(const SaftParams& s, double t) {
    return std::exp(kJ * s.a * t * t / (2.0 * s.b));
}

// splitmix64: deterministic across platforms, no library distribution involved.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() {  // (0, 1]
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }
};

void add_noise(std::vector<Complex>& values, const NoiseSpec& noise) {
    if (!noise.enabled || noise.sigma <= 0.0) return;
    const auto extra = seeded_complex_noise(noise.seed, values.size(), noise.sigma);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += extra[i];
}

}  // namespace

std::vector<Complex> seeded_complex_noise(std::uint64_t seed, std::size_t n, double sigma) {
    SplitMix64 rng{seed ^ 0x5af7c3d900000000ull};
    std::vector<Complex> out(n);
    for (auto& v : out) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double r = sigma * std::sqrt(-std::log(u1));
        v = Complex(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
    }
    return out;
}

Complex phi_bl_eval(const SaftParams& s, double delta, double t) {
    s.require_transform_path("phi_bl_eval");
    if (delta <= 0.0) throw ConfigInvalid("phi_bl_eval: delta must be positive");
    return 1.0 / (std::sqrt(delta) * kernel_constant(s)) * std::conj(chirp(s, t)) *
           std::exp(-kJ * s.p * t / s.b) * normalized_sinc(-t / delta);
}

Complex basis_phi_n(const SaftParams& s, double delta, int n, double t) {
    s.require_transform_path("basis_phi_n");
    const double tn = static_cast<double>(n) * delta;
    return std::exp(-kJ * (s.p / s.b) * (t - tn)) / std::sqrt(delta) *
           std::conj(chirp(s, t)) * chirp(s, tn) * normalized_sinc((t - tn) / delta);
}

GridSignal shannon_reconstruct(const SampleSet& samples, const SaftParams& s,
                               const std::vector<double>& ts, double omega_m,
                               ShannonDiagnostics* diag) {
    s.require_transform_path("shannon_reconstruct");
    if (ts.size() < 2) throw EmptyGrid("shannon_reconstruct: need at least two outputs");
    if (omega_m > 0.0 && samples.delta > kPi * std::abs(s.b) / omega_m)
        throw RateViolation("shannon_reconstruct: Delta exceeds pi b / omega_m");
    if (diag && !samples.values.empty()) {
        double peak = 0.0;
        for (const auto& v : samples.values) peak = std::max(peak, std::abs(v));
        const double edges =
            std::max(std::abs(samples.values.front()), std::abs(samples.values.back()));
        diag->edge_sample_ratio = peak > 0.0 ? edges / peak : 0.0;
        diag->truncation_warning = diag->edge_sample_ratio > 1e-6;
    }

    std::vector<Complex> values(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        Complex acc{0.0, 0.0};
        for (std::size_t n = 0; n < samples.size(); ++n) {
            const double tn = static_cast<double>(n) * samples.delta;
            acc += chirp(s, tn) * samples.values[n] *
                   std::exp(-kJ * s.p * (t - tn) / s.b) *
                   normalized_sinc((t - tn) / samples.delta);
        }
        values[i] = std::conj(chirp(s, t)) * acc;
    }
    return GridSignal(ts.front(), ts[1] - ts.front(), std::move(values));
}

SampleSet simulate_bl_measurements(const SparseSignal& s, const SaftParams& params,
                                   const KernelSpec& kernel, double delta,
                                   std::size_t n_samples, const NoiseSpec& noise) {
    params.require_transform_path("simulate_bl_measurements");
    if (n_samples == 0) throw ConfigInvalid("simulate_bl_measurements: N must be >= 1");

    std::vector<Complex> values(n_samples);
    if (std::holds_alternative<SincKernel>(kernel)) {
        const int band = static_cast<int>(std::floor(s.T / (2.0 * delta)));
        const FourierCoeffs h = sparse_safs(s, params, band);
        const double scale = std::sqrt(delta);
        for (std::size_t n = 0; n < n_samples; ++n) {
            const double t = static_cast<double>(n) * delta;
            Complex acc{0.0, 0.0};
            for (int m = -band; m <= band; ++m)
                acc += h.at(m) * std::exp(kJ * 2.0 * kPi * static_cast<double>(m) * t / s.T);
            values[n] = scale * std::exp(-kJ * q_poly(params, t)) * acc;
        }
    } else if (const auto* arb = std::get_if<ArbitraryBandlimitedKernel>(&kernel)) {
        if (!arb->psi_hat) throw ConfigInvalid("ArbitraryBandlimitedKernel: missing psi_hat");
        // Harmonic m sees the spectrum at u_m = 2 pi m Delta / T; the sum runs
        // until the spectrum has decayed below the truncation level.
        const double peak = std::abs(arb->psi_hat(0.0));
        if (peak <= 0.0) throw VanishingSpectrum("psi_hat vanishes at 0");
        const int inband = static_cast<int>(std::floor(s.T / (2.0 * delta)));
        const int hard_cap = std::max(8 * inband + 8, 64);
        int band = inband;
        for (int m = inband; m <= hard_cap; ++m) {
            band = m;
            if (std::abs(arb->psi_hat(2.0 * kPi * m * delta / s.T)) < arb->truncation * peak)
                break;
        }
        std::vector<Complex> gains(static_cast<std::size_t>(2 * band + 1));
        for (int m = -band; m <= band; ++m) {
            const Complex g = arb->psi_hat(2.0 * kPi * static_cast<double>(m) * delta / s.T);
            if (std::abs(m) <= inband && std::abs(g) < 1e-12 * peak)
                throw VanishingSpectrum("psi_hat vanishes at in-band harmonic m = " +
                                        std::to_string(m));
            gains[static_cast<std::size_t>(m + band)] = g;
        }
        const FourierCoeffs h = sparse_safs(s, params, band);
        const double scale = 1.0 / std::sqrt(delta);
        for (std::size_t n = 0; n < n_samples; ++n) {
            const double t = static_cast<double>(n) * delta;
            Complex acc{0.0, 0.0};
            for (int m = -band; m <= band; ++m)
                acc += h.at(m) * gains[static_cast<std::size_t>(m + band)] *
                       std::exp(kJ * 2.0 * kPi * static_cast<double>(m) * t / s.T);
            values[n] = scale * std::exp(-kJ * q_poly(params, t)) * acc;
        }
    } else {
        throw ConfigInvalid(
            "simulate_bl_measurements handles bandlimited kernels; use "
            "simulate_tl_measurements for time-limited ones");
    }
    add_noise(values, noise);
    return SampleSet(delta, std::move(values));
}

Complex TimeLimitedEvaluator::operator()(double t) const {
    Complex acc{0.0, 0.0};
    for (int m = -weighted.fc; m <= weighted.fc; ++m)
        acc += weighted.at(m) *
               std::exp(kJ * 2.0 * kPi * static_cast<double>(m) * t / weighted.T);
    return kernel_constant(params) * std::exp(-kJ * q_poly(params, t)) * acc;
}

SampleSet TimeLimitedEvaluator::sample(double delta, std::size_t n_samples,
                                       const NoiseSpec& noise) const {
    std::vector<Complex> values(n_samples);
    for (std::size_t n = 0; n < n_samples; ++n)
        values[n] = (*this)(static_cast<double>(n) * delta);
    add_noise(values, noise);
    return SampleSet(delta, std::move(values));
}

TimeLimitedEvaluator simulate_tl_measurements(const SparseSignal& s,
                                              const SaftParams& params,
                                              const TimeLimitedKernel& kernel) {
    params.require_transform_path("simulate_tl_measurements");
    if (std::abs(kernel.T - s.T) > 1e-9 * s.T)
        throw GridMismatch("simulate_tl_measurements: kernel and signal windows differ");
    const int band = kernel.order();
    const double omega0 = 2.0 * kPi * params.b / s.T;
    const FourierCoeffs h = sparse_safs(s, params, band);

    TimeLimitedEvaluator eval{params, FourierCoeffs(band, s.T, params.b)};
    for (int m = -band; m <= band; ++m)
        eval.weighted.at(m) =
            h.at(m) * kernel.at(m) * phi_factor(params, omega0 * static_cast<double>(m));
    return eval;
}

Complex time_limited_kernel_eval(const TimeLimitedKernel& kernel,
                                 const SaftParams& params, double t) {
    // Half-open support: with [0, T] the periodization would count the
    // boundary lattice twice.
    if (t < 0.0 || t >= kernel.T) return {0.0, 0.0};
    const int band = kernel.order();
    const double omega0 = 2.0 * kPi * params.b / kernel.T;
    Complex acc{0.0, 0.0};
    for (int m = -band; m <= band; ++m)
        acc += kernel.at(m) * phi_factor(params, omega0 * static_cast<double>(m)) *
               std::exp(kJ * 2.0 * kPi * static_cast<double>(m) * t / kernel.T);
    return std::exp(-kJ * q_poly(params, t)) * acc;
}

GaborMeasurements gabor_saft(const GridSignal& f, const GridSignal& window,
                             const SaftParams& params,
                             const std::vector<double>& taus,
                             const std::vector<double>& omegas) {
    params.require_transform_path("gabor_saft");
    if (f.samples.empty()) throw EmptyGrid("gabor_saft: empty signal grid");

    GaborMeasurements out;
    out.taus = taus;
    out.omegas = omegas;
    out.values.resize(taus.size() * omegas.size());
    const std::size_t n = f.size();
    for (std::size_t it = 0; it < taus.size(); ++it) {
        // Window samples reused across the frequency axis.
        std::vector<Complex> windowed(n);
        for (std::size_t i = 0; i < n; ++i)
            windowed[i] = f.samples[i] * window.interp(f.t(i) - taus[it]) *
                          trapezoid_weight(i, n, f.dt);
        for (std::size_t iw = 0; iw < omegas.size(); ++iw) {
            Complex acc{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                acc += windowed[i] * std::conj(kernel_eval(params, f.t(i), omegas[iw]));
            out.at(it, iw) = acc;
        }
    }
    return out;
}

GridSignal gabor_inverse(const GaborMeasurements& v, const GridSignal& window1,
                         const GridSignal& window2, const SaftParams& params,
                         const std::vector<double>& ts,
                         GaborInverseDiagnostics* diag) {
    params.require_transform_path("gabor_inverse");
    if (v.taus.size() < 2 || v.omegas.size() < 2)
        throw EmptyGrid("gabor_inverse: need a dense (tau, omega) plane");
    if (ts.size() < 2) throw EmptyGrid("gabor_inverse: need at least two outputs");

    // Pairing condition b <psi1, psi2> = 1.
    if (window1.size() != window2.size() ||
        std::abs(window1.dt - window2.dt) > 1e-12)
        throw GridMismatch("gabor_inverse: window grids differ");
    Complex pairing{0.0, 0.0};
    for (std::size_t i = 0; i < window1.size(); ++i)
        pairing += window1.samples[i] * std::conj(window2.samples[i]) *
                   trapezoid_weight(i, window1.size(), window1.dt);
    pairing *= params.b;
    if (std::abs(pairing - 1.0) > 1e-9)
        throw WindowPairingViolation("gabor_inverse: b <psi1, psi2> = " +
                                     std::to_string(std::abs(pairing)) + ", expected 1");

    if (diag) {
        double edge = 0.0, total = 0.0;
        for (std::size_t it = 0; it < v.taus.size(); ++it) {
            for (std::size_t iw = 0; iw < v.omegas.size(); ++iw) {
                const double e = std::norm(v.at(it, iw));
                total += e;
                if (iw == 0 || iw + 1 == v.omegas.size()) edge += e;
            }
        }
        diag->edge_energy_fraction = total > 0.0 ? edge / total : 0.0;
        diag->undersampled_plane = diag->edge_energy_fraction > 1e-6;
    }

    const double dtau = v.taus[1] - v.taus[0];
    const double dw = v.omegas[1] - v.omegas[0];
    const InverseParams inv = inverse_params(params);
    std::vector<Complex> values(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double t = ts[k];
        Complex acc{0.0, 0.0};
        for (std::size_t it = 0; it < v.taus.size(); ++it) {
            const Complex w2 = window2.interp(t - v.taus[it]);
            if (w2 == Complex{0.0, 0.0}) continue;
            Complex inner{0.0, 0.0};
            for (std::size_t iw = 0; iw < v.omegas.size(); ++iw) {
                const Complex basis = std::conj(
                    std::conj(inv.constant) * kernel_eval(inv.params, v.omegas[iw], t));
                inner += v.at(it, iw) * basis * trapezoid_weight(iw, v.omegas.size(), dw);
            }
            acc += w2 * inner * trapezoid_weight(it, v.taus.size(), dtau);
        }
        values[k] = params.b * acc;
    }
    return GridSignal(ts.front(), ts[1] - ts.front(), std::move(values));
}

Complex fourier_window_eval(const std::vector<Complex>& window_coeffs, double T,
                            double t) {
    const int order = (static_cast<int>(window_coeffs.size()) - 1) / 2;
    Complex acc{0.0, 0.0};
    for (int m = -order; m <= order; ++m)
        acc += window_coeffs[static_cast<std::size_t>(m + order)] *
               std::exp(kJ * 2.0 * kPi * static_cast<double>(m) * t / T);
    return acc;
}

GaborMeasurements simulate_gabor_measurements(const SparseSignal& s,
                                              const std::vector<Complex>& window_coeffs,
                                              const SaftParams& params, double delta,
                                              std::size_t n_samples, int fc,
                                              const NoiseSpec& noise) {
    params.require_transform_path("simulate_gabor_measurements");
    if (window_coeffs.empty() || window_coeffs.size() % 2 == 0)
        throw ConfigInvalid("window coefficients must have odd length (m = -M..M)");
    const double omega0 = 2.0 * kPi * params.b / s.T;
    const Complex constant = kernel_constant(params);

    GaborMeasurements out;
    out.taus.resize(n_samples);
    for (std::size_t n = 0; n < n_samples; ++n)
        out.taus[n] = static_cast<double>(n) * delta;
    out.omegas.resize(static_cast<std::size_t>(2 * fc + 1));
    for (int l = -fc; l <= fc; ++l)
        out.omegas[static_cast<std::size_t>(l + fc)] = omega0 * static_cast<double>(l);
    if (omega0 < 0.0) std::reverse(out.omegas.begin(), out.omegas.end());
    out.values.resize(out.taus.size() * out.omegas.size());

    for (std::size_t it = 0; it < out.taus.size(); ++it) {
        for (std::size_t iw = 0; iw < out.omegas.size(); ++iw) {
            const double omega = out.omegas[iw];
            Complex acc{0.0, 0.0};
            for (const auto& spike : s.spikes) {
                const Complex weight = spike.c * std::exp(kJ * q_poly(params, spike.t));
                acc += weight * fourier_window_eval(window_coeffs, s.T, spike.t - out.taus[it]) *
                       std::exp(-kJ * omega * spike.t / params.b);
            }
            out.at(it, iw) = constant * std::conj(phi_factor(params, omega)) * acc;
        }
    }
    add_noise(out.values, noise);
    return out;
}

DecayProfile decay_profile(const SeriesCoeffs& coeffs, double threshold) {
    if (coeffs.values.size() < 8)
        throw ConfigInvalid("decay_profile: need at least 8 coefficients");
    const int n_max = std::min(-coeffs.n_min, coeffs.n_max);
    if (n_max < 3) throw ConfigInvalid("decay_profile: need a symmetric harmonic range");

    DecayProfile out;
    out.envelope.resize(static_cast<std::size_t>(n_max + 1));
    double peak = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const double env = std::max(std::abs(coeffs.at(n)), std::abs(coeffs.at(-n)));
        out.envelope[static_cast<std::size_t>(n)] = env;
        peak = std::max(peak, env);
    }
    if (peak == 0.0) {
        out.cutoff = 0;
        return out;
    }
    // Smallest M with envelope[n] < threshold * peak for every n > M. If the
    // last computed harmonic still exceeds the level, no finite cutoff can be
    // certified from this range and cutoff stays -1.
    const double level = threshold * peak;
    int last_above = -1;
    for (int n = n_max; n >= 0; --n) {
        if (out.envelope[static_cast<std::size_t>(n)] >= level) {
            last_above = n;
            break;
        }
    }
    if (last_above == n_max) {
        out.cutoff = -1;
        out.tail_max = out.envelope.back();
        return out;
    }
    out.cutoff = std::max(last_above, 0);
    for (int n = out.cutoff + 1; n <= n_max; ++n)
        out.tail_max = std::max(out.tail_max, out.envelope[static_cast<std::size_t>(n)]);
    return out;
}

std::vector<Complex> measurement_gains(const KernelSpec& kernel, const SaftParams& params,
                                       double T, double delta, int fc) {
    params.require_transform_path("measurement_gains");
    std::vector<Complex> gains(static_cast<std::size_t>(2 * fc + 1));
    if (std::holds_alternative<SincKernel>(kernel)) {
        const int band = static_cast<int>(std::floor(T / (2.0 * delta)));
        if (fc > band)
            throw SingularGain("sinc kernel observes only |m| <= " + std::to_string(band));
        std::fill(gains.begin(), gains.end(), Complex{1.0, 0.0});
    } else if (const auto* arb = std::get_if<ArbitraryBandlimitedKernel>(&kernel)) {
        for (int m = -fc; m <= fc; ++m) {
            const Complex g = arb->psi_hat(2.0 * kPi * static_cast<double>(m) * delta / T);
            if (std::abs(g) < 1e-12)
                throw SingularGain("psi_hat vanishes at harmonic m = " + std::to_string(m));
            gains[static_cast<std::size_t>(m + fc)] = g / delta;
        }
    } else {
        const auto& tl = std::get<TimeLimitedKernel>(kernel);
        if (fc > tl.order())
            throw SingularGain("time-limited kernel observes only |m| <= " +
                               std::to_string(tl.order()));
        const double omega0 = 2.0 * kPi * params.b / T;
        const Complex constant = kernel_constant(params);
        for (int m = -fc; m <= fc; ++m) {
            const Complex g = constant * tl.at(m) *
                              phi_factor(params, omega0 * static_cast<double>(m)) /
                              std::sqrt(delta);
            if (std::abs(g) < 1e-12)
                throw SingularGain("time-limited gain vanishes at m = " + std::to_string(m));
            gains[static_cast<std::size_t>(m + fc)] = g;
        }
    }
    return gains;
}

}  // namespace saftkit
