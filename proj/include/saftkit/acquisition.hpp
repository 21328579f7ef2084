// acquisition.hpp - sampling kernels, measurement simulation and the windowed
// transform with its inversion.
//
// Measurement model: chirp-convolve the spike train (periodically extended
// over its window) against a kernel, then sample uniformly. For each kernel
// family there is a closed-form simulator; the test suite certifies each one
// against explicit quadrature of the convolution.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "saftkit/params.hpp"
#include "saftkit/series.hpp"
#include "saftkit/types.hpp"

namespace saftkit {

/// Uniform measurements y(n Delta), n = 0..N-1.
struct SampleSet {
    double delta = 0.0;
    std::vector<Complex> values;

    SampleSet() = default;
    SampleSet(double step, std::vector<Complex> v) : delta(step), values(std::move(v)) {
        if (delta <= 0.0) throw ConfigInvalid("SampleSet: step must be positive");
    }
    std::size_t size() const { return values.size(); }
};

/// Windowed-transform values on a (tau, omega) grid.
struct GaborMeasurements {
    std::vector<double> taus;
    std::vector<double> omegas;
    std::vector<Complex> values;  // row-major: taus.size() x omegas.size()

    Complex& at(std::size_t i_tau, std::size_t i_omega) {
        return values[i_tau * omegas.size() + i_omega];
    }
    const Complex& at(std::size_t i_tau, std::size_t i_omega) const {
        return values[i_tau * omegas.size() + i_omega];
    }
};

// --- Kernel families -------------------------------------------------------

struct SincKernel {
    double delta = 1.0;
};

/// Arbitrary bandlimited kernel, described by a sampler of the unit-scale
/// continuous Fourier transform psi_hat; the physical kernel is the
/// Delta-dilated, L1-normalized pulse psi(t/Delta)/Delta behind the usual
/// chirp/modulation wrapper.
struct ArbitraryBandlimitedKernel {
    std::function<Complex(double)> psi_hat;
    double delta = 1.0;
    double truncation = 1e-16;  // drop harmonics where |psi_hat| falls below this x max
};

/// Smooth time-limited kernel given by its series coefficients on [0, T]:
/// psi(t) = sum_{|m|<=M} coeffs[m] e^{-jQ(t)} Phi(m w0) e^{j w0 m t / b}.
struct TimeLimitedKernel {
    std::vector<Complex> coeffs;  // index m = -M .. M
    double T = 1.0;

    int order() const { return (static_cast<int>(coeffs.size()) - 1) / 2; }
    const Complex& at(int m) const {
        return coeffs.at(static_cast<std::size_t>(m + order()));
    }
};

using KernelSpec = std::variant<SincKernel, ArbitraryBandlimitedKernel, TimeLimitedKernel>;

/// Optional additive complex Gaussian noise on simulated measurements.
/// Disabled by default; the generator is seeded and self-contained.
struct NoiseSpec {
    bool enabled = false;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

// --- Bandlimited subspace ---------------------------------------------------

/// sinc(x) = sin(pi x)/(pi x), sinc(0) = 1; zeros on the integers.
double normalized_sinc(double x);

/// Low-pass projection kernel: (1/(sqrt(Delta) K)) m*(t) e^{-j p t / b} sinc(-t/Delta).
Complex phi_bl_eval(const SaftParams& params, double delta, double t);

/// Orthonormal basis member phi_n of the bandlimited subspace.
Complex basis_phi_n(const SaftParams& params, double delta, int n, double t);

struct ShannonDiagnostics {
    double edge_sample_ratio = 0.0;  // max |end sample| / max |sample|
    bool truncation_warning = false; // the series was visibly cut short
};

/// Interpolation formula for signals bandlimited in the transform domain.
/// Samples are raw values f(n Delta). If omega_m > 0 is declared, the rate
/// condition Delta <= pi b / omega_m is enforced. The sum runs over the
/// available samples only; `diag` reports when that truncation is visible.
GridSignal shannon_reconstruct(const SampleSet& samples, const SaftParams& params,
                               const std::vector<double>& ts, double omega_m = 0.0,
                               ShannonDiagnostics* diag = nullptr);

// --- Measurement simulators -------------------------------------------------

/// Closed-form low-pass measurements of a spike train for the two bandlimited
/// kernel families (Sinc / ArbitraryBandlimited).
SampleSet simulate_bl_measurements(const SparseSignal& s, const SaftParams& params,
                                   const KernelSpec& kernel, double delta,
                                   std::size_t n_samples,
                                   const NoiseSpec& noise = {});

/// Closed-form measurement field for the time-limited kernel family. Carries
/// the leading kernel constant K explicitly.
struct TimeLimitedEvaluator {
    SaftParams params;
    FourierCoeffs weighted;  // h_hat[m] psi_hat[m] Phi(m w0)

    Complex operator()(double t) const;
    SampleSet sample(double delta, std::size_t n_samples,
                     const NoiseSpec& noise = {}) const;
};

TimeLimitedEvaluator simulate_tl_measurements(const SparseSignal& s,
                                              const SaftParams& params,
                                              const TimeLimitedKernel& kernel);

/// Time function of the time-limited kernel itself (zero outside [0, T]).
Complex time_limited_kernel_eval(const TimeLimitedKernel& kernel,
                                 const SaftParams& params, double t);

// --- Windowed transform -----------------------------------------------------

/// V(tau, w) = integral f(t) psi(t - tau) conj(kappa(t, w)) dt by quadrature.
/// The window is linearly interpolated off-grid and treated as zero outside
/// its grid.
GaborMeasurements gabor_saft(const GridSignal& f, const GridSignal& window,
                             const SaftParams& params,
                             const std::vector<double>& taus,
                             const std::vector<double>& omegas);

struct GaborInverseDiagnostics {
    double edge_energy_fraction = 0.0;  // |V|^2 mass on the extreme omega rows
    bool undersampled_plane = false;
};

/// Double-quadrature inversion; requires b <psi1, psi2> = 1 (within 1e-9).
GridSignal gabor_inverse(const GaborMeasurements& v, const GridSignal& window1,
                         const GridSignal& window2, const SaftParams& params,
                         const std::vector<double>& ts,
                         GaborInverseDiagnostics* diag = nullptr);

/// Closed-form windowed measurements of a spike train on the lattice
/// tau = n Delta, omega = l w0, with a T-periodic finite-series window
/// psi_M(t) = sum_{|m|<=M} window_coeffs[m] e^{j w0 m t / b}.
GaborMeasurements simulate_gabor_measurements(const SparseSignal& s,
                                              const std::vector<Complex>& window_coeffs,
                                              const SaftParams& params, double delta,
                                              std::size_t n_samples, int fc,
                                              const NoiseSpec& noise = {});

/// Periodic window value from its coefficient block.
Complex fourier_window_eval(const std::vector<Complex>& window_coeffs, double T,
                            double t);

/// Diagonal gains relating demodulated samples g_n = y(n Delta) e^{jQ} / sqrt(Delta)
/// to the spike-train coefficients: g_n = sum_m D_m h_hat[m] e^{j 2 pi m n Delta / T}.
/// Throws SingularGain when a requested harmonic is unobservable.
std::vector<Complex> measurement_gains(const KernelSpec& kernel, const SaftParams& params,
                                       double T, double delta, int fc);

// --- Coefficient decay ------------------------------------------------------

struct DecayProfile {
    std::vector<double> envelope;  // envelope[n] = max(|c[n]|, |c[-n]|), n = 0..n_max
    int cutoff = -1;               // smallest M with all envelope[n] < threshold for n > M
    double tail_max = 0.0;         // largest envelope value beyond the cutoff candidate
};

/// Magnitude envelope of series coefficients plus the smallest cutoff whose
/// tail drops below `threshold` (relative to the peak). cutoff = -1 when the
/// tail never does.
DecayProfile decay_profile(const SeriesCoeffs& coeffs, double threshold);

/// Deterministic complex Gaussian samples used by the noise hook.
std::vector<Complex> seeded_complex_noise(std::uint64_t seed, std::size_t n, double sigma);

}  // namespace saftkit
