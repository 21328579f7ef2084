// series.hpp - series expansion of [0, T)-supported signals in kernel
// harmonics with fundamental w0 = 2 pi b / T, and the closed-form expansion
// of spike trains.

#pragma once

#include <vector>

#include "saftkit/kernel.hpp"
#include "saftkit/params.hpp"
#include "saftkit/types.hpp"

namespace saftkit {

struct Spike {
    double t = 0.0;
    Complex c{0.0, 0.0};
};

/// K weighted Dirac spikes on a window of length T. Locations are strictly
/// increasing in [0, T); every amplitude is nonzero.
struct SparseSignal {
    std::vector<Spike> spikes;
    double T = 1.0;

    SparseSignal() = default;
    SparseSignal(std::vector<Spike> s, double window);

    std::size_t count() const { return spikes.size(); }
};

/// Series coefficients of a signal on [0, T): values[i] belongs to harmonic
/// n = n_min + i, sampled at frequency n * w0.
struct SeriesCoeffs {
    SaftParams params;
    double T = 1.0;
    int n_min = 0;
    int n_max = 0;
    std::vector<Complex> values;
    double omega0 = 0.0;  // 2 pi b / T

    const Complex& at(int n) const { return values.at(static_cast<std::size_t>(n - n_min)); }
};

/// Symmetric Fourier-type coefficient block: values for m = -fc .. fc of the
/// chirp-demodulated spike train, h_hat[m] = sum_k c_k e^{jQ(t_k)} u_k^m with
/// nodes u_k = exp(-j 2 pi t_k / T).
struct FourierCoeffs {
    int fc = 0;
    std::vector<Complex> values;  // length 2 fc + 1
    double T = 1.0;
    double b = 1.0;

    FourierCoeffs() = default;
    FourierCoeffs(int cutoff, double window, double b_entry)
        : fc(cutoff), values(static_cast<std::size_t>(2 * cutoff + 1)), T(window), b(b_entry) {}

    Complex& at(int m) { return values.at(static_cast<std::size_t>(m + fc)); }
    const Complex& at(int m) const { return values.at(static_cast<std::size_t>(m + fc)); }
};

/// Analysis integral over [0, T): values[n] = integral f(t) conj(kappa(t, n w0)) dt.
/// The grid must start at 0 and cover T (either last point T - dt or T).
SeriesCoeffs safs_analyze(const GridSignal& f, const SaftParams& params,
                          int n_min, int n_max);

/// Synthesis normalized so analyze(synthesize(c)) = c: divides by the Gram
/// diagonal w0 = |K|^2 T.
GridSignal safs_synthesize(const SeriesCoeffs& coeffs, const std::vector<double>& ts);

/// Gram integral I(n, k) over [0, T) between forward harmonic n and inverse
/// harmonic k. `omega0` defaults to the matched fundamental 2 pi b / T; pass
/// a detuned value to observe the nonzero off-diagonal closed form.
Complex safs_gram(const SaftParams& params, double T, int n, int k,
                  double omega0 = 0.0, std::size_t min_points = 4096);

/// Number of grid points giving >= 64 samples per oscillation of the
/// analysis integrand up to harmonic n_max.
std::size_t safs_recommended_points(const SaftParams& params, double T, int n_max);

/// Closed-form coefficients of a spike train (exact finite sum).
FourierCoeffs sparse_safs(const SparseSignal& s, const SaftParams& params, int fc);

/// Truncated band expansion e^{-jQ(t)} sum_{|m|<=fc} h_hat[m] e^{j 2 pi m t / T},
/// evaluated on a uniform time axis.
GridSignal sparse_synthesize_band(const SparseSignal& s, const SaftParams& params,
                                  int fc, const std::vector<double>& ts);

/// Same truncated expansion from precomputed coefficients.
GridSignal band_synthesize(const FourierCoeffs& coeffs, const SaftParams& params,
                           const std::vector<double>& ts);

}  // namespace saftkit
