// recovery.hpp - super-resolution of spike trains from low-pass measurements:
// chirp demodulation, Vandermonde inversion, gain deconvolution, annihilating
// filter, root extraction and amplitude estimation, plus end-to-end pipelines
// for the three measurement families.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saftkit/acquisition.hpp"
#include "saftkit/params.hpp"
#include "saftkit/series.hpp"
#include "saftkit/types.hpp"

namespace saftkit {

/// FIR filter r[0..K] (r[0] = 1) annihilating the coefficient sequence:
/// sum_k r[k] h_hat[m - k] = 0 for all admissible m.
struct AnnihilatingFilter {
    std::vector<Complex> taps;
    int K = 0;
    double nullspace_gap = 0.0;  // sigma_smallest / sigma_largest of the system
};

struct ConditionReport {
    int fc = 0;
    bool c1 = false;  // N >= 2 fc + 1
    bool c2 = false;  // fc >= K
    bool fri = false; // N >= T / Delta + 1
    double slack_c1 = 0.0;
    double slack_c2 = 0.0;
    double slack_fri = 0.0;
};

struct RecoveryResult {
    std::vector<Spike> spikes_est;   // sorted by location in [0, T)
    double residual_coeffs = 0.0;    // relative residual of the coefficient refit
    double residual_samples = 0.0;   // relative residual on the input samples
    double cond_vandermonde = 0.0;
    double delta_min = 0.0;
    bool separation_flag = false;    // delta_min * fc >= 2
    ConditionReport conditions;
};

/// g_n = y(n Delta) e^{j Q(n Delta)} / sqrt(Delta).
std::vector<Complex> demodulate(const SampleSet& samples, const SaftParams& params);

struct VandermondeSolution {
    FourierCoeffs coeffs;
    double condition_number = 0.0;
};

/// Least-squares solve of g_n = sum_{|m|<=fc} h_hat[m] e^{j 2 pi m n Delta / T}
/// with a rank check. Reduces to a scaled inverse DFT when N Delta = T and
/// N = 2 fc + 1. `conjugate_nodes` solves the mirrored system (exponent sign
/// flipped), used by the windowed-measurement paths.
VandermondeSolution vandermonde_solve(const std::vector<Complex>& g, double T,
                                      double delta, int fc,
                                      bool conjugate_nodes = false);

/// Divide per-harmonic gains out of the raw coefficients.
FourierCoeffs deconvolve_kernel(const FourierCoeffs& raw,
                                const std::vector<Complex>& gains);

/// Total-least-squares annihilating filter: right singular vector of the
/// Toeplitz convolution matrix at its smallest singular value, scaled so
/// r[0] = 1.
AnnihilatingFilter annihilate(const FourierCoeffs& coeffs, int K);

struct RootReport {
    std::vector<double> times;        // ascending in [0, T)
    std::vector<double> radius_error; // |1 - |u_k|| per root, same order
};

/// Roots of R(z) via the companion matrix; each root maps to
/// t = (T / 2 pi) * ((-arg u) mod 2 pi), the clockwise angle convention that
/// sends u = exp(-j 2 pi t / T) back to t. Values within 1e-12 of T snap to 0.
/// In noiseless mode a root farther than 1e-3 from the unit circle is an error.
RootReport roots_to_times(const AnnihilatingFilter& filter, double T,
                          bool noiseless = true);

struct AmplitudeSolution {
    std::vector<Complex> amplitudes;
    double residual = 0.0;  // relative residual of the coefficient fit
};

/// Least-squares fit of h_hat[m] = sum_k (c_k e^{jQ(t_k)}) u_k^m followed by
/// removal of the chirp factor e^{jQ(t_k)}.
AmplitudeSolution estimate_amplitudes(const std::vector<double>& times,
                                      const FourierCoeffs& coeffs,
                                      const SaftParams& params);

/// Sampling-condition report; fc defaults to floor(T / (2 Delta)).
ConditionReport check_conditions(std::size_t n_samples, double T, double delta,
                                 int K, std::optional<int> fc = std::nullopt);

struct SeparationReport {
    double delta_min = 0.0;
    bool separation_criterion = false;  // delta_min * fc >= 2, when fc was supplied
};

/// Minimum circular gap between spike locations on [0, T).
SeparationReport min_separation(const std::vector<double>& times, double T,
                                std::optional<int> fc = std::nullopt);

/// Full pipeline for the convolutional families:
/// demodulate -> vandermonde -> deconvolve -> annihilate -> roots -> amplitudes.
RecoveryResult recover_sparse_bl(const SampleSet& samples, const SaftParams& params,
                                 int K, double T, const KernelSpec& kernel,
                                 bool noiseless = true);

/// Windowed recovery, fixed frequency row omega = omega0: the row is a
/// classical sparse-sampling problem in the mirrored node convention; the
/// composite weights are unwrapped to the plain amplitudes at the end.
RecoveryResult recover_gabor_case1(const std::vector<Complex>& row,
                                   const SaftParams& params, int K, double T,
                                   const std::vector<Complex>& window_coeffs,
                                   double delta, bool noiseless = true);

/// Windowed recovery from the full (tau, omega) lattice: per-row Vandermonde
/// solves, gain removal, annihilation per row, then aggregation of root
/// angles by residual-weighted circular mean; amplitudes from the aggregated
/// lattice sequence.
RecoveryResult recover_gabor_case2(const GaborMeasurements& v, const SaftParams& params,
                                   int K, double T,
                                   const std::vector<Complex>& window_coeffs,
                                   bool noiseless = true);

}  // namespace saftkit
