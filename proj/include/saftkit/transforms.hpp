// transforms.hpp - forward/inverse transforms and chirp modulation.

#pragma once

#include <vector>

#include "saftkit/kernel.hpp"
#include "saftkit/params.hpp"
#include "saftkit/types.hpp"

namespace saftkit {

/// Per-call quality notes; transforms never fail on these, they only report.
struct TransformDiagnostics {
    double endpoint_ratio = 0.0;  // max endpoint magnitude / max magnitude
    bool endpoint_warning = false;
};

/// Reference transform: trapezoid quadrature of <f, kappa(., w)> at each
/// requested frequency. This is the oracle every faster path is tested
/// against. Emits an endpoint diagnostic when the grid visibly truncates f.
Spectrum saft_quadrature(const GridSignal& f, const SaftParams& params,
                         const std::vector<double>& omegas,
                         TransformDiagnostics* diag = nullptr);

/// Chirp-FFT path: pre-chirp, FFT, spectral post-factor. Returns the
/// transform on the FFT's own frequency axis w_m = p + 2 pi b m / (N dt).
Spectrum saft_fast(const GridSignal& f, const SaftParams& params,
                   TransformDiagnostics* diag = nullptr);

/// Inverse transform by quadrature over a sampled spectrum.
GridSignal isaft_quadrature(const Spectrum& spectrum, const SaftParams& params,
                            const std::vector<double>& ts);

/// Direct-evaluation branch for b = 0 (requires ad = 1):
/// sqrt(d) exp(j c d (w - p)^2 / 2 + j w q) f(d (w - p)), linear interpolation.
Complex saft_b0_eval(const SaftParams& params, const GridSignal& f, double omega);

enum class ChirpDirection { Up, Down };

/// Multiply by the unit-modulus chirp m(t) = exp(j a t^2 / (2b)) (Up) or its
/// conjugate (Down). Preserves the L2 norm exactly.
GridSignal chirp_mod(const SaftParams& params, ChirpDirection direction,
                     const GridSignal& f);

}  // namespace saftkit
