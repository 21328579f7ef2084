// convolution.hpp - the chirp convolution operator and the spectral product
// side of the convolution theorem.

#pragma once

#include "saftkit/params.hpp"
#include "saftkit/transforms.hpp"
#include "saftkit/types.hpp"

namespace saftkit {

enum class ConvolutionMethod { Direct, Fft, Automatic };

/// h = K m*(t) ((m f) * (m g)) with * the ordinary linear convolution scaled
/// by dt (zero extension; output spans the full support sum). Direct and FFT
/// evaluations agree to ~1e-15 and are both kept.
GridSignal saft_convolve(const GridSignal& f, const GridSignal& g,
                         const SaftParams& params,
                         ConvolutionMethod method = ConvolutionMethod::Automatic);

/// Right-hand side of the convolution theorem: Phi(w) F(w) G(w).
Spectrum product_spectrum(const Spectrum& f_hat, const Spectrum& g_hat,
                          const SaftParams& params);

/// Time-domain side of the dual identity: Phi_inv(t) f(t) g(t), whose
/// transform equals K_inv (f_hat conv_inv g_hat).
GridSignal dual_product_signal(const GridSignal& f, const GridSignal& g,
                               const SaftParams& params);

}  // namespace saftkit
