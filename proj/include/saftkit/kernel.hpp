// kernel.hpp - pointwise kernel evaluation and the derived constants.
//
// Writing r = [t, w]^T, the forward kernel is
//   kappa(t, w) = conj(K) * exp(-j (r^T U r + v^T r))
// with U, v, K from kernel_quad_form. The exponent expands to
//   E(t, w) = Q(t) + G(w) - t w / b,
//   Q(t) = (a t^2 + 2 p t) / (2b),
//   G(w) = (d w^2 + 2 w (bq - dp)) / (2b),
// a split every other module leans on: Q carries the chirp demodulation and
// exp(-jG) is the spectral factor Phi of the convolution theorem.

#pragma once

#include "saftkit/params.hpp"
#include "saftkit/types.hpp"

namespace saftkit {

/// K of the kernel: 1/sqrt(j 2 pi b) * exp(j d p^2 / (2b)), principal root.
Complex kernel_constant(const SaftParams& params);

/// Full kernel exponent E(t, w).
double kernel_exponent(const SaftParams& params, double t, double omega);

/// kappa(t, w) = conj(K) exp(-j E(t, w)).
Complex kernel_eval(const SaftParams& params, double t, double omega);

/// Q(t) = (a t^2 + 2 p t) / (2b).
double q_poly(const SaftParams& params, double t);

/// Phi(w) = exp(j w (dp - bq)/b) exp(-j d w^2/(2b)); unit modulus.
Complex phi_factor(const SaftParams& params, double omega);

/// Transform of the Dirac distribution: conj-kernel at t = 0,
/// K * exp((j/2b)(d w^2 - 2 w (dp - bq))) with K = kernel_constant.
Complex dirac_saft(const SaftParams& params, double omega);

/// Inverse kernel actually used by the inverse transform: the raw kernel of
/// the inverse matrix times conj(K_inv). Pointwise it equals
/// conj(kernel_eval(params, t, omega)); the two routes are kept separate so
/// that identity is testable.
Complex inverse_kernel_eval(const SaftParams& params, double omega, double t);

}  // namespace saftkit
