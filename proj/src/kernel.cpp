#include "saftkit/kernel.hpp"

#include <cmath>

namespace saftkit {

Complex kernel_constant(const SaftParams& s) {
    s.require_transform_path("kernel_constant");
    return 1.0 / std::sqrt(kJ * 2.0 * kPi * s.b) *
           std::exp(kJ * (s.d * s.p * s.p) / (2.0 * s.b));
}

double kernel_exponent(const SaftParams& s, double t, double omega) {
    s.require_transform_path("kernel_exponent");
    return (s.a * t * t + s.d * omega * omega + 2.0 * t * (s.p - omega) +
            2.0 * omega * (s.b * s.q - s.d * s.p)) /
           (2.0 * s.b);
}

Complex kernel_eval(const SaftParams& s, double t, double omega) {
    return std::conj(kernel_constant(s)) *
           std::exp(-kJ * kernel_exponent(s, t, omega));
}

double q_poly(const SaftParams& s, double t) {
    s.require_transform_path("q_poly");
    return (s.a * t * t + 2.0 * s.p * t) / (2.0 * s.b);
}

Complex phi_factor(const SaftParams& s, double omega) {
    s.require_transform_path("phi_factor");
    return std::exp(kJ * omega * (s.d * s.p - s.b * s.q) / s.b) *
           std::exp(-kJ * s.d * omega * omega / (2.0 * s.b));
}

Complex dirac_saft(const SaftParams& s, double omega) {
    s.require_transform_path("dirac_saft");
    return kernel_constant(s) *
           std::exp(kJ * (s.d * omega * omega -
                          2.0 * omega * (s.d * s.p - s.b * s.q)) /
                    (2.0 * s.b));
}

Complex inverse_kernel_eval(const SaftParams& s, double omega, double t) {
    const InverseParams inv = inverse_params(s);
    return std::conj(inv.constant) * kernel_eval(inv.params, omega, t);
}

}  // namespace saftkit
