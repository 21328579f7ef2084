#include "saftkit/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "saftkit/fft.hpp"

namespace saftkit {

namespace {

void fill_endpoint_diag(const GridSignal& f, TransformDiagnostics* diag) {
    if (!diag || f.samples.empty()) return;
    double maxmag = 0.0;
    for (const auto& v : f.samples) maxmag = std::max(maxmag, std::abs(v));
    const double ends = std::max(std::abs(f.samples.front()), std::abs(f.samples.back()));
    diag->endpoint_ratio = maxmag > 0.0 ? ends / maxmag : 0.0;
    diag->endpoint_warning = diag->endpoint_ratio > 1e-6;
}

}  // namespace

Spectrum saft_quadrature(const GridSignal& f, const SaftParams& params,
                         const std::vector<double>& omegas,
                         TransformDiagnostics* diag) {
    params.require_transform_path("saft_quadrature");
    if (f.samples.empty()) throw EmptyGrid("saft_quadrature: empty input grid");
    fill_endpoint_diag(f, diag);

    const std::size_t n = f.size();
    const Complex constant = kernel_constant(params);
    std::vector<Complex> values(omegas.size());
    for (std::size_t k = 0; k < omegas.size(); ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            // conj(kappa(t, w)) = K exp(+j E(t, w))
            const double e = kernel_exponent(params, f.t(i), omegas[k]);
            acc += f.samples[i] * std::exp(kJ * e) * trapezoid_weight(i, n, f.dt);
        }
        values[k] = constant * acc;
    }
    return Spectrum(omegas, std::move(values));
}

Spectrum saft_fast(const GridSignal& f, const SaftParams& params,
                   TransformDiagnostics* diag) {
    params.require_transform_path("saft_fast");
    if (f.samples.empty()) throw EmptyGrid("saft_fast: empty input grid");
    fill_endpoint_diag(f, diag);

    const std::size_t n = f.size();
    std::vector<Complex> work(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = f.t(i);
        work[i] = f.samples[i] * std::exp(kJ * params.a * t * t / (2.0 * params.b));
    }
    fft::forward(work);

    // Continuous-FT samples of the chirped signal at u_m = 2 pi m / (N dt),
    // then map to w = p + b u and apply K exp(j G(w)) = K conj(Phi(w)).
    const Complex constant = kernel_constant(params);
    const double du = 2.0 * kPi / (static_cast<double>(n) * f.dt);
    const long half = static_cast<long>(n) / 2;
    std::vector<double> omegas(n);
    std::vector<Complex> values(n);
    for (long m = -half; m < static_cast<long>(n) - half; ++m) {
        const std::size_t k = static_cast<std::size_t>(m < 0 ? m + static_cast<long>(n) : m);
        const double u = du * static_cast<double>(m);
        const Complex ft = f.dt * std::exp(-kJ * u * f.t0) * work[k];
        const double omega = params.p + params.b * u;
        const std::size_t out = static_cast<std::size_t>(m + half);
        omegas[out] = omega;
        values[out] = constant * std::conj(phi_factor(params, omega)) * ft;
    }
    if (params.b < 0.0) {
        std::reverse(omegas.begin(), omegas.end());
        std::reverse(values.begin(), values.end());
    }
    return Spectrum(std::move(omegas), std::move(values));
}

GridSignal isaft_quadrature(const Spectrum& spectrum, const SaftParams& params,
                            const std::vector<double>& ts) {
    params.require_transform_path("isaft_quadrature");
    if (spectrum.values.empty()) throw EmptyGrid("isaft_quadrature: empty spectrum");
    if (ts.size() < 2) throw EmptyGrid("isaft_quadrature: need at least two outputs");

    const std::size_t n = spectrum.size();
    const double dw = spectrum.omegas[1] - spectrum.omegas[0];
    const InverseParams inv = inverse_params(params);
    std::vector<Complex> values(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            acc += spectrum.values[i] *
                   std::conj(kernel_eval(inv.params, spectrum.omegas[i], ts[k])) *
                   trapezoid_weight(i, n, dw);
        }
        values[k] = inv.constant * acc;
    }
    return GridSignal(ts.front(), ts[1] - ts.front(), std::move(values));
}

Complex saft_b0_eval(const SaftParams& params, const GridSignal& f, double omega) {
    if (params.b != 0.0)
        throw DegenerateB("saft_b0_eval requires b = 0; use saft_quadrature");
    if (std::abs(params.a * params.d - 1.0) > kUnimodularityTol)
        throw UnimodularityViolation("saft_b0_eval requires ad = 1");
    const double x = params.d * (omega - params.p);
    if (x < f.t0 - 1e-12 || x > f.t_end() + 1e-12)
        throw OutOfGrid("saft_b0_eval: d (w - p) outside the sampled grid");
    const double shift = omega - params.p;
    return std::sqrt(params.d) *
           std::exp(kJ * (0.5 * params.c * params.d * shift * shift + omega * params.q)) *
           f.interp(x);
}

GridSignal chirp_mod(const SaftParams& params, ChirpDirection direction,
                     const GridSignal& f) {
    params.require_transform_path("chirp_mod");
    GridSignal out = f;
    const double rate = params.a / (2.0 * params.b);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = out.t(i);
        const Complex m = std::exp(kJ * rate * t * t);
        out.samples[i] *= (direction == ChirpDirection::Up) ? m : std::conj(m);
    }
    return out;
}

}  // namespace saftkit
