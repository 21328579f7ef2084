#include "saftkit/convolution.hpp"

#include <cmath>

#include "saftkit/fft.hpp"
#include "saftkit/kernel.hpp"

namespace saftkit {

namespace {

void check_same_grid(const GridSignal& f, const GridSignal& g, const char* op) {
    if (std::abs(f.dt - g.dt) > 1e-12 * f.dt)
        throw GridMismatch(std::string(op) + ": step mismatch");
}

std::vector<Complex> linear_convolution_direct(const std::vector<Complex>& x,
                                               const std::vector<Complex>& y) {
    std::vector<Complex> out(x.size() + y.size() - 1, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
    return out;
}

std::vector<Complex> linear_convolution_fft(const std::vector<Complex>& x,
                                            const std::vector<Complex>& y) {
    const std::size_t full = x.size() + y.size() - 1;
    const std::size_t padded = fft::next_pow2(full);
    std::vector<Complex> a(padded, Complex{0.0, 0.0});
    std::vector<Complex> b(padded, Complex{0.0, 0.0});
    std::copy(x.begin(), x.end(), a.begin());
    std::copy(y.begin(), y.end(), b.begin());
    fft::forward(a);
    fft::forward(b);
    for (std::size_t i = 0; i < padded; ++i) a[i] *= b[i];
    fft::inverse(a);
    a.resize(full);
    return a;
}

}  // namespace

GridSignal saft_convolve(const GridSignal& f, const GridSignal& g,
                         const SaftParams& params, ConvolutionMethod method) {
    params.require_transform_path("saft_convolve");
    if (f.samples.empty() || g.samples.empty())
        throw EmptyGrid("saft_convolve: empty input grid");
    check_same_grid(f, g, "saft_convolve");

    const GridSignal fu = chirp_mod(params, ChirpDirection::Up, f);
    const GridSignal gu = chirp_mod(params, ChirpDirection::Up, g);

    const bool use_fft =
        method == ConvolutionMethod::Fft ||
        (method == ConvolutionMethod::Automatic && f.size() * g.size() > 65536);
    std::vector<Complex> conv = use_fft
                                    ? linear_convolution_fft(fu.samples, gu.samples)
                                    : linear_convolution_direct(fu.samples, gu.samples);

    GridSignal out(f.t0 + g.t0, f.dt, std::move(conv));
    const Complex constant = kernel_constant(params);
    const double rate = params.a / (2.0 * params.b);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = out.t(i);
        out.samples[i] *= constant * f.dt * std::exp(-kJ * rate * t * t);
    }
    return out;
}

Spectrum product_spectrum(const Spectrum& f_hat, const Spectrum& g_hat,
                          const SaftParams& params) {
    params.require_transform_path("product_spectrum");
    if (f_hat.size() != g_hat.size())
        throw GridMismatch("product_spectrum: spectra differ in length");
    for (std::size_t i = 0; i < f_hat.size(); ++i)
        if (std::abs(f_hat.omegas[i] - g_hat.omegas[i]) > 1e-12)
            throw GridMismatch("product_spectrum: frequency axes differ");

    std::vector<Complex> values(f_hat.size());
    for (std::size_t i = 0; i < f_hat.size(); ++i)
        values[i] = phi_factor(params, f_hat.omegas[i]) * f_hat.values[i] * g_hat.values[i];
    return Spectrum(f_hat.omegas, std::move(values));
}

GridSignal dual_product_signal(const GridSignal& f, const GridSignal& g,
                               const SaftParams& params) {
    params.require_transform_path("dual_product_signal");
    if (f.size() != g.size()) throw GridMismatch("dual_product_signal: length mismatch");
    check_same_grid(f, g, "dual_product_signal");
    if (std::abs(f.t0 - g.t0) > 1e-12) throw GridMismatch("dual_product_signal: origin mismatch");

    // Phi of the inverse matrix, as a function of time; equals exp(j Q(t)).
    const InverseParams inv = inverse_params(params);
    GridSignal out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.samples[i] = phi_factor(inv.params, out.t(i)) * f.samples[i] * g.samples[i];
    return out;
}

}  // namespace saftkit
