#include "doctest.h"

#include <cmath>
#include <functional>

#include "saftkit/kernel.hpp"
#include "saftkit/series.hpp"
#include "test_util.hpp"

using namespace saftkit;
using testutil::lambda_test;
using testutil::linspace;

namespace {

SparseSignal s2() {
    return SparseSignal({{0.25, {1.0, 0.0}}, {0.6, {-0.5, 0.0}}}, 1.0);
}

/// Direct extended-precision summation of the coefficient formula,
/// independent of the library path.
Complex sparse_coeff_reference(const SparseSignal& s, const SaftParams& p, int m) {
    long double re = 0.0L, im = 0.0L;
    for (const auto& spike : s.spikes) {
        const long double t = spike.t;
        const long double Q =
            (static_cast<long double>(p.a) * t * t + 2.0L * p.p * t) / (2.0L * p.b);
        const long double phase =
            Q - 2.0L * static_cast<long double>(kPi) * m * t / s.T;
        const long double cr = spike.c.real(), ci = spike.c.imag();
        re += cr * std::cos(phase) - ci * std::sin(phase);
        im += cr * std::sin(phase) + ci * std::cos(phase);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

GridSignal analysis_grid(const SaftParams& p, double T, int n_max,
                         const std::function<Complex(double)>& fn) {
    const std::size_t n = safs_recommended_points(p, T, n_max);
    return sample_grid(0.0, T / static_cast<double>(n), n, fn);
}

}  // namespace

TEST_CASE("sparse signal validation") {
    CHECK_THROWS_AS(SparseSignal({}, 1.0), ConfigInvalid);
    CHECK_THROWS_AS(SparseSignal({{1.2, {1.0, 0.0}}}, 1.0), ConfigInvalid);
    CHECK_THROWS_AS(SparseSignal({{0.5, {0.0, 0.0}}}, 1.0), ConfigInvalid);
    CHECK_THROWS_AS(SparseSignal({{0.5, {1.0, 0.0}}, {0.5, {1.0, 0.0}}}, 1.0),
                    ConfigInvalid);
}

TEST_CASE("spike-train coefficients") {
    SUBCASE("single spike at the origin gives all-ones") {
        const SparseSignal s({{0.0, {1.0, 0.0}}}, 1.0);
        const FourierCoeffs h = sparse_safs(s, lambda_test(), 5);
        for (int m = -5; m <= 5; ++m) CHECK(std::abs(h.at(m) - 1.0) <= 1e-15);
    }
    SUBCASE("plain preset reduces to classical coefficients") {
        const FourierCoeffs h = sparse_safs(s2(), SaftParams::fourier(), 4);
        for (int m = -4; m <= 4; ++m) {
            const Complex want = std::exp(-kJ * 2.0 * kPi * double(m) * 0.25) -
                                 0.5 * std::exp(-kJ * 2.0 * kPi * double(m) * 0.6);
            CHECK(std::abs(h.at(m) - want) <= 1e-12);
        }
    }
    SUBCASE("rotation preset carries the cot-theta chirp weight") {
        const double theta = 0.8;
        const SaftParams frft = SaftParams::fractional(theta);
        const FourierCoeffs h = sparse_safs(s2(), frft, 4);
        for (int m = -4; m <= 4; ++m) {
            Complex want{0.0, 0.0};
            for (const auto& spike : s2().spikes)
                want += spike.c * std::exp(kJ * 0.5 * spike.t * spike.t / std::tan(theta)) *
                        std::exp(-kJ * 2.0 * kPi * double(m) * spike.t);
            CHECK(std::abs(h.at(m) - want) <= 1e-12);
        }
    }
    SUBCASE("worked example against extended-precision summation") {
        const SaftParams p = lambda_test();
        const FourierCoeffs h = sparse_safs(s2(), p, 3);
        for (int m = -3; m <= 3; ++m)
            CHECK(std::abs(h.at(m) - sparse_coeff_reference(s2(), p, m)) <= 1e-14);
    }
}

TEST_CASE("orthogonality of the harmonic family") {
    testutil::Rng rng(43);
    std::vector<SaftParams> cases = testutil::transform_presets();
    for (int i = 0; i < 10; ++i) cases.push_back(testutil::random_params(rng));
    const double T = 1.3;
    for (const auto& p : cases) {
        const double diag_want = std::norm(kernel_constant(p)) * T;
        for (int n = 0; n <= 8; ++n) {
            const Complex diag = safs_gram(p, T, n, n);
            CHECK(std::abs(diag - diag_want) <= 1e-8 * diag_want);
        }
        double worst = 0.0;
        for (int n = 0; n <= 8; ++n)
            for (int k = 0; k <= 8; ++k)
                if (n != k) worst = std::max(worst, std::abs(safs_gram(p, T, n, k)));
        CHECK(worst <= 1e-8 * diag_want);
    }
}

TEST_CASE("detuned fundamental matches the closed form") {
    // With w0' = 1.5 (2 pi b / T) the off-diagonal integral is
    // |K|^2 e^{j(G(k w0') - G(n w0'))} (1 - e^{-j beta T}) / (j beta),
    // beta = w0' (k - n) / b. The gram quadrature arbitrates the phase sign.
    const SaftParams p = lambda_test();
    const double T = 1.0;
    const double w0 = 1.5 * 2.0 * kPi * p.b / T;
    auto g_phase = [&](double w) {
        return (p.d * w * w + 2.0 * w * (p.b * p.q - p.d * p.p)) / (2.0 * p.b);
    };
    const double scale = std::norm(kernel_constant(p)) * T;
    for (int n = 0; n <= 4; ++n) {
        for (int k = 0; k <= 4; ++k) {
            if (n == k) continue;
            const double beta = w0 * static_cast<double>(k - n) / p.b;
            const Complex want = std::norm(kernel_constant(p)) *
                                 std::exp(kJ * (g_phase(w0 * k) - g_phase(w0 * n))) *
                                 (1.0 - std::exp(-kJ * beta * T)) / (kJ * beta);
            const Complex got = safs_gram(p, T, n, k, w0, 1 << 17);
            CHECK(std::abs(got - want) <= 1e-8 * scale);
            // odd gaps see a genuinely nonzero integral at this detuning
            if ((k - n) % 2 != 0) CHECK(std::abs(got) > 1e-3 * scale);
        }
    }
}

TEST_CASE("analysis picks out a synthesized harmonic") {
    const SaftParams p = lambda_test();
    const double T = 1.0;
    const double w0 = 2.0 * kPi * p.b / T;
    const int k = 3;
    const GridSignal f = analysis_grid(p, T, 8, [&](double t) {
        return std::conj(inverse_kernel_eval(p, w0 * k, t));
    });
    const SeriesCoeffs coeffs = safs_analyze(f, p, 0, 8);
    const double peak = std::abs(coeffs.at(k));
    CHECK(peak == doctest::Approx(std::norm(kernel_constant(p)) * T).epsilon(1e-9));
    for (int n = 0; n <= 8; ++n)
        if (n != k) CHECK(std::abs(coeffs.at(n)) <= 1e-8 * peak);
}

TEST_CASE("plain preset reduces to the classical series") {
    // T = 2 pi makes the fundamental 1; f = e^{j 3 t} has a single line.
    const SaftParams ft = SaftParams::fourier();
    const double T = 2.0 * kPi;
    const GridSignal f =
        analysis_grid(ft, T, 6, [](double t) { return std::exp(kJ * 3.0 * t); });
    const SeriesCoeffs coeffs = safs_analyze(f, ft, -6, 6);
    const Complex want = kernel_constant(ft) * 2.0 * kPi;  // K * integral of 1
    CHECK(std::abs(coeffs.at(3) - want) <= 1e-10);
    for (int n = -6; n <= 6; ++n)
        if (n != 3) CHECK(std::abs(coeffs.at(n)) <= 1e-10);
}

TEST_CASE("analysis-synthesis round trip") {
    testutil::Rng rng(53);
    const SaftParams p = lambda_test();
    const double T = 1.0;

    // 21-harmonic random series content.
    SeriesCoeffs truth;
    truth.params = p;
    truth.T = T;
    truth.n_min = -10;
    truth.n_max = 10;
    truth.omega0 = 2.0 * kPi * p.b / T;
    for (int n = -10; n <= 10; ++n)
        truth.values.push_back(Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));

    const std::size_t pts = safs_recommended_points(p, T, 10);
    std::vector<double> ts(pts);
    for (std::size_t i = 0; i < pts; ++i)
        ts[i] = T * static_cast<double>(i) / static_cast<double>(pts);
    const GridSignal synth = safs_synthesize(truth, ts);
    const SeriesCoeffs back = safs_analyze(synth, p, -10, 10);
    CHECK(testutil::rel_l2_error(back.values, truth.values) <= 1e-8);

    const GridSignal again = safs_synthesize(back, ts);
    CHECK(testutil::rel_l2_error(again.samples, synth.samples) <= 1e-8);
}

TEST_CASE("single-coefficient synthesis is the basis function") {
    const SaftParams p = lambda_test();
    SeriesCoeffs one;
    one.params = p;
    one.T = 1.0;
    one.n_min = 0;
    one.n_max = 0;
    one.omega0 = 2.0 * kPi * p.b;
    one.values = {Complex{1.0, 0.0}};
    const auto ts = linspace(0.0, 0.999, 200);
    const GridSignal f = safs_synthesize(one, ts);
    const double w0 = std::norm(kernel_constant(p)) * 1.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const Complex want = std::conj(inverse_kernel_eval(p, 0.0, ts[i])) / w0;
        CHECK(std::abs(f.samples[i] - want) <= 1e-12);
    }
}

TEST_CASE("reparameterization identity, term by term") {
    // Truncated series of the spike train: sum_n s_hat[n] conj(kappa_inv(n w0, t))
    // equals |K|^2 e^{-jQ(t)} sum_n h_hat[n] e^{j 2 pi n t / T}.
    const SparseSignal s = s2();
    std::vector<SaftParams> cases = {lambda_test(), SaftParams::fourier(),
                                     SaftParams::fractional(0.9)};
    for (const auto& p : cases) {
        const double w0 = 2.0 * kPi * p.b / s.T;
        const FourierCoeffs h = sparse_safs(s, p, 6);
        for (double t : {0.1, 0.37, 0.81}) {
            Complex series_side{0.0, 0.0};
            for (int n = -6; n <= 6; ++n) {
                Complex s_hat{0.0, 0.0};
                for (const auto& spike : s.spikes)
                    s_hat += spike.c * std::conj(kernel_eval(p, spike.t, w0 * n));
                series_side += s_hat * std::conj(inverse_kernel_eval(p, w0 * n, t));
            }
            Complex band_side{0.0, 0.0};
            for (int n = -6; n <= 6; ++n)
                band_side += h.at(n) * std::exp(kJ * 2.0 * kPi * double(n) * t / s.T);
            band_side *= std::norm(kernel_constant(p)) * std::exp(-kJ * q_poly(p, t));
            CHECK(std::abs(series_side - band_side) <= 1e-10);
        }
    }
}

TEST_CASE("band-limited synthesis concentrates at the spikes") {
    const SaftParams p = lambda_test();
    const int fc = 10;
    const auto ts = linspace(0.0, 0.9995, 2000);
    const GridSignal f = sparse_synthesize_band(s2(), p, fc, ts);

    for (const auto& spike : s2().spikes) {
        double best_t = 0.0, best = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (std::abs(ts[i] - spike.t) < 0.2 && std::abs(f.samples[i]) > best) {
                best = std::abs(f.samples[i]);
                best_t = ts[i];
            }
        }
        CHECK(std::abs(best_t - spike.t) <= 1.0 / (2.0 * fc));
    }
}
