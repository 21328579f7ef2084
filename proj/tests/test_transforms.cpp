#include "doctest.h"

#include <cmath>

#include "saftkit/kernel.hpp"
#include "saftkit/transforms.hpp"
#include "test_util.hpp"

using namespace saftkit;
using testutil::gaussian_signal;
using testutil::lambda_test;
using testutil::linspace;

TEST_CASE("kernel pointwise values") {
    const SaftParams t = lambda_test();

    SUBCASE("plain preset collapses the quadratic form") {
        // kappa(t, w) = conj(1/sqrt(j 2 pi)) e^{j t w}
        const Complex want =
            std::conj(1.0 / std::sqrt(kJ * 2.0 * kPi)) * std::exp(kJ * 1.3 * 0.7);
        CHECK(std::abs(kernel_eval(SaftParams::fourier(), 1.3, 0.7) - want) <= 1e-15);
    }
    SUBCASE("origin returns the conjugate constant") {
        CHECK(std::abs(kernel_eval(t, 0.0, 0.0) - std::conj(kernel_constant(t))) <= 1e-16);
    }
    SUBCASE("worked example, exponent by hand") {
        // E = (a t^2 + d w^2 + 2t(p - w) + 2w(bq - dp)) / (2b)
        //   = (1 + 12 - 3 - 8.4) / 4 = 0.4 at (t, w) = (1, 2);
        // K* = (1/sqrt(4 pi)) e^{j pi/4} e^{-j 0.1875}.
        const Complex want = (1.0 / std::sqrt(4.0 * kPi)) *
                             std::exp(kJ * (kPi / 4.0 - 0.1875 - 0.4));
        CHECK(std::abs(kernel_eval(t, 1.0, 2.0) - want) <= 1e-15);
    }
}

TEST_CASE("chirp phase polynomial") {
    CHECK(q_poly(SaftParams::fourier(), 1.7) == 0.0);
    // Rotation preset: Q(t) = (t^2 / 2) cot(theta).
    const double theta = 0.9;
    CHECK(q_poly(SaftParams::fractional(theta), 1.3) ==
          doctest::Approx(0.5 * 1.3 * 1.3 / std::tan(theta)));
    CHECK(q_poly(lambda_test(), 1.0) == doctest::Approx(0.5));
}

TEST_CASE("spectral factor") {
    const SaftParams t = lambda_test();
    CHECK(phi_factor(SaftParams::fourier(), 2.2) == Complex{1.0, 0.0});
    CHECK(phi_factor(t, 0.0) == Complex{1.0, 0.0});
    // exp(j (dp - bq)/b) exp(-j d/(2b)) = exp(j (1.05 - 0.75)) at w = 1.
    CHECK(std::abs(phi_factor(t, 1.0) - std::exp(kJ * 0.3)) <= 1e-15);
    CHECK(std::abs(phi_factor(t, 3.7)) == doctest::Approx(1.0));
}

TEST_CASE("transform of the Dirac distribution") {
    const SaftParams t = lambda_test();
    SUBCASE("plain preset is the flat constant") {
        const Complex want = 1.0 / std::sqrt(kJ * 2.0 * kPi);
        CHECK(std::abs(dirac_saft(SaftParams::fourier(), 2.9) - want) <= 1e-16);
        CHECK(std::abs(dirac_saft(t, 0.0) - kernel_constant(t)) <= 1e-16);
    }
    SUBCASE("worked example by hand") {
        // exponent (d w^2 - 2 w (dp - bq)) / (2b) = (3 - 4.2)/4 = -0.3 at w = 1
        const Complex want = kernel_constant(t) * std::exp(-kJ * 0.3);
        CHECK(std::abs(dirac_saft(t, 1.0) - want) <= 1e-15);
    }
    SUBCASE("conjugate kernel at the origin") {
        for (double w : {-2.0, 0.3, 1.9})
            CHECK(std::abs(dirac_saft(t, w) - std::conj(kernel_eval(t, 0.0, w))) <= 1e-15);
    }
}

TEST_CASE("inverse kernel equals the conjugated forward kernel") {
    // Two code paths: inverse matrix + constant vs direct conjugation.
    testutil::Rng rng(7);
    std::vector<SaftParams> all = testutil::transform_presets();
    for (int i = 0; i < 10; ++i) all.push_back(testutil::random_params(rng));
    all.push_back(lambda_test());
    for (const auto& s : all) {
        double worst = 0.0;
        for (int i = 0; i < 32; ++i) {
            for (int j = 0; j < 32; ++j) {
                const double t = -2.0 + 4.0 * i / 31.0;
                const double w = -2.0 + 4.0 * j / 31.0;
                worst = std::max(worst, std::abs(inverse_kernel_eval(s, w, t) -
                                                 std::conj(kernel_eval(s, t, w))));
            }
        }
        CHECK(worst <= 1e-14);
    }
}

TEST_CASE("quadrature transform of a Gaussian at the plain preset") {
    const GridSignal f = gaussian_signal(0.0, 1.0, 0.0, -8.0, 16.0 / 2047, 2048);
    const Spectrum s = saft_quadrature(f, SaftParams::fourier(), {0.0});
    // integral of exp(-t^2/2) is sqrt(2 pi); value = sqrt(2 pi)/sqrt(j 2 pi).
    const Complex want = std::sqrt(2.0 * kPi) / std::sqrt(kJ * 2.0 * kPi);
    CHECK(std::abs(s.values[0] - want) <= 1e-8);
}

TEST_CASE("quadrature transform peaks at the synthesized harmonic") {
    const SaftParams s = lambda_test();
    const double w0 = 1.4;
    GridSignal f = gaussian_signal(0.0, 2.0, 0.0, -10.0, 20.0 / 2047, 2048);
    for (std::size_t i = 0; i < f.size(); ++i)
        f.samples[i] *= std::conj(inverse_kernel_eval(s, w0, f.t(i)));
    const auto omegas = linspace(-4.0, 6.0, 201);
    const Spectrum spec = saft_quadrature(f, s, omegas);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (std::abs(spec.values[i]) > std::abs(spec.values[peak])) peak = i;
    CHECK(omegas[peak] == doctest::Approx(w0).epsilon(0.02));
}

TEST_CASE("narrow pulse approaches the Dirac transform") {
    testutil::Rng rng(19);
    for (int trial = 0; trial < 4; ++trial) {
        const SaftParams s = trial == 0 ? lambda_test() : testutil::random_params(rng);
        const double sigma = 1e-3;
        const GridSignal proxy = sample_grid(-8e-3, 16e-3 / 4095, 4096, [&](double t) {
            return Complex(std::exp(-0.5 * t * t / (sigma * sigma)) /
                               (sigma * std::sqrt(2.0 * kPi)),
                           0.0);
        });
        const auto omegas = linspace(-3.0, 3.0, 21);
        const Spectrum spec = saft_quadrature(proxy, s, omegas);
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const Complex want = dirac_saft(s, omegas[i]);
            CHECK(std::abs(spec.values[i] - want) / std::abs(want) <= 1e-4);
        }
    }
}

TEST_CASE("endpoint diagnostic reports visible truncation") {
    const GridSignal good = gaussian_signal(0.0, 1.0, 0.0, -8.0, 16.0 / 511, 512);
    TransformDiagnostics diag;
    saft_quadrature(good, SaftParams::fourier(), {0.0}, &diag);
    CHECK_FALSE(diag.endpoint_warning);

    const GridSignal cut = gaussian_signal(0.0, 1.0, 0.0, -1.0, 2.0 / 511, 512);
    saft_quadrature(cut, SaftParams::fourier(), {0.0}, &diag);
    CHECK(diag.endpoint_warning);
}

TEST_CASE("chirp-FFT path against the quadrature oracle") {
    testutil::Rng rng(29);
    std::vector<SaftParams> cases = testutil::transform_presets();
    cases.push_back(lambda_test());
    for (int i = 0; i < 6; ++i) cases.push_back(testutil::random_params(rng, 0.5, 2.5));

    const GridSignal f = gaussian_signal(0.4, 1.0, 1.0, -8.0, 16.0 / 2048, 2048);
    for (const auto& s : cases) {
        const Spectrum fast = saft_fast(f, s);
        // Compare on the central part of the FFT axis (the oracle is cheap
        // only on a subset; sup norms are relative to the oracle's peak).
        std::vector<double> omegas;
        std::vector<std::size_t> index;
        for (std::size_t k = 0; k < fast.size(); k += 4) {
            if (std::abs(fast.omegas[k] - s.p) <= 12.0 * std::abs(s.b)) {
                omegas.push_back(fast.omegas[k]);
                index.push_back(k);
            }
        }
        const Spectrum oracle = saft_quadrature(f, s, omegas);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            num = std::max(num, std::abs(fast.values[index[i]] - oracle.values[i]));
            den = std::max(den, std::abs(oracle.values[i]));
        }
        CHECK(num / den <= 1e-6);
    }
}

TEST_CASE("inverse transform round trip") {
    testutil::Rng rng(31);
    std::vector<SaftParams> cases = testutil::transform_presets();
    cases.push_back(lambda_test());
    for (int i = 0; i < 20; ++i) cases.push_back(testutil::random_params(rng, 0.5, 2.5));

    const GridSignal f = gaussian_signal(0.0, 1.0, 0.5, -8.0, 16.0 / 1600, 1600);
    for (const auto& s : cases) {
        // Frequency support of the chirped Gaussian mapped through w = p + b u.
        const double umax = 6.0 * std::abs(s.a / s.b) + 8.0;
        const double wspan = std::abs(s.b) * umax;
        const std::size_t n_omega =
            static_cast<std::size_t>(std::ceil(wspan * (2.0 * 8.0 / std::abs(s.b)) / 4.0)) + 800;
        const auto omegas = linspace(s.p - wspan, s.p + wspan, n_omega);
        const Spectrum spec = saft_quadrature(f, s, omegas);

        std::vector<double> ts(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) ts[i] = f.t(i);
        const GridSignal back = isaft_quadrature(spec, s, ts);
        CHECK(testutil::interior_rel_l2_error(back.samples, f.samples, 0.8) <= 1e-6);
    }
}

TEST_CASE("composition certified up to one unimodular constant") {
    const GridSignal f = gaussian_signal(0.0, 0.7, 0.0, -6.0, 12.0 / 1536, 1536);
    const std::vector<std::pair<SaftParams, SaftParams>> pairs = {
        {SaftParams::fractional(0.7), lambda_test()},
        {SaftParams::fresnel(0.5), SaftParams::fractional(1.1)},
    };
    for (const auto& [inner, outer] : pairs) {
        const auto mid = linspace(inner.p - 18.0 * std::abs(inner.b),
                                  inner.p + 18.0 * std::abs(inner.b), 4096);
        const Spectrum s1 = saft_quadrature(f, inner, mid);
        const GridSignal stage(mid.front(), mid[1] - mid[0], s1.values);

        const SaftParams combined = compose_params(outer, inner);
        const auto final_axis = linspace(combined.p - 10.0 * std::abs(combined.b),
                                         combined.p + 10.0 * std::abs(combined.b), 301);
        const Spectrum cascaded = saft_quadrature(stage, outer, final_axis);
        const Spectrum direct = saft_quadrature(f, combined, final_axis);

        std::size_t peak = 0;
        for (std::size_t i = 0; i < direct.size(); ++i)
            if (std::abs(direct.values[i]) > std::abs(direct.values[peak])) peak = i;
        const Complex z0 = cascaded.values[peak] / direct.values[peak];
        CHECK(std::abs(z0) == doctest::Approx(1.0).epsilon(1e-5));

        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            num = std::max(num, std::abs(cascaded.values[i] - z0 * direct.values[i]));
            den = std::max(den, std::abs(direct.values[i]));
        }
        CHECK(num / den <= 1e-6);
    }
}

TEST_CASE("direct-evaluation branch at b = 0") {
    const GridSignal f = gaussian_signal(0.0, 1.0, 0.3, -6.0, 12.0 / 1023, 1024);

    SUBCASE("identity-like matrix resamples") {
        const SaftParams id = SaftParams::from_matrix(1.0, 0.0, 0.0, 1.0);
        CHECK(std::abs(saft_b0_eval(id, f, 0.7) - f.interp(0.7)) <= 1e-12);
    }
    SUBCASE("time shift reads out the shifted sample") {
        const SaftParams shift = SaftParams::time_shift(0.5);
        CHECK(std::abs(saft_b0_eval(shift, f, 1.0) - f.interp(0.5)) <= 1e-12);
    }
    SUBCASE("scaling branch") {
        const SaftParams sc = SaftParams::scaling(2.0);  // a = 1/2, d = 2
        const Complex got = saft_b0_eval(sc, f, 0.4);
        const Complex want = std::sqrt(2.0) * f.interp(0.8);
        CHECK(std::abs(got - want) <= 1e-12);
    }
    SUBCASE("outside the grid") {
        const SaftParams id = SaftParams::from_matrix(1.0, 0.0, 0.0, 1.0);
        CHECK_THROWS_AS(saft_b0_eval(id, f, 100.0), OutOfGrid);
    }
    SUBCASE("transform-path matrices are rejected") {
        CHECK_THROWS_AS(saft_b0_eval(SaftParams::fourier(), f, 0.0), DegenerateB);
    }
}

TEST_CASE("chirp modulation") {
    const SaftParams t = lambda_test();
    const GridSignal f = gaussian_signal(0.0, 1.0, 2.0, -5.0, 10.0 / 255, 256);

    SUBCASE("plain preset leaves the signal untouched") {
        const GridSignal up = chirp_mod(SaftParams::fourier(), ChirpDirection::Up, f);
        CHECK(testutil::rel_sup_error(up.samples, f.samples) == 0.0);
    }
    SUBCASE("down undoes up and the norm is preserved") {
        const GridSignal up = chirp_mod(t, ChirpDirection::Up, f);
        const GridSignal back = chirp_mod(t, ChirpDirection::Down, up);
        CHECK(testutil::rel_sup_error(back.samples, f.samples) <= 1e-15);
        CHECK(up.l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-14));
    }
    SUBCASE("worked example rate a/(2b) = 1/4") {
        const GridSignal ones = sample_grid(-2.0, 0.5, 9, [](double) {
            return Complex{1.0, 0.0};
        });
        const GridSignal up = chirp_mod(t, ChirpDirection::Up, ones);
        for (std::size_t i = 0; i < up.size(); ++i) {
            const double tt = up.t(i);
            CHECK(std::abs(up.samples[i] - std::exp(kJ * tt * tt / 4.0)) <= 1e-15);
        }
    }
}
