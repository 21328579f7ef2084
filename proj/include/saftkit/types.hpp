// types.hpp - discretization carriers shared by every module.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "saftkit/errors.hpp"

namespace saftkit {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr Complex kJ{0.0, 1.0};

/// Uniformly sampled signal on t_i = t0 + i*dt.
struct GridSignal {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<Complex> samples;

    GridSignal() = default;
    GridSignal(double start, double step, std::vector<Complex> values)
        : t0(start), dt(step), samples(std::move(values)) {
        if (dt <= 0.0) throw EmptyGrid("grid step must be positive");
    }

    std::size_t size() const { return samples.size(); }
    double t(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double t_end() const {
        return samples.empty() ? t0 : t(samples.size() - 1);
    }

    /// Linear interpolation; zero outside the grid.
    Complex interp(double t_query) const {
        if (samples.empty()) return {0.0, 0.0};
        const double x = (t_query - t0) / dt;
        if (x < 0.0 || x > static_cast<double>(samples.size() - 1)) return {0.0, 0.0};
        const auto i = static_cast<std::size_t>(x);
        if (i + 1 >= samples.size()) return samples.back();
        const double w = x - static_cast<double>(i);
        return (1.0 - w) * samples[i] + w * samples[i + 1];
    }

    double l2_norm() const {
        double acc = 0.0;
        for (const auto& v : samples) acc += std::norm(v);
        return std::sqrt(acc * dt);
    }
};

/// Sampled spectrum: values[i] lives at omegas[i]; omegas strictly increasing.
struct Spectrum {
    std::vector<double> omegas;
    std::vector<Complex> values;

    Spectrum() = default;
    Spectrum(std::vector<double> w, std::vector<Complex> v)
        : omegas(std::move(w)), values(std::move(v)) {
        if (omegas.size() != values.size())
            throw GridMismatch("spectrum axis and values differ in length");
        for (std::size_t i = 1; i < omegas.size(); ++i)
            if (!(omegas[i] > omegas[i - 1]))
                throw GridMismatch("spectrum axis must be strictly increasing");
    }

    std::size_t size() const { return values.size(); }
};

/// Build a grid by sampling a callable on [t0, t0 + (n-1) dt].
inline GridSignal sample_grid(double t0, double dt, std::size_t n,
                              const std::function<Complex(double)>& fn) {
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = fn(t0 + static_cast<double>(i) * dt);
    return GridSignal(t0, dt, std::move(v));
}

/// Trapezoid weight for index i on an n-point uniform grid.
inline double trapezoid_weight(std::size_t i, std::size_t n, double dt) {
    return (i == 0 || i + 1 == n) ? 0.5 * dt : dt;
}

}  // namespace saftkit
