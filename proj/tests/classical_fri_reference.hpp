// Self-contained classical FRI recovery used as an independent reference:
// least-squares coefficient fit via column-pivoted QR, forward linear
// prediction for the annihilator, Durand-Kerner root iteration, QR amplitude
// solve. Shares no code path with the library pipeline.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace testref {

using Complex = std::complex<double>;

struct ClassicalFriResult {
    std::vector<double> times;     // ascending in [0, T)
    std::vector<Complex> weights;  // matching composite weights c'
};

inline std::vector<Complex> durand_kerner(const std::vector<Complex>& monic_tail) {
    // roots of z^K + c[0] z^{K-1} + ... + c[K-1]
    const std::size_t K = monic_tail.size();
    auto eval = [&](Complex z) {
        Complex acc{1.0, 0.0};
        for (std::size_t i = 0; i < K; ++i) acc = acc * z + monic_tail[i];
        return acc;
    };
    std::vector<Complex> z(K);
    const Complex seed{0.4, 0.9};
    Complex power{1.0, 0.0};
    for (std::size_t i = 0; i < K; ++i) {
        power *= seed;
        z[i] = power;
    }
    for (int iter = 0; iter < 200; ++iter) {
        double moved = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            Complex denom{1.0, 0.0};
            for (std::size_t j = 0; j < K; ++j)
                if (j != i) denom *= z[i] - z[j];
            const Complex step = eval(z[i]) / denom;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15) break;
    }
    return z;
}

inline ClassicalFriResult classical_fri(const std::vector<Complex>& g, double T,
                                        double delta, int fc, int K) {
    const double two_pi = 2.0 * std::acos(-1.0);
    const auto n_samples = static_cast<Eigen::Index>(g.size());
    const Eigen::Index n_coeffs = 2 * fc + 1;

    Eigen::MatrixXcd V(n_samples, n_coeffs);
    Eigen::VectorXcd rhs(n_samples);
    for (Eigen::Index n = 0; n < n_samples; ++n) {
        rhs(n) = g[static_cast<std::size_t>(n)];
        for (int m = -fc; m <= fc; ++m)
            V(n, m + fc) = std::exp(Complex(0.0, two_pi * m * double(n) * delta / T));
    }
    const Eigen::VectorXcd h = V.colPivHouseholderQr().solve(rhs);

    // forward linear prediction: h[m] = -sum_k r[k] h[m-k]
    const Eigen::Index rows = n_coeffs - K;
    Eigen::MatrixXcd A(rows, K);
    Eigen::VectorXcd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index m = K + r;  // index into h, m = K .. 2fc
        b(r) = -h(m);
        for (int k = 1; k <= K; ++k) A(r, k - 1) = h(m - k);
    }
    const Eigen::VectorXcd r = A.colPivHouseholderQr().solve(b);

    std::vector<Complex> tail(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) tail[static_cast<std::size_t>(k - 1)] = r(k - 1);
    const std::vector<Complex> roots = durand_kerner(tail);

    std::vector<double> times;
    for (const auto& u : roots) {
        double angle = std::fmod(-std::arg(u), two_pi);
        if (angle < 0.0) angle += two_pi;
        double t = angle * T / two_pi;
        if (T - t < 1e-12 * T) t = 0.0;
        times.push_back(t);
    }
    std::sort(times.begin(), times.end());

    Eigen::MatrixXcd W(n_coeffs, K);
    Eigen::VectorXcd hv(n_coeffs);
    for (int m = -fc; m <= fc; ++m) {
        hv(m + fc) = h(m + fc);
        for (int k = 0; k < K; ++k)
            W(m + fc, k) = std::exp(Complex(0.0, -two_pi * m *
                                                     times[static_cast<std::size_t>(k)] / T));
    }
    const Eigen::VectorXcd w = W.colPivHouseholderQr().solve(hv);

    ClassicalFriResult out;
    out.times = times;
    out.weights.assign(w.data(), w.data() + K);
    return out;
}

}  // namespace testref
