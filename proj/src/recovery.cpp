#include "saftkit/recovery.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "saftkit/kernel.hpp"

namespace saftkit {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double circular_distance(double x, double y, double T) {
    double d = std::abs(x - y);
    d = std::fmod(d, T);
    return std::min(d, T - d);
}

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (Error& e) {
        e.set_stage(stage);
        throw;
    }
}

/// Least-squares weights w_k for values[m] = sum_k w_k exp(-j 2 pi m t_k / T),
/// m = -fc..fc. Throws RankDeficient when two nodes collide.
AmplitudeSolution fit_node_weights(const std::vector<double>& times,
                                   const FourierCoeffs& values) {
    const auto K = static_cast<Eigen::Index>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = i + 1; j < times.size(); ++j)
            if (circular_distance(times[i], times[j], values.T) < 1e-9 * values.T)
                throw RankDeficient("two spike locations coincide within node resolution");

    const auto rows = static_cast<Eigen::Index>(values.values.size());
    MatrixXcd A(rows, K);
    VectorXcd rhs(rows);
    for (int m = -values.fc; m <= values.fc; ++m) {
        const auto r = static_cast<Eigen::Index>(m + values.fc);
        rhs(r) = values.at(m);
        for (Eigen::Index k = 0; k < K; ++k)
            A(r, k) = std::exp(-kJ * 2.0 * kPi * static_cast<double>(m) *
                               times[static_cast<std::size_t>(k)] / values.T);
    }
    Eigen::JacobiSVD<MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(K - 1) < 1e-12 * svd.singularValues()(0))
        throw RankDeficient("node system is numerically rank deficient");
    const VectorXcd w = svd.solve(rhs);

    AmplitudeSolution out;
    out.amplitudes.assign(w.data(), w.data() + K);
    const double denom = rhs.norm();
    out.residual = denom > 0.0 ? (A * w - rhs).norm() / denom : 0.0;
    return out;
}

FourierCoeffs conjugated(const FourierCoeffs& c) {
    FourierCoeffs out(c.fc, c.T, c.b);
    for (int m = -c.fc; m <= c.fc; ++m) out.at(m) = std::conj(c.at(m));
    return out;
}

double weighted_circular_mean_time(const std::vector<double>& times,
                                   const std::vector<double>& weights, double T) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < times.size(); ++i)
        acc += weights[i] * std::exp(kJ * 2.0 * kPi * times[i] / T);
    double t = std::arg(acc) * T / (2.0 * kPi);
    if (t < 0.0) t += T;
    if (T - t < 1e-12 * T) t = 0.0;
    return t;
}

}  // namespace

std::vector<Complex> demodulate(const SampleSet& samples, const SaftParams& params) {
    params.require_transform_path("demodulate");
    const double scale = 1.0 / std::sqrt(samples.delta);
    std::vector<Complex> g(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const double t = static_cast<double>(n) * samples.delta;
        g[n] = samples.values[n] * scale * std::exp(kJ * q_poly(params, t));
    }
    return g;
}

VandermondeSolution vandermonde_solve(const std::vector<Complex>& g, double T,
                                      double delta, int fc, bool conjugate_nodes) {
    const auto n_samples = g.size();
    const auto n_coeffs = static_cast<std::size_t>(2 * fc + 1);
    if (n_samples < n_coeffs)
        throw UnderdeterminedSystem("need N >= 2 fc + 1: N = " + std::to_string(n_samples) +
                                    ", fc = " + std::to_string(fc));

    const double sign = conjugate_nodes ? -1.0 : 1.0;
    MatrixXcd V(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(n_coeffs));
    VectorXcd rhs(static_cast<Eigen::Index>(n_samples));
    for (std::size_t n = 0; n < n_samples; ++n) {
        rhs(static_cast<Eigen::Index>(n)) = g[n];
        const double t = static_cast<double>(n) * delta;
        for (int m = -fc; m <= fc; ++m)
            V(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m + fc)) =
                std::exp(sign * kJ * 2.0 * kPi * static_cast<double>(m) * t / T);
    }

    Eigen::JacobiSVD<MatrixXcd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double smallest = sigma(sigma.size() - 1);
    if (smallest < 1e-10 * sigma(0))
        throw RankDeficient("Vandermonde system numerical rank below 2 fc + 1 "
                            "(repeated nodes?)");

    const VectorXcd h = svd.solve(rhs);
    VandermondeSolution out;
    out.coeffs = FourierCoeffs(fc, T, 0.0);
    for (int m = -fc; m <= fc; ++m)
        out.coeffs.at(m) = h(static_cast<Eigen::Index>(m + fc));
    out.condition_number = sigma(0) / smallest;
    return out;
}

FourierCoeffs deconvolve_kernel(const FourierCoeffs& raw,
                                const std::vector<Complex>& gains) {
    if (gains.size() != raw.values.size())
        throw GridMismatch("deconvolve_kernel: gain vector length mismatch");
    FourierCoeffs out = raw;
    for (int m = -raw.fc; m <= raw.fc; ++m) {
        const Complex g = gains[static_cast<std::size_t>(m + raw.fc)];
        if (std::abs(g) <= 1e-12)
            throw SingularGain("zero kernel gain at harmonic m = " + std::to_string(m));
        out.at(m) = raw.at(m) / g;
    }
    return out;
}

AnnihilatingFilter annihilate(const FourierCoeffs& coeffs, int K) {
    if (K < 1) throw ConfigInvalid("annihilate: K must be >= 1");
    if (coeffs.fc < K)
        throw SparsityViolation("annihilate needs fc >= K: fc = " + std::to_string(coeffs.fc) +
                                ", K = " + std::to_string(K));

    const int rows = 2 * coeffs.fc + 1 - K;
    MatrixXcd A(rows, K + 1);
    for (int r = 0; r < rows; ++r) {
        const int m = -coeffs.fc + K + r;
        for (int k = 0; k <= K; ++k) A(r, k) = coeffs.at(m - k);
    }

    Eigen::JacobiSVD<MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double largest = sigma(0);
    const double smallest = sigma(K);
    if (K >= 1 && sigma(K - 1) - smallest <= 1e-8 * largest)
        throw IllConditioned("annihilating nullspace is ambiguous "
                             "(two smallest singular values coincide)");

    VectorXcd r = svd.matrixV().col(K);
    if (std::abs(r(0)) < 1e-12 * r.norm())
        throw IllConditioned("annihilating filter has a vanishing leading tap");
    r /= r(0);

    AnnihilatingFilter filter;
    filter.K = K;
    filter.taps.assign(r.data(), r.data() + K + 1);
    filter.nullspace_gap = largest > 0.0 ? smallest / largest : 0.0;
    return filter;
}

RootReport roots_to_times(const AnnihilatingFilter& filter, double T, bool noiseless) {
    const int K = filter.K;
    std::vector<Complex> roots;
    if (K == 1) {
        roots.push_back(-filter.taps[1]);
    } else {
        // Companion matrix of z^K + r[1] z^{K-1} + ... + r[K].
        MatrixXcd companion = MatrixXcd::Zero(K, K);
        for (int i = 1; i < K; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < K; ++i)
            companion(i, K - 1) = -filter.taps[static_cast<std::size_t>(K - i)];
        Eigen::ComplexEigenSolver<MatrixXcd> es(companion, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success)
            throw IllConditioned("companion eigenvalue computation failed");
        roots.assign(es.eigenvalues().data(), es.eigenvalues().data() + K);
    }

    RootReport report;
    std::vector<std::pair<double, double>> entries;  // (time, radius error)
    for (const auto& u : roots) {
        const double radius_err = std::abs(1.0 - std::abs(u));
        if (noiseless && radius_err > 1e-3)
            throw RootOffCircle("root magnitude " + std::to_string(std::abs(u)) +
                                " is off the unit circle");
        double angle = std::fmod(-std::arg(u), 2.0 * kPi);
        if (angle < 0.0) angle += 2.0 * kPi;
        double t = angle * T / (2.0 * kPi);
        if (T - t < 1e-12 * T) t = 0.0;
        entries.emplace_back(t, radius_err);
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [t, err] : entries) {
        report.times.push_back(t);
        report.radius_error.push_back(err);
    }
    return report;
}

AmplitudeSolution estimate_amplitudes(const std::vector<double>& times,
                                      const FourierCoeffs& coeffs,
                                      const SaftParams& params) {
    params.require_transform_path("estimate_amplitudes");
    AmplitudeSolution sol = fit_node_weights(times, coeffs);
    for (std::size_t k = 0; k < times.size(); ++k)
        sol.amplitudes[k] *= std::exp(-kJ * q_poly(params, times[k]));
    return sol;
}

ConditionReport check_conditions(std::size_t n_samples, double T, double delta,
                                 int K, std::optional<int> fc_opt) {
    if (T <= 0.0 || delta <= 0.0 || K < 1)
        throw ConfigInvalid("check_conditions: arguments must be positive");
    ConditionReport rep;
    rep.fc = fc_opt.value_or(static_cast<int>(std::floor(T / (2.0 * delta))));
    const auto n = static_cast<double>(n_samples);
    rep.slack_c1 = n - static_cast<double>(2 * rep.fc + 1);
    rep.slack_c2 = static_cast<double>(rep.fc - K);
    rep.slack_fri = n - (T / delta + 1.0);
    rep.c1 = rep.slack_c1 >= 0.0;
    rep.c2 = rep.slack_c2 >= 0.0;
    rep.fri = rep.slack_fri >= -1e-12;
    return rep;
}

SeparationReport min_separation(const std::vector<double>& times, double T,
                                std::optional<int> fc) {
    if (times.size() < 2) throw SingleSpike("min_separation needs at least two spikes");
    SeparationReport rep;
    rep.delta_min = T;
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = i + 1; j < times.size(); ++j)
            rep.delta_min = std::min(rep.delta_min, circular_distance(times[i], times[j], T));
    if (fc) rep.separation_criterion = rep.delta_min * static_cast<double>(*fc) >= 2.0;
    return rep;
}

namespace {

RecoveryResult assemble_result(const std::vector<double>& times,
                               const AmplitudeSolution& amplitudes,
                               const ConditionReport& conditions, double T,
                               double cond_vandermonde) {
    RecoveryResult result;
    result.conditions = conditions;
    result.cond_vandermonde = cond_vandermonde;
    result.residual_coeffs = amplitudes.residual;
    for (std::size_t k = 0; k < times.size(); ++k)
        result.spikes_est.push_back({times[k], amplitudes.amplitudes[k]});
    std::sort(result.spikes_est.begin(), result.spikes_est.end(),
              [](const Spike& a, const Spike& b) { return a.t < b.t; });
    if (times.size() >= 2) {
        const auto sep = min_separation(times, T, conditions.fc);
        result.delta_min = sep.delta_min;
        result.separation_flag = sep.separation_criterion;
    } else {
        result.delta_min = T;
        result.separation_flag = T * static_cast<double>(conditions.fc) >= 2.0;
    }
    return result;
}

double relative_sample_residual(const std::vector<Complex>& observed,
                                const std::vector<Complex>& refit) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        num += std::norm(observed[i] - refit[i]);
        den += std::norm(observed[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

RecoveryResult recover_sparse_bl(const SampleSet& samples, const SaftParams& params,
                                 int K, double T, const KernelSpec& kernel,
                                 bool noiseless) {
    params.require_transform_path("recover_sparse_bl");

    int fc = 0;
    if (const auto* tl = std::get_if<TimeLimitedKernel>(&kernel))
        fc = tl->order();
    else
        fc = static_cast<int>(std::floor(T / (2.0 * samples.delta)));

    const ConditionReport conditions =
        check_conditions(samples.size(), T, samples.delta, K, fc);

    const auto g = run_stage("demodulate", [&] { return demodulate(samples, params); });
    auto solution = run_stage("vandermonde_solve", [&] {
        return vandermonde_solve(g, T, samples.delta, fc);
    });
    solution.coeffs.b = params.b;
    const auto gains = run_stage("measurement_gains", [&] {
        return measurement_gains(kernel, params, T, samples.delta, fc);
    });
    const auto coeffs = run_stage("deconvolve_kernel", [&] {
        return deconvolve_kernel(solution.coeffs, gains);
    });
    const auto filter = run_stage("annihilate", [&] { return annihilate(coeffs, K); });
    const auto roots = run_stage("roots_to_times", [&] {
        return roots_to_times(filter, T, noiseless);
    });
    const auto amplitudes = run_stage("estimate_amplitudes", [&] {
        return estimate_amplitudes(roots.times, coeffs, params);
    });

    RecoveryResult result =
        assemble_result(roots.times, amplitudes, conditions, T, solution.condition_number);

    // Refit residual on the observed samples.
    std::vector<Spike> est = result.spikes_est;
    const bool valid_signal = std::all_of(est.begin(), est.end(), [&](const Spike& s) {
        return s.t >= 0.0 && s.t < T && std::abs(s.c) > 0.0;
    });
    if (valid_signal) {
        try {
            SparseSignal refit_signal(est, T);
            SampleSet refit = std::holds_alternative<TimeLimitedKernel>(kernel)
                                  ? simulate_tl_measurements(refit_signal, params,
                                                             std::get<TimeLimitedKernel>(kernel))
                                        .sample(samples.delta, samples.size())
                                  : simulate_bl_measurements(refit_signal, params, kernel,
                                                             samples.delta, samples.size());
            result.residual_samples = relative_sample_residual(samples.values, refit.values);
        } catch (const Error&) {
            result.residual_samples = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return result;
}

RecoveryResult recover_gabor_case1(const std::vector<Complex>& row,
                                   const SaftParams& params, int K, double T,
                                   const std::vector<Complex>& window_coeffs,
                                   double delta, bool noiseless) {
    params.require_transform_path("recover_gabor_case1");
    if (window_coeffs.empty() || window_coeffs.size() % 2 == 0)
        throw ConfigInvalid("window coefficients must have odd length");
    const int M = (static_cast<int>(window_coeffs.size()) - 1) / 2;
    const ConditionReport conditions = check_conditions(row.size(), T, delta, K, M);
    const double omega0 = 2.0 * kPi * params.b / T;
    const Complex constant = kernel_constant(params);

    // Undo the constant and the spectral factor of the fixed row.
    std::vector<Complex> y(row.size());
    const Complex phi = phi_factor(params, omega0);
    for (std::size_t n = 0; n < row.size(); ++n) y[n] = row[n] * phi / constant;

    // Row model: y(n) = sum_{|m|<=M} psi_hat[m] beta[m] e^{-j 2 pi m n Delta / T}.
    auto solution = run_stage("vandermonde_solve", [&] {
        return vandermonde_solve(y, T, delta, M, /*conjugate_nodes=*/true);
    });
    solution.coeffs.b = params.b;
    const auto beta = run_stage("deconvolve_kernel", [&] {
        return deconvolve_kernel(solution.coeffs, window_coeffs);
    });

    // beta[m] = sum_k check_c_k e^{+j 2 pi m t_k / T}; conjugate to reach the
    // standard node convention.
    const FourierCoeffs beta_conj = conjugated(beta);
    const auto filter = run_stage("annihilate", [&] { return annihilate(beta_conj, K); });
    const auto roots = run_stage("roots_to_times", [&] {
        return roots_to_times(filter, T, noiseless);
    });
    const auto fit = run_stage("estimate_amplitudes", [&] {
        return fit_node_weights(roots.times, beta_conj);
    });

    AmplitudeSolution amplitudes;
    amplitudes.residual = fit.residual;
    amplitudes.amplitudes.resize(fit.amplitudes.size());
    for (std::size_t k = 0; k < fit.amplitudes.size(); ++k) {
        const Complex check_c = std::conj(fit.amplitudes[k]);
        // check_c = c e^{jQ(t)} e^{-j w0 t / b}; unwrap both factors.
        amplitudes.amplitudes[k] = check_c *
                                   std::exp(-kJ * q_poly(params, roots.times[k])) *
                                   std::exp(kJ * 2.0 * kPi * roots.times[k] / T);
    }

    RecoveryResult result =
        assemble_result(roots.times, amplitudes, conditions, T, solution.condition_number);

    try {
        SparseSignal est(result.spikes_est, T);
        const auto refit =
            simulate_gabor_measurements(est, window_coeffs, params, delta, row.size(), 1);
        // Locate the omega = omega0 row (axis order depends on sign of b).
        std::size_t iw = 0;
        for (std::size_t i = 0; i < refit.omegas.size(); ++i)
            if (std::abs(refit.omegas[i] - omega0) < std::abs(refit.omegas[iw] - omega0))
                iw = i;
        std::vector<Complex> refit_row(row.size());
        for (std::size_t n = 0; n < row.size(); ++n) refit_row[n] = refit.at(n, iw);
        result.residual_samples = relative_sample_residual(row, refit_row);
    } catch (const Error&) {
        result.residual_samples = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

RecoveryResult recover_gabor_case2(const GaborMeasurements& v, const SaftParams& params,
                                   int K, double T,
                                   const std::vector<Complex>& window_coeffs,
                                   bool noiseless) {
    params.require_transform_path("recover_gabor_case2");
    if (window_coeffs.empty() || window_coeffs.size() % 2 == 0)
        throw ConfigInvalid("window coefficients must have odd length");
    if (v.taus.size() < 2 || v.omegas.empty() || v.omegas.size() % 2 == 0)
        throw ConfigInvalid("case 2 needs tau rows and an odd number of omega rows");

    const int M = (static_cast<int>(window_coeffs.size()) - 1) / 2;
    const int fc = (static_cast<int>(v.omegas.size()) - 1) / 2;
    const double delta = v.taus[1] - v.taus[0];
    const ConditionReport conditions = check_conditions(v.taus.size(), T, delta, K, M);
    const double omega0 = 2.0 * kPi * params.b / T;
    const Complex constant = kernel_constant(params);

    // Per-row solve and annihilation; rows vote on the spike locations.
    std::vector<std::vector<double>> row_times;
    std::vector<double> row_weights;
    double cond_worst = 0.0;
    // Lattice accumulation rho[nu], nu = m - l.
    const int nu_max = M + fc;
    std::vector<Complex> lattice_sum(static_cast<std::size_t>(2 * nu_max + 1), Complex{});
    std::vector<double> lattice_count(static_cast<std::size_t>(2 * nu_max + 1), 0.0);

    for (int l = -fc; l <= fc; ++l) {
        const std::size_t iw = static_cast<std::size_t>(
            omega0 > 0.0 ? l + fc : fc - l);  // omega axis may be reversed for b < 0
        std::vector<Complex> y(v.taus.size());
        const Complex phi = phi_factor(params, omega0 * static_cast<double>(l));
        for (std::size_t n = 0; n < v.taus.size(); ++n)
            y[n] = v.at(n, iw) * phi / constant;

        const auto solution = run_stage("vandermonde_solve", [&] {
            return vandermonde_solve(y, T, delta, M, /*conjugate_nodes=*/true);
        });
        cond_worst = std::max(cond_worst, solution.condition_number);
        const auto row = run_stage("deconvolve_kernel", [&] {
            return deconvolve_kernel(solution.coeffs, window_coeffs);
        });
        for (int m = -M; m <= M; ++m) {
            const int nu = m - l;
            lattice_sum[static_cast<std::size_t>(nu + nu_max)] += row.at(m);
            lattice_count[static_cast<std::size_t>(nu + nu_max)] += 1.0;
        }

        const FourierCoeffs row_conj = conjugated(row);
        const auto filter = run_stage("annihilate", [&] { return annihilate(row_conj, K); });
        const auto roots = run_stage("roots_to_times", [&] {
            return roots_to_times(filter, T, noiseless);
        });
        // Residual-weighted vote; exact rows dominate noisy ones.
        double conv_residual = 0.0;
        for (int m = -M + K; m <= M; ++m) {
            Complex acc{0.0, 0.0};
            for (int k = 0; k <= K; ++k)
                acc += filter.taps[static_cast<std::size_t>(k)] * row_conj.at(m - k);
            conv_residual = std::max(conv_residual, std::abs(acc));
        }
        row_times.push_back(roots.times);
        row_weights.push_back(1.0 / (1e-14 + conv_residual));
    }

    // Aggregate per spike index across rows (each row's list is sorted).
    std::vector<double> times(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        std::vector<double> votes;
        for (const auto& rt : row_times) votes.push_back(rt[static_cast<std::size_t>(k)]);
        times[static_cast<std::size_t>(k)] =
            weighted_circular_mean_time(votes, row_weights, T);
    }
    std::sort(times.begin(), times.end());

    // Amplitudes from the aggregated lattice sequence
    // rho[nu] = sum_k c'_k e^{+j 2 pi nu t_k / T}.
    FourierCoeffs rho(nu_max, T, params.b);
    for (int nu = -nu_max; nu <= nu_max; ++nu) {
        const auto i = static_cast<std::size_t>(nu + nu_max);
        rho.at(nu) = lattice_sum[i] / lattice_count[i];
    }
    const FourierCoeffs rho_conj = conjugated(rho);
    const auto fit = run_stage("estimate_amplitudes", [&] {
        return fit_node_weights(times, rho_conj);
    });

    AmplitudeSolution amplitudes;
    amplitudes.residual = fit.residual;
    for (std::size_t k = 0; k < times.size(); ++k)
        amplitudes.amplitudes.push_back(std::conj(fit.amplitudes[k]) *
                                        std::exp(-kJ * q_poly(params, times[k])));

    RecoveryResult result = assemble_result(times, amplitudes, conditions, T, cond_worst);

    try {
        SparseSignal est(result.spikes_est, T);
        const auto refit = simulate_gabor_measurements(est, window_coeffs, params, delta,
                                                       v.taus.size(), fc);
        result.residual_samples = relative_sample_residual(v.values, refit.values);
    } catch (const Error&) {
        result.residual_samples = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace saftkit
