#include "saftkit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "saftkit/io.hpp"
#include "saftkit/kernel.hpp"

namespace saftkit {

namespace {

using nlohmann::json;

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

double circular_gap(double x, double y, double T) {
    double d = std::abs(x - y);
    d = std::fmod(d, T);
    return std::min(d, T - d);
}

std::vector<Complex> parse_complex_list(const json& arr) {
    std::vector<Complex> out;
    for (const auto& e : arr)
        out.emplace_back(e.at("re").get<double>(), e.value("im", 0.0));
    return out;
}

json complex_list_to_json(const std::vector<Spike>& spikes) {
    json arr = json::array();
    for (const auto& s : spikes)
        arr.push_back({{"t", s.t}, {"re", s.c.real()}, {"im", s.c.imag()}});
    return arr;
}

const char* mode_name(RecoveryMode m) {
    switch (m) {
        case RecoveryMode::Bl: return "bl";
        case RecoveryMode::Tl: return "tl";
        case RecoveryMode::Gabor1: return "gabor1";
        case RecoveryMode::Gabor2: return "gabor2";
    }
    return "?";
}

}  // namespace

SparseSignal random_sparse_signal(const RandomSignalSpec& spec, double T,
                                  std::uint64_t seed) {
    SplitMix64 rng{seed ^ 0xc2b2ae3d27d4eb4full};
    const int K = spec.K;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<double> ts(static_cast<std::size_t>(K));
        for (auto& t : ts) t = rng.uniform(0.0, T);
        std::sort(ts.begin(), ts.end());
        bool ok = true;
        for (int i = 0; i < K && ok; ++i)
            for (int j = i + 1; j < K; ++j)
                if (circular_gap(ts[static_cast<std::size_t>(i)],
                                 ts[static_cast<std::size_t>(j)], T) < spec.delta_min) {
                    ok = false;
                    break;
                }
        if (!ok) continue;
        std::vector<Spike> spikes(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            const double mag = rng.uniform(spec.amp_min, spec.amp_max);
            const double phase = rng.uniform(0.0, 2.0 * kPi);
            spikes[static_cast<std::size_t>(k)] = {
                ts[static_cast<std::size_t>(k)],
                Complex(mag * std::cos(phase), mag * std::sin(phase))};
        }
        return SparseSignal(std::move(spikes), T);
    }
    throw ConfigInvalid("random signal: separation floor unreachable in 10000 attempts");
}

std::vector<ConfigIssue> validate_config(const json& j) {
    std::vector<ConfigIssue> issues;
    auto add = [&](const std::string& path, const std::string& msg) {
        issues.push_back({path, msg});
    };
    if (!j.is_object()) {
        add("/", "config must be a JSON object");
        return issues;
    }

    // transform
    SaftParams transform;
    bool transform_ok = false;
    if (!j.contains("transform")) {
        add("/transform", "missing");
    } else {
        try {
            transform = params_from_json_value(j.at("transform"));
            transform_ok = true;
        } catch (const Error& e) {
            add("/transform", e.what());
        }
    }

    // recovery mode (needed to judge other sections)
    std::string mode = "bl";
    if (!j.contains("recovery") || !j.at("recovery").is_object()) {
        add("/recovery", "missing object with fields k, mode");
    } else {
        const auto& r = j.at("recovery");
        mode = r.value("mode", "bl");
        if (mode != "bl" && mode != "tl" && mode != "gabor1" && mode != "gabor2")
            add("/recovery/mode", "must be one of bl, tl, gabor1, gabor2");
        if (!r.contains("k") || !r.at("k").is_number_integer() || r.at("k").get<int>() < 1)
            add("/recovery/k", "must be an integer >= 1");
    }
    if (transform_ok && transform.b == 0.0)
        add("/transform/b", "b = 0 is degenerate for mode " + mode +
                                " (transform path requires b != 0)");

    // signal
    double T = 0.0;
    if (!j.contains("signal") || !j.at("signal").is_object()) {
        add("/signal", "missing object");
    } else {
        const auto& s = j.at("signal");
        if (!s.contains("T") || !s.at("T").is_number() || s.at("T").get<double>() <= 0.0) {
            add("/signal/T", "must be a positive number");
        } else {
            T = s.at("T").get<double>();
        }
        const bool has_fixed = s.contains("spikes");
        const bool has_random = s.contains("random");
        if (has_fixed == has_random) {
            add("/signal", "exactly one of 'spikes' or 'random' is required");
        } else if (has_fixed) {
            const auto& spikes = s.at("spikes");
            if (!spikes.is_array() || spikes.empty()) {
                add("/signal/spikes", "must be a non-empty array");
            } else if (T > 0.0) {
                double prev = -1.0;
                for (std::size_t i = 0; i < spikes.size(); ++i) {
                    const std::string path = "/signal/spikes/" + std::to_string(i);
                    const auto& e = spikes[i];
                    if (!e.is_object() || !e.contains("t") || !e.contains("re")) {
                        add(path, "needs fields t, re (and optional im)");
                        continue;
                    }
                    const double t = e.at("t").get<double>();
                    const Complex c(e.at("re").get<double>(), e.value("im", 0.0));
                    if (t < 0.0 || t >= T) add(path + "/t", "outside [0, T)");
                    if (std::abs(c) == 0.0) add(path, "zero amplitude");
                    if (t <= prev) add(path + "/t", "locations must be strictly increasing");
                    prev = t;
                }
            }
        } else {
            const auto& r = s.at("random");
            if (!r.contains("k") || r.at("k").get<int>() < 1)
                add("/signal/random/k", "must be an integer >= 1");
            if (r.value("delta_min", 0.0) < 0.0)
                add("/signal/random/delta_min", "must be >= 0");
            if (r.value("amp_min", 0.5) <= 0.0)
                add("/signal/random/amp_min", "must be > 0");
            if (r.value("amp_max", 2.0) < r.value("amp_min", 0.5))
                add("/signal/random/amp_max", "must be >= amp_min");
            if (T > 0.0 && r.contains("k") &&
                r.value("delta_min", 0.0) * r.value("k", 1) >= T)
                add("/signal/random", "k * delta_min must be < T");
        }
    }

    // sampling
    double delta = 0.0;
    std::size_t n_samples = 0;
    if (!j.contains("sampling") || !j.at("sampling").is_object()) {
        add("/sampling", "missing object with fields delta, n");
    } else {
        const auto& s = j.at("sampling");
        if (!s.contains("delta") || s.at("delta").get<double>() <= 0.0)
            add("/sampling/delta", "must be a positive number");
        else
            delta = s.at("delta").get<double>();
        if (!s.contains("n") || s.at("n").get<long>() < 1)
            add("/sampling/n", "must be an integer >= 1");
        else
            n_samples = s.at("n").get<std::size_t>();
    }

    // kernel
    int window_order = -1;
    if (!j.contains("kernel") || !j.at("kernel").is_object()) {
        add("/kernel", "missing object with field type");
    } else {
        const auto& k = j.at("kernel");
        const std::string type = k.value("type", "");
        const bool needs_coeffs = type == "time_limited" || type == "fourier_window";
        if (type != "sinc" && type != "gaussian_bl" && !needs_coeffs) {
            add("/kernel/type",
                "must be one of sinc, gaussian_bl, time_limited, fourier_window");
        }
        if (type == "gaussian_bl" && k.value("scale", 1.0) <= 0.0)
            add("/kernel/scale", "must be > 0");
        if (needs_coeffs) {
            if (!k.contains("coeffs") || !k.at("coeffs").is_array() ||
                k.at("coeffs").empty() || k.at("coeffs").size() % 2 == 0)
                add("/kernel/coeffs", "must be an odd-length array of {re, im}");
            else
                window_order = (static_cast<int>(k.at("coeffs").size()) - 1) / 2;
        }
        if ((mode == "bl" && needs_coeffs) ||
            (mode == "tl" && type != "time_limited") ||
            ((mode == "gabor1" || mode == "gabor2") && type != "fourier_window"))
            add("/kernel/type", "kernel type '" + type + "' does not fit mode '" + mode + "'");
    }

    // condition arithmetic (C1 / C2), when enough pieces parsed
    if (T > 0.0 && delta > 0.0 && n_samples > 0 && j.contains("recovery") &&
        j.at("recovery").contains("k")) {
        const int K = j.at("recovery").value("k", 1);
        int fc = (mode == "bl") ? static_cast<int>(std::floor(T / (2.0 * delta)))
                                : window_order;
        if (fc >= 0) {
            if (fc < K)
                add("/recovery/k", "condition C2 violated: fc = " + std::to_string(fc) +
                                       " < K = " + std::to_string(K));
            if (n_samples < static_cast<std::size_t>(2 * fc + 1))
                add("/sampling/n", "condition C1 violated: N = " + std::to_string(n_samples) +
                                       " < 2 fc + 1 = " + std::to_string(2 * fc + 1));
        }
    }

    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        if (n.value("sigma", 0.0) < 0.0) add("/noise/sigma", "must be >= 0");
    }
    if (j.contains("trials") && j.at("trials").get<int>() < 1)
        add("/trials", "must be an integer >= 1");
    return issues;
}

ExperimentConfig parse_config(const json& j) {
    const auto issues = validate_config(j);
    if (!issues.empty())
        throw ConfigInvalid(issues.front().path + ": " + issues.front().message);

    ExperimentConfig cfg;
    cfg.transform = params_from_json_value(j.at("transform"));
    const auto& sig = j.at("signal");
    cfg.T = sig.at("T").get<double>();
    if (sig.contains("spikes")) {
        std::vector<Spike> spikes;
        for (const auto& e : sig.at("spikes"))
            spikes.push_back({e.at("t").get<double>(),
                              Complex(e.at("re").get<double>(), e.value("im", 0.0))});
        cfg.fixed_signal = SparseSignal(std::move(spikes), cfg.T);
    } else {
        const auto& r = sig.at("random");
        RandomSignalSpec spec;
        spec.K = r.at("k").get<int>();
        spec.delta_min = r.value("delta_min", 0.0);
        spec.amp_min = r.value("amp_min", 0.5);
        spec.amp_max = r.value("amp_max", 2.0);
        cfg.random_signal = spec;
    }

    const auto& k = j.at("kernel");
    const std::string type = k.at("type").get<std::string>();
    if (type == "sinc") cfg.kernel.type = KernelConfig::Type::Sinc;
    if (type == "gaussian_bl") {
        cfg.kernel.type = KernelConfig::Type::GaussianBl;
        cfg.kernel.scale = k.value("scale", 1.0);
    }
    if (type == "time_limited") {
        cfg.kernel.type = KernelConfig::Type::TimeLimited;
        cfg.kernel.coeffs = parse_complex_list(k.at("coeffs"));
    }
    if (type == "fourier_window") {
        cfg.kernel.type = KernelConfig::Type::FourierWindow;
        cfg.kernel.coeffs = parse_complex_list(k.at("coeffs"));
    }

    cfg.delta = j.at("sampling").at("delta").get<double>();
    cfg.n_samples = j.at("sampling").at("n").get<std::size_t>();

    const auto& r = j.at("recovery");
    cfg.K = r.at("k").get<int>();
    const std::string mode = r.value("mode", "bl");
    cfg.mode = mode == "tl" ? RecoveryMode::Tl
               : mode == "gabor1" ? RecoveryMode::Gabor1
               : mode == "gabor2" ? RecoveryMode::Gabor2
                                  : RecoveryMode::Bl;
    cfg.tolerance_t = r.value("tolerance_t", 1e-7);
    cfg.tolerance_c = r.value("tolerance_c", 1e-6);
    cfg.gabor_rows_fc = r.value("fc", 0);

    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        cfg.noise.enabled = n.value("enabled", false);
        cfg.noise.sigma = n.value("sigma", 0.0);
        cfg.noise.seed = n.value("seed", 0ull);
    }
    cfg.trials = j.value("trials", 1);
    cfg.seed = j.value("seed", 0ull);
    return cfg;
}

namespace {

struct TrialRow {
    json record;
    std::string csv_rows;
    bool failed = false;
};

TrialRow run_trial(const ExperimentConfig& cfg, int index) {
    TrialRow row;
    const std::uint64_t trial_seed = cfg.seed + static_cast<std::uint64_t>(index);
    row.record["index"] = index;
    row.record["seed"] = trial_seed;

    try {
        const SparseSignal truth =
            cfg.fixed_signal ? *cfg.fixed_signal
                             : random_sparse_signal(*cfg.random_signal, cfg.T, trial_seed);
        NoiseSpec noise = cfg.noise;
        noise.seed = cfg.noise.seed + static_cast<std::uint64_t>(index);
        const bool noiseless = !noise.enabled;

        RecoveryResult result;
        SampleSet samples;
        GaborMeasurements plane;
        switch (cfg.mode) {
            case RecoveryMode::Bl: {
                KernelSpec kernel = SincKernel{cfg.delta};
                if (cfg.kernel.type == KernelConfig::Type::GaussianBl) {
                    const double scale = cfg.kernel.scale;
                    kernel = ArbitraryBandlimitedKernel{
                        [scale](double u) {
                            return Complex(std::exp(-0.5 * u * u * scale * scale), 0.0);
                        },
                        cfg.delta};
                }
                samples = simulate_bl_measurements(truth, cfg.transform, kernel, cfg.delta,
                                                   cfg.n_samples, noise);
                result = recover_sparse_bl(samples, cfg.transform, cfg.K, cfg.T, kernel,
                                           noiseless);
                break;
            }
            case RecoveryMode::Tl: {
                TimeLimitedKernel kernel{cfg.kernel.coeffs, cfg.T};
                samples = simulate_tl_measurements(truth, cfg.transform, kernel)
                              .sample(cfg.delta, cfg.n_samples, noise);
                result = recover_sparse_bl(samples, cfg.transform, cfg.K, cfg.T,
                                           KernelSpec{kernel}, noiseless);
                break;
            }
            case RecoveryMode::Gabor1: {
                plane = simulate_gabor_measurements(truth, cfg.kernel.coeffs, cfg.transform,
                                                    cfg.delta, cfg.n_samples, 1, noise);
                const double omega0 = 2.0 * kPi * cfg.transform.b / cfg.T;
                std::size_t iw = 0;
                for (std::size_t i = 0; i < plane.omegas.size(); ++i)
                    if (std::abs(plane.omegas[i] - omega0) <
                        std::abs(plane.omegas[iw] - omega0))
                        iw = i;
                std::vector<Complex> fixed_row(plane.taus.size());
                for (std::size_t n = 0; n < plane.taus.size(); ++n)
                    fixed_row[n] = plane.at(n, iw);
                result = recover_gabor_case1(fixed_row, cfg.transform, cfg.K, cfg.T,
                                             cfg.kernel.coeffs, cfg.delta, noiseless);
                break;
            }
            case RecoveryMode::Gabor2: {
                const int order = (static_cast<int>(cfg.kernel.coeffs.size()) - 1) / 2;
                const int rows = cfg.gabor_rows_fc > 0 ? cfg.gabor_rows_fc : order;
                plane = simulate_gabor_measurements(truth, cfg.kernel.coeffs, cfg.transform,
                                                    cfg.delta, cfg.n_samples, rows, noise);
                result = recover_gabor_case2(plane, cfg.transform, cfg.K, cfg.T,
                                             cfg.kernel.coeffs, noiseless);
                break;
            }
        }

        // Error metrics against the ground truth (matched by sorted order).
        double max_t_err = 0.0;
        double max_c_rel = 0.0;
        const std::size_t matched = std::min(truth.spikes.size(), result.spikes_est.size());
        for (std::size_t k = 0; k < matched; ++k) {
            max_t_err = std::max(max_t_err,
                                 std::abs(result.spikes_est[k].t - truth.spikes[k].t));
            max_c_rel = std::max(max_c_rel,
                                 std::abs(result.spikes_est[k].c - truth.spikes[k].c) /
                                     std::abs(truth.spikes[k].c));
        }
        const bool success = result.spikes_est.size() == truth.spikes.size() &&
                             max_t_err <= cfg.tolerance_t * cfg.T &&
                             max_c_rel <= cfg.tolerance_c;

        row.record["truth"] = complex_list_to_json(truth.spikes);
        row.record["estimate"] = complex_list_to_json(result.spikes_est);
        row.record["max_t_error"] = max_t_err;
        row.record["max_c_rel_error"] = max_c_rel;
        row.record["residual_coeffs"] = result.residual_coeffs;
        row.record["residual_samples"] = result.residual_samples;
        row.record["cond_vandermonde"] = result.cond_vandermonde;
        row.record["delta_min"] = result.delta_min;
        row.record["conditions"] = {{"fc", result.conditions.fc},
                                    {"c1", result.conditions.c1},
                                    {"c2", result.conditions.c2},
                                    {"fri", result.conditions.fri}};
        row.record["success"] = success;

        if (index == 0) {
            if (cfg.mode == RecoveryMode::Bl || cfg.mode == RecoveryMode::Tl) {
                json meas = json::array();
                for (std::size_t n = 0; n < samples.size(); ++n)
                    meas.push_back({{"n", n},
                                    {"t", static_cast<double>(n) * samples.delta},
                                    {"re", samples.values[n].real()},
                                    {"im", samples.values[n].imag()}});
                row.record["measurements"] = meas;
            }
            // Spectrum preview: coefficient block of the estimated spikes.
            try {
                SparseSignal est(result.spikes_est, cfg.T);
                const auto h = sparse_safs(est, cfg.transform, result.conditions.fc);
                json spec = json::array();
                for (int m = -h.fc; m <= h.fc; ++m)
                    spec.push_back({{"m", m}, {"re", h.at(m).real()}, {"im", h.at(m).imag()}});
                row.record["spectrum"] = spec;
            } catch (const Error&) {
            }
        }

        for (std::size_t k = 0; k < matched; ++k) {
            row.csv_rows += std::to_string(index) + ',' + std::to_string(k) + ',' +
                            io::format_double(truth.spikes[k].t) + ',' +
                            io::format_double(result.spikes_est[k].t) + ',' +
                            io::format_double(result.spikes_est[k].c.real()) + ',' +
                            io::format_double(result.spikes_est[k].c.imag()) + ',' +
                            io::format_double(std::abs(result.spikes_est[k].t -
                                                       truth.spikes[k].t)) +
                            '\n';
        }
    } catch (const Error& e) {
        row.failed = true;
        row.record["error"] = e.what();
        row.record["error_name"] = e.name();
        row.record["error_stage"] = e.stage();
        row.record["success"] = false;
    }
    return row;
}

}  // namespace

ExperimentOutputs run_experiment(const ExperimentConfig& cfg, int jobs) {
    const auto t_start = std::chrono::steady_clock::now();
    const int n_trials = cfg.trials;
    std::vector<TrialRow> rows(static_cast<std::size_t>(n_trials));

    const int workers = std::max(1, std::min(jobs, n_trials));
    if (workers == 1) {
        for (int i = 0; i < n_trials; ++i)
            rows[static_cast<std::size_t>(i)] = run_trial(cfg, i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n_trials; i = next.fetch_add(1))
                    rows[static_cast<std::size_t>(i)] = run_trial(cfg, i);
            });
        }
        for (auto& th : pool) th.join();
    }

    json trials = json::array();
    std::string csv = "trial,k,t_true,t_est,c_re,c_im,abs_err_t\n";
    int succeeded = 0;
    int failed = 0;
    double max_t_err = 0.0;
    double max_c_rel = 0.0;
    for (const auto& row : rows) {
        trials.push_back(row.record);
        csv += row.csv_rows;
        if (row.failed) {
            ++failed;
        } else {
            if (row.record.at("success").get<bool>()) ++succeeded;
            max_t_err = std::max(max_t_err, row.record.at("max_t_error").get<double>());
            max_c_rel = std::max(max_c_rel, row.record.at("max_c_rel_error").get<double>());
        }
    }

    ExperimentOutputs out;
    out.all_failed = (failed == n_trials);
    out.report["version"] = "saftkit 0.1.0";
    out.report["config"] = {
        {"transform", nlohmann::json::parse(params_to_json(cfg.transform))},
        {"T", cfg.T},
        {"delta", cfg.delta},
        {"n", cfg.n_samples},
        {"k", cfg.K},
        {"mode", mode_name(cfg.mode)},
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"tolerance_t", cfg.tolerance_t},
        {"tolerance_c", cfg.tolerance_c},
        {"noise", {{"enabled", cfg.noise.enabled}, {"sigma", cfg.noise.sigma},
                   {"seed", cfg.noise.seed}}}};
    out.report["trials"] = trials;
    out.report["aggregates"] = {
        {"trials", n_trials},
        {"succeeded", succeeded},
        {"failed", failed},
        {"success_rate", n_trials > 0 ? static_cast<double>(succeeded) / n_trials : 0.0},
        {"max_t_error", max_t_err},
        {"max_c_rel_error", max_c_rel}};
    out.spikes_csv = std::move(csv);

    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t_start)
                             .count();
    out.meta["wall_time_ms"] = elapsed;
    out.meta["jobs"] = workers;
    return out;
}

std::string emit_plotdata(const json& report, const std::string& kind) {
    if (!report.contains("trials") || report.at("trials").empty())
        throw ConfigInvalid("report has no trials");
    const auto& first = report.at("trials").at(0);

    std::string out;
    if (kind == "spikes") {
        out = "# t_true t_est abs_err\n";
        for (const auto& trial : report.at("trials")) {
            if (!trial.contains("truth") || !trial.contains("estimate")) continue;
            const auto& truth = trial.at("truth");
            const auto& est = trial.at("estimate");
            const std::size_t n = std::min(truth.size(), est.size());
            for (std::size_t k = 0; k < n; ++k) {
                const double tt = truth.at(k).at("t").get<double>();
                const double te = est.at(k).at("t").get<double>();
                out += io::format_double(tt) + ' ' + io::format_double(te) + ' ' +
                       io::format_double(std::abs(tt - te)) + '\n';
            }
        }
    } else if (kind == "spectrum") {
        if (!first.contains("spectrum"))
            throw ConfigInvalid("report carries no spectrum preview");
        out = "# m abs_h\n";
        for (const auto& e : first.at("spectrum")) {
            const Complex h(e.at("re").get<double>(), e.at("im").get<double>());
            out += std::to_string(e.at("m").get<int>()) + ' ' +
                   io::format_double(std::abs(h)) + '\n';
        }
    } else if (kind == "measurements") {
        if (!first.contains("measurements"))
            throw ConfigInvalid("report carries no measurement preview");
        out = "# n t abs_y arg_y\n";
        for (const auto& e : first.at("measurements")) {
            const Complex y(e.at("re").get<double>(), e.at("im").get<double>());
            out += std::to_string(e.at("n").get<std::size_t>()) + ' ' +
                   io::format_double(e.at("t").get<double>()) + ' ' +
                   io::format_double(std::abs(y)) + ' ' +
                   io::format_double(std::arg(y)) + '\n';
        }
    } else {
        throw ConfigInvalid("unknown plotdata kind '" + kind + "'");
    }
    return out;
}

}  // namespace saftkit
