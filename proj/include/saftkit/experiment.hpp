// experiment.hpp - seeded batch experiment runner behind the CLI: config
// parsing/validation, deterministic trial execution, machine-readable reports
// and plot-data extraction.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "saftkit/acquisition.hpp"
#include "saftkit/params.hpp"
#include "saftkit/recovery.hpp"
#include "saftkit/series.hpp"

namespace saftkit {

enum class RecoveryMode { Bl, Tl, Gabor1, Gabor2 };

struct RandomSignalSpec {
    int K = 1;
    double delta_min = 0.0;
    double amp_min = 0.5;
    double amp_max = 2.0;
};

struct KernelConfig {
    enum class Type { Sinc, GaussianBl, TimeLimited, FourierWindow };
    Type type = Type::Sinc;
    double scale = 1.0;                 // gaussian_bl spectral width
    std::vector<Complex> coeffs;        // time_limited / fourier_window
};

struct ExperimentConfig {
    SaftParams transform;
    double T = 1.0;
    std::optional<SparseSignal> fixed_signal;
    std::optional<RandomSignalSpec> random_signal;
    KernelConfig kernel;
    double delta = 0.0;
    std::size_t n_samples = 0;
    int K = 1;
    RecoveryMode mode = RecoveryMode::Bl;
    double tolerance_t = 1e-7;  // relative to T
    double tolerance_c = 1e-6;
    int gabor_rows_fc = 0;      // omega rows for mode gabor2 (0 = window order)
    NoiseSpec noise;
    int trials = 1;
    std::uint64_t seed = 0;
};

struct ConfigIssue {
    std::string path;     // JSON-pointer style
    std::string message;
};

/// Full structural and semantic validation; returns every violation found.
std::vector<ConfigIssue> validate_config(const nlohmann::json& j);

/// Parse after validation; throws ConfigInvalid carrying the first issue.
ExperimentConfig parse_config(const nlohmann::json& j);

struct ExperimentOutputs {
    nlohmann::json report;   // deterministic: config echo, per-trial rows, aggregates
    std::string spikes_csv;  // trial,k,t_true,t_est,c_re,c_im,abs_err_t
    nlohmann::json meta;     // wall time and similar non-deterministic fields
    bool all_failed = false; // every trial ended in a stage error
};

/// Runs `config.trials` seeded trials (trial seed = base seed + index),
/// optionally across `jobs` worker threads. Results are byte-identical for
/// any job count: randomness is pre-derived per trial and outputs are
/// assembled in trial order.
ExperimentOutputs run_experiment(const ExperimentConfig& config, int jobs = 1);

/// Extract a two/three-column plot-data file from a report.
/// kind: "spikes" (t_true t_est abs_err), "spectrum" (m |h|),
/// "measurements" (n t |y| arg_y).
std::string emit_plotdata(const nlohmann::json& report, const std::string& kind);

/// Deterministic random spike train: rejection sampling until the minimum
/// circular separation clears `spec.delta_min` (at most 10000 attempts).
SparseSignal random_sparse_signal(const RandomSignalSpec& spec, double T,
                                  std::uint64_t seed);

}  // namespace saftkit
