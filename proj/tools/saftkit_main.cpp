// saftkit - experiment runner CLI.
//
// Subcommands:
//   saftkit run <config.json> [--jobs N] [--out DIR]
//   saftkit validate <config.json>
//   saftkit plotdata <report.json> --kind spikes|spectrum|measurements [--out FILE]
//
// Exit codes: 0 success, 2 config error, 3 every trial failed with a stage
// error, 4 I/O failure. SAFTKIT_SEED overrides the config's base seed.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "saftkit/experiment.hpp"
#include "saftkit/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;
constexpr int kExitIo = 4;

nlohmann::json load_json(const std::string& path) {
    const std::string text = saftkit::io::read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw saftkit::ConfigInvalid(path + ": " + e.what());
    }
}

int cmd_validate(const std::string& config_path) {
    nlohmann::json j;
    try {
        j = load_json(config_path);
    } catch (const saftkit::IOFailure& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const saftkit::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    const auto issues = saftkit::validate_config(j);
    if (issues.empty()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const auto& issue : issues)
        std::cout << issue.path << ": " << issue.message << "\n";
    return kExitConfig;
}

int cmd_run(const std::string& config_path, int jobs, std::string out_dir) {
    nlohmann::json j;
    saftkit::ExperimentConfig cfg;
    try {
        j = load_json(config_path);
        cfg = saftkit::parse_config(j);
    } catch (const saftkit::IOFailure& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const saftkit::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }

    if (const char* env_seed = std::getenv("SAFTKIT_SEED"))
        cfg.seed = std::strtoull(env_seed, nullptr, 10);

    const saftkit::ExperimentOutputs outputs = saftkit::run_experiment(cfg, jobs);

    try {
        std::filesystem::create_directories(out_dir);
        saftkit::io::write_file(out_dir + "/report.json", outputs.report.dump(2) + "\n");
        saftkit::io::write_file(out_dir + "/spikes.csv", outputs.spikes_csv);
        saftkit::io::write_file(out_dir + "/meta.json", outputs.meta.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }

    const auto& agg = outputs.report.at("aggregates");
    std::cout << "trials " << agg.at("trials") << "  succeeded " << agg.at("succeeded")
              << "  success_rate " << agg.at("success_rate") << "  max_t_error "
              << agg.at("max_t_error") << "\n";
    return outputs.all_failed ? kExitStage : kExitOk;
}

int cmd_plotdata(const std::string& report_path, const std::string& kind,
                 const std::string& out_file) {
    try {
        const nlohmann::json report = load_json(report_path);
        const std::string data = saftkit::emit_plotdata(report, kind);
        if (out_file.empty()) {
            std::cout << data;
        } else {
            saftkit::io::write_file(out_file, data);
        }
        return kExitOk;
    } catch (const saftkit::IOFailure& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const saftkit::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"saftkit - sparse sampling experiments beyond the Fourier domain"};
    app.require_subcommand(1);

    std::string config_path;
    std::string report_path;
    std::string out_dir = "out";
    std::string out_file;
    std::string kind = "spikes";
    int jobs = 1;

    auto* run = app.add_subcommand("run", "run a configured experiment batch");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--jobs", jobs, "worker threads (default 1)");
    run->add_option("--out", out_dir, "output directory (default ./out)");

    auto* validate = app.add_subcommand("validate", "validate a config without running");
    validate->add_option("config", config_path, "experiment config (JSON)")->required();

    auto* plotdata = app.add_subcommand("plotdata", "extract plot-ready columns from a report");
    plotdata->add_option("report", report_path, "report.json produced by run")->required();
    plotdata->add_option("--kind", kind, "spikes | spectrum | measurements");
    plotdata->add_option("--out", out_file, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, jobs, out_dir);
    if (validate->parsed()) return cmd_validate(config_path);
    return cmd_plotdata(report_path, kind, out_file);
}
