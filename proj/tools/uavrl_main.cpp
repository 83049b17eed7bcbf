#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "uavrl/baselines.hpp"
#include "uavrl/config.hpp"
#include "uavrl/errors.hpp"
#include "uavrl/harness.hpp"
#include "uavrl/kernels.hpp"

namespace {

namespace fs = std::filesystem;
using uavrl::harness::ExperimentConfig;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg = ExperimentConfig::load(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.out_dir) cfg.out_dir = *opts.out_dir;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&opts](std::uint64_t s) { opts.seed = s; }, "override the master seed");
    cmd->add_option_function<std::string>(
        "--out", [&opts](const std::string& d) { opts.out_dir = d; },
        "override the output directory");
}

fs::path out_dir_of(const ExperimentConfig& cfg) {
    if (const char* env_dir = std::getenv("UAVRL_OUT_DIR"); env_dir && *env_dir)
        return fs::path(env_dir);
    return fs::path(cfg.out_dir);
}

int run(int argc, char** argv) {
    CLI::App app{"multi-UAV coverage simulator with an embedded "
                 "deterministic-policy-gradient training stack"};
    app.require_subcommand(1);

    CommonOpts train_opts;
    std::string lineup = "full";
    std::string resume_path;
    auto* train_cmd = app.add_subcommand(
        "train", "train a control policy and write episodes.csv + checkpoint");
    add_common(train_cmd, train_opts);
    train_cmd->add_option("--lineup", lineup,
                          "energy lineup: full | one-quits | minus-one-full, "
                          "optionally '<count>-' prefixed (e.g. 5-one-quits)");
    train_cmd->add_option("--resume", resume_path, "resume from an existing checkpoint");

    CommonOpts eval_opts;
    std::string eval_checkpoint;
    std::optional<std::size_t> eval_episodes;
    auto* eval_cmd = app.add_subcommand(
        "eval", "greedy rollouts of a trained policy; writes eval_epochs.csv and "
                "energy_trace.csv");
    add_common(eval_cmd, eval_opts);
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint to evaluate")
        ->required();
    eval_cmd->add_option_function<std::size_t>(
        "--episodes", [&eval_episodes](std::size_t n) { eval_episodes = n; },
        "number of evaluation episodes (default: config eval.episodes)");

    CommonOpts compare_opts;
    std::string compare_checkpoint;
    auto* compare_cmd = app.add_subcommand(
        "compare", "proactive vs passive-reaction rollout around the quit event; "
                   "writes compare_report.json");
    add_common(compare_cmd, compare_opts);
    compare_cmd->add_option("--checkpoint", compare_checkpoint, "checkpoint to compare")
        ->required();

    CommonOpts oracle_opts;
    std::optional<std::size_t> oracle_k;
    std::optional<double> oracle_grid;
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "brute-force static placement search; writes oracle.json");
    add_common(oracle_cmd, oracle_opts);
    oracle_cmd->add_option_function<std::size_t>(
        "--k", [&oracle_k](std::size_t k) { oracle_k = k; },
        "UAV count to place (default: config n_uavs)");
    oracle_cmd->add_option_function<double>(
        "--grid", [&oracle_grid](double g) { oracle_grid = g; },
        "grid spacing in units (default: config oracle.grid_units)");

    CommonOpts inspect_opts;
    auto* inspect_cmd = app.add_subcommand(
        "inspect-config", "validate a config and print the fully resolved form");
    add_common(inspect_cmd, inspect_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (train_cmd->parsed()) {
        ExperimentConfig cfg = load_config(train_opts);
        const std::uint64_t total = cfg.train.max_episodes;
        auto progress = [total](const uavrl::ddpg::EpisodeRecord& r) {
            if (r.episode % 100 == 0 || r.episode == total)
                std::cout << "episode " << r.episode << "/" << total
                          << "  avg=" << r.moving_avg << "  sigma=" << r.sigma_current
                          << std::endl;
        };
        uavrl::harness::TrainResult result;
        if (!resume_path.empty()) {
            if (train_cmd->count("--lineup"))
                uavrl::harness::apply_lineup(cfg, lineup);
            result = uavrl::harness::resume_train(cfg, resume_path, progress);
        } else {
            result = uavrl::harness::run_train(cfg, lineup, progress);
        }
        std::cout << "trained " << result.episodes_run << " episodes\n"
                  << "checkpoint: " << result.checkpoint_path << '\n'
                  << "episodes:   " << result.episodes_csv_path << '\n'
                  << "kernels:    " << uavrl::kernels::active().name << '\n';
        return 0;
    }

    if (eval_cmd->parsed()) {
        const ExperimentConfig cfg = load_config(eval_opts);
        const std::size_t episodes = eval_episodes.value_or(cfg.eval.episodes);
        const auto result = uavrl::harness::run_eval(eval_checkpoint, cfg, episodes);

        const fs::path dir = out_dir_of(cfg);
        fs::create_directories(dir);
        // The first episode is the reference trace; extra episodes get suffixes.
        for (std::size_t e = 0; e < result.episodes.size(); ++e) {
            const std::string suffix = e == 0 ? "" : "_" + std::to_string(e + 1);
            uavrl::harness::write_eval_csv(result.episodes[e],
                                           (dir / ("eval_epochs" + suffix + ".csv")).string());
            uavrl::harness::write_energy_trace_csv(
                result.episodes[e], (dir / ("energy_trace" + suffix + ".csv")).string());
        }
        for (std::size_t e = 0; e < result.episodes.size(); ++e) {
            const auto& ep = result.episodes[e];
            std::cout << "episode " << (e + 1) << ": epochs=" << ep.epochs.size()
                      << " accumulated=" << ep.accumulated_score
                      << " quits=" << ep.quit_epochs.size() << '\n';
        }
        return 0;
    }

    if (compare_cmd->parsed()) {
        const ExperimentConfig cfg = load_config(compare_opts);
        const auto report = uavrl::harness::run_compare(compare_checkpoint, cfg);
        const fs::path dir = out_dir_of(cfg);
        fs::create_directories(dir);
        const fs::path path = dir / "compare_report.json";
        std::ofstream out(path);
        if (!out) throw uavrl::IoError("cannot write " + path.string());
        out << uavrl::harness::compare_to_json(report).dump(2) << '\n';
        std::cout << "quit_epoch=" << report.quit_epoch << " window=[" << report.window_lo
                  << "," << report.window_hi << "] gain_percent=" << report.gain_percent
                  << '\n'
                  << "report: " << path.string() << '\n';
        return 0;
    }

    if (oracle_cmd->parsed()) {
        const ExperimentConfig cfg = load_config(oracle_opts);
        const auto scenario = cfg.make_scenario();
        const auto placement = uavrl::baselines::oracle_search(
            scenario, oracle_k.value_or(cfg.n_uavs), oracle_grid.value_or(cfg.oracle.grid_units),
            cfg.altitude_units, cfg.aperture_deg * std::numbers::pi / 180.0, cfg.beta,
            cfg.channel, cfg.oracle.budget);
        const fs::path dir = out_dir_of(cfg);
        fs::create_directories(dir);
        const fs::path path = dir / "oracle.json";
        std::ofstream out(path);
        if (!out) throw uavrl::IoError("cannot write " + path.string());
        out << uavrl::baselines::oracle_to_json(placement).dump(2) << '\n';
        std::cout << "best_score=" << placement.best_score
                  << " evaluations=" << placement.evaluations << '\n'
                  << "report: " << path.string() << '\n';
        return 0;
    }

    if (inspect_cmd->parsed()) {
        const ExperimentConfig cfg = load_config(inspect_opts);
        std::cout << cfg.to_json().dump(2) << '\n';
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const uavrl::Error& e) {
        nlohmann::json err{{"category", e.category()}, {"message", e.what()}};
        std::cerr << "error: " << err.dump() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        nlohmann::json err{{"category", "internal"}, {"message", e.what()}};
        std::cerr << "error: " << err.dump() << '\n';
        return 1;
    }
}
