#include "uavrl/harness.hpp"

#include <filesystem>

#include "uavrl/csv.hpp"
#include "uavrl/errors.hpp"
#include "uavrl/rng.hpp"

namespace uavrl::harness {

namespace fs = std::filesystem;

// ---- environment adapter ---------------------------------------------------

EpisodeEnv::EpisodeEnv(const env::Environment& environment, std::uint64_t reset_seed_base)
    : env_(&environment), seed_base_(reset_seed_base) {}

std::size_t EpisodeEnv::n_uavs() const { return env_->config().n_uavs; }

std::vector<double> EpisodeEnv::reset(std::uint64_t episode_index) {
    state_ = env_->reset(derive_seed(seed_base_, episode_index));
    epoch_ = 0;
    last_outcome_ = env::StepOutcome{};
    return env_->encode_state(state_);
}

ddpg::EnvStep EpisodeEnv::step(const std::vector<double>& raw_action) {
    ++epoch_;
    last_outcome_ = env_->step(state_, env_->decode_action(raw_action), epoch_);
    state_ = last_outcome_.next_state;
    ddpg::EnvStep es;
    es.next_state = env_->encode_state(state_);
    es.reward = last_outcome_.reward;
    es.terminal = last_outcome_.terminal;
    es.served_count = last_outcome_.served_count;
    return es;
}

// ---- training --------------------------------------------------------------

namespace {

struct RunFiles {
    std::string episodes_csv;
    std::string checkpoint;
    std::string config_snapshot;
    std::string scenario;
};

RunFiles prepare_out_dir(const ExperimentConfig& cfg) {
    const char* env_dir = std::getenv("UAVRL_OUT_DIR");
    const fs::path dir = (env_dir && *env_dir) ? fs::path(env_dir) : fs::path(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    RunFiles f;
    f.episodes_csv = (dir / "episodes.csv").string();
    f.checkpoint = (dir / "checkpoint.json").string();
    f.config_snapshot = (dir / "config_snapshot.json").string();
    f.scenario = (dir / "scenario.json").string();
    return f;
}

TrainResult train_common(const ExperimentConfig& cfg, ddpg::Agent& agent,
                         const EpisodeObserver& on_episode) {
    const RunFiles files = prepare_out_dir(cfg);
    cfg.save(files.config_snapshot);

    const env::Environment environment = cfg.make_environment();
    env::save_scenario(environment.scenario(), files.scenario);

    EpisodeEnv rollout(environment, derive_seed(cfg.master_seed, kSeedTrainResets));

    csv::Writer episodes(files.episodes_csv,
                         {"episode", "epochs_run", "accumulated_score", "moving_avg_200",
                          "sigma_current", "wall_ms"});
    ddpg::TrainCallbacks callbacks;
    callbacks.on_episode = [&episodes, &on_episode](const ddpg::EpisodeRecord& r) {
        episodes.row(r.episode, r.epochs_run, r.accumulated_score, r.moving_avg,
                     r.sigma_current, r.wall_ms);
        if (on_episode) on_episode(r);
    };

    ddpg::train(agent, rollout, callbacks, files.checkpoint);

    TrainResult result;
    result.checkpoint_path = files.checkpoint;
    result.episodes_csv_path = files.episodes_csv;
    result.config_snapshot_path = files.config_snapshot;
    result.scenario_path = files.scenario;
    result.episodes_run = agent.episodes_done();
    return result;
}

} // namespace

TrainResult run_train(const ExperimentConfig& cfg, const EpisodeObserver& on_episode) {
    cfg.validate();
    ddpg::Agent agent(cfg.n_uavs, cfg.make_train_config());
    return train_common(cfg, agent, on_episode);
}

TrainResult run_train(ExperimentConfig cfg, const std::string& lineup,
                      const EpisodeObserver& on_episode) {
    apply_lineup(cfg, lineup);
    return run_train(cfg, on_episode);
}

TrainResult resume_train(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                         const EpisodeObserver& on_episode) {
    cfg.validate();
    ddpg::Agent agent = ddpg::load_checkpoint(checkpoint_path);
    if (agent.n_uavs() != cfg.n_uavs)
        throw DimensionError("resume: checkpoint has " + std::to_string(agent.n_uavs()) +
                             " UAVs, config expects " + std::to_string(cfg.n_uavs));
    agent.set_max_episodes(cfg.train.max_episodes);
    return train_common(cfg, agent, on_episode);
}

// ---- evaluation --------------------------------------------------------------

namespace {

// One noise-free rollout under an arbitrary action policy.
template <typename PolicyFn>
EvalEpisode rollout_episode(const env::Environment& environment, std::uint64_t reset_seed,
                            PolicyFn&& policy) {
    EvalEpisode ep;
    ep.reset_seed = reset_seed;
    std::vector<env::UavState> state = environment.reset(reset_seed);

    for (std::size_t t = 1; t <= environment.config().n_epochs; ++t) {
        const env::Action action = policy(state);
        const env::StepOutcome out = environment.step(state, action, t);

        EvalEpoch epoch;
        epoch.epoch = t;
        epoch.score = out.reward;
        epoch.served = out.served_count;
        epoch.uavs = out.next_state;
        epoch.ledger = out.ledger;
        ep.epochs.push_back(std::move(epoch));
        ep.accumulated_score += out.reward;

        for (const auto& entry : out.ledger)
            if (entry.quit_triggered) ep.quit_epochs.push_back(t);

        state = out.next_state;
        if (out.terminal) break;
    }
    return ep;
}

ddpg::Agent load_checked(const std::string& checkpoint_path, const ExperimentConfig& cfg) {
    ddpg::Agent agent = ddpg::load_checkpoint(checkpoint_path);
    if (agent.n_uavs() != cfg.n_uavs)
        throw DimensionError("checkpoint has " + std::to_string(agent.n_uavs()) +
                             " UAVs, config expects " + std::to_string(cfg.n_uavs));
    return agent;
}

} // namespace

EvalResult run_eval(const std::string& checkpoint_path, const ExperimentConfig& cfg,
                    std::size_t episodes) {
    cfg.validate();
    const ddpg::Agent agent = load_checked(checkpoint_path, cfg);
    const env::Environment environment = cfg.make_environment();

    EvalResult result;
    const std::uint64_t base = derive_seed(cfg.master_seed, kSeedEvalResets);
    for (std::size_t e = 0; e < episodes; ++e) {
        auto greedy = [&](const std::vector<env::UavState>& state) {
            return environment.decode_action(
                agent.act_greedy(environment.encode_state(state)));
        };
        result.episodes.push_back(rollout_episode(environment, derive_seed(base, e), greedy));
    }
    return result;
}

CompareReport run_compare(const std::string& checkpoint_path, const ExperimentConfig& cfg) {
    cfg.validate();
    const ddpg::Agent agent = load_checked(checkpoint_path, cfg);
    const env::Environment environment = cfg.make_environment();
    const std::uint64_t reset_seed = derive_seed(cfg.master_seed, kSeedCompare);

    auto greedy = [&](const std::vector<env::UavState>& state) {
        return environment.decode_action(agent.act_greedy(environment.encode_state(state)));
    };
    const EvalEpisode proactive = rollout_episode(environment, reset_seed, greedy);

    if (proactive.quit_epochs.size() != 1)
        throw ContractError("compare: expected exactly one quit event in the proactive "
                            "rollout, found " + std::to_string(proactive.quit_epochs.size()));

    const baselines::PassiveWrapper passive_policy(agent.actor(), environment);
    auto passive = [&](const std::vector<env::UavState>& state) {
        return passive_policy.act(state);
    };
    const EvalEpisode passive_ep = rollout_episode(environment, reset_seed, passive);

    CompareReport report;
    report.quit_epoch = proactive.quit_epochs.front();
    if (passive_ep.quit_epochs.size() == 1)
        report.passive_quit_epoch = passive_ep.quit_epochs.front();

    const std::size_t n_t = environment.config().n_epochs;
    const std::size_t w_minus = cfg.eval.window_before;
    const std::size_t w_plus = cfg.eval.window_after;
    std::size_t lo = report.quit_epoch > w_minus ? report.quit_epoch - w_minus : 1;
    std::size_t hi = std::min(report.quit_epoch + w_plus, n_t);
    report.window_clamped =
        (report.quit_epoch <= w_minus) || (report.quit_epoch + w_plus > n_t);
    report.window_lo = lo;
    report.window_hi = hi;

    for (const auto& ep : proactive.epochs) report.proactive_scores.push_back(ep.score);
    for (const auto& ep : passive_ep.epochs) report.passive_scores.push_back(ep.score);

    auto window_sum = [&](const std::vector<double>& scores) {
        double acc = 0.0;
        for (std::size_t t = lo; t <= hi && t <= scores.size(); ++t) acc += scores[t - 1];
        return acc;
    };
    report.accumulated_proactive = window_sum(report.proactive_scores);
    report.accumulated_passive = window_sum(report.passive_scores);

    if (!(report.accumulated_passive > 0.0))
        throw ContractError("compare: passive accumulated score in the window is zero; "
                            "gain is undefined");
    report.gain_percent = 100.0 *
                          (report.accumulated_proactive - report.accumulated_passive) /
                          report.accumulated_passive;
    return report;
}

nlohmann::json compare_to_json(const CompareReport& r) {
    nlohmann::json j;
    j["quit_epoch"] = r.quit_epoch;
    if (r.passive_quit_epoch)
        j["passive_quit_epoch"] = *r.passive_quit_epoch;
    else
        j["passive_quit_epoch"] = nullptr;
    j["window"] = {{"lo", r.window_lo}, {"hi", r.window_hi}, {"clamped", r.window_clamped}};
    j["proactive_scores"] = r.proactive_scores;
    j["passive_scores"] = r.passive_scores;
    j["accumulated_proactive"] = r.accumulated_proactive;
    j["accumulated_passive"] = r.accumulated_passive;
    j["gain_percent"] = r.gain_percent;
    return j;
}

void write_eval_csv(const EvalEpisode& episode, const std::string& path) {
    std::vector<std::string> header{"epoch", "score", "served"};
    const std::size_t n =
        episode.epochs.empty() ? 0 : episode.epochs.front().uavs.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::string tag = std::to_string(i);
        header.push_back("x" + tag);
        header.push_back("y" + tag);
        header.push_back("E" + tag);
        header.push_back("q" + tag);
    }
    csv::Writer out(path, header);
    for (const auto& ep : episode.epochs) {
        std::vector<std::string> cells{csv::format(ep.epoch), csv::format(ep.score),
                                       csv::format(ep.served)};
        for (const auto& uav : ep.uavs) {
            cells.push_back(csv::format(uav.x_units));
            cells.push_back(csv::format(uav.y_units));
            cells.push_back(csv::format(uav.residual_unit_s));
            cells.push_back(csv::format(static_cast<std::uint64_t>(uav.active ? 1 : 0)));
        }
        out.row_strings(cells);
    }
}

void write_energy_trace_csv(const EvalEpisode& episode, const std::string& path) {
    csv::Writer out(path, {"epoch", "uav", "fly_s", "hover_s", "consumed_unit_s",
                           "residual_unit_s", "quit"});
    for (const auto& ep : episode.epochs)
        for (const auto& entry : ep.ledger)
            out.row(ep.epoch, entry.uav, entry.fly_seconds, entry.hover_seconds,
                    entry.consumed_unit_s, entry.residual_unit_s,
                    static_cast<std::uint64_t>(entry.quit_triggered ? 1 : 0));
}

} // namespace uavrl::harness
