#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uavrl/baselines.hpp"
#include "uavrl/config.hpp"
#include "uavrl/ddpg.hpp"
#include "uavrl/env.hpp"

// Experiment orchestration: training runs per lineup, greedy evaluation
// rollouts, the proactive-versus-passive remedy comparison, and all file
// emission (CSV + JSON, schemas documented in the README).

namespace uavrl::harness {

// env::Environment driven as a ddpg::RolloutEnv. Episode placements derive
// statelessly from (seed base, episode index), so resuming from a checkpoint
// replays the same placements.
class EpisodeEnv final : public ddpg::RolloutEnv {
public:
    EpisodeEnv(const env::Environment& environment, std::uint64_t reset_seed_base);

    std::size_t n_uavs() const override;
    std::vector<double> reset(std::uint64_t episode_index) override;
    ddpg::EnvStep step(const std::vector<double>& raw_action) override;

    const std::vector<env::UavState>& state() const { return state_; }
    const env::StepOutcome& last_outcome() const { return last_outcome_; }
    std::size_t epoch() const { return epoch_; }

private:
    const env::Environment* env_;
    std::uint64_t seed_base_;
    std::vector<env::UavState> state_;
    env::StepOutcome last_outcome_;
    std::size_t epoch_ = 0;
};

struct TrainResult {
    std::string checkpoint_path;
    std::string episodes_csv_path;
    std::string config_snapshot_path;
    std::string scenario_path;
    std::uint64_t episodes_run = 0;
};

// Trains per the (already lineup-adjusted) config, streaming one episodes.csv
// row per episode and persisting the final checkpoint plus a fully resolved
// config snapshot that reproduces the run byte-identically. on_episode, when
// set, observes every episode record (progress reporting).
using EpisodeObserver = std::function<void(const ddpg::EpisodeRecord&)>;
TrainResult run_train(const ExperimentConfig& cfg, const EpisodeObserver& on_episode = {});
TrainResult run_train(ExperimentConfig cfg, const std::string& lineup,
                      const EpisodeObserver& on_episode = {});

// Resume a previous run from its checkpoint; appends to a fresh episodes.csv
// in the configured out_dir.
TrainResult resume_train(const ExperimentConfig& cfg, const std::string& checkpoint_path,
                         const EpisodeObserver& on_episode = {});

struct EvalEpoch {
    std::size_t epoch = 0; // 1-based
    double score = 0.0;
    std::size_t served = 0;
    std::vector<env::UavState> uavs; // end-of-slot states
    std::vector<energy::LedgerEntry> ledger;
};

struct EvalEpisode {
    std::uint64_t reset_seed = 0;
    std::vector<EvalEpoch> epochs;
    std::vector<std::size_t> quit_epochs; // epoch where each quit tripped
    double accumulated_score = 0.0;
};

struct EvalResult {
    std::vector<EvalEpisode> episodes;
};

// Greedy (noise-free) rollouts of the checkpointed actor on the configured
// environment. Episode i resets with the eval seed stream.
EvalResult run_eval(const std::string& checkpoint_path, const ExperimentConfig& cfg,
                    std::size_t episodes);

struct CompareReport {
    std::size_t quit_epoch = 0;            // proactive trace
    std::optional<std::size_t> passive_quit_epoch;
    std::size_t window_lo = 0, window_hi = 0; // inclusive epochs
    bool window_clamped = false;
    std::vector<double> proactive_scores; // full traces, index 0 = epoch 1
    std::vector<double> passive_scores;
    double accumulated_proactive = 0.0;   // over the window
    double accumulated_passive = 0.0;
    double gain_percent = 0.0;
};

// Proactive and passive (state-masked) rollouts from the same initial state
// and seed; refuses unless the proactive rollout has exactly one quit event.
CompareReport run_compare(const std::string& checkpoint_path, const ExperimentConfig& cfg);

nlohmann::json compare_to_json(const CompareReport& r);

// eval_epochs.csv: epoch, score, served, then per-UAV x, y, E, q.
void write_eval_csv(const EvalEpisode& episode, const std::string& path);

// energy_trace.csv: epoch, uav, fly_s, hover_s, consumed_unit_s,
// residual_unit_s, quit.
void write_energy_trace_csv(const EvalEpisode& episode, const std::string& path);

} // namespace uavrl::harness
