#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "uavrl/nn.hpp"
#include "uavrl/rng.hpp"

// Deterministic-policy-gradient agent: replay buffer, decaying Gaussian
// exploration, bootstrapped targets through slowly tracked target networks,
// critic regression, policy-gradient actor ascent, and full-state
// checkpointing. The training loop is sequential; one owner mutates the
// nets, buffer and noise state.

namespace uavrl::ddpg {

struct Experience {
    std::vector<double> state;      // encoded, 4N
    std::vector<double> action_raw; // pre-decode, [-1,1]^(2N)
    double reward = 0.0;            // in [0, 1]
    std::vector<double> next_state; // encoded, 4N
    bool terminal = false;
};

class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    // Checkpoint restore: contents oldest-first plus the historical
    // insertion counter.
    static ReplayBuffer restore(std::size_t capacity, std::vector<Experience> oldest_first,
                                std::uint64_t insertions);

    // Appends; evicts the oldest element only when capacity is exceeded.
    void push(Experience e);

    // Uniform sample of `batch` distinct logical indices (0 = oldest),
    // returned sorted; deterministic per rng state. Requires size >= batch.
    std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const;

    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t insertion_count() const { return insertions_; }
    const Experience& at(std::size_t logical) const;

private:
    std::size_t capacity_;
    std::vector<Experience> storage_;
    std::size_t next_ = 0; // overwrite cursor once full
    std::uint64_t insertions_ = 0;
};

struct NoiseSchedule {
    double sigma_initial = 0.6;
    double decay = 0.9995;
    double sigma_current = 0.6;
    bool treat_as_variance = true;    // noise stddev = sqrt(sigma_current)
    bool decay_per_episode = false;   // default: decay once per environment step
    Rng rng;

    double stddev() const;
    void decay_once();
};

// actor_output + componentwise zero-mean Gaussian noise, clipped to [-1, 1].
// In per-step mode (default) sigma decays by `decay` on every call.
std::vector<double> explore(const std::vector<double>& actor_output, NoiseSchedule& noise);

struct TrainConfig {
    double gamma = 0.9;
    double tau = 0.001;
    double learning_rate = 1e-4;
    double l2_coeff = 1e-4;
    std::size_t batch_size = 512;
    std::size_t max_episodes = 10000;
    std::size_t n_epochs = 100;       // N_T, the per-episode cap
    std::size_t buffer_capacity = 0;  // 0 = max_episodes * n_epochs
    std::vector<std::size_t> hidden = {400, 300};
    double sigma_initial = 0.6;
    double sigma_decay = 0.9995;
    bool noise_is_variance = true;
    bool noise_decay_per_episode = false;
    bool plateau_stop = false;        // optional early stop, off to run the full budget
    std::size_t plateau_window = 500;
    double plateau_tol = 0.01;
    std::size_t moving_avg_window = 200;
    std::size_t checkpoint_every = 0; // episodes between periodic checkpoints; 0 = final only
    bool checkpoint_replay = true;    // include the replay buffer in checkpoints
    std::uint64_t seed = 1;           // derives net init, exploration and sampling streams

    void validate() const;
};

// Minibatch assembled from the buffer in sampled-index order.
struct Batch {
    nn::Mat states;
    nn::Mat actions;
    std::vector<double> rewards;
    nn::Mat next_states;
    std::vector<char> terminal;
    std::size_t size() const { return rewards.size(); }
};

Batch make_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices);

// y = r for terminal transitions, else r + gamma * Q'(S', mu'(S')).
std::vector<double> compute_targets(const Batch& batch, const nn::DenseNet& target_critic,
                                    const nn::DenseNet& target_actor, double gamma);

// One optimizer step on the mean squared error against the targets.
// Returns the pre-step loss.
double critic_update(nn::DenseNet& critic, const Batch& batch,
                     const std::vector<double>& targets, nn::OptimizerState& opt);

// One ascent step on mean_B Q(S, mu(S)) with the critic frozen: the critic
// supplies input gradients with respect to its action slice, which are
// backpropagated through the actor with flipped sign. Returns the pre-step
// mean Q.
double actor_update(nn::DenseNet& actor, const nn::DenseNet& critic,
                    const nn::Mat& states, nn::OptimizerState& opt);

// Environment surface the training loop drives. reset() receives the episode
// index so placements can be derived statelessly (checkpoint-resume safe).
struct EnvStep {
    std::vector<double> next_state;
    double reward = 0.0;
    bool terminal = false;
    std::size_t served_count = 0;
};

class RolloutEnv {
public:
    virtual ~RolloutEnv() = default;
    virtual std::size_t n_uavs() const = 0;
    virtual std::vector<double> reset(std::uint64_t episode_index) = 0;
    virtual EnvStep step(const std::vector<double>& raw_action) = 0;
};

struct EpisodeRecord {
    std::uint64_t episode = 0; // 1-based
    std::size_t epochs_run = 0;
    double accumulated_score = 0.0;
    double moving_avg = 0.0; // over the latest moving_avg_window episodes
    double sigma_current = 0.0;
    double wall_ms = 0.0;
};

struct TrainCallbacks {
    std::function<void(const EpisodeRecord&)> on_episode;
};

class Agent;

// Runs episodes until max_episodes (or the optional plateau criterion)
// starting from the agent's current episode counter. When checkpoint_path is
// non-empty the final state is persisted there, plus periodic checkpoints
// every checkpoint_every episodes.
void train(Agent& agent, RolloutEnv& env, const TrainCallbacks& callbacks = {},
           const std::string& checkpoint_path = {});

class Agent {
public:
    Agent(std::size_t n_uavs, TrainConfig cfg);

    std::size_t n_uavs() const { return n_uavs_; }
    const TrainConfig& config() const { return cfg_; }

    const nn::DenseNet& actor() const { return actor_; }
    const nn::DenseNet& critic() const { return critic_; }
    const nn::DenseNet& target_actor() const { return target_actor_; }
    const nn::DenseNet& target_critic() const { return target_critic_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    const NoiseSchedule& noise() const { return noise_; }
    std::uint64_t global_step() const { return global_step_; }
    std::uint64_t episodes_done() const { return episodes_done_; }

    // Raises (or lowers) the episode budget; used when resuming a checkpoint
    // whose stored budget was already exhausted.
    void set_max_episodes(std::size_t max_episodes) { cfg_.max_episodes = max_episodes; }

    std::vector<double> act_greedy(const std::vector<double>& state) const;
    std::vector<double> act_explore(const std::vector<double>& state);

    // One environment transition: store, then (once the buffer holds a full
    // batch) one critic update, one actor update and one soft update of both
    // targets.
    void observe(Experience e);

    friend void save_checkpoint(const Agent& agent, const std::string& path);
    friend Agent load_checkpoint(const std::string& path);
    friend void train(Agent& agent, RolloutEnv& env, const TrainCallbacks& callbacks,
                      const std::string& checkpoint_path);

private:
    Agent() = default;

    std::size_t n_uavs_ = 0;
    TrainConfig cfg_;
    nn::DenseNet actor_, critic_, target_actor_, target_critic_;
    nn::OptimizerState opt_actor_, opt_critic_;
    ReplayBuffer buffer_{1};
    NoiseSchedule noise_;
    Rng sample_rng_;
    std::uint64_t global_step_ = 0;
    std::uint64_t episodes_done_ = 0;
    std::deque<double> recent_scores_;
    std::deque<double> plateau_history_;
};

// Full-state checkpoint: nets, optimizer moments, noise and rng states,
// counters (JSON) and, when enabled, the replay buffer in a binary sidecar
// (path + ".replay"). save -> load -> save is byte-identical.
void save_checkpoint(const Agent& agent, const std::string& path);
Agent load_checkpoint(const std::string& path);

} // namespace uavrl::ddpg
