#include "uavrl/ddpg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "uavrl/errors.hpp"

namespace uavrl::ddpg {

// ---- replay buffer ------------------------------------------------------

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1) throw ConfigError("replay buffer capacity must be >= 1");
}

ReplayBuffer ReplayBuffer::restore(std::size_t capacity, std::vector<Experience> oldest_first,
                                   std::uint64_t insertions) {
    if (oldest_first.size() > capacity)
        throw ContractError("replay restore: more experiences than capacity");
    ReplayBuffer b(capacity);
    b.storage_ = std::move(oldest_first);
    b.insertions_ = insertions;
    return b;
}

void ReplayBuffer::push(Experience e) {
    if (!(e.reward >= 0.0 && e.reward <= 1.0))
        throw ContractError("replay push: reward outside [0, 1]");
    ++insertions_;
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(e));
        return;
    }
    storage_[next_] = std::move(e);
    next_ = (next_ + 1) % capacity_;
}

const Experience& ReplayBuffer::at(std::size_t logical) const {
    if (logical >= storage_.size())
        throw ContractError("replay at: index out of range");
    if (storage_.size() < capacity_) return storage_[logical];
    return storage_[(next_ + logical) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, Rng& rng) const {
    const std::size_t n = storage_.size();
    if (batch > n)
        throw ContractError("replay sample: batch " + std::to_string(batch) +
                            " exceeds buffer size " + std::to_string(n));
    // Floyd's algorithm: uniform distinct subset in O(batch).
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(batch * 2);
    for (std::size_t j = n - batch; j < n; ++j) {
        const std::size_t t = rng.bounded(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::size_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---- exploration noise ---------------------------------------------------

double NoiseSchedule::stddev() const {
    return treat_as_variance ? std::sqrt(sigma_current) : sigma_current;
}

void NoiseSchedule::decay_once() { sigma_current *= decay; }

std::vector<double> explore(const std::vector<double>& actor_output, NoiseSchedule& noise) {
    std::vector<double> out(actor_output.size());
    const double sd = noise.stddev();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::clamp(actor_output[i] + (sd > 0.0 ? noise.rng.normal(0.0, sd) : 0.0),
                            -1.0, 1.0);
    if (!noise.decay_per_episode) noise.decay_once();
    return out;
}

// ---- config --------------------------------------------------------------

void TrainConfig::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("train: gamma must lie in [0, 1]");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("train: tau must lie in (0, 1]");
    if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
    if (l2_coeff < 0.0) throw ConfigError("train: l2_coeff must be >= 0");
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (max_episodes < 1) throw ConfigError("train: max_episodes must be >= 1");
    if (n_epochs < 1) throw ConfigError("train: n_epochs must be >= 1");
    if (hidden.empty()) throw ConfigError("train: need at least one hidden layer");
    for (std::size_t h : hidden)
        if (h == 0) throw ConfigError("train: zero-width hidden layer");
    if (!(sigma_initial >= 0.0)) throw ConfigError("train: sigma_initial must be >= 0");
    if (!(sigma_decay > 0.0 && sigma_decay <= 1.0))
        throw ConfigError("train: sigma_decay must lie in (0, 1]");
    if (buffer_capacity != 0 && buffer_capacity < batch_size)
        throw ConfigError("train: buffer_capacity below batch_size");
    if (plateau_window < 2) throw ConfigError("train: plateau_window must be >= 2");
    if (moving_avg_window < 1) throw ConfigError("train: moving_avg_window must be >= 1");
}

// ---- batch assembly and update rules --------------------------------------

Batch make_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw ContractError("make_batch: empty index list");
    const Experience& first = buffer.at(indices.front());
    const std::size_t sd = first.state.size();
    const std::size_t ad = first.action_raw.size();

    Batch b;
    b.states = nn::Mat(indices.size(), sd);
    b.actions = nn::Mat(indices.size(), ad);
    b.next_states = nn::Mat(indices.size(), sd);
    b.rewards.resize(indices.size());
    b.terminal.resize(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const Experience& e = buffer.at(indices[i]);
        if (e.state.size() != sd || e.next_state.size() != sd || e.action_raw.size() != ad)
            throw DimensionError("make_batch: inconsistent experience shapes");
        std::copy(e.state.begin(), e.state.end(), b.states.row(i));
        std::copy(e.action_raw.begin(), e.action_raw.end(), b.actions.row(i));
        std::copy(e.next_state.begin(), e.next_state.end(), b.next_states.row(i));
        b.rewards[i] = e.reward;
        b.terminal[i] = e.terminal ? 1 : 0;
    }
    return b;
}

namespace {

nn::Mat concat_cols(const nn::Mat& a, const nn::Mat& b) {
    if (a.rows != b.rows) throw DimensionError("concat: row mismatch");
    nn::Mat out(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        std::copy(a.row(i), a.row(i) + a.cols, out.row(i));
        std::copy(b.row(i), b.row(i) + b.cols, out.row(i) + a.cols);
    }
    return out;
}

} // namespace

std::vector<double> compute_targets(const Batch& batch, const nn::DenseNet& target_critic,
                                    const nn::DenseNet& target_actor, double gamma) {
    const std::size_t n = batch.size();
    std::vector<double> y(n);

    const nn::Mat next_actions = forward_batch(target_actor, batch.next_states);
    const nn::Mat critic_in = concat_cols(batch.next_states, next_actions);
    const nn::Mat q_next = forward_batch(target_critic, critic_in);

    for (std::size_t i = 0; i < n; ++i)
        y[i] = batch.terminal[i] ? batch.rewards[i]
                                 : batch.rewards[i] + gamma * q_next.at(i, 0);
    return y;
}

double critic_update(nn::DenseNet& critic, const Batch& batch,
                     const std::vector<double>& targets, nn::OptimizerState& opt) {
    const std::size_t n = batch.size();
    if (targets.size() != n) throw DimensionError("critic_update: target count mismatch");

    const nn::Mat critic_in = concat_cols(batch.states, batch.actions);
    nn::ForwardCache cache;
    const nn::Mat q = forward_batch(critic, critic_in, &cache);

    double loss = 0.0;
    nn::Mat dy(n, 1);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double err = q.at(i, 0) - targets[i];
        loss += err * err * inv_n;
        dy.at(i, 0) = 2.0 * inv_n * err;
    }
    if (!std::isfinite(loss)) throw NumericError("critic_update: non-finite loss");

    nn::Gradients grads = nn::zero_gradients_like(critic);
    backward_batch(critic, cache, dy, &grads);
    optimize_step(critic, grads, opt);
    return loss;
}

double actor_update(nn::DenseNet& actor, const nn::DenseNet& critic,
                    const nn::Mat& states, nn::OptimizerState& opt) {
    const std::size_t n = states.rows;
    if (n == 0) throw ContractError("actor_update: empty state batch");

    nn::ForwardCache actor_cache;
    const nn::Mat actions = forward_batch(actor, states, &actor_cache);

    const nn::Mat critic_in = concat_cols(states, actions);
    nn::ForwardCache critic_cache;
    const nn::Mat q = forward_batch(critic, critic_in, &critic_cache);

    double mean_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_q += q.at(i, 0);
    mean_q /= static_cast<double>(n);
    if (!std::isfinite(mean_q)) throw NumericError("actor_update: non-finite critic value");

    nn::Mat dy(n, 1);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) dy.at(i, 0) = inv_n;

    nn::BackwardOptions critic_opts;
    critic_opts.want_input_grad = true;
    critic_opts.param_grads = false; // critic frozen during the policy step
    const nn::Mat critic_input_grad = backward_batch(critic, critic_cache, dy, nullptr, critic_opts);

    // Ascent: feed the actor the negated dQ/da slice.
    const std::size_t state_dim = states.cols;
    const std::size_t action_dim = actions.cols;
    nn::Mat da(n, action_dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < action_dim; ++j)
            da.at(i, j) = -critic_input_grad.at(i, state_dim + j);

    nn::Gradients grads = nn::zero_gradients_like(actor);
    backward_batch(actor, actor_cache, da, &grads);
    optimize_step(actor, grads, opt);
    return mean_q;
}

// ---- agent -----------------------------------------------------------------

Agent::Agent(std::size_t n_uavs, TrainConfig cfg)
    : n_uavs_(n_uavs),
      cfg_(std::move(cfg)),
      buffer_(cfg_.buffer_capacity ? cfg_.buffer_capacity
                                   : cfg_.max_episodes * cfg_.n_epochs) {
    if (n_uavs_ < 1) throw ConfigError("agent: n_uavs must be >= 1");
    cfg_.validate();

    const std::size_t state_dim = 4 * n_uavs_;
    const std::size_t action_dim = 2 * n_uavs_;

    std::vector<std::size_t> actor_dims{state_dim};
    std::vector<std::size_t> critic_dims{state_dim + action_dim};
    for (std::size_t h : cfg_.hidden) {
        actor_dims.push_back(h);
        critic_dims.push_back(h);
    }
    actor_dims.push_back(action_dim);
    critic_dims.push_back(1);

    actor_ = nn::init_net(actor_dims, nn::Head::Tanh, derive_seed(cfg_.seed, 1));
    critic_ = nn::init_net(critic_dims, nn::Head::Linear, derive_seed(cfg_.seed, 2));
    target_actor_ = actor_;  // same weights at start
    target_critic_ = critic_;
    opt_actor_ = nn::make_optimizer(actor_, cfg_.learning_rate, cfg_.l2_coeff);
    opt_critic_ = nn::make_optimizer(critic_, cfg_.learning_rate, cfg_.l2_coeff);

    noise_.sigma_initial = cfg_.sigma_initial;
    noise_.sigma_current = cfg_.sigma_initial;
    noise_.decay = cfg_.sigma_decay;
    noise_.treat_as_variance = cfg_.noise_is_variance;
    noise_.decay_per_episode = cfg_.noise_decay_per_episode;
    noise_.rng = Rng(derive_seed(cfg_.seed, 3));
    sample_rng_ = Rng(derive_seed(cfg_.seed, 4));
}

std::vector<double> Agent::act_greedy(const std::vector<double>& state) const {
    return nn::forward(actor_, state);
}

std::vector<double> Agent::act_explore(const std::vector<double>& state) {
    return explore(nn::forward(actor_, state), noise_);
}

void Agent::observe(Experience e) {
    if (e.state.size() != 4 * n_uavs_ || e.action_raw.size() != 2 * n_uavs_)
        throw DimensionError("observe: experience shape does not match agent");
    buffer_.push(std::move(e));
    ++global_step_;

    if (buffer_.size() < cfg_.batch_size) return; // warm-up

    const auto indices = buffer_.sample_indices(cfg_.batch_size, sample_rng_);
    const Batch batch = make_batch(buffer_, indices);
    const auto targets = compute_targets(batch, target_critic_, target_actor_, cfg_.gamma);
    critic_update(critic_, batch, targets, opt_critic_);
    actor_update(actor_, critic_, batch.states, opt_actor_);
    soft_update(target_critic_, critic_, cfg_.tau);
    soft_update(target_actor_, actor_, cfg_.tau);
}

// ---- training loop ----------------------------------------------------------

void train(Agent& agent, RolloutEnv& env, const TrainCallbacks& callbacks,
           const std::string& checkpoint_path) {
    if (env.n_uavs() != agent.n_uavs())
        throw DimensionError("train: environment and agent disagree on UAV count");
    const TrainConfig& cfg = agent.cfg_;

    while (agent.episodes_done_ < cfg.max_episodes) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint64_t episode_index = agent.episodes_done_; // 0-based for reset
        std::vector<double> state = env.reset(episode_index);

        double accumulated = 0.0;
        std::size_t epochs_run = 0;
        for (std::size_t t = 1; t <= cfg.n_epochs; ++t) {
            const std::vector<double> raw = agent.act_explore(state);
            const EnvStep es = env.step(raw);
            agent.observe(Experience{state, raw, es.reward, es.next_state, es.terminal});
            accumulated += es.reward;
            ++epochs_run;
            state = es.next_state;
            if (es.terminal) break;
        }
        if (agent.noise_.decay_per_episode) agent.noise_.decay_once();

        ++agent.episodes_done_;
        agent.recent_scores_.push_back(accumulated);
        if (agent.recent_scores_.size() > cfg.moving_avg_window)
            agent.recent_scores_.pop_front();
        double moving = 0.0;
        for (double s : agent.recent_scores_) moving += s;
        moving /= static_cast<double>(agent.recent_scores_.size());

        if (callbacks.on_episode) {
            EpisodeRecord rec;
            rec.episode = agent.episodes_done_;
            rec.epochs_run = epochs_run;
            rec.accumulated_score = accumulated;
            rec.moving_avg = moving;
            rec.sigma_current = agent.noise_.sigma_current;
            rec.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
            callbacks.on_episode(rec);
        }

        if (!checkpoint_path.empty() && cfg.checkpoint_every > 0 &&
            agent.episodes_done_ % cfg.checkpoint_every == 0)
            save_checkpoint(agent, checkpoint_path);

        if (cfg.plateau_stop) {
            agent.plateau_history_.push_back(moving);
            if (agent.plateau_history_.size() > cfg.plateau_window)
                agent.plateau_history_.pop_front();
            if (agent.plateau_history_.size() == cfg.plateau_window) {
                const double first = agent.plateau_history_.front();
                const double last = agent.plateau_history_.back();
                const double scale = std::max({std::abs(first), std::abs(last), 1e-9});
                if (std::abs(last - first) / scale < cfg.plateau_tol) break;
            }
        }
    }

    if (!checkpoint_path.empty()) save_checkpoint(agent, checkpoint_path);
}

// ---- checkpointing -----------------------------------------------------------

namespace {

constexpr char kReplayMagic[8] = {'U', 'A', 'V', 'R', 'L', 'R', 'B', '1'};

void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::ifstream& in, std::vector<double>& v, std::size_t n) {
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
}

void save_replay(const ReplayBuffer& buffer, std::size_t n_uavs, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("save_checkpoint: cannot open " + path);
    out.write(kReplayMagic, sizeof(kReplayMagic));
    write_u64(out, n_uavs);
    write_u64(out, buffer.capacity());
    write_u64(out, buffer.size());
    write_u64(out, buffer.insertion_count());
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const Experience& e = buffer.at(i);
        write_doubles(out, e.state);
        write_doubles(out, e.action_raw);
        const double r = e.reward;
        out.write(reinterpret_cast<const char*>(&r), sizeof(r));
        write_doubles(out, e.next_state);
        const char term = e.terminal ? 1 : 0;
        out.write(&term, 1);
    }
    if (!out) throw IoError("save_checkpoint: replay write failed for " + path);
}

ReplayBuffer load_replay(std::size_t n_uavs, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_checkpoint: cannot open replay file " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kReplayMagic, sizeof(magic)) != 0)
        throw IoError("load_checkpoint: " + path + " is not a replay file");
    const std::uint64_t file_uavs = read_u64(in);
    if (file_uavs != n_uavs)
        throw DimensionError("load_checkpoint: replay file is for " +
                             std::to_string(file_uavs) + " UAVs, agent has " +
                             std::to_string(n_uavs));
    const std::uint64_t capacity = read_u64(in);
    const std::uint64_t count = read_u64(in);
    const std::uint64_t insertions = read_u64(in);

    const std::size_t sd = 4 * n_uavs, ad = 2 * n_uavs;
    std::vector<Experience> contents;
    contents.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Experience e;
        read_doubles(in, e.state, sd);
        read_doubles(in, e.action_raw, ad);
        in.read(reinterpret_cast<char*>(&e.reward), sizeof(double));
        read_doubles(in, e.next_state, sd);
        char term = 0;
        in.read(&term, 1);
        e.terminal = term != 0;
        if (!in) throw IoError("load_checkpoint: replay file truncated: " + path);
        contents.push_back(std::move(e));
    }
    return ReplayBuffer::restore(capacity, std::move(contents), insertions);
}

nlohmann::json train_config_to_json(const TrainConfig& c) {
    nlohmann::json j;
    j["gamma"] = c.gamma;
    j["tau"] = c.tau;
    j["learning_rate"] = c.learning_rate;
    j["l2_coeff"] = c.l2_coeff;
    j["batch_size"] = c.batch_size;
    j["max_episodes"] = c.max_episodes;
    j["n_epochs"] = c.n_epochs;
    j["buffer_capacity"] = c.buffer_capacity;
    j["hidden"] = c.hidden;
    j["sigma_initial"] = c.sigma_initial;
    j["sigma_decay"] = c.sigma_decay;
    j["noise_is_variance"] = c.noise_is_variance;
    j["noise_decay_per_episode"] = c.noise_decay_per_episode;
    j["plateau_stop"] = c.plateau_stop;
    j["plateau_window"] = c.plateau_window;
    j["plateau_tol"] = c.plateau_tol;
    j["moving_avg_window"] = c.moving_avg_window;
    j["checkpoint_every"] = c.checkpoint_every;
    j["checkpoint_replay"] = c.checkpoint_replay;
    j["seed"] = c.seed;
    return j;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.gamma = j.at("gamma").get<double>();
    c.tau = j.at("tau").get<double>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.l2_coeff = j.at("l2_coeff").get<double>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.max_episodes = j.at("max_episodes").get<std::size_t>();
    c.n_epochs = j.at("n_epochs").get<std::size_t>();
    c.buffer_capacity = j.at("buffer_capacity").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    c.sigma_initial = j.at("sigma_initial").get<double>();
    c.sigma_decay = j.at("sigma_decay").get<double>();
    c.noise_is_variance = j.at("noise_is_variance").get<bool>();
    c.noise_decay_per_episode = j.at("noise_decay_per_episode").get<bool>();
    c.plateau_stop = j.at("plateau_stop").get<bool>();
    c.plateau_window = j.at("plateau_window").get<std::size_t>();
    c.plateau_tol = j.at("plateau_tol").get<double>();
    c.moving_avg_window = j.at("moving_avg_window").get<std::size_t>();
    c.checkpoint_every = j.at("checkpoint_every").get<std::size_t>();
    c.checkpoint_replay = j.at("checkpoint_replay").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

} // namespace

void save_checkpoint(const Agent& agent, const std::string& path) {
    nlohmann::json j;
    j["format"] = "uavrl-checkpoint-v1";
    j["n_uavs"] = agent.n_uavs_;
    j["train_config"] = train_config_to_json(agent.cfg_);
    j["actor"] = nn::net_to_json(agent.actor_);
    j["critic"] = nn::net_to_json(agent.critic_);
    j["target_actor"] = nn::net_to_json(agent.target_actor_);
    j["target_critic"] = nn::net_to_json(agent.target_critic_);
    j["opt_actor"] = nn::optimizer_to_json(agent.opt_actor_);
    j["opt_critic"] = nn::optimizer_to_json(agent.opt_critic_);
    j["noise"] = {{"sigma_initial", agent.noise_.sigma_initial},
                  {"decay", agent.noise_.decay},
                  {"sigma_current", agent.noise_.sigma_current},
                  {"treat_as_variance", agent.noise_.treat_as_variance},
                  {"decay_per_episode", agent.noise_.decay_per_episode},
                  {"rng", agent.noise_.rng.serialize()}};
    j["sample_rng"] = agent.sample_rng_.serialize();
    j["global_step"] = agent.global_step_;
    j["episodes_done"] = agent.episodes_done_;
    j["recent_scores"] = std::vector<double>(agent.recent_scores_.begin(),
                                             agent.recent_scores_.end());
    j["plateau_history"] = std::vector<double>(agent.plateau_history_.begin(),
                                               agent.plateau_history_.end());
    j["has_replay"] = agent.cfg_.checkpoint_replay;

    if (agent.cfg_.checkpoint_replay)
        save_replay(agent.buffer_, agent.n_uavs_, path + ".replay");

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("save_checkpoint: cannot open " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("save_checkpoint: write failed for " + path);
}

Agent load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_checkpoint: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_checkpoint: " + path + " is not valid JSON: " + e.what());
    }
    if (j.value("format", "") != "uavrl-checkpoint-v1")
        throw IoError("load_checkpoint: " + path + " has unknown format");

    Agent agent;
    agent.n_uavs_ = j.at("n_uavs").get<std::size_t>();
    agent.cfg_ = train_config_from_json(j.at("train_config"));

    agent.actor_ = nn::net_from_json(j.at("actor"));
    agent.critic_ = nn::net_from_json(j.at("critic"));
    agent.target_actor_ = nn::net_from_json(j.at("target_actor"));
    agent.target_critic_ = nn::net_from_json(j.at("target_critic"));

    const std::size_t state_dim = 4 * agent.n_uavs_;
    const std::size_t action_dim = 2 * agent.n_uavs_;
    if (agent.actor_.input_dim() != state_dim || agent.actor_.output_dim() != action_dim ||
        agent.critic_.input_dim() != state_dim + action_dim || agent.critic_.output_dim() != 1)
        throw DimensionError("load_checkpoint: net dimensions do not match n_uavs=" +
                             std::to_string(agent.n_uavs_));

    agent.opt_actor_ = nn::optimizer_from_json(j.at("opt_actor"), agent.actor_);
    agent.opt_critic_ = nn::optimizer_from_json(j.at("opt_critic"), agent.critic_);

    const auto& jn = j.at("noise");
    agent.noise_.sigma_initial = jn.at("sigma_initial").get<double>();
    agent.noise_.decay = jn.at("decay").get<double>();
    agent.noise_.sigma_current = jn.at("sigma_current").get<double>();
    agent.noise_.treat_as_variance = jn.at("treat_as_variance").get<bool>();
    agent.noise_.decay_per_episode = jn.at("decay_per_episode").get<bool>();
    agent.noise_.rng.deserialize(jn.at("rng").get<std::string>());
    agent.sample_rng_.deserialize(j.at("sample_rng").get<std::string>());

    agent.global_step_ = j.at("global_step").get<std::uint64_t>();
    agent.episodes_done_ = j.at("episodes_done").get<std::uint64_t>();
    for (double s : j.at("recent_scores").get<std::vector<double>>())
        agent.recent_scores_.push_back(s);
    for (double s : j.at("plateau_history").get<std::vector<double>>())
        agent.plateau_history_.push_back(s);

    if (j.at("has_replay").get<bool>()) {
        agent.buffer_ = load_replay(agent.n_uavs_, path + ".replay");
    } else {
        agent.buffer_ = ReplayBuffer(agent.cfg_.buffer_capacity
                                         ? agent.cfg_.buffer_capacity
                                         : agent.cfg_.max_episodes * agent.cfg_.n_epochs);
    }
    return agent;
}

} // namespace uavrl::ddpg
