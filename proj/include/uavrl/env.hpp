#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "uavrl/channel.hpp"
#include "uavrl/energy.hpp"

// Episodic environment: scenario generation, state encoding, action
// application with boundary and quit semantics, energy bookkeeping, and
// reward emission. An Environment instance is single-threaded; independent
// instances may run concurrently.

namespace uavrl::env {

struct Scenario {
    double area_side_units = 10.0;
    std::vector<channel::User> users;
    double hotspot_fraction = 0.8;
    std::vector<channel::Position> hotspot_centers;
    double hotspot_sigma_units = 0.7;
    std::uint64_t rng_seed = 0;
};

// round(p * n_users) users drawn from truncated Gaussians around uniformly
// placed hotspot centers (rejection-sampled into the area), the remainder
// uniform; deterministic per seed.
Scenario generate_scenario(std::uint64_t seed, std::size_t n_users, double area_side_units,
                           double hotspot_fraction, std::size_t n_hotspots,
                           double hotspot_sigma_units, double required_rate_bps);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

struct UavState {
    double x_units = 0.0;
    double y_units = 0.0;
    double residual_unit_s = 0.0;
    bool active = true; // the paper-style q flag: 1 = serving, 0 = quit
};

struct Action {
    std::vector<double> direction_rad;  // [0, 2*pi)
    std::vector<double> distance_units; // [0, d_max]
};

struct StepOutcome {
    std::vector<UavState> next_state;
    double reward = 0.0;
    bool terminal = false;
    bool boundary_violation = false;
    std::size_t served_count = 0;
    std::vector<energy::LedgerEntry> ledger;
};

struct EnvConfig {
    std::size_t n_uavs = 5;
    std::size_t n_epochs = 100; // N_T
    double beta = 2.0;
    double altitude_units = 3.0;
    double aperture_rad = 1.0471975511965976; // 60 degrees
    double max_distance_units = 1.0;
    std::vector<double> initial_energy_unit_s; // per UAV

    void validate(const energy::EnergyConfig& energy_cfg) const;
};

class Environment {
public:
    Environment(Scenario scenario, EnvConfig env_cfg,
                channel::ChannelConfig channel_cfg, energy::EnergyConfig energy_cfg);

    const Scenario& scenario() const { return scenario_; }
    const EnvConfig& config() const { return env_cfg_; }
    const channel::ChannelConfig& channel_config() const { return channel_cfg_; }
    const energy::EnergyConfig& energy_config() const { return energy_cfg_; }

    std::size_t state_dim() const { return 4 * env_cfg_.n_uavs; }
    std::size_t action_dim() const { return 2 * env_cfg_.n_uavs; }

    // Fresh uniform placement, configured energies, all flags active.
    std::vector<UavState> reset(std::uint64_t placement_seed) const;

    // One slot: quit UAVs hold, active UAVs move (boundary violations cancel
    // the move and end the episode), energy is charged on the executed
    // distance, and the reward scores this epoch's association with UAVs
    // that were already quit at slot start excluded. epoch_t is 1-based.
    StepOutcome step(const std::vector<UavState>& state, const Action& action,
                     std::size_t epoch_t) const;

    // [x.../L, y.../L, (E - E_Thre)/(E_max0 - E_Thre) clamped to [0,1], q...]
    std::vector<double> encode_state(const std::vector<UavState>& state) const;

    // Raw actor output in [-1,1]^(2N) (clipped) to direction/distance pairs:
    // alpha = pi*(o+1) wrapped into [0, 2*pi), d = d_max*(o+1)/2.
    Action decode_action(const std::vector<double>& raw) const;

private:
    Scenario scenario_;
    EnvConfig env_cfg_;
    channel::ChannelConfig channel_cfg_;
    energy::EnergyConfig energy_cfg_;
    double e_max0_ = 0.0; // max initial energy, fixes the encoding scale
};

} // namespace uavrl::env
