#include "uavrl/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "uavrl/errors.hpp"
#include "uavrl/rng.hpp"

namespace uavrl::env {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Scenario generate_scenario(std::uint64_t seed, std::size_t n_users, double area_side_units,
                           double hotspot_fraction, std::size_t n_hotspots,
                           double hotspot_sigma_units, double required_rate_bps) {
    if (n_users < 1) throw ConfigError("generate_scenario: n_users must be >= 1");
    if (!(area_side_units > 0.0)) throw ConfigError("generate_scenario: area side must be > 0");
    if (hotspot_fraction < 0.0 || hotspot_fraction > 1.0)
        throw ConfigError("generate_scenario: hotspot_fraction must lie in [0, 1]");
    if (hotspot_fraction > 0.0 && n_hotspots == 0)
        throw ConfigError("generate_scenario: hotspot_fraction > 0 needs n_hotspots >= 1");
    if (hotspot_sigma_units < 0.0)
        throw ConfigError("generate_scenario: hotspot_sigma_units must be >= 0");

    Scenario s;
    s.area_side_units = area_side_units;
    s.hotspot_fraction = hotspot_fraction;
    s.hotspot_sigma_units = hotspot_sigma_units;
    s.rng_seed = seed;

    Rng rng(seed);
    const double L = area_side_units;
    for (std::size_t h = 0; h < n_hotspots; ++h)
        s.hotspot_centers.push_back({rng.uniform(0.0, L), rng.uniform(0.0, L)});

    const auto n_clustered =
        static_cast<std::size_t>(std::lround(hotspot_fraction * static_cast<double>(n_users)));
    for (std::size_t u = 0; u < n_users; ++u) {
        channel::User user;
        user.required_rate_bps = required_rate_bps;
        if (u < n_clustered) {
            const auto& c = s.hotspot_centers[rng.bounded(s.hotspot_centers.size())];
            if (hotspot_sigma_units == 0.0) {
                user.x_units = c.x_units;
                user.y_units = c.y_units;
            } else {
                // Truncated Gaussian around the center via rejection.
                for (;;) {
                    const double x = rng.normal(c.x_units, hotspot_sigma_units);
                    const double y = rng.normal(c.y_units, hotspot_sigma_units);
                    if (x >= 0.0 && x <= L && y >= 0.0 && y <= L) {
                        user.x_units = x;
                        user.y_units = y;
                        break;
                    }
                }
            }
        } else {
            user.x_units = rng.uniform(0.0, L);
            user.y_units = rng.uniform(0.0, L);
        }
        s.users.push_back(user);
    }
    return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["seed"] = s.rng_seed;
    j["L"] = s.area_side_units;
    j["hotspot_fraction"] = s.hotspot_fraction;
    j["hotspot_sigma_units"] = s.hotspot_sigma_units;
    nlohmann::json users = nlohmann::json::array();
    for (const auto& u : s.users)
        users.push_back({{"x", u.x_units}, {"y", u.y_units}, {"rate_bps", u.required_rate_bps}});
    j["users"] = std::move(users);
    nlohmann::json hotspots = nlohmann::json::array();
    for (const auto& h : s.hotspot_centers)
        hotspots.push_back({{"x", h.x_units}, {"y", h.y_units}});
    j["hotspots"] = std::move(hotspots);
    return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    s.rng_seed = j.at("seed").get<std::uint64_t>();
    s.area_side_units = j.at("L").get<double>();
    s.hotspot_fraction = j.value("hotspot_fraction", 0.0);
    s.hotspot_sigma_units = j.value("hotspot_sigma_units", 0.0);
    for (const auto& ju : j.at("users")) {
        channel::User u;
        u.x_units = ju.at("x").get<double>();
        u.y_units = ju.at("y").get<double>();
        u.required_rate_bps = ju.at("rate_bps").get<double>();
        s.users.push_back(u);
    }
    for (const auto& jh : j.at("hotspots"))
        s.hotspot_centers.push_back({jh.at("x").get<double>(), jh.at("y").get<double>()});
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_scenario: cannot open " + path);
    out << scenario_to_json(s).dump(2) << '\n';
    if (!out) throw IoError("save_scenario: write failed for " + path);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_scenario: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_scenario: invalid JSON in " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

void EnvConfig::validate(const energy::EnergyConfig& energy_cfg) const {
    if (n_uavs < 1) throw ConfigError("env: n_uavs must be >= 1");
    if (n_epochs < 1) throw ConfigError("env: n_epochs must be >= 1");
    if (!(beta > 0.0)) throw ConfigError("env: beta must be > 0");
    if (!(altitude_units > 0.0)) throw ConfigError("env: altitude_units must be > 0");
    if (!(aperture_rad > 0.0) || !(aperture_rad < std::numbers::pi))
        throw ConfigError("env: aperture must lie in (0, pi)");
    if (!(max_distance_units >= 0.0)) throw ConfigError("env: max_distance_units must be >= 0");
    const double max_fly = max_distance_units * 100.0 / energy_cfg.level_speed_m_s;
    if (max_fly > energy_cfg.max_fly_seconds + 1e-9)
        throw ConfigError("env: max_distance_units cannot be flown within max_fly_seconds");
    if (initial_energy_unit_s.size() != n_uavs)
        throw ConfigError("env: need one initial energy per UAV");
    for (double e : initial_energy_unit_s)
        if (!(e > energy_cfg.quit_threshold_unit_s))
            throw ConfigError("env: every initial energy must exceed the quit threshold");
}

Environment::Environment(Scenario scenario, EnvConfig env_cfg,
                         channel::ChannelConfig channel_cfg, energy::EnergyConfig energy_cfg)
    : scenario_(std::move(scenario)),
      env_cfg_(std::move(env_cfg)),
      channel_cfg_(channel_cfg),
      energy_cfg_(energy_cfg) {
    channel_cfg_.validate();
    energy_cfg_.validate();
    env_cfg_.validate(energy_cfg_);
    if (scenario_.users.empty()) throw ConfigError("env: scenario has no users");
    for (const auto& u : scenario_.users)
        if (u.x_units < 0.0 || u.x_units > scenario_.area_side_units ||
            u.y_units < 0.0 || u.y_units > scenario_.area_side_units)
            throw ConfigError("env: scenario user outside the area");
    e_max0_ = *std::max_element(env_cfg_.initial_energy_unit_s.begin(),
                                env_cfg_.initial_energy_unit_s.end());
}

std::vector<UavState> Environment::reset(std::uint64_t placement_seed) const {
    Rng rng(placement_seed);
    std::vector<UavState> state(env_cfg_.n_uavs);
    const double L = scenario_.area_side_units;
    for (std::size_t i = 0; i < env_cfg_.n_uavs; ++i) {
        state[i].x_units = rng.uniform(0.0, L);
        state[i].y_units = rng.uniform(0.0, L);
        state[i].residual_unit_s = env_cfg_.initial_energy_unit_s[i];
        state[i].active = true;
    }
    return state;
}

StepOutcome Environment::step(const std::vector<UavState>& state, const Action& action,
                              std::size_t epoch_t) const {
    const std::size_t n = env_cfg_.n_uavs;
    if (state.size() != n)
        throw DimensionError("step: state has wrong UAV count");
    if (action.direction_rad.size() != n || action.distance_units.size() != n)
        throw DimensionError("step: action has wrong UAV count");
    if (epoch_t < 1 || epoch_t > env_cfg_.n_epochs)
        throw ContractError("step: epoch_t out of [1, n_epochs]");
    for (std::size_t i = 0; i < n; ++i) {
        const double a = action.direction_rad[i];
        const double d = action.distance_units[i];
        if (!(a >= 0.0) || !(a < kTwoPi) || !(d >= 0.0) ||
            d > env_cfg_.max_distance_units + 1e-12)
            throw ContractError("step: action bounds violated for UAV " + std::to_string(i));
    }

    StepOutcome out;
    out.next_state = state;
    out.ledger.resize(n);

    const double L = scenario_.area_side_units;
    for (std::size_t i = 0; i < n; ++i) {
        UavState& uav = out.next_state[i];
        energy::LedgerEntry& entry = out.ledger[i];
        entry.uav = i;

        if (!uav.active) {
            // Frozen: position, energy and flag stay exactly as at quit time.
            entry.hover_seconds = energy_cfg_.slot_seconds;
            entry.residual_unit_s = uav.residual_unit_s;
            continue;
        }

        double executed = action.distance_units[i];
        const double nx = uav.x_units + executed * std::cos(action.direction_rad[i]);
        const double ny = uav.y_units + executed * std::sin(action.direction_rad[i]);
        if (nx < 0.0 || nx > L || ny < 0.0 || ny > L) {
            executed = 0.0; // movement cancelled, full-slot hover still paid
            out.boundary_violation = true;
            out.terminal = true;
        } else {
            uav.x_units = nx;
            uav.y_units = ny;
        }

        entry = energy::epoch_energy_unit_s(executed, energy_cfg_);
        entry.uav = i;
        const energy::UavEnergy before{uav.residual_unit_s, uav.active};
        const energy::UavEnergy after = energy::apply_energy(before, entry.consumed_unit_s, energy_cfg_);
        uav.residual_unit_s = after.residual_unit_s;
        uav.active = after.active;
        entry.residual_unit_s = after.residual_unit_s;
        entry.quit_triggered = !after.active;
    }

    // Score the epoch over the UAVs that were serving during this slot: the
    // ones active at slot start, at their end-of-slot positions. A UAV whose
    // quit tripped this epoch still serves; exclusion starts next epoch.
    std::vector<channel::Position> serving_positions;
    for (std::size_t i = 0; i < n; ++i)
        if (state[i].active)
            serving_positions.push_back({out.next_state[i].x_units, out.next_state[i].y_units});

    const auto assoc = channel::associate(scenario_.users, serving_positions,
                                          env_cfg_.altitude_units, env_cfg_.aperture_rad,
                                          channel_cfg_);
    out.served_count = assoc.served_count;
    out.reward = channel::satisfaction_score(out.served_count, scenario_.users.size(),
                                             env_cfg_.beta);
    if (epoch_t == env_cfg_.n_epochs) out.terminal = true;
    return out;
}

std::vector<double> Environment::encode_state(const std::vector<UavState>& state) const {
    if (state.size() != env_cfg_.n_uavs)
        throw DimensionError("encode_state: wrong UAV count");
    const std::size_t n = env_cfg_.n_uavs;
    const double L = scenario_.area_side_units;
    const double e_thre = energy_cfg_.quit_threshold_unit_s;
    const double span = e_max0_ - e_thre;
    std::vector<double> v(4 * n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = state[i].x_units / L;
        v[n + i] = state[i].y_units / L;
        v[2 * n + i] = std::clamp((state[i].residual_unit_s - e_thre) / span, 0.0, 1.0);
        v[3 * n + i] = state[i].active ? 1.0 : 0.0;
    }
    return v;
}

Action Environment::decode_action(const std::vector<double>& raw) const {
    const std::size_t n = env_cfg_.n_uavs;
    if (raw.size() != 2 * n)
        throw DimensionError("decode_action: expected " + std::to_string(2 * n) +
                             " components, got " + std::to_string(raw.size()));
    Action a;
    a.direction_rad.resize(n);
    a.distance_units.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double o_dir = std::clamp(raw[i], -1.0, 1.0);
        const double o_dist = std::clamp(raw[n + i], -1.0, 1.0);
        double alpha = std::numbers::pi * (o_dir + 1.0);
        if (alpha >= kTwoPi) alpha -= kTwoPi; // 2*pi is the same heading as 0
        a.direction_rad[i] = alpha;
        a.distance_units[i] = env_cfg_.max_distance_units * (o_dist + 1.0) / 2.0;
    }
    return a;
}

} // namespace uavrl::env
