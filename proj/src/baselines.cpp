#include "uavrl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uavrl/errors.hpp"

namespace uavrl::baselines {

PassiveWrapper::PassiveWrapper(const nn::DenseNet& actor, const env::Environment& environment)
    : actor_(&actor), env_(&environment) {
    if (actor.input_dim() != environment.state_dim() ||
        actor.output_dim() != environment.action_dim())
        throw DimensionError("passive wrapper: actor dimensions do not match environment");
}

std::vector<double> PassiveWrapper::masked_encoding(
    const std::vector<env::UavState>& state) const {
    std::vector<env::UavState> masked = state;
    const auto& energies = env_->config().initial_energy_unit_s;
    const double e_max0 = *std::max_element(energies.begin(), energies.end());
    for (auto& uav : masked) {
        if (!uav.active) continue; // a quit UAV is shown as it really is
        uav.residual_unit_s = e_max0; // encodes to 1.0
    }
    return env_->encode_state(masked);
}

env::Action PassiveWrapper::act(const std::vector<env::UavState>& state) const {
    return env_->decode_action(nn::forward(*actor_, masked_encoding(state)));
}

OraclePlacement oracle_search(const env::Scenario& scenario, std::size_t n_uavs,
                              double grid_units, double altitude_units, double aperture_rad,
                              double beta, const channel::ChannelConfig& cfg,
                              std::uint64_t max_evaluations) {
    if (n_uavs < 1) throw ContractError("oracle_search: n_uavs must be >= 1");
    if (!(grid_units > 0.0)) throw ContractError("oracle_search: grid must be > 0");
    if (scenario.users.empty()) throw ContractError("oracle_search: scenario has no users");

    const double L = scenario.area_side_units;
    const auto per_axis = static_cast<std::size_t>(std::floor(L / grid_units + 1e-9)) + 1;
    const std::size_t per_uav = per_axis * per_axis;

    double total = 1.0;
    for (std::size_t i = 0; i < n_uavs; ++i) total *= static_cast<double>(per_uav);
    if (total > static_cast<double>(max_evaluations))
        throw BudgetError("oracle_search: grid has " + std::to_string(total) +
                          " placements, above the budget of " +
                          std::to_string(max_evaluations) +
                          "; raise the budget or coarsen the grid");

    std::vector<channel::Position> grid;
    grid.reserve(per_uav);
    for (std::size_t ix = 0; ix < per_axis; ++ix)
        for (std::size_t iy = 0; iy < per_axis; ++iy)
            grid.push_back({static_cast<double>(ix) * grid_units,
                            static_cast<double>(iy) * grid_units});

    OraclePlacement best;
    best.n_uavs = n_uavs;
    best.grid_units = grid_units;

    std::vector<std::size_t> cursor(n_uavs, 0);
    std::vector<channel::Position> placement(n_uavs);
    for (;;) {
        for (std::size_t i = 0; i < n_uavs; ++i) placement[i] = grid[cursor[i]];
        const auto assoc = channel::associate(scenario.users, placement, altitude_units,
                                              aperture_rad, cfg);
        const double score = channel::satisfaction_score(assoc.served_count,
                                                         scenario.users.size(), beta);
        ++best.evaluations;
        // Strict improvement only: the first placement reaching the best
        // score wins, and the odometer enumerates tuples in lexicographic
        // order, so ties resolve to the smallest tuple.
        if (score > best.best_score) {
            best.best_score = score;
            best.best_positions = placement;
        }

        std::size_t d = n_uavs;
        for (; d-- > 0;) {
            if (++cursor[d] < grid.size()) break;
            cursor[d] = 0;
            if (d == 0) return best;
        }
    }
}

nlohmann::json oracle_to_json(const OraclePlacement& p) {
    nlohmann::json j;
    j["K"] = p.n_uavs;
    j["g"] = p.grid_units;
    nlohmann::json positions = nlohmann::json::array();
    for (const auto& pos : p.best_positions)
        positions.push_back({{"x", pos.x_units}, {"y", pos.y_units}});
    j["best_positions"] = std::move(positions);
    j["best_score"] = p.best_score;
    j["evaluations"] = p.evaluations;
    return j;
}

env::Action still_action(std::size_t n_uavs) {
    env::Action a;
    a.direction_rad.assign(n_uavs, 0.0);
    a.distance_units.assign(n_uavs, 0.0);
    return a;
}

env::Action random_action(std::size_t n_uavs, double max_distance_units, Rng& rng) {
    env::Action a;
    a.direction_rad.resize(n_uavs);
    a.distance_units.resize(n_uavs);
    for (std::size_t i = 0; i < n_uavs; ++i) {
        a.direction_rad[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        a.distance_units[i] = rng.uniform() * max_distance_units;
    }
    return a;
}

} // namespace uavrl::baselines
