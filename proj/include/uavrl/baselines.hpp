#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

#include "uavrl/env.hpp"
#include "uavrl/nn.hpp"
#include "uavrl/rng.hpp"

// Comparison policies and ground-truth oracles: the passive-reaction
// baseline (a state-masked view of the trained actor), a brute-force static
// placement search, and trivial hold/random policies.

namespace uavrl::baselines {

// Passive baseline: the trained actor driven through a masked state. UAVs
// that are still serving are shown with full energy and an active flag, so
// the policy cannot anticipate a depleting battery; a UAV that has quit
// passes through unmasked (true frozen position, energy and flag), which is
// what finally triggers relocation.
class PassiveWrapper {
public:
    PassiveWrapper(const nn::DenseNet& actor, const env::Environment& environment);

    // The masked encoded state the wrapped actor actually sees.
    std::vector<double> masked_encoding(const std::vector<env::UavState>& state) const;

    env::Action act(const std::vector<env::UavState>& state) const;

private:
    const nn::DenseNet* actor_;
    const env::Environment* env_;
};

struct OraclePlacement {
    std::size_t n_uavs = 0;
    double grid_units = 0.0;
    std::vector<channel::Position> best_positions;
    double best_score = -1.0;
    std::uint64_t evaluations = 0;
};

// Exhaustive search over the (L/g + 1)^(2K) grid placements of K UAVs,
// scoring each with the channel association on the scenario users. Ties
// break to the lexicographically smallest position tuple. Refuses with the
// required budget when the grid exceeds max_evaluations.
OraclePlacement oracle_search(const env::Scenario& scenario, std::size_t n_uavs,
                              double grid_units, double altitude_units, double aperture_rad,
                              double beta, const channel::ChannelConfig& cfg,
                              std::uint64_t max_evaluations = 100'000'000);

nlohmann::json oracle_to_json(const OraclePlacement& p);

// d = 0 always: UAVs hold position.
env::Action still_action(std::size_t n_uavs);

// Uniform direction and distance within bounds.
env::Action random_action(std::size_t n_uavs, double max_distance_units, Rng& rng);

} // namespace uavrl::baselines
