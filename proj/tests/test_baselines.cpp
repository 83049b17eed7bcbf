#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "uavrl/baselines.hpp"
#include "uavrl/errors.hpp"

using namespace uavrl;
using namespace uavrl::baselines;

namespace {

constexpr double kDeg60 = std::numbers::pi / 3.0;

env::Environment small_env(const env::Scenario& scenario, std::size_t n_uavs,
                           double low_energy = 0.0, std::size_t n_epochs = 50) {
    env::EnvConfig ec;
    ec.n_uavs = n_uavs;
    ec.n_epochs = n_epochs;
    ec.initial_energy_unit_s.assign(n_uavs, 2000.0);
    if (low_energy > 0.0) ec.initial_energy_unit_s[0] = low_energy;
    energy::EnergyConfig en;
    en.finalize();
    return env::Environment(scenario, ec, channel::ChannelConfig{}, en);
}

} // namespace

TEST_CASE("passive masking: active UAVs look fully charged, quit UAVs pass through") {
    const auto scenario = env::generate_scenario(3, 10, 10.0, 0.8, 2, 0.7, 250e3);
    const auto environment = small_env(scenario, 2, 520.0);
    const auto actor = nn::init_net({8, 16, 4}, nn::Head::Tanh, 5);
    const PassiveWrapper wrapper(actor, environment);

    std::vector<env::UavState> state{{2.0, 3.0, 300.0, true}, {7.0, 8.0, 1200.0, true}};
    const auto masked = wrapper.masked_encoding(state);
    const auto truth = environment.encode_state(state);
    REQUIRE(masked.size() == 8);
    // positions pass through
    CHECK(masked[0] == truth[0]);
    CHECK(masked[1] == truth[1]);
    CHECK(masked[2] == truth[2]);
    CHECK(masked[3] == truth[3]);
    // energies are shown full, flags active
    CHECK(masked[4] == 1.0);
    CHECK(masked[5] == 1.0);
    CHECK(masked[6] == 1.0);
    CHECK(masked[7] == 1.0);
    CHECK(truth[4] < 1.0); // the real energies are not full

    // after UAV 0 quits, its components pass through unmasked
    state[0].active = false;
    state[0].residual_unit_s = 140.0;
    const auto masked2 = wrapper.masked_encoding(state);
    const auto truth2 = environment.encode_state(state);
    CHECK(masked2[4] == truth2[4]); // frozen energy (clamped to 0)
    CHECK(masked2[6] == truth2[6]); // q = 0 visible
    CHECK(masked2[5] == 1.0);       // the surviving UAV stays masked
    CHECK(masked2[7] == 1.0);
}

TEST_CASE("passive wrapper is the identity at full energy") {
    const auto scenario = env::generate_scenario(4, 10, 10.0, 0.8, 2, 0.7, 250e3);
    const auto environment = small_env(scenario, 2);
    const auto actor = nn::init_net({8, 16, 4}, nn::Head::Tanh, 7);
    const PassiveWrapper wrapper(actor, environment);

    std::vector<env::UavState> state{{2.0, 3.0, 2000.0, true}, {7.0, 8.0, 2000.0, true}};
    CHECK(wrapper.masked_encoding(state) == environment.encode_state(state));

    const auto wrapped = wrapper.act(state);
    const auto direct =
        environment.decode_action(nn::forward(actor, environment.encode_state(state)));
    CHECK(wrapped.direction_rad == direct.direction_rad);
    CHECK(wrapped.distance_units == direct.distance_units);
}

TEST_CASE("passive wrapper rejects mismatched actor dimensions") {
    const auto scenario = env::generate_scenario(5, 10, 10.0, 0.8, 2, 0.7, 250e3);
    const auto environment = small_env(scenario, 2);
    const auto wrong = nn::init_net({12, 16, 6}, nn::Head::Tanh, 9);
    CHECK_THROWS_AS(PassiveWrapper(wrong, environment), DimensionError);
}

TEST_CASE("oracle: a single user is covered by the best single placement") {
    env::Scenario s;
    s.area_side_units = 3.0;
    s.users.push_back({1.2, 0.8, 250e3});
    const channel::ChannelConfig cfg;

    const auto result = oracle_search(s, 1, 0.25, 3.0, kDeg60, 2.0, cfg);
    CHECK(result.best_score == 1.0);
    REQUIRE(result.best_positions.size() == 1);
    const double dx = result.best_positions[0].x_units - 1.2;
    const double dy = result.best_positions[0].y_units - 0.8;
    const double radius = channel::coverage_radius_units(3.0, kDeg60);
    CHECK(std::sqrt(dx * dx + dy * dy) <= radius);
    CHECK(result.evaluations == 169); // (3/0.25 + 1)^2
}

TEST_CASE("oracle: users inside one disk give a perfect score") {
    env::Scenario s;
    s.area_side_units = 3.0;
    for (int i = 0; i < 8; ++i)
        s.users.push_back({1.0 + 0.1 * i, 1.0, 250e3});
    const channel::ChannelConfig cfg;
    const auto result = oracle_search(s, 1, 0.5, 3.0, kDeg60, 2.0, cfg);
    CHECK(result.best_score == 1.0);
}

TEST_CASE("oracle: tie-break picks the lexicographically smallest tuple") {
    // An empty coverage problem: every placement scores 0, so the winner is
    // the very first tuple.
    env::Scenario s;
    s.area_side_units = 2.0;
    s.users.push_back({0.5, 0.5, 250e3}); // off-grid
    channel::ChannelConfig cfg;
    // shrink the disk to nothing so no placement covers the user
    const auto result = oracle_search(s, 2, 1.0, 0.001, 0.01, 2.0, cfg);
    CHECK(result.best_score == 0.0);
    REQUIRE(result.best_positions.size() == 2);
    CHECK(result.best_positions[0].x_units == 0.0);
    CHECK(result.best_positions[0].y_units == 0.0);
    CHECK(result.best_positions[1].x_units == 0.0);
    CHECK(result.best_positions[1].y_units == 0.0);
}

TEST_CASE("oracle: budget refusal carries the required size") {
    env::Scenario s;
    s.area_side_units = 10.0;
    s.users.push_back({5.0, 5.0, 250e3});
    const channel::ChannelConfig cfg;
    CHECK_THROWS_WITH_AS(oracle_search(s, 3, 0.5, 3.0, kDeg60, 2.0, cfg, 1000),
                         doctest::Contains("budget"), BudgetError);
}

TEST_CASE("oracle best score equals the env zero-movement re-evaluation, exactly") {
    const auto scenario = env::generate_scenario(11, 10, 3.0, 0.8, 2, 0.5, 250e3);
    const channel::ChannelConfig cfg;
    for (std::size_t k : {1u, 2u}) {
        const auto placement = oracle_search(scenario, k, 0.25, 3.0, kDeg60, 2.0, cfg);

        const auto environment = small_env(scenario, k);
        std::vector<env::UavState> state;
        for (const auto& p : placement.best_positions)
            state.push_back({p.x_units, p.y_units, 2000.0, true});
        const auto out = environment.step(state, still_action(k), 1);
        CHECK(out.reward == placement.best_score); // bitwise equal
    }
}

TEST_CASE("still policy holds position and burns exactly the hover budget") {
    const auto scenario = env::generate_scenario(13, 10, 10.0, 0.8, 2, 0.7, 250e3);
    const auto environment = small_env(scenario, 2);
    auto state = environment.reset(4);
    const auto x0 = state[0].x_units;
    const auto y0 = state[0].y_units;
    for (std::size_t t = 1; t <= 10; ++t) {
        const auto out = environment.step(state, still_action(2), t);
        CHECK(out.next_state[0].x_units == x0);
        CHECK(out.next_state[0].y_units == y0);
        CHECK(out.ledger[0].consumed_unit_s == doctest::Approx(10.0).epsilon(1e-12));
        state = out.next_state;
    }
    CHECK(state[0].residual_unit_s == doctest::Approx(2000.0 - 100.0).epsilon(1e-12));
}

TEST_CASE("random policy is reproducible and in bounds") {
    Rng a(99), b(99);
    for (int rep = 0; rep < 50; ++rep) {
        const auto act_a = random_action(3, 1.0, a);
        const auto act_b = random_action(3, 1.0, b);
        CHECK(act_a.direction_rad == act_b.direction_rad);
        CHECK(act_a.distance_units == act_b.distance_units);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(act_a.direction_rad[i] >= 0.0);
            CHECK(act_a.direction_rad[i] < 2.0 * std::numbers::pi);
            CHECK(act_a.distance_units[i] >= 0.0);
            CHECK(act_a.distance_units[i] <= 1.0);
        }
    }
}
