#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "uavrl/channel.hpp"
#include "uavrl/errors.hpp"
#include "uavrl/rng.hpp"

using namespace uavrl;
using namespace uavrl::channel;

namespace {

ChannelConfig table_cfg() { return ChannelConfig{}; } // defaults are the reference table

constexpr double kDeg60 = std::numbers::pi / 3.0;

// Independent association oracle: same per-user rule (best SINR with enough
// free RBs, users in descending best-SINR order), written naively against
// the public scalar ops.
struct NaiveAssoc {
    std::vector<std::optional<std::size_t>> serving;
    std::size_t served = 0;
};

NaiveAssoc naive_associate(const std::vector<User>& users,
                           const std::vector<Position>& positions, double h, double theta,
                           const ChannelConfig& cfg) {
    NaiveAssoc out;
    out.serving.assign(users.size(), std::nullopt);
    if (positions.empty()) return out;
    const double radius = coverage_radius_units(h, theta);

    std::vector<double> best(users.size(), -1.0);
    std::vector<std::vector<std::size_t>> covers(users.size());
    for (std::size_t u = 0; u < users.size(); ++u) {
        covers[u] = covering_set(users[u], positions, radius);
        for (std::size_t i : covers[u])
            best[u] = std::max(best[u], sinr_linear(users[u], i, covers[u], positions, h, cfg));
    }

    std::vector<std::size_t> order;
    for (std::size_t u = 0; u < users.size(); ++u)
        if (!covers[u].empty()) order.push_back(u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return best[a] > best[b]; });

    std::vector<int> free_rbs(positions.size(), cfg.rbs_per_uav);
    for (std::size_t u : order) {
        // candidates by descending SINR, lower index first on ties
        std::vector<std::pair<double, std::size_t>> cands;
        for (std::size_t i : covers[u])
            cands.push_back({sinr_linear(users[u], i, covers[u], positions, h, cfg), i});
        std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (const auto& [s, i] : cands) {
            const auto need = rb_demand(s, cfg, users[u].required_rate_bps);
            if (need && free_rbs[i] >= *need) {
                free_rbs[i] -= *need;
                out.serving[u] = i;
                ++out.served;
                break;
            }
        }
    }
    return out;
}

// Exhaustive max-served over every assignment of users to covering UAVs.
std::size_t enumerate_max_served(const std::vector<User>& users,
                                 const std::vector<Position>& positions, double h,
                                 double theta, const ChannelConfig& cfg) {
    const double radius = coverage_radius_units(h, theta);
    const std::size_t n = users.size();
    std::vector<std::vector<std::pair<std::size_t, int>>> options(n); // (uav, demand)
    for (std::size_t u = 0; u < n; ++u) {
        const auto covers = covering_set(users[u], positions, radius);
        for (std::size_t i : covers) {
            const double s = sinr_linear(users[u], i, covers, positions, h, cfg);
            if (const auto need = rb_demand(s, cfg, users[u].required_rate_bps))
                options[u].push_back({i, *need});
        }
    }
    std::size_t best = 0;
    std::vector<int> free_rbs(positions.size(), cfg.rbs_per_uav);
    // assignment[u] in [0, options[u].size()]: last value = unserved
    auto rec = [&](auto&& self, std::size_t u, std::size_t served) -> void {
        if (u == n) {
            best = std::max(best, served);
            return;
        }
        for (const auto& [i, need] : options[u]) {
            if (free_rbs[i] >= need) {
                free_rbs[i] -= need;
                self(self, u + 1, served + 1);
                free_rbs[i] += need;
            }
        }
        self(self, u + 1, served); // leave unserved
    };
    rec(rec, 0, 0);
    return best;
}

} // namespace

TEST_CASE("path loss matches the scalar oracle") {
    const auto cfg = table_cfg();
    CHECK(path_loss_db(300.0, cfg) == doctest::Approx(89.0106).epsilon(1e-4));
    CHECK(path_loss_db(424.264, cfg) == doctest::Approx(92.0209).epsilon(1e-4));
    // doubling the distance adds 20*log10(2)
    CHECK(path_loss_db(600.0, cfg) - path_loss_db(300.0, cfg) ==
          doctest::Approx(6.0206).epsilon(1e-6));
    CHECK_THROWS_AS(path_loss_db(0.0, cfg), DomainError);
    CHECK_THROWS_AS(path_loss_db(-5.0, cfg), DomainError);
}

TEST_CASE("path loss is strictly increasing in distance and frequency") {
    auto cfg = table_cfg();
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double d = rng.uniform(1.0, 2000.0);
        const double delta = rng.uniform(0.1, 100.0);
        CHECK(path_loss_db(d + delta, cfg) > path_loss_db(d, cfg));
        auto cfg2 = cfg;
        cfg2.carrier_frequency_hz *= 1.0 + rng.uniform(0.01, 1.0);
        CHECK(path_loss_db(d, cfg2) > path_loss_db(d, cfg));
    }
}

TEST_CASE("channel gain follows the configured exponent convention") {
    auto cfg = table_cfg();
    CHECK(channel_gain(0.0, cfg) == 1.0);
    CHECK(channel_gain(20.0, cfg) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(channel_gain(89.0106, cfg) == doctest::Approx(3.5438e-5).epsilon(1e-3));
    cfg.gain_divisor = 10;
    CHECK(channel_gain(20.0, cfg) == doctest::Approx(0.01).epsilon(1e-12));
    cfg.gain_divisor = 15;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("coverage radius") {
    CHECK(coverage_radius_units(3.0, kDeg60) == doctest::Approx(1.7320508).epsilon(1e-6));
    CHECK(coverage_radius_units(1.0, std::numbers::pi / 2.0) == doctest::Approx(1.0));
    CHECK(coverage_radius_units(3.0, 1e-9) < 1e-8);
    CHECK_THROWS_AS(coverage_radius_units(3.0, 0.0), DomainError);
    CHECK_THROWS_AS(coverage_radius_units(3.0, std::numbers::pi), DomainError);
}

TEST_CASE("covering set uses a closed disk") {
    const User user{5.0, 5.0, 250e3};
    std::vector<Position> uavs{{5.0, 5.0}, {6.0, 5.0}, {9.0, 5.0}};
    // radius exactly 1: the UAV at distance 1 is included
    auto covering = covering_set(user, uavs, 1.0);
    REQUIRE(covering.size() == 2);
    CHECK(covering[0] == 0);
    CHECK(covering[1] == 1);
    // far from everything
    CHECK(covering_set(User{0.0, 0.0, 250e3}, {{9.0, 9.0}}, 1.0).empty());
}

TEST_CASE("sinr: solo coverage gives the scalar-oracle SNR") {
    const auto cfg = table_cfg();
    const User user{5.0, 5.0, 250e3};
    const std::vector<Position> uavs{{5.0, 5.0}}; // directly above, d = 300 m
    const double snr = sinr_linear(user, 0, {0}, uavs, 3.0, cfg);
    CHECK(snr == doctest::Approx(9.9878e7).epsilon(1e-3));
    CHECK(10.0 * std::log10(snr) == doctest::Approx(79.9947).epsilon(1e-4));
}

TEST_CASE("sinr: equidistant interferer halves the budget to ~0 dB") {
    const auto cfg = table_cfg();
    const User user{5.0, 5.0, 250e3};
    const std::vector<Position> uavs{{4.0, 5.0}, {6.0, 5.0}};
    const double s = sinr_linear(user, 0, {0, 1}, uavs, 3.0, cfg);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6)); // noise negligible here
}

TEST_CASE("sinr: serving UAV must cover the user") {
    const auto cfg = table_cfg();
    const User user{5.0, 5.0, 250e3};
    const std::vector<Position> uavs{{5.0, 5.0}, {9.0, 9.0}};
    CHECK_THROWS_AS(sinr_linear(user, 1, {0}, uavs, 3.0, cfg), ContractError);
}

TEST_CASE("adding an interferer never raises SINR") {
    const auto cfg = table_cfg();
    Rng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const User user{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0), 250e3};
        std::vector<Position> uavs{{user.x_units, user.y_units}};
        std::vector<std::size_t> covering{0};
        double prev = sinr_linear(user, 0, covering, uavs, 3.0, cfg);
        for (int extra = 1; extra <= 3; ++extra) {
            uavs.push_back({rng.uniform(user.x_units - 1.5, user.x_units + 1.5),
                            rng.uniform(user.y_units - 1.5, user.y_units + 1.5)});
            covering.push_back(static_cast<std::size_t>(extra));
            const double cur = sinr_linear(user, 0, covering, uavs, 3.0, cfg);
            CHECK(cur <= prev);
            prev = cur;
        }
    }
}

TEST_CASE("rb demand") {
    const auto cfg = table_cfg();
    auto demand = rb_demand(1e8, cfg, 250e3);
    REQUIRE(demand.has_value());
    CHECK(*demand == 1);

    // boundary met with equality: sinr = 3 gives exactly 2 bits/s/Hz
    auto boundary = rb_demand(3.0, cfg, 2.0 * cfg.rb_bandwidth_hz);
    REQUIRE(boundary.has_value());
    CHECK(*boundary == 1);

    CHECK(!rb_demand(0.0, cfg, 250e3).has_value());

    // a low-SINR user needs several RBs
    auto multi = rb_demand(0.5, cfg, 250e3); // 0.585 bits/s/Hz -> 105.4 kbps per RB
    REQUIRE(multi.has_value());
    CHECK(*multi == 3);

    // infeasible once the demand would exceed one UAV's pool
    auto cfg_small = cfg;
    cfg_small.rbs_per_uav = 2;
    CHECK(!rb_demand(0.5, cfg_small, 250e3).has_value());
}

TEST_CASE("associate: basic outcomes") {
    const auto cfg = table_cfg();
    const std::vector<User> one_user{{5.0, 5.0, 250e3}};

    auto served = associate(one_user, {{5.2, 5.1}}, 3.0, kDeg60, cfg);
    CHECK(served.served_count == 1);
    CHECK(served.serving_uav[0] == 0);
    CHECK(served.rbs_used[0] == 1);
    CHECK(served.rbs_free[0] == cfg.rbs_per_uav - 1);

    auto unserved = associate(one_user, {{9.9, 9.9}}, 3.0, kDeg60, cfg);
    CHECK(unserved.served_count == 0);
    CHECK(!unserved.serving_uav[0].has_value());

    auto empty = associate(one_user, {}, 3.0, kDeg60, cfg);
    CHECK(empty.served_count == 0);
}

TEST_CASE("associate: 26 co-located single-RB users saturate a 25-RB UAV") {
    const auto cfg = table_cfg();
    std::vector<User> users(26, User{5.0, 5.0, 250e3});
    const auto result = associate(users, {{5.0, 5.0}}, 3.0, kDeg60, cfg);
    CHECK(result.served_count == 25);
    CHECK(result.rbs_free[0] == 0);
    // ties broke by index: the last user is the one left out
    CHECK(!result.serving_uav[25].has_value());
}

TEST_CASE("associate is deterministic and never over-allocates") {
    Rng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        auto cfg = table_cfg();
        cfg.rbs_per_uav = 1 + static_cast<int>(rng.bounded(25));
        const std::size_t n_users = 1 + rng.bounded(12);
        const std::size_t n_uavs = 1 + rng.bounded(4);
        std::vector<User> users;
        for (std::size_t u = 0; u < n_users; ++u)
            users.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0),
                             rng.uniform(100e3, 2e6)});
        std::vector<Position> uavs;
        for (std::size_t i = 0; i < n_uavs; ++i)
            uavs.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)});

        const auto a = associate(users, uavs, 3.0, kDeg60, cfg);
        const auto b = associate(users, uavs, 3.0, kDeg60, cfg);
        CHECK(a.serving_uav == b.serving_uav);
        CHECK(a.rbs_used == b.rbs_used);

        std::vector<int> used(n_uavs, 0);
        for (std::size_t u = 0; u < n_users; ++u)
            if (a.serving_uav[u]) used[*a.serving_uav[u]] += a.rbs_used[u];
        for (std::size_t i = 0; i < n_uavs; ++i) {
            CHECK(used[i] <= cfg.rbs_per_uav);
            CHECK(used[i] + a.rbs_free[i] == cfg.rbs_per_uav);
        }
        CHECK(a.served_count ==
              static_cast<std::size_t>(std::count_if(a.serving_uav.begin(), a.serving_uav.end(),
                                                     [](const auto& s) { return s.has_value(); })));
    }
}

TEST_CASE("associate matches the naive rule-for-rule oracle") {
    Rng rng(29);
    for (int rep = 0; rep < 200; ++rep) {
        auto cfg = table_cfg();
        cfg.rbs_per_uav = 1 + static_cast<int>(rng.bounded(4)); // scarce capacity
        const std::size_t n_users = 1 + rng.bounded(10);
        const std::size_t n_uavs = 1 + rng.bounded(3);
        std::vector<User> users;
        for (std::size_t u = 0; u < n_users; ++u)
            users.push_back({rng.uniform(0.0, 6.0), rng.uniform(0.0, 6.0),
                             rng.uniform(100e3, 800e3)});
        std::vector<Position> uavs;
        for (std::size_t i = 0; i < n_uavs; ++i)
            uavs.push_back({rng.uniform(0.0, 6.0), rng.uniform(0.0, 6.0)});

        const auto got = associate(users, uavs, 3.0, kDeg60, cfg);
        const auto want = naive_associate(users, uavs, 3.0, kDeg60, cfg);
        CHECK(got.served_count == want.served);
        for (std::size_t u = 0; u < n_users; ++u) CHECK(got.serving_uav[u] == want.serving[u]);
    }
}

TEST_CASE("associate is optimal when capacity is abundant (enumeration oracle)") {
    Rng rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        auto cfg = table_cfg(); // 25 RBs vs <= 6 users: capacity never binds
        const std::size_t n_users = 1 + rng.bounded(6);
        const std::size_t n_uavs = 1 + rng.bounded(3);
        std::vector<User> users;
        for (std::size_t u = 0; u < n_users; ++u)
            users.push_back({rng.uniform(0.0, 6.0), rng.uniform(0.0, 6.0), 250e3});
        std::vector<Position> uavs;
        for (std::size_t i = 0; i < n_uavs; ++i)
            uavs.push_back({rng.uniform(0.0, 6.0), rng.uniform(0.0, 6.0)});

        const auto got = associate(users, uavs, 3.0, kDeg60, cfg);
        const auto max_served = enumerate_max_served(users, uavs, 3.0, kDeg60, cfg);
        CHECK(got.served_count == max_served);
    }
}

TEST_CASE("greedy never beats the enumerated optimum under scarce capacity") {
    Rng rng(37);
    for (int rep = 0; rep < 40; ++rep) {
        auto cfg = table_cfg();
        cfg.rbs_per_uav = 1 + static_cast<int>(rng.bounded(2));
        const std::size_t n_users = 1 + rng.bounded(6);
        const std::size_t n_uavs = 1 + rng.bounded(3);
        std::vector<User> users;
        for (std::size_t u = 0; u < n_users; ++u)
            users.push_back({rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0), 250e3});
        std::vector<Position> uavs;
        for (std::size_t i = 0; i < n_uavs; ++i)
            uavs.push_back({rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)});
        const auto got = associate(users, uavs, 3.0, kDeg60, cfg);
        CHECK(got.served_count <= enumerate_max_served(users, uavs, 3.0, kDeg60, cfg));
    }
}

TEST_CASE("removing the only covering UAV can only lose users (no interference)") {
    Rng rng(41);
    const auto cfg = table_cfg();
    for (int rep = 0; rep < 30; ++rep) {
        // two UAVs far apart: disks never overlap, so no interference
        std::vector<Position> uavs{{1.5, 1.5}, {8.5, 8.5}};
        std::vector<User> users;
        const std::size_t n_users = 1 + rng.bounded(10);
        for (std::size_t u = 0; u < n_users; ++u)
            users.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0), 250e3});
        const auto both = associate(users, uavs, 3.0, kDeg60, cfg);
        const auto only_first = associate(users, {uavs[0]}, 3.0, kDeg60, cfg);
        CHECK(only_first.served_count <= both.served_count);
    }
}

TEST_CASE("satisfaction score") {
    CHECK(satisfaction_score(78, 100, 2.0) == doctest::Approx(0.6084).epsilon(1e-12));
    CHECK(satisfaction_score(71, 100, 2.0) == doctest::Approx(0.5041).epsilon(1e-12));
    CHECK(satisfaction_score(0, 100, 2.0) == 0.0);
    CHECK(satisfaction_score(100, 100, 2.0) == 1.0);
    CHECK_THROWS_AS(satisfaction_score(1, 0, 2.0), DomainError);
    CHECK_THROWS_AS(satisfaction_score(5, 4, 2.0), ContractError);
    CHECK_THROWS_AS(satisfaction_score(1, 2, 0.0), DomainError);

    // monotone in served_count, and exactly (served/N)^beta
    for (std::size_t s = 1; s <= 100; ++s) {
        CHECK(satisfaction_score(s, 100, 2.0) > satisfaction_score(s - 1, 100, 2.0));
        CHECK(satisfaction_score(s, 100, 2.0) ==
              std::pow(static_cast<double>(s) / 100.0, 2.0));
    }
}
