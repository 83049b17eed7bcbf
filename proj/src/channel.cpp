#include "uavrl/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uavrl/errors.hpp"

namespace uavrl::channel {

double dbm_to_linear_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double ChannelConfig::tx_psd_mw_per_hz() const { return dbm_to_linear_mw(tx_psd_dbm_per_hz); }
double ChannelConfig::noise_psd_mw_per_hz() const { return dbm_to_linear_mw(noise_psd_dbm_per_hz); }

void ChannelConfig::validate() const {
    if (!(carrier_frequency_hz > 0.0))
        throw ConfigError("channel: carrier_frequency_hz must be > 0");
    if (!(light_speed_m_per_s > 0.0))
        throw ConfigError("channel: light_speed_m_per_s must be > 0");
    if (!(rb_bandwidth_hz > 0.0))
        throw ConfigError("channel: rb_bandwidth_hz must be > 0");
    if (rbs_per_uav < 1)
        throw ConfigError("channel: rbs_per_uav must be >= 1");
    if (gain_divisor != 20 && gain_divisor != 10)
        throw ConfigError("channel: gain_divisor must be 20 or 10, got " +
                          std::to_string(gain_divisor));
}

double path_loss_db(double distance_3d_m, const ChannelConfig& cfg) {
    if (!(distance_3d_m > 0.0))
        throw DomainError("path_loss_db: distance must be > 0, got " +
                          std::to_string(distance_3d_m));
    const double ratio = 4.0 * std::numbers::pi * cfg.carrier_frequency_hz *
                         distance_3d_m / cfg.light_speed_m_per_s;
    return 20.0 * std::log10(ratio) + cfg.extra_loss_db;
}

double channel_gain(double pl_db, const ChannelConfig& cfg) {
    return std::pow(10.0, -pl_db / static_cast<double>(cfg.gain_divisor));
}

double coverage_radius_units(double altitude_units, double aperture_rad) {
    if (!(aperture_rad > 0.0) || !(aperture_rad < std::numbers::pi))
        throw DomainError("coverage_radius_units: aperture must lie in (0, pi), got " +
                          std::to_string(aperture_rad));
    return altitude_units * std::tan(aperture_rad / 2.0);
}

std::vector<std::size_t> covering_set(const User& user,
                                      const std::vector<Position>& uav_positions,
                                      double radius_units) {
    std::vector<std::size_t> covering;
    const double r2 = radius_units * radius_units;
    for (std::size_t i = 0; i < uav_positions.size(); ++i) {
        const double dx = uav_positions[i].x_units - user.x_units;
        const double dy = uav_positions[i].y_units - user.y_units;
        if (dx * dx + dy * dy <= r2) covering.push_back(i);
    }
    return covering;
}

namespace {

// Received psd (mW/Hz) from UAV i at the user's position.
double rx_psd_mw_per_hz(const User& user, const Position& uav,
                        double altitude_units, const ChannelConfig& cfg) {
    const double dx = (uav.x_units - user.x_units) * kMetersPerUnit;
    const double dy = (uav.y_units - user.y_units) * kMetersPerUnit;
    const double h = altitude_units * kMetersPerUnit;
    const double d3 = std::sqrt(dx * dx + dy * dy + h * h);
    return cfg.tx_psd_mw_per_hz() * channel_gain(path_loss_db(d3, cfg), cfg);
}

} // namespace

double sinr_linear(const User& user, std::size_t serving,
                   const std::vector<std::size_t>& covering,
                   const std::vector<Position>& uav_positions,
                   double altitude_units, const ChannelConfig& cfg) {
    bool member = false;
    double signal = 0.0;
    double interference = 0.0;
    for (std::size_t idx : covering) {
        const double p = rx_psd_mw_per_hz(user, uav_positions.at(idx), altitude_units, cfg);
        if (idx == serving) {
            member = true;
            signal = p;
        } else {
            interference += p;
        }
    }
    if (!member)
        throw ContractError("sinr_linear: serving UAV " + std::to_string(serving) +
                            " is not in the covering set");
    return signal / (cfg.noise_psd_mw_per_hz() + interference);
}

std::optional<int> rb_demand(double sinr_linear_value, const ChannelConfig& cfg,
                             double required_rate_bps) {
    if (!(sinr_linear_value >= 0.0))
        throw ContractError("rb_demand: sinr must be >= 0");
    const double rate_per_rb = cfg.rb_bandwidth_hz * std::log2(1.0 + sinr_linear_value);
    if (!(rate_per_rb > 0.0)) return std::nullopt;
    const int n = static_cast<int>(std::ceil(required_rate_bps / rate_per_rb));
    const int demand = std::max(n, 1);
    if (demand > cfg.rbs_per_uav) return std::nullopt;
    return demand;
}

AssociationResult associate(const std::vector<User>& users,
                            const std::vector<Position>& active_positions,
                            double altitude_units, double aperture_rad,
                            const ChannelConfig& cfg) {
    const std::size_t n_users = users.size();
    const std::size_t n_uavs = active_positions.size();

    AssociationResult result;
    result.serving_uav.assign(n_users, std::nullopt);
    result.rbs_used.assign(n_users, 0);
    result.rbs_free.assign(n_uavs, cfg.rbs_per_uav);
    if (n_uavs == 0 || n_users == 0) return result;

    const double radius = coverage_radius_units(altitude_units, aperture_rad);

    // Candidate UAVs per user, sorted by descending SINR (ties: lower index).
    struct Candidate {
        std::size_t uav;
        double sinr;
    };
    std::vector<std::vector<Candidate>> candidates(n_users);
    std::vector<double> best_sinr(n_users, -1.0);
    for (std::size_t u = 0; u < n_users; ++u) {
        const auto covering = covering_set(users[u], active_positions, radius);
        for (std::size_t idx : covering) {
            const double s =
                sinr_linear(users[u], idx, covering, active_positions, altitude_units, cfg);
            candidates[u].push_back({idx, s});
        }
        std::sort(candidates[u].begin(), candidates[u].end(),
                  [](const Candidate& a, const Candidate& b) {
                      if (a.sinr != b.sinr) return a.sinr > b.sinr;
                      return a.uav < b.uav;
                  });
        if (!candidates[u].empty()) best_sinr[u] = candidates[u].front().sinr;
    }

    std::vector<std::size_t> order;
    order.reserve(n_users);
    for (std::size_t u = 0; u < n_users; ++u)
        if (!candidates[u].empty()) order.push_back(u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (best_sinr[a] != best_sinr[b]) return best_sinr[a] > best_sinr[b];
        return a < b;
    });

    for (std::size_t u : order) {
        for (const Candidate& cand : candidates[u]) {
            const auto demand = rb_demand(cand.sinr, cfg, users[u].required_rate_bps);
            if (!demand) continue;
            if (result.rbs_free[cand.uav] < *demand) continue;
            result.serving_uav[u] = cand.uav;
            result.rbs_used[u] = *demand;
            result.rbs_free[cand.uav] -= *demand;
            ++result.served_count;
            break;
        }
    }
    return result;
}

double satisfaction_score(std::size_t served_count, std::size_t total_users, double beta) {
    if (total_users == 0)
        throw DomainError("satisfaction_score: total_users must be >= 1");
    if (served_count > total_users)
        throw ContractError("satisfaction_score: served_count exceeds total_users");
    if (!(beta > 0.0))
        throw DomainError("satisfaction_score: beta must be > 0");
    const double fraction =
        static_cast<double>(served_count) / static_cast<double>(total_users);
    return std::pow(fraction, beta);
}

} // namespace uavrl::channel
