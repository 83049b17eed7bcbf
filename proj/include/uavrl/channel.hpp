#pragma once

#include <cstddef>
#include <optional>
#include <vector>

// Closed-form radio model: free-space path loss with an extra-loss term,
// SINR over disk-shaped coverage areas, integer resource-block association,
// and the user satisfaction score. All positions are in area units
// (1 unit = 100 m); link distances are in metres.

namespace uavrl::channel {

constexpr double kMetersPerUnit = 100.0;

struct ChannelConfig {
    double carrier_frequency_hz = 2.0e9;
    double light_speed_m_per_s = 2.998e8;
    double extra_loss_db = 1.0;           // line-of-sight excess loss
    double tx_psd_dbm_per_hz = -49.5;
    double noise_psd_dbm_per_hz = -174.0;
    double rb_bandwidth_hz = 180.0e3;
    int rbs_per_uav = 25;                 // 4.5 MHz / 180 kHz
    int gain_divisor = 20;                // exponent convention: 10^(-PL/divisor)

    // dBm/Hz converted once; all SINR arithmetic is linear mW/Hz.
    double tx_psd_mw_per_hz() const;
    double noise_psd_mw_per_hz() const;

    void validate() const; // throws ConfigError
};

struct User {
    double x_units = 0.0;
    double y_units = 0.0;
    double required_rate_bps = 250.0e3;
};

struct Position {
    double x_units = 0.0;
    double y_units = 0.0;
};

struct AssociationResult {
    std::vector<std::optional<std::size_t>> serving_uav; // per user
    std::vector<int> rbs_used;                           // per user, 0 when unserved
    std::size_t served_count = 0;
    std::vector<int> rbs_free;                           // per UAV
};

double dbm_to_linear_mw(double dbm);

// 20*log10(4*pi*f_c*d/c) + extra_loss. distance must be > 0.
double path_loss_db(double distance_3d_m, const ChannelConfig& cfg);

// 10^(-pl/divisor)
double channel_gain(double pl_db, const ChannelConfig& cfg);

// Ground disk radius H*tan(theta/2); aperture must lie in (0, pi).
double coverage_radius_units(double altitude_units, double aperture_rad);

// Indices of UAVs whose horizontal distance to the user is <= radius
// (closed disk; compared on squared distances). Caller passes active UAVs.
std::vector<std::size_t> covering_set(const User& user,
                                      const std::vector<Position>& uav_positions,
                                      double radius_units);

// SINR of `serving` towards the user, interference from every other UAV in
// the covering set. `serving` must be a member of `covering`.
double sinr_linear(const User& user, std::size_t serving,
                   const std::vector<std::size_t>& covering,
                   const std::vector<Position>& uav_positions,
                   double altitude_units, const ChannelConfig& cfg);

// Smallest RB count n with n * rb_bandwidth * log2(1 + sinr) >= rate;
// nullopt when n would exceed rbs_per_uav.
std::optional<int> rb_demand(double sinr_linear_value, const ChannelConfig& cfg,
                             double required_rate_bps);

// Greedy best-SINR association with integer RB bookkeeping. Users are
// processed in descending order of their best achievable SINR (ties: lower
// user index first); a user rejected for lack of free RBs falls back to the
// next-best covering UAV.
AssociationResult associate(const std::vector<User>& users,
                            const std::vector<Position>& active_positions,
                            double altitude_units, double aperture_rad,
                            const ChannelConfig& cfg);

// (served / total)^beta. total must be >= 1.
double satisfaction_score(std::size_t served_count, std::size_t total_users, double beta);

} // namespace uavrl::channel
