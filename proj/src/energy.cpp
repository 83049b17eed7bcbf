#include "uavrl/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uavrl/errors.hpp"

namespace uavrl::energy {

double level_power_watt(double speed_m_s, const EnergyConfig& cfg) {
    if (!(speed_m_s >= 0.0))
        throw DomainError("level_power_watt: speed must be >= 0");
    const double w = cfg.uav_weight_newton;
    const double rho_a = cfg.air_density_kg_m3 * cfg.rotor_area_m2;
    const double vh2 = w / (2.0 * rho_a); // hover induced velocity, squared
    const double v2 = speed_m_s * speed_m_s;
    const double inner = std::sqrt(v2 * v2 + 4.0 * vh2 * vh2);
    return w / (std::sqrt(2.0) * rho_a) / std::sqrt(v2 + inner);
}

void EnergyConfig::finalize() { power_unit_watt = level_power_watt(0.0, *this); }

void EnergyConfig::validate() const {
    if (!(uav_weight_newton > 0.0)) throw ConfigError("energy: uav_weight_newton must be > 0");
    if (!(air_density_kg_m3 > 0.0)) throw ConfigError("energy: air_density_kg_m3 must be > 0");
    if (!(rotor_area_m2 > 0.0)) throw ConfigError("energy: rotor_area_m2 must be > 0");
    if (!(level_speed_m_s > 0.0)) throw ConfigError("energy: level_speed_m_s must be > 0");
    if (!(slot_seconds > 0.0)) throw ConfigError("energy: slot_seconds must be > 0");
    if (!(max_fly_seconds > 0.0) || !(max_fly_seconds < slot_seconds))
        throw ConfigError("energy: max_fly_seconds must lie in (0, slot_seconds)");
    if (!(quit_threshold_unit_s > 0.0))
        throw ConfigError("energy: quit_threshold_unit_s must be > 0");
    if (tx_energy_coeff < 0.0 || op_energy_coeff < 0.0)
        throw ConfigError("energy: tx/op energy coefficients must be >= 0");
    const double hover = level_power_watt(0.0, *this);
    if (!(std::abs(power_unit_watt - hover) <= 1e-9 * hover))
        throw ConfigError("energy: power_unit_watt does not equal hover power; "
                          "call finalize() after changing airframe parameters");
}

LedgerEntry epoch_energy_unit_s(double distance_units, const EnergyConfig& cfg) {
    if (!(distance_units >= 0.0))
        throw ContractError("epoch_energy_unit_s: distance must be >= 0");
    const double fly_s = distance_units * 100.0 / cfg.level_speed_m_s;
    if (fly_s > cfg.max_fly_seconds + 1e-9)
        throw ContractError("epoch_energy_unit_s: distance " + std::to_string(distance_units) +
                            " units implies " + std::to_string(fly_s) +
                            " s of flight, above the per-slot limit of " +
                            std::to_string(cfg.max_fly_seconds) + " s");
    const double hover_s = cfg.slot_seconds - fly_s;
    const double flight_j = level_power_watt(cfg.level_speed_m_s, cfg) * fly_s +
                            cfg.power_unit_watt * hover_s;

    LedgerEntry entry;
    entry.fly_seconds = fly_s;
    entry.hover_seconds = hover_s;
    entry.consumed_unit_s = flight_j / cfg.power_unit_watt +
                            (cfg.tx_energy_coeff + cfg.op_energy_coeff) * cfg.slot_seconds;
    return entry;
}

UavEnergy apply_energy(const UavEnergy& uav, double consumed_unit_s,
                       const EnergyConfig& cfg) {
    if (!uav.active) return uav;
    UavEnergy next = uav;
    next.residual_unit_s = std::max(0.0, uav.residual_unit_s - consumed_unit_s);
    if (next.residual_unit_s < cfg.quit_threshold_unit_s) next.active = false;
    return next;
}

} // namespace uavrl::energy
