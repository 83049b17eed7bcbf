#pragma once

#include <cstddef>

// Rotor power model, per-epoch energy bookkeeping, and the quit-threshold
// rule. Energies are expressed in unit-seconds, where one power unit is the
// hover power level_power_watt(0) under the configured airframe.

namespace uavrl::energy {

struct EnergyConfig {
    double uav_weight_newton = 4.0 * 9.8;
    double air_density_kg_m3 = 1.225;
    double rotor_area_m2 = 0.18;
    double level_speed_m_s = 100.0 / 9.0; // 40 km/h
    double slot_seconds = 10.0;           // T
    double max_fly_seconds = 9.0;         // T1
    double quit_threshold_unit_s = 150.0; // E_Thre
    double power_unit_watt = 0.0;         // hover power; set by finalize()
    double tx_energy_coeff = 0.0;         // unit-s per slot-second, default off
    double op_energy_coeff = 0.0;         // unit-s per slot-second, default off

    // Computes power_unit_watt from the airframe parameters so the
    // normalization tracks any change in weight / density / rotor area.
    void finalize();
    void validate() const; // throws ConfigError
};

struct LedgerEntry {
    std::size_t uav = 0;
    double fly_seconds = 0.0;
    double hover_seconds = 0.0;
    double consumed_unit_s = 0.0;
    double residual_unit_s = 0.0;
    bool quit_triggered = false;
};

struct UavEnergy {
    double residual_unit_s = 0.0;
    bool active = true;
};

// Induced power of level flight at the given speed (watts). The value of the
// textbook expression is used directly as power; at v = 0 it is the hover
// power defining one power unit.
double level_power_watt(double speed_m_s, const EnergyConfig& cfg);

// Energy drawn over one slot when flying `distance_units` then hovering for
// the rest of the slot. Fly time distance*100/v must not exceed T1.
// Fills fly/hover/consumed; uav index and residual are the caller's.
LedgerEntry epoch_energy_unit_s(double distance_units, const EnergyConfig& cfg);

// Value-in/value-out battery update. A quit UAV is returned unchanged. The
// quit flag trips when the end-of-slot residual falls strictly below the
// threshold; the flag takes effect from the next epoch (the caller keeps
// serving this epoch's users).
UavEnergy apply_energy(const UavEnergy& uav, double consumed_unit_s,
                       const EnergyConfig& cfg);

} // namespace uavrl::energy
