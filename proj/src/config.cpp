#include "uavrl/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "uavrl/errors.hpp"
#include "uavrl/rng.hpp"

namespace uavrl::harness {

namespace {

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const std::string& section, std::vector<std::string>& errs) {
    if (!j.is_object()) {
        errs.push_back(section + ": expected an object");
        return;
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) errs.push_back(section + ": unknown key '" + key + "'");
    }
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

} // namespace

void ExperimentConfig::validate() const {
    std::vector<std::string> errs;
    auto expect = [&errs](bool ok, const std::string& msg) {
        if (!ok) errs.push_back(msg);
    };

    expect(!out_dir.empty(), "out_dir must not be empty");
    expect(scenario.n_users >= 1, "scenario.n_users must be >= 1");
    expect(scenario.area_side_units > 0.0, "scenario.area_side_units must be > 0");
    expect(scenario.hotspot_fraction >= 0.0 && scenario.hotspot_fraction <= 1.0,
           "scenario.hotspot_fraction must lie in [0, 1]");
    expect(scenario.hotspot_fraction == 0.0 || scenario.n_hotspots >= 1,
           "scenario.n_hotspots must be >= 1 when hotspot_fraction > 0");
    expect(scenario.hotspot_sigma_units >= 0.0, "scenario.hotspot_sigma_units must be >= 0");
    expect(scenario.required_rate_bps > 0.0, "scenario.required_rate_bps must be > 0");

    expect(n_uavs >= 1, "n_uavs must be >= 1");
    expect(n_epochs >= 1, "n_epochs must be >= 1");
    expect(beta > 0.0, "beta must be > 0");
    expect(altitude_units > 0.0, "altitude_units must be > 0");
    expect(aperture_deg > 0.0 && aperture_deg < 180.0, "aperture_deg must lie in (0, 180)");
    expect(max_distance_units >= 0.0, "max_distance_units must be >= 0");
    expect(default_initial_energy_unit_s > energy.quit_threshold_unit_s,
           "default_initial_energy_unit_s must exceed the quit threshold");
    expect(low_energy_uav < static_cast<int>(n_uavs),
           "low_energy_uav must be an index below n_uavs (or -1)");
    if (low_energy_uav >= 0)
        expect(low_energy_initial_unit_s > energy.quit_threshold_unit_s,
               "low_energy_initial_unit_s must exceed the quit threshold");

    try {
        channel.validate();
    } catch (const Error& e) {
        errs.push_back(e.what());
    }
    try {
        energy.validate();
    } catch (const Error& e) {
        errs.push_back(e.what());
    }
    try {
        train.validate();
    } catch (const Error& e) {
        errs.push_back(e.what());
    }
    const double max_fly = max_distance_units * 100.0 / energy.level_speed_m_s;
    expect(max_fly <= energy.max_fly_seconds + 1e-9,
           "max_distance_units cannot be flown within energy.max_fly_seconds");

    expect(eval.episodes >= 1, "eval.episodes must be >= 1");
    expect(oracle.grid_units > 0.0, "oracle.grid_units must be > 0");
    expect(oracle.budget >= 1, "oracle.budget must be >= 1");

    if (!errs.empty()) {
        std::ostringstream os;
        os << "configuration invalid (" << errs.size() << " problem"
           << (errs.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errs) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["master_seed"] = master_seed;
    j["out_dir"] = out_dir;
    j["scenario"] = {{"n_users", scenario.n_users},
                     {"area_side_units", scenario.area_side_units},
                     {"hotspot_fraction", scenario.hotspot_fraction},
                     {"n_hotspots", scenario.n_hotspots},
                     {"hotspot_sigma_units", scenario.hotspot_sigma_units},
                     {"required_rate_bps", scenario.required_rate_bps},
                     {"file", scenario.file}};
    j["env"] = {{"n_uavs", n_uavs},
                {"n_epochs", n_epochs},
                {"beta", beta},
                {"altitude_units", altitude_units},
                {"aperture_deg", aperture_deg},
                {"max_distance_units", max_distance_units},
                {"default_initial_energy_unit_s", default_initial_energy_unit_s},
                {"low_energy_uav", low_energy_uav},
                {"low_energy_initial_unit_s", low_energy_initial_unit_s}};
    j["channel"] = {{"carrier_frequency_hz", channel.carrier_frequency_hz},
                    {"light_speed_m_per_s", channel.light_speed_m_per_s},
                    {"extra_loss_db", channel.extra_loss_db},
                    {"tx_psd_dbm_per_hz", channel.tx_psd_dbm_per_hz},
                    {"noise_psd_dbm_per_hz", channel.noise_psd_dbm_per_hz},
                    {"rb_bandwidth_hz", channel.rb_bandwidth_hz},
                    {"rbs_per_uav", channel.rbs_per_uav},
                    {"gain_divisor", channel.gain_divisor}};
    j["energy"] = {{"uav_weight_newton", energy.uav_weight_newton},
                   {"air_density_kg_m3", energy.air_density_kg_m3},
                   {"rotor_area_m2", energy.rotor_area_m2},
                   {"level_speed_m_s", energy.level_speed_m_s},
                   {"slot_seconds", energy.slot_seconds},
                   {"max_fly_seconds", energy.max_fly_seconds},
                   {"quit_threshold_unit_s", energy.quit_threshold_unit_s},
                   {"tx_energy_coeff", energy.tx_energy_coeff},
                   {"op_energy_coeff", energy.op_energy_coeff}};
    j["train"] = {{"gamma", train.gamma},
                  {"tau", train.tau},
                  {"learning_rate", train.learning_rate},
                  {"l2_coeff", train.l2_coeff},
                  {"batch_size", train.batch_size},
                  {"max_episodes", train.max_episodes},
                  {"buffer_capacity", train.buffer_capacity},
                  {"hidden", train.hidden},
                  {"sigma_initial", train.sigma_initial},
                  {"sigma_decay", train.sigma_decay},
                  {"noise_is_variance", train.noise_is_variance},
                  {"noise_decay_per_episode", train.noise_decay_per_episode},
                  {"plateau_stop", train.plateau_stop},
                  {"plateau_window", train.plateau_window},
                  {"plateau_tol", train.plateau_tol},
                  {"moving_avg_window", train.moving_avg_window},
                  {"checkpoint_every", train.checkpoint_every},
                  {"checkpoint_replay", train.checkpoint_replay}};
    j["eval"] = {{"episodes", eval.episodes},
                 {"window_before", eval.window_before},
                 {"window_after", eval.window_after}};
    j["oracle"] = {{"grid_units", oracle.grid_units}, {"budget", oracle.budget}};
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    std::vector<std::string> errs;

    check_keys(j,
               {"master_seed", "out_dir", "scenario", "env", "channel", "energy", "train",
                "eval", "oracle"},
               "config", errs);

    auto get = [&errs](const nlohmann::json& obj, const char* section, const char* key,
                       auto& out) {
        if (!obj.is_object() || !obj.contains(key)) return;
        try {
            out = obj.at(key).get<std::decay_t<decltype(out)>>();
        } catch (const nlohmann::json::exception&) {
            errs.push_back(std::string(section) + "." + key + ": wrong type");
        }
    };

    if (j.is_object()) {
        get(j, "config", "master_seed", c.master_seed);
        get(j, "config", "out_dir", c.out_dir);

        if (j.contains("scenario")) {
            const auto& s = j.at("scenario");
            check_keys(s,
                       {"n_users", "area_side_units", "hotspot_fraction", "n_hotspots",
                        "hotspot_sigma_units", "required_rate_bps", "file"},
                       "scenario", errs);
            get(s, "scenario", "n_users", c.scenario.n_users);
            get(s, "scenario", "area_side_units", c.scenario.area_side_units);
            get(s, "scenario", "hotspot_fraction", c.scenario.hotspot_fraction);
            get(s, "scenario", "n_hotspots", c.scenario.n_hotspots);
            get(s, "scenario", "hotspot_sigma_units", c.scenario.hotspot_sigma_units);
            get(s, "scenario", "required_rate_bps", c.scenario.required_rate_bps);
            get(s, "scenario", "file", c.scenario.file);
        }
        if (j.contains("env")) {
            const auto& e = j.at("env");
            check_keys(e,
                       {"n_uavs", "n_epochs", "beta", "altitude_units", "aperture_deg",
                        "max_distance_units", "default_initial_energy_unit_s",
                        "low_energy_uav", "low_energy_initial_unit_s"},
                       "env", errs);
            get(e, "env", "n_uavs", c.n_uavs);
            get(e, "env", "n_epochs", c.n_epochs);
            get(e, "env", "beta", c.beta);
            get(e, "env", "altitude_units", c.altitude_units);
            get(e, "env", "aperture_deg", c.aperture_deg);
            get(e, "env", "max_distance_units", c.max_distance_units);
            get(e, "env", "default_initial_energy_unit_s", c.default_initial_energy_unit_s);
            get(e, "env", "low_energy_uav", c.low_energy_uav);
            get(e, "env", "low_energy_initial_unit_s", c.low_energy_initial_unit_s);
        }
        if (j.contains("channel")) {
            const auto& ch = j.at("channel");
            check_keys(ch,
                       {"carrier_frequency_hz", "light_speed_m_per_s", "extra_loss_db",
                        "tx_psd_dbm_per_hz", "noise_psd_dbm_per_hz", "rb_bandwidth_hz",
                        "rbs_per_uav", "gain_divisor"},
                       "channel", errs);
            get(ch, "channel", "carrier_frequency_hz", c.channel.carrier_frequency_hz);
            get(ch, "channel", "light_speed_m_per_s", c.channel.light_speed_m_per_s);
            get(ch, "channel", "extra_loss_db", c.channel.extra_loss_db);
            get(ch, "channel", "tx_psd_dbm_per_hz", c.channel.tx_psd_dbm_per_hz);
            get(ch, "channel", "noise_psd_dbm_per_hz", c.channel.noise_psd_dbm_per_hz);
            get(ch, "channel", "rb_bandwidth_hz", c.channel.rb_bandwidth_hz);
            get(ch, "channel", "rbs_per_uav", c.channel.rbs_per_uav);
            get(ch, "channel", "gain_divisor", c.channel.gain_divisor);
        }
        if (j.contains("energy")) {
            const auto& en = j.at("energy");
            check_keys(en,
                       {"uav_weight_newton", "air_density_kg_m3", "rotor_area_m2",
                        "level_speed_m_s", "slot_seconds", "max_fly_seconds",
                        "quit_threshold_unit_s", "tx_energy_coeff", "op_energy_coeff"},
                       "energy", errs);
            get(en, "energy", "uav_weight_newton", c.energy.uav_weight_newton);
            get(en, "energy", "air_density_kg_m3", c.energy.air_density_kg_m3);
            get(en, "energy", "rotor_area_m2", c.energy.rotor_area_m2);
            get(en, "energy", "level_speed_m_s", c.energy.level_speed_m_s);
            get(en, "energy", "slot_seconds", c.energy.slot_seconds);
            get(en, "energy", "max_fly_seconds", c.energy.max_fly_seconds);
            get(en, "energy", "quit_threshold_unit_s", c.energy.quit_threshold_unit_s);
            get(en, "energy", "tx_energy_coeff", c.energy.tx_energy_coeff);
            get(en, "energy", "op_energy_coeff", c.energy.op_energy_coeff);
        }
        if (j.contains("train")) {
            const auto& t = j.at("train");
            check_keys(t,
                       {"gamma", "tau", "learning_rate", "l2_coeff", "batch_size",
                        "max_episodes", "buffer_capacity", "hidden", "sigma_initial",
                        "sigma_decay", "noise_is_variance", "noise_decay_per_episode",
                        "plateau_stop", "plateau_window", "plateau_tol",
                        "moving_avg_window", "checkpoint_every", "checkpoint_replay"},
                       "train", errs);
            get(t, "train", "gamma", c.train.gamma);
            get(t, "train", "tau", c.train.tau);
            get(t, "train", "learning_rate", c.train.learning_rate);
            get(t, "train", "l2_coeff", c.train.l2_coeff);
            get(t, "train", "batch_size", c.train.batch_size);
            get(t, "train", "max_episodes", c.train.max_episodes);
            get(t, "train", "buffer_capacity", c.train.buffer_capacity);
            get(t, "train", "hidden", c.train.hidden);
            get(t, "train", "sigma_initial", c.train.sigma_initial);
            get(t, "train", "sigma_decay", c.train.sigma_decay);
            get(t, "train", "noise_is_variance", c.train.noise_is_variance);
            get(t, "train", "noise_decay_per_episode", c.train.noise_decay_per_episode);
            get(t, "train", "plateau_stop", c.train.plateau_stop);
            get(t, "train", "plateau_window", c.train.plateau_window);
            get(t, "train", "plateau_tol", c.train.plateau_tol);
            get(t, "train", "moving_avg_window", c.train.moving_avg_window);
            get(t, "train", "checkpoint_every", c.train.checkpoint_every);
            get(t, "train", "checkpoint_replay", c.train.checkpoint_replay);
        }
        if (j.contains("eval")) {
            const auto& ev = j.at("eval");
            check_keys(ev, {"episodes", "window_before", "window_after"}, "eval", errs);
            get(ev, "eval", "episodes", c.eval.episodes);
            get(ev, "eval", "window_before", c.eval.window_before);
            get(ev, "eval", "window_after", c.eval.window_after);
        }
        if (j.contains("oracle")) {
            const auto& o = j.at("oracle");
            check_keys(o, {"grid_units", "budget"}, "oracle", errs);
            get(o, "oracle", "grid_units", c.oracle.grid_units);
            get(o, "oracle", "budget", c.oracle.budget);
        }
    } else {
        errs.push_back("config: root must be a JSON object");
    }

    if (!errs.empty()) {
        std::ostringstream os;
        os << "configuration malformed (" << errs.size() << " problem"
           << (errs.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errs) os << "\n  - " << e;
        throw ConfigError(os.str());
    }

    c.energy.finalize();
    c.train.n_epochs = c.n_epochs; // episode cap is the env horizon
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("config: cannot open " + path + " for writing");
    out << to_json().dump(2) << '\n';
    if (!out) throw IoError("config: write failed for " + path);
}

env::Scenario ExperimentConfig::make_scenario() const {
    if (!scenario.file.empty()) return env::load_scenario(scenario.file);
    return env::generate_scenario(derive_seed(master_seed, kSeedScenario), scenario.n_users,
                                  scenario.area_side_units, scenario.hotspot_fraction,
                                  scenario.n_hotspots, scenario.hotspot_sigma_units,
                                  scenario.required_rate_bps);
}

env::EnvConfig ExperimentConfig::make_env_config() const {
    env::EnvConfig e;
    e.n_uavs = n_uavs;
    e.n_epochs = n_epochs;
    e.beta = beta;
    e.altitude_units = altitude_units;
    e.aperture_rad = deg_to_rad(aperture_deg);
    e.max_distance_units = max_distance_units;
    e.initial_energy_unit_s.assign(n_uavs, default_initial_energy_unit_s);
    if (low_energy_uav >= 0)
        e.initial_energy_unit_s[static_cast<std::size_t>(low_energy_uav)] =
            low_energy_initial_unit_s;
    return e;
}

env::Environment ExperimentConfig::make_environment() const {
    return env::Environment(make_scenario(), make_env_config(), channel, energy);
}

ddpg::TrainConfig ExperimentConfig::make_train_config() const {
    ddpg::TrainConfig t = train;
    t.n_epochs = n_epochs;
    t.seed = derive_seed(master_seed, kSeedAgent);
    return t;
}

void apply_lineup(ExperimentConfig& cfg, const std::string& lineup) {
    std::string name = lineup;
    // Optional numeric prefix pins the UAV count, e.g. "5-one-quits".
    if (!name.empty() && std::isdigit(static_cast<unsigned char>(name[0]))) {
        std::size_t pos = 0;
        const int count = std::stoi(name, &pos);
        if (pos >= name.size() || name[pos] != '-')
            throw ConfigError("lineup: expected '<count>-<name>', got '" + lineup + "'");
        if (count < 1) throw ConfigError("lineup: UAV count must be >= 1");
        cfg.n_uavs = static_cast<std::size_t>(count);
        name = name.substr(pos + 1);
    }

    if (name == "full") {
        cfg.low_energy_uav = -1;
    } else if (name == "one-quits") {
        cfg.low_energy_uav = 0;
    } else if (name == "minus-one-full") {
        if (cfg.n_uavs < 2) throw ConfigError("lineup: minus-one-full needs n_uavs >= 2");
        cfg.n_uavs -= 1;
        cfg.low_energy_uav = -1;
    } else {
        throw ConfigError("lineup: unknown name '" + lineup +
                          "' (expected full, one-quits or minus-one-full, "
                          "optionally with a numeric prefix)");
    }
    cfg.validate();
}

} // namespace uavrl::harness
