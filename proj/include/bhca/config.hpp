#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bhca {

/**
 * System-level parameters of a multi-beam satellite scenario.
 *
 * Units are SI unless the field name says otherwise: bandwidths in Hz,
 * durations in seconds, powers in dBW, distances in km.
 */
struct SystemConfig {
    // Geometry and resources.
    int num_beams = 16;
    int num_clusters = 8;
    int beams_per_cluster = 2;
    int carriers_per_cluster = 2;
    int users_per_beam = 12;
    double carrier_bandwidth = 54e6;
    double system_bandwidth = 500e6;
    double roll_off = 0.2;
    double power_per_transponder = 15.0;  // dBW
    double beam_power_w = 12.0;           // informational, not used by the link budget
    int num_transponders = 8;
    int active_clusters_per_slot = 2;
    int slots_per_window = 64;
    double slot_duration = 1.3e-3;
    int delta_max = 2;
    std::uint64_t rng_seed = 1;

    // Link budget.
    double beam_spacing_km = 250.0;
    double adjacency_threshold = 1.5;  // in beam pitches
    double carrier_frequency = 20e9;
    double slant_range = 38000e3;  // m
    double peak_gain_dbi = 45.0;
    double user_g_over_t_dbk = 17.0;
    double extra_losses_db = 1.0;

    // Demand synthesis.
    double high_demand_fraction = 0.3;
    double high_demand_min = 2.0;
    double high_demand_max = 4.0;
    double low_demand_min = 0.2;
    double low_demand_max = 1.0;
    double reference_spectral_efficiency = 4.0;  // bits/symbol

    double hopping_window() const { return slots_per_window * slot_duration; }
    double symbol_rate() const { return carrier_bandwidth / (1.0 + roll_off); }
    int transponders_per_cluster() const { return carriers_per_cluster >= 2 ? 2 : 1; }
    int carriers_per_transponder() const {
        return (carriers_per_cluster + transponders_per_cluster() - 1) / transponders_per_cluster();
    }
    int num_users() const { return num_beams * users_per_beam; }
};

struct Diagnostic {
    std::string field;
    std::string message;
};

/// Checks every invariant of `config`; an empty result means the config is usable.
std::vector<Diagnostic> check_config(const SystemConfig& config);

/// Throws ConfigError for the first violated invariant.
void require_valid(const SystemConfig& config);

/// Parses a config document. Required keys missing or of the wrong type raise ConfigError naming the key.
SystemConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SystemConfig& config);

/// Reads and parses a config file, without checking invariants. Unparsable JSON raises ParseError.
SystemConfig load_config(const std::filesystem::path& path);

/**
 * Full diagnostics for a config file: I/O and parse problems, missing keys,
 * and invariant violations. Never throws for bad input.
 */
std::vector<Diagnostic> validate_config(const std::filesystem::path& path);

/// Defaults of the reference system (16 beams, 8 clusters, 64 slots).
SystemConfig reference_config();
/// Scaled-down configuration that solves in seconds (8 beams, 4 clusters, 8 slots).
SystemConfig desk_config();
/// 2 clusters, 2 carriers/cluster, 2 users/cluster, 2 slots, 1 active cluster.
SystemConfig tiny_config();

}  // namespace bhca
