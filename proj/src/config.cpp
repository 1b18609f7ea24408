#include "bhca/config.hpp"

#include <fstream>
#include <sstream>

#include "bhca/errors.hpp"

namespace bhca {

namespace {

using nlohmann::json;

template <typename T>
void read_required(const json& doc, const char* key, T& out) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw ConfigError(key, std::string("missing required key '") + key + "'");
    }
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(key, std::string("key '") + key + "' has the wrong type");
    }
}

template <typename T>
void read_optional(const json& doc, const char* key, T& out) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(key, std::string("key '") + key + "' has the wrong type");
    }
}

}  // namespace

std::vector<Diagnostic> check_config(const SystemConfig& c) {
    std::vector<Diagnostic> out;
    auto fail = [&](const char* field, std::string message) { out.push_back({field, std::move(message)}); };

    const std::pair<const char*, int> counts[] = {
        {"num_beams", c.num_beams},
        {"num_clusters", c.num_clusters},
        {"beams_per_cluster", c.beams_per_cluster},
        {"carriers_per_cluster", c.carriers_per_cluster},
        {"users_per_beam", c.users_per_beam},
        {"num_transponders", c.num_transponders},
        {"active_clusters_per_slot", c.active_clusters_per_slot},
        {"slots_per_window", c.slots_per_window},
        {"delta_max", c.delta_max},
    };
    for (const auto& [name, value] : counts) {
        if (value < 1) fail(name, std::string(name) + " must be >= 1");
    }
    if (c.num_clusters >= 1 && c.beams_per_cluster >= 1 && c.num_clusters * c.beams_per_cluster != c.num_beams) {
        fail("num_beams", "num_beams must equal num_clusters * beams_per_cluster");
    }
    if (c.carriers_per_cluster >= 1 && c.carriers_per_cluster < c.beams_per_cluster) {
        fail("carriers_per_cluster", "carriers_per_cluster must be >= beams_per_cluster");
    }
    if (c.active_clusters_per_slot >= c.num_clusters) {
        fail("active_clusters_per_slot", "active_clusters_per_slot must be < num_clusters");
    }
    if (c.active_clusters_per_slot * c.transponders_per_cluster() > c.num_transponders) {
        fail("active_clusters_per_slot",
             "active_clusters_per_slot * transponders per cluster must be <= num_transponders");
    }
    if (!(c.carrier_bandwidth > 0)) fail("carrier_bandwidth", "carrier_bandwidth must be > 0");
    if (!(c.system_bandwidth > 0)) fail("system_bandwidth", "system_bandwidth must be > 0");
    if (c.carrier_bandwidth > c.system_bandwidth) {
        fail("carrier_bandwidth", "carrier_bandwidth must be <= system_bandwidth");
    } else if (c.carriers_per_transponder() * c.carrier_bandwidth > c.system_bandwidth) {
        fail("carriers_per_cluster", "carriers sharing one polarization exceed system_bandwidth");
    }
    if (!(c.roll_off >= 0 && c.roll_off <= 1)) fail("roll_off", "roll_off must be in [0, 1]");
    if (!(c.slot_duration > 0)) fail("slot_duration", "slot_duration must be > 0");
    if (!(c.beam_spacing_km > 0)) fail("beam_spacing_km", "beam_spacing_km must be > 0");
    if (!(c.adjacency_threshold > 0)) fail("adjacency_threshold", "adjacency_threshold must be > 0");
    if (!(c.carrier_frequency > 0)) fail("carrier_frequency", "carrier_frequency must be > 0");
    if (!(c.slant_range > 0)) fail("slant_range", "slant_range must be > 0");
    if (!(c.high_demand_fraction >= 0 && c.high_demand_fraction <= 1)) {
        fail("high_demand_fraction", "high_demand_fraction must be in [0, 1]");
    }
    if (!(c.high_demand_min > 0 && c.high_demand_min <= c.high_demand_max)) {
        fail("high_demand_min", "high demand range must satisfy 0 < min <= max");
    }
    if (!(c.low_demand_min > 0 && c.low_demand_min <= c.low_demand_max)) {
        fail("low_demand_min", "low demand range must satisfy 0 < min <= max");
    }
    if (!(c.reference_spectral_efficiency > 0)) {
        fail("reference_spectral_efficiency", "reference_spectral_efficiency must be > 0");
    }
    return out;
}

void require_valid(const SystemConfig& config) {
    auto diags = check_config(config);
    if (!diags.empty()) throw ConfigError(diags.front().field, diags.front().message);
}

SystemConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("", "config document must be a JSON object");
    SystemConfig c;
    read_required(doc, "num_beams", c.num_beams);
    read_required(doc, "num_clusters", c.num_clusters);
    read_required(doc, "beams_per_cluster", c.beams_per_cluster);
    read_required(doc, "carriers_per_cluster", c.carriers_per_cluster);
    read_required(doc, "carrier_bandwidth", c.carrier_bandwidth);
    read_required(doc, "system_bandwidth", c.system_bandwidth);
    read_required(doc, "roll_off", c.roll_off);
    read_required(doc, "power_per_transponder", c.power_per_transponder);
    read_required(doc, "num_transponders", c.num_transponders);
    read_required(doc, "active_clusters_per_slot", c.active_clusters_per_slot);
    read_required(doc, "slots_per_window", c.slots_per_window);
    read_required(doc, "slot_duration", c.slot_duration);
    read_required(doc, "delta_max", c.delta_max);
    read_required(doc, "rng_seed", c.rng_seed);

    read_optional(doc, "users_per_beam", c.users_per_beam);
    read_optional(doc, "beam_power_w", c.beam_power_w);
    read_optional(doc, "beam_spacing_km", c.beam_spacing_km);
    read_optional(doc, "adjacency_threshold", c.adjacency_threshold);
    read_optional(doc, "carrier_frequency", c.carrier_frequency);
    read_optional(doc, "slant_range", c.slant_range);
    read_optional(doc, "peak_gain_dbi", c.peak_gain_dbi);
    read_optional(doc, "user_g_over_t_dbk", c.user_g_over_t_dbk);
    read_optional(doc, "extra_losses_db", c.extra_losses_db);
    read_optional(doc, "high_demand_fraction", c.high_demand_fraction);
    read_optional(doc, "high_demand_min", c.high_demand_min);
    read_optional(doc, "high_demand_max", c.high_demand_max);
    read_optional(doc, "low_demand_min", c.low_demand_min);
    read_optional(doc, "low_demand_max", c.low_demand_max);
    read_optional(doc, "reference_spectral_efficiency", c.reference_spectral_efficiency);
    return c;
}

nlohmann::json config_to_json(const SystemConfig& c) {
    return {
        {"num_beams", c.num_beams},
        {"num_clusters", c.num_clusters},
        {"beams_per_cluster", c.beams_per_cluster},
        {"carriers_per_cluster", c.carriers_per_cluster},
        {"users_per_beam", c.users_per_beam},
        {"carrier_bandwidth", c.carrier_bandwidth},
        {"system_bandwidth", c.system_bandwidth},
        {"roll_off", c.roll_off},
        {"power_per_transponder", c.power_per_transponder},
        {"beam_power_w", c.beam_power_w},
        {"num_transponders", c.num_transponders},
        {"active_clusters_per_slot", c.active_clusters_per_slot},
        {"slots_per_window", c.slots_per_window},
        {"slot_duration", c.slot_duration},
        {"delta_max", c.delta_max},
        {"rng_seed", c.rng_seed},
        {"beam_spacing_km", c.beam_spacing_km},
        {"adjacency_threshold", c.adjacency_threshold},
        {"carrier_frequency", c.carrier_frequency},
        {"slant_range", c.slant_range},
        {"peak_gain_dbi", c.peak_gain_dbi},
        {"user_g_over_t_dbk", c.user_g_over_t_dbk},
        {"extra_losses_db", c.extra_losses_db},
        {"high_demand_fraction", c.high_demand_fraction},
        {"high_demand_min", c.high_demand_min},
        {"high_demand_max", c.high_demand_max},
        {"low_demand_min", c.low_demand_min},
        {"low_demand_max", c.low_demand_max},
        {"reference_spectral_efficiency", c.reference_spectral_efficiency},
    };
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("invalid JSON in '" + path.string() + "' at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
    return config_from_json(doc);
}

std::vector<Diagnostic> validate_config(const std::filesystem::path& path) {
    SystemConfig config;
    try {
        config = load_config(path);
    } catch (const ConfigError& e) {
        return {{e.field(), e.what()}};
    } catch (const ParseError& e) {
        return {{"", e.what()}};
    }
    return check_config(config);
}

SystemConfig reference_config() { return SystemConfig{}; }

SystemConfig desk_config() {
    SystemConfig c;
    c.num_beams = 8;
    c.num_clusters = 4;
    c.users_per_beam = 4;
    c.slots_per_window = 8;
    c.active_clusters_per_slot = 2;
    return c;
}

SystemConfig tiny_config() {
    SystemConfig c;
    c.num_beams = 4;
    c.num_clusters = 2;
    c.users_per_beam = 1;
    c.slots_per_window = 2;
    c.active_clusters_per_slot = 1;
    c.num_transponders = 2;
    return c;
}

}  // namespace bhca
