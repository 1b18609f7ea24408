#include "bhca/modcod.hpp"

#include <algorithm>
#include <fstream>

#include "bhca/errors.hpp"

namespace bhca {

ModcodTable::ModcodTable(std::vector<ModcodEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ConfigError("modcod", "MODCOD table must not be empty");
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (!(entries_[i].es_n0_threshold_db > entries_[i - 1].es_n0_threshold_db)) {
            throw ConfigError("modcod", "MODCOD thresholds must be strictly increasing (row " + std::to_string(i) + ")");
        }
        if (!(entries_[i].spectral_efficiency > entries_[i - 1].spectral_efficiency)) {
            throw ConfigError("modcod",
                              "MODCOD efficiencies must be strictly increasing (row " + std::to_string(i) + ")");
        }
    }
    if (!(entries_.front().spectral_efficiency > 0)) {
        throw ConfigError("modcod", "MODCOD efficiencies must be positive");
    }
}

double ModcodTable::spectral_efficiency(double sinr_db) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), sinr_db,
                               [](double v, const ModcodEntry& e) { return v < e.es_n0_threshold_db; });
    if (it == entries_.begin()) return 0.0;
    return std::prev(it)->spectral_efficiency;
}

ModcodTable ModcodTable::from_json(const nlohmann::json& doc) {
    const auto& rows = doc.contains("modcods") ? doc.at("modcods") : doc;
    if (!rows.is_array()) throw ConfigError("modcods", "MODCOD document must hold an array of entries");
    std::vector<ModcodEntry> entries;
    for (const auto& row : rows) {
        entries.push_back({row.value("name", std::string{}), row.at("es_n0_db").get<double>(),
                           row.at("spectral_efficiency").get<double>()});
    }
    return ModcodTable(std::move(entries));
}

ModcodTable ModcodTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("modcod", "cannot read MODCOD table '" + path.string() + "'");
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid MODCOD table '" + path.string() + "': " + e.what());
    }
}

const ModcodTable& default_modcod_table() {
    static const ModcodTable table = ModcodTable::load(std::filesystem::path(BHCA_DATA_DIR) / "modcod_dvbs2x.json");
    return table;
}

}  // namespace bhca
