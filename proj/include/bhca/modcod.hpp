#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bhca {

struct ModcodEntry {
    std::string name;
    double es_n0_threshold_db;
    double spectral_efficiency;  // bits/symbol
};

/// Step mapping from SINR to spectral efficiency. Both columns strictly increasing.
class ModcodTable {
public:
    explicit ModcodTable(std::vector<ModcodEntry> entries);

    /// Spectral efficiency of the best entry whose threshold is <= sinr_db, 0 below the first threshold.
    double spectral_efficiency(double sinr_db) const;

    double max_efficiency() const { return entries_.back().spectral_efficiency; }
    double min_threshold_db() const { return entries_.front().es_n0_threshold_db; }
    const std::vector<ModcodEntry>& entries() const { return entries_; }

    static ModcodTable from_json(const nlohmann::json& doc);
    static ModcodTable load(const std::filesystem::path& path);

private:
    std::vector<ModcodEntry> entries_;
};

/// The DVB-S2X-style table shipped in data/modcod_dvbs2x.json.
const ModcodTable& default_modcod_table();

}  // namespace bhca
