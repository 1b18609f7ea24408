#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "bhca/config.hpp"
#include "bhca/errors.hpp"
#include "support.hpp"

using namespace bhca;

namespace {

bool has_field(const std::vector<Diagnostic>& diags, const std::string& field) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.field == field; });
}

std::filesystem::path scratch(const std::string& name, const std::string& text) {
    auto dir = std::filesystem::temp_directory_path() / "bhca_config_test";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("reference defaults") {
    const SystemConfig c = reference_config();
    CHECK(c.num_beams == 16);
    CHECK(c.num_clusters == 8);
    CHECK(c.carriers_per_cluster == 2);
    CHECK(c.carrier_bandwidth == 54e6);
    CHECK(c.system_bandwidth == 500e6);
    CHECK(c.roll_off == 0.2);
    CHECK(c.power_per_transponder == 15.0);
    CHECK(c.num_transponders == 8);
    CHECK(c.slots_per_window == 64);
    CHECK(c.slot_duration == 1.3e-3);
    CHECK(c.delta_max == 2);
    CHECK(c.active_clusters_per_slot == 2);
    CHECK(c.hopping_window() == doctest::Approx(0.0832).epsilon(1e-12));
    CHECK(c.symbol_rate() == doctest::Approx(45e6));
    CHECK(check_config(c).empty());
    CHECK(check_config(desk_config()).empty());
    CHECK(check_config(tiny_config()).empty());
}

TEST_CASE("shipped config files parse and validate") {
    CHECK(validate_config(test::data_file("reference.json")).empty());
    CHECK(load_config(test::data_file("reference.json")).num_beams == 16);
    CHECK(config_to_json(load_config(test::data_file("desk.json"))) == config_to_json(desk_config()));
    CHECK(config_to_json(load_config(test::data_file("tiny.json"))) == config_to_json(tiny_config()));
}

TEST_CASE("json round trip") {
    SystemConfig c = desk_config();
    c.rng_seed = 99;
    c.roll_off = 0.35;
    CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));
}

TEST_CASE("active clusters must be fewer than clusters") {
    SystemConfig c = tiny_config();
    c.active_clusters_per_slot = c.num_clusters;
    const auto diags = check_config(c);
    REQUIRE(has_field(diags, "active_clusters_per_slot"));
    CHECK_THROWS_AS(require_valid(c), ConfigError);
    try {
        require_valid(c);
    } catch (const ConfigError& e) {
        CHECK(e.field() == "active_clusters_per_slot");
        CHECK(std::string(e.what()) == "active_clusters_per_slot must be < num_clusters");
    }
}

TEST_CASE("invariant diagnostics name the field") {
    SystemConfig c = reference_config();
    c.num_beams = 15;
    CHECK(has_field(check_config(c), "num_beams"));

    c = reference_config();
    c.carrier_bandwidth = 600e6;
    CHECK(has_field(check_config(c), "carrier_bandwidth"));

    c = reference_config();
    c.delta_max = 0;
    CHECK(has_field(check_config(c), "delta_max"));

    c = reference_config();
    c.active_clusters_per_slot = 5;  // 5 clusters * 2 transponders > 8
    CHECK(has_field(check_config(c), "active_clusters_per_slot"));

    c = reference_config();
    c.slot_duration = 0;
    CHECK(has_field(check_config(c), "slot_duration"));
}

TEST_CASE("missing required key") {
    auto doc = config_to_json(reference_config());
    doc.erase("carrier_bandwidth");
    try {
        config_from_json(doc);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "carrier_bandwidth");
    }
    const auto diags = validate_config(scratch("missing.json", doc.dump()));
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].field == "carrier_bandwidth");
}

TEST_CASE("wrong type") {
    auto doc = config_to_json(reference_config());
    doc["num_beams"] = "sixteen";
    CHECK_THROWS_AS(config_from_json(doc), ConfigError);
}

TEST_CASE("unparsable file") {
    const auto path = scratch("broken.json", "{\"num_beams\": 16,\n");
    CHECK_THROWS_AS(load_config(path), ParseError);
    const auto diags = validate_config(path);
    REQUIRE(!diags.empty());
    CHECK(validate_config(std::filesystem::temp_directory_path() / "bhca_no_such_dir" / "none.json").size() == 1);
}

}
