#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "bhca/errors.hpp"
#include "bhca/run.hpp"
#include "support.hpp"

using namespace bhca;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "bhca_run_test" / name;
    fs::remove_all(dir);
    return dir;
}

RunManifest tiny_manifest(const std::string& dir) {
    RunManifest m;
    m.config_path = test::data_file("tiny.json").string();
    m.seed = 4;
    m.scheme = Scheme::both;
    m.out_dir = fresh_dir(dir);
    m.export_lp = true;
    return m;
}

int count_lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_SUITE("run") {

TEST_CASE("a run writes every artifact and a matching manifest") {
    RunManifest m = tiny_manifest("full");
    REQUIRE(run(m) == kExitOk);
    for (const char* name : {"scenario.json", "bhca_model.lp", "bhca_solver.log", "bhca_plan.json", "bhca_metrics.json",
                             "bhca_metrics.csv", "bh_solver.log", "bh_plan.json", "bh_metrics.json", "bh_metrics.csv",
                             "comparison.json", "plot_beams.csv", "plot_users.csv", "manifest.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(m.out_dir / name));
    }
    const auto manifest = test::load_json(m.out_dir / "manifest.json");
    CHECK(manifest.at("seed") == 4);
    CHECK(manifest.at("scheme") == "both");
    REQUIRE(manifest.at("checksums").size() == m.checksums.size());
    for (const auto& [name, sum] : m.checksums) {
        CHECK(manifest.at("checksums").at(name) == sum);
        CHECK(sha256_hex(test::slurp(m.out_dir / name)) == sum);
    }
    const Scenario s = generate_scenario(resolve_config(m));
    CHECK(count_lines(test::slurp(m.out_dir / "bhca_metrics.csv")) == int(s.users.size() + s.clusters.size()) + 2);
}

TEST_CASE("repeated runs are byte identical") {
    RunManifest a = tiny_manifest("repeat_a");
    RunManifest b = tiny_manifest("repeat_b");
    a.solver.worker_count = b.solver.worker_count = 1;
    run(a);
    run(b);
    CHECK(a.checksums == b.checksums);
}

TEST_CASE("single scheme runs write only their artifacts") {
    RunManifest m = tiny_manifest("bh_only");
    m.scheme = Scheme::bh;
    m.export_lp = false;
    run(m);
    CHECK(fs::exists(m.out_dir / "bh_plan.json"));
    CHECK(!fs::exists(m.out_dir / "bhca_plan.json"));
    CHECK(!fs::exists(m.out_dir / "comparison.json"));

    RunManifest c = tiny_manifest("bhca_only");
    c.scheme = Scheme::bhca;
    c.export_lp = false;
    run(c);
    CHECK(fs::exists(c.out_dir / "bhca_plan.json"));
    CHECK(!fs::exists(c.out_dir / "bh_plan.json"));
    CHECK(!fs::exists(c.out_dir / "bhca_model.lp"));
}

TEST_CASE("configuration problems stop before anything is written") {
    RunManifest m = tiny_manifest("bad_config");
    m.config_path = (fs::temp_directory_path() / "bhca_run_test" / "absent.json").string();
    CHECK_THROWS(run(m));
    CHECK(!fs::exists(m.out_dir));

    RunManifest bad_solver = tiny_manifest("bad_solver");
    bad_solver.solver.node_limit = 0;
    CHECK_THROWS_AS(run(bad_solver), ConfigError);
    CHECK(!fs::exists(bad_solver.out_dir));

    CHECK_THROWS_AS(scheme_from("hybrid"), ConfigError);
    CHECK(scheme_from("bhca") == Scheme::bhca);
}

TEST_CASE("a node limit still produces a plan and reports the limit") {
    RunManifest m;
    m.seed = 2;
    m.scheme = Scheme::both;
    m.out_dir = fresh_dir("limit");
    m.solver.node_limit = 5;
    CHECK(run(m) == kExitLimitHit);
    const auto manifest = test::load_json(m.out_dir / "manifest.json");
    CHECK(manifest.at("status") == "limit_hit");
    const auto plan = test::load_json(m.out_dir / "bhca_plan.json");
    CHECK(plan.at("solver").at("status") == "feasible");
}

TEST_CASE("batch rows") {
    SolverOptions o;
    o.node_limit = 20;
    const auto rows = run_batch(tiny_config(), {1, 2, 3}, o, 1);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.schedule_violations == 0);
        CHECK(r.model_violations == 0);
    }
    const std::string csv = batch_to_csv(rows);
    CHECK(count_lines(csv) == 4);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}
