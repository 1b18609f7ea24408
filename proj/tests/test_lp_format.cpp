#include <doctest.h>

#include "bhca/baseline.hpp"
#include "bhca/errors.hpp"
#include "bhca/lp_format.hpp"
#include "support.hpp"

using namespace bhca;

namespace {

std::vector<std::string> names_of(const LinearProgram& lp) {
    std::vector<std::string> out;
    for (const auto& c : lp.columns) out.push_back(c.name);
    return out;
}

LinearProgram round_trip(const LinearProgram& lp) { return rebuild_program(parse_lp(export_lp(lp)), names_of(lp)); }

int parse_error_line(const std::string& text) {
    try {
        parse_lp(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_SUITE("lp_format") {

TEST_CASE("model round trip rebuilds the identical program") {
    std::vector<LinearProgram> programs;
    for (std::uint64_t seed : {1u, 2u, 3u}) programs.push_back(test::tiny(seed).model().program);
    programs.push_back(test::generated(desk_config(), 1).model().program);
    const test::Instance desk = test::generated(desk_config(), 2);
    std::vector<double> cap;
    for (int l = 0; l < desk.scenario.num_clusters(); ++l) cap.push_back(cluster_slot_capacity(desk.scenario, desk.rates, l));
    programs.push_back(build_schedule_program(desk.scenario, cap, desk.pairs));

    for (const auto& lp : programs) {
        const LinearProgram back = round_trip(lp);
        CHECK(back.columns == lp.columns);
        CHECK(back.objective == lp.objective);
        REQUIRE(back.rows.size() == lp.rows.size());
        for (std::size_t i = 0; i < lp.rows.size(); ++i) CHECK(back.rows[i] == lp.rows[i]);
        CHECK(export_lp(back) == export_lp(lp));
    }
}

TEST_CASE("section layout") {
    const ModelInstance m = test::tiny(1).model();
    const std::string text = export_lp(m);
    const auto maximize = text.find("Maximize\n");
    const auto subject = text.find("Subject To\n");
    const auto bounds = text.find("Bounds\n");
    const auto binaries = text.find("Binaries\n");
    const auto end = text.find("End\n");
    REQUIRE(maximize != std::string::npos);
    CHECK(maximize < subject);
    CHECK(subject < bounds);
    CHECK(bounds < binaries);
    CHECK(binaries < end);
    CHECK(text.find(" obj: 0.0001 tU_1 + 0.0001 tU_2 + 0.0001 tL + theta\n") != std::string::npos);
    CHECK(text.find(" C8b: - tL + theta <= 0\n") != std::string::npos);
    CHECK(text.find("theta free") != std::string::npos);
}

TEST_CASE("binaries section lists exactly the binary columns") {
    LinearProgram lp;
    lp.add_column("x", 0, 4);
    lp.add_column("pick", 0, 1, true);
    lp.add_row({{0, 1}, {1, -4}}, Sense::less_equal, 0, "R", "link");
    lp.objective = {{0, 1.0}};
    const std::string text = export_lp(lp);
    CHECK(text.find("Binaries\n pick\nEnd\n") != std::string::npos);
    CHECK(round_trip(lp).columns == lp.columns);
}

TEST_CASE("numbers survive the round trip") {
    LinearProgram lp;
    lp.add_column("x", -2.5, 1e300);
    lp.add_column("y", -kInf, 0.1);
    lp.add_column("w", 3, 3);
    lp.add_row({{0, 0.1}, {1, 1.0 / 3.0}, {2, -2.0e-7}}, Sense::equal, 1.0 / 7.0, "r", "r");
    lp.objective = {{0, 1e-4}, {1, -1.0}};
    const LinearProgram back = round_trip(lp);
    CHECK(back.columns == lp.columns);
    CHECK(back.rows == lp.rows);
    CHECK(back.objective == lp.objective);
}

TEST_CASE("reader accepts the usual variants") {
    const std::string text =
        "\\ comment\n"
        "Minimize\n"
        " cost: 2 x + y \\ trailing comment\n"
        "st\n"
        " c1: x + y >= 1\n"
        " -x + 2 y <= 4\n"
        "Bounds\n"
        " y <= 5\n"
        " -inf <= x <= 3\n"
        "Binary\n"
        " b\n"
        "End\n";
    const LinearProgram lp = parse_lp(text);
    REQUIRE(lp.num_columns() == 3);
    CHECK(lp.columns[0].name == "x");
    CHECK(lp.columns[0].lower == -kInf);
    CHECK(lp.columns[0].upper == 3);
    CHECK(lp.columns[1].upper == 5);
    CHECK(lp.columns[2].binary);
    CHECK(lp.objective == std::vector<Term>{{0, -2.0}, {1, -1.0}});
    REQUIRE(lp.num_rows() == 2);
    CHECK(lp.rows[0].name == "c1");
    CHECK(lp.rows[1].sense == Sense::less_equal);
}

TEST_CASE("parse errors carry the line number") {
    CHECK(parse_error_line("Maximize\n obj: x\nSubject To\n c: x + <= 3\nEnd\n") == 4);
    CHECK(parse_error_line("Maximize\n obj: x\nSubject To\n c: x 3\nEnd\n") == 4);
    CHECK(parse_error_line("Maximize\n obj: x\nSubject To\n c: x <= 1\nGenerals\n x\nEnd\n") == 5);
    CHECK(parse_error_line("Maximize\n obj: x\nSubject To\n c: x <= 1\n") > 0);
    CHECK(parse_error_line(" x <= 1\n") == 1);
}

TEST_CASE("rebuild rejects a different column set") {
    const LinearProgram lp = test::tiny(1).model().program;
    auto names = names_of(lp);
    names.back() = "phi";
    CHECK_THROWS_AS(rebuild_program(parse_lp(export_lp(lp)), names), StructuralError);
}

TEST_CASE("row families from names") {
    CHECK(tag_from_name("C9d_1_2_1_3") == "C9-d");
    CHECK(tag_from_name("C8b") == "C8-b");
    CHECK(tag_from_name("C7a_1_1_2") == "C7-a");
    CHECK(tag_from_name("C1_2_3") == "C1");
    CHECK(tag_from_name("C6_1_2_4") == "C6");
}

}
