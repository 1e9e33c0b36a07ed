#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuglab/fuglab.hpp"
#include "helpers.hpp"

using namespace fuglab;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("run_suite on the fuglede suite with an identity fixture") {
    SuiteConfig config;
    config.suite = SuiteKind::fuglede;
    config.trials = 1;
    config.fixture = CMatrix::Identity(3, 3);
    const SuiteReport report = run_suite(config);
    REQUIRE(report.instances.size() == 1);
    REQUIRE(report.pass == 1);
    REQUIRE(report.unexpected() == 0);
}

TEST_CASE("run_suite on the jordan suite") {
    SuiteConfig config;
    config.suite = SuiteKind::jordan;
    config.trials = 1;
    const SuiteReport report = run_suite(config);
    REQUIRE(report.fail == 1);
    REQUIRE(report.instances[0].witness.has_value());
    REQUIRE(std::abs(report.instances[0].conclusion_residual - std::sqrt(2.0)) <= 1e-12);
    // all-FAIL is the expected outcome for this suite
    REQUIRE(report.unexpected() == 0);
}

TEST_CASE("run_suite on the dimension oracle suite") {
    SuiteConfig config;
    config.suite = SuiteKind::oracle_dims;
    config.trials = 10;
    config.max_dim = 6;
    config.seed = 5150;
    const SuiteReport report = run_suite(config);
    REQUIRE(report.pass == 10);
    REQUIRE(report.fail == 0);
    REQUIRE(report.vacuous == 0);
}

TEST_CASE("reports are deterministic in the config") {
    SuiteConfig config;
    config.suite = SuiteKind::flip;
    config.trials = 6;
    config.seed = 31337;
    config.max_dim = 6;
    const SuiteReport first = run_suite(config);
    const SuiteReport second = run_suite(config);
    REQUIRE(same_report_content(first, second));
}

TEST_CASE("a suite produces the same instances alone and inside all") {
    SuiteConfig alone;
    alone.suite = SuiteKind::jordan;
    alone.trials = 3;
    alone.seed = 777;

    SuiteConfig combined = alone;
    combined.suite = SuiteKind::all;
    combined.trials = 3;

    const SuiteReport single = run_suite(alone);
    const SuiteReport all = run_suite(combined);
    int matched = 0;
    for (const auto& r : all.instances) {
        if (r.check != "jordan") continue;
        const auto& s = single.instances[static_cast<std::size_t>(matched)];
        REQUIRE(r.instance_id == s.instance_id);
        REQUIRE(r.conclusion_residual == s.conclusion_residual);
        ++matched;
    }
    REQUIRE(matched == 3);
}

TEST_CASE("a custom function pool drives the transport suite") {
    SuiteConfig config;
    config.suite = SuiteKind::theorem21;
    config.trials = 4;
    config.seed = 2024;
    config.max_dim = 5;
    config.max_distinct_eigs = 3;
    config.functions.emplace_back(SpectrumFunction::builtin(BuiltinFunction::identity),
                                  SpectrumFunction::builtin(BuiltinFunction::square));
    config.functions.emplace_back(SpectrumFunction::builtin(BuiltinFunction::conjugate),
                                  SpectrumFunction::builtin(BuiltinFunction::conjugate));
    const SuiteReport report = run_suite(config);
    REQUIRE(report.pass == 4);

    const json echo = suite_config_to_json(config);
    REQUIRE(echo.at("functions").size() == 2);
    REQUIRE(echo.at("functions")[0][1].at("kind") == "builtin");
}

TEST_CASE("emit_report surfaces io failures") {
    SuiteReport empty;
    empty.version_string = std::string(version);
    REQUIRE_THROWS_AS(
        emit_report(empty, ReportFormat::json_format, "/nonexistent_dir/report.json"), IoError);
}

TEST_CASE("config validation") {
    SuiteConfig config;
    config.trials = 0;
    REQUIRE_THROWS_AS(run_suite(config), ConfigError);

    config = SuiteConfig{};
    config.max_distinct_eigs = 20;
    config.max_dim = 10;
    REQUIRE_THROWS_AS(run_suite(config), ConfigError);

    config = SuiteConfig{};
    config.hypothesis_tol = -1.0;
    REQUIRE_THROWS_AS(run_suite(config), ConfigError);

    config = SuiteConfig{};
    config.suite = SuiteKind::jordan;
    config.fixture = CMatrix::Identity(2, 2);
    REQUIRE_THROWS_AS(run_suite(config), ConfigError);
}

TEST_CASE("json report round trip") {
    SuiteConfig config;
    config.suite = SuiteKind::jordan;  // guarantees a witness in the output
    config.trials = 4;
    config.seed = 99;
    const SuiteReport report = run_suite(config);

    const auto path = temp_file("fuglab_report_roundtrip.json");
    emit_report(report, ReportFormat::json_format, path);

    std::ifstream in(path);
    json parsed;
    in >> parsed;
    REQUIRE(parsed.at("schema_version").get<int>() == 1);
    const SuiteReport back = report_from_json(parsed);
    REQUIRE(same_report_content(report, back));
    std::filesystem::remove(path);
}

TEST_CASE("csv report") {
    SuiteConfig config;
    config.suite = SuiteKind::jordan;
    config.trials = 2;
    const SuiteReport report = run_suite(config);

    const auto path = temp_file("fuglab_report.csv");
    emit_report(report, ReportFormat::csv, path);

    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    REQUIRE(header == "instance_id,check,hypothesis_residual,conclusion_residual,verdict");
    int rows = 0, fails = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find("FAIL") != std::string::npos) ++fails;
    }
    REQUIRE(rows == 2);
    REQUIRE(fails == 2);
    std::filesystem::remove(path);
}

TEST_CASE("an empty report serializes to a valid schema") {
    SuiteReport empty;
    empty.version_string = std::string(version);
    empty.config.suite = SuiteKind::fuglede;
    const json j = report_to_json(empty);
    REQUIRE(j.at("schema_version").get<int>() == 1);
    REQUIRE(j.at("instances").is_array());
    REQUIRE(j.at("instances").empty());
    REQUIRE(j.at("summary").at("pass").get<int>() == 0);
}

TEST_CASE("tolerance overrides load from a json file") {
    const auto path = temp_file("fuglab_tols.json");
    {
        std::ofstream out(path);
        out << R"({"hypothesis_tol": 1e-6, "conclusion_tol": 1e-5, "rank_tol": 1e-9})";
    }
    SuiteConfig config;
    apply_tolerance_file(config, path);
    REQUIRE(config.hypothesis_tol == 1e-6);
    REQUIRE(config.conclusion_tol == 1e-5);
    REQUIRE(config.rank_tol == 1e-9);
    REQUIRE_FALSE(config.cluster_tol.has_value());
    std::filesystem::remove(path);

    REQUIRE_THROWS_AS(apply_tolerance_file(config, temp_file("missing_tols.json")), IoError);
}

TEST_CASE("matrix json io") {
    std::mt19937_64 engine = make_engine(60);
    const CMatrix m = gaussian_matrix(3, 2, engine);
    const json j = matrix_to_json(m);
    REQUIRE(testutil::bitwise_equal(matrix_from_json(j), m));

    const auto path = temp_file("fuglab_matrix.json");
    save_matrix(path, m);
    REQUIRE(testutil::bitwise_equal(load_matrix(path), m));
    std::filesystem::remove(path);

    REQUIRE_THROWS_AS(matrix_from_json(json{{"rows", 2}, {"cols", 2}}), IoError);
    REQUIRE_THROWS_AS(
        matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"entries", json::array()}}), IoError);
    // wrong types narrow to IoError rather than leaking json exceptions
    REQUIRE_THROWS_AS(matrix_from_json(json{{"rows", "two"}, {"cols", 2}, {"entries", 3}}),
                      IoError);
}

TEST_CASE("function json io") {
    const SpectrumFunction conj = SpectrumFunction::builtin(BuiltinFunction::conjugate);
    const json jb = function_to_json(conj);
    REQUIRE(jb.at("kind") == "builtin");
    REQUIRE(jb.at("name") == "conjugate");
    REQUIRE(function_from_json(jb)(Complex(1.0, 2.0)) == Complex(1.0, -2.0));

    const SpectrumFunction poly =
        SpectrumFunction::polynomial({Complex(1.0), Complex(0.0, -1.0)});
    const SpectrumFunction poly_back = function_from_json(function_to_json(poly));
    REQUIRE(poly_back(Complex(2.0)) == Complex(1.0, -2.0));

    const SpectrumFunction table =
        SpectrumFunction::table({Complex(0.0), Complex(1.0)}, {Complex(5.0), Complex(6.0)});
    const SpectrumFunction table_back = function_from_json(function_to_json(table));
    REQUIRE(table_back(Complex(1.0)) == Complex(6.0));

    REQUIRE_THROWS_AS(function_from_json(json{{"kind", "mystery"}}), IoError);
}
