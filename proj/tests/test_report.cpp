#include <sstream>

#include "doctest.h"
#include "nucleus/error.hpp"
#include "nucleus/report.hpp"

using namespace nucleus;

namespace {

const char* kExample = R"({
  "schema_version": 1,
  "lattice": {"alpha": 1.06, "beta": 0.92, "gamma": 1.02},
  "specimen": {"edge_directions": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "edge_lengths_mm": [12, 3, 3],
               "stabilized_variant": 1},
  "samples": {"sphere": 5000},
  "seed": 99
})";

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

ErrorCode parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::NumericalFailure;  // no throw
}

}  // namespace

TEST_CASE("config parsing and defaults") {
    const RunConfig cfg = parse_config(kExample);
    CHECK(cfg.specimen.lattice == LatticeParams{1.06, 0.92, 1.02});
    CHECK(cfg.samples.sphere == 5000);
    CHECK(cfg.samples.circle == 3600);
    CHECK(cfg.seed == 99);
    CHECK(cfg.delta == 1.0);
    CHECK(cfg.ciarlet_necas_assumed);
    CHECK(cfg.face_mode == FaceMode::Theorem);
    CHECK(cfg.direction_mode == DirectionMode::Definitional);
    CHECK(cfg.tolerances.boundary_band == 1e-6);
}

TEST_CASE("config round trip") {
    const RunConfig cfg = parse_config(kExample);
    const RunConfig again = parse_config(dump_json(config_to_json(cfg)));
    CHECK(again == cfg);
    CHECK(dump_json(config_to_json(again)) == dump_json(config_to_json(cfg)));

    RunConfig odd = cfg;
    odd.specimen.lattice = {0.1 + 0.2, 1.0 / 3.0, 2.0 / 3.0};
    odd.seed = 0xFFFFFFFFFFFFFFFFull;
    odd.face_mode = FaceMode::Extended;
    odd.direction_mode = DirectionMode::Explicit;
    odd.ciarlet_necas_assumed = false;
    CHECK(parse_config(dump_json(config_to_json(odd))) == odd);
}

TEST_CASE("config errors") {
    CHECK(parse_error("{") == ErrorCode::ConfigError);
    CHECK(parse_error("[]") == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"seed": 1})") == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"lattice": {"alpha": 1, "beta": 1, "gamma": 1}, "extra": 0})") == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"lattice": {"alpha": 1, "beta": 1, "gamma": 1, "delta": 2}})") ==
          ErrorCode::ConfigError);
    CHECK(parse_error(R"({"lattice": {"alpha": 1, "beta": 1}})") == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"lattice": {"alpha": "1", "beta": 1, "gamma": 1}})") == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"lattice": {"alpha": 1, "beta": 1, "gamma": 1}, "seed": -3})") ==
          ErrorCode::ConfigError);
    CHECK(parse_error(R"({"lattice": {"alpha": 1, "beta": 1, "gamma": 1}, "face_mode": "both"})") ==
          ErrorCode::ConfigError);
    CHECK(parse_error(R"({"schema_version": 2, "lattice": {"alpha": 1, "beta": 1, "gamma": 1}})") ==
          ErrorCode::ConfigError);
    CHECK(parse_error(R"({"lattice": {"alpha": 1, "beta": 1, "gamma": 1}, "samples": {"spheres": 1}})") ==
          ErrorCode::ConfigError);
}

TEST_CASE("edge directions are normalized on input") {
    const RunConfig cfg = parse_config(
        R"({"lattice": {"alpha": 1.06, "beta": 0.92, "gamma": 1.02},
            "specimen": {"edge_directions": [[2, 0, 0], [0, 3, 0], [0, 0, 0.5]]}})");
    CHECK(cfg.specimen.edge_directions[0] == Vec3{1, 0, 0});
    CHECK(cfg.specimen.edge_directions[2] == Vec3{0, 0, 1});
}

TEST_CASE("json writer") {
    nlohmann::ordered_json j;
    j["b"] = 0.1;
    j["a"] = std::vector<double>{1.0, -0.0, 1e-300};
    j["n"] = nullptr;
    j["empty"] = nlohmann::ordered_json::array();
    j["inf"] = INFINITY;
    const std::string text = dump_json(j);
    CHECK(text ==
          "{\n  \"b\": 0.10000000000000001,\n  \"a\": [1, 0, 1e-300],\n  \"n\": null,\n"
          "  \"empty\": [],\n  \"inf\": null\n}\n");
    CHECK(dump_json(to_json(Mat3::identity())) == "[\n  [1, 0, 0],\n  [0, 1, 0],\n  [0, 0, 1]\n]\n");
}

TEST_CASE("analysis document") {
    const RunConfig cfg = parse_config(kExample);
    const auto rep = analyze(cfg.specimen, analysis_options(cfg));
    const auto doc = analysis_document(cfg, rep);
    CHECK(doc["tool"]["version"] == std::string(kToolVersion));
    CHECK(doc["assumptions"]["ciarlet_necas_assumed"] == true);
    CHECK(doc["assumptions"]["corner_proxy_disclaimer"] == std::string(kCornerProxyDisclaimer));
    CHECK(doc["headline"]["code"] == "corner-only");
    CHECK(doc["sites"].size() == 27);
    CHECK(doc["twin_table"].size() == 30);
    CHECK(doc["certificates"].is_array());
    CHECK(!doc["certificates"].empty());

    const std::string text = analysis_text(rep);
    CHECK(text.find("corner proxy: " + std::string(kCornerProxyDisclaimer)) != std::string::npos);
    CHECK(text.substr(text.rfind("NUCLEATION"), std::string::npos) == "NUCLEATION: corners only\n");
}

TEST_CASE("empty certificate lists are kept") {
    RunConfig cfg = parse_config(kExample);
    cfg.specimen.lattice = {1, 1, 1};
    const auto doc = analysis_document(cfg, analyze(cfg.specimen, analysis_options(cfg)));
    CHECK(dump_json(doc).find("\"certificates\": []") != std::string::npos);
    CHECK(doc["headline"]["code"] == "no-transformation");
}

TEST_CASE("reports do not depend on the worker count") {
    const RunConfig cfg = parse_config(kExample);
    AnalysisOptions one = analysis_options(cfg), many = analysis_options(cfg);
    one.workers = 1;
    many.workers = 8;
    const auto a = dump_json(analysis_document(cfg, analyze(cfg.specimen, one)));
    const auto b = dump_json(analysis_document(cfg, analyze(cfg.specimen, many)));
    CHECK(a == b);
}

TEST_CASE("cli commands") {
    const auto analyze_run = cli({"analyze", "--samples", "5000"});
    CHECK(analyze_run.code == kExitOk);
    CHECK(analyze_run.out.find("\"code\": \"corner-only\"") != std::string::npos);
    CHECK(cli({"analyze", "--samples", "5000"}).out == analyze_run.out);

    const auto text = cli({"analyze", "--samples", "5000", "--format", "text"});
    CHECK(text.out.find("NUCLEATION: corners only\n") != std::string::npos);

    const auto cls = cli({"classify", "--direction", "0,1,1", "--s", "1"});
    CHECK(cls.code == kExitOk);
    const auto j = nlohmann::json::parse(cls.out);
    CHECK(j["verdict"]["in_Ms"] == true);
    CHECK(j["verdict"]["e"][1].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));

    const auto var = cli({"variants", "--lattice", "1,1,1"});
    CHECK(var.code == kExitOk);
    CHECK(var.err.find("degenerate") != std::string::npos);
    const auto vj = nlohmann::json::parse(var.out);
    for (const auto& u : vj["variants"]["U"]) CHECK(u == nlohmann::json::parse("[[1,0,0],[0,1,0],[0,0,1]]"));

    CHECK(cli({"twins"}).code == kExitOk);
    const auto habit = cli({"habit", "--s", "4"});
    CHECK(habit.code == kExitOk);
    CHECK(!nlohmann::json::parse(habit.out)["certificates"].empty());
    const auto vs = nlohmann::json::parse(cli({"validate-sets", "--samples", "2000"}).out);
    CHECK(vs["validation"].size() == 6);
}

TEST_CASE("cli exit codes") {
    CHECK(cli({"frobnicate"}).code == kExitConfig);
    CHECK(cli({"analyze", "--bogus"}).code == kExitConfig);
    CHECK(cli({"analyze", "--config", "/nonexistent/config.json"}).code == kExitConfig);
    CHECK(cli({"classify"}).code == kExitConfig);
    CHECK(cli({"classify", "--direction", "1,2"}).code == kExitConfig);
    CHECK(cli({"variants", "--lattice", "1,-1,1"}).code == kExitConfig);
    CHECK(cli({"analyze", "--s", "9"}).code == kExitConfig);

    // twins between coincident wells is a module failure
    const auto deg = cli({"twins", "--lattice", "1,1,1"});
    CHECK(deg.code == kExitNumerical);
    const auto j = nlohmann::json::parse(deg.out);
    CHECK(j["error"]["code"] == "Degenerate");
    CHECK(j["error"].contains("site"));
    CHECK(j["error"].contains("message"));
}
