#pragma once

// Run configuration, report documents and the command dispatcher behind the
// `nucleus` CLI. Reports are written with a fixed key order and every real
// printed with 17 significant digits, so identical inputs give identical bytes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nucleus/specimen.hpp"

namespace nucleus {

inline constexpr std::string_view kToolName = "nucleus";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct Tolerances {
    double residual = 1e-10;
    double solvability = 1e-8;
    double habit_residual = 1e-8;
    double membership = kDefaultTol;
    double boundary_band = kDefaultBoundaryBand;
    double well = 1e-8;

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct SampleCounts {
    std::uint64_t sphere = 100000;
    int circle = 3600;
    int habit_scan = 10000;

    friend bool operator==(const SampleCounts&, const SampleCounts&) = default;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    Specimen specimen;
    double delta = 1.0;
    Tolerances tolerances;
    SampleCounts samples;
    std::uint64_t seed = 1;
    FaceMode face_mode = FaceMode::Theorem;
    DirectionMode direction_mode = DirectionMode::Definitional;
    bool ciarlet_necas_assumed = true;
    bool include_tangent_roots = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws Error{ConfigError} on malformed JSON, unknown keys, wrong types or a
// missing "lattice" block. Edge directions that are not unit length are normalized.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

nlohmann::ordered_json config_to_json(const RunConfig& cfg);

AnalysisOptions analysis_options(const RunConfig& cfg);
CertificateOptions certificate_options(const RunConfig& cfg);

// Deterministic JSON text: 2-space indent, reals as %.17g, non-finite reals as null.
std::string dump_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const Vec3& v);
nlohmann::ordered_json to_json(const Mat3& m);  // rows
nlohmann::ordered_json to_json(const TwinSolution& t);
nlohmann::ordered_json to_json(const HabitSolution& h);
nlohmann::ordered_json to_json(const NucleationCertificate& c);
nlohmann::ordered_json to_json(const DirectionVerdict& v);
nlohmann::ordered_json to_json(const ValidationStats& v);
nlohmann::ordered_json to_json(const ExclusionReport& r);
nlohmann::ordered_json to_json(const SiteVerdict& v);
nlohmann::ordered_json to_json(const AnalysisReport& r);

enum class OutputFormat { Json, Text };

// Full report document for `analyze`.
nlohmann::ordered_json analysis_document(const RunConfig& cfg, const AnalysisReport& rep);

// Human-readable table, one row per site, ending with the "NUCLEATION: ..." line.
std::string analysis_text(const AnalysisReport& rep);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// CLI entry point: `nucleus <command> [options]`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nucleus
