#include "nucleus/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "nucleus/error.hpp"

namespace nucleus {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

void check_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed, const std::string& ctx) {
    if (!obj.is_object()) config_error(ctx + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) config_error("unknown key \"" + key + "\" in " + ctx);
    }
}

double get_real(const nlohmann::json& obj, const char* key, const std::string& ctx, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) config_error(ctx + "." + key + " must be a number");
    return v.get<double>();
}

bool get_bool(const nlohmann::json& obj, const char* key, const std::string& ctx, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) config_error(ctx + "." + key + " must be a boolean");
    return v.get<bool>();
}

std::uint64_t get_count(const nlohmann::json& obj, const char* key, const std::string& ctx, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    config_error(ctx + "." + key + " must be a non-negative integer");
}

std::string get_string(const nlohmann::json& obj, const char* key, const std::string& ctx, std::string fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) config_error(ctx + "." + key + " must be a string");
    return v.get<std::string>();
}

Vec3 get_vec3(const nlohmann::json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 3) config_error(ctx + " must be an array of 3 numbers");
    Vec3 out;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number()) config_error(ctx + " must be an array of 3 numbers");
        out[i] = v[i].get<double>();
    }
    return out;
}

std::string format_real(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);  // no negative zero
    return buf;
}

void write_json(const ordered_json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + ordered_json(key).dump() + ": ";
                write_json(value, out, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // numeric vectors and matrix rows stay on one line
            const bool flat = std::all_of(j.begin(), j.end(), [](const ordered_json& x) { return x.is_number(); });
            out += flat ? "[" : "[\n";
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += flat ? ", " : ",\n";
                first = false;
                if (!flat) out += pad;
                write_json(value, out, depth + 1);
            }
            out += flat ? "]" : "\n" + close_pad + "]";
            return;
        }
        case ordered_json::value_t::number_float:
            out += format_real(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
    std::string out;
    write_json(j, out, 0);
    out += "\n";
    return out;
}

RunConfig parse_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        config_error(std::string("malformed JSON: ") + e.what());
    }
    check_keys(j,
               {"schema_version", "lattice", "specimen", "delta", "tolerances", "samples", "seed", "face_mode",
                "direction_mode", "ciarlet_necas_assumed", "include_tangent_roots"},
               "config");

    RunConfig cfg;
    cfg.schema_version = static_cast<int>(get_count(j, "schema_version", "config", kSchemaVersion));
    if (cfg.schema_version != kSchemaVersion)
        config_error("unsupported schema_version " + std::to_string(cfg.schema_version));

    if (!j.contains("lattice")) config_error("config.lattice is required");
    const auto& lat = j.at("lattice");
    check_keys(lat, {"alpha", "beta", "gamma"}, "lattice");
    for (const char* k : {"alpha", "beta", "gamma"})
        if (!lat.contains(k)) config_error(std::string("lattice.") + k + " is required");
    cfg.specimen.lattice = {get_real(lat, "alpha", "lattice", 1.0), get_real(lat, "beta", "lattice", 1.0),
                            get_real(lat, "gamma", "lattice", 1.0)};

    if (j.contains("specimen")) {
        const auto& sp = j.at("specimen");
        check_keys(sp, {"edge_directions", "edge_lengths_mm", "stabilized_variant"}, "specimen");
        if (sp.contains("edge_directions")) {
            const auto& dirs = sp.at("edge_directions");
            if (!dirs.is_array() || dirs.size() != 3) config_error("specimen.edge_directions must hold 3 vectors");
            for (std::size_t k = 0; k < 3; ++k) {
                Vec3 d = get_vec3(dirs[k], "specimen.edge_directions");
                if (norm(d) == 0.0) config_error("specimen.edge_directions must be nonzero");
                if (!is_unit(d, 1e-12)) d = normalized(d);
                cfg.specimen.edge_directions[k] = d;
            }
        }
        if (sp.contains("edge_lengths_mm")) {
            const Vec3 l = get_vec3(sp.at("edge_lengths_mm"), "specimen.edge_lengths_mm");
            cfg.specimen.edge_lengths = {l[0], l[1], l[2]};
        }
        cfg.specimen.stabilized_variant = static_cast<int>(get_count(sp, "stabilized_variant", "specimen", 1));
    }

    cfg.delta = get_real(j, "delta", "config", cfg.delta);

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        check_keys(t, {"residual", "solvability", "habit_residual", "membership", "boundary_band", "well"},
                   "tolerances");
        auto& tol = cfg.tolerances;
        tol.residual = get_real(t, "residual", "tolerances", tol.residual);
        tol.solvability = get_real(t, "solvability", "tolerances", tol.solvability);
        tol.habit_residual = get_real(t, "habit_residual", "tolerances", tol.habit_residual);
        tol.membership = get_real(t, "membership", "tolerances", tol.membership);
        tol.boundary_band = get_real(t, "boundary_band", "tolerances", tol.boundary_band);
        tol.well = get_real(t, "well", "tolerances", tol.well);
    }
    if (j.contains("samples")) {
        const auto& s = j.at("samples");
        check_keys(s, {"sphere", "circle", "habit_scan"}, "samples");
        cfg.samples.sphere = get_count(s, "sphere", "samples", cfg.samples.sphere);
        cfg.samples.circle = static_cast<int>(get_count(s, "circle", "samples", std::uint64_t(cfg.samples.circle)));
        cfg.samples.habit_scan =
            static_cast<int>(get_count(s, "habit_scan", "samples", std::uint64_t(cfg.samples.habit_scan)));
    }
    cfg.seed = get_count(j, "seed", "config", cfg.seed);

    const std::string face = get_string(j, "face_mode", "config", "theorem");
    if (face == "theorem") cfg.face_mode = FaceMode::Theorem;
    else if (face == "extended") cfg.face_mode = FaceMode::Extended;
    else config_error("face_mode must be \"theorem\" or \"extended\"");

    const std::string dir = get_string(j, "direction_mode", "config", "definitional");
    if (dir == "definitional") cfg.direction_mode = DirectionMode::Definitional;
    else if (dir == "explicit") cfg.direction_mode = DirectionMode::Explicit;
    else config_error("direction_mode must be \"definitional\" or \"explicit\"");

    cfg.ciarlet_necas_assumed = get_bool(j, "ciarlet_necas_assumed", "config", true);
    cfg.include_tangent_roots = get_bool(j, "include_tangent_roots", "config", false);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ordered_json to_json(const Vec3& v) { return ordered_json::array({v[0], v[1], v[2]}); }

ordered_json to_json(const Mat3& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < 3; ++r) rows.push_back(to_json(m.row(r)));
    return rows;
}

ordered_json config_to_json(const RunConfig& cfg) {
    ordered_json j;
    j["schema_version"] = cfg.schema_version;
    j["lattice"] = {{"alpha", cfg.specimen.lattice.alpha},
                    {"beta", cfg.specimen.lattice.beta},
                    {"gamma", cfg.specimen.lattice.gamma}};
    ordered_json dirs = ordered_json::array();
    for (const auto& d : cfg.specimen.edge_directions) dirs.push_back(to_json(d));
    j["specimen"] = {{"edge_directions", dirs},
                     {"edge_lengths_mm",
                      {cfg.specimen.edge_lengths[0], cfg.specimen.edge_lengths[1], cfg.specimen.edge_lengths[2]}},
                     {"stabilized_variant", cfg.specimen.stabilized_variant}};
    j["delta"] = cfg.delta;
    const auto& t = cfg.tolerances;
    j["tolerances"] = {{"residual", t.residual},       {"solvability", t.solvability},
                       {"habit_residual", t.habit_residual}, {"membership", t.membership},
                       {"boundary_band", t.boundary_band}, {"well", t.well}};
    j["samples"] = {{"sphere", cfg.samples.sphere},
                    {"circle", cfg.samples.circle},
                    {"habit_scan", cfg.samples.habit_scan}};
    j["seed"] = cfg.seed;
    j["face_mode"] = std::string(to_string(cfg.face_mode));
    j["direction_mode"] = std::string(to_string(cfg.direction_mode));
    j["ciarlet_necas_assumed"] = cfg.ciarlet_necas_assumed;
    j["include_tangent_roots"] = cfg.include_tangent_roots;
    return j;
}

CertificateOptions certificate_options(const RunConfig& cfg) {
    CertificateOptions c;
    c.twin.residual = cfg.tolerances.residual;
    c.twin.solvability = cfg.tolerances.solvability;
    c.habit.scan_points = cfg.samples.habit_scan;
    c.habit.solvability_tol = cfg.tolerances.solvability;
    c.habit.residual_tol = cfg.tolerances.habit_residual;
    c.habit.include_tangent = cfg.include_tangent_roots;
    return c;
}

AnalysisOptions analysis_options(const RunConfig& cfg) {
    AnalysisOptions o;
    o.delta = cfg.delta;
    o.direction_mode = cfg.direction_mode;
    o.face_mode = cfg.face_mode;
    o.circle_samples = cfg.samples.circle;
    o.sphere_samples = cfg.samples.sphere;
    o.seed = cfg.seed;
    o.membership_tol = cfg.tolerances.membership;
    o.boundary_band = cfg.tolerances.boundary_band;
    o.det_tol = cfg.tolerances.membership;
    o.well_tol = cfg.tolerances.well;
    o.ciarlet_necas_assumed = cfg.ciarlet_necas_assumed;
    o.certificates = certificate_options(cfg);
    return o;
}

ordered_json to_json(const TwinSolution& t) {
    return {{"branch", t.branch}, {"Q", to_json(t.Q)}, {"a", to_json(t.a)}, {"n", to_json(t.n)},
            {"residual", t.residual}};
}

ordered_json to_json(const HabitSolution& h) {
    return {{"lambda", h.lambda},
            {"root_index", h.root_index},
            {"branch", h.branch},
            {"tangent", h.tangent},
            {"R", to_json(h.R)},
            {"b", to_json(h.b)},
            {"m", to_json(h.m)},
            {"residual", h.residual},
            {"middle_eigenvalue", h.middle_eigenvalue}};
}

ordered_json to_json(const NucleationCertificate& c) {
    return {{"s", c.s},
            {"l", c.l},
            {"twin", to_json(c.twin)},
            {"habit", to_json(c.habit)},
            {"energy_gap_rate", c.energy_gap_rate}};
}

ordered_json to_json(const DirectionVerdict& v) {
    return {{"e", to_json(v.e)},
            {"mode", std::string(to_string(v.mode))},
            {"in_Ms", v.in_Ms},
            {"in_Msinv", v.in_Msinv},
            {"in_Us2_Msinv", v.in_Us2_Msinv},
            {"qualifying", v.qualifying},
            {"boundary_flag", v.boundary_flag}};
}

ordered_json to_json(const ValidationStats& v) {
    ordered_json dis = ordered_json::array();
    for (const auto& d : v.disagreements) {
        dis.push_back({{"index", d.index},
                       {"e", to_json(d.e)},
                       {"definitional", {{"in_Ms", d.definitional_Ms}, {"in_Msinv", d.definitional_Msinv}}},
                       {"explicit", {{"in_Ms", d.explicit_Ms}, {"in_Msinv", d.explicit_Msinv}}}});
    }
    ordered_json j = {{"s", v.s},
                      {"samples", v.samples},
                      {"evaluated", v.evaluated},
                      {"agreements", v.agreements},
                      {"agreement", v.agreement},
                      {"boundary_band", v.band},
                      {"degenerate", v.degenerate}};
    if (v.degenerate) j["degenerate_reason"] = v.degenerate_reason;
    j["disagreements"] = dis;
    return j;
}

ordered_json to_json(const ExclusionReport& r) {
    return {{"det_barycenter", r.det_barycenter},
            {"measure_det", r.measure_det},
            {"so3_mass", r.so3_mass},
            {"norm_sq_barycenter", r.norm_sq_barycenter},
            {"measure_norm_sq", r.measure_norm_sq},
            {"barycenter_error", r.barycenter_error},
            {"det_identity", r.det_identity},
            {"det_identity_expected", r.det_identity_expected},
            {"verdict", std::string(to_string(r.verdict))}};
}

namespace {

std::string_view kind_name(SiteKind k) {
    switch (k) {
        case SiteKind::Interior: return "interior";
        case SiteKind::Face: return "face";
        case SiteKind::Edge: return "edge";
        case SiteKind::Corner: return "corner";
    }
    return "interior";
}

}  // namespace

ordered_json to_json(const SiteVerdict& v) {
    ordered_json j;
    j["site"] = std::string(kind_name(v.site.kind));
    j["id"] = v.site.index + 1;
    j["name"] = v.site.name();
    j["excluded"] = v.excluded;
    j["reason"] = std::string(to_string(v.reason));
    j["assumed_ciarlet_necas"] = v.assumed_ciarlet_necas;
    j["witness"] = v.witness ? to_json(*v.witness) : ordered_json(nullptr);
    if (v.exclusion) j["exclusion"] = to_json(*v.exclusion);
    j["certificate"] = v.certificate ? to_json(*v.certificate) : ordered_json(nullptr);
    return j;
}

namespace {

ordered_json variants_json(const VariantSet& vs) {
    ordered_json mats = ordered_json::array();
    for (const auto& u : vs.U) mats.push_back(to_json(u));
    return {{"alpha", vs.params.alpha},
            {"beta", vs.params.beta},
            {"gamma", vs.params.gamma},
            {"det", vs.params.det()},
            {"norm_sq", vs.params.norm_sq()},
            {"det_le_one", vs.params.det_le_one()},
            {"degenerate", variants_coincide(vs)},
            {"U", mats}};
}

ordered_json twin_table_json(const TwinTable& table) {
    ordered_json out = ordered_json::array();
    for (const auto& [pair, sols] : table) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : sols) arr.push_back(to_json(t));
        out.push_back({{"i", pair.first}, {"j", pair.second}, {"count", sols.size()}, {"solutions", arr}});
    }
    return out;
}

ordered_json assumptions_json(bool ciarlet_necas) {
    return {{"ciarlet_necas_assumed", ciarlet_necas}, {"corner_proxy_disclaimer", std::string(kCornerProxyDisclaimer)}};
}

}  // namespace

ordered_json to_json(const AnalysisReport& r) {
    ordered_json j;
    j["variants"] = variants_json(r.variants);
    j["twin_table"] = r.twins ? twin_table_json(*r.twins) : ordered_json(nullptr);
    ordered_json certs = ordered_json::array();
    for (const auto& c : r.certificates) certs.push_back(to_json(c));
    j["certificates"] = certs;
    j["direction_sets"] = {{"requested_mode", std::string(to_string(r.options.direction_mode))},
                           {"mode_used", std::string(to_string(r.mode_used))},
                           {"validation", to_json(r.validation)}};
    ordered_json edges = ordered_json::array();
    for (const auto& e : r.hypothesis.edges) edges.push_back(to_json(e));
    j["hypothesis"] = {{"pass", r.hypothesis.pass}, {"edge_directions", edges}};
    ordered_json sites = ordered_json::array();
    sites.push_back(to_json(r.interior));
    for (const auto& v : r.faces) sites.push_back(to_json(v));
    for (const auto& v : r.edges) sites.push_back(to_json(v));
    for (const auto& v : r.corners) sites.push_back(to_json(v));
    j["sites"] = sites;
    ordered_json notes = ordered_json::array();
    for (const auto& n : r.notes) notes.push_back({{"site", n.site}, {"code", n.code}, {"message", n.message}});
    j["notes"] = notes;
    j["headline"] = {{"code", std::string(to_string(r.headline))}, {"text", r.headline_text}};
    return j;
}

ordered_json analysis_document(const RunConfig& cfg, const AnalysisReport& rep) {
    ordered_json doc;
    doc["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    doc["command"] = "analyze";
    doc["config"] = config_to_json(cfg);
    doc["assumptions"] = assumptions_json(cfg.ciarlet_necas_assumed);
    const ordered_json body = to_json(rep);
    for (const auto& [key, value] : body.items()) doc[key] = value;
    return doc;
}

std::string analysis_text(const AnalysisReport& rep) {
    std::ostringstream out;
    char line[256];
    const auto& p = rep.specimen.lattice;
    std::snprintf(line, sizeof line, "%s %s analyze\n", kToolName.data(), kToolVersion.data());
    out << line;
    std::snprintf(line, sizeof line, "lattice alpha=%.10g beta=%.10g gamma=%.10g det=%.10g  stabilized variant s=%d\n",
                  p.alpha, p.beta, p.gamma, p.det(), rep.specimen.stabilized_variant);
    out << line;
    std::snprintf(line, sizeof line, "direction sets: %s (agreement %.6f over %" PRIu64 " samples)\n",
                  std::string(to_string(rep.mode_used)).c_str(), rep.validation.agreement, rep.validation.evaluated);
    out << line;
    std::snprintf(line, sizeof line, "%-10s %-9s %-24s %s\n", "site", "excluded", "reason", "detail");
    out << line;

    auto row = [&](const SiteVerdict& v) {
        std::string detail;
        if (v.witness) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "direction (%.6f, %.6f, %.6f)", (*v.witness)[0], (*v.witness)[1],
                          (*v.witness)[2]);
            detail = buf;
        } else if (v.certificate) {
            char buf[160];
            const auto& c = *v.certificate;
            std::snprintf(buf, sizeof buf, "l=%d lambda=%.6f m=(%.4f, %.4f, %.4f) gap=%.6g", c.l, c.habit.lambda,
                          c.habit.m[0], c.habit.m[1], c.habit.m[2], c.energy_gap_rate);
            detail = buf;
        } else if (v.exclusion) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "det identity %.6g = %.6g", v.exclusion->det_identity,
                          v.exclusion->det_identity_expected);
            detail = buf;
        }
        std::snprintf(line, sizeof line, "%-10s %-9s %-24s %s\n", v.site.name().c_str(), v.excluded ? "yes" : "no",
                      std::string(to_string(v.reason)).c_str(), detail.c_str());
        out << line;
    };
    row(rep.interior);
    for (const auto& v : rep.faces) row(v);
    for (const auto& v : rep.edges) row(v);
    for (const auto& v : rep.corners) row(v);

    out << "certificates: " << rep.certificates.size() << "\n";
    for (const auto& n : rep.notes) out << "note [" << n.site << "] " << n.code << ": " << n.message << "\n";
    out << "ciarlet-necas assumed: " << (rep.options.ciarlet_necas_assumed ? "yes" : "no") << "\n";
    out << "corner proxy: " << kCornerProxyDisclaimer << "\n";

    std::string headline;
    switch (rep.headline) {
        case Headline::CornersOnly: headline = "corners only"; break;
        case Headline::NoTransformation: headline = "no transformation"; break;
        default: headline = rep.headline_text; break;
    }
    out << "NUCLEATION: " << headline << "\n";
    return out.str();
}

}  // namespace nucleus
