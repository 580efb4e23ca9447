#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nucleus/error.hpp"
#include "nucleus/report.hpp"

namespace nucleus {

using nlohmann::ordered_json;

namespace {

constexpr const char* kCommands[] = {"variants", "twins", "habit", "classify", "validate-sets", "analyze"};

// Parameters used when no --config is given; not taken from any measured alloy.
RunConfig default_config() {
    RunConfig cfg;
    cfg.specimen = cube_axis_bar({1.06, 0.92, 1.02}, 1);
    return cfg;
}

Vec3 parse_triple(const std::string& text, const char* what) {
    Vec3 v;
    std::istringstream in(text);
    std::string part;
    std::size_t k = 0;
    while (std::getline(in, part, ',')) {
        if (k == 3) throw Error(ErrorCode::ConfigError, std::string(what) + " needs exactly 3 components");
        try {
            std::size_t used = 0;
            v[k] = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, std::string(what) + ": cannot parse \"" + part + "\"");
        }
        ++k;
    }
    if (k != 3) throw Error(ErrorCode::ConfigError, std::string(what) + " needs exactly 3 components");
    return v;
}

std::string real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string matrix_text(const Mat3& m, const std::string& indent) {
    std::string out;
    for (std::size_t r = 0; r < 3; ++r) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s[% .10f % .10f % .10f]\n", indent.c_str(), m(r, 0) + 0.0, m(r, 1) + 0.0,
                      m(r, 2) + 0.0);
        out += buf;
    }
    return out;
}

std::string vec_text(const Vec3& v) { return "(" + real(v[0]) + ", " + real(v[1]) + ", " + real(v[2]) + ")"; }

ordered_json document_head(const std::string& command, const RunConfig& cfg) {
    ordered_json doc;
    doc["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    doc["command"] = command;
    doc["config"] = config_to_json(cfg);
    doc["assumptions"] = {{"ciarlet_necas_assumed", cfg.ciarlet_necas_assumed},
                          {"corner_proxy_disclaimer", std::string(kCornerProxyDisclaimer)}};
    return doc;
}

std::string assumptions_text(const RunConfig& cfg) {
    return std::string("ciarlet-necas assumed: ") + (cfg.ciarlet_necas_assumed ? "yes" : "no") +
           "\ncorner proxy: " + std::string(kCornerProxyDisclaimer) + "\n";
}

struct Outcome {
    ordered_json doc;
    std::string text;
};

Outcome cmd_variants(const RunConfig& cfg, std::ostream& err) {
    const VariantSet vs = make_variants(cfg.specimen.lattice);
    Outcome o;
    o.doc = document_head("variants", cfg);
    ordered_json mats = ordered_json::array();
    for (const auto& u : vs.U) mats.push_back(to_json(u));
    const bool degenerate = variants_coincide(vs, cfg.tolerances.membership);
    o.doc["variants"] = {{"det", vs.params.det()},
                         {"norm_sq", vs.params.norm_sq()},
                         {"degenerate", degenerate},
                         {"U", mats}};
    if (degenerate) {
        err << "warning: degenerate lattice parameters, all variants coincide\n";
        o.doc["warnings"] = ordered_json::array({"degenerate: all variants coincide"});
    }
    std::string t = "det = " + real(vs.params.det()) + "  |U|^2 = " + real(vs.params.norm_sq()) + "\n";
    for (int i = 1; i <= static_cast<int>(kVariantCount); ++i)
        t += "U" + std::to_string(i) + "\n" + matrix_text(vs.variant(i), "  ");
    if (degenerate) t += "warning: degenerate\n";
    o.text = t + assumptions_text(cfg);
    return o;
}

Outcome cmd_twins(const RunConfig& cfg) {
    const VariantSet vs = make_variants(cfg.specimen.lattice);
    const TwinTable table = twin_table(vs, certificate_options(cfg).twin);
    Outcome o;
    o.doc = document_head("twins", cfg);
    ordered_json arr = ordered_json::array();
    std::string t;
    for (const auto& [pair, sols] : table) {
        ordered_json s = ordered_json::array();
        for (const auto& x : sols) s.push_back(to_json(x));
        arr.push_back({{"i", pair.first}, {"j", pair.second}, {"count", sols.size()}, {"solutions", s}});
        t += "(" + std::to_string(pair.first) + "," + std::to_string(pair.second) + ") " +
             std::to_string(sols.size()) + " solutions\n";
        for (const auto& x : sols)
            t += "  branch " + std::to_string(x.branch) + " a=" + vec_text(x.a) + " n=" + vec_text(x.n) +
                 " residual=" + real(x.residual) + "\n";
    }
    o.doc["twin_table"] = arr;
    o.text = t + assumptions_text(cfg);
    return o;
}

Outcome cmd_habit(const RunConfig& cfg) {
    const VariantSet vs = make_variants(cfg.specimen.lattice);
    const int s = cfg.specimen.stabilized_variant;
    const auto certs = corner_certificates(vs, s, cfg.delta, certificate_options(cfg));
    Outcome o;
    o.doc = document_head("habit", cfg);
    o.doc["s"] = s;
    ordered_json arr = ordered_json::array();
    std::string t = "s = " + std::to_string(s) + ", " + std::to_string(certs.size()) + " certificates\n";
    for (const auto& c : certs) {
        arr.push_back(to_json(c));
        t += "  l=" + std::to_string(c.l) + " twin branch " + std::to_string(c.twin.branch) +
             " lambda=" + real(c.habit.lambda) + " m=" + vec_text(c.habit.m) + " b=" + vec_text(c.habit.b) +
             " residual=" + real(c.habit.residual) + " gap=" + real(c.energy_gap_rate) + "\n";
    }
    o.doc["certificates"] = arr;
    o.text = t + assumptions_text(cfg);
    return o;
}

Outcome cmd_classify(const RunConfig& cfg, const Vec3& direction) {
    const VariantSet vs = make_variants(cfg.specimen.lattice);
    const int s = cfg.specimen.stabilized_variant;
    const auto& tol = cfg.tolerances;
    const DirectionVerdict v = qualifying(direction, vs, s, cfg.direction_mode, tol.membership, tol.boundary_band);
    Outcome o;
    o.doc = document_head("classify", cfg);
    o.doc["s"] = s;
    o.doc["verdict"] = to_json(v);
    o.doc["margins"] = {{"Ms_definitional", Ms_margin_definitional(direction, vs, s)},
                        {"Msinv_definitional", Msinv_margin_definitional(direction, vs, s)},
                        {"explicit", margin_explicit(direction, s)}};
    auto yn = [](bool b) { return std::string(b ? "true" : "false"); };
    o.text = "e = " + vec_text(direction) + "  s = " + std::to_string(s) + "  mode " +
             std::string(to_string(v.mode)) + "\nin_Ms " + yn(v.in_Ms) + "\nin_Msinv " + yn(v.in_Msinv) +
             "\nin_Us2_Msinv " + yn(v.in_Us2_Msinv) + "\nqualifying " + yn(v.qualifying) + "\nboundary_flag " +
             yn(v.boundary_flag) + "\n" + assumptions_text(cfg);
    return o;
}

Outcome cmd_validate_sets(const RunConfig& cfg, bool all_variants) {
    const VariantSet vs = make_variants(cfg.specimen.lattice);
    const auto points = sample_sphere(cfg.samples.sphere, cfg.seed);
    Outcome o;
    o.doc = document_head("validate-sets", cfg);
    ordered_json arr = ordered_json::array();
    std::string t;
    const int first = all_variants ? 1 : cfg.specimen.stabilized_variant;
    const int last = all_variants ? static_cast<int>(kVariantCount) : first;
    for (int s = first; s <= last; ++s) {
        const auto stats = cross_validate_points(vs, s, points, cfg.tolerances.boundary_band);
        arr.push_back(to_json(stats));
        char buf[160];
        std::snprintf(buf, sizeof buf, "s=%d agreement %.6f (%llu/%llu evaluated, %llu sampled)%s\n", s,
                      stats.agreement, static_cast<unsigned long long>(stats.agreements),
                      static_cast<unsigned long long>(stats.evaluated),
                      static_cast<unsigned long long>(stats.samples), stats.degenerate ? " degenerate" : "");
        t += buf;
    }
    o.doc["validation"] = arr;
    o.text = t + assumptions_text(cfg);
    return o;
}

Outcome cmd_analyze(const RunConfig& cfg) {
    const AnalysisReport rep = analyze(cfg.specimen, analysis_options(cfg));
    return {analysis_document(cfg, rep), analysis_text(rep)};
}

void emit_error(const Error& e, const std::string& command, OutputFormat fmt, std::ostream& out,
                std::ostream& err) {
    err << "error: " << to_string(e.code());
    if (!e.site().empty()) err << " at " << e.site();
    err << ": " << e.what() << "\n";
    if (fmt == OutputFormat::Json) {
        ordered_json doc;
        doc["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
        doc["command"] = command;
        doc["error"] = {{"code", std::string(to_string(e.code()))},
                        {"site", e.site().empty() ? ordered_json(nullptr) : ordered_json(e.site())},
                        {"message", std::string(e.what())}};
        out << dump_json(doc);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Austenite nucleation analysis for cubic-to-orthorhombic transformations", std::string(kToolName)};
    std::string command, config_path, format = "json", direction_text, lattice_text, face_mode, sets;
    std::optional<std::uint64_t> seed, samples;
    std::optional<double> tol;
    std::optional<int> s;

    app.add_option("command", command, "variants | twins | habit | classify | validate-sets | analyze")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(kCommands), std::end(kCommands))));
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", seed, "sphere sampling seed");
    app.add_option("--samples", samples, "sphere sample count");
    app.add_option("--tol", tol, "membership tolerance")->check(CLI::PositiveNumber);
    app.add_option("--mode", face_mode, "theorem or extended face analysis")
        ->check(CLI::IsMember({"theorem", "extended"}));
    app.add_option("--sets", sets, "definitional or explicit direction sets")
        ->check(CLI::IsMember({"definitional", "explicit"}));
    app.add_option("--s", s, "stabilized variant")->check(CLI::Range(1, 6));
    app.add_option("--direction", direction_text, "direction x,y,z for classify");
    app.add_option("--lattice", lattice_text, "lattice stretches alpha,beta,gamma");

    std::vector<std::string> argv_store{std::string(kToolName)};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    const OutputFormat fmt = format == "text" ? OutputFormat::Text : OutputFormat::Json;
    RunConfig cfg;
    Vec3 direction;
    try {
        cfg = config_path.empty() ? default_config() : load_config(config_path);
        if (!lattice_text.empty()) {
            const Vec3 l = parse_triple(lattice_text, "--lattice");
            cfg.specimen.lattice = {l[0], l[1], l[2]};
        }
        if (seed) cfg.seed = *seed;
        if (samples) cfg.samples.sphere = *samples;
        if (tol) cfg.tolerances.membership = *tol;
        if (s) cfg.specimen.stabilized_variant = *s;
        if (!face_mode.empty()) cfg.face_mode = face_mode == "extended" ? FaceMode::Extended : FaceMode::Theorem;
        if (!sets.empty())
            cfg.direction_mode = sets == "explicit" ? DirectionMode::Explicit : DirectionMode::Definitional;
        if (command == "classify") {
            if (direction_text.empty()) throw Error(ErrorCode::ConfigError, "classify requires --direction");
            direction = parse_triple(direction_text, "--direction");
            if (norm(direction) == 0.0) throw Error(ErrorCode::ConfigError, "--direction must be nonzero");
            direction = normalized(direction);
        }
        validate(cfg.specimen);
    } catch (const Error& e) {
        emit_error(e, command, fmt, out, err);
        return kExitConfig;
    }

    try {
        Outcome o;
        if (command == "variants") o = cmd_variants(cfg, err);
        else if (command == "twins") o = cmd_twins(cfg);
        else if (command == "habit") o = cmd_habit(cfg);
        else if (command == "classify") o = cmd_classify(cfg, direction);
        else if (command == "validate-sets") o = cmd_validate_sets(cfg, !s.has_value());
        else o = cmd_analyze(cfg);
        out << (fmt == OutputFormat::Json ? dump_json(o.doc) : o.text);
        return kExitOk;
    } catch (const Error& e) {
        emit_error(e, command, fmt, out, err);
        return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
    }
}

}  // namespace nucleus
