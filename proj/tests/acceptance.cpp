// Acceptance checks for the analysis pipeline. One line per criterion:
//   PASS|FAIL  <n>  <name>  (<seconds> s)  <detail>
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "nucleus/report.hpp"
#include "oracles.hpp"

using namespace nucleus;

namespace {

const LatticeParams kTest{1.06, 0.92, 1.02};

struct Outcome {
    bool pass = true;
    std::string detail;
    double timed = -1.0;  // seconds charged against the limit, if not the whole check
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds, <= 0 for none
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rotation_error(const Mat3& q) {
    return std::max(norm(transpose(q) * q - Mat3::identity()), std::abs(det(q) - 1.0));
}

Outcome variant_algebra() {
    std::mt19937_64 rng(101);
    double worst_det = 0.0, worst_norm = 0.0, worst_conj = 0.0;
    for (int k = 0; k < 100; ++k) {
        const LatticeParams p = gen::random_params(rng);
        const VariantSet vs = make_variants(p);
        for (int i = 1; i <= 6; ++i) {
            worst_det = std::max(worst_det, std::abs(det(vs.variant(i)) - p.det()));
            worst_norm = std::max(worst_norm, std::abs(norm_sq(vs.variant(i)) - p.norm_sq()));
            double best = INFINITY;
            for (const Mat3& r : cubic_rotations())
                best = std::min(best, norm(r * vs.variant(1) * transpose(r) - vs.variant(i)));
            worst_conj = std::max(worst_conj, best);
        }
    }
    return {worst_det <= 1e-12 && worst_norm <= 1e-12 && worst_conj <= 1e-12,
            "max |det - abg| " + fmt("%.2e", worst_det) + ", max |norm^2 - sum| " + fmt("%.2e", worst_norm) +
                ", max conjugation residual " + fmt("%.2e", worst_conj)};
}

Outcome twin_solver() {
    const VariantSet vs = make_variants(kTest);
    const auto start = std::chrono::steady_clock::now();
    const TwinTable table = twin_table(vs);
    Outcome o;
    // only the solver counts toward the limit; the grid oracle is slow by design
    o.timed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double worst_res = 0.0, worst_rot = 0.0;
    int pairs = 0, oracle_agree = 0;
    for (const auto& [pair, sols] : table) {
        ++pairs;
        if (sols.size() != 2) o.pass = false;
        for (const auto& t : sols) {
            worst_res = std::max(worst_res, twin_residual(vs.variant(pair.first), vs.variant(pair.second), t));
            worst_rot = std::max(worst_rot, rotation_error(t.Q));
        }
        const auto rots = oracle::twin_rotations(vs.variant(pair.first), vs.variant(pair.second), 14);
        bool matched = rots.size() == sols.size();
        for (const auto& t : sols) {
            double best = INFINITY;
            for (const auto& r : rots) best = std::min(best, norm(r - t.Q));
            matched = matched && best < 1e-6;
        }
        oracle_agree += matched;
    }
    o.pass = o.pass && pairs == 30 && oracle_agree == 30 && worst_res <= 1e-10 && worst_rot <= 1e-10;
    o.detail = "solver " + fmt("%.4f", o.timed) + " s, " + std::to_string(pairs) + " ordered pairs, oracle agrees on " + std::to_string(oracle_agree) +
               ", max residual " + fmt("%.2e", worst_res) + ", max SO(3) error " + fmt("%.2e", worst_rot);
    return o;
}

Outcome direction_sets() {
    const VariantSet vs = make_variants(kTest);
    Outcome o;
    double worst = 1.0;
    for (int s = 1; s <= 6; ++s) {
        const auto stats = cross_validate(vs, s, 100000, 1e-6, 20240611);
        worst = std::min(worst, stats.agreement);
        if (stats.degenerate || stats.samples != 100000 || stats.agreement < 0.999) o.pass = false;
    }
    o.detail = "min agreement over s=1..6 " + fmt("%.6f", worst);
    return o;
}

Outcome interior_exclusion() {
    // Exact on-well measures with barycenter U_s need U_s in the convex hull of
    // SO(3) u SO(3)U_s; the random stretches are drawn where that holds.
    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> th(0.0, 1.0);
    double worst = 0.0, worst_bar = 0.0;
    int obstructed = 0;
    for (int k = 0; k < 1000; ++k) {
        const LatticeParams p = gen::random_hull_params(rng);
        const VariantSet vs = make_variants(p);
        const int s = 1 + static_cast<int>(rng() % 6);
        const double theta = k == 0 ? 1.0 : 1.0 - th(rng);
        const auto nu = DiscreteYoungMeasure::make(gen::on_well_measure(rng, vs.variant(s), theta), vs);
        worst_bar = std::max(worst_bar, norm(barycenter(nu) - vs.variant(s)));
        const auto rep = interior_exclusion_check(nu, vs, s);
        worst = std::max(worst, std::abs(rep.det_identity - theta * (1.0 - p.det())));
        obstructed += rep.verdict == ExclusionVerdict::DeterminantObstruction ||
                      rep.verdict == ExclusionVerdict::NormObstruction;
    }
    return {worst <= 1e-12 && obstructed == 1000,
            "max |identity - theta(1-abg)| " + fmt("%.2e", worst) + ", obstruction in " + std::to_string(obstructed) +
                "/1000, max barycenter error " + fmt("%.2e", worst_bar)};
}

Outcome minors_relation() {
    const VariantSet wells = make_variants(kTest);
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> lam(0.01, 0.99), mag(0.1, 1.0);
    double worst_det = 0.0, worst_cof = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Mat3 F = oracle::random_matrix(rng);
        const Mat3 G = F + outer(mag(rng) * oracle::random_unit(rng), oracle::random_unit(rng));
        const auto r = minors_residuals(build_laminate_measure(F, G, lam(rng), wells));
        worst_det = std::max(worst_det, r.det_residual);
        worst_cof = std::max(worst_cof, r.cof_residual);
    }
    int controls = 0, separated = 0;
    while (controls < 1000) {
        const Mat3 F = oracle::random_matrix(rng), G = oracle::random_matrix(rng);
        if (norm(G - F) < 0.5 || rank_one_defect(G - F) < 1e-6) continue;
        const double l = lam(rng);
        const std::vector<std::pair<double, Mat3>> atoms{{l, F}, {1.0 - l, G}};
        const auto r = minors_residuals(DiscreteYoungMeasure::make(atoms, wells));
        ++controls;
        separated += r.det_residual > 1e-3;
    }
    const double frac = separated / 1000.0;
    return {worst_det <= 1e-12 && worst_cof <= 1e-12 && frac >= 0.99,
            "laminates: max det residual " + fmt("%.2e", worst_det) + ", max cof residual " + fmt("%.2e", worst_cof) +
                "; controls with det residual > 1e-3: " + fmt("%.3f", frac)};
}

Outcome corner_certificate() {
    const VariantSet vs = make_variants(kTest);
    const double delta = 1.0;
    Outcome o;
    std::size_t total = 0;
    double worst_res = 0.0, worst_mid = 0.0, worst_mid_oracle = 0.0;
    for (int s = 1; s <= 6; ++s) {
        const auto certs = corner_certificates(vs, s, delta);
        if (certs.empty()) o.pass = false;
        total += certs.size();
        for (const auto& c : certs) {
            worst_res = std::max(worst_res, c.habit.residual);
            worst_mid = std::max(worst_mid, std::abs(c.habit.middle_eigenvalue - 1.0));
            const Mat3 G = c.twin.Q * vs.variant(c.l);
            worst_mid_oracle =
                std::max(worst_mid_oracle, std::abs(oracle::middle_sq(vs.variant(s), G, c.habit.lambda) - 1.0));
            const bool parallel = std::abs(std::abs(dot(c.habit.m, c.twin.n)) - 1.0) <= 1e-8;
            const bool exact_gap = c.energy_gap_rate == -delta && certificate_energy(c, 2.5, delta) == -delta * 2.5;
            if (!(c.habit.lambda > 0.0 && c.habit.lambda < 1.0) || parallel || !exact_gap) o.pass = false;
        }
    }
    o.pass = o.pass && worst_res <= 1e-8 && worst_mid <= 1e-10 && worst_mid_oracle <= 1e-10;
    o.detail = std::to_string(total) + " certificates over s=1..6, max habit residual " + fmt("%.2e", worst_res) +
               ", max |mu_2 - 1| " + fmt("%.2e", worst_mid) + " (oracle " + fmt("%.2e", worst_mid_oracle) + ")";
    return o;
}

Outcome headline() {
    const RunConfig base = load_config(NUCLEUS_SOURCE_DIR "/configs/bar_12x3x3.json");
    Outcome o;
    std::string per_s;
    for (int s = 1; s <= 6; ++s) {
        RunConfig cfg = base;
        cfg.specimen.stabilized_variant = s;
        const auto rep = analyze(cfg.specimen, analysis_options(cfg));
        int faces = 0, edges = 0, corners = 0;
        for (const auto& v : rep.faces) faces += v.excluded;
        for (const auto& v : rep.edges) edges += v.excluded;
        for (const auto& v : rep.corners) corners += v.certificate.has_value();
        const bool ok = rep.interior.excluded && faces == 6 && edges == 12 && corners >= 1 &&
                        rep.headline == Headline::CornersOnly;
        o.pass = o.pass && ok;
        per_s += (s > 1 ? "; " : "") + std::string("s=") + std::to_string(s) + ": faces " + std::to_string(faces) +
                 "/6 edges " + std::to_string(edges) + "/12 corners " + std::to_string(corners);
    }
    o.detail = per_s;
    return o;
}

Outcome determinism() {
    const std::string config = NUCLEUS_SOURCE_DIR "/configs/bar_12x3x3.json";
    auto cli = [&] {
        std::ostringstream out, err;
        const int code = run({"analyze", "--config", config}, out, err);
        return std::make_pair(code, out.str());
    };
    const auto a = cli(), b = cli();
    const RunConfig cfg = load_config(config);
    AnalysisOptions one = analysis_options(cfg);
    one.workers = 1;
    const std::string single = dump_json(analysis_document(cfg, analyze(cfg.specimen, one)));
    const bool same = a.first == 0 && b.first == 0 && a.second == b.second && single == a.second;
    return {same, std::to_string(a.second.size()) + " bytes, repeat run " +
                      (a.second == b.second ? "identical" : "DIFFERENT") + ", single-worker run " +
                      (single == a.second ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "variant algebra", 1.0, variant_algebra},
        {2, "twin solver", 10.0, twin_solver},
        {3, "direction sets", 10.0, direction_sets},
        {4, "interior exclusion", 1.0, interior_exclusion},
        {5, "minors relation", 1.0, minors_relation},
        {6, "corner certificate", 5.0, corner_certificate},
        {7, "headline reproduction", 60.0, headline},
        {8, "determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.timed >= 0.0) secs = o.timed;
        const bool in_time = c.time_limit <= 0.0 || secs < c.time_limit;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("%s  %d  %-22s (%.3f s%s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    in_time ? "" : fmt(", limit %.0f s", c.time_limit).c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
