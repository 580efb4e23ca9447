#include "nucleus/direction_sets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "nucleus/error.hpp"

namespace nucleus {

std::string_view to_string(DirectionMode m) noexcept {
    return m == DirectionMode::Definitional ? "definitional" : "explicit";
}

namespace {

void require_unit(const Vec3& e) {
    if (!is_unit(e, 1e-10)) throw Error(ErrorCode::NotUnit, "direction must be a unit vector");
}

// Wells and their cofactors for one stabilized variant.
struct SetContext {
    const VariantSet& vs;
    int s;
    std::array<Mat3, kVariantCount> cof;

    SetContext(const VariantSet& v, int s_) : vs(v), s(s_) {
        check_variant_index(s);
        for (std::size_t i = 0; i < kVariantCount; ++i) cof[i] = cofactor(vs.U[i]);
    }

    std::size_t idx() const { return static_cast<std::size_t>(s - 1); }

    double ms_margin(const Vec3& e) const {
        double others = 1.0;
        for (std::size_t i = 0; i < kVariantCount; ++i)
            if (i != idx()) others = std::max(others, norm(vs.U[i] * e));
        return norm(vs.U[idx()] * e) - others;
    }

    double msinv_margin(const Vec3& e) const {
        double others = 1.0;
        for (std::size_t i = 0; i < kVariantCount; ++i)
            if (i != idx()) others = std::max(others, norm(cof[i] * e));
        return norm(cof[idx()] * e) - others;
    }

    Vec3 emax() const {
        const SymEig3 eig = sym_eigen(cof[idx()]);
        if (std::abs(eig.values[2] - eig.values[1]) <= 1e-10)
            throw Error(ErrorCode::AmbiguousEmax, "top eigenvalues of cof U_s coincide");
        return eig.vectors[2];
    }

    bool in_ms(const Vec3& e, double tol) const { return ms_margin(e) >= -tol; }

    bool in_msinv(const Vec3& e, const Vec3& emax_dir, double tol) const {
        if (norm(cross(e, emax_dir)) <= kEmaxAngleTol) return true;
        return msinv_margin(e) > tol;
    }
};

// Map e into the frame where variant s looks like variant 1 or 2.
Vec3 to_reference_frame(const Vec3& e, int s) {
    check_variant_index(s);
    if (s == 3 || s == 4) return {e[1], e[0], e[2]};
    if (s == 5 || s == 6) return {e[2], e[1], e[0]};
    return e;
}

double parity_sign(int s) { return s % 2 == 1 ? 1.0 : -1.0; }

}  // namespace

bool in_Ms_definitional(const Vec3& e, const VariantSet& vs, int s, double tol) {
    require_unit(e);
    return SetContext(vs, s).in_ms(e, tol);
}

bool in_Msinv_definitional(const Vec3& e, const VariantSet& vs, int s, double tol) {
    require_unit(e);
    const SetContext ctx(vs, s);
    return ctx.in_msinv(e, ctx.emax(), tol);
}

double Ms_margin_definitional(const Vec3& e, const VariantSet& vs, int s) {
    require_unit(e);
    return SetContext(vs, s).ms_margin(e);
}

double Msinv_margin_definitional(const Vec3& e, const VariantSet& vs, int s) {
    require_unit(e);
    return SetContext(vs, s).msinv_margin(e);
}

bool in_Ms_explicit(const Vec3& e, int s) {
    require_unit(e);
    const Vec3 f = to_reference_frame(e, s);
    return parity_sign(s) * f[1] * f[2] >= 0.0 && std::abs(f[0]) <= std::min(std::abs(f[1]), std::abs(f[2]));
}

bool in_Msinv_explicit(const Vec3& e, int s) {
    require_unit(e);
    const Vec3 f = to_reference_frame(e, s);
    // the isolated point +-(1,0,0) of the reference frame
    if (norm(cross(f, Vec3{1, 0, 0})) <= kEmaxAngleTol) return true;
    return parity_sign(s) * f[1] * f[2] < 0.0 && std::abs(f[0]) > std::max(std::abs(f[1]), std::abs(f[2]));
}

double margin_explicit(const Vec3& e, int s) {
    require_unit(e);
    const Vec3 f = to_reference_frame(e, s);
    const double a0 = std::abs(f[0]), a1 = std::abs(f[1]), a2 = std::abs(f[2]);
    return std::min({std::abs(f[1] * f[2]), std::abs(a0 - std::min(a1, a2)), std::abs(a0 - std::max(a1, a2))});
}

DirectionVerdict qualifying(const Vec3& e, const VariantSet& vs, int s, DirectionMode mode, double tol,
                            double band) {
    require_unit(e);
    const Vec3 image = normalized(vs.variant(s) * (vs.variant(s) * e));

    DirectionVerdict v;
    v.e = e;
    v.mode = mode;
    if (mode == DirectionMode::Definitional) {
        const SetContext ctx(vs, s);
        const Vec3 emax_dir = ctx.emax();
        v.in_Ms = ctx.in_ms(e, tol);
        v.in_Msinv = ctx.in_msinv(e, emax_dir, tol);
        v.in_Us2_Msinv = ctx.in_msinv(image, emax_dir, tol);
        v.boundary_flag = std::abs(ctx.ms_margin(e)) < band || std::abs(ctx.msinv_margin(image)) < band;
    } else {
        v.in_Ms = in_Ms_explicit(e, s);
        v.in_Msinv = in_Msinv_explicit(e, s);
        v.in_Us2_Msinv = in_Msinv_explicit(image, s);
        v.boundary_flag = margin_explicit(e, s) < band || margin_explicit(image, s) < band;
    }
    v.qualifying = v.in_Ms || v.in_Us2_Msinv;
    return v;
}

std::vector<Vec3> sample_sphere(std::uint64_t count, std::uint64_t seed) {
    constexpr std::uint64_t kChunk = 4096;
    std::vector<Vec3> out;
    out.reserve(count);
    for (std::uint64_t chunk = 0; chunk * kChunk < count; ++chunk) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const std::uint64_t end = std::min(count, (chunk + 1) * kChunk);
        for (std::uint64_t i = chunk * kChunk; i < end; ++i) {
            Vec3 x;
            do {
                x = {gauss(rng), gauss(rng), gauss(rng)};
            } while (norm(x) < 1e-12);
            out.push_back(normalized(x));
        }
    }
    return out;
}

ValidationStats cross_validate_points(const VariantSet& vs, int s, std::span<const Vec3> points, double band,
                                      unsigned workers) {
    check_variant_index(s);
    ValidationStats stats;
    stats.s = s;
    stats.samples = points.size();
    stats.band = band;

    if (variants_coincide(vs)) {
        stats.degenerate = true;
        stats.degenerate_reason = "DegenerateParams: all variants coincide";
        return stats;
    }
    const SetContext ctx(vs, s);
    Vec3 emax_dir;
    try {
        emax_dir = ctx.emax();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::AmbiguousEmax) throw;
        stats.degenerate = true;
        stats.degenerate_reason = "DegenerateParams: e_max(cof U_s) is not unique";
        return stats;
    }

    struct Partial {
        std::uint64_t evaluated = 0;
        std::uint64_t agreements = 0;
        std::vector<Disagreement> disagreements;
    };

    if (workers == 0) workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    const std::size_t n = points.size();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 1024)));
    std::vector<Partial> partial(workers);

    auto run = [&](unsigned w) {
        Partial& p = partial[w];
        const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
        for (std::size_t i = begin; i < end; ++i) {
            const Vec3& e = points[i];
            const double def_margin = std::min(std::abs(ctx.ms_margin(e)), std::abs(ctx.msinv_margin(e)));
            if (def_margin < band || margin_explicit(e, s) < band) continue;
            ++p.evaluated;
            const bool d_ms = ctx.in_ms(e, 0.0);
            const bool d_inv = ctx.in_msinv(e, emax_dir, 0.0);
            const bool x_ms = in_Ms_explicit(e, s);
            const bool x_inv = in_Msinv_explicit(e, s);
            if (d_ms == x_ms && d_inv == x_inv) {
                ++p.agreements;
            } else if (p.disagreements.size() < ValidationStats::kMaxReportedDisagreements) {
                p.disagreements.push_back({i, e, d_ms, d_inv, x_ms, x_inv});
            }
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    }

    // worker ranges are contiguous and ascending, so concatenation keeps index order
    for (const auto& p : partial) {
        stats.evaluated += p.evaluated;
        stats.agreements += p.agreements;
        for (const auto& d : p.disagreements)
            if (stats.disagreements.size() < ValidationStats::kMaxReportedDisagreements)
                stats.disagreements.push_back(d);
    }
    stats.agreement = stats.evaluated == 0 ? 1.0 : double(stats.agreements) / double(stats.evaluated);
    return stats;
}

ValidationStats cross_validate(const VariantSet& vs, int s, std::uint64_t samples, double band,
                               std::uint64_t seed, unsigned workers) {
    const auto points = sample_sphere(samples, seed);
    return cross_validate_points(vs, s, points, band, workers);
}

}  // namespace nucleus
