#include <fslab/sweep.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fslab/spiral.hpp>

namespace fslab
{

namespace
{

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t seed, std::size_t index, std::uint64_t salt)
{
    return splitmix(splitmix(seed ^ salt) + index);
}

cplx point_in_disk(double radius, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
}

Generator onedim_sample(const RegionFunction &g, const NormContext &norm, std::mt19937_64 &rng,
                        const SchwarzJet &omega)
{
    const cplx tau = point_in_disk(0.6, rng);
    if (norm.dim() == 1) {
        return generator_1d(g, omega, tau);
    }
    Functional phi{complex_gaussian(norm.dim(), rng)};
    std::uniform_real_distribution<double> shrink(0.3, 1.0);
    phi.coeffs *= shrink(rng) / norm.dual_norm(phi);
    return generator_nd_onedim_type(g, omega, phi, norm, tau);
}

double finite_or_zero(double v)
{
    return std::isfinite(v) ? v : 0.0;
}

} // namespace

std::vector<CVec> sample_points(const NormContext &norm, std::uint64_t seed, std::size_t index, std::size_t count)
{
    return sample_sphere(norm, count, mix(seed, index, 0x5eed));
}

Generator sample_generator(const RegionFunction &g, const NormContext &norm, std::uint64_t seed, std::size_t index,
                           const std::vector<CVec> &test_directions)
{
    std::mt19937_64 rng(mix(seed, index, 0x6e6));
    const SchwarzJet omega = schwarz_sample(mix(seed, index, 0x5c4), 2)[index % 2];
    if (norm.dim() == 1 || index % 2 == 0) {
        return onedim_sample(g, norm, rng, omega);
    }
    const auto n = static_cast<Eigen::Index>(norm.dim());
    CMat a = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = g(point_in_disk(0.3, rng));
    }
    GridSpec grid;
    grid.radii.push_back(1.0);
    grid.directions = 32;
    grid.phases = 8;
    grid.seed = mix(seed, index, 0x9d);
    grid.extra_directions = test_directions;
    try {
        return generator_nd_perturbative(a, g, mix(seed, index, 0x7e), norm, grid).generator;
    } catch (const PreconditionFailed &) {
        return onedim_sample(g, norm, rng, omega);
    } catch (const NotConverged &) {
        return onedim_sample(g, norm, rng, omega);
    }
}

Json SweepSummary::summary_json() const
{
    Json j;
    j["comparisons"] = comparisons;
    j["violations"] = violations;
    j["skipped"] = skipped;
    j["worst_margin"] = finite_or_zero(worst_margin);
    if (has_as_stated) {
        j["as_stated_violations"] = as_stated_violations;
        j["as_stated_worst_margin"] = finite_or_zero(as_stated_worst_margin);
    }
    return j;
}

SweepSummary spiral_verify(const SweepConfig &config)
{
    const NormContext norm(config.p, config.n);
    SweepSummary out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < config.samples; ++s) {
        const auto xs = sample_points(norm, config.seed, s, config.points_per_sample);
        std::optional<Generator> gen;
        std::optional<Jet3> f;
        try {
            gen = sample_generator(config.g, norm, config.seed, s, xs);
            f = f_from_h(gen->jet, gen->a());
        } catch (const Error &) {
            ++out.skipped;
            continue;
        }
        const CMat &a = gen->a();
        for (const auto &x : xs) {
            for (const auto &ell : extreme_support_functionals(x, norm)) {
                for (cplx nu : config.nu_grid) {
                    SpiralBoundReport rep;
                    try {
                        rep = spiral_bound(*f, a, config.g, x, ell, nu);
                    } catch (const OutsideRegion &) {
                        ++out.skipped;
                        continue;
                    }
                    ++out.comparisons;
                    out.worst_margin = std::min(out.worst_margin, rep.margin);
                    const bool violated = rep.margin < -config.tol;
                    if (violated) {
                        ++out.violations;
                    }
                    if (config.keep_reports || violated) {
                        Json r;
                        r["sample"] = s;
                        r["generator"] = gen->provenance;
                        r["x"] = to_json(x);
                        r["nu"] = to_json(nu);
                        r["ell"] = to_json(rep.ell);
                        r["tau"] = to_json(rep.tau);
                        r["lhs"] = rep.lhs;
                        r["rhs_theorem"] = rep.rhs_theorem;
                        r["rhs_corollary"] = rep.rhs_corollary ? Json(*rep.rhs_corollary) : Json(nullptr);
                        r["margin"] = rep.margin;
                        out.reports.push_back(std::move(r));
                    }
                }
            }
        }
    }
    if (out.comparisons == 0) {
        out.worst_margin = 0.0;
    }
    return out;
}

SweepSummary resolvent_verify(const SweepConfig &config)
{
    const NormContext norm(config.p, config.n);
    SweepSummary out;
    out.has_as_stated = true;
    out.worst_margin = std::numeric_limits<double>::infinity();
    out.as_stated_worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < config.samples; ++s) {
        const auto xs = sample_points(norm, config.seed, s, config.points_per_sample);
        std::optional<Generator> gen;
        try {
            gen = sample_generator(config.g, norm, config.seed, s, xs);
        } catch (const Error &) {
            ++out.skipped;
            continue;
        }
        for (double r : config.r_list) {
            const ResolventContext ctx = make_resolvent_context(gen->jet, r, norm);
            for (const auto &x : xs) {
                for (const auto &ell : extreme_support_functionals(ctx.br * x, norm)) {
                    ResolventFS c;
                    try {
                        c = resolvent_fs_coefficients(ctx, x, ell);
                    } catch (const Error &) {
                        ++out.skipped;
                        continue;
                    }
                    for (cplx nu : config.nu_grid) {
                        ResolventBound proof;
                        ResolventBound stated;
                        try {
                            proof = resolvent_fs_rhs(ctx, config.g, x, nu, RhsMode::proof_derived, ell);
                            stated = resolvent_fs_rhs(ctx, config.g, x, nu, RhsMode::as_stated, ell);
                        } catch (const OutsideRegion &) {
                            ++out.skipped;
                            continue;
                        }
                        const double lhs = resolvent_fs_lhs(c, nu);
                        const double margin = proof.rhs - lhs;
                        const double stated_margin = stated.rhs - lhs;
                        ++out.comparisons;
                        out.worst_margin = std::min(out.worst_margin, margin);
                        out.as_stated_worst_margin = std::min(out.as_stated_worst_margin, stated_margin);
                        const bool violated = margin < -config.tol;
                        const bool stated_violated = stated_margin < -config.tol;
                        if (violated) {
                            ++out.violations;
                        }
                        Json rec;
                        if (config.keep_reports || violated || stated_violated) {
                            rec["sample"] = s;
                            rec["generator"] = gen->provenance;
                            rec["r"] = r;
                            rec["x"] = to_json(x);
                            rec["nu"] = to_json(nu);
                            rec["a2"] = to_json(c.a2);
                            rec["a2tilde2"] = to_json(c.a2tilde2);
                            rec["a3"] = to_json(c.a3);
                            rec["tau"] = to_json(proof.tau);
                            rec["rho_r"] = ctx.rho_r;
                            rec["lhs"] = lhs;
                            rec["rhs_proof_derived"] = proof.rhs;
                            rec["rhs_as_stated"] = stated.rhs;
                            rec["margin"] = margin;
                        }
                        if (stated_violated) {
                            ++out.as_stated_violations;
                            out.as_stated_violation_list.push_back(rec);
                        }
                        if (config.keep_reports || violated) {
                            out.reports.push_back(std::move(rec));
                        }
                    }
                }
            }
        }
    }
    if (out.comparisons == 0) {
        out.worst_margin = 0.0;
        out.as_stated_worst_margin = 0.0;
    }
    return out;
}

} // namespace fslab
