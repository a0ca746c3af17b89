// Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <fslab/classes.hpp>
#include <fslab/json_io.hpp>
#include <fslab/oracle.hpp>
#include <fslab/resolvent.hpp>
#include <fslab/spiral.hpp>
#include <fslab/sweep.hpp>

using namespace fslab;

namespace
{

// Tolerances and limits, fixed here so the gate cannot drift.
constexpr double bound_tol = 1e-9;
constexpr double equality_tol = 1e-12;
constexpr double q_tol = 1e-10;
constexpr double jet_solver_tol = 1e-6;
constexpr double identity_tol = 1e-10;
constexpr double collinear_tol = 1e-8;
constexpr double sharp_spiral_min = 0.999;
constexpr double sharp_resolvent_tol = 1e-9;
constexpr double classical_seconds = 60.0;
constexpr double q_seconds = 10.0;
constexpr double total_seconds = 300.0;

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CVec scalar_vec(cplx v)
{
    CVec x(1);
    x(0) = v;
    return x;
}

std::vector<RegionFunction> variant_lattice()
{
    std::vector<RegionFunction> out{RegionFunction::cayley()};
    for (double a : {0.25, 0.5, 0.75}) {
        out.push_back(RegionFunction::power(a));
        out.push_back(RegionFunction::affine(a));
        out.push_back(RegionFunction::tangent_disk(a));
    }
    return out;
}

Verdict classical_reduction()
{
    const auto t0 = Clock::now();
    const auto g = RegionFunction::cayley();
    const std::vector<double> nus{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto omegas = schwarz_sample(2024, 5000);
    const CMat one = CMat::Identity(1, 1);
    std::size_t jets = 0;
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const Generator h = generator_1d(g, omegas[i]);
        const Jet3 f = f_from_h(h.jet, one);
        ++jets;
        const CVec x = scalar_vec(std::polar(1.0, 2.0 * std::numbers::pi * double(i % 7) / 7.0));
        const Functional ell{scalar_vec(std::conj(x(0)))};
        const auto c = fs_coefficients_spiral(f, one, x, ell);
        for (double nu : nus) {
            const double classical = std::max(1.0, std::abs(4.0 * nu - 3.0));
            const double lhs = fs_lhs(c, nu);
            const double rhs = fs_rhs_theorem(g, one, x, ell, nu).rhs;
            worst = std::max({worst, lhs - classical, std::abs(rhs - classical)});
            if (lhs > classical + bound_tol || std::abs(rhs - classical) > bound_tol) {
                ++violations;
            }
        }
    }
    const Jet3 koebe = Jet3::from_series(1.0, 2.0, 3.0);
    double koebe_gap = 0.0;
    for (double nu : {0.0, 1.0}) {
        const auto c = fs_coefficients_spiral(koebe, one, scalar_vec(1.0), Functional{scalar_vec(1.0)});
        koebe_gap = std::max(koebe_gap, std::abs(fs_lhs(c, nu) - std::max(1.0, std::abs(4.0 * nu - 3.0))));
    }
    const double secs = seconds_since(t0);
    return {jets >= 5000 && violations == 0 && koebe_gap <= equality_tol && secs <= classical_seconds,
            std::to_string(jets) + " jets x 5 nu, violations " + std::to_string(violations) + ", max excess "
                + fmt(worst) + ", Koebe gap " + fmt(koebe_gap) + ", " + fmt(secs) + " s"};
}

Verdict extremal_resolvent()
{
    const Jet3 h = Jet3::from_series(1.0, 2.0, 2.0);
    const NormContext n1(2.0, 1);
    double worst = 0.0;
    double at_one = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        const auto ctx = make_resolvent_context(h, r, n1);
        const auto c = resolvent_fs_coefficients(ctx, scalar_vec(1.0));
        const double lhs = resolvent_fs_lhs(c, 2.0);
        const double rhs = resolvent_fs_rhs(ctx, RegionFunction::cayley(), scalar_vec(1.0), 2.0, RhsMode::as_stated).rhs;
        const double exact = 2.0 * r / std::pow(1.0 + r, 3);
        worst = std::max({worst, std::abs(lhs - exact), std::abs(rhs - exact)});
        if (r == 1.0) {
            at_one = lhs;
        }
    }
    return {worst <= equality_tol && std::abs(at_one - 0.25) <= equality_tol,
            "max |side - 2r/(1+r)^3| " + fmt(worst) + ", r=1 value " + fmt(at_one)};
}

Verdict q_adjudication()
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t points = 0;
    const auto variants = variant_lattice();
    for (const auto &g : variants) {
        for (int k = 1; k <= 9; ++k) {
            for (int a = 0; a < 64; ++a) {
                const cplx tau = std::polar(0.1 * k, 2.0 * std::numbers::pi * a / 64.0);
                const auto q = q_coeffs(g, tau);
                const auto c = composition_q_coeffs(g, tau);
                const std::array<cplx, 3> closed{q.q0, q.q1, q.q2};
                for (int m = 0; m < 3; ++m) {
                    worst = std::max(worst, std::abs(closed[m] - c[m]) / std::max(1.0, std::abs(closed[m])));
                }
                ++points;
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= q_tol && points == 576 * variants.size() && secs <= q_seconds,
            std::to_string(variants.size()) + " region functions x 576 points, max relative deviation " + fmt(worst)
                + ", " + fmt(secs) + " s"};
}

Verdict jet_vs_solver()
{
    double worst = 0.0;
    std::size_t configs = 0;
    std::size_t failures = 0;
    const std::vector<double> rs{0.1, 1.0, 10.0};
    for (std::size_t k = 0; k < 50; ++k) {
        const std::size_t n = 1 + k % 3;
        const NormContext norm(2.0, n);
        const auto dirs = sample_sphere(norm, 3, 7000 + k);
        // Odd indices give perturbative generators with a non-scalar diagonal A when n > 1.
        const Generator gen = sample_generator(RegionFunction::cayley(), norm, 99, 2 * k + 1, dirs);
        for (double r : rs) {
            try {
                worst = std::max(worst, resolvent_jet_solver_deviation(as_map(gen.jet), gen.jet, r, norm, dirs).max());
            } catch (const Error &) {
                ++failures;
            }
        }
        ++configs;
    }
    return {configs == 50 && failures == 0 && worst <= jet_solver_tol,
            std::to_string(configs) + " generators x 3 r, max relative deviation " + fmt(worst) + ", solver failures "
                + std::to_string(failures)};
}

Verdict resolvent_lattice(const std::filesystem::path &outdir)
{
    std::size_t comparisons = 0;
    std::size_t violations = 0;
    std::size_t stated = 0;
    double worst = std::numeric_limits<double>::infinity();
    Json stated_list = Json::array();
    const std::vector<std::pair<std::size_t, double>> spaces{{1, 2.0}, {2, 2.0}, {2, 1.0}, {3, NormContext::inf}};
    for (const char *name : {"cayley", "power", "affine", "tangent"}) {
        for (const auto &[n, p] : spaces) {
            SweepConfig cfg;
            cfg.g = RegionFunction::parse(name, 0.5);
            cfg.n = n;
            cfg.p = p;
            cfg.samples = 60;
            cfg.nu_grid = {0.0, 1.0, 2.0, 3.0, cplx(1.0, 2.0)};
            cfg.r_list = {0.1, 0.5, 1.0, 2.0, 10.0};
            cfg.seed = 5150 + n;
            cfg.keep_reports = false;
            const auto s = resolvent_verify(cfg);
            comparisons += s.comparisons;
            violations += s.violations;
            stated += s.as_stated_violations;
            worst = std::min(worst, s.worst_margin);
            for (const auto &rec : s.as_stated_violation_list) {
                stated_list.push_back(rec);
            }
        }
    }
    std::ofstream(outdir / "as_stated_violations.json") << stated_list.dump(2) << '\n';
    return {comparisons >= 10000 && violations == 0,
            std::to_string(comparisons) + " comparisons, violations " + std::to_string(violations) + ", worst margin "
                + fmt(worst) + "; as_stated violations " + std::to_string(stated)
                + " (listed in as_stated_violations.json)"};
}

Verdict subordinate_coefficients()
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto disk = [&](double radius) {
        return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    };
    std::size_t violations = 0;
    double regime_gap = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const cplx p1 = disk(4.0);
        const cplx p2 = disk(4.0);
        const cplx mu = disk(4.0);
        const cplx c1 = disk(1.0);
        const SchwarzJet w(c1, disk(1.0 - std::norm(c1)));
        const auto rec = subordination_check(1.0, p1, p2, mu, {w});
        if (rec.achieved > rec.bound + bound_tol) {
            ++violations;
        }
        if (i % 10 == 0) {
            const auto sq = subordination_check(1.0, p1, p2, mu, {SchwarzJet::from_family(0.0, 0.0)});
            const auto id = subordination_check(1.0, p1, p2, mu, {SchwarzJet::from_family(0.0, 1.0)});
            regime_gap = std::max({regime_gap, std::abs(sq.achieved - std::abs(p1)),
                                   std::abs(id.achieved - std::abs(p2 - mu * p1 * p1))});
        }
    }
    return {violations == 0 && regime_gap <= equality_tol,
            "10000 triples, violations " + std::to_string(violations) + ", equality regimes within " + fmt(regime_gap)};
}

Verdict onedim_identities()
{
    std::mt19937_64 rng(77);
    const auto omegas = schwarz_sample(78, 128);
    const auto g = RegionFunction::cayley();
    double gap = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double p = std::array<double, 4>{1.0, 2.0, 3.0, NormContext::inf}[i % 4];
        const std::size_t n = 1 + i % 3;
        const NormContext norm(p, n);
        Functional phi{complex_gaussian(n, rng)};
        phi.coeffs /= norm.dual_norm(phi);
        std::uniform_real_distribution<double> u(0.0, 0.6);
        const cplx tau = std::polar(u(rng), 10.0 * u(rng));
        const auto gen = generator_nd_onedim_type(g, omegas[i % 128], phi, norm, tau);
        const CVec x = random_unit_vector(norm, rng);
        std::vector<cplx> mu{complex_gaussian(3, rng)(0), complex_gaussian(3, rng)(1), complex_gaussian(3, rng)(2)};
        gap = std::max(gap, onedim_norm_identity_check(gen.jet, mu, x, norm).gap);
    }
    const NormContext n3(2.0, 3);
    Functional phi{complex_gaussian(3, rng)};
    phi.coeffs *= 0.9 / n3.dual_norm(phi);
    const auto gen = generator_nd_onedim_type(g, SchwarzJet::from_family(0.7, cplx(0.3, -0.4)), phi, n3, 0.25);
    const auto rep = resolvent_contraction_checks(gen.map, gen.a(), 1.0, n3, 100, 5, true);
    return {gap <= identity_tol && rep.samples >= 100 && rep.solver_failures == 0 && rep.a_scalar && rep.contractive
                && rep.max_collinearity_defect <= collinear_tol,
            "norm-identity gap " + fmt(gap) + " over 1000 configurations, collinearity defect "
                + fmt(rep.max_collinearity_defect) + " over " + std::to_string(rep.samples) + " samples"};
}

Verdict dual_paths()
{
    std::mt19937_64 rng(8);
    double spiral_link = 0.0;
    double res_link = 0.0;
    double paths = 0.0;
    std::size_t configs = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
        for (double p : {1.0, 2.0, NormContext::inf}) {
            const NormContext norm(p, n);
            for (std::size_t idx = 0; idx < 20; ++idx) {
                const auto xs = sample_points(norm, 404, idx + 100 * n, 2);
                const Generator gen = sample_generator(RegionFunction::cayley(), norm, 404 + n, idx, xs);
                Jet3 f = Jet3::identity(n);
                const bool diagonal = gen.a().isDiagonal(1e-15);
                if (diagonal) {
                    f = f_from_h(gen.jet, gen.a());
                }
                for (const auto &x : xs) {
                    for (const auto &ell : extreme_support_functionals(x, norm)) {
                        if (diagonal) {
                            const auto c = fs_coefficients_spiral(f, gen.a(), x, ell);
                            const auto s = directional_series(h_from_f(f, gen.a()), CMat::Identity(n, n), x, ell);
                            const double scale = std::max({1.0, std::abs(c.a2), std::abs(c.a3), std::abs(c.a2tilde2)});
                            spiral_link = std::max({spiral_link, std::abs(s.b1 + c.a2) / scale,
                                                    std::abs(s.b2 - 2.0 * c.a2tilde2 + 2.0 * c.a3) / scale});
                        }
                    }
                    for (double r : {0.1, 1.0, 10.0}) {
                        const auto ctx = make_resolvent_context(gen.jet, r, norm);
                        for (const auto &ell : extreme_support_functionals(ctx.br * x, norm)) {
                            ResolventFS c;
                            try {
                                c = resolvent_fs_coefficients(ctx, x, ell);
                            } catch (const Error &) {
                                paths = std::numeric_limits<double>::infinity();
                                continue;
                            }
                            paths = std::max(paths, c.path_deviation);
                            const auto s = directional_series(gen.jet, ctx.br, x, ell);
                            const double scale = std::max({1.0, std::abs(c.a2), std::abs(c.a3), std::abs(c.a2tilde2)});
                            res_link = std::max({res_link, std::abs(s.b1 + c.a2 / r) * r / scale,
                                                 std::abs(s.b2 + (c.a3 - 2.0 * c.a2tilde2) / r) * r / scale});
                        }
                    }
                }
                ++configs;
            }
        }
    }
    return {spiral_link <= identity_tol && res_link <= identity_tol && paths <= identity_tol,
            std::to_string(configs) + " generators: spirallike b-link " + fmt(spiral_link) + ", resolvent b-link "
                + fmt(res_link) + ", resolvent path deviation " + fmt(paths)};
}

Verdict discrepancy_ledger(const std::filesystem::path &outdir)
{
    CrossvalConfig cfg = CrossvalConfig::standard(0);
    const Json report = crossval_report(cfg);
    std::ofstream(outdir / "crossval_report.json") << report.dump(2) << '\n';
    const Json &d = report["discrepancies"];
    std::ofstream(outdir / "discrepancies.json") << d.dump(2) << '\n';

    bool affine_ok = false;
    if (d.contains("affine_corollary_factor") && d["affine_corollary_factor"]["alpha"] == 0.5) {
        affine_ok = d["affine_corollary_factor"]["max_deviation_as_written"].get<double>() > 1e-6;
    }
    double scalar_dev = 0.0;
    if (d.contains("scalar_corollary_q1")) {
        for (const auto &probe : d["scalar_corollary_q1"]["probes"]) {
            if (probe["lambda"] == 2.0 && probe["r"] == 1.0) {
                scalar_dev = std::max(scalar_dev, probe["deviation"].get<double>());
            }
        }
    }
    double display_dev = 0.0;
    if (d.contains("intermediate_resolvent_display") && d["intermediate_resolvent_display"]["r"] == 1.0) {
        display_dev = d["intermediate_resolvent_display"]["deviation"].get<double>();
    }
    return {affine_ok && scalar_dev > 1e-6 && display_dev > 1e-6,
            "affine factor deviation "
                + fmt(affine_ok ? d["affine_corollary_factor"]["max_deviation_as_written"].get<double>() : 0.0)
                + " at alpha 0.5, scalar q1 deviation " + fmt(scalar_dev) + " at lambda 2, extra-B_r deviation "
                + fmt(display_dev) + " at r 1; written to discrepancies.json"};
}

Verdict sharpness()
{
    const auto g = RegionFunction::cayley();
    SharpnessParams params;
    params.budget = 10000;
    const auto sp = sharpness_search(SharpnessTarget::spiral, g, 0.0, params);
    const auto rs = sharpness_search(SharpnessTarget::resolvent, g, 2.0, params);
    return {sp.ratio >= sharp_spiral_min && std::abs(rs.ratio - 1.0) <= sharp_resolvent_tol
                && sp.evaluations <= params.budget && rs.evaluations <= params.budget,
            "spirallike nu=0 ratio " + fmt(sp.ratio) + " (" + std::to_string(sp.evaluations)
                + " evaluations), resolvent nu=2 r=1 |ratio - 1| " + fmt(std::abs(rs.ratio - 1.0)) + " ("
                + std::to_string(rs.evaluations) + " evaluations)"};
}

} // namespace

int main(int argc, char **argv)
{
    const std::filesystem::path outdir = argc > 1 ? argv[1] : ".";
    std::filesystem::create_directories(outdir);
    const auto start = Clock::now();

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"classical reduction", classical_reduction},
        {"extremal resolvent equality", extremal_resolvent},
        {"q-coefficient adjudication", q_adjudication},
        {"resolvent jet vs solver", jet_vs_solver},
        {"resolvent bound lattice", [&] { return resolvent_lattice(outdir); }},
        {"subordinate coefficient inequality", subordinate_coefficients},
        {"one-dimensional-type identities", onedim_identities},
        {"dual-path identities", dual_paths},
        {"discrepancy ledger", [&] { return discrepancy_ledger(outdir); }},
        {"sharpness evidence", sharpness},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (i + 1 == criteria.size()) {
            const double total = seconds_since(start);
            v.pass = v.pass && total <= total_seconds;
            v.detail += "; suite " + fmt(total) + " s";
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << v.detail
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
