#include <fslab/oracle.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fslab/spiral.hpp>

namespace fslab
{

std::array<CVec, 4> contour_coefficients(const std::function<CVec(cplx)> &f, std::size_t points, double radius)
{
    if (points < 8 || !(radius > 0.0)) {
        throw InvalidArgument("contour_coefficients: need at least 8 points and a positive radius");
    }
    std::array<CVec, 4> c;
    for (std::size_t j = 0; j < points; ++j) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
        const cplx t = std::polar(radius, angle);
        const CVec v = f(t);
        for (std::size_t k = 0; k < 4; ++k) {
            if (j == 0) {
                c[k] = CVec::Zero(v.size());
            }
            c[k] += std::polar(1.0, -static_cast<double>(k) * angle) * v;
        }
    }
    for (std::size_t k = 0; k < 4; ++k) {
        c[k] /= static_cast<double>(points) * std::pow(radius, static_cast<double>(k));
    }
    return c;
}

std::array<cplx, 3> composition_q_coeffs(const RegionFunction &g, cplx tau, std::size_t points, double radius)
{
    if (!(std::abs(tau) < 1.0)) {
        throw InvalidArgument("composition_q_coeffs: |tau| must be < 1");
    }
    auto recentred = [&](cplx t) {
        CVec v(1);
        v(0) = g((tau - t) / (1.0 - t * std::conj(tau)));
        return v;
    };
    const auto c = contour_coefficients(recentred, points, radius);
    return {c[0](0), c[1](0), c[2](0)};
}

JetSolverDeviation resolvent_jet_solver_deviation(const HoloMap &h, const Jet3 &h_jet, double r,
                                                  const NormContext &norm, const std::vector<CVec> &directions,
                                                  std::size_t points, double radius)
{
    const Jet3 j = resolvent_jet(h_jet, r);
    double scale[3] = {0.0, 0.0, 0.0};
    double err[3] = {0.0, 0.0, 0.0};
    for (const auto &dir : directions) {
        const CVec d = dir / norm.norm(dir);
        auto solve = [&](cplx t) -> CVec { return resolve(h, r, t * d, norm).w; };
        const auto c = contour_coefficients(solve, points, radius);
        const CVec expected[3] = {j.linear() * d, 0.5 * j.d2(d, d), j.d3(d, d, d) / 6.0};
        for (int k = 0; k < 3; ++k) {
            scale[k] = std::max(scale[k], expected[k].norm());
            err[k] = std::max(err[k], (c[static_cast<std::size_t>(k) + 1] - expected[k]).norm());
        }
    }
    // Relative to the size of the tensor over the sampled directions; absolute when it vanishes.
    auto rel = [](double e, double s) { return s > 1e-14 ? e / s : e; };
    return JetSolverDeviation{rel(err[0], scale[0]), rel(err[1], scale[1]), rel(err[2], scale[2])};
}

ExtremalRecord subordination_check(cplx /*p0*/, cplx p1, cplx p2, cplx mu, const std::vector<SchwarzJet> &schwarz)
{
    ExtremalRecord out;
    out.nu = mu;
    out.bound = std::max(std::abs(p1), std::abs(p2 - mu * p1 * p1));
    out.achieved = 0.0;
    bool first = true;
    for (const auto &w : schwarz) {
        const cplx b1 = p1 * w.c1();
        const cplx b2 = p2 * w.c1() * w.c1() + p1 * w.c2();
        const double v = std::abs(b2 - mu * b1 * b1);
        ++out.evaluations;
        if (first || v > out.achieved) {
            first = false;
            out.achieved = v;
            out.c1 = w.c1();
            out.c2 = w.c2();
            if (w.family()) {
                out.theta = w.family()->theta;
                out.c = w.family()->c;
            }
        }
    }
    out.ratio = out.bound > 0.0 ? out.achieved / out.bound : 0.0;
    out.round_best.push_back(out.ratio);
    return out;
}

double sharpness_ratio(SharpnessTarget target, const RegionFunction &g, cplx nu, const SharpnessParams &params,
                       double theta, cplx c, double *lhs_out, double *rhs_out)
{
    const SchwarzJet omega = SchwarzJet::from_family(theta, c);
    const Generator gen = generator_1d(g, omega);
    const CVec x = CVec::Ones(1);
    double lhs = 0.0;
    double rhs = 0.0;
    if (target == SharpnessTarget::spiral) {
        const CMat &a = gen.a();
        const Jet3 f = f_from_h(gen.jet, a);
        const Functional ell{CVec::Ones(1)};
        lhs = fs_lhs(fs_coefficients_spiral(f, a, x, ell), nu);
        rhs = fs_rhs_theorem(g, a, x, ell, nu).rhs;
    } else {
        const ResolventContext ctx = make_resolvent_context(gen.jet, params.r, NormContext(2.0, 1));
        const ResolventFS coeffs = resolvent_fs_coefficients(ctx, x);
        lhs = resolvent_fs_lhs(coeffs, nu);
        rhs = resolvent_fs_rhs(ctx, g, x, nu, params.mode, coeffs.ell_r).rhs;
    }
    if (lhs_out != nullptr) {
        *lhs_out = lhs;
    }
    if (rhs_out != nullptr) {
        *rhs_out = rhs;
    }
    return rhs > 0.0 ? lhs / rhs : 0.0;
}

ExtremalRecord sharpness_search(SharpnessTarget target, const RegionFunction &g, cplx nu,
                                const SharpnessParams &params)
{
    if (params.budget < 1) {
        throw InvalidArgument("sharpness_search: budget must be >= 1");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double s = std::cbrt(0.7 * static_cast<double>(params.budget) / (64.0 * 16.0 * 32.0));
    const std::size_t n_theta = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(64.0 * s)));
    const std::size_t n_rad = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(16.0 * s)));
    const std::size_t n_ang = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(32.0 * s)));

    ExtremalRecord best;
    best.nu = nu;
    best.ratio = -1.0;
    double b_theta = 0.0;
    double b_rad = 0.0;
    double b_ang = 0.0;

    auto evaluate = [&](double theta, double rad, double ang) {
        ++best.evaluations;
        double lhs = 0.0;
        double rhs = 0.0;
        double ratio = -1.0;
        const cplx c = std::polar(rad, ang);
        try {
            ratio = sharpness_ratio(target, g, nu, params, theta, c, &lhs, &rhs);
        } catch (const Error &) {
            return false;
        }
        if (ratio > best.ratio) {
            best.ratio = ratio;
            best.achieved = lhs;
            best.bound = rhs;
            best.theta = theta;
            best.c = c;
            const SchwarzJet jet = SchwarzJet::from_family(theta, c);
            best.c1 = jet.c1();
            best.c2 = jet.c2();
            b_theta = theta;
            b_rad = rad;
            b_ang = ang;
            return true;
        }
        return false;
    };

    for (std::size_t i = 0; i < n_theta && best.evaluations < params.budget; ++i) {
        for (std::size_t j = 0; j < n_rad && best.evaluations < params.budget; ++j) {
            for (std::size_t k = 0; k < n_ang && best.evaluations < params.budget; ++k) {
                const double rad = n_rad == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(n_rad - 1);
                evaluate(two_pi * i / n_theta, rad, two_pi * k / n_ang);
            }
        }
    }
    best.round_best.push_back(best.ratio);

    double step[3] = {two_pi / n_theta, n_rad == 1 ? 0.5 : 1.0 / (n_rad - 1), two_pi / n_ang};
    const std::size_t grid_used = best.evaluations;
    const std::size_t per_round = (params.budget - std::min(params.budget, grid_used)) / 3;
    for (int round = 0; round < 3; ++round) {
        for (double &st : step) {
            st /= 4.0;
        }
        const std::size_t round_end = best.evaluations + per_round;
        bool improved = true;
        while (improved && best.evaluations < round_end) {
            improved = false;
            for (int coord = 0; coord < 3 && best.evaluations < round_end; ++coord) {
                for (double sign : {1.0, -1.0}) {
                    if (best.evaluations >= round_end) {
                        break;
                    }
                    double p[3] = {b_theta, b_rad, b_ang};
                    p[coord] += sign * step[coord];
                    p[1] = std::clamp(p[1], 0.0, 1.0);
                    if (evaluate(p[0], p[1], p[2])) {
                        improved = true;
                    }
                }
            }
        }
        best.round_best.push_back(best.ratio);
    }
    best.ratio = std::max(best.ratio, 0.0);
    return best;
}

CrossvalConfig CrossvalConfig::standard(std::uint64_t seed)
{
    CrossvalConfig c;
    c.variants = {"cayley", "power", "affine", "tangent_disk"};
    c.alphas = {0.25, 0.5, 0.75};
    c.tau_radii = {0.0, 0.3, 0.6, 0.9};
    c.tau_angles = 8;
    c.r_list = {0.1, 1.0, 10.0};
    c.dims = {1, 2, 3};
    c.nu_grid = {0.0, 1.0, 2.0, 3.0, cplx(1.0, 2.0)};
    c.samples = 4;
    c.seed = seed;
    c.discrepancies = true;
    return c;
}

bool CrossvalConfig::empty() const
{
    return variants.empty() && dims.empty() && !discrepancies;
}

namespace
{

std::vector<RegionFunction> regions_for(const std::string &variant, const std::vector<double> &alphas)
{
    std::vector<RegionFunction> out;
    if (variant == "cayley" || variant == "g0") {
        out.push_back(RegionFunction::cayley());
        return out;
    }
    for (double a : alphas) {
        out.push_back(RegionFunction::parse(variant, a));
    }
    return out;
}

double rel_dev(cplx a, cplx b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

std::vector<cplx> tau_grid(const CrossvalConfig &config)
{
    std::vector<cplx> out;
    for (double rad : config.tau_radii) {
        const std::size_t m = rad == 0.0 ? 1 : std::max<std::size_t>(1, config.tau_angles);
        for (std::size_t k = 0; k < m; ++k) {
            out.push_back(std::polar(rad, 2.0 * std::numbers::pi * k / m));
        }
    }
    return out;
}

std::optional<CorollaryKind> corollary_kind(const RegionFunction &g)
{
    switch (g.kind()) {
    case RegionFunction::Kind::cayley:
        return CorollaryKind::g0;
    case RegionFunction::Kind::power:
        return CorollaryKind::g1;
    case RegionFunction::Kind::affine:
        return CorollaryKind::g2;
    case RegionFunction::Kind::tangent_disk:
        return CorollaryKind::g3;
    }
    return std::nullopt;
}

// A certified generator for the lattice: one-dimensional profiles for n = 1, perturbations of a
// diagonal A with Re lambda in [0.6, 1.15] otherwise (no resonances possible there).
Generator lattice_generator(std::size_t n, std::size_t index, std::uint64_t seed, const RegionFunction &g)
{
    std::mt19937_64 rng(seed * 1000003ULL + index * 7919ULL + n);
    const auto omegas = schwarz_sample(seed + index, 1);
    if (n == 1) {
        std::uniform_real_distribution<double> rad(0.0, 0.5);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
        return generator_1d(g, omegas[0], std::polar(rad(rng), ang(rng)));
    }
    std::uniform_real_distribution<double> re(0.6, 1.15);
    std::uniform_real_distribution<double> im(-0.3, 0.3);
    CMat a = CMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        a(i, i) = cplx(re(rng), im(rng));
    }
    const NormContext norm(2.0, n);
    GridSpec grid;
    grid.directions = 32;
    grid.seed = seed + index;
    grid.radii.push_back(1.0);
    return generator_nd_perturbative(a, RegionFunction::cayley(), seed + index, norm, grid).generator;
}

Json discrepancy_sections()
{
    Json out;
    constexpr double alpha = 0.5;
    constexpr double lambda = 2.0;
    constexpr double r = 1.0;

    {
        const RegionFunction g = RegionFunction::affine(alpha);
        Json probes = Json::array();
        double literal_dev = 0.0;
        double shifted_dev = 0.0;
        for (cplx ell : {cplx(1.0), cplx(1.5), cplx(0.75, 0.5)}) {
            for (cplx nu : {cplx(0.0), cplx(1.0), cplx(2.0)}) {
                const double theorem = fs_rhs_theorem(g, ell, nu).rhs;
                const double literal = fs_rhs_corollary(CorollaryKind::g2, ell, nu, alpha);
                const double shift = ell.real() - alpha;
                const double shifted = shift * std::max(1.0, std::abs(1.0 + 4.0 * (nu - 1.0) * shift));
                literal_dev = std::max(literal_dev, std::abs(literal - theorem));
                shifted_dev = std::max(shifted_dev, std::abs(shifted - theorem));
                probes.push_back({{"ell", to_json(ell)},
                                  {"nu", to_json(nu)},
                                  {"theorem_path", theorem},
                                  {"closed_form_as_written", literal},
                                  {"closed_form_with_re_ell_minus_alpha", shifted}});
            }
        }
        out["affine_corollary_factor"] = {
            {"alpha", alpha},
            {"description", "closed form Re(l) max(1, |1 + 4(nu-1)(1-alpha) Re(l)|) against the general bound; "
                            "the general bound equals (Re(l) - alpha) max(1, |1 + 4(nu-1)(Re(l) - alpha)|)"},
            {"max_deviation_as_written", literal_dev},
            {"max_deviation_shifted_form", shifted_dev},
            {"probes", probes}};
    }

    {
        const RegionFunction g = RegionFunction::cayley();
        Json probes = Json::array();
        for (double lam : {1.0, lambda}) {
            const cplx tau = g.inverse(lam);
            const QTriple q = q_coeffs(g, tau);
            const auto comp = composition_q_coeffs(g, tau);
            const ResolventContext ctx = make_resolvent_context(Jet3::linear_map(CMat::Constant(1, 1, lam)), r,
                                                                NormContext(2.0, 1));
            for (cplx nu : {cplx(0.0), cplx(2.0), cplx(1.0, 2.0)}) {
                const double general = resolvent_fs_rhs(ctx, g, CVec::Ones(1), nu, RhsMode::as_stated).rhs;
                const double literal = resolvent_scalar_corollary(lam, r, nu);
                probes.push_back({{"lambda", lam},
                                  {"r", r},
                                  {"nu", to_json(nu)},
                                  {"q1_as_written", to_json(-(1.0 + lam * lam))},
                                  {"q2_as_written", to_json(lam * (1.0 + lam * lam))},
                                  {"q1_closed_form", to_json(q.q1)},
                                  {"q2_closed_form", to_json(q.q2)},
                                  {"q1_composition", to_json(comp[1])},
                                  {"q2_composition", to_json(comp[2])},
                                  {"general_path", general},
                                  {"closed_form_as_written", literal},
                                  {"deviation", std::abs(general - literal)}});
            }
        }
        out["scalar_corollary_q1"] = {
            {"description", "stated q1 = -(1 + lambda^2) against the recentred Cayley coefficients, |q1| = 2 Re lambda"},
            {"probes", probes}};
    }

    {
        const Jet3 h = Jet3::from_series(1.0, 2.0, 2.0);
        HoloMap closed{1,
                       [](const CVec &x) -> CVec {
                           CVec v(1);
                           const cplx z = x(0);
                           v(0) = z * (1.0 + z) / (1.0 - z);
                           return v;
                       },
                       [](const CVec &x) -> CMat {
                           CMat m(1, 1);
                           const cplx z = x(0);
                           m(0, 0) = (1.0 + 2.0 * z - z * z) / ((1.0 - z) * (1.0 - z));
                           return m;
                       }};
        const NormContext norm(2.0, 1);
        const double b = 1.0 / (1.0 + r);
        const Jet3 exact = resolvent_jet(h, r);
        const Jet3 variant = resolvent_jet_extra_br(h, r);
        const auto contour = contour_coefficients(
            [&](cplx t) {
                CVec x(1);
                x(0) = t;
                return resolve(closed, r, x, norm).w;
            },
            24, 0.2);
        out["intermediate_resolvent_display"] = {
            {"description", "third-order resolvent coefficient with an extra left factor B_r on both terms, "
                            "one-dimensional h(z) = z(1+z)/(1-z)"},
            {"r", r},
            {"coefficient_from_jet", to_json(exact.t3(0, 0, 0, 0) / 6.0)},
            {"coefficient_with_extra_factor", to_json(variant.t3(0, 0, 0, 0) / 6.0)},
            {"coefficient_from_solver", to_json(contour[3](0))},
            {"series_inversion", 8.0 * r * r * std::pow(b, 5) - 2.0 * r * std::pow(b, 4)},
            {"series_inversion_with_extra_factor", 8.0 * r * r * std::pow(b, 6) - 2.0 * r * std::pow(b, 5)},
            {"deviation", std::abs(exact.t3(0, 0, 0, 0) - variant.t3(0, 0, 0, 0)) / 6.0}};
    }
    return out;
}

} // namespace

Json crossval_report(const CrossvalConfig &config)
{
    Json out = Json::object();
    if (config.empty()) {
        return out;
    }

    if (!config.variants.empty()) {
        double q_dev = 0.0;
        std::size_t q_points = 0;
        Json corollary = Json::object();
        const auto taus = tau_grid(config);
        for (const auto &variant : config.variants) {
            double cor_dev = 0.0;
            std::size_t cor_points = 0;
            for (const auto &g : regions_for(variant, config.alphas)) {
                for (cplx tau : taus) {
                    const QTriple q = q_coeffs(g, tau);
                    const auto comp = composition_q_coeffs(g, tau);
                    q_dev = std::max({q_dev, rel_dev(q.q0, comp[0]), rel_dev(q.q1, comp[1]), rel_dev(q.q2, comp[2])});
                    ++q_points;
                    const cplx ell = g(tau);
                    for (cplx nu : config.nu_grid) {
                        const double theorem = fs_rhs_theorem(g, ell, nu).rhs;
                        try {
                            const double cor = fs_rhs_corollary(*corollary_kind(g), ell, nu, g.alpha());
                            cor_dev = std::max(cor_dev, std::abs(cor - theorem) / std::max(1.0, theorem));
                            ++cor_points;
                        } catch (const OutsideRegion &) {
                        }
                    }
                }
            }
            corollary[variant] = {{"max_relative_deviation", cor_dev}, {"points", cor_points}};
        }
        out["q_coefficients"] = {{"max_relative_deviation", q_dev}, {"points", q_points}, {"tolerance", 1e-10}};
        out["corollary_vs_theorem"] = corollary;
    }

    if (!config.dims.empty()) {
        double path_dev = 0.0;
        double res_blink = 0.0;
        double spiral_blink = 0.0;
        double jet_dev = 0.0;
        std::size_t configs = 0;
        const RegionFunction g = RegionFunction::cayley();
        for (std::size_t n : config.dims) {
            const NormContext norm(2.0, n);
            for (std::size_t s = 0; s < config.samples; ++s) {
                const Generator gen = lattice_generator(n, s, config.seed, g);
                const auto xs = sample_sphere(norm, 3, config.seed + 17 * s + n);
                const CMat &a = gen.a();
                const Jet3 f = f_from_h(gen.jet, a);
                for (const auto &x : xs) {
                    const Functional ell = support_functional(x, norm);
                    const FSCoeffs c = fs_coefficients_spiral(f, a, x, ell);
                    const ScalarSeries3 b = directional_series(gen.jet, CMat::Identity(a.rows(), a.cols()), x, ell);
                    spiral_blink = std::max({spiral_blink, rel_dev(b.b1, -c.a2),
                                             rel_dev(b.b2, 2.0 * c.a2tilde2 - 2.0 * c.a3)});
                }
                for (double r : config.r_list) {
                    const ResolventContext ctx = make_resolvent_context(gen.jet, r, norm);
                    for (const auto &x : xs) {
                        const ResolventFS c = resolvent_fs_coefficients(ctx, x);
                        path_dev = std::max(path_dev, c.path_deviation);
                        const ScalarSeries3 b = directional_series(gen.jet, ctx.br, x, c.ell_r);
                        res_blink = std::max({res_blink, rel_dev(b.b1, -c.a2 / r),
                                              rel_dev(b.b2, -(c.a3 - 2.0 * c.a2tilde2) / r)});
                    }
                    jet_dev = std::max(jet_dev, resolvent_jet_solver_deviation(gen.map, gen.jet, r, norm, xs).max());
                    ++configs;
                }
            }
        }
        out["resolvent_paths"] = {{"max_deviation", path_dev}, {"configurations", configs}, {"tolerance", 1e-10}};
        out["spiral_b_link"] = {{"max_relative_deviation", spiral_blink}, {"tolerance", 1e-10}};
        out["resolvent_b_link"] = {{"max_relative_deviation", res_blink}, {"tolerance", 1e-10}};
        out["jet_vs_solver"] = {{"max_relative_deviation", jet_dev}, {"configurations", configs}, {"tolerance", 1e-6}};
    }

    if (config.discrepancies) {
        out["discrepancies"] = discrepancy_sections();
    }
    return out;
}

} // namespace fslab
