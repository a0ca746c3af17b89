#include <fslab/resolvent.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace fslab
{

namespace
{

CMat resolvent_linear(const CMat &a, double r)
{
    const auto n = a.rows();
    Eigen::FullPivLU<CMat> lu(CMat::Identity(n, n) + r * a);
    if (!lu.isInvertible()) {
        throw PreconditionFailed("I + rA is singular");
    }
    return lu.inverse();
}

// out[i][j][k] = sum b[i][p] t[p][j][k] over flat n^3 storage
std::vector<cplx> apply_left3(const CMat &b, const std::vector<cplx> &t, std::size_t n)
{
    std::vector<cplx> out(t.size());
    const std::size_t tail = n * n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < n; ++p) {
            const cplx c = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p));
            for (std::size_t s = 0; s < tail; ++s) {
                out[i * tail + s] += c * t[p * tail + s];
            }
        }
    }
    return out;
}

std::vector<cplx> apply_left4(const CMat &b, const std::vector<cplx> &t, std::size_t n)
{
    std::vector<cplx> out(t.size());
    const std::size_t tail = n * n * n;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < n; ++p) {
            const cplx c = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p));
            for (std::size_t s = 0; s < tail; ++s) {
                out[i * tail + s] += c * t[p * tail + s];
            }
        }
    }
    return out;
}

// Substitutes x -> B x in every input slot of a flat tensor with `slots` inputs.
std::vector<cplx> apply_inputs(const CMat &b, std::vector<cplx> t, std::size_t n, int slots)
{
    // Contract one slot at a time; slot s has stride n^(slots - 1 - s).
    for (int s = 0; s < slots; ++s) {
        std::size_t stride = 1;
        for (int k = s + 1; k < slots; ++k) {
            stride *= n;
        }
        std::vector<cplx> out(t.size());
        const std::size_t block = stride * n;
        for (std::size_t base = 0; base < t.size(); base += block) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t p = 0; p < n; ++p) {
                    const cplx c = b(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j));
                    for (std::size_t q = 0; q < stride; ++q) {
                        out[base + j * stride + q] += t[base + p * stride + q] * c;
                    }
                }
            }
        }
        t = std::move(out);
    }
    return t;
}

// H2[x, B H2[y, z]] as a tensor (i; a, b, c) for x in slot a and (y, z) in (b, c).
std::vector<cplx> nested_quadratic(const Jet3 &h, const CMat &b)
{
    const std::size_t n = h.dim();
    const std::vector<cplx> inner = apply_left3(b, h.t2_data(), n);
    std::vector<cplx> out(n * n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t m = 0; m < n; ++m) {
                const cplx c = h.t2(i, a, m);
                for (std::size_t s = 0; s < n * n; ++s) {
                    out[((i * n + a) * n) * n + s] += c * inner[m * n * n + s];
                }
            }
        }
    }
    return out;
}

Jet3 resolvent_jet_impl(const Jet3 &h, double r, bool extra_br)
{
    if (!(r > 0.0)) {
        throw InvalidArgument("r must be > 0");
    }
    const std::size_t n = h.dim();
    const CMat b = resolvent_linear(h.linear(), r);

    // D2J[x, y] = -r B D2h[Bx, By]
    std::vector<cplx> t2 = apply_left3(b, apply_inputs(b, h.t2_data(), n, 2), n);
    for (auto &v : t2) {
        v *= -r;
    }

    // D3J[x^3] = B (-r D3h[x_r^3] + 3 r^2 D2h[x_r, B D2h[x_r^2]])
    const std::vector<cplx> nested = nested_quadratic(h, b);
    std::vector<cplx> inner(n * n * n * n);
    for (std::size_t s = 0; s < inner.size(); ++s) {
        inner[s] = -r * h.t3_data()[s];
    }
    if (extra_br) {
        inner = apply_left4(b, inner, n);
        const std::vector<cplx> nested_b = apply_left4(b, nested, n);
        for (std::size_t s = 0; s < inner.size(); ++s) {
            inner[s] += 3.0 * r * r * nested_b[s];
        }
    } else {
        for (std::size_t s = 0; s < inner.size(); ++s) {
            inner[s] += 3.0 * r * r * nested[s];
        }
    }
    std::vector<cplx> t3 = apply_left4(b, apply_inputs(b, std::move(inner), n, 3), n);
    return Jet3(b, std::move(t2), std::move(t3));
}

double triple_deviation(cplx a, cplx b)
{
    return std::abs(a - b) / std::max(1.0, std::abs(a));
}

bool is_scalar(const CMat &a, double tol)
{
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i != j && std::abs(a(i, j)) > tol) {
                return false;
            }
            if (i == j && std::abs(a(i, i) - a(0, 0)) > tol) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

ResolveResult resolve(const HoloMap &h, double r, const CVec &x, const NormContext &norm, double tol)
{
    require_dim(h.dim, static_cast<std::size_t>(x.size()), "resolve");
    if (!(r > 0.0)) {
        throw InvalidArgument("r must be > 0");
    }
    if (!(norm.norm(x) < 1.0)) {
        throw InvalidArgument("resolve: x must lie in the open unit ball");
    }
    const auto n = static_cast<Eigen::Index>(h.dim);
    const CMat eye = CMat::Identity(n, n);
    const CVec zero = CVec::Zero(n);
    const CMat b = resolvent_linear(h.jacobian(zero), r);

    auto residual_of = [&](const CVec &w) -> CVec { return w + r * h.value(w) - x; };

    ResolveResult out;
    out.w = b * x;
    CVec res = residual_of(out.w);
    out.residual = res.norm();
    constexpr int max_iter = 100;
    while (out.residual > tol) {
        if (out.iterations >= max_iter) {
            throw NotConverged("resolve: no convergence after 100 Newton steps (residual "
                               + std::to_string(out.residual) + ")");
        }
        ++out.iterations;
        const CVec step = (eye + r * h.jacobian(out.w)).fullPivLu().solve(res);
        double scale = 1.0;
        CVec trial = out.w - step;
        CVec trial_res = residual_of(trial);
        // Damping: halve until the residual decreases.
        while (!(trial_res.norm() < out.residual) && scale > 1e-10) {
            scale *= 0.5;
            trial = out.w - scale * step;
            trial_res = residual_of(trial);
        }
        if (!(trial_res.norm() < out.residual)) {
            // Stalled at rounding level.
            if (out.residual <= 1e3 * tol) {
                break;
            }
            throw NotConverged("resolve: Newton step made no progress (residual " + std::to_string(out.residual)
                               + ")");
        }
        out.w = trial;
        res = trial_res;
        out.residual = res.norm();
    }
    const double w_norm = norm.norm(out.w);
    if (!(w_norm < 1.0)) {
        throw OutsideRegion("resolve: solution left the unit ball", w_norm);
    }
    return out;
}

ResolventContext make_resolvent_context(const Jet3 &h, double r, const NormContext &norm)
{
    require_dim(h.dim(), norm.dim(), "make_resolvent_context");
    if (!(r > 0.0)) {
        throw InvalidArgument("r must be > 0");
    }
    const CMat br = resolvent_linear(h.linear(), r);
    const double rho = operator_norm(br, norm).value();
    return ResolventContext{h, h.linear(), r, br, rho, norm};
}

Jet3 resolvent_jet(const Jet3 &h, double r)
{
    return resolvent_jet_impl(h, r, false);
}

Jet3 resolvent_jet_extra_br(const Jet3 &h, double r)
{
    return resolvent_jet_impl(h, r, true);
}

ResolventFS resolvent_fs_coefficients(const ResolventContext &ctx, const CVec &x, std::optional<Functional> ell)
{
    require_dim(ctx.h.dim(), static_cast<std::size_t>(x.size()), "resolvent_fs_coefficients");
    const double r = ctx.r;
    ResolventFS c;
    c.x_r = ctx.br * x;
    c.ell_r = ell ? *ell : support_functional(c.x_r, ctx.norm);
    const Functional &l = c.ell_r;

    const CVec h2 = ctx.h.d2(c.x_r, c.x_r);
    const CVec half_b_h2 = 0.5 * (ctx.br * h2);
    const CVec nested = ctx.h.d2(c.x_r, half_b_h2);
    c.a2 = -r * 0.5 * l(h2);
    c.a2tilde2 = r * r * 0.5 * l(nested);
    c.a3 = -r / 6.0 * l(ctx.h.d3(c.x_r, c.x_r, c.x_r)) + 2.0 * r * r * l(0.5 * nested);

    const Jet3 j = resolvent_jet(ctx.h, r);
    const auto n = static_cast<Eigen::Index>(ctx.h.dim());
    const CMat lift = CMat::Identity(n, n) + r * ctx.a;
    const CVec n2 = lift * (0.5 * j.d2(x, x));
    const cplx a2_j = l(n2);
    const cplx a2t_j = l(lift * (0.5 * j.d2(x, n2)));
    const cplx a3_j = l(lift * (j.d3(x, x, x) / 6.0));
    c.path_deviation = std::max(
        {triple_deviation(c.a2, a2_j), triple_deviation(c.a2tilde2, a2t_j), triple_deviation(c.a3, a3_j)});
    if (c.path_deviation > 1e-10) {
        throw Error("resolvent_fs_coefficients: h-path and J-path disagree by " + std::to_string(c.path_deviation)
                    + " (h-path a2 = " + std::to_string(c.a2.real()) + "+" + std::to_string(c.a2.imag())
                    + "i, J-path a2 = " + std::to_string(a2_j.real()) + "+" + std::to_string(a2_j.imag()) + "i)");
    }
    const double xr_norm = ctx.norm.norm(c.x_r);
    c.delta = l(ctx.br * c.x_r) / (xr_norm * xr_norm);
    return c;
}

double resolvent_fs_lhs(const ResolventFS &c, cplx nu)
{
    return std::abs(c.a3 - 2.0 * c.a2tilde2 - (nu - 2.0) * c.a2 * c.a2);
}

ResolventBound resolvent_fs_rhs(const ResolventContext &ctx, const RegionFunction &g, const CVec &x, cplx nu,
                                RhsMode mode, std::optional<Functional> ell)
{
    require_dim(ctx.h.dim(), static_cast<std::size_t>(x.size()), "resolvent_fs_rhs");
    const CVec xr = ctx.br * x;
    const Functional l = ell ? *ell : support_functional(xr, ctx.norm);
    const double xr_norm = ctx.norm.norm(xr);
    ResolventBound out;
    out.tau = g.inverse(l(ctx.a * xr) / xr_norm);
    out.q = q_coeffs(g, out.tau);
    const double r = ctx.r;
    const double rho = ctx.rho_r;
    out.q_r = std::abs(out.q.q2 / out.q.q1 - (2.0 - nu) * r * out.q.q1 * xr_norm);
    const double lead = r * std::abs(out.q.q1) * xr_norm;
    if (mode == RhsMode::as_stated) {
        out.rhs = lead * rho * rho * std::max(1.0, out.q_r);
    } else {
        out.rhs = lead * rho * std::max(1.0, rho * out.q_r);
    }
    return out;
}

double resolvent_scalar_corollary(cplx lambda, double r, cplx nu)
{
    if (!(lambda.real() > 0.0)) {
        throw PreconditionFailed("scalar corollary: Re lambda must be > 0");
    }
    const cplx s = 1.0 + lambda * lambda;
    const double m = std::abs(1.0 + lambda * r);
    return std::abs(s) * r / (m * m * m) * std::max(1.0, std::abs(lambda - (2.0 - nu) * r * s / m));
}

AssumptionCorollary resolvent_assumption_corollary(const ResolventContext &ctx, const RegionFunction &g,
                                                   const CVec &x, cplx nu)
{
    const ResolventFS c = resolvent_fs_coefficients(ctx, x);
    AssumptionCorollary out;
    out.delta = c.delta;
    out.identity_defect = std::abs(c.a2tilde2 - c.delta * c.a2 * c.a2);
    out.reduced_lhs = std::abs(c.a3 - (nu - 2.0 + 2.0 * c.delta) * c.a2 * c.a2);
    out.full_lhs = resolvent_fs_lhs(c, nu);
    out.rhs = resolvent_fs_rhs(ctx, g, x, nu, RhsMode::as_stated, c.ell_r).rhs;
    return out;
}

OnedimCorollary resolvent_onedim_corollary(const ResolventContext &ctx, const RegionFunction &g, const CVec &x,
                                           cplx nu)
{
    if (!is_scalar(ctx.a, 1e-12)) {
        throw PreconditionFailed("one-dimensional-type corollary: A must be scalar");
    }
    OnedimCorollary out;
    out.lambda = ctx.a(0, 0);
    const double r = ctx.r;
    const cplx one_lr = 1.0 + out.lambda * r;
    const double m = std::abs(one_lr);
    out.delta = m / one_lr;
    out.mu = nu - 2.0 + 2.0 * out.delta;
    const ResolventFS c = resolvent_fs_coefficients(ctx, x);
    out.lhs = std::abs(c.a3 - out.mu * c.a2 * c.a2);
    const QTriple q = q_coeffs(g, g.inverse(out.lambda));
    const double branch = std::abs(q.q2 / q.q1 - (2.0 * out.delta - out.mu) * r * q.q1 / m);
    out.rhs = r * std::abs(q.q1) / (m * m * m) * std::max(1.0, branch);
    return out;
}

ContractionReport resolvent_contraction_checks(const HoloMap &h, const CMat &a, double r, const NormContext &norm,
                                               std::size_t samples, std::uint64_t seed, bool onedim)
{
    ContractionReport out;
    out.rho_r = operator_norm(resolvent_linear(a, r), norm).value();
    out.contractive = out.rho_r < 1.0;
    if (!onedim) {
        return out;
    }
    out.onedim_checked = true;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i != j) {
                out.max_offdiag = std::max(out.max_offdiag, std::abs(a(i, j)));
            }
        }
    }
    out.a_scalar = is_scalar(a, 1e-12);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.05, 0.9);
    for (std::size_t s = 0; s < samples; ++s) {
        const CVec x = radius(rng) * random_unit_vector(norm, rng);
        ++out.samples;
        try {
            const CVec w = resolve(h, r, x, norm).w;
            const Functional l = support_functional(x, norm);
            const double defect = (w - (l(w) / norm.norm(x)) * x).norm();
            out.max_collinearity_defect = std::max(out.max_collinearity_defect, defect);
        } catch (const Error &) {
            ++out.solver_failures;
        }
    }
    return out;
}

} // namespace fslab
