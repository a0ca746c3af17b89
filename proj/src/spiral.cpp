#include <fslab/spiral.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

namespace fslab
{

namespace
{

// Index helpers for flat n^3 / n^4 storage.
struct Idx {
    std::size_t n;
    std::size_t operator()(std::size_t i, std::size_t j, std::size_t k) const { return (i * n + j) * n + k; }
    std::size_t operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
    {
        return ((i * n + j) * n + k) * n + l;
    }
};

void require_square(const CMat &a, std::size_t n, const char *what)
{
    require_dim(n, static_cast<std::size_t>(a.rows()), what);
    require_dim(n, static_cast<std::size_t>(a.cols()), what);
}

// Tensor of the quadratic-in-f part of the cubic identity:
//   -3 D2f[x, A D2f[x, x]] + 6 D2f[x, D2f[x, Ax]]   (unsymmetrized, slots j | k l)
std::vector<cplx> cubic_cross_terms(const Jet3 &f, const CMat &a)
{
    const std::size_t n = f.dim();
    const Idx at{n};
    std::vector<cplx> a_t2(n * n * n);  // (A D2f)[m][k][l]
    std::vector<cplx> t2_a(n * n * n);  // D2f[m][k][p] A_pl
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l) {
                cplx s1 = 0.0;
                cplx s2 = 0.0;
                for (std::size_t p = 0; p < n; ++p) {
                    s1 += a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p)) * f.t2(p, k, l);
                    s2 += f.t2(m, k, p) * a(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(l));
                }
                a_t2[at(m, k, l)] = s1;
                t2_a[at(m, k, l)] = s2;
            }
        }
    }
    std::vector<cplx> out(n * n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    cplx s = 0.0;
                    for (std::size_t m = 0; m < n; ++m) {
                        s += f.t2(i, j, m) * (6.0 * t2_a[at(m, k, l)] - 3.0 * a_t2[at(m, k, l)]);
                    }
                    out[at(i, j, k, l)] = s;
                }
            }
        }
    }
    return out;
}

void require_normalized(const Jet3 &f, const char *what)
{
    const auto n = static_cast<Eigen::Index>(f.dim());
    if ((f.linear() - CMat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) {
        throw PreconditionFailed(std::string(what) + ": f must be normalized (Df(0) = I)");
    }
}

} // namespace

Jet3 h_from_f(const Jet3 &f, const CMat &a)
{
    require_normalized(f, "h_from_f");
    const std::size_t n = f.dim();
    require_square(a, n, "h_from_f");
    const Idx at{n};
    auto A = [&](std::size_t i, std::size_t j) {
        return a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };

    // D2h[u, v] = A D2f[u, v] - D2f[u, Av] - D2f[v, Au]
    std::vector<cplx> t2(n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                cplx s = 0.0;
                for (std::size_t m = 0; m < n; ++m) {
                    s += A(i, m) * f.t2(m, j, k) - f.t2(i, j, m) * A(m, k) - f.t2(i, k, m) * A(m, j);
                }
                t2[at(i, j, k)] = s;
            }
        }
    }

    // D3h[x^3] = A D3f[x^3] - 3 D3f[x, x, Ax] - 3 D2f[x, A D2f[x^2]] + 6 D2f[x, D2f[x, Ax]]
    std::vector<cplx> t3 = cubic_cross_terms(f, a);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    cplx s = 0.0;
                    for (std::size_t m = 0; m < n; ++m) {
                        s += A(i, m) * f.t3(m, j, k, l) - 3.0 * f.t3(i, j, k, m) * A(m, l);
                    }
                    t3[at(i, j, k, l)] += s;
                }
            }
        }
    }
    return Jet3(a, std::move(t2), std::move(t3));
}

Jet3 f_from_h(const Jet3 &h, const CMat &a)
{
    const std::size_t n = h.dim();
    require_square(a, n, "f_from_h");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > 1e-12) {
                throw PreconditionFailed("f_from_h: A must be diagonal");
            }
        }
    }
    if ((h.linear() - a).cwiseAbs().maxCoeff() > 1e-12) {
        throw PreconditionFailed("f_from_h: Dh(0) must equal A");
    }
    std::vector<cplx> lambda(n);
    for (std::size_t i = 0; i < n; ++i) {
        lambda[i] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    }
    constexpr double resonance_tol = 1e-9;
    const Idx at{n};

    std::vector<cplx> t2(n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const cplx comb = lambda[i] - lambda[j] - lambda[k];
                if (std::abs(comb) < resonance_tol) {
                    throw Resonance("f_from_h: quadratic resonance lambda_" + std::to_string(i) + " - lambda_"
                                        + std::to_string(j) + " - lambda_" + std::to_string(k) + " = 0",
                                    comb);
                }
                t2[at(i, j, k)] = h.t2(i, j, k) / comb;
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(n);
    const Jet3 quadratic(CMat::Identity(dim, dim), std::move(t2), std::vector<cplx>(n * n * n * n));
    // Symmetrized cross terms, via the Jet3 constructor.
    const Jet3 cross(CMat::Zero(dim, dim), std::vector<cplx>(n * n * n), cubic_cross_terms(quadratic, a));

    std::vector<cplx> t3(n * n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t l = 0; l < n; ++l) {
                    const cplx comb = lambda[i] - lambda[j] - lambda[k] - lambda[l];
                    if (std::abs(comb) < resonance_tol) {
                        throw Resonance("f_from_h: cubic resonance lambda_" + std::to_string(i) + " - lambda_"
                                            + std::to_string(j) + " - lambda_" + std::to_string(k) + " - lambda_"
                                            + std::to_string(l) + " = 0",
                                        comb);
                    }
                    t3[at(i, j, k, l)] = (h.t3(i, j, k, l) - cross.t3(i, j, k, l)) / comb;
                }
            }
        }
    }
    return Jet3(CMat::Identity(dim, dim), quadratic.t2_data(), std::move(t3));
}

FSCoeffs fs_coefficients_spiral(const Jet3 &f, const CMat &a, const CVec &x, const Functional &ell)
{
    require_square(a, f.dim(), "fs_coefficients_spiral");
    require_dim(f.dim(), static_cast<std::size_t>(x.size()), "fs_coefficients_spiral");
    require_dim(f.dim(), ell.dim(), "fs_coefficients_spiral");
    const CVec ax = a * x;
    const CVec fxx = f.d2(x, x);
    const CVec fxax = f.d2(x, ax);
    FSCoeffs c;
    c.a2 = 0.5 * ell(2.0 * fxax - a * fxx);
    c.a2tilde2 = 0.5 * ell(f.d2(x, fxax) - 0.5 * f.d2(x, a * fxx));
    c.a3 = ell(3.0 * f.d3(x, x, ax) - a * f.d3(x, x, x)) / 12.0;
    return c;
}

double fs_lhs(const FSCoeffs &c, cplx nu)
{
    return std::abs(c.a3 - (nu - 1.0) * c.a2 * c.a2 - c.a2tilde2);
}

TheoremBound fs_rhs_theorem(const RegionFunction &g, cplx ell, cplx nu)
{
    const cplx tau = g.inverse(ell);
    const QTriple q = q_coeffs(g, tau);
    const double branch = std::abs(q.q2 / q.q1 + 2.0 * (nu - 1.0) * q.q1);
    return TheoremBound{std::abs(q.q1) / 2.0 * std::max(1.0, branch), ell, q};
}

TheoremBound fs_rhs_theorem(const RegionFunction &g, const CMat &a, const CVec &x, const Functional &ell, cplx nu)
{
    return fs_rhs_theorem(g, ell(a * x), nu);
}

double fs_rhs_corollary(CorollaryKind kind, cplx ell, cplx nu, double alpha)
{
    const double re = ell.real();
    switch (kind) {
    case CorollaryKind::g0:
        if (!(re > 0.0)) {
            throw OutsideRegion("g0 corollary: Re l must be > 0", 1.0);
        }
        return re * std::max(1.0, std::abs(1.0 + 4.0 * (nu - 1.0) * re));
    case CorollaryKind::g1: {
        if (!(std::abs(std::arg(ell)) < std::numbers::pi * alpha / 2.0) || ell == 0.0) {
            throw OutsideRegion("g1 corollary: |arg l| must be < pi alpha / 2", 1.0);
        }
        const cplx log_ell = std::log(ell);
        const cplx big = std::exp(log_ell / alpha);  // l^{1/alpha}
        const double arg_big = std::arg(big);
        const cplx inner = 4.0 * alpha * (nu - 1.0) * std::exp((alpha - 1.0) / alpha * log_ell)
                           + (alpha + cplx(0.0, std::tan(arg_big))) / big;
        const double q1 = big.real() * std::abs(inner);
        return alpha * std::abs(ell) * std::cos(arg_big) * std::max(1.0, q1);
    }
    case CorollaryKind::g2:
        if (!(re > alpha)) {
            throw OutsideRegion("g2 corollary: Re l must be > alpha", 1.0);
        }
        return re * std::max(1.0, std::abs(1.0 + 4.0 * (nu - 1.0) * (1.0 - alpha) * re));
    case CorollaryKind::g3: {
        const double centre = 1.0 / (2.0 * alpha);
        if (!(std::abs(ell - centre) < centre)) {
            throw OutsideRegion("g3 corollary: l must lie in the disk on [0, 1/alpha]", 1.0);
        }
        const double lead = re - std::norm(ell) * alpha;
        return lead * std::max(1.0, std::abs(1.0 - 2.0 * std::conj(ell) * alpha + 4.0 * (nu - 1.0) * lead));
    }
    }
    return 0.0;
}

namespace
{

std::optional<CorollaryKind> corollary_for(const RegionFunction &g)
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

} // namespace

SpiralBoundReport spiral_bound(const Jet3 &f, const CMat &a, const RegionFunction &g, const CVec &x,
                               const Functional &ell, cplx nu)
{
    const FSCoeffs c = fs_coefficients_spiral(f, a, x, ell);
    const TheoremBound bound = fs_rhs_theorem(g, a, x, ell, nu);
    SpiralBoundReport report;
    report.lhs = fs_lhs(c, nu);
    report.rhs_theorem = bound.rhs;
    report.nu = nu;
    report.ell = bound.ell;
    report.tau = bound.q.tau;
    report.margin = report.rhs_theorem - report.lhs;
    if (auto kind = corollary_for(g)) {
        try {
            report.rhs_corollary = fs_rhs_corollary(*kind, bound.ell, nu, g.alpha());
        } catch (const OutsideRegion &) {
            report.rhs_corollary.reset();
        }
    }
    return report;
}

ReducedBoundReport assumption_reduced_bound(const Jet3 &f, const CMat &a, const RegionFunction &g, const CVec &x,
                                            const Functional &ell, cplx nu)
{
    require_square(a, f.dim(), "assumption_reduced_bound");
    const CVec ax = a * x;
    const CVec fxx = f.d2(x, x);
    const cplx kappa = ell(fxx) / ell(x);
    ReducedBoundReport out;
    out.assumption_defect = std::max({(fxx - kappa * x).norm(), (f.d2(x, ax) - a * fxx).norm(),
                                      (f.d3(x, x, ax) - a * f.d3(x, x, x)).norm()});
    out.qualifies = out.assumption_defect <= 1e-9;
    if (!out.qualifies) {
        out.witness = x;
        return out;
    }
    const FSCoeffs c = fs_coefficients_spiral(f, a, x, ell);
    const cplx lambda = ell(ax);
    out.identity_defect = std::abs(c.a2tilde2 - c.a2 * c.a2 / lambda);
    out.reduced_lhs = std::abs(c.a3 - (nu - 1.0 + 1.0 / lambda) * c.a2 * c.a2);
    out.full_lhs = fs_lhs(c, nu);
    out.rhs = fs_rhs_theorem(g, lambda, nu).rhs;
    return out;
}

InvarianceReport spiral_invariance_probe(const Jet3 &f, const CMat &a, const NormContext &norm,
                                         const std::vector<double> &t_grid, const std::vector<CVec> &xs)
{
    require_square(a, f.dim(), "spiral_invariance_probe");
    constexpr int substeps = 16;
    constexpr int max_iter = 50;
    constexpr double tol = 1e-12;

    InvarianceReport report;
    for (const auto &x : xs) {
        require_dim(f.dim(), static_cast<std::size_t>(x.size()), "spiral_invariance_probe");
        const CVec fx = f.eval(x);
        for (double t : t_grid) {
            CVec w = x;
            bool converged = true;
            for (int s = 1; s <= substeps && converged; ++s) {
                const double ts = t * s / substeps;
                const CMat decay = (-ts * a).exp();
                const CVec target = decay * fx;
                CVec res = f.eval(w) - target;
                double rn = res.norm();
                int iter = 0;
                for (; iter < max_iter && rn > tol * std::max(1.0, target.norm()); ++iter) {
                    const CVec dw = f.jacobian(w).fullPivLu().solve(res);
                    double step = 1.0;
                    CVec trial = w - dw;
                    double trial_rn = (f.eval(trial) - target).norm();
                    while (!(trial_rn < rn) && step > 1e-8) {
                        step *= 0.5;
                        trial = w - step * dw;
                        trial_rn = (f.eval(trial) - target).norm();
                    }
                    w = trial;
                    res = f.eval(w) - target;
                    rn = res.norm();
                }
                if (!(rn <= tol * std::max(1.0, target.norm())) || !w.allFinite()) {
                    converged = false;
                }
            }
            InvarianceSample sample{x, t, norm.norm(w), converged};
            if (!converged) {
                ++report.failures;
            } else {
                report.max_w_norm = std::max(report.max_w_norm, sample.w_norm);
                if (sample.w_norm >= 1.0) {
                    ++report.violations;
                    if (!report.witness || sample.w_norm > report.witness->w_norm) {
                        report.witness = sample;
                    }
                }
            }
            report.samples.push_back(std::move(sample));
        }
    }
    return report;
}

} // namespace fslab
