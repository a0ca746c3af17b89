#ifndef FSLAB_RESOLVENT_HPP
#define FSLAB_RESOLVENT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <fslab/geometry.hpp>
#include <fslab/jet.hpp>
#include <fslab/region.hpp>

namespace fslab
{

struct ResolveResult {
    CVec w;
    double residual = 0.0;
    int iterations = 0;
};

/// Solves w + r h(w) = x by Newton's method from w = B_r x, halving the step until the
/// residual decreases. Throws NotConverged after 100 iterations and OutsideRegion if the
/// solution leaves the unit ball.
ResolveResult resolve(const HoloMap &h, double r, const CVec &x, const NormContext &norm, double tol = 1e-13);

/// Everything the coefficient formulas need about (h, r).
struct ResolventContext {
    Jet3 h;
    CMat a;
    double r = 0.0;
    CMat br;
    double rho_r = 0.0;
    NormContext norm;
};

/// Throws InvalidArgument for r <= 0 and PreconditionFailed if I + rA is singular.
ResolventContext make_resolvent_context(const Jet3 &h, double r, const NormContext &norm);

/// Jet of J_r = (Id + r h)^{-1}, obtained by differentiating the functional equation.
Jet3 resolvent_jet(const Jet3 &h, double r);

/// Same as resolvent_jet except that both third-order terms carry an additional left factor B_r.
/// Only used to measure how far that variant is from the true jet.
Jet3 resolvent_jet_extra_br(const Jet3 &h, double r);

struct ResolventFS {
    cplx a2;
    cplx a2tilde2;
    cplx a3;
    CVec x_r;
    Functional ell_r;
    /// l_r(B_r x_r) / |x_r|^2
    cplx delta;
    /// Largest deviation between the h-path and J-path triples.
    double path_deviation = 0.0;
};

/// Coefficients of the normalized resolvent (I + rA) J_r at the unit vector x, computed from the
/// jet of h and again from resolvent_jet. Returns the h-path values; throws Error when the
/// two computations differ by more than 1e-10.
ResolventFS resolvent_fs_coefficients(const ResolventContext &ctx, const CVec &x,
                                      std::optional<Functional> ell = std::nullopt);

/// |a3 - 2 a2tilde^2 - (nu - 2) a2^2|
double resolvent_fs_lhs(const ResolventFS &c, cplx nu);

enum class RhsMode { as_stated, proof_derived };

struct ResolventBound {
    double rhs = 0.0;
    cplx tau;
    QTriple q;
    /// |q2/q1 - (2 - nu) r q1 |x_r||
    double q_r = 0.0;
};

/// as_stated:     r |q1| |x_r| rho_r^2 max(1, Q_r)
/// proof_derived: r |q1| |x_r| rho_r   max(1, rho_r Q_r)
/// with tau = g^{-1}(l_r(A x_r) / |x_r|).
ResolventBound resolvent_fs_rhs(const ResolventContext &ctx, const RegionFunction &g, const CVec &x, cplx nu,
                                RhsMode mode, std::optional<Functional> ell = std::nullopt);

/// Closed form stated for A = lambda Id and the Cayley region, with q1 = -(1 + lambda^2),
/// q2 = lambda (1 + lambda^2) as written.
double resolvent_scalar_corollary(cplx lambda, double r, cplx nu);

struct AssumptionCorollary {
    cplx delta;
    /// |a2tilde^2 - delta a2^2|
    double identity_defect = 0.0;
    /// |a3 - (nu - 2 + 2 delta) a2^2|
    double reduced_lhs = 0.0;
    double full_lhs = 0.0;
    double rhs = 0.0;
};

AssumptionCorollary resolvent_assumption_corollary(const ResolventContext &ctx, const RegionFunction &g,
                                                   const CVec &x, cplx nu);

struct OnedimCorollary {
    cplx lambda;
    cplx delta;
    cplx mu;
    /// |a3 - mu a2^2| with mu = nu - 2 + 2 delta
    double lhs = 0.0;
    double rhs = 0.0;
};

/// For A = lambda Id: delta = |1 + lambda r| / (1 + lambda r). Throws PreconditionFailed for
/// non-scalar A.
OnedimCorollary resolvent_onedim_corollary(const ResolventContext &ctx, const RegionFunction &g, const CVec &x,
                                           cplx nu);

struct ContractionReport {
    double rho_r = 0.0;
    bool contractive = false;
    /// Set only when the one-dimensional-type checks ran.
    bool onedim_checked = false;
    double max_offdiag = 0.0;
    bool a_scalar = false;
    double max_collinearity_defect = 0.0;
    std::size_t samples = 0;
    std::size_t solver_failures = 0;
};

/// rho_r < 1 for the linear part; with onedim = true also that A is scalar and that J_r(x) is
/// collinear with x at `samples` points of the ball.
ContractionReport resolvent_contraction_checks(const HoloMap &h, const CMat &a, double r, const NormContext &norm,
                                               std::size_t samples, std::uint64_t seed, bool onedim);

} // namespace fslab

#endif
