#ifndef FSLAB_SPIRAL_HPP
#define FSLAB_SPIRAL_HPP

#include <optional>
#include <vector>

#include <fslab/geometry.hpp>
#include <fslab/jet.hpp>
#include <fslab/region.hpp>

namespace fslab
{

/// Jet of h = (Df)^{-1} A f for a normalized f (f.L = I).
Jet3 h_from_f(const Jet3 &f, const CMat &a);

/// The normalized f with h_from_f(f, A) = h, for diagonal A without resonances
/// lambda_i - lambda_j - lambda_k = 0 or lambda_i - lambda_j - lambda_k - lambda_l = 0 (tolerance 1e-9).
Jet3 f_from_h(const Jet3 &h, const CMat &a);

/// The triple (a2, a2tilde^2, a3) attached to (f, A, x, l_x).
struct FSCoeffs {
    cplx a2;
    cplx a2tilde2;
    cplx a3;
};

FSCoeffs fs_coefficients_spiral(const Jet3 &f, const CMat &a, const CVec &x, const Functional &ell);

/// |a3 - (nu - 1) a2^2 - a2tilde^2|
double fs_lhs(const FSCoeffs &c, cplx nu);

struct TheoremBound {
    double rhs = 0.0;
    cplx ell;
    QTriple q;
};

/// (|q1|/2) max(1, |q2/q1 + 2(nu - 1) q1|) with tau = g^{-1}(l_x(Ax)).
TheoremBound fs_rhs_theorem(const RegionFunction &g, const CMat &a, const CVec &x, const Functional &ell, cplx nu);
/// Same bound from a known value l = l_x(Ax).
TheoremBound fs_rhs_theorem(const RegionFunction &g, cplx ell, cplx nu);

enum class CorollaryKind { g0, g1, g2, g3 };

/// Closed-form right-hand sides stated for the concrete region functions, transcribed as
/// written. Not authoritative; see fs_rhs_theorem. Throws OutsideRegion when ell is not in
/// the corresponding image.
double fs_rhs_corollary(CorollaryKind kind, cplx ell, cplx nu, double alpha);

struct SpiralBoundReport {
    double lhs = 0.0;
    double rhs_theorem = 0.0;
    std::optional<double> rhs_corollary;
    cplx nu;
    cplx ell;
    cplx tau;
    double margin = 0.0;
};

SpiralBoundReport spiral_bound(const Jet3 &f, const CMat &a, const RegionFunction &g, const CVec &x,
                               const Functional &ell, cplx nu);

struct ReducedBoundReport {
    bool qualifies = false;
    /// Largest defect among the kappa condition and the two commutation identities.
    double assumption_defect = 0.0;
    /// |a2tilde^2 - a2^2 / l_x(Ax)|
    double identity_defect = 0.0;
    double reduced_lhs = 0.0;
    double full_lhs = 0.0;
    double rhs = 0.0;
    CVec witness;
};

/// Bound under the kappa/commutation condition: |a3 - (nu - 1 + 1/l_x(Ax)) a2^2| <= theorem RHS.
/// When the condition fails at x (defect above 1e-9) the report has qualifies = false and witness = x.
ReducedBoundReport assumption_reduced_bound(const Jet3 &f, const CMat &a, const RegionFunction &g, const CVec &x,
                                            const Functional &ell, cplx nu);

struct InvarianceSample {
    CVec x;
    double t = 0.0;
    double w_norm = 0.0;
    bool converged = false;
};

struct InvarianceReport {
    double max_w_norm = 0.0;
    std::size_t violations = 0;
    std::size_t failures = 0;
    std::vector<InvarianceSample> samples;
    std::optional<InvarianceSample> witness;
};

/// Solves f(w) = e^{-tA} f(x) by damped Newton continuation in t from w = x and records |w|.
/// Grid-relative evidence for spirallikeness; |w| >= 1 marks a violation.
InvarianceReport spiral_invariance_probe(const Jet3 &f, const CMat &a, const NormContext &norm,
                                         const std::vector<double> &t_grid, const std::vector<CVec> &xs);

} // namespace fslab

#endif
