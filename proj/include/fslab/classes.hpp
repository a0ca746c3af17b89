#ifndef FSLAB_CLASSES_HPP
#define FSLAB_CLASSES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <fslab/geometry.hpp>
#include <fslab/jet.hpp>
#include <fslab/region.hpp>

namespace fslab
{

/// Closed-form Schwarz function w(z) = e^{i theta} z (z + c) / (1 + conj(c) z), |c| <= 1.
struct SchwarzFamily {
    double theta = 0.0;
    cplx c = 0.0;
};

/// Evaluates a Schwarz function and its derivative.
class SchwarzMap
{
  public:
    /// The family member itself.
    explicit SchwarzMap(const SchwarzFamily &family);
    /// A realization of the jet (c1, c2): w(z) = z (c1 + k z) / (1 + conj(c1) k z), k = c2 / (1 - |c1|^2).
    SchwarzMap(cplx c1, cplx c2);

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;

  private:
    // Both forms are stored as w(z) = z (a + b z) / (1 + d z).
    cplx a_;
    cplx b_;
    cplx d_;
};

/// Degree-2 data w(z) = c1 z + c2 z^2 + o(z^2) of a Schwarz function.
class SchwarzJet
{
  public:
    /// Enforces |c1| <= 1 and |c2| <= 1 - |c1|^2 (to 1e-12).
    SchwarzJet(cplx c1, cplx c2);
    static SchwarzJet from_family(double theta, cplx c);

    cplx c1() const { return c1_; }
    cplx c2() const { return c2_; }
    const std::optional<SchwarzFamily> &family() const { return family_; }

    /// The family form when present, otherwise the canonical realization of the jet.
    SchwarzMap realize() const;

  private:
    cplx c1_;
    cplx c2_;
    std::optional<SchwarzFamily> family_;
};

/// Even indices: jets with c1 uniform in D and c2 uniform in the disk of radius 1 - |c1|^2.
/// Odd indices: family members with theta uniform and c uniform in the closed disk.
std::vector<SchwarzJet> schwarz_sample(std::uint64_t seed, std::size_t count);

/// The scalar function s(u) = g(m(w(u))) with m(z) = (tau + z) / (1 + conj(tau) z), so s(0) = g(tau).
class ScalarProfile
{
  public:
    ScalarProfile(RegionFunction g, SchwarzJet omega, cplx tau = 0.0);

    cplx operator()(cplx u) const;
    cplx derivative(cplx u) const;
    /// Taylor coefficients s0, s1, s2 at u = 0.
    std::array<cplx, 3> series() const;

    const RegionFunction &region() const { return g_; }
    cplx tau() const { return tau_; }

  private:
    RegionFunction g_;
    SchwarzJet omega_;
    SchwarzMap map_;
    cplx tau_;
};

/// Jet of the one-dimensional-type map x -> (s0 + s1 phi(x) + s2 phi(x)^2) x.
Jet3 onedim_type_jet(cplx s0, cplx s1, cplx s2, const Functional &phi);

struct Generator {
    Jet3 jet;
    HoloMap map;
    std::string provenance;

    const CMat &a() const { return jet.linear(); }
};

/// h(z) = z s(z) in dimension one, a member of N_A(g) with A = g(tau) by construction.
Generator generator_1d(const RegionFunction &g, const SchwarzJet &omega, cplx tau = 0.0);

/// h(x) = s(phi(x)) x on C^n; requires dual-norm(phi) <= 1 so that phi maps the ball into D.
Generator generator_nd_onedim_type(const RegionFunction &g, const SchwarzJet &omega, const Functional &phi,
                                   const NormContext &norm, cplx tau = 0.0);

/// Sample points of the ball: each direction is scaled by every radius and every phase
/// e^{2 pi i k / phases}.
struct GridSpec {
    std::vector<double> radii{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
    std::size_t directions = 64;
    std::size_t phases = 1;
    std::uint64_t seed = 0;
    /// Unit directions checked in addition to the random ones.
    std::vector<CVec> extra_directions;
};

struct MembershipResult {
    bool ok = true;
    /// Minimum over the grid of 1 - |g^{-1}(l_x(h(x)) / |x|)|.
    double margin = 0.0;
    CVec witness;
    std::size_t evaluations = 0;
};

/// Grid test of l_x(h(x)) / |x| in g(D). For p = inf every extreme support functional at x is used.
MembershipResult membership_check(const HoloMap &h, const RegionFunction &g, const NormContext &norm,
                                  const GridSpec &grid);

/// Minimum of 1 - |g^{-1}(v)| over sampled numerical-range values v of A.
double assumption_margin(const CMat &a, const RegionFunction &g, const NormContext &norm, std::size_t count,
                         std::uint64_t seed);

/// For the affine region, whether alpha lies below the sampled m(A); true for the other variants.
bool affine_alpha_admissible(const RegionFunction &g, const CMat &a, const NormContext &norm, std::size_t count,
                             std::uint64_t seed);

struct GeneratorSample {
    Generator generator;
    double epsilon = 0.0;
    double certified_margin = 0.0;
};

/// h = A + eps (Q + C) with Gaussian symmetric Q, C; eps is halved from 1 until the grid
/// margin reaches 1e-3 (at most 40 tries). A must be diagonal.
GeneratorSample generator_nd_perturbative(const CMat &a, const RegionFunction &g, std::uint64_t seed,
                                          const NormContext &norm, const GridSpec &grid);

struct NormIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

/// |l_x(sum_j mu_j D^j f(0)[x^j])| against |sum_j mu_j D^j f(0)[x^j]| for j = 1..mu.size() <= 3.
NormIdentity onedim_norm_identity_check(const Jet3 &f, const std::vector<cplx> &mu, const CVec &x,
                                        const NormContext &norm);

} // namespace fslab

#endif
