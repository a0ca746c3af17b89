#ifndef FSLAB_ORACLE_HPP
#define FSLAB_ORACLE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <fslab/classes.hpp>
#include <fslab/json_io.hpp>
#include <fslab/resolvent.hpp>

namespace fslab
{

/// Taylor coefficients (q0, q1, q2) of t -> g((tau - t) / (1 - conj(tau) t)) by the trapezoidal
/// rule on the circle |t| = radius. Independent of the closed form in q_coeffs.
std::array<cplx, 3> composition_q_coeffs(const RegionFunction &g, cplx tau, std::size_t points = 32,
                                         double radius = 0.25);

/// Taylor coefficients c0..c3 of t -> F(t) from samples on |t| = radius.
std::array<CVec, 4> contour_coefficients(const std::function<CVec(cplx)> &f, std::size_t points, double radius);

struct JetSolverDeviation {
    double linear = 0.0;
    double quadratic = 0.0;
    double cubic = 0.0;
    double max() const { return std::max({linear, quadratic, cubic}); }
};

/// Relative deviation between resolvent_jet(h_jet, r) and the directional Taylor coefficients of
/// t -> resolve(h, r, t d) along each unit direction d, extracted on a contour.
JetSolverDeviation resolvent_jet_solver_deviation(const HoloMap &h, const Jet3 &h_jet, double r,
                                                  const NormContext &norm, const std::vector<CVec> &directions,
                                                  std::size_t points = 24, double radius = 0.2);

struct ExtremalRecord {
    double achieved = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    double theta = 0.0;
    cplx c;
    cplx c1;
    cplx c2;
    cplx nu;
    std::size_t evaluations = 0;
    /// Best ratio after the grid and after each refinement round.
    std::vector<double> round_best;
};

/// max over the jets of |b2 - mu b1^2| with b1 = p1 c1, b2 = p2 c1^2 + p1 c2, against
/// max(|p1|, |p2 - mu p1^2|).
ExtremalRecord subordination_check(cplx p0, cplx p1, cplx p2, cplx mu, const std::vector<SchwarzJet> &schwarz);

enum class SharpnessTarget { spiral, resolvent };

struct SharpnessParams {
    double r = 1.0;
    std::size_t budget = 10000;
    RhsMode mode = RhsMode::as_stated;
};

/// LHS/RHS for the one-dimensional generator built from the family member (theta, c).
double sharpness_ratio(SharpnessTarget target, const RegionFunction &g, cplx nu, const SharpnessParams &params,
                       double theta, cplx c, double *lhs = nullptr, double *rhs = nullptr);

/// Grid over (theta, |c|, arg c) scaled to use about 70% of the budget, then three rounds of
/// coordinate refinement with the step divided by 4 each round.
ExtremalRecord sharpness_search(SharpnessTarget target, const RegionFunction &g, cplx nu,
                                const SharpnessParams &params);

struct CrossvalConfig {
    std::vector<std::string> variants;
    std::vector<double> alphas;
    std::vector<double> tau_radii;
    std::size_t tau_angles = 0;
    std::vector<double> r_list;
    std::vector<std::size_t> dims;
    std::vector<cplx> nu_grid;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool discrepancies = false;

    static CrossvalConfig standard(std::uint64_t seed = 0);
    bool empty() const;
};

/// Max deviations of every dual-path identity over the lattice, plus the known inconsistent
/// closed forms as labelled sections. An empty config gives an empty object.
Json crossval_report(const CrossvalConfig &config);

} // namespace fslab

#endif
