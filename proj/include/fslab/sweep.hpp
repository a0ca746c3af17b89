#ifndef FSLAB_SWEEP_HPP
#define FSLAB_SWEEP_HPP

#include <cstdint>
#include <vector>

#include <fslab/classes.hpp>
#include <fslab/json_io.hpp>
#include <fslab/resolvent.hpp>

namespace fslab
{

struct SweepConfig {
    RegionFunction g = RegionFunction::cayley();
    std::size_t n = 1;
    double p = 2.0;
    std::size_t samples = 100;
    std::vector<cplx> nu_grid{0.0, 1.0, 2.0};
    std::vector<double> r_list{1.0};
    std::uint64_t seed = 0;
    double tol = 1e-9;
    /// Unit vectors x tested per generator.
    std::size_t points_per_sample = 2;
    /// Keep every comparison in the report (otherwise only violations and the summary).
    bool keep_reports = true;
};

/// Sample `index` of a deterministic stream of certified generators for (g, norm):
/// n = 1 uses generator_1d with a random base point; for n > 1 even indices are one-dimensional
/// type and odd indices are perturbations of diag(g(tau_i)), certified on a grid that contains
/// the given test directions.
Generator sample_generator(const RegionFunction &g, const NormContext &norm, std::uint64_t seed, std::size_t index,
                           const std::vector<CVec> &test_directions);

/// Unit test vectors for a sample (phases included in dimension one).
std::vector<CVec> sample_points(const NormContext &norm, std::uint64_t seed, std::size_t index, std::size_t count);

struct SweepSummary {
    std::size_t comparisons = 0;
    std::size_t violations = 0;
    std::size_t skipped = 0;
    double worst_margin = 0.0;
    /// Resolvent sweeps only: the informational as_stated bound.
    bool has_as_stated = false;
    std::size_t as_stated_violations = 0;
    double as_stated_worst_margin = 0.0;
    Json reports = Json::array();
    Json as_stated_violation_list = Json::array();

    Json summary_json() const;
};

/// |a3 - (nu - 1) a2^2 - a2tilde^2| against the general bound, for f = f_from_h(h, A).
SweepSummary spiral_verify(const SweepConfig &config);

/// |a3 - 2 a2tilde^2 - (nu - 2) a2^2| against the proof_derived bound (violations) and the
/// as_stated bound (reported separately).
SweepSummary resolvent_verify(const SweepConfig &config);

} // namespace fslab

#endif
