#ifndef FSLAB_GEOMETRY_HPP
#define FSLAB_GEOMETRY_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <fslab/types.hpp>

namespace fslab
{

/// The p-norm on C^n, 1 <= p <= inf.
class NormContext
{
  public:
    static constexpr double inf = std::numeric_limits<double>::infinity();

    NormContext(double p, std::size_t dim);

    double p() const { return p_; }
    std::size_t dim() const { return dim_; }
    bool is_inf() const { return p_ == inf; }
    /// Conjugate exponent q with 1/p + 1/q = 1.
    double dual_p() const;

    double norm(const CVec &x) const;
    /// Norm of the functional with coefficients a, i.e. the q-norm of a.
    double dual_norm(const Functional &ell) const;

  private:
    double p_;
    std::size_t dim_;
};

/// The q-norm for arbitrary q in [1, inf]; scaled to avoid overflow.
double p_norm(const CVec &x, double p);

/// Canonical element of T(x): norm one and l(x) = |x|.
///
/// For 1 < p < inf the functional is unique. For p = 1 zero coordinates get a zero
/// coefficient; for p = inf the smallest index attaining the max modulus is used.
Functional support_functional(const CVec &x, const NormContext &norm);

/// Extreme points of T(x) that the sampler distinguishes: for p = inf one functional per
/// coordinate attaining the max modulus (relative tie tolerance 1e-12), otherwise just the
/// canonical functional.
std::vector<Functional> extreme_support_functionals(const CVec &x, const NormContext &norm);

/// Bracket on an operator norm. For p in {1, 2, inf} lower == upper and exact is set.
struct OperatorNorm {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;

    /// The conservative value (upper bound).
    double value() const { return upper; }
};

OperatorNorm operator_norm(const CMat &b, const NormContext &norm, std::uint64_t seed = 0,
                           std::size_t samples = 4096);

/// Deterministic unit vectors: normalized complex Gaussian draws.
std::vector<CVec> sample_sphere(const NormContext &norm, std::size_t count, std::uint64_t seed);
CVec random_unit_vector(const NormContext &norm, std::mt19937_64 &rng);
CVec complex_gaussian(std::size_t n, std::mt19937_64 &rng);

struct RangeSample {
    std::vector<cplx> values;
    double m_a = 0.0;
};

/// Samples l_x(Ax) at `count` unit vectors; m_a = min Re (an overestimate of m(A)).
RangeSample numerical_range(const CMat &a, const NormContext &norm, std::size_t count, std::uint64_t seed);

double accretivity_margin(const CMat &a, const NormContext &norm, std::size_t count, std::uint64_t seed);

} // namespace fslab

#endif
