#ifndef FSLAB_JET_HPP
#define FSLAB_JET_HPP

#include <functional>
#include <vector>

#include <fslab/types.hpp>

namespace fslab
{

/// Degree-3 Taylor data at the origin of a holomorphic map h: C^n -> C^n with h(0) = 0.
///
/// The tensors hold the raw Frechet derivatives (no factorials):
///   h(x) = L x + (1/2!) D2[x, x] + (1/3!) D3[x, x, x] + O(|x|^4).
/// D2 is indexed (i; j, k) and D3 is indexed (i; j, k, l). Both are symmetrized in their
/// input slots at construction, so asymmetric input is accepted.
class Jet3
{
  public:
    Jet3(CMat linear, std::vector<cplx> t2, std::vector<cplx> t3);

    static Jet3 zero(std::size_t n);
    static Jet3 identity(std::size_t n);
    static Jet3 linear_map(const CMat &a);
    /// One-dimensional jet of h(z) = c1 z + c2 z^2 + c3 z^3.
    static Jet3 from_series(cplx c1, cplx c2, cplx c3);

    std::size_t dim() const { return n_; }
    const CMat &linear() const { return linear_; }

    cplx t2(std::size_t i, std::size_t j, std::size_t k) const { return t2_[(i * n_ + j) * n_ + k]; }
    cplx t3(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
    {
        return t3_[((i * n_ + j) * n_ + k) * n_ + l];
    }
    const std::vector<cplx> &t2_data() const { return t2_; }
    const std::vector<cplx> &t3_data() const { return t3_; }

    /// Truncated Taylor polynomial L x + D2[x^2]/2 + D3[x^3]/6.
    CVec eval(const CVec &x) const;
    /// D2h(0)[u, v]; bitwise symmetric under swapping the arguments.
    CVec d2(const CVec &u, const CVec &v) const;
    /// D3h(0)[u, v, w]; bitwise symmetric under any permutation of the arguments.
    CVec d3(const CVec &u, const CVec &v, const CVec &w) const;
    /// Derivative of the truncated polynomial at x: L + D2[x, .] + D3[x, x, .]/2.
    CMat jacobian(const CVec &x) const;

    Jet3 operator+(const Jet3 &other) const;
    Jet3 scaled(cplx s) const;

    /// Largest deviation between two jets of equal dimension, over all stored entries.
    double max_abs_diff(const Jet3 &other) const;

  private:
    std::size_t n_;
    CMat linear_;
    std::vector<cplx> t2_;
    std::vector<cplx> t3_;
};

/// Coefficients of t^0, t^1, t^2 of a scalar analytic function of t.
struct ScalarSeries3 {
    cplx b0;
    cplx b1;
    cplx b2;
};

/// Taylor coefficients of t -> l(h(t B x)) / t from the jet of h.
ScalarSeries3 directional_series(const Jet3 &jet, const CMat &b, const CVec &x, const Functional &ell);

/// A holomorphic self-map of C^n given as value and derivative callables.
struct HoloMap {
    std::size_t dim = 0;
    std::function<CVec(const CVec &)> value;
    std::function<CMat(const CVec &)> jacobian;
};

/// The polynomial map defined by a jet.
HoloMap as_map(const Jet3 &jet);

} // namespace fslab

#endif
