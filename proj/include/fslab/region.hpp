#ifndef FSLAB_REGION_HPP
#define FSLAB_REGION_HPP

#include <string>
#include <string_view>

#include <fslab/types.hpp>

namespace fslab
{

/// Biholomorphic functions on the unit disk with g(0) = 1 whose images refine the right
/// half-plane:
///   cayley        (1 + z) / (1 - z)
///   power(a)      ((1 + z) / (1 - z))^a            sector |arg w| < pi a / 2
///   affine(a)     a + (1 - a)(1 + z) / (1 - z)     half-plane Re w > a
///   tangent_disk(a) (1 - z) / (1 - (2a - 1) z)     disk on [0, 1/a]
class RegionFunction
{
  public:
    enum class Kind { cayley, power, affine, tangent_disk };

    static RegionFunction cayley();
    static RegionFunction power(double alpha);
    static RegionFunction affine(double alpha);
    static RegionFunction tangent_disk(double alpha);
    /// Accepts the CLI names cayley|g0, power|g1, affine|g2, tangent|tangent_disk|g3.
    static RegionFunction parse(std::string_view name, double alpha);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    std::string name() const;

    cplx operator()(cplx z) const;
    cplx d1(cplx z) const;
    cplx d2(cplx z) const;

    /// g^{-1}(w); throws OutsideRegion (with |g^{-1}(w)|) when w is not in g(D).
    cplx inverse(cplx w) const;

    struct Membership {
        bool inside = false;
        /// 1 - |g^{-1}(w)|; positive iff inside.
        double margin = 0.0;
    };
    Membership contains(cplx w) const;

  private:
    RegionFunction(Kind kind, double alpha);
    /// Inverse without the |z| < 1 check; sets branch_ok = false for a power-branch violation.
    cplx inverse_raw(cplx w, bool &branch_ok) const;

    Kind kind_;
    double alpha_;
};

/// Recentred Taylor data: g((tau - t) / (1 - t conj(tau))) = q0 + q1 t + q2 t^2 + O(t^3).
struct QTriple {
    cplx q0;
    cplx q1;
    cplx q2;
    cplx tau;
};

/// Closed form q1 = -g'(tau)(1 - |tau|^2), q2/q1 = conj(tau) - g''(tau)/(2 g'(tau)) (1 - |tau|^2).
QTriple q_coeffs(const RegionFunction &g, cplx tau);

} // namespace fslab

#endif
