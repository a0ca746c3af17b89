#include <fslab/region.hpp>

#include <cmath>
#include <numbers>

namespace fslab
{

namespace
{

void check_alpha(double alpha, const char *what)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument(std::string(what) + ": alpha must lie in (0, 1)");
    }
}

void check_disk(cplx z, const char *what)
{
    if (!(std::abs(z) < 1.0)) {
        throw InvalidArgument(std::string(what) + ": |z| must be < 1");
    }
}

cplx cayley_of(cplx z)
{
    return (1.0 + z) / (1.0 - z);
}

cplx cayley_inverse(cplx w)
{
    return (w - 1.0) / (w + 1.0);
}

} // namespace

RegionFunction::RegionFunction(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

RegionFunction RegionFunction::cayley()
{
    return RegionFunction(Kind::cayley, 0.0);
}

RegionFunction RegionFunction::power(double alpha)
{
    check_alpha(alpha, "power");
    return RegionFunction(Kind::power, alpha);
}

RegionFunction RegionFunction::affine(double alpha)
{
    check_alpha(alpha, "affine");
    return RegionFunction(Kind::affine, alpha);
}

RegionFunction RegionFunction::tangent_disk(double alpha)
{
    check_alpha(alpha, "tangent_disk");
    return RegionFunction(Kind::tangent_disk, alpha);
}

RegionFunction RegionFunction::parse(std::string_view name, double alpha)
{
    if (name == "cayley" || name == "g0") {
        return cayley();
    }
    if (name == "power" || name == "g1") {
        return power(alpha);
    }
    if (name == "affine" || name == "g2") {
        return affine(alpha);
    }
    if (name == "tangent" || name == "tangent_disk" || name == "g3") {
        return tangent_disk(alpha);
    }
    throw InvalidArgument("unknown region function '" + std::string(name) + "'");
}

std::string RegionFunction::name() const
{
    switch (kind_) {
    case Kind::cayley:
        return "cayley";
    case Kind::power:
        return "power";
    case Kind::affine:
        return "affine";
    case Kind::tangent_disk:
        return "tangent_disk";
    }
    return "";
}

cplx RegionFunction::operator()(cplx z) const
{
    check_disk(z, "g");
    switch (kind_) {
    case Kind::cayley:
        return cayley_of(z);
    case Kind::power:
        return std::exp(alpha_ * std::log(cayley_of(z)));
    case Kind::affine:
        return alpha_ + (1.0 - alpha_) * cayley_of(z);
    case Kind::tangent_disk:
        return (1.0 - z) / (1.0 - (2.0 * alpha_ - 1.0) * z);
    }
    return 0.0;
}

cplx RegionFunction::d1(cplx z) const
{
    check_disk(z, "g'");
    const cplx omz = 1.0 - z;
    switch (kind_) {
    case Kind::cayley:
        return 2.0 / (omz * omz);
    case Kind::power:
        // g' = a g * (g0'/g0) with g0'/g0 = 2/(1 - z^2)
        return alpha_ * (*this)(z)*2.0 / (1.0 - z * z);
    case Kind::affine:
        return (1.0 - alpha_) * 2.0 / (omz * omz);
    case Kind::tangent_disk: {
        const double c = 2.0 * alpha_ - 1.0;
        const cplx den = 1.0 - c * z;
        return (c - 1.0) / (den * den);
    }
    }
    return 0.0;
}

cplx RegionFunction::d2(cplx z) const
{
    check_disk(z, "g''");
    const cplx omz = 1.0 - z;
    switch (kind_) {
    case Kind::cayley:
        return 4.0 / (omz * omz * omz);
    case Kind::power: {
        const cplx g = (*this)(z);
        const cplx opz2 = 1.0 - z * z;
        const cplx gp = alpha_ * g * 2.0 / opz2;
        return alpha_ * (gp * 2.0 / opz2 + g * 4.0 * z / (opz2 * opz2));
    }
    case Kind::affine:
        return (1.0 - alpha_) * 4.0 / (omz * omz * omz);
    case Kind::tangent_disk: {
        const double c = 2.0 * alpha_ - 1.0;
        const cplx den = 1.0 - c * z;
        return 2.0 * c * (c - 1.0) / (den * den * den);
    }
    }
    return 0.0;
}

cplx RegionFunction::inverse_raw(cplx w, bool &branch_ok) const
{
    branch_ok = true;
    switch (kind_) {
    case Kind::cayley:
        return cayley_inverse(w);
    case Kind::power: {
        if (!(std::abs(std::arg(w)) < std::numbers::pi * alpha_ / 2.0) || w == 0.0) {
            branch_ok = false;
        }
        return cayley_inverse(std::exp(std::log(w) / alpha_));
    }
    case Kind::affine: {
        const cplx s = (w - alpha_) / (1.0 - alpha_);
        return cayley_inverse(s);
    }
    case Kind::tangent_disk:
        return (1.0 - w) / (1.0 - (2.0 * alpha_ - 1.0) * w);
    }
    return 0.0;
}

cplx RegionFunction::inverse(cplx w) const
{
    bool branch_ok = true;
    const cplx z = inverse_raw(w, branch_ok);
    const double modulus = branch_ok ? std::abs(z) : std::max(1.0, std::abs(z));
    if (!branch_ok || !(modulus < 1.0)) {
        throw OutsideRegion(name() + ": point is outside g(D), |g^-1(w)| = " + std::to_string(modulus), modulus);
    }
    return z;
}

RegionFunction::Membership RegionFunction::contains(cplx w) const
{
    bool branch_ok = true;
    const cplx z = inverse_raw(w, branch_ok);
    if (!branch_ok) {
        // Relative angular excess past the sector edge, reported as a non-positive margin.
        const double edge = std::numbers::pi * alpha_ / 2.0;
        return {false, std::min(0.0, (edge - std::abs(std::arg(w))) / edge)};
    }
    const double margin = 1.0 - std::abs(z);
    if (!std::isfinite(margin)) {
        return {false, -1.0};
    }
    return {margin > 0.0, margin};
}

QTriple q_coeffs(const RegionFunction &g, cplx tau)
{
    if (!(std::abs(tau) < 1.0)) {
        throw InvalidArgument("q_coeffs: |tau| must be < 1");
    }
    const cplx gp = g.d1(tau);
    if (gp == 0.0) {
        throw InvalidArgument("q_coeffs: g'(tau) = 0, recentring is degenerate");
    }
    const double hyper = 1.0 - std::norm(tau);
    const cplx q1 = -gp * hyper;
    const cplx ratio = std::conj(tau) - g.d2(tau) / (2.0 * gp) * hyper;
    return QTriple{g(tau), q1, ratio * q1, tau};
}

} // namespace fslab
