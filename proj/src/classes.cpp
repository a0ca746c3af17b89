#include <fslab/classes.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace fslab
{

SchwarzMap::SchwarzMap(const SchwarzFamily &family)
{
    if (std::abs(family.c) > 1.0 + 1e-12) {
        throw InvalidArgument("SchwarzMap: family parameter must satisfy |c| <= 1");
    }
    const cplx rot = std::polar(1.0, family.theta);
    a_ = rot * family.c;
    b_ = rot;
    d_ = std::conj(family.c);
}

SchwarzMap::SchwarzMap(cplx c1, cplx c2)
{
    const double slack = 1.0 - std::norm(c1);
    if (slack <= 0.0) {
        a_ = c1;
        b_ = 0.0;
        d_ = 0.0;
        return;
    }
    const cplx k = c2 / slack;
    a_ = c1;
    b_ = k;
    d_ = std::conj(c1) * k;
}

cplx SchwarzMap::operator()(cplx z) const
{
    return z * (a_ + b_ * z) / (1.0 + d_ * z);
}

cplx SchwarzMap::derivative(cplx z) const
{
    const cplx num = a_ + b_ * z;
    const cplx den = 1.0 + d_ * z;
    return num / den + z * (b_ * den - num * d_) / (den * den);
}

SchwarzJet::SchwarzJet(cplx c1, cplx c2) : c1_(c1), c2_(c2)
{
    if (std::abs(c1) > 1.0 + 1e-12) {
        throw InvalidArgument("SchwarzJet: |c1| must be <= 1");
    }
    if (std::abs(c2) > 1.0 - std::norm(c1) + 1e-12) {
        throw InvalidArgument("SchwarzJet: |c2| must be <= 1 - |c1|^2");
    }
}

SchwarzJet SchwarzJet::from_family(double theta, cplx c)
{
    if (std::abs(c) > 1.0 + 1e-12) {
        throw InvalidArgument("SchwarzJet: family parameter must satisfy |c| <= 1");
    }
    const cplx rot = std::polar(1.0, theta);
    SchwarzJet jet(rot * c, rot * std::max(0.0, 1.0 - std::norm(c)));
    jet.family_ = SchwarzFamily{theta, c};
    return jet;
}

SchwarzMap SchwarzJet::realize() const
{
    if (family_) {
        return SchwarzMap(*family_);
    }
    return SchwarzMap(c1_, c2_);
}

namespace
{

cplx uniform_in_disk(double radius, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    return std::polar(r, angle);
}

} // namespace

std::vector<SchwarzJet> schwarz_sample(std::uint64_t seed, std::size_t count)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<SchwarzJet> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 2 == 0) {
            const cplx c1 = uniform_in_disk(1.0, rng);
            const cplx c2 = uniform_in_disk(1.0 - std::norm(c1), rng);
            out.emplace_back(c1, c2);
        } else {
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            const cplx c = uniform_in_disk(1.0, rng);
            out.push_back(SchwarzJet::from_family(theta, c));
        }
    }
    return out;
}

ScalarProfile::ScalarProfile(RegionFunction g, SchwarzJet omega, cplx tau)
    : g_(g), omega_(omega), map_(omega.realize()), tau_(tau)
{
    if (!(std::abs(tau) < 1.0)) {
        throw InvalidArgument("ScalarProfile: base point must satisfy |tau| < 1");
    }
}

cplx ScalarProfile::operator()(cplx u) const
{
    const cplx w = map_(u);
    return g_((tau_ + w) / (1.0 + std::conj(tau_) * w));
}

cplx ScalarProfile::derivative(cplx u) const
{
    const cplx w = map_(u);
    const cplx den = 1.0 + std::conj(tau_) * w;
    const cplx moved = (tau_ + w) / den;
    return g_.d1(moved) * (1.0 - std::norm(tau_)) * map_.derivative(u) / (den * den);
}

std::array<cplx, 3> ScalarProfile::series() const
{
    const double hyper = 1.0 - std::norm(tau_);
    const cplx n1 = hyper;
    const cplx n2 = -std::conj(tau_) * hyper;
    const cplx w1 = n1 * omega_.c1();
    const cplx w2 = n1 * omega_.c2() + n2 * omega_.c1() * omega_.c1();
    const cplx gp = g_.d1(tau_);
    return {g_(tau_), gp * w1, gp * w2 + 0.5 * g_.d2(tau_) * w1 * w1};
}

Jet3 onedim_type_jet(cplx s0, cplx s1, cplx s2, const Functional &phi)
{
    const std::size_t n = phi.dim();
    const CVec &a = phi.coeffs;
    std::vector<cplx> t2(n * n * n);
    std::vector<cplx> t3(n * n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // D2[x, x] = 2 s1 phi(x) x, before symmetrization
            t2[(i * n + j) * n + i] = 2.0 * s1 * a(static_cast<Eigen::Index>(j));
            for (std::size_t k = 0; k < n; ++k) {
                // D3[x, x, x] = 6 s2 phi(x)^2 x
                t3[((i * n + j) * n + k) * n + i] =
                    6.0 * s2 * a(static_cast<Eigen::Index>(j)) * a(static_cast<Eigen::Index>(k));
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(n);
    return Jet3(s0 * CMat::Identity(dim, dim), std::move(t2), std::move(t3));
}

namespace
{

Generator onedim_generator(const ScalarProfile &profile, const Functional &phi, std::string provenance)
{
    const auto s = profile.series();
    if (!(s[0].real() > 0.0)) {
        throw PreconditionFailed("generator: Re g(w(0)) <= 0, linear part is not strongly accretive");
    }
    const std::size_t n = phi.dim();
    HoloMap map{
        n,
        [profile, phi](const CVec &x) -> CVec { return profile(phi(x)) * x; },
        [profile, phi](const CVec &x) -> CMat {
            const cplx u = phi(x);
            const auto dim = x.size();
            CMat jac = profile(u) * CMat::Identity(dim, dim);
            jac += profile.derivative(u) * x * phi.coeffs.transpose();
            return jac;
        },
    };
    return Generator{onedim_type_jet(s[0], s[1], s[2], phi), std::move(map), std::move(provenance)};
}

std::string describe(const RegionFunction &g, const SchwarzJet &omega, cplx tau)
{
    std::string out = g.name();
    if (g.kind() != RegionFunction::Kind::cayley) {
        out += "(" + std::to_string(g.alpha()) + ")";
    }
    out += " w:";
    if (omega.family()) {
        out += "family(theta=" + std::to_string(omega.family()->theta) + ",c=" + std::to_string(omega.family()->c.real())
               + "+" + std::to_string(omega.family()->c.imag()) + "i)";
    } else {
        out += "jet(c1=" + std::to_string(omega.c1().real()) + "+" + std::to_string(omega.c1().imag())
               + "i,c2=" + std::to_string(omega.c2().real()) + "+" + std::to_string(omega.c2().imag()) + "i)";
    }
    if (tau != 0.0) {
        out += " tau=" + std::to_string(tau.real()) + "+" + std::to_string(tau.imag()) + "i";
    }
    return out;
}

} // namespace

Generator generator_1d(const RegionFunction &g, const SchwarzJet &omega, cplx tau)
{
    Functional id{CVec::Ones(1)};
    return onedim_generator(ScalarProfile(g, omega, tau), id, "1d " + describe(g, omega, tau));
}

Generator generator_nd_onedim_type(const RegionFunction &g, const SchwarzJet &omega, const Functional &phi,
                                   const NormContext &norm, cplx tau)
{
    require_dim(norm.dim(), phi.dim(), "generator_nd_onedim_type");
    if (norm.dual_norm(phi) > 1.0 + 1e-12) {
        throw PreconditionFailed("generator_nd_onedim_type: dual norm of phi exceeds 1");
    }
    return onedim_generator(ScalarProfile(g, omega, tau), phi,
                            "onedim n=" + std::to_string(norm.dim()) + " " + describe(g, omega, tau));
}

MembershipResult membership_check(const HoloMap &h, const RegionFunction &g, const NormContext &norm,
                                  const GridSpec &grid)
{
    require_dim(norm.dim(), h.dim, "membership_check");
    std::vector<CVec> directions = sample_sphere(norm, grid.directions, grid.seed);
    if (norm.is_inf() && norm.dim() > 1) {
        // Equal-modulus variants put every coordinate on the max, so all extreme functionals appear.
        const std::size_t base = directions.size();
        for (std::size_t i = 0; i < base; ++i) {
            CVec tied = directions[i];
            for (Eigen::Index k = 0; k < tied.size(); ++k) {
                tied(k) = tied(k) == 0.0 ? cplx(1.0) : tied(k) / std::abs(tied(k));
            }
            directions.push_back(tied);
        }
    }
    for (const auto &d : grid.extra_directions) {
        const double nd = norm.norm(d);
        if (nd > 0.0) {
            directions.push_back(d / nd);
        }
    }
    const std::size_t phases = std::max<std::size_t>(1, grid.phases);

    MembershipResult out;
    out.margin = std::numeric_limits<double>::infinity();
    for (const auto &d : directions) {
        for (std::size_t k = 0; k < phases; ++k) {
            const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / phases);
            for (double radius : grid.radii) {
                const CVec x = (radius * rot) * d;
                const double nx = norm.norm(x);
                const CVec hx = h.value(x);
                for (const auto &ell : extreme_support_functionals(x, norm)) {
                    const auto m = g.contains(ell(hx) / nx);
                    ++out.evaluations;
                    if (m.margin < out.margin) {
                        out.margin = m.margin;
                        out.witness = x;
                    }
                    if (!m.inside) {
                        out.ok = false;
                    }
                }
            }
        }
    }
    if (out.evaluations == 0) {
        out.margin = 0.0;
    }
    return out;
}

double assumption_margin(const CMat &a, const RegionFunction &g, const NormContext &norm, std::size_t count,
                         std::uint64_t seed)
{
    double worst = std::numeric_limits<double>::infinity();
    for (const cplx v : numerical_range(a, norm, count, seed).values) {
        worst = std::min(worst, g.contains(v).margin);
    }
    return worst;
}

bool affine_alpha_admissible(const RegionFunction &g, const CMat &a, const NormContext &norm, std::size_t count,
                             std::uint64_t seed)
{
    if (g.kind() != RegionFunction::Kind::affine) {
        return true;
    }
    return g.alpha() < numerical_range(a, norm, count, seed).m_a;
}

GeneratorSample generator_nd_perturbative(const CMat &a, const RegionFunction &g, std::uint64_t seed,
                                          const NormContext &norm, const GridSpec &grid)
{
    require_dim(norm.dim(), static_cast<std::size_t>(a.rows()), "generator_nd_perturbative");
    const std::size_t n = norm.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && std::abs(a(i, j)) > 1e-12) {
                throw PreconditionFailed("generator_nd_perturbative: A must be diagonal");
            }
        }
    }
    if (!(accretivity_margin(a, norm, 2000, seed) > 0.0)) {
        throw PreconditionFailed("generator_nd_perturbative: A is not strongly accretive on samples");
    }
    constexpr double required = 1e-3;
    const auto linear = membership_check(as_map(Jet3::linear_map(a)), g, norm, grid);
    if (linear.margin < required) {
        throw PreconditionFailed("generator_nd_perturbative: A itself violates V(A) in g(D) on the grid");
    }

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const CVec g2 = complex_gaussian(n * n * n, rng);
    const CVec g3 = complex_gaussian(n * n * n * n, rng);
    std::vector<cplx> t2(g2.data(), g2.data() + g2.size());
    std::vector<cplx> t3(g3.data(), g3.data() + g3.size());
    const auto dim = static_cast<Eigen::Index>(n);
    const Jet3 nonlinear(CMat::Zero(dim, dim), std::move(t2), std::move(t3));
    const Jet3 base = Jet3::linear_map(a);

    double eps = 1.0;
    for (int iter = 0; iter < 40; ++iter, eps *= 0.5) {
        Jet3 h = base + nonlinear.scaled(eps);
        const auto check = membership_check(as_map(h), g, norm, grid);
        if (check.ok && check.margin >= required) {
            Generator gen{h, as_map(h),
                          "perturbative n=" + std::to_string(n) + " seed=" + std::to_string(seed) + " " + g.name()};
            return GeneratorSample{std::move(gen), eps, check.margin};
        }
    }
    throw NotConverged("generator_nd_perturbative: no certified epsilon after 40 halvings");
}

NormIdentity onedim_norm_identity_check(const Jet3 &f, const std::vector<cplx> &mu, const CVec &x,
                                        const NormContext &norm)
{
    if (mu.empty() || mu.size() > 3) {
        throw InvalidArgument("onedim_norm_identity_check: between one and three coefficients are supported");
    }
    require_dim(f.dim(), static_cast<std::size_t>(x.size()), "onedim_norm_identity_check");
    CVec y = mu[0] * (f.linear() * x);
    if (mu.size() > 1) {
        y += mu[1] * f.d2(x, x);
    }
    if (mu.size() > 2) {
        y += mu[2] * f.d3(x, x, x);
    }
    NormIdentity out;
    out.lhs = std::abs(support_functional(x, norm)(y));
    out.rhs = norm.norm(y);
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

} // namespace fslab
