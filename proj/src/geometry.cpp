#include <fslab/geometry.hpp>

#include <algorithm>
#include <cmath>

namespace fslab
{

NormContext::NormContext(double p, std::size_t dim) : p_(p), dim_(dim)
{
    if (!(p >= 1.0)) {
        throw InvalidArgument("p must be >= 1");
    }
    if (dim == 0) {
        throw InvalidArgument("dimension must be >= 1");
    }
}

double NormContext::dual_p() const
{
    if (p_ == 1.0) {
        return inf;
    }
    if (is_inf()) {
        return 1.0;
    }
    return p_ / (p_ - 1.0);
}

double p_norm(const CVec &x, double p)
{
    double peak = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        peak = std::max(peak, std::abs(x(i)));
    }
    if (std::isinf(p) || peak == 0.0) {
        return peak;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            s += std::abs(x(i));
        }
        return s;
    }
    if (p == 2.0) {
        return x.norm();
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        s += std::pow(std::abs(x(i)) / peak, p);
    }
    return peak * std::pow(s, 1.0 / p);
}

double NormContext::norm(const CVec &x) const
{
    require_dim(dim_, static_cast<std::size_t>(x.size()), "NormContext::norm");
    return p_norm(x, p_);
}

double NormContext::dual_norm(const Functional &ell) const
{
    require_dim(dim_, ell.dim(), "NormContext::dual_norm");
    return p_norm(ell.coeffs, dual_p());
}

namespace
{

cplx unit_phase_conj(cplx z)
{
    return std::conj(z) / std::abs(z);
}

} // namespace

Functional support_functional(const CVec &x, const NormContext &norm)
{
    require_dim(norm.dim(), static_cast<std::size_t>(x.size()), "support_functional");
    const double nx = norm.norm(x);
    if (nx == 0.0) {
        throw InvalidArgument("support_functional: T(x) is undefined for x = 0");
    }
    const auto n = x.size();
    CVec a = CVec::Zero(n);
    if (norm.is_inf()) {
        Eigen::Index k = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(x(i)) > best) {
                best = std::abs(x(i));
                k = i;
            }
        }
        a(k) = unit_phase_conj(x(k));
    } else if (norm.p() == 1.0) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (x(i) != 0.0) {
                a(i) = unit_phase_conj(x(i));
            }
        }
    } else {
        const double p = norm.p();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (x(i) != 0.0) {
                a(i) = unit_phase_conj(x(i)) * std::pow(std::abs(x(i)) / nx, p - 1.0);
            }
        }
    }
    return Functional{a};
}

std::vector<Functional> extreme_support_functionals(const CVec &x, const NormContext &norm)
{
    if (!norm.is_inf()) {
        return {support_functional(x, norm)};
    }
    const double peak = norm.norm(x);
    if (peak == 0.0) {
        throw InvalidArgument("support_functional: T(x) is undefined for x = 0");
    }
    std::vector<Functional> out;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x(i)) >= peak * (1.0 - 1e-12)) {
            CVec a = CVec::Zero(x.size());
            a(i) = unit_phase_conj(x(i));
            out.push_back(Functional{a});
        }
    }
    return out;
}

CVec complex_gaussian(std::size_t n, std::mt19937_64 &rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVec v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(static_cast<Eigen::Index>(i)) = cplx(re, im);
    }
    return v;
}

CVec random_unit_vector(const NormContext &norm, std::mt19937_64 &rng)
{
    CVec v = complex_gaussian(norm.dim(), rng);
    double nv = norm.norm(v);
    while (nv == 0.0) {
        v = complex_gaussian(norm.dim(), rng);
        nv = norm.norm(v);
    }
    return v / nv;
}

std::vector<CVec> sample_sphere(const NormContext &norm, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<CVec> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(random_unit_vector(norm, rng));
    }
    return out;
}

namespace
{

double max_column_sum(const CMat &b)
{
    double best = 0.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        best = std::max(best, b.col(j).cwiseAbs().sum());
    }
    return best;
}

double max_row_sum(const CMat &b)
{
    double best = 0.0;
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        best = std::max(best, b.row(i).cwiseAbs().sum());
    }
    return best;
}

double spectral_norm(const CMat &b)
{
    if (b.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<CMat> svd(b);
    return svd.singularValues()(0);
}

// Riesz-Thorin: 1/p = (1-theta)/p0 + theta/p1 gives |B|_p <= |B|_p0^(1-theta) |B|_p1^theta.
double interpolate(double p, double p0, double n0, double p1, double n1)
{
    const double ip = 1.0 / p;
    const double ip0 = 1.0 / p0;
    const double ip1 = std::isinf(p1) ? 0.0 : 1.0 / p1;
    const double theta = (ip0 - ip) / (ip0 - ip1);
    return std::pow(n0, 1.0 - theta) * std::pow(n1, theta);
}

} // namespace

OperatorNorm operator_norm(const CMat &b, const NormContext &norm, std::uint64_t seed, std::size_t samples)
{
    require_dim(norm.dim(), static_cast<std::size_t>(b.rows()), "operator_norm");
    require_dim(norm.dim(), static_cast<std::size_t>(b.cols()), "operator_norm");
    const double n1 = max_column_sum(b);
    const double ninf = max_row_sum(b);
    if (norm.p() == 1.0) {
        return {n1, n1, true};
    }
    if (norm.is_inf()) {
        return {ninf, ninf, true};
    }
    const double n2 = spectral_norm(b);
    if (norm.p() == 2.0) {
        return {n2, n2, true};
    }
    const double p = norm.p();
    double upper = interpolate(p, 1.0, n1, NormContext::inf, ninf);
    if (p < 2.0) {
        upper = std::min(upper, interpolate(p, 1.0, n1, 2.0, n2));
    } else {
        upper = std::min(upper, interpolate(p, 2.0, n2, NormContext::inf, ninf));
    }
    double lower = 0.0;
    const auto n = static_cast<Eigen::Index>(norm.dim());
    for (Eigen::Index k = 0; k < n; ++k) {
        lower = std::max(lower, norm.norm(b.col(k)));
    }
    for (const auto &x : sample_sphere(norm, samples, seed)) {
        lower = std::max(lower, norm.norm(b * x));
    }
    return {lower, std::max(upper, lower), false};
}

RangeSample numerical_range(const CMat &a, const NormContext &norm, std::size_t count, std::uint64_t seed)
{
    if (count == 0) {
        throw InvalidArgument("numerical_range: sample count must be >= 1");
    }
    require_dim(norm.dim(), static_cast<std::size_t>(a.rows()), "numerical_range");
    RangeSample out;
    out.values.reserve(count);
    out.m_a = std::numeric_limits<double>::infinity();
    for (const auto &x : sample_sphere(norm, count, seed)) {
        const cplx v = support_functional(x, norm)(a * x);
        out.values.push_back(v);
        out.m_a = std::min(out.m_a, v.real());
    }
    return out;
}

double accretivity_margin(const CMat &a, const NormContext &norm, std::size_t count, std::uint64_t seed)
{
    return numerical_range(a, norm, count, seed).m_a;
}

} // namespace fslab
