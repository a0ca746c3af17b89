// Test-side reference computations, written independently of the library's own paths.
#ifndef FSLAB_TEST_SUPPORT_HPP
#define FSLAB_TEST_SUPPORT_HPP

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace testsupport
{

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

// Taylor coefficients c_0..c_{K-1} of an analytic vector function from m samples on |t| = radius.
template <std::size_t K>
std::array<CVec, K> taylor_on_circle(const std::function<CVec(cplx)> &f, std::size_t m, double radius)
{
    std::array<CVec, K> c;
    std::vector<CVec> samples;
    samples.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        samples.push_back(f(std::polar(radius, 2.0 * std::numbers::pi * double(j) / double(m))));
    }
    for (std::size_t k = 0; k < K; ++k) {
        c[k] = CVec::Zero(samples[0].size());
        for (std::size_t j = 0; j < m; ++j) {
            c[k] += std::polar(1.0, -2.0 * std::numbers::pi * double(k * j) / double(m)) * samples[j];
        }
        c[k] /= double(m) * std::pow(radius, double(k));
    }
    return c;
}

inline std::array<cplx, 3> scalar_taylor(const std::function<cplx(cplx)> &f, std::size_t m, double radius)
{
    auto wrapped = [&](cplx t) {
        CVec v(1);
        v(0) = f(t);
        return v;
    };
    const auto c = taylor_on_circle<3>(wrapped, m, radius);
    return {c[0](0), c[1](0), c[2](0)};
}

// Series of the inverse of z -> z + r z P(z), P(z) = p0 + p1 z + p2 z^2, to third order:
// returns (B, C, D) with w = B z + C z^2 + D z^3.
inline std::array<double, 3> resolvent_series_1d(double r, double p0, double p1, double p2)
{
    // w + r (p0 w + p1 w^2 + p2 w^3) = z, solved order by order.
    const double b = 1.0 / (1.0 + r * p0);
    const double c = -r * p1 * b * b * b;
    const double d = -r * b * (2.0 * p1 * b * c + p2 * b * b * b);
    return {b, c, d};
}

inline double bisect(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-14)
{
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline cplx disk_point(std::mt19937_64 &rng, double radius)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

} // namespace testsupport

#endif
