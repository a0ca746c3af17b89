#include <doctest.h>

#include <numbers>

#include <fslab/region.hpp>

#include "support.hpp"

using namespace fslab;

namespace
{

std::vector<RegionFunction> all_variants()
{
    std::vector<RegionFunction> out{RegionFunction::cayley()};
    for (double a : {0.25, 0.5, 0.75}) {
        out.push_back(RegionFunction::power(a));
        out.push_back(RegionFunction::affine(a));
        out.push_back(RegionFunction::tangent_disk(a));
    }
    return out;
}

bool near(cplx a, cplx b, double tol)
{
    return std::abs(a - b) <= tol;
}

} // namespace

TEST_CASE("derivatives at the origin")
{
    const auto c = RegionFunction::cayley();
    CHECK(near(c(0.0), 1.0, 1e-15));
    CHECK(near(c.d1(0.0), 2.0, 1e-15));
    CHECK(near(c.d2(0.0), 4.0, 1e-15));
    const auto t = RegionFunction::tangent_disk(0.5);
    const cplx z(0.3, -0.2);
    CHECK(near(t(z), 1.0 - z, 1e-15));
    CHECK(near(t.d1(z), -1.0, 1e-15));
    CHECK(near(t.d2(z), 0.0, 1e-15));
    for (double a : {0.25, 0.5, 0.75}) {
        const auto g = RegionFunction::affine(a);
        CHECK(near(g(0.0), 1.0, 1e-15));
        CHECK(near(g.d1(0.0), 2.0 * (1.0 - a), 1e-15));
    }
}

TEST_CASE("every variant fixes g(0) = 1 and rejects |z| >= 1")
{
    for (const auto &g : all_variants()) {
        CHECK(near(g(0.0), 1.0, 1e-15));
        CHECK_THROWS_AS(g(1.0), InvalidArgument);
        CHECK_THROWS_AS(g.d1(cplx(0.0, 1.0)), InvalidArgument);
    }
    CHECK_THROWS_AS(RegionFunction::power(1.0), InvalidArgument);
    CHECK_THROWS_AS(RegionFunction::affine(0.0), InvalidArgument);
    CHECK_THROWS_AS(RegionFunction::parse("sector", 0.5), InvalidArgument);
}

TEST_CASE("derivatives agree with contour differentiation")
{
    for (const auto &g : all_variants()) {
        for (cplx z : {cplx(0.0), cplx(0.4, 0.3), cplx(-0.7, 0.1), cplx(0.2, -0.8)}) {
            const double rad = 0.5 * (1.0 - std::abs(z));
            const auto c = testsupport::scalar_taylor([&](cplx t) { return g(z + t); }, 64, rad);
            CHECK(near(g.d1(z), c[1], 1e-9 * std::max(1.0, std::abs(c[1]))));
            CHECK(near(g.d2(z), 2.0 * c[2], 1e-9 * std::max(1.0, std::abs(c[2]))));
        }
    }
}

TEST_CASE("inverse at documented points")
{
    const auto c = RegionFunction::cayley();
    for (double lambda : {0.5, 1.0, 2.0, 7.0}) {
        CHECK(near(c.inverse(lambda), (lambda - 1.0) / (lambda + 1.0), 1e-15));
    }
    for (const auto &g : all_variants()) {
        CHECK(std::abs(g.inverse(1.0)) < 1e-15);
    }
}

TEST_CASE("power inverse round trip and sector boundary")
{
    const auto g = RegionFunction::power(0.5);
    // The image of the half-power map is the sector |arg w| < pi/4; i lies on no branch of it.
    CHECK_THROWS_AS(g.inverse(cplx(0.0, 1.0)), OutsideRegion);
    CHECK(!g.contains(cplx(0.0, 1.0)).inside);
    const cplx w = std::polar(1.0, std::numbers::pi / 6.0);
    CHECK(near(g(g.inverse(w)), w, 1e-12));
}

TEST_CASE("round trip on a disk grid")
{
    for (const auto &g : all_variants()) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double rad = 0.95 * std::sqrt((i % 40 + 0.5) / 40.0);
            const cplx z = std::polar(rad, 2.0 * std::numbers::pi * (i / 40) / 25.0);
            worst = std::max(worst, std::abs(g.inverse(g(z)) - z));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("membership at documented points")
{
    const auto c = RegionFunction::cayley();
    const auto m = c.contains(cplx(1.0, 1.0));
    CHECK(m.inside);
    CHECK(m.margin == doctest::Approx(1.0 - std::abs(cplx(0.0, 1.0) / cplx(2.0, 1.0))).epsilon(1e-12));
    CHECK(m.margin == doctest::Approx(0.5528).epsilon(1e-4));
    CHECK(!c.contains(-1.0).inside);
    CHECK(!RegionFunction::affine(0.3).contains(0.2).inside);
    CHECK_THROWS_AS(c.inverse(-2.0), OutsideRegion);
}

TEST_CASE("every image lies in the right half-plane")
{
    for (const auto &g : all_variants()) {
        for (int i = 0; i < 400; ++i) {
            const cplx z = std::polar(0.99 * (i % 20 + 1) / 20.0, 2.0 * std::numbers::pi * (i / 20) / 20.0);
            CHECK(g(z).real() > 0.0);
        }
    }
}

TEST_CASE("q coefficients at the origin")
{
    const auto qc = q_coeffs(RegionFunction::cayley(), 0.0);
    CHECK(near(qc.q0, 1.0, 1e-15));
    CHECK(near(qc.q1, -2.0, 1e-15));
    CHECK(near(qc.q2, 2.0, 1e-15));
    const auto qt = q_coeffs(RegionFunction::tangent_disk(0.5), 0.0);
    CHECK(near(qt.q0, 1.0, 1e-15));
    CHECK(near(qt.q1, 1.0, 1e-15));
    CHECK(near(qt.q2, 0.0, 1e-15));
    for (double a : {0.25, 0.5, 0.75}) {
        const auto qa = q_coeffs(RegionFunction::affine(a), 0.0);
        CHECK(near(qa.q1, -2.0 * (1.0 - a), 1e-15));
        CHECK(near(qa.q2, 2.0 * (1.0 - a), 1e-15));
    }
    CHECK_THROWS_AS(q_coeffs(RegionFunction::cayley(), 1.0), InvalidArgument);
}

TEST_CASE("q coefficients match the recentred composition")
{
    // g((tau - t) / (1 - conj(tau) t)) expanded on a circle; 64 angles x 9 radii per variant.
    for (const auto &g : all_variants()) {
        double worst = 0.0;
        for (int k = 0; k < 9; ++k) {
            for (int a = 0; a < 64; ++a) {
                const cplx tau = std::polar(0.1 * (k + 1), 2.0 * std::numbers::pi * a / 64.0);
                const auto q = q_coeffs(g, tau);
                const auto ref = testsupport::scalar_taylor(
                    [&](cplx t) { return g((tau - t) / (1.0 - std::conj(tau) * t)); }, 48, 0.25);
                CHECK(q.q0 == g(tau));
                for (int m = 0; m < 3; ++m) {
                    const cplx got = m == 0 ? q.q0 : (m == 1 ? q.q1 : q.q2);
                    worst = std::max(worst, std::abs(got - ref[m]) / std::max(1.0, std::abs(ref[m])));
                }
            }
        }
        CHECK(worst < 1e-10);
    }
}
