#include <doctest.h>

#include <random>

#include <fslab/oracle.hpp>

#include "support.hpp"

using namespace fslab;

TEST_CASE("inequality for subordinate coefficients at the documented jets")
{
    const auto rz = subordination_check(1.0, 2.0, 2.0, 0.0, {SchwarzJet(1.0, 0.0)});
    CHECK(rz.achieved == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rz.bound == doctest::Approx(2.0).epsilon(1e-15));
    const auto rz2 = subordination_check(1.0, 2.0, 2.0, 0.0, {SchwarzJet(0.0, 1.0)});
    CHECK(rz2.achieved == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(subordination_check(1.0, 2.0, 2.0, 0.0, {SchwarzJet(0.0, 0.0)}).achieved == 0.0);
}

TEST_CASE("inequality for subordinate coefficients on random data")
{
    std::mt19937_64 rng(314);
    std::size_t tested = 0;
    double worst = -1.0;
    for (int i = 0; i < 10000; ++i) {
        const cplx p1 = testsupport::disk_point(rng, 4.0);
        const cplx p2 = testsupport::disk_point(rng, 4.0);
        const cplx mu = testsupport::disk_point(rng, 4.0);
        const auto jets = schwarz_sample(static_cast<std::uint64_t>(i), 2);
        const auto rec = subordination_check(1.0, p1, p2, mu, jets);
        worst = std::max(worst, rec.achieved - rec.bound);
        ++tested;
    }
    CHECK(tested == 10000);
    CHECK(worst <= 1e-9);
}

TEST_CASE("both equality regimes are attained")
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        const cplx p1 = testsupport::disk_point(rng, 4.0);
        const cplx p2 = testsupport::disk_point(rng, 4.0);
        const cplx mu = testsupport::disk_point(rng, 4.0);
        const auto square = subordination_check(1.0, p1, p2, mu, {SchwarzJet::from_family(0.0, 0.0)});
        const auto ident = subordination_check(1.0, p1, p2, mu, {SchwarzJet::from_family(0.0, 1.0)});
        CHECK(std::abs(square.achieved - std::abs(p1)) <= 1e-12);
        CHECK(std::abs(ident.achieved - std::abs(p2 - mu * p1 * p1)) <= 1e-12);
        CHECK(std::abs(std::max(square.achieved, ident.achieved) - ident.bound) <= 1e-12);
    }
}

TEST_CASE("composition oracle matches the closed form")
{
    for (const auto &g : {RegionFunction::cayley(), RegionFunction::power(0.3), RegionFunction::affine(0.6),
                          RegionFunction::tangent_disk(0.8)}) {
        for (cplx tau : {cplx(0.0), cplx(0.5, 0.2), cplx(-0.3, -0.6)}) {
            const auto c = composition_q_coeffs(g, tau);
            const auto q = q_coeffs(g, tau);
            CHECK(std::abs(c[0] - q.q0) <= 1e-12 * std::abs(q.q0));
            CHECK(std::abs(c[1] - q.q1) <= 1e-10 * std::max(1.0, std::abs(q.q1)));
            CHECK(std::abs(c[2] - q.q2) <= 1e-10 * std::max(1.0, std::abs(q.q2)));
        }
    }
}

TEST_CASE("sharpness search")
{
    const auto g = RegionFunction::cayley();
    SharpnessParams params;

    const auto sp = sharpness_search(SharpnessTarget::spiral, g, 0.0, params);
    CHECK(sp.ratio >= 0.999);
    CHECK(sp.ratio <= 1.0 + 1e-9);
    CHECK(sp.evaluations <= params.budget);
    REQUIRE(sp.round_best.size() == 4);
    for (std::size_t i = 1; i < sp.round_best.size(); ++i) {
        CHECK(sp.round_best[i] >= sp.round_best[i - 1]);
    }

    const auto rs = sharpness_search(SharpnessTarget::resolvent, g, 2.0, params);
    CHECK(std::abs(rs.ratio - 1.0) <= 1e-9);

    const auto mid = sharpness_search(SharpnessTarget::spiral, g, 0.75, params);
    CHECK(mid.ratio <= 1.0 + 1e-9);
    CHECK(mid.ratio > 0.0);

    // The identity Schwarz function gives h(z) = z g(z): the Koebe function.
    double lhs = 0.0;
    double rhs = 0.0;
    CHECK(sharpness_ratio(SharpnessTarget::spiral, g, 0.0, params, 0.0, 1.0, &lhs, &rhs) == doctest::Approx(1.0));
    CHECK(lhs == doctest::Approx(3.0));
    CHECK(rhs == doctest::Approx(3.0));
}

TEST_CASE("cross-validation report")
{
    CHECK(crossval_report(CrossvalConfig{}).empty());
    CHECK(CrossvalConfig{}.empty());

    const Json a = crossval_report(CrossvalConfig::standard(1));
    const Json b = crossval_report(CrossvalConfig::standard(2));
    for (const char *key : {"q_coefficients", "spiral_b_link", "resolvent_b_link"}) {
        CHECK(a[key]["max_relative_deviation"].get<double>() <= 1e-10);
        CHECK(b[key]["max_relative_deviation"].get<double>() <= 1e-10);
    }
    CHECK(a["resolvent_paths"]["max_deviation"].get<double>() <= 1e-10);
    CHECK(b["resolvent_paths"]["max_deviation"].get<double>() <= 1e-10);
    CHECK(a["jet_vs_solver"]["max_relative_deviation"].get<double>() <= 1e-6);
    CHECK(b["jet_vs_solver"]["max_relative_deviation"].get<double>() <= 1e-6);
    for (const char *v : {"cayley", "power", "tangent_disk"}) {
        CHECK(a["corollary_vs_theorem"][v]["max_relative_deviation"].get<double>() <= 1e-10);
    }
    // The affine closed form as written disagrees with the general bound; the shifted form does not.
    CHECK(a["corollary_vs_theorem"]["affine"]["max_relative_deviation"].get<double>() > 0.1);
    const Json &d = a["discrepancies"];
    CHECK(d["affine_corollary_factor"]["max_deviation_shifted_form"].get<double>() <= 1e-12);
    CHECK(d["intermediate_resolvent_display"]["series_inversion"].get<double>() == doctest::Approx(0.125));
    CHECK(d["intermediate_resolvent_display"]["series_inversion_with_extra_factor"].get<double>()
          == doctest::Approx(0.0625));
    CHECK(d["scalar_corollary_q1"]["probes"].size() > 0);
    CHECK(crossval_report(CrossvalConfig::standard(1)) == a);
}
