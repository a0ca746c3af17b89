#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fslab/cli.hpp>
#include <fslab/json_io.hpp>

using namespace fslab;

namespace
{

struct Outcome {
    int status = 0;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string> &args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int status = run(args, out, err);
    return {status, out.str(), err.str()};
}

Json without_timestamp(const std::string &text)
{
    Json j = Json::parse(text);
    j.erase("timestamp");
    return j;
}

std::string replace_all(std::string s, const std::string &from, const std::string &to)
{
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

} // namespace

TEST_CASE("complex literals")
{
    CHECK(parse_complex("1") == cplx(1.0, 0.0));
    CHECK(parse_complex("2+3i") == cplx(2.0, 3.0));
    CHECK(parse_complex("-i") == cplx(0.0, -1.0));
    CHECK(parse_complex("0.5-0.25i") == cplx(0.5, -0.25));
    CHECK(parse_complex("[1.5, -2]") == cplx(1.5, -2.0));
    CHECK(parse_complex("1e-3i") == cplx(0.0, 1e-3));
    CHECK_THROWS(parse_complex("abc"));
    const auto list = parse_complex_list("0,1+2i,-i");
    REQUIRE(list.size() == 3);
    CHECK(list[1] == cplx(1.0, 2.0));
    const auto reals = parse_real_list("0.1,0.5,1");
    CHECK(reals == std::vector<double>{0.1, 0.5, 1.0});
}

TEST_CASE("recentred coefficients of the Cayley function")
{
    const auto o = invoke({"gfun", "q", "--variant", "cayley", "--tau", "0"});
    CHECK(o.status == 0);
    const Json j = Json::parse(o.out);
    const Json expected = Json::parse(R"({"q0":[1,0],"q1":[-2,0],"q2":[2,0]})");
    for (const auto &item : expected.items()) {
        CHECK(j[item.key()] == item.value());
    }
}

TEST_CASE("golden exit-status fixtures")
{
    const std::string dir = FSLAB_FIXTURE_DIR;
    for (const char *name : {"golden_pass.json", "golden_violation.json", "golden_config_error.json"}) {
        CAPTURE(name);
        std::ifstream in(dir + "/" + name);
        REQUIRE(in);
        const Json fixture = Json::parse(in);
        std::vector<std::string> args;
        for (const auto &a : fixture["args"]) {
            args.push_back(replace_all(a.get<std::string>(), "@FIXTURES@", dir));
        }
        const auto o = invoke(args);
        CHECK(o.status == fixture["exit"].get<int>());
        if (fixture.contains("stderr_contains")) {
            CHECK(o.err.find(fixture["stderr_contains"].get<std::string>()) != std::string::npos);
        }
        if (o.status == 0) {
            const Json doc = Json::parse(o.out);
            CHECK(doc["summary"]["violations"] == 0);
            CHECK(doc["summary"]["worst_margin"].get<double>() >= -1e-9);
        }
    }
}

TEST_CASE("configuration errors")
{
    CHECK(invoke({"nrange", "--p", "0.5", "--diag", "1,2"}).status == 1);
    CHECK(invoke({"gfun", "q", "--variant", "sector"}).status == 1);
    CHECK(invoke({"gfun", "q", "--variant", "power", "--alpha", "1.5"}).status == 1);
    CHECK(invoke({"frobnicate"}).status == 1);
    CHECK(invoke({"resolvent", "solve", "--x", "1.5"}).status == 1);
    CHECK(invoke({"spiral", "verify", "--samples", "2", "--out", "/nonexistent-dir/report.json"}).status == 1);
    CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("reports are deterministic apart from the timestamp")
{
    const std::vector<std::string> args{"resolvent", "verify", "--n", "2", "--samples", "5", "--seed", "11"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    CHECK(without_timestamp(a.out) == without_timestamp(b.out));
    const auto c = invoke({"resolvent", "verify", "--n", "2", "--samples", "5", "--seed", "12"});
    CHECK(without_timestamp(a.out) != without_timestamp(c.out));
}

TEST_CASE("the environment seed overrides the flag")
{
    setenv("FSLAB_SEED", "11", 1);
    const auto env = invoke({"resolvent", "verify", "--n", "2", "--samples", "5", "--seed", "99"});
    unsetenv("FSLAB_SEED");
    const auto flag = invoke({"resolvent", "verify", "--n", "2", "--samples", "5", "--seed", "11"});
    REQUIRE(env.status == 0);
    CHECK(without_timestamp(env.out) == without_timestamp(flag.out));
    CHECK(Json::parse(env.out)["seed"] == 11);

    setenv("FSLAB_SEED", "not-a-number", 1);
    CHECK(invoke({"lemma31", "--samples", "10"}).status == 1);
    unsetenv("FSLAB_SEED");
}

TEST_CASE("other subcommands")
{
    const auto solve = invoke({"resolvent", "solve", "--r", "1", "--x", "0.5", "--g", "cayley"});
    REQUIRE(solve.status == 0);
    const Json s = Json::parse(solve.out);
    CHECK(s["residual"].get<double>() <= 1e-13);

    const auto lemma = invoke({"lemma31", "--samples", "1000", "--seed", "5"});
    CHECK(lemma.status == 0);
    CHECK(Json::parse(lemma.out)["violations"] == 0);

    const auto single = invoke({"lemma31", "--p-coeffs", "1,2,2", "--mu", "0"});
    CHECK(single.status == 0);
    CHECK(Json::parse(single.out)["achieved"].get<double>() == doctest::Approx(2.0));

    const auto nr = invoke({"nrange", "--n", "2", "--diag", "1,2", "--samples", "2000"});
    CHECK(nr.status == 0);
    CHECK(Json::parse(nr.out)["mA"].get<double>() == doctest::Approx(1.0).epsilon(0.05));

    const auto sh = invoke({"sharpness", "--target", "resolvent", "--nu", "2", "--budget", "2000"});
    CHECK(sh.status == 0);
    CHECK(Json::parse(sh.out)["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

    const auto mem = invoke({"membership", "--g", "power", "--alpha", "0.5", "--n", "2", "--p", "inf"});
    CHECK(mem.status == 0);

    const auto cv = invoke({"crossval"});
    CHECK(cv.status == 0);
    CHECK(Json::parse(cv.out)["report"].contains("discrepancies"));
}
