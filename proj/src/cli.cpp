#include <fslab/cli.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include <fslab/json_io.hpp>
#include <fslab/oracle.hpp>
#include <fslab/spiral.hpp>
#include <fslab/sweep.hpp>

namespace fslab
{

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string &text)
{
    const std::string t = trim(text);
    if (t == "inf" || t == "Inf" || t == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception &) {
        throw InvalidArgument("not a number: '" + text + "'");
    }
    if (used != t.size()) {
        throw InvalidArgument("not a number: '" + text + "'");
    }
    return v;
}

std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct RunConfig {
    std::string g = "cayley";
    double alpha = 0.5;
    std::size_t n = 1;
    std::string p = "2";
    std::size_t samples = 100;
    std::string nu_grid = "0,1,2";
    std::string r_list = "1";
    std::string radii = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.95";
    std::size_t dirs = 64;
    std::size_t phases = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string csv_path;
    double tol = 1e-9;
    bool full = false;

    // subcommand-specific
    std::string tau = "0";
    std::string tau_re;
    std::string tau_im;
    std::string diag;
    std::string matrix;
    std::string jet;
    std::string x;
    double r = 1.0;
    std::string target = "spiral";
    std::string nu = "0";
    std::size_t budget = 10000;
    std::string mode = "as_stated";
    std::string p_coeffs;
    std::string mu;
    std::string config_path;
};

// Reported as exit status 1.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

double checked_p(const RunConfig &c)
{
    const double p = parse_real(c.p);
    if (!(p >= 1.0)) {
        throw ConfigError("p must be ≥ 1");
    }
    return p;
}

void check_common(const RunConfig &c)
{
    if (c.n < 1) {
        throw ConfigError("n must be ≥ 1");
    }
    if (!(c.tol >= 0.0)) {
        throw ConfigError("tolerance must be ≥ 0");
    }
}

RegionFunction checked_region(const std::string &name, double alpha)
{
    try {
        return RegionFunction::parse(name, alpha);
    } catch (const InvalidArgument &e) {
        throw ConfigError(e.what());
    }
}

CMat read_matrix(const RunConfig &c, std::size_t n)
{
    if (!c.matrix.empty()) {
        std::ifstream in(c.matrix);
        if (!in) {
            throw ConfigError("cannot read matrix file '" + c.matrix + "'");
        }
        const Json j = Json::parse(in);
        if (!j.is_array() || j.empty()) {
            throw ConfigError("matrix JSON must be a non-empty array of rows");
        }
        CMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (j[i].size() != j.size()) {
                throw ConfigError("matrix must be square");
            }
            for (std::size_t k = 0; k < j.size(); ++k) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k]);
            }
        }
        return m;
    }
    if (!c.diag.empty()) {
        const auto d = parse_complex_list(c.diag);
        CMat m = CMat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
        }
        return m;
    }
    const auto dim = static_cast<Eigen::Index>(n);
    return CMat::Identity(dim, dim);
}

Jet3 read_jet(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read jet file '" + path + "'");
    }
    return jet_from_json(Json::parse(in));
}

SweepConfig sweep_config(const RunConfig &c)
{
    SweepConfig s;
    s.g = checked_region(c.g, c.alpha);
    s.n = c.n;
    s.p = checked_p(c);
    s.samples = c.samples;
    s.nu_grid = parse_complex_list(c.nu_grid);
    s.r_list = parse_real_list(c.r_list);
    for (double r : s.r_list) {
        if (!(r > 0.0)) {
            throw ConfigError("r must be > 0");
        }
    }
    s.seed = c.seed;
    s.tol = c.tol;
    s.keep_reports = c.full;
    return s;
}

Json header(const std::string &command, const RunConfig &c)
{
    Json h;
    h["command"] = command;
    h["seed"] = c.seed;
    h["timestamp"] = timestamp();
    return h;
}

int cmd_gfun_q(const RunConfig &c, Json &doc)
{
    const RegionFunction g = checked_region(c.g, c.alpha);
    const cplx tau = c.tau_re.empty() && c.tau_im.empty()
                         ? parse_complex(c.tau)
                         : cplx(c.tau_re.empty() ? 0.0 : parse_real(c.tau_re),
                                c.tau_im.empty() ? 0.0 : parse_real(c.tau_im));
    if (!(std::abs(tau) < 1.0)) {
        throw ConfigError("|tau| must be < 1");
    }
    const QTriple q = q_coeffs(g, tau);
    doc["q0"] = to_json(q.q0);
    doc["q1"] = to_json(q.q1);
    doc["q2"] = to_json(q.q2);
    doc["tau"] = to_json(tau);
    return 0;
}

int cmd_nrange(const RunConfig &c, Json &doc)
{
    const CMat a = read_matrix(c, c.n);
    const NormContext norm(checked_p(c), static_cast<std::size_t>(a.rows()));
    const RangeSample sample = numerical_range(a, norm, c.samples, c.seed);
    doc["mA"] = sample.m_a;
    doc["N"] = c.samples;
    doc["p"] = norm.is_inf() ? Json("inf") : Json(norm.p());
    if (!c.csv_path.empty()) {
        std::ofstream csv(c.csv_path);
        if (!csv) {
            throw ConfigError("cannot write '" + c.csv_path + "'");
        }
        csv << "re,im\n" << std::setprecision(17);
        for (const cplx v : sample.values) {
            csv << v.real() << ',' << v.imag() << '\n';
        }
    }
    return 0;
}

int cmd_membership(const RunConfig &c, Json &doc)
{
    const RegionFunction g = checked_region(c.g, c.alpha);
    const NormContext norm(checked_p(c), c.n);
    HoloMap h;
    if (!c.jet.empty()) {
        const Jet3 jet = read_jet(c.jet);
        require_dim(c.n, jet.dim(), "membership --jet");
        h = as_map(jet);
    } else {
        // h(x) = g(x_1) x
        CVec e1 = CVec::Zero(static_cast<Eigen::Index>(c.n));
        e1(0) = 1.0;
        h = generator_nd_onedim_type(g, SchwarzJet(1.0, 0.0), Functional{e1}, norm).map;
    }
    GridSpec grid;
    grid.radii = parse_real_list(c.radii);
    for (double r : grid.radii) {
        if (!(r > 0.0 && r <= 1.0)) {
            throw ConfigError("radii must lie in (0, 1]");
        }
    }
    grid.directions = c.dirs;
    grid.phases = c.phases;
    grid.seed = c.seed;
    const MembershipResult m = membership_check(h, g, norm, grid);
    doc["ok"] = m.ok;
    doc["margin"] = m.margin;
    doc["witness"] = m.witness.size() > 0 ? to_json(m.witness) : Json(nullptr);
    doc["evaluations"] = m.evaluations;
    return m.ok ? 0 : 2;
}

int cmd_spiral_verify(const RunConfig &c, Json &doc)
{
    const SweepConfig s = sweep_config(c);
    const SweepSummary sum = spiral_verify(s);
    doc["summary"] = sum.summary_json();
    doc["reports"] = sum.reports;
    return sum.violations == 0 ? 0 : 2;
}

int cmd_resolvent_verify(const RunConfig &c, Json &doc)
{
    const SweepConfig s = sweep_config(c);
    const SweepSummary sum = resolvent_verify(s);
    doc["summary"] = sum.summary_json();
    doc["as_stated_violations"] = sum.as_stated_violation_list;
    doc["reports"] = sum.reports;
    return sum.violations == 0 ? 0 : 2;
}

int cmd_resolvent_solve(const RunConfig &c, Json &doc)
{
    if (!(c.r > 0.0)) {
        throw ConfigError("r must be > 0");
    }
    const auto xs = parse_complex_list(c.x);
    CVec x(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x(static_cast<Eigen::Index>(i)) = xs[i];
    }
    const NormContext norm(checked_p(c), xs.size());
    HoloMap h;
    if (!c.jet.empty()) {
        const Jet3 jet = read_jet(c.jet);
        require_dim(xs.size(), jet.dim(), "resolvent solve --jet");
        h = as_map(jet);
    } else {
        CVec e1 = CVec::Zero(x.size());
        e1(0) = 1.0;
        h = generator_nd_onedim_type(checked_region(c.g, c.alpha), SchwarzJet(1.0, 0.0), Functional{e1}, norm).map;
    }
    if (!(norm.norm(x) < 1.0)) {
        throw ConfigError("x must lie in the open unit ball");
    }
    const ResolveResult res = resolve(h, c.r, x, norm);
    doc["r"] = c.r;
    doc["x"] = to_json(x);
    doc["w"] = to_json(res.w);
    doc["norm_w"] = norm.norm(res.w);
    doc["residual"] = res.residual;
    doc["iterations"] = res.iterations;
    return 0;
}

int cmd_subordination(const RunConfig &c, Json &doc)
{
    const double tol = c.tol;
    const auto jets = schwarz_sample(c.seed, 64);
    if (!c.p_coeffs.empty()) {
        const auto p = parse_complex_list(c.p_coeffs);
        if (p.size() != 3) {
            throw ConfigError("--p-coeffs needs three values p0,p1,p2");
        }
        const cplx mu = parse_complex(c.mu.empty() ? "0" : c.mu);
        std::vector<SchwarzJet> probe = jets;
        probe.emplace_back(1.0, 0.0);
        probe.emplace_back(0.0, 1.0);
        const ExtremalRecord rec = subordination_check(p[0], p[1], p[2], mu, probe);
        doc["achieved"] = rec.achieved;
        doc["bound"] = rec.bound;
        doc["ratio"] = rec.ratio;
        doc["c1"] = to_json(rec.c1);
        doc["c2"] = to_json(rec.c2);
        return rec.achieved > rec.bound + tol ? 2 : 0;
    }
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto disk = [&](double radius) {
        return std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    };
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < c.samples; ++i) {
        const cplx p1 = disk(4.0);
        const cplx p2 = disk(4.0);
        const cplx mu = disk(4.0);
        const cplx c1 = disk(1.0);
        const SchwarzJet w(c1, disk(1.0 - std::norm(c1)));
        const ExtremalRecord rec = subordination_check(1.0, p1, p2, mu, {w});
        worst = std::max(worst, rec.achieved - rec.bound);
        if (rec.achieved > rec.bound + tol) {
            ++violations;
        }
    }
    doc["triples"] = c.samples;
    doc["violations"] = violations;
    doc["max_excess"] = worst;
    return violations == 0 ? 0 : 2;
}

int cmd_sharpness(const RunConfig &c, Json &doc)
{
    SharpnessTarget target;
    if (c.target == "spiral") {
        target = SharpnessTarget::spiral;
    } else if (c.target == "resolvent") {
        target = SharpnessTarget::resolvent;
    } else {
        throw ConfigError("--target must be spiral or resolvent");
    }
    SharpnessParams params;
    params.r = c.r;
    params.budget = c.budget;
    if (c.mode == "as_stated") {
        params.mode = RhsMode::as_stated;
    } else if (c.mode == "proof_derived") {
        params.mode = RhsMode::proof_derived;
    } else {
        throw ConfigError("--mode must be as_stated or proof_derived");
    }
    if (params.budget < 1) {
        throw ConfigError("budget must be ≥ 1");
    }
    if (!(params.r > 0.0)) {
        throw ConfigError("r must be > 0");
    }
    const ExtremalRecord rec = sharpness_search(target, checked_region(c.g, c.alpha), parse_complex(c.nu), params);
    doc["achieved"] = rec.achieved;
    doc["bound"] = rec.bound;
    doc["ratio"] = rec.ratio;
    doc["theta"] = rec.theta;
    doc["c"] = to_json(rec.c);
    doc["c1"] = to_json(rec.c1);
    doc["c2"] = to_json(rec.c2);
    doc["nu"] = to_json(rec.nu);
    doc["evaluations"] = rec.evaluations;
    doc["round_best"] = rec.round_best;
    return rec.ratio > 1.0 + c.tol ? 2 : 0;
}

int cmd_crossval(const RunConfig &c, Json &doc)
{
    CrossvalConfig cfg = CrossvalConfig::standard(c.seed);
    if (!c.config_path.empty()) {
        std::ifstream in(c.config_path);
        if (!in) {
            throw ConfigError("cannot read config '" + c.config_path + "'");
        }
        const Json j = Json::parse(in);
        cfg = CrossvalConfig{};
        cfg.seed = c.seed;
        cfg.variants = j.value("variants", std::vector<std::string>{});
        cfg.alphas = j.value("alphas", std::vector<double>{});
        cfg.tau_radii = j.value("tau_radii", std::vector<double>{});
        cfg.tau_angles = j.value("tau_angles", std::size_t{0});
        cfg.r_list = j.value("r_list", std::vector<double>{});
        cfg.dims = j.value("dims", std::vector<std::size_t>{});
        cfg.samples = j.value("samples", std::size_t{0});
        cfg.discrepancies = j.value("discrepancies", false);
        if (j.contains("nu_grid")) {
            for (const auto &v : j.at("nu_grid")) {
                cfg.nu_grid.push_back(complex_from_json(v));
            }
        }
    }
    doc["report"] = crossval_report(cfg);
    return 0;
}

} // namespace

cplx parse_complex(const std::string &text)
{
    std::string t;
    for (char ch : text) {
        if (ch != ' ' && ch != '\t') {
            t += ch;
        }
    }
    if (t.empty()) {
        throw InvalidArgument("empty complex number");
    }
    if (t.front() == '[') {
        return complex_from_json(Json::parse(t));
    }
    if (t.back() != 'i') {
        return {parse_real(t), 0.0};
    }
    t.pop_back();
    // Split at the last sign that is not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_part = [](const std::string &s) {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        return parse_real(s);
    };
    if (split == std::string::npos) {
        return {0.0, imag_part(t)};
    }
    return {parse_real(t.substr(0, split)), imag_part(t.substr(split))};
}

std::vector<cplx> parse_complex_list(const std::string &text)
{
    std::vector<cplx> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) {
            out.push_back(parse_complex(item));
        }
    }
    if (out.empty()) {
        throw InvalidArgument("empty list '" + text + "'");
    }
    return out;
}

std::vector<double> parse_real_list(const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) {
            out.push_back(parse_real(item));
        }
    }
    if (out.empty()) {
        throw InvalidArgument("empty list '" + text + "'");
    }
    return out;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    RunConfig c;
    CLI::App app{"Fekete-Szego bounds for spirallike mappings and resolvents"};
    app.name("fslab");
    app.require_subcommand(1);

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--seed", c.seed, "random seed (FSLAB_SEED overrides)");
        sub->add_option("--out", c.out_path, "write the JSON report here instead of stdout");
        sub->add_option("--tol", c.tol, "violation tolerance (default 1e-9)");
    };
    auto add_region = [&](CLI::App *sub) {
        sub->add_option("--g,--variant", c.g, "cayley | power | affine | tangent_disk");
        sub->add_option("--alpha", c.alpha, "region parameter in (0, 1)");
    };
    auto add_space = [&](CLI::App *sub) {
        sub->add_option("--n", c.n, "dimension");
        sub->add_option("--p", c.p, "norm exponent, >= 1 or inf");
    };

    auto *gfun = app.add_subcommand("gfun", "region functions");
    gfun->require_subcommand(1);
    auto *gfun_q = gfun->add_subcommand("q", "recentred coefficients q0, q1, q2");
    add_region(gfun_q);
    add_common(gfun_q);
    gfun_q->add_option("--tau", c.tau, "base point, e.g. 0.3+0.1i");
    gfun_q->add_option("--tau-re", c.tau_re);
    gfun_q->add_option("--tau-im", c.tau_im);

    auto *nrange = app.add_subcommand("nrange", "sampled numerical range; CSV columns: re,im (one sample per row)");
    add_space(nrange);
    add_common(nrange);
    nrange->add_option("--samples", c.samples);
    nrange->add_option("--diag", c.diag, "diagonal entries, comma separated");
    nrange->add_option("--matrix", c.matrix, "JSON file with rows of [re, im]");
    nrange->add_option("--csv", c.csv_path, "write samples as CSV (re,im)");

    auto *membership = app.add_subcommand("membership", "grid test of l_x(h(x))/|x| in g(D)");
    add_region(membership);
    add_space(membership);
    add_common(membership);
    membership->add_option("--radii", c.radii);
    membership->add_option("--dirs", c.dirs);
    membership->add_option("--phases", c.phases);
    membership->add_option("--jet", c.jet, "JSON jet of h (default h(x) = g(x_1) x)");

    auto *spiral = app.add_subcommand("spiral", "spirallike bounds");
    spiral->require_subcommand(1);
    auto *spiral_verify_cmd = spiral->add_subcommand("verify", "sampled check of the coefficient bound");
    add_region(spiral_verify_cmd);
    add_space(spiral_verify_cmd);
    add_common(spiral_verify_cmd);
    spiral_verify_cmd->add_option("--samples", c.samples);
    spiral_verify_cmd->add_option("--nu-grid", c.nu_grid);
    spiral_verify_cmd->add_flag("--full", c.full, "include every comparison in the report");

    auto *resolvent = app.add_subcommand("resolvent", "nonlinear resolvents");
    resolvent->require_subcommand(1);
    auto *res_verify = resolvent->add_subcommand("verify", "sampled check of the resolvent bound");
    add_region(res_verify);
    add_space(res_verify);
    add_common(res_verify);
    res_verify->add_option("--samples", c.samples);
    res_verify->add_option("--nu-grid", c.nu_grid);
    res_verify->add_option("--r-list", c.r_list);
    res_verify->add_flag("--full", c.full, "include every comparison in the report");
    auto *res_solve = resolvent->add_subcommand("solve", "solve w + r h(w) = x");
    add_region(res_solve);
    add_common(res_solve);
    res_solve->add_option("--p", c.p);
    res_solve->add_option("--r", c.r);
    res_solve->add_option("--x", c.x, "point, comma separated")->required();
    res_solve->add_option("--jet", c.jet, "JSON jet of h (default h(x) = g(x_1) x)");

    auto *lemma = app.add_subcommand("lemma31", "|b2 - mu b1^2| <= max(|p1|, |p2 - mu p1^2|) on random triples");
    lemma->alias("subordination");
    add_common(lemma);
    lemma->add_option("--samples", c.samples);
    lemma->add_option("--p-coeffs", c.p_coeffs, "single check: p0,p1,p2");
    lemma->add_option("--mu", c.mu);

    auto *sharp = app.add_subcommand("sharpness", "extremal search over the Schwarz family");
    add_region(sharp);
    add_common(sharp);
    sharp->add_option("--target", c.target, "spiral | resolvent");
    sharp->add_option("--nu", c.nu);
    sharp->add_option("--budget", c.budget);
    sharp->add_option("--r", c.r);
    sharp->add_option("--mode", c.mode, "as_stated | proof_derived");

    auto *crossval = app.add_subcommand("crossval", "dual-path identities and known inconsistent closed forms");
    add_common(crossval);
    crossval->add_option("--config", c.config_path, "JSON lattice (default: built-in lattice)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return 1;
    }

    if (const char *env = std::getenv("FSLAB_SEED")) {
        try {
            c.seed = std::stoull(env);
        } catch (const std::exception &) {
            err << "error: FSLAB_SEED must be an unsigned integer\n";
            return 1;
        }
    }

    Json doc;
    int status = 0;
    try {
        check_common(c);
        std::string name;
        std::function<int(const RunConfig &, Json &)> fn;
        if (gfun_q->parsed()) {
            name = "gfun q";
            fn = cmd_gfun_q;
        } else if (nrange->parsed()) {
            name = "nrange";
            fn = cmd_nrange;
        } else if (membership->parsed()) {
            name = "membership";
            fn = cmd_membership;
        } else if (spiral_verify_cmd->parsed()) {
            name = "spiral verify";
            fn = cmd_spiral_verify;
        } else if (res_verify->parsed()) {
            name = "resolvent verify";
            fn = cmd_resolvent_verify;
        } else if (res_solve->parsed()) {
            name = "resolvent solve";
            fn = cmd_resolvent_solve;
        } else if (lemma->parsed()) {
            name = "lemma31";
            fn = cmd_subordination;
        } else if (sharp->parsed()) {
            name = "sharpness";
            fn = cmd_sharpness;
        } else {
            name = "crossval";
            fn = cmd_crossval;
        }
        if (name != "gfun q") {
            doc = header(name, c);
        }
        status = fn(c, doc);
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InvalidArgument &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Json::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const std::string text = doc.dump(2) + "\n";
    if (c.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(c.out_path);
        if (!file || !(file << text)) {
            err << "error: cannot write '" << c.out_path << "'\n";
            return 1;
        }
    }
    if (status == 2) {
        err << "violations found\n";
    }
    return status;
}

} // namespace fslab
