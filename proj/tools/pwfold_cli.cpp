// pwfold command-line tool: classify, sweep, simulate, verify.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pwfold/report.hpp"
#include "pwfold/verify.hpp"

namespace {

using namespace pwfold;

enum Exit { kOk = 0, kOther = 1, kParse = 2, kPrecondition = 3, kVerification = 4 };

int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::MalformedJson:
    case ErrorCode::Schema:
    case ErrorCode::NonFinite:
    case ErrorCode::DegreeCap:
    case ErrorCode::EmptyBox: return kParse;
    case ErrorCode::Precondition:
    case ErrorCode::NotFoldFold:
    case ErrorCode::Degenerate:
    case ErrorCode::DenominatorZero: return kPrecondition;
    default: return kOther;
    }
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> numbers(const std::string& text, char sep, std::size_t count, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0' || !std::isfinite(v)) {
            throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.size() != count) {
        throw UsageError(std::string(what) + " needs " + std::to_string(count) + " values");
    }
    return out;
}

Vec3 point3(const std::string& s, const char* what) {
    const auto v = numbers(s, ',', 3, what);
    return {v[0], v[1], v[2]};
}

NormalParameters params4(const std::string& s, const char* what) {
    const auto v = numbers(s, ',', 4, what);
    if (v[3] != 1.0 && v[3] != -1.0) throw UsageError(std::string(what) + ": delta must be +1 or -1");
    return NormalParameters::make(v[0], v[1], v[2], static_cast<int>(v[3]));
}

SweepRange range(const std::string& s, const char* what) {
    const auto v = numbers(s, ':', 3, what);
    if (v[2] != std::floor(v[2])) throw UsageError(std::string(what) + ": resolution must be an integer");
    return {v[0], v[1], static_cast<int>(v[2])};
}

Box box_from(const std::string& s) {
    if (s.find(',') == std::string::npos) {
        const double h = numbers(s, ',', 1, "--box")[0];
        if (!(h > 0)) throw UsageError("--box half-width must be positive");
        return Box::centered(h);
    }
    const auto v = numbers(s, ',', 6, "--box");
    Box b{v[0], v[1], v[2], v[3], v[4], v[5]};
    if (b.xmin > b.xmax || b.ymin > b.ymax || b.zmin > b.zmax || b.sigma_area() <= 0.0) {
        throw Error(ErrorCode::EmptyBox, "--box is empty or misses Sigma");
    }
    return b;
}

unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TOOL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw UsageError("cannot open output file " + path);
        stream = &file;
    }
};

struct Globals {
    std::optional<double> tol;
    std::uint64_t seed = 1;
    std::string box;
    std::string out;
};

PiecewiseSystem load(const std::string& path, const Globals& g) {
    PiecewiseSystem z = load_system_file(path);
    if (!g.box.empty()) z.box = box_from(g.box);
    return z;
}

double tolerance(const PiecewiseSystem& z, const Globals& g) {
    return g.tol ? *g.tol : default_tolerance(z);
}

IntegratorConfig integrator_for(const PiecewiseSystem& z) {
    IntegratorConfig cfg;
    cfg.box = z.box;
    return cfg;
}

int run_classify(const Globals& g, const std::string& file, const std::string& point) {
    const PiecewiseSystem z = load(file, g);
    const nlohmann::json report = classify_report(z, point3(point, "--point"), tolerance(z, g));
    Output out(g.out);
    *out.stream << report.dump(2) << '\n';
    return kOk;
}

int run_sweep(const Globals& g, double gamma, int delta, const std::string& alpha,
              const std::string& beta) {
    SweepSpec spec;
    spec.gamma = gamma;
    spec.delta = delta;
    spec.alpha = range(alpha, "--alpha");
    spec.beta = range(beta, "--beta");
    const std::vector<SweepRow> rows = sweep(spec, thread_budget());
    Output out(g.out);
    *out.stream << sweep_csv_header() << '\n';
    for (const SweepRow& r : rows) *out.stream << to_csv(r) << '\n';
    return kOk;
}

int run_simulate(const Globals& g, const std::string& file, const std::string& p0, double T) {
    const PiecewiseSystem z = load(file, g);
    const Trajectory tr = filippov_trajectory(z, point3(p0, "--p0"), T, integrator_for(z));
    Output out(g.out);
    std::ostream& o = *out.stream;
    o.precision(17);
    o << "segment,mode,t,x,y,z,vx,vy,vz,event\n";
    for (std::size_t s = 0; s < tr.segments.size(); ++s) {
        const TrajectorySegment& seg = tr.segments[s];
        for (std::size_t k = 0; k < seg.samples.size(); ++k) {
            const TrajectorySample& q = seg.samples[k];
            o << s << ',' << to_string(seg.mode) << ',' << q.t << ',' << q.p.x << ',' << q.p.y << ','
              << q.p.z << ',' << q.v.x << ',' << q.v.y << ',' << q.v.z << ','
              << (k + 1 == seg.samples.size() ? to_string(seg.event) : "") << '\n';
        }
    }
    std::cerr << "status: " << to_string(tr.status);
    if (!tr.detail.empty()) std::cerr << " (" << tr.detail << ")";
    std::cerr << '\n';
    return kOk;
}

int run_verify(const Globals& g, const std::string& file, const std::string& params,
               const std::string& expect, const std::string& suites, const std::string& point,
               int samples) {
    VerifyOptions opts;
    std::stringstream ss(suites);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) opts.suites.push_back(item);
    }
    opts.seed = g.seed;
    opts.samples = samples;
    opts.point = point3(point, "--point");
    if (!expect.empty()) opts.expect = params4(expect, "--expect");

    std::optional<PiecewiseSystem> z;
    if (!file.empty()) {
        z = load(file, g);
    } else if (!params.empty()) {
        const NormalParameters p = params4(params, "--params");
        z = build_normal_form(p.alpha, p.beta, p.gamma, p.delta);
        if (!g.box.empty()) z->box = box_from(g.box);
        if (!opts.expect) opts.expect = p;
    }
    std::vector<PropertyResult> results;
    if (z) {
        opts.integrator = integrator_for(*z);
        results = run_verification(*z, opts);
    } else if (!opts.suites.empty()) {
        throw Error(ErrorCode::Precondition, "verify needs a system file or --params");
    }
    bool ok = true;
    nlohmann::json j = nlohmann::json::array();
    std::cout << "suite,property,status,residual,detail\n";
    for (const PropertyResult& r : results) {
        ok = ok && r.passed;
        std::cout << r.suite << ',' << r.name << ',' << (r.passed ? "PASS" : "FAIL") << ','
                  << r.residual << ',' << r.detail << '\n';
        j.push_back({{"suite", r.suite},
                     {"property", r.name},
                     {"passed", r.passed},
                     {"residual", r.residual},
                     {"detail", r.detail}});
    }
    if (!g.out.empty()) {
        Output out(g.out);
        *out.stream << j.dump(2) << '\n';
    }
    return ok ? kOk : kVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classify singularities of planar-switching Filippov systems"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    double tol = 0.0;
    app.add_option("--tol", tol, "Zero tolerance for Sigma classification");
    app.add_option("--seed", g.seed, "RNG seed for sampled checks");
    app.add_option("--box", g.box, "Analysis box: half-width or xmin,xmax,ymin,ymax,zmin,zmax");
    app.add_option("--out", g.out, "Output file (default stdout)");

    std::string file, point = "0,0,0", alpha, beta, p0, params, expect, suites = "all";
    double gamma = 1.0, T = 10.0;
    int delta = -1, samples = 100;

    auto* classify = app.add_subcommand("classify", "Report on one point of Sigma");
    classify->add_option("system", file, "System JSON file")->required();
    classify->add_option("--point", point, "x,y,z")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Fold-fold atlas over (alpha, beta)");
    sweep_cmd->add_option("--gamma", gamma, "Fixed gamma")->required();
    sweep_cmd->add_option("--delta", delta, "Fixed delta (+1 or -1)")->required();
    sweep_cmd->add_option("--alpha", alpha, "lo:hi:n")->required();
    sweep_cmd->add_option("--beta", beta, "lo:hi:n")->required();

    auto* simulate = app.add_subcommand("simulate", "Filippov trajectory as CSV");
    simulate->add_option("system", file, "System JSON file")->required();
    simulate->add_option("--p0", p0, "x,y,z")->required();
    simulate->add_option("--T", T, "Time horizon");

    auto* verify = app.add_subcommand("verify", "Analytic versus numeric property checks");
    verify->add_option("system", file, "System JSON file");
    verify->add_option("--params", params, "alpha,beta,gamma,delta of a normal form");
    verify->add_option("--expect", expect, "Expected normal parameters alpha,beta,gamma,delta");
    verify->add_option("--suite", suites, "Comma list of all|involutions|regions|diabolo");
    verify->add_option("--point", point, "x,y,z");
    verify->add_option("--samples", samples, "Samples per sampled property");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }
    if (app.count("--tol")) g.tol = tol;

    try {
        if (*classify) return run_classify(g, file, point);
        if (*sweep_cmd) return run_sweep(g, gamma, delta, alpha, beta);
        if (*simulate) return run_simulate(g, file, p0, T);
        if (*verify) return run_verify(g, file, params, expect, suites, point, samples);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}
