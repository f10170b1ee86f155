#include "wavesel/cli.hpp"

#include "selftest.hpp"
#include "wavesel/analysis.hpp"
#include "wavesel/estimator.hpp"
#include "wavesel/sim.hpp"
#include "wavesel/wavesearch.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <thread>

namespace wavesel::cli {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto end = s.find(sep, start);
        out.push_back(trim(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
        if (end == std::string_view::npos) return out;
        start = end + 1;
    }
}

double parse_real(std::string_view s) {
    s = trim(s);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("malformed number: '" + std::string(s) + "'");
    }
    return value;
}

// 17 significant digits always read back to the same double.
std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

unsigned worker_count(bool parallel) {
    if (const char* env = std::getenv("WAVESEL_THREADS"); env && *env) {
        unsigned n = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
            throw std::invalid_argument("WAVESEL_THREADS must be a positive integer");
        }
        return n;
    }
    return parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
}

template <class T>
json int_array(const std::vector<T>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(x);
    return a;
}

json big_array(const IntVector& xs) {
    json a = json::array();
    for (const auto& x : xs) {
        if (x.fits_slong_p()) {
            a.push_back(x.get_si());
        } else {
            a.push_back(x.get_str());
        }
    }
    return a;
}

std::string joined(const std::vector<std::int64_t>& xs, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
    return s;
}

std::string joined(const IntVector& xs, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i].get_str();
    return s;
}

struct OptimizeArgs {
    int n = 0;
    std::string lambda_min, lambda_max, rmax;
    std::optional<double> gamma;
    std::optional<std::int64_t> kappa;
    std::optional<double> time_limit_s;
    bool parallel = false;
};

struct EstimateArgs {
    std::string wavelengths, phases;
};

struct SimulateArgs {
    std::string wavelengths, r0, sigma2, out_file;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool parallel = false;
};

struct BoundsArgs {
    std::string wavelengths, sigma2;
    std::string inradius_form = "squared";
};

int do_optimize(const OptimizeArgs& a, const std::string& format, std::ostream& out) {
    SearchConfig cfg;
    cfg.n = a.n;
    cfg.lambda_min = Rational::parse(a.lambda_min);
    cfg.lambda_max = Rational::parse(a.lambda_max);
    cfg.r_max = Rational::parse(a.rmax);
    cfg.gamma = a.gamma;
    cfg.kappa = a.kappa;
    if (a.time_limit_s) cfg.time_limit = std::chrono::duration<double>(*a.time_limit_s);
    cfg.workers = worker_count(a.parallel);
    cfg.validate();

    const SearchResult r = optimize(cfg);
    std::vector<std::string> lambdas;
    if (r.wavelengths) {
        for (const auto& l : r.wavelengths->lambdas()) lambdas.push_back(l.to_string());
    }

    if (format == "json") {
        json j;
        j["wavelengths"] = lambdas;
        j["p"] = int_array(r.p);
        j["q"] = int_array(r.q);
        j["objective"] = r.feasible ? json(r.objective) : json(nullptr);
        j["gamma"] = r.gamma;
        j["complete"] = r.complete;
        j["feasible"] = r.feasible;
        j["nodes_visited"] = r.nodes_visited;
        out << j.dump(2) << '\n';
    } else if (format == "csv") {
        out << "wavelengths,p,q,objective,gamma,complete,feasible,nodes_visited\n";
        std::string ws;
        for (std::size_t i = 0; i < lambdas.size(); ++i) ws += (i ? " " : "") + lambdas[i];
        out << ws << ',' << joined(r.p, " ") << ',' << joined(r.q, " ") << ','
            << (r.feasible ? fmt(r.objective) : "") << ',' << fmt(r.gamma) << ','
            << (r.complete ? "true" : "false") << ',' << (r.feasible ? "true" : "false") << ','
            << r.nodes_visited << '\n';
    } else {
        if (r.feasible) {
            out << "wavelengths: " << r.wavelengths->to_string() << '\n';
            out << "p: " << joined(r.p, " ") << '\n';
            out << "q: " << joined(r.q, " ") << '\n';
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f", r.objective);
            out << "objective: " << buf << " (" << fmt(r.objective) << ")\n";
        } else {
            out << "no feasible solution\n";
        }
        out << "gamma: " << fmt(r.gamma) << '\n';
        out << "complete: " << (r.complete ? "true" : "false") << '\n';
        out << "nodes_visited: " << r.nodes_visited << '\n';
        out << "elapsed_s: " << fmt(r.elapsed.count()) << '\n';
    }
    return r.feasible && r.complete ? ok : no_solution;
}

int do_estimate(const EstimateArgs& a, const std::string& format, std::ostream& out) {
    const WavelengthSet ws = parse_wavelengths(a.wavelengths);
    std::vector<double> y;
    for (auto tok : split(a.phases, ',')) y.push_back(parse_real(tok));
    if (y.size() != ws.size()) throw std::invalid_argument("need one phase per wavelength");
    const auto ctx = build_context(ws);
    const RangeEstimate e = estimate_range(y, ctx);
    if (format == "json") {
        json j;
        j["r_hat"] = e.r_hat;
        j["zeta_hat"] = big_array(e.zeta_hat);
        j["residual"] = e.residual;
        j["period"] = ws.lcm().to_string();
        out << j.dump(2) << '\n';
    } else if (format == "csv") {
        out << "r_hat,zeta_hat,residual,period\n"
            << fmt(e.r_hat) << ',' << joined(e.zeta_hat, " ") << ',' << fmt(e.residual) << ','
            << ws.lcm().to_string() << '\n';
    } else {
        out << "r_hat: " << fmt(e.r_hat) << '\n';
        out << "zeta_hat: " << joined(e.zeta_hat, " ") << '\n';
        out << "residual: " << fmt(e.residual) << '\n';
        out << "period: " << ws.lcm().to_string() << '\n';
    }
    return ok;
}

void write_sweep(const std::vector<SweepRow>& rows, const std::string& format, std::ostream& out) {
    if (format == "json") {
        json a = json::array();
        for (const auto& r : rows) {
            a.push_back({{"sigma_sq", r.sigma_sq},
                         {"sample_mse", r.sample_mse},
                         {"predicted_mse", r.predicted_mse},
                         {"correct_rate", r.correct_rate},
                         {"p_upper", r.p_upper},
                         {"trials", r.trials}});
        }
        out << a.dump(2) << '\n';
        return;
    }
    out << "sigma_sq,sample_mse,predicted_mse,correct_rate,p_upper,trials\n";
    for (const auto& r : rows) {
        out << fmt(r.sigma_sq) << ',' << fmt(r.sample_mse) << ',' << fmt(r.predicted_mse) << ','
            << fmt(r.correct_rate) << ',' << fmt(r.p_upper) << ',' << r.trials << '\n';
    }
}

int do_simulate(const SimulateArgs& a, const std::string& format, std::ostream& out) {
    const WavelengthSet ws = parse_wavelengths(a.wavelengths);
    SimConfig cfg;
    cfg.wavelengths = ws.lambdas();
    cfg.r0 = parse_range(a.r0);
    cfg.sigma_sq_grid = parse_grid(a.sigma2);
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.workers = worker_count(a.parallel);
    if (cfg.trials < 1) throw std::invalid_argument("--trials must be at least 1");
    const auto rows = run_sweep(cfg, build_context(ws));
    if (!a.out_file.empty()) {
        std::ofstream f(a.out_file, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + a.out_file);
        write_sweep(rows, format, f);
        if (!f) throw std::runtime_error("write to " + a.out_file + " failed");
    } else {
        write_sweep(rows, format, out);
    }
    return ok;
}

int do_bounds(const BoundsArgs& a, const std::string& format, std::ostream& out) {
    const WavelengthSet ws = parse_wavelengths(a.wavelengths);
    const auto grid = parse_grid(a.sigma2);
    const InradiusForm form = a.inradius_form == "printed" ? InradiusForm::as_printed : InradiusForm::squared;
    const auto ctx = build_context(ws);
    std::vector<ErrorPrediction> rows;
    for (double s2 : grid) rows.push_back(predict_errors(ctx, s2, form));
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"sigma_sq", r.sigma_sq},
                           {"predicted_mse", r.mse_correct},
                           {"p_upper", r.p_correct_upper},
                           {"p_lower", r.p_correct_lower}});
        }
        out << arr.dump(2) << '\n';
    } else {
        out << "sigma_sq,predicted_mse,p_upper,p_lower\n";
        for (const auto& r : rows) {
            out << fmt(r.sigma_sq) << ',' << fmt(r.mse_correct) << ',' << fmt(r.p_correct_upper) << ','
                << fmt(r.p_correct_lower) << '\n';
        }
    }
    return ok;
}

}  // namespace

WavelengthSet parse_wavelengths(std::string_view text) {
    std::vector<Rational> lambdas;
    for (auto tok : split(text, ',')) {
        if (tok.empty()) throw std::invalid_argument("empty wavelength in '" + std::string(text) + "'");
        lambdas.push_back(Rational::parse(tok));
    }
    return WavelengthSet(std::move(lambdas));
}

double parse_range(std::string_view text) {
    std::string_view s = trim(text);
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        s.remove_suffix(2);
        s = trim(s);
        if (!s.empty() && s.back() == '*') s.remove_suffix(1);
        s = trim(s);
        const double factor = s.empty() ? 1.0 : parse_real(s);
        return factor * std::numbers::pi;
    }
    return parse_real(s);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wavelength selection and least-squares range estimation"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();

    OptimizeArgs oa;
    auto* opt = app.add_subcommand("optimize", "Select wavelengths minimizing the L2 objective");
    opt->add_option("--n", oa.n, "Number of wavelengths")->required()->check(CLI::Range(2, 64));
    opt->add_option("--lambda-min", oa.lambda_min, "Smallest allowed wavelength")->required();
    opt->add_option("--lambda-max", oa.lambda_max, "Largest allowed wavelength")->required();
    opt->add_option("--rmax", oa.rmax, "Required identifiable range")->required();
    opt->add_option("--gamma", oa.gamma, "Objective weight (default N^2 rmax^2 / (lmax^2 lmin^2))");
    opt->add_option("--kappa", oa.kappa, "Cap on every p_n")->check(CLI::PositiveNumber);
    opt->add_option("--time-limit-s", oa.time_limit_s, "Stop after this many seconds")->check(CLI::PositiveNumber);
    opt->add_flag("--parallel", oa.parallel, "Split the search over threads");

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate", "Least-squares range from wrapped phases");
    est->add_option("--wavelengths", ea.wavelengths, "Comma-separated wavelengths")->required();
    est->add_option("--phases", ea.phases, "Comma-separated phases in cycles, each in [-1/2, 1/2)")->required();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo sweep over a noise grid (CSV)");
    sim->add_option("--wavelengths", sa.wavelengths, "Comma-separated wavelengths")->required();
    sim->add_option("--r0", sa.r0, "True range, e.g. 18.85 or 6pi")->required();
    sim->add_option("--sigma2", sa.sigma2, "lo:hi:log,count or a comma-separated list")->required();
    sim->add_option("--trials", sa.trials, "Trials per grid point")->required();
    sim->add_option("--seed", sa.seed, "Random seed")->required();
    sim->add_option("--out", sa.out_file, "Write to this file instead of stdout");
    sim->add_flag("--parallel", sa.parallel, "Run trials on several threads");

    BoundsArgs ba;
    auto* bnd = app.add_subcommand("bounds", "Predicted MSE and bounds on the correct-unwrap probability");
    bnd->add_option("--wavelengths", ba.wavelengths, "Comma-separated wavelengths")->required();
    bnd->add_option("--sigma2", ba.sigma2, "lo:hi:log,count or a comma-separated list")->required();
    bnd->add_option("--inradius-form", ba.inradius_form, "Lower bound argument rho^2/s2 or rho/s2")
        ->check(CLI::IsMember({"squared", "printed"}))
        ->capture_default_str();

    auto* self = app.add_subcommand("selftest", "Check the library against brute-force references");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (opt->parsed()) return do_optimize(oa, format, out);
        if (est->parsed()) return do_estimate(ea, format, out);
        if (sim->parsed()) return do_simulate(sa, format, out);
        if (bnd->parsed()) return do_bounds(ba, format, out);
        if (self->parsed()) return run_selftest(out) ? ok : selftest_failed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    return usage_error;
}

}  // namespace wavesel::cli
