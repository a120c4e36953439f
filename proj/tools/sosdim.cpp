// sosdim command-line front end.
//
// Exit codes: 0 success, 2 bad input (arguments, CSV, lags, q, reps), 3
// numerical failure (near-singular covariance), 1 anything else.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sosdim/csv.hpp"
#include "sosdim/report.hpp"
#include "sosdim/sosdim.hpp"

namespace {

using namespace sosdim;

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = default_thread_count();
    std::string format = "json";
    std::string out;
    double tol = JointDiagOptions{}.tol;
    int max_sweeps = JointDiagOptions{}.max_sweeps;

    JointDiagOptions jd() const { return {tol, max_sweeps}; }
};

struct DataArgs {
    std::string input;
    bool header = false;
    std::vector<std::size_t> lags;
    std::string preset;
    std::string method;
    std::string test_kind = "asymptotic";
    std::size_t replicates = 200;
    double alpha = 0.05;
    std::string strategy = "divide_and_conquer";
    std::size_t q = 0;
};

struct SimArgs {
    std::string setting;
    std::vector<std::size_t> ns;
    std::size_t reps = 100;
    std::vector<std::string> estimators{"amuse", "sobi6", "sobi12"};
    std::string test_kind = "asymptotic";
    std::size_t replicates = 200;
    double alpha = 0.05;
    std::string strategy = "divide_and_conquer";
    std::optional<std::size_t> q;
};

std::uint64_t env_seed() {
    const char* s = std::getenv("SOSDIM_SEED");
    if (s == nullptr || *s == '\0') return 0;
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw InvalidInput(std::string("SOSDIM_SEED is not an unsigned integer: '") + s + "'");
    }
}

const std::map<std::string, Strategy> kStrategies{{"forward", Strategy::kForward},
                                                  {"backward", Strategy::kBackward},
                                                  {"divide_and_conquer", Strategy::kDivideAndConquer},
                                                  {"dnc", Strategy::kDivideAndConquer}};

// Resolves --lags / --lag-preset / --method into a lag set and a method.
std::pair<LagSet, Method> resolve_estimator(const DataArgs& a) {
    std::optional<Method> method;
    if (a.method == "amuse") method = Method::kAmuse;
    if (a.method == "sobi") method = Method::kSobi;

    if (!a.lags.empty()) {
        LagSet lags(a.lags);
        return {lags, method.value_or(lags.size() == 1 ? Method::kAmuse : Method::kSobi)};
    }
    if (!a.preset.empty()) {
        const auto e = Estimator::from_name(a.preset);
        if (method && *method != e.method) {
            throw InvalidInput("--method " + a.method + " contradicts --lag-preset " + a.preset);
        }
        return {e.lags, e.method};
    }
    if (method == Method::kAmuse) return {LagSet::amuse(), Method::kAmuse};
    return {LagSet::sobi6(), Method::kSobi};
}

std::ostream& open_output(const Common& c, std::ofstream& file) {
    if (c.out.empty() || c.out == "-") return std::cout;
    file.open(c.out);
    if (!file) throw InvalidInput("cannot write '" + c.out + "'");
    return file;
}

MultiSeries load(const DataArgs& a) {
    if (a.input == "-") return read_csv(std::cin, a.header);
    return read_csv_file(a.input, a.header);
}

std::string join_lags(const LagSet& lags) {
    std::ostringstream s;
    for (std::size_t i = 0; i < lags.size(); ++i) s << (i ? "," : "") << lags[i];
    return s.str();
}

int cmd_estimate(const DataArgs& a, const Common& c) {
    const auto x = load(a);
    const auto [lags, method] = resolve_estimator(a);
    EstimateOptions opts;
    opts.kind = a.test_kind == "bootstrap" ? TestKind::kBootstrap : TestKind::kAsymptotic;
    opts.bootstrap.replicates = a.replicates;
    opts.bootstrap.seed = c.seed;
    opts.bootstrap.threads = c.threads;
    opts.jd = c.jd();
    const auto est = estimate_dimension(x, lags, a.alpha, kStrategies.at(a.strategy), method, opts);
    const auto j = to_json(est, method, lags, opts.kind, x.length(), x.dim());

    std::ofstream file;
    auto& out = open_output(c, file);
    if (c.format == "json") {
        out << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        out << "q,stat,df,p_value,converged\n";
        for (const auto& t : est.trace) {
            out << t.q << ',' << t.stat << ',' << t.df << ',' << t.p_value << ',' << t.converged << '\n';
        }
    } else {
        out << "d_hat = " << est.d_hat << "  (" << to_string(method) << ", lags " << join_lags(lags) << ", "
            << to_string(est.strategy) << ", " << to_string(opts.kind) << ", alpha " << a.alpha << ")\n";
        for (const auto& t : est.trace) {
            out << "  q=" << std::setw(3) << t.q << "  stat=" << std::setw(12) << t.stat << "  df=" << std::setw(5)
                << t.df << "  p=" << t.p_value << (t.converged ? "" : "  (not converged)") << '\n';
        }
        if (!est.monotone) out << "  warning: p-values not monotone in q\n";
    }
    return 0;
}

int cmd_test(const DataArgs& a, const Common& c) {
    const auto x = load(a);
    const auto [lags, method] = resolve_estimator(a);
    detail::check_q(a.q, x.dim());
    TestResult t;
    if (a.test_kind == "bootstrap") {
        BootstrapOptions b;
        b.replicates = a.replicates;
        b.seed = c.seed;
        b.threads = c.threads;
        b.jd = c.jd();
        t = bootstrap_noise_test(x, lags, a.q, method, b);
    } else {
        t = noise_test(x, lags, a.q, method, c.jd());
    }
    auto j = to_json(t, x.dim());
    if (t.kind == TestKind::kBootstrap) {
        j["bootstrap_replicates"] = a.replicates;
        validate_report(j, schema::kTestReport);
    }

    std::ofstream file;
    auto& out = open_output(c, file);
    if (c.format == "json") {
        out << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        out << "q,r,m_hat,stat,df,p_value,converged\n"
            << t.q << ',' << t.r << ',' << t.m_hat << ',' << t.scaled_stat << ',' << t.df << ',' << t.p_value
            << ',' << t.converged << '\n';
    } else {
        out << "H0: last " << t.r << " components are white noise (q = " << t.q << ")\n"
            << "  " << to_string(method) << ", lags " << join_lags(lags) << ", " << to_string(t.kind) << '\n'
            << "  m_hat = " << t.m_hat << ", stat = " << t.scaled_stat << ", df = " << t.df
            << ", p = " << t.p_value << (t.converged ? "" : "  (not converged)") << '\n';
    }
    return 0;
}

template <typename Table>
void print_timings(const Table& t) {
    std::map<std::string, double> seconds;
    for (const auto& c : t.cells) seconds[c.estimator + " " + std::string(to_string(c.kind))] += c.seconds;
    std::cerr << "wall-clock per estimator (seconds, summed over replicates and n):\n";
    for (const auto& [name, s] : seconds) std::cerr << "  " << std::left << std::setw(24) << name << s << '\n';
}

int cmd_simulate(const SimArgs& a, const Common& c) {
    const auto setting = make_setting(a.setting);
    std::vector<Estimator> estimators;
    for (const auto& e : a.estimators) estimators.push_back(Estimator::from_name(e));
    std::vector<TestKind> kinds;
    if (a.test_kind != "bootstrap") kinds.push_back(TestKind::kAsymptotic);
    if (a.test_kind != "asymptotic") kinds.push_back(TestKind::kBootstrap);

    HarnessOptions opts;
    opts.alpha = a.alpha;
    opts.reps = a.reps;
    opts.seed = c.seed;
    opts.threads = c.threads;
    opts.bootstrap_replicates = a.replicates;
    opts.jd = c.jd();

    std::ofstream file;
    auto& out = open_output(c, file);
    auto emit = [&](const auto& table) {
        if (c.format == "json") {
            out << to_json(table).dump(2) << '\n';
        } else {
            write_csv(out, table);
        }
        print_timings(table);
    };
    if (a.q) {
        emit(rejection_table(setting, a.ns, estimators, *a.q, kinds, opts));
    } else {
        emit(dimension_table(setting, a.ns, estimators, kStrategies.at(a.strategy), kinds, opts));
    }
    return 0;
}

int cmd_generate(const std::string& setting_name, std::size_t n, const Common& c) {
    const auto x = simulate(make_setting(setting_name), n, c.seed).first;
    std::ofstream file;
    write_csv(open_output(c, file), x);
    return 0;
}

void add_common(CLI::App* sub, Common& c, bool with_format) {
    sub->add_option("--seed", c.seed, "master seed (default: $SOSDIM_SEED or 0)");
    sub->add_option("--threads", c.threads, "worker threads for replicate loops")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--tol", c.tol, "joint diagonalization rotation-angle tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-sweeps", c.max_sweeps, "joint diagonalization sweep limit")->check(CLI::PositiveNumber);
    if (with_format) {
        sub->add_option("--format", c.format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
    }
}

void add_data(CLI::App* sub, DataArgs& a) {
    sub->add_option("--input,-i", a.input, "CSV file, one row per time point ('-' for stdin)")->required();
    sub->add_flag("--header", a.header, "first CSV line is a header");
    auto* lags = sub->add_option("--lags", a.lags, "explicit lags, e.g. 1,2,3")->delimiter(',');
    auto* preset = sub->add_option("--lag-preset", a.preset, "amuse (lag 1), sobi6 (1..6) or sobi12 (1..12)")
                       ->check(CLI::IsMember({"amuse", "sobi6", "sobi12"}, CLI::ignore_case));
    lags->excludes(preset);
    sub->add_option("--method", a.method, "amuse or sobi")->check(CLI::IsMember({"amuse", "sobi"}));
    sub->add_option("--test-kind", a.test_kind, "asymptotic or bootstrap")
        ->check(CLI::IsMember({"asymptotic", "bootstrap"}));
    sub->add_option("--B", a.replicates, "bootstrap replicates")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Signal dimension estimation for second-order source separation"};
    app.require_subcommand(1);

    Common common;
    DataArgs data;
    SimArgs sim;
    std::string gen_setting;
    std::size_t gen_n = 1000;

    try {
        common.seed = env_seed();
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }

    auto* estimate = app.add_subcommand("estimate", "estimate the signal dimension of a CSV series");
    add_data(estimate, data);
    add_common(estimate, common, true);
    estimate->add_option("--alpha", data.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
    estimate->add_option("--strategy", data.strategy, "forward, backward or divide_and_conquer (dnc)")
        ->check(CLI::IsMember({"forward", "backward", "divide_and_conquer", "dnc"}));

    auto* test = app.add_subcommand("test", "test whether the last p - q components are white noise");
    add_data(test, data);
    add_common(test, common, true);
    test->add_option("--q", data.q, "number of signal components under the null")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo rejection or dimension tables");
    add_common(simulate_cmd, common, true);
    simulate_cmd->add_option("--setting", sim.setting, "H1, H2, H3, D1, D2, D3 or sound")->required();
    simulate_cmd->add_option("--n", sim.ns, "sample sizes, e.g. 1000,2000")->delimiter(',')->required();
    simulate_cmd->add_option("--reps", sim.reps, "replicates per cell");
    simulate_cmd->add_option("--method", sim.estimators, "estimators: amuse, sobi6, sobi12")->delimiter(',');
    simulate_cmd->add_option("--q", sim.q, "tabulate rejection frequencies of H0q instead of dimension estimates");
    simulate_cmd->add_option("--test-kind", sim.test_kind, "asymptotic, bootstrap or both")
        ->check(CLI::IsMember({"asymptotic", "bootstrap", "both"}));
    simulate_cmd->add_option("--B", sim.replicates, "bootstrap replicates")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--alpha", sim.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
    simulate_cmd->add_option("--strategy", sim.strategy, "forward, backward or divide_and_conquer (dnc)")
        ->check(CLI::IsMember({"forward", "backward", "divide_and_conquer", "dnc"}));

    auto* generate_cmd = app.add_subcommand("generate", "write one simulated sample of a setting as CSV");
    add_common(generate_cmd, common, false);
    generate_cmd->add_option("--setting", gen_setting, "H1, H2, H3, D1, D2, D3 or sound")->required();
    generate_cmd->add_option("--n", gen_n, "sample size")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*estimate) return cmd_estimate(data, common);
        if (*test) return cmd_test(data, common);
        if (*simulate_cmd) return cmd_simulate(sim, common);
        return cmd_generate(gen_setting, gen_n, common);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NearSingularCovariance& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
