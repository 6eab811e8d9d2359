#include "commands.hpp"

#include "fceval/accuracy_tests.hpp"
#include "fceval/asymptotics.hpp"
#include "fceval/dgp.hpp"
#include "fceval/errors.hpp"
#include "fceval/harness.hpp"
#include "fceval/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace fceval::cli {

namespace {

using nlohmann::json;

// Raised for flag combinations CLI11 cannot check by itself.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr long min_evaluation_rows = 10;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write '" + path + "'");
    f << content;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateOptions {
    std::string path;
    std::string tests = "GW,DM,SUB";
    double alpha = 0.05;
    int K = 2;
    std::string lags = "textbook";
    bool json = false;
    std::string out;
};

LagRule parse_lag_flag(const std::string& text) {
    if (text == "textbook") return LagRule::textbook();
    const auto v = parse_real(text);
    if (!v || *v < 0 || std::floor(*v) != *v) throw UsageError("--lags expects 'textbook' or a non-negative integer");
    return LagRule::fixed(static_cast<int>(*v));
}

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<TestSpec> specs;
    for (const auto& item : split_list(opt.tests)) {
        TestSpec spec;
        try {
            spec = TestSpec::parse(item);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        if (spec.kind == TestSpec::Kind::sub && item.find('(') == std::string::npos) spec.K = opt.K;
        specs.push_back(spec);
    }
    if (specs.empty()) throw UsageError("--tests names no test");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    const LagRule lag_rule = parse_lag_flag(opt.lags);

    const EvaluationInput input = load_evaluation_csv(opt.path);
    const long rows = static_cast<long>(input.y.size());
    if (rows < min_evaluation_rows) {
        throw InsufficientDataError("evaluation needs at least " + std::to_string(min_evaluation_rows) +
                                    " rows, file has " + std::to_string(rows));
    }
    const LossDiffSeries dl = loss_diff_squared_error(input.y, input.f1, input.f2);

    json report;
    report["input"] = opt.path;
    report["n"] = rows;
    report["alpha"] = opt.alpha;
    report["mean_loss_differential"] = dl.values().mean();
    report["results"] = json::array();
    bool any_degenerate = false;
    for (const auto& spec : specs) {
        json entry;
        entry["test"] = spec.label();
        try {
            TestResult r;
            switch (spec.kind) {
                case TestSpec::Kind::gw: r = gw_test(dl); break;
                case TestSpec::Kind::dm: r = dm_nw_test(dl, lag_rule); break;
                case TestSpec::Kind::sub: r = subsample_t_test(dl, spec.K); break;
            }
            entry["status"] = "ok";
            entry["statistic"] = r.statistic;
            entry["reference"] = r.reference.describe();
            entry["df"] = r.reference.kind == Reference::Kind::student_t ? json(r.reference.df) : json(nullptr);
            entry["p_value"] = r.p_value;
            entry["reject"] = r.rejects_at(opt.alpha);
            entry["nw_lags"] = r.nuisance.nw_lags ? json(*r.nuisance.nw_lags) : json(nullptr);
            entry["K"] = r.nuisance.blocks ? json(*r.nuisance.blocks) : json(nullptr);
        } catch (const DegenerateStatisticError& e) {
            any_degenerate = true;
            entry["status"] = "degenerate";
            entry["message"] = e.what();
        } catch (const InsufficientDataError& e) {
            entry["status"] = "insufficient_data";
            entry["message"] = e.what();
        }
        report["results"].push_back(entry);
    }

    std::ostringstream text;
    if (opt.json) {
        text << report.dump(2) << '\n';
    } else {
        text << "forecast comparison: " << opt.path << " (n = " << rows << ", alpha = " << opt.alpha << ")\n";
        text << "mean loss differential (f1 - f2): " << std::setprecision(6) << dl.values().mean() << "\n\n";
        text << std::left << std::setw(8) << "test" << std::right << std::setw(12) << "statistic" << std::setw(10)
             << "ref" << std::setw(12) << "p-value" << std::setw(9) << "reject" << "  nuisance\n";
        for (const auto& e : report["results"]) {
            text << std::left << std::setw(8) << e["test"].get<std::string>() << std::right;
            if (e["status"] != "ok") {
                text << "  " << e["status"].get<std::string>() << ": " << e["message"].get<std::string>() << '\n';
                continue;
            }
            text << std::setw(12) << std::fixed << std::setprecision(4) << e["statistic"].get<double>()
                 << std::setw(10) << e["reference"].get<std::string>() << std::setw(12) << std::setprecision(4)
                 << e["p_value"].get<double>() << std::setw(9) << (e["reject"].get<bool>() ? "yes" : "no") << "  ";
            if (!e["nw_lags"].is_null()) text << "lags=" << e["nw_lags"].get<int>();
            if (!e["K"].is_null()) text << "K=" << e["K"].get<int>();
            text << '\n';
            text.unsetf(std::ios::fixed);
        }
    }
    if (opt.out.empty()) {
        out << text.str();
    } else {
        write_file(opt.out, text.str());
    }
    if (any_degenerate) {
        err << "no testable difference: at least one statistic is degenerate\n";
        return degenerate;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// table1
// ---------------------------------------------------------------------------

struct Table1Options {
    std::string config;
    std::vector<std::string> overrides;  // key=value pairs from flags, in flag order
    bool json = false;
    std::string out;
};

void print_table1(std::ostream& os, const std::vector<Table1Cell>& cells, const Table1Grid& grid) {
    std::map<std::tuple<double, long, long>, const RejectionSummary*> index;
    for (const auto& c : cells) index[{c.sigma, c.m, c.n}] = &c.summary;
    const auto& tests = cells.front().summary.tests;

    os << "Rejection frequency under the null (R = " << cells.front().summary.config.replications
       << ", alpha = " << cells.front().summary.config.alpha << ")\n";
    for (const double sigma : grid.sigmas) {
        os << "\nsigma = " << sigma << '\n' << std::setw(6) << "m";
        for (const long n : grid.ns) {
            std::ostringstream head;
            head << "n=" << n;
            os << " | " << std::left << std::setw(static_cast<int>(8 * tests.size())) << head.str() << std::right;
        }
        os << '\n' << std::setw(6) << "";
        for (std::size_t k = 0; k < grid.ns.size(); ++k) {
            os << " | ";
            for (const auto& t : tests) os << std::left << std::setw(8) << t.test.label() << std::right;
        }
        os << '\n';
        for (const long m : grid.ms) {
            os << std::setw(6) << m;
            for (const long n : grid.ns) {
                os << " | ";
                for (const auto& t : index.at({sigma, m, n})->tests) {
                    std::ostringstream v;
                    v << std::fixed << std::setprecision(4) << t.rejection_rate;
                    os << std::left << std::setw(8) << v.str() << std::right;
                }
            }
            os << '\n';
        }
    }
}

int cmd_table1(const Table1Options& opt, std::ostream& out) {
    RunConfig config;
    try {
        if (!opt.config.empty()) config = load_run_config(opt.config);
        for (const auto& kv : opt.overrides) {
            const auto eq = kv.find('=');
            apply_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (config.base.tests.empty()) throw UsageError("no tests requested");
        for (const long m : config.grid.ms) {
            for (const long n : config.grid.ns) {
                if (n <= m) throw UsageError("every n must exceed every m");
            }
        }
        for (const auto& t : config.base.tests) {
            if (t.kind == TestSpec::Kind::sub && t.K < 2) throw UsageError("SUB needs K >= 2");
            for (const long n : config.grid.ns) {
                if (t.kind == TestSpec::Kind::sub && n < 2L * t.K) throw UsageError("SUB(K) needs n >= 2K");
            }
        }
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
    if (!config.seed_given) throw UsageError("--seed is required (or 'seed' in the configuration file)");

    const auto cells = reproduce_table1(config.grid, config.base);
    const auto rows = table1_rows(cells);
    std::ostringstream csv;
    write_table1_csv(csv, rows);
    if (!opt.out.empty()) write_file(opt.out, csv.str());

    if (opt.json) {
        json j;
        j["replications"] = config.base.replications;
        j["alpha"] = config.base.alpha;
        j["seed"] = config.base.master_seed;
        j["cells"] = json::array();
        for (const auto& r : rows) {
            j["cells"].push_back({{"sigma", r.sigma},
                                  {"m", r.m},
                                  {"n", r.n},
                                  {"test", r.test},
                                  {"rejection_rate", r.rejection_rate},
                                  {"mc_se", r.mc_se},
                                  {"degenerate_count", r.degenerate_count}});
        }
        out << j.dump(2) << '\n';
    } else {
        print_table1(out, cells, config.grid);
    }
    long degenerate_total = 0;
    for (const auto& r : rows) degenerate_total += r.degenerate_count;
    return degenerate_total > 0 ? degenerate : ok;
}

// ---------------------------------------------------------------------------
// table2
// ---------------------------------------------------------------------------

struct Table2Options {
    std::string lambdas;
    long paths = 10000;
    long grid = 20000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string evaluand = "left";
    std::string sign = "plus";
    bool json = false;
    std::string out;
};

int cmd_table2(const Table2Options& opt, std::ostream& out) {
    std::vector<double> lambdas;
    for (const auto& item : split_list(opt.lambdas)) {
        const auto v = parse_real(item);
        if (!v || !(*v > 0.0 && *v < 1.0)) throw UsageError("--lambda values must lie in (0, 1), got '" + item + "'");
        lambdas.push_back(*v);
    }
    if (lambdas.empty()) throw UsageError("--lambda needs at least one value");
    if (opt.grid < 100) throw UsageError("--grid must be >= 100");
    if (opt.paths < 1) throw UsageError("--paths must be >= 1");

    LimitOptions lim;
    lim.workers = opt.workers;
    lim.evaluand = opt.evaluand == "right" ? Evaluand::right : Evaluand::left;
    lim.sign = opt.sign == "minus" ? SecondTermSign::minus : SecondTermSign::plus;

    std::vector<Table2Row> rows;
    for (const double lambda : lambdas) rows.push_back(table2_row(lambda, opt.grid, opt.paths, opt.seed, lim));

    std::ostringstream csv;
    csv << "lambda,q95_abs,size_at_196\n";
    for (const auto& r : rows) {
        csv << format_real(r.lambda) << ',' << format_real(r.q95_abs) << ',' << format_real(r.size_at_196) << '\n';
    }
    if (!opt.out.empty()) write_file(opt.out, csv.str());

    if (opt.json) {
        json j;
        j["paths"] = opt.paths;
        j["grid_steps"] = opt.grid;
        j["seed"] = opt.seed;
        j["evaluand"] = opt.evaluand;
        j["sign"] = opt.sign;
        j["rows"] = json::array();
        for (const auto& r : rows) {
            j["rows"].push_back({{"lambda", r.lambda}, {"q95_abs", r.q95_abs}, {"size_at_196", r.size_at_196}});
        }
        out << j.dump(2) << '\n';
    } else {
        out << "Limit of |J_T| under expanding-window estimation (paths = " << opt.paths << ", grid = " << opt.grid
            << ", evaluand = " << opt.evaluand << ", sign = " << opt.sign << ")\n";
        out << std::setw(8) << "lambda" << std::setw(14) << "95% quantile" << std::setw(16) << "size at 1.96\n";
        for (const auto& r : rows) {
            out << std::fixed << std::setw(8) << std::setprecision(2) << r.lambda << std::setw(14)
                << std::setprecision(3) << r.q95_abs << std::setw(15) << std::setprecision(3) << r.size_at_196 << '\n';
        }
        out.unsetf(std::ios::fixed);
    }
    return ok;
}

// ---------------------------------------------------------------------------
// vm
// ---------------------------------------------------------------------------

struct VmOptions {
    long m = 1;
    std::optional<double> sigma;
    std::optional<double> kappa1;
    std::optional<double> kappa2;
    bool json = false;
    std::string out;
};

constexpr long max_listed_lags = 60;

int cmd_vm(const VmOptions& opt, std::ostream& out) {
    if (opt.m < 1) throw UsageError("--m must be >= 1");
    InnovationMoments k;
    std::string source;
    if (opt.sigma) {
        if (opt.kappa1 || opt.kappa2) throw UsageError("give either --sigma or --kappa1/--kappa2, not both");
        if (!(*opt.sigma > 0.0)) throw UsageError("--sigma must be positive");
        k = lognormal_neg_moments(*opt.sigma);
        source = "negated standardized lognormal, sigma = " + format_real(*opt.sigma);
    } else {
        if (!opt.kappa1 || !opt.kappa2) throw UsageError("--kappa1 and --kappa2 are both required without --sigma");
        k = {*opt.kappa1, *opt.kappa2};
        source = "explicit moments";
    }
    if (!(k.kappa2 >= 1.0)) throw UsageError("kappa2 must be >= 1");

    const double m = static_cast<double>(opt.m);
    const double c = 1.0 / std::sqrt(m);
    const double v = vm(m, k.kappa1, k.kappa2);
    const double lrv = long_run_variance_analytic(opt.m, k.kappa1, k.kappa2, c);
    const long listed = std::min(opt.m, max_listed_lags);

    std::ostringstream text;
    if (opt.json) {
        json j;
        j["m"] = opt.m;
        j["kappa1"] = k.kappa1;
        j["kappa2"] = k.kappa2;
        j["c"] = c;
        j["V_m"] = v;
        j["Gamma_inf"] = lrv;
        j["gamma"] = json::array();
        for (long d = 0; d <= listed; ++d) j["gamma"].push_back(gamma_d(opt.m, d, k.kappa1, k.kappa2, c));
        text << j.dump(2) << '\n';
    } else {
        text << std::setprecision(10);
        text << "moments: " << source << "\n  kappa1 = " << k.kappa1 << "\n  kappa2 = " << k.kappa2 << '\n';
        text << "window m = " << opt.m << ", intercept c = m^-1/2 = " << c << "\n\n";
        text << "V_m       = " << v << '\n';
        text << "Gamma_inf = " << lrv << '\n';
        for (long d = 0; d <= listed; ++d) {
            text << "gamma_" << d << std::string(d < 10 ? 4 : 3, ' ') << "= " << gamma_d(opt.m, d, k.kappa1, k.kappa2, c)
                 << '\n';
        }
        if (listed < opt.m) text << "(gamma_d listed up to d = " << listed << "; gamma_d = 0 for d > m)\n";
        if (v > 1.0) {
            text << "note: V_m > 1, a nominal 5% GW test over-rejects (asymptotic size "
                 << std::erfc(1.959963984540054 / std::sqrt(2.0 * v)) << ")\n";
        } else if (v < 1.0) {
            text << "note: V_m < 1, a nominal 5% GW test under-rejects (asymptotic size "
                 << std::erfc(1.959963984540054 / std::sqrt(2.0 * v)) << ")\n";
        }
    }
    if (opt.out.empty()) {
        out << text.str();
    } else {
        write_file(opt.out, text.str());
    }
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equal predictive accuracy tests and their Monte Carlo laboratory", "fceval"};
    app.require_subcommand(1);

    EvaluateOptions ev;
    auto* evaluate = app.add_subcommand("evaluate", "Test equal accuracy of two forecasts in a y,f1,f2 CSV file");
    evaluate->add_option("path", ev.path, "CSV file with header y,f1,f2")->required();
    evaluate->add_option("--tests", ev.tests, "Comma-separated subset of GW, DM, SUB, SUB(K)");
    evaluate->add_option("--alpha", ev.alpha, "Nominal level");
    evaluate->add_option("--K", ev.K, "Block count for SUB");
    evaluate->add_option("--lags", ev.lags, "Newey-West lags: 'textbook' or an integer");
    evaluate->add_flag("--json", ev.json, "Emit the JSON report");
    evaluate->add_option("--out", ev.out, "Write the report to this file");

    Table1Options t1;
    std::string t1_sigma, t1_m, t1_n, t1_tests, t1_lags;
    std::optional<long> t1_reps;
    std::optional<std::uint64_t> t1_seed;
    std::optional<unsigned> t1_workers;
    std::optional<double> t1_alpha;
    auto* table1 = app.add_subcommand("table1", "Monte Carlo size of GW, DM and SUB in the rolling location model");
    table1->add_option("--config", t1.config, "key = value configuration file; flags override it");
    table1->add_option("--sigma", t1_sigma, "Lognormal shapes, comma separated");
    table1->add_option("--m", t1_m, "Rolling windows, comma separated");
    table1->add_option("--n", t1_n, "Evaluation lengths, comma separated");
    table1->add_option("--reps", t1_reps, "Replications per cell");
    table1->add_option("--seed", t1_seed, "Master seed (required)");
    table1->add_option("--workers", t1_workers, "Worker threads (0 = all cores)");
    table1->add_option("--tests", t1_tests, "Comma-separated subset of GW, DM, SUB, SUB(K)");
    table1->add_option("--alpha", t1_alpha, "Nominal level");
    table1->add_option("--lags", t1_lags, "Newey-West lags: 'textbook' or an integer");
    table1->add_flag("--json", t1.json, "Emit JSON instead of the console table");
    table1->add_option("--out", t1.out, "Write CSV (sigma,m,n,test,rejection_rate,mc_se,degenerate_count)");

    Table2Options t2;
    bool t2_seed_given = false;
    auto* table2 = app.add_subcommand("table2", "Quantiles of the expanding-window limit of |J_T|");
    table2->add_option("--lambda", t2.lambdas, "Comma-separated lambda values in (0, 1)")->required();
    table2->add_option("--paths", t2.paths, "Simulated paths per lambda");
    table2->add_option("--grid", t2.grid, "Grid steps per path");
    auto* seed_opt = table2->add_option("--seed", t2.seed, "Master seed (required)");
    table2->add_option("--workers", t2.workers, "Worker threads (0 = all cores)");
    table2->add_option("--evaluand", t2.evaluand, "Stochastic-integral evaluand: left (Ito) or right")
        ->check(CLI::IsMember({"left", "right"}));
    table2->add_option("--sign", t2.sign, "Sign of the dB-term: plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    table2->add_flag("--json", t2.json, "Emit JSON instead of the console table");
    table2->add_option("--out", t2.out, "Write CSV (lambda,q95_abs,size_at_196)");

    VmOptions vo;
    auto* vm_cmd = app.add_subcommand("vm", "Asymptotic variance of J_T and loss-differential autocovariances");
    vm_cmd->add_option("--m", vo.m, "Rolling window")->required();
    vm_cmd->add_option("--sigma", vo.sigma, "Lognormal shape (derives kappa1, kappa2)");
    vm_cmd->add_option("--kappa1", vo.kappa1, "Third moment of the innovations");
    vm_cmd->add_option("--kappa2", vo.kappa2, "Fourth moment of the innovations");
    vm_cmd->add_flag("--json", vo.json, "Emit JSON");
    vm_cmd->add_option("--out", vo.out, "Write the report to this file");

    try {
        std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
        std::reverse(rev.begin(), rev.end());
        app.parse(rev);
        t2_seed_given = seed_opt->count() > 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (evaluate->parsed()) return cmd_evaluate(ev, out, err);
        if (table1->parsed()) {
            if (!t1_sigma.empty()) t1.overrides.push_back("sigma=" + t1_sigma);
            if (!t1_m.empty()) t1.overrides.push_back("m=" + t1_m);
            if (!t1_n.empty()) t1.overrides.push_back("n=" + t1_n);
            if (t1_reps) t1.overrides.push_back("replications=" + std::to_string(*t1_reps));
            if (t1_seed) t1.overrides.push_back("seed=" + std::to_string(*t1_seed));
            if (t1_workers) t1.overrides.push_back("workers=" + std::to_string(*t1_workers));
            if (!t1_tests.empty()) t1.overrides.push_back("tests=" + t1_tests);
            if (t1_alpha) t1.overrides.push_back("alpha=" + format_real(*t1_alpha));
            if (!t1_lags.empty()) t1.overrides.push_back("lags=" + t1_lags);
            return cmd_table1(t1, out);
        }
        if (table2->parsed()) {
            if (!t2_seed_given) throw UsageError("--seed is required");
            return cmd_table2(t2, out);
        }
        if (vm_cmd->parsed()) return cmd_vm(vo, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const DegenerateStatisticError& e) {
        err << "numerical degeneracy: " << e.what() << '\n';
        return degenerate;
    } catch (const Error& e) {
        err << "data error: " << e.what() << '\n';
        return data_error;
    }
    return usage_error;
}

}  // namespace fceval::cli
