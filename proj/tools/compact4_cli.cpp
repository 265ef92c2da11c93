// compact4 command-line front end: solve a named problem on one mesh, or run
// truncation/accuracy/pointwise convergence studies, emitting csv or json.
#include <CLI11.hpp>
#include <json.hpp>

#include <compact4/compact4.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

std::string solution_csv(const compact4::DiscreteSolution& sol, double d4_norm) {
    std::ostringstream os;
    os << "x,u,p,d2,d3,d4\n";
    const compact4::Grid& g = sol.grid;
    for (int j = 0; j <= g.n(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        os << fmt17(g.x(j)) << ',' << fmt17(sol.u[k]) << ',' << fmt17(sol.p[k]) << ','
           << fmt17(sol.d2[k]) << ',' << fmt17(sol.d3[k]) << ',' << fmt17(sol.d4[k]) << '\n';
    }
    os << "# d4_norm_h=" << fmt17(d4_norm) << '\n';
    os << "# rcond=" << fmt17(sol.rcond) << '\n';
    return os.str();
}

json solution_json(const std::string& problem, const compact4::DiscreteSolution& sol,
                   double d4_norm) {
    json rows = json::array();
    const compact4::Grid& g = sol.grid;
    for (int j = 0; j <= g.n(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        rows.push_back({{"x", g.x(j)},
                        {"u", sol.u[k]},
                        {"p", sol.p[k]},
                        {"d2", sol.d2[k]},
                        {"d3", sol.d3[k]},
                        {"d4", sol.d4[k]}});
    }
    return {{"problem", problem},
            {"n", g.n()},
            {"rows", rows},
            {"summary", {{"d4_norm_h", d4_norm}, {"rcond", sol.rcond}}}};
}

std::string study_csv(const compact4::ConvergenceReport& report) {
    std::ostringstream os;
    os << "field,n,norm_h,rate_h,norm_sup,rate_sup\n";
    for (const compact4::Field f : report.fields) {
        for (std::size_t i = 0; i < report.ns.size(); ++i) {
            const compact4::ErrorRecord& r = report.at(f, report.ns[i]);
            os << compact4::field_name(f) << ',' << r.n << ',' << fmt17(r.norm_h) << ',';
            if (i > 0) {
                const compact4::ErrorRecord& prev = report.at(f, report.ns[i - 1]);
                if (const auto rt = compact4::rate(prev.norm_h, r.norm_h, prev.n, r.n))
                    os << fmt17(*rt);
            }
            os << ',' << fmt17(r.norm_sup) << ',';
            if (i > 0) {
                const compact4::ErrorRecord& prev = report.at(f, report.ns[i - 1]);
                if (const auto rt = compact4::rate(prev.norm_sup, r.norm_sup, prev.n, r.n))
                    os << fmt17(*rt);
            }
            os << '\n';
        }
    }
    return os.str();
}

json study_json(const std::string& problem, const std::string& kind,
                const compact4::ConvergenceReport& report) {
    json records = json::array();
    for (const compact4::Field f : report.fields) {
        for (std::size_t i = 0; i < report.ns.size(); ++i) {
            const compact4::ErrorRecord& r = report.at(f, report.ns[i]);
            json rec = {{"field", compact4::field_name(f)},
                        {"n", r.n},
                        {"norm_h", r.norm_h},
                        {"rate_h", nullptr},
                        {"norm_sup", r.norm_sup},
                        {"rate_sup", nullptr}};
            if (i > 0) {
                const compact4::ErrorRecord& prev = report.at(f, report.ns[i - 1]);
                if (const auto rt = compact4::rate(prev.norm_h, r.norm_h, prev.n, r.n))
                    rec["rate_h"] = *rt;
                if (const auto rt = compact4::rate(prev.norm_sup, r.norm_sup, prev.n, r.n))
                    rec["rate_sup"] = *rt;
            }
            records.push_back(rec);
        }
    }
    return {{"problem", problem}, {"kind", kind}, {"ns", report.ns}, {"records", records}};
}

std::string pointwise_csv(const compact4::PointwiseReport& pw) {
    std::ostringstream os;
    os << "x,field,slope\n";
    for (const auto& series : pw.series)
        for (std::size_t j = 0; j < pw.x.size(); ++j) {
            os << fmt17(pw.x[j]) << ',' << compact4::field_name(series.field) << ',';
            if (series.slope[j])
                os << fmt17(*series.slope[j]);
            else
                os << "exact";
            os << '\n';
        }
    return os.str();
}

json pointwise_json(const std::string& problem, const compact4::PointwiseReport& pw) {
    json rows = json::array();
    for (const auto& series : pw.series)
        for (std::size_t j = 0; j < pw.x.size(); ++j) {
            json row = {{"x", pw.x[j]},
                        {"field", compact4::field_name(series.field)},
                        {"slope", nullptr}};
            if (series.slope[j]) row["slope"] = *series.slope[j];
            rows.push_back(row);
        }
    return {{"problem", problem}, {"n", pw.n}, {"rows", rows}};
}

compact4::NamedProblem require_problem(const std::string& name) {
    auto prob = compact4::find_problem(name);
    if (!prob) throw std::invalid_argument("unknown problem: " + name);
    return *std::move(prob);
}

// --config files use a flat key=value format ('#' starts a comment line; list
// values are comma-separated).  Keys become long options of the invoked
// subcommand; explicit command-line flags win over file values.
std::vector<std::string> load_config_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    auto trim = [](std::string s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos) return std::string();
        const auto last = s.find_last_not_of(" \t\r");
        return s.substr(first, last - first + 1);
    };
    std::vector<std::string> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("config file " + path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        pairs.push_back("--" + trim(t.substr(0, eq)));
        pairs.push_back(trim(t.substr(eq + 1)));
    }
    return pairs;
}

std::vector<std::string> apply_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::string config_path;
    args.emplace_back(argv[0]);
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config") {
            if (i + 1 >= argc) throw std::invalid_argument("--config requires a path");
            config_path = argv[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
        } else {
            args.push_back(a);
        }
    }
    if (config_path.empty()) return args;
    const std::vector<std::string> pairs = load_config_pairs(config_path);
    for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) {
        const std::string& flag = pairs[i];
        const bool given =
            std::any_of(args.begin(), args.end(), [&flag](const std::string& arg) {
                return arg == flag || arg.rfind(flag + "=", 0) == 0;
            });
        if (!given) {
            args.push_back(flag);
            args.push_back(pairs[i + 1]);
        }
    }
    return args;
}

void emit_error(int code, const std::string& kind, const std::string& message) {
    const json err = {{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
    std::cerr << err.dump() << '\n';
}

struct SolveOptions {
    std::string problem;
    int n = 0;
    std::string format = "csv";
    std::string out = "-";
    std::optional<double> override_D;
};

struct StudyOptions {
    std::string problem;
    std::string kind;
    std::vector<int> ns;
    std::string format = "csv";
    std::string out = "-";
    std::string pointwise_out;
};

void run_solve(const SolveOptions& opt) {
    compact4::NamedProblem prob = require_problem(opt.problem);
    if (opt.override_D) {
        const double d = *opt.override_D;
        prob.coeffs.D = [d](double) { return d; };
    }
    const compact4::DiscreteSolution sol = compact4::solve_bvp(prob.make(opt.n));
    const double d4_norm = compact4::norm_h(sol.d4, sol.grid.h());
    if (opt.format == "csv")
        write_output(opt.out, solution_csv(sol, d4_norm));
    else
        write_output(opt.out, solution_json(opt.problem, sol, d4_norm).dump(2) + "\n");
}

void run_study(const StudyOptions& opt) {
    const compact4::NamedProblem prob = require_problem(opt.problem);
    if (opt.ns.empty()) throw std::invalid_argument("study: --ns must be non-empty");

    auto pointwise_from = [&prob](int n) {
        return compact4::pointwise_rates(prob.exact, prob.coeffs, prob.a, prob.b, n);
    };

    if (opt.kind == "pointwise") {
        if (opt.ns.size() != 2 || opt.ns[1] != 2 * opt.ns[0])
            throw std::invalid_argument("pointwise study: --ns must be a nested pair n,2n");
        const compact4::PointwiseReport pw = pointwise_from(opt.ns[0]);
        const std::string& dest = opt.pointwise_out.empty() ? opt.out : opt.pointwise_out;
        if (opt.format == "csv")
            write_output(dest, pointwise_csv(pw));
        else
            write_output(dest, pointwise_json(opt.problem, pw).dump(2) + "\n");
        return;
    }

    compact4::ConvergenceReport report;
    if (opt.kind == "truncation")
        report = compact4::truncation_study(prob.exact, prob.coeffs, prob.a, prob.b, opt.ns);
    else if (opt.kind == "accuracy")
        report = compact4::accuracy_study(prob, opt.ns);
    else
        throw std::invalid_argument("unknown study kind: " + opt.kind);

    if (opt.format == "csv")
        write_output(opt.out, study_csv(report));
    else
        write_output(opt.out, study_json(opt.problem, opt.kind, report).dump(2) + "\n");

    if (!opt.pointwise_out.empty()) {
        const compact4::PointwiseReport pw = pointwise_from(opt.ns[0]);
        if (opt.format == "csv")
            write_output(opt.pointwise_out, pointwise_csv(pw));
        else
            write_output(opt.pointwise_out, pointwise_json(opt.problem, pw).dump(2) + "\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compact fourth-order BVP scheme"};
    app.require_subcommand(1);

    // --config is handled before CLI11 sees the arguments (apply_config below);
    // the registrations here only document the flag in --help.
    std::string config_doc;

    SolveOptions solve_opt;
    CLI::App* solve = app.add_subcommand("solve", "solve a named problem on one mesh");
    solve->add_option("--config", config_doc,
                      "read key=value defaults from a file (explicit flags win)");
    solve->add_option("--problem", solve_opt.problem, "problem name (problem1|problem2)")
        ->required();
    solve->add_option("--n", solve_opt.n, "number of subintervals")->required();
    solve->add_option("--format", solve_opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    solve->add_option("--out", solve_opt.out, "output path (default stdout)");
    solve->add_option("--override-D", solve_opt.override_D,
                      "replace the problem's D coefficient by a constant");

    StudyOptions study_opt;
    CLI::App* study = app.add_subcommand("study", "run a convergence study");
    study->add_option("--config", config_doc,
                      "read key=value defaults from a file (explicit flags win)");
    study->add_option("--problem", study_opt.problem, "problem name (problem1|problem2)")
        ->required();
    study->add_option("--kind", study_opt.kind, "study kind")
        ->required()
        ->check(CLI::IsMember({"truncation", "accuracy", "pointwise"}));
    study->add_option("--ns", study_opt.ns, "mesh list, ascending")->required()->delimiter(',');
    study->add_option("--format", study_opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    study->add_option("--out", study_opt.out, "output path (default stdout)");
    study->add_option("--pointwise-out", study_opt.pointwise_out,
                      "also write the pointwise-rate profile to this path");

    std::vector<std::string> args;
    try {
        args = apply_config(argc, argv);
    } catch (const std::exception& e) {
        emit_error(1, "config_error", e.what());
        return 1;
    }
    std::vector<char*> cargs;
    cargs.reserve(args.size());
    for (std::string& s : args) cargs.push_back(s.data());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) run_solve(solve_opt);
        if (study->parsed()) run_study(study_opt);
        return 0;
    } catch (const compact4::SolvabilityViolation& e) {
        emit_error(2, "solvability_violation", e.what());
        return 2;
    } catch (const compact4::SingularSystem& e) {
        emit_error(3, "singular_system", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error(1, "config_error", e.what());
        return 1;
    }
}
