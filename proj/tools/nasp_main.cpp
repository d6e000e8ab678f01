// nasp: exact nonarchimedean stationary-phase toolkit, command-line front end.
//
// Subcommands map 1:1 onto the library: critical | morse | gauss | fourier |
// integrate | phase-verify | uniform. Output is JSON lines on stdout (or flat
// CSV with --csv for the sweep commands). Exit codes: 0 success, 1
// verification mismatch or computation failure, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "nasp/json_io.hpp"
#include "nasp/phase_parser.hpp"

using namespace nasp;

namespace {

struct JobConfig {
    std::string field = "padic";
    long p = 5;
    int n = 0; // 0: infer from the phase
    int precision = 24;
    int degree = 12;
    long long budget = 10'000'000;
    bool csv = false;
    std::string f;
    std::string phi_file;
    std::string omega_file;
    std::string x0 = "0";
    std::string lambda_ord;
    long alpha = 1;
    long ord_c = 0;
    long ac_c = 1;
    bool all_units = false;
    bool flat = false;
    bool double_transform = false;
    std::string primes = "3,5,7";
    int sweep = 2;
};

void load_config_defaults(int argc, char** argv, JobConfig& job) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) != "--config") continue;
        std::ifstream in(argv[i + 1]);
        if (!in) fail(errc::invalid_argument, std::string("cannot open config file ") + argv[i + 1]);
        Json j = Json::parse(in);
        if (j.contains("field")) job.field = j["field"].get<std::string>();
        if (j.contains("p")) job.p = j["p"].get<long>();
        if (j.contains("n")) job.n = j["n"].get<int>();
        if (j.contains("precision")) job.precision = j["precision"].get<int>();
        if (j.contains("degree")) job.degree = j["degree"].get<int>();
        if (j.contains("budget")) job.budget = j["budget"].get<long long>();
        if (j.contains("f")) job.f = j["f"].get<std::string>();
        if (j.contains("phi_file")) job.phi_file = j["phi_file"].get<std::string>();
        if (j.contains("omega_file")) job.omega_file = j["omega_file"].get<std::string>();
        if (j.contains("x0")) job.x0 = j["x0"].get<std::string>();
        if (j.contains("lambda_ord")) job.lambda_ord = j["lambda_ord"].get<std::string>();
        if (j.contains("alpha")) job.alpha = j["alpha"].get<long>();
        if (j.contains("primes")) job.primes = j["primes"].get<std::string>();
        if (j.contains("sweep")) job.sweep = j["sweep"].get<int>();
    }
}

FieldConfig make_cfg(const JobConfig& job) {
    if (job.field == "padic") return FieldConfig::padic(job.p, job.precision);
    if (job.field == "laurent") return FieldConfig::laurent(job.p, job.precision);
    fail(errc::invalid_argument, "--field must be padic or laurent");
}

std::vector<mpq_class> parse_rational_list(const std::string& s) {
    std::vector<mpq_class> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(mpq_from_string(item));
    return out;
}

std::vector<long> parse_long_list(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
    return out;
}

// "a..b" (inclusive, descending or ascending) or a single integer.
std::vector<long> parse_ord_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) return {std::stol(s)};
    long a = std::stol(s.substr(0, dots));
    long b = std::stol(s.substr(dots + 2));
    std::vector<long> out;
    if (a >= b)
        for (long o = a; o >= b; --o) out.push_back(o);
    else
        for (long o = a; o <= b; ++o) out.push_back(o);
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_argument, "cannot open " + path);
    return Json::parse(in);
}

struct Loaded {
    FieldConfig cfg;
    QPoly q;
    MultiSeries f;
    StepFunction phi;
    Region omega;
};

Loaded load_problem(const JobConfig& job) {
    if (job.f.empty()) fail(errc::invalid_argument, "--f is required");
    FieldConfig cfg = make_cfg(job);
    QPoly q = parse_phase(job.f, job.n);
    MultiSeries f = q.to_series(cfg, job.degree);
    int n = q.nvars;
    StepFunction phi = job.phi_file.empty()
                           ? StepFunction::indicator(cfg, n, Coset::polydisc(n, 0))
                           : step_spec_from_json(read_json_file(job.phi_file)).to_step(cfg);
    Region omega = job.omega_file.empty() ? Region::full(cfg, n)
                                          : region_spec_from_json(read_json_file(job.omega_file)).to_region(cfg);
    if (phi.nvars() != n || omega.nvars() != n) fail(errc::invalid_argument, "phi/omega arity mismatch");
    return Loaded{cfg, std::move(q), std::move(f), std::move(phi), std::move(omega)};
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

int cmd_critical(const JobConfig& job) {
    auto L = load_problem(job);
    auto pts = find_critical_points(L.f, L.omega);
    for (const auto& x : pts) {
        Json rec;
        Json point = Json::array();
        for (const auto& xi : x) point.push_back(xi.to_string());
        rec["point"] = point;
        emit(rec);
    }
    Json summary;
    summary["count"] = pts.size();
    emit(summary);
    return 0;
}

int cmd_morse(const JobConfig& job) {
    auto L = load_problem(job);
    std::vector<LocalNum> x0;
    for (const auto& q : parse_rational_list(job.x0)) x0.push_back(LocalNum::from_rational(L.cfg, q));
    if (static_cast<int>(x0.size()) != L.f.nvars()) fail(errc::invalid_argument, "--x0 arity mismatch");
    auto md = morse_normal_form(L.f, x0, job.alpha);
    Json j = morse_to_json(md);
    j["verified"] = verify_morse(md, L.f, 100).ok;
    emit(j);
    return j["verified"].get<bool>() ? 0 : 1;
}

int cmd_gauss(const JobConfig& job) {
    FieldConfig cfg = make_cfg(job);
    std::vector<long> units = job.all_units ? std::vector<long>{} : std::vector<long>{job.ac_c};
    if (units.empty())
        for (long u = 1; u < cfg.p; ++u) units.push_back(u);
    bool all_equal = true;
    if (job.csv) std::cout << "ord_c,ac_c,alpha,closed,brute,equal\n";
    for (long u : units) {
        LocalNum c = LocalNum::unit_rep(cfg, u, job.ord_c);
        CycloNum closed = gauss_closed(c, job.alpha);
        CycloNum brute = gauss_brute(c, job.alpha, job.budget);
        bool equal = closed == brute;
        all_equal = all_equal && equal;
        if (job.csv) {
            std::cout << job.ord_c << "," << u << "," << job.alpha << "," << csv_quote(closed.to_string()) << ","
                      << csv_quote(brute.to_string()) << "," << (equal ? "1" : "0") << "\n";
        } else {
            Json rec;
            rec["ord_c"] = job.ord_c;
            rec["ac_c"] = u;
            rec["alpha"] = job.alpha;
            rec["closed"] = cyclo_to_json(closed);
            rec["brute"] = cyclo_to_json(brute);
            rec["equal"] = equal;
            emit(rec);
        }
    }
    return all_equal ? 0 : 1;
}

int cmd_fourier(const JobConfig& job) {
    FieldConfig cfg = make_cfg(job);
    if (job.phi_file.empty()) fail(errc::invalid_argument, "--phi-file is required");
    StepFunction phi = step_spec_from_json(read_json_file(job.phi_file)).to_step(cfg);
    if (job.double_transform) {
        auto partner = StepFunction::indicator(cfg, phi.nvars(), Coset::polydisc(phi.nvars(), 0));
        auto rep = double_fourier_check(phi, partner);
        emit(double_fourier_to_json(rep));
        return rep.scalar_ok && rep.plancherel_ok ? 0 : 1;
    }
    emit(step_to_json(fourier(phi)));
    return 0;
}

int cmd_integrate(const JobConfig& job) {
    auto L = load_problem(job);
    if (job.lambda_ord.empty()) fail(errc::invalid_argument, "--lambda-ord is required");
    if (job.csv) std::cout << "ord,unit,value\n";
    for (long o : parse_ord_range(job.lambda_ord)) {
        for (long u = 1; u < L.cfg.p; ++u) {
            LocalNum lambda = LocalNum::unit_rep(L.cfg, u, o);
            CycloNum v = oscillatory_brute(L.f, L.phi, lambda, L.omega, {.budget = job.budget, .flat = job.flat});
            if (job.csv) {
                std::cout << o << "," << u << "," << csv_quote(v.to_string()) << "\n";
            } else {
                Json rec;
                rec["ord"] = o;
                rec["unit"] = u;
                rec["value"] = cyclo_to_json(v);
                emit(rec);
            }
        }
    }
    return 0;
}

int cmd_phase_verify(const JobConfig& job) {
    auto L = load_problem(job);
    auto cert = stationary_phase(L.f, L.phi, L.omega, job.budget);
    Json head;
    head["certificate"] = certificate_to_json(cert);
    emit(head);
    std::vector<long> ords = job.lambda_ord.empty()
                                 ? std::vector<long>{cert.N, cert.N - 1, cert.N - 2, cert.N - 3}
                                 : parse_ord_range(job.lambda_ord);
    auto rep = verify_certificate(cert, L.f, L.phi, L.omega, ords, {}, job.budget);
    if (job.csv) std::cout << "ord,unit,equal\n";
    for (const auto& r : rep.records) {
        if (job.csv)
            std::cout << r.ord << "," << r.unit << "," << (r.equal ? "1" : "0") << "\n";
        else
            emit(verify_record_to_json(r));
    }
    Json tail;
    tail["all_equal"] = rep.all_equal;
    tail["lambdas"] = rep.records.size();
    emit(tail);
    return rep.all_equal ? 0 : 1;
}

int cmd_uniform(const JobConfig& job) {
    if (job.f.empty()) fail(errc::invalid_argument, "--f is required");
    QPoly q = parse_phase(job.f, job.n);
    int n = q.nvars;
    auto x0 = parse_rational_list(job.x0);
    if (static_cast<int>(x0.size()) != n) fail(errc::invalid_argument, "--x0 arity mismatch");
    StepSpec phi_spec{n, {{std::vector<mpq_class>(static_cast<size_t>(n), 0), 0, 1}}};
    if (!job.phi_file.empty()) phi_spec = step_spec_from_json(read_json_file(job.phi_file));
    RegionSpec omega_spec{n, {}};
    if (!job.omega_file.empty()) omega_spec = region_spec_from_json(read_json_file(job.omega_file));

    emit(Json{{"uniform_formula", uniform_formula_to_json(uniform_normal_form(q, x0))}});
    UniformOptions opts;
    opts.sweep_ords = job.sweep;
    opts.precision = job.precision;
    opts.degree_cutoff = job.degree;
    opts.budget = job.budget;
    auto reports = check_uniform(q, x0, phi_spec, omega_spec, parse_long_list(job.primes), opts);
    bool ok = true;
    if (job.csv) std::cout << "p,kind,status,N,lambdas_checked\n";
    for (const auto& r : reports) {
        if (job.csv) {
            const char* st = r.status == UniformStatus::ok          ? "ok"
                             : r.status == UniformStatus::bad_prime ? "bad_prime"
                             : r.status == UniformStatus::mismatch  ? "mismatch"
                                                                    : "failed";
            std::cout << r.p << "," << (r.kind == Kind::padic ? "padic" : "laurent") << "," << st << "," << r.N << ","
                      << r.lambdas_checked << "\n";
        } else {
            emit(uniform_report_to_json(r));
        }
        ok = ok && (r.status == UniformStatus::ok || r.status == UniformStatus::bad_prime);
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    JobConfig job;
    try {
        load_config_defaults(argc, argv, job);
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 2;
    }

    CLI::App app{"exact nonarchimedean stationary-phase toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--field", job.field, "padic or laurent");
    app.add_option("--p", job.p, "odd prime residue characteristic");
    app.add_option("--n", job.n, "number of variables (0: infer from the phase)");
    app.add_option("--precision", job.precision, "significant digits per local number");
    app.add_option("--degree", job.degree, "series degree cutoff");
    app.add_option("--budget", job.budget, "coset enumeration budget");
    app.add_flag("--csv", job.csv, "flat CSV output for sweep commands");
    app.add_option("--f", job.f, "phase expression in x1..xn");
    app.add_option("--phi-file", job.phi_file, "step-function JSON file");
    app.add_option("--omega-file", job.omega_file, "region JSON file");
    app.add_option("--x0", job.x0, "comma-separated rational point");
    app.add_option("--lambda-ord", job.lambda_ord, "order or inclusive range a..b");
    app.add_option("--alpha", job.alpha, "polydisc radius exponent");

    auto* critical = app.add_subcommand("critical", "critical points of the phase inside Omega");
    auto* morse = app.add_subcommand("morse", "Morse normal form at --x0");
    auto* gauss = app.add_subcommand("gauss", "quadratic Gauss integral, closed form vs brute force");
    for (auto* sub : {critical, morse, gauss}) sub->fallthrough();
    gauss->add_option("--ord-c", job.ord_c, "valuation of the coefficient");
    gauss->add_option("--ac-c", job.ac_c, "angular component of the coefficient");
    gauss->add_flag("--all-units", job.all_units, "sweep every angular class");
    auto* fourier_cmd = app.add_subcommand("fourier", "Fourier transform of a step function");
    fourier_cmd->add_flag("--double", job.double_transform, "apply twice and report the reflection constant");
    auto* integrate_cmd = app.add_subcommand("integrate", "oscillatory integrals over a lambda sweep");
    integrate_cmd->add_flag("--flat", job.flat, "flat enumeration at the guaranteed depth");
    auto* verify = app.add_subcommand("phase-verify", "certificate plus exact closed-vs-brute sweep");
    auto* uniform = app.add_subcommand("uniform", "uniform-in-p formula checked across primes");
    uniform->add_option("--primes", job.primes, "comma-separated primes");
    uniform->add_option("--sweep", job.sweep, "orders below N to check");
    for (auto* sub : {fourier_cmd, integrate_cmd, verify, uniform}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (critical->parsed()) return cmd_critical(job);
        if (morse->parsed()) return cmd_morse(job);
        if (gauss->parsed()) return cmd_gauss(job);
        if (fourier_cmd->parsed()) return cmd_fourier(job);
        if (integrate_cmd->parsed()) return cmd_integrate(job);
        if (verify->parsed()) return cmd_phase_verify(job);
        if (uniform->parsed()) return cmd_uniform(job);
    } catch (const Error& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        switch (e.kind()) {
            case errc::syntax_error:
            case errc::non_polynomial:
            case errc::invalid_argument:
                return 2;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}
