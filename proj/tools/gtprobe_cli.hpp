#pragma once

// Command-line front end. run_cli() is separate from main() so the tests can
// drive every command in-process and inspect output and exit codes.

#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gtprobe/fidelity.hpp"
#include "gtprobe/protocol_coeffs.hpp"
#include "gtprobe/quantum_oracle.hpp"
#include "gtprobe/verification.hpp"
#include "gtprobe/young.hpp"

namespace gtprobe::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kUsageError = 2, kCapacityError = 3 };

inline const char* const kSweepHeader =
    "d,n,L,infidelity_num,infidelity_den,infidelity_float,bound_ratio,optimal_infidelity_float,gap_ratio";

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

inline Json rational_json(const Rational& r) { return Json{{"num", num(r).str()}, {"den", den(r).str()}}; }

/// Renders rows as a space-aligned table.
inline void print_table(std::ostream& out, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c + 1 < cells.size(); ++c)
            out << std::left << std::setw(static_cast<int>(width[c])) << cells[c] << "  ";
        out << cells.back() << "\n";
    };
    line(header);
    for (const auto& row : rows) line(row);
}

inline void print_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t c = 0; c < header.size(); ++c) out << header[c] << (c + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) out << row[c] << (c + 1 < row.size() ? "," : "\n");
}

inline std::string rational_cell(const Rational& r) { return to_string(r) + " (" + format_double(to_double(r)) + ")"; }

inline void check_format(const std::string& format) {
    if (format != "table" && format != "csv" && format != "json")
        throw UsageError("--format must be one of table, csv, json");
}

inline void check_d(int d) {
    if (d < 2) throw UsageError("--d must be at least 2");
}

/// Rounds n down to a multiple of 2d, warning when it changes.
inline int resolve_n(int d, int n, std::ostream& err) {
    check_d(d);
    const int step = 2 * d;
    const int rounded = n - (n % step + step) % step;
    if (rounded <= 0) throw UsageError("--n must be at least 2d = " + std::to_string(step));
    if (rounded != n)
        err << "warning: n=" << n << " is not a multiple of 2d=" << step << "; using n=" << rounded << "\n";
    return rounded;
}

// ---------------------------------------------------------------------------

inline int cmd_dims(int d, int n, const std::string& shape, const std::string& format, std::ostream& out,
                    std::ostream& err) {
    check_d(d);
    check_format(format);
    if (!shape.empty()) {
        std::vector<int> rows;
        std::stringstream ss(shape);
        std::string item;
        while (std::getline(ss, item, ',')) rows.push_back(std::stoi(item));
        YoungDiagram lambda;
        try {
            lambda = YoungDiagram(rows);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        const auto weyl = weyl_dimension(lambda, d);
        const std::string weyl_str = weyl ? weyl->str() : "0";
        const std::string hook = hook_length_dimension(lambda).str();
        if (format == "json") {
            Json j{{"d", d}, {"shape", lambda.to_string()}, {"weyl_dimension", weyl_str},
                   {"vanishing", !weyl.has_value()}, {"hook_length_dimension", hook}};
            out << j.dump(2) << "\n";
        } else {
            std::vector<std::string> header{"shape", "d", "weyl_dimension", "hook_length_dimension"};
            std::vector<std::vector<std::string>> rows_out{{lambda.to_string(), std::to_string(d), weyl_str, hook}};
            format == "csv" ? print_csv(out, header, rows_out) : print_table(out, header, rows_out);
        }
        return kSuccess;
    }
    n = resolve_n(d, n, err);
    const int L = n / (2 * d);
    std::vector<std::string> header{"i", "gamma", "gamma_plus", "dim_gamma", "dim_gamma_plus", "hook_gamma", "ratio"};
    std::vector<std::vector<std::string>> rows;
    Json list = Json::array();
    for (int i = 0; i <= L; ++i) {
        const GammaParams p(d, L, i);
        const YoungDiagram g = gamma_shape(p), gp = gamma_plus_shape(p);
        const BigInt dg = *weyl_dimension(g, d), dgp = *weyl_dimension(gp, d);
        const BigInt hook = hook_length_dimension(g);
        const Rational ratio(dg, dgp);
        rows.push_back({std::to_string(i), g.to_string(), gp.to_string(), dg.str(), dgp.str(), hook.str(),
                        to_string(ratio)});
        list.push_back(Json{{"i", i}, {"gamma", g.to_string()}, {"gamma_plus", gp.to_string()},
                            {"dim_gamma", dg.str()}, {"dim_gamma_plus", dgp.str()}, {"hook_gamma", hook.str()},
                            {"ratio", rational_json(ratio)}});
    }
    if (format == "json")
        out << Json{{"d", d}, {"n", n}, {"L", L}, {"rows", list}}.dump(2) << "\n";
    else
        format == "csv" ? print_csv(out, header, rows) : print_table(out, header, rows);
    return kSuccess;
}

inline int cmd_coeffs(int d, int n, const std::string& format, std::ostream& out, std::ostream& err) {
    check_format(format);
    n = resolve_n(d, n, err);
    const int L = n / (2 * d);
    const CoeffTable table = coeff_table(d, L);
    if (format == "json") {
        Json rows = Json::array();
        for (const auto& r : table.rows)
            rows.push_back(Json{{"i", r.i},
                                {"alpha", rational_json(r.alpha)},
                                {"beta", rational_json(r.beta)},
                                {"x_sq", rational_json(r.x_sq)},
                                {"y_sq", rational_json(r.y_sq)},
                                {"g", r.g.str()},
                                {"f_sq", rational_json(r.f_sq)},
                                {"alpha_float", to_double(r.alpha)},
                                {"beta_float", to_double(r.beta)},
                                {"x_sq_float", to_double(r.x_sq)},
                                {"y_sq_float", to_double(r.y_sq)},
                                {"f_sq_float", to_double(r.f_sq)}});
        out << Json{{"d", d}, {"n", n}, {"L", L}, {"N", table.N}, {"rows", rows}}.dump(2) << "\n";
        return kSuccess;
    }
    if (format == "csv") {
        std::vector<std::string> header{"i",         "alpha_num",  "alpha_den", "alpha_float", "beta_num",
                                        "beta_den",  "beta_float", "x_sq_num",  "x_sq_den",    "x_sq_float",
                                        "y_sq_num",  "y_sq_den",   "y_sq_float", "g",          "f_sq_num",
                                        "f_sq_den",  "f_sq_float"};
        std::vector<std::vector<std::string>> rows;
        auto parts = [](const Rational& q, std::vector<std::string>& row) {
            row.push_back(num(q).str());
            row.push_back(den(q).str());
            row.push_back(format_double(to_double(q)));
        };
        for (const auto& r : table.rows) {
            std::vector<std::string> row{std::to_string(r.i)};
            parts(r.alpha, row);
            parts(r.beta, row);
            parts(r.x_sq, row);
            parts(r.y_sq, row);
            row.push_back(r.g.str());
            parts(r.f_sq, row);
            rows.push_back(std::move(row));
        }
        print_csv(out, header, rows);
        return kSuccess;
    }
    out << "d=" << d << " n=" << n << " L=" << L << " N=" << table.N << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : table.rows)
        rows.push_back({std::to_string(r.i), rational_cell(r.alpha), rational_cell(r.beta), rational_cell(r.x_sq),
                        rational_cell(r.y_sq), r.g.str(), rational_cell(r.f_sq)});
    print_table(out, {"i", "alpha", "beta", "x^2", "y^2", "g", "f^2"}, rows);
    return kSuccess;
}

inline int cmd_infidelity(int d, int n, const std::string& format, std::ostream& out, std::ostream& err) {
    check_format(format);
    n = resolve_n(d, n, err);
    const FidelityReport r = fidelity_report(d, n);
    if (format == "json") {
        Json f = Json::array();
        for (double v : r.optimal_f) f.push_back(v);
        Json j{{"d", r.d},
               {"n", r.n},
               {"L", r.L},
               {"fidelity", rational_json(r.fidelity_exact)},
               {"infidelity", rational_json(r.infidelity_exact)},
               {"closed_form", rational_json(r.closed_form)},
               {"fidelity_float", to_double(r.fidelity_exact)},
               {"infidelity_float", to_double(r.infidelity_exact)},
               {"bound_ratio", r.bound_ratio},
               {"bound_constant", kTheoremBoundConstant},
               {"bound_ok", r.bound_ok()},
               {"optimal_rayleigh", r.optimal_rayleigh},
               {"optimal_infidelity", r.optimal_infidelity()},
               {"gap_ratio", r.gap_ratio()},
               {"optimal_f", f}};
        out << j.dump(2) << "\n";
        return kSuccess;
    }
    std::vector<std::string> header{"d", "n", "L", "fidelity", "infidelity", "closed_form", "bound_ratio",
                                    "optimal_rayleigh", "gap_ratio"};
    std::vector<std::vector<std::string>> rows{
        {std::to_string(r.d), std::to_string(r.n), std::to_string(r.L), to_string(r.fidelity_exact),
         to_string(r.infidelity_exact), to_string(r.closed_form), format_double(r.bound_ratio),
         format_double(r.optimal_rayleigh), format_double(r.gap_ratio())}};
    if (format == "csv") {
        print_csv(out, header, rows);
        return kSuccess;
    }
    out << "fidelity          " << rational_cell(r.fidelity_exact) << "\n"
        << "infidelity        " << rational_cell(r.infidelity_exact) << "\n"
        << "closed form       " << rational_cell(r.closed_form) << "\n"
        << "bound ratio       " << format_double(r.bound_ratio) << " (envelope constant "
        << format_double(kTheoremBoundConstant) << ", empirical)\n"
        << "optimal rayleigh  " << format_double(r.optimal_rayleigh) << "\n"
        << "optimal gap       " << format_double(r.gap_ratio()) << " (optimal infidelity / closed form)\n";
    return kSuccess;
}

inline int cmd_plan(int d, double eps, const std::string& format, std::ostream& out) {
    check_d(d);
    check_format(format);
    if (!(eps > 0 && eps < 1)) throw UsageError("--eps must lie in (0, 1)");
    const int n = plan_queries(d, eps);
    const int L = n / (2 * d);
    const Rational infidelity = closed_form_infidelity(d, L);
    const double heisenberg = std::pow(d, 1.5) / eps;
    const double standard = d / (eps * eps);
    const std::string guarantee = "trace distance <= " + format_double(eps) + " with probability >= 2/3";
    if (format == "json") {
        Json j{{"d", d},
               {"eps", eps},
               {"n", n},
               {"L", L},
               {"infidelity", rational_json(infidelity)},
               {"infidelity_float", to_double(infidelity)},
               {"target", eps * eps / 100},
               {"d_three_halves_over_eps", heisenberg},
               {"d_over_eps_squared", standard},
               {"guarantee", guarantee}};
        out << j.dump(2) << "\n";
        return kSuccess;
    }
    std::vector<std::string> header{"d", "eps", "n", "L", "infidelity", "d^1.5/eps", "d/eps^2"};
    std::vector<std::vector<std::string>> rows{{std::to_string(d), format_double(eps), std::to_string(n),
                                                std::to_string(L), format_double(to_double(infidelity)),
                                                format_double(heisenberg), format_double(standard)}};
    if (format == "csv") {
        print_csv(out, header, rows);
        return kSuccess;
    }
    print_table(out, header, rows);
    out << "guarantee: " << guarantee << "\n";
    return kSuccess;
}

inline std::pair<int, int> parse_range(const std::string& text, const char* flag) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + " must look like lo:hi");
    }
}

struct SweepRow {
    int d, n, L;
    Rational infidelity;
    double bound_ratio, optimal_infidelity, gap_ratio;
};

inline int cmd_sweep(const std::string& d_range, const std::string& n_range, const std::string& format,
                     std::ostream& out) {
    check_format(format);
    const auto [d_lo, d_hi] = parse_range(d_range, "--d-range");
    const auto [n_lo, n_hi] = parse_range(n_range, "--n-range");
    if (d_lo < 2 || d_hi < d_lo) throw UsageError("--d-range must be a nonempty range with d >= 2");
    if (n_hi < n_lo) throw UsageError("--n-range must be nonempty");
    std::vector<SweepRow> rows;
    for (int d = d_lo; d <= d_hi; ++d) {
        const int step = 2 * d;
        for (int n = std::max(step, (n_lo + step - 1) / step * step); n <= n_hi; n += step) {
            const int L = n / step;
            const Rational infidelity = closed_form_infidelity(d, L);
            const double opt = 1 - optimal_probe(d, L).value;
            rows.push_back({d, n, L, infidelity, theorem_bound_ratio(d, n), opt, opt / to_double(infidelity)});
        }
    }
    if (format == "json") {
        Json list = Json::array();
        for (const auto& r : rows)
            list.push_back(Json{{"d", r.d},
                                {"n", r.n},
                                {"L", r.L},
                                {"infidelity", rational_json(r.infidelity)},
                                {"infidelity_float", to_double(r.infidelity)},
                                {"bound_ratio", r.bound_ratio},
                                {"optimal_infidelity_float", r.optimal_infidelity},
                                {"gap_ratio", r.gap_ratio}});
        out << Json{{"rows", list}}.dump(2) << "\n";
        return kSuccess;
    }
    std::vector<std::string> header;
    std::stringstream hs(kSweepHeader);
    for (std::string h; std::getline(hs, h, ',');) header.push_back(h);
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows)
        cells.push_back({std::to_string(r.d), std::to_string(r.n), std::to_string(r.L), num(r.infidelity).str(),
                         den(r.infidelity).str(), format_double(to_double(r.infidelity)), format_double(r.bound_ratio),
                         format_double(r.optimal_infidelity), format_double(r.gap_ratio)});
    format == "csv" ? print_csv(out, header, cells) : print_table(out, header, cells);
    return kSuccess;
}

/// Runs the verification suite; exit code 1 names the first counterexample.
inline int run_verify(const VerifyOptions& opt, const std::string& format, std::ostream& out) {
    check_format(format);
    if (opt.max_d < 2 || opt.max_L < 1) throw UsageError("--max-d must be >= 2 and --max-L >= 1");
    const auto results = run_verification(opt);
    const FamilyResult* first_failure = nullptr;
    for (const auto& r : results)
        if (!r.passed && !first_failure) first_failure = &r;
    if (format == "json") {
        Json families = Json::array();
        for (const auto& r : results)
            families.push_back(Json{{"family", r.name},
                                    {"passed", r.passed},
                                    {"checks", r.checks},
                                    {"counterexample", r.counterexample}});
        Json j{{"max_d", opt.max_d}, {"max_L", opt.max_L}, {"seed", opt.seed}, {"families", families},
               {"passed", first_failure == nullptr}};
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            if (r.passed)
                out << "PASS " << r.name << " (" << r.checks << " checks)\n";
            else
                out << "FAIL " << r.name << " (" << r.checks << " checks): " << r.counterexample << "\n";
        }
        if (first_failure)
            out << "verify: first counterexample in " << first_failure->name << ": " << first_failure->counterexample
                << "\n";
        else
            out << "verify: all " << results.size() << " families passed\n";
    }
    return first_failure ? kVerificationFailure : kSuccess;
}

struct SimulateOptions {
    int d = 2, n = 4;
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
    bool check_cg = false;
    bool haar_u = false;
    std::string pick = "first";
    double null_tolerance = 1e-9;
    double casimir_tolerance = 1e-6;
    double cg_tolerance = 1e-8;
    double sigma = 3.0;
};

inline int cmd_simulate(SimulateOptions so, std::ostream& out, std::ostream& err) {
    check_d(so.d);
    if (so.pick != "first" && so.pick != "last") throw UsageError("--pick must be first or last");
    if (so.samples < 100) throw UsageError("--samples must be at least 100");
    so.n = resolve_n(so.d, so.n, err);
    OracleOptions oo;
    oo.null_tolerance = so.null_tolerance;
    oo.casimir_tolerance = so.casimir_tolerance;
    oo.pick = so.pick == "first" ? BucketPick::first : BucketPick::last;

    const GTVectorSet set = extract_gt_vectors(so.d, so.n, oo);
    MCOptions mc;
    mc.samples = so.samples;
    mc.seed = so.seed;
    mc.haar_u = so.haar_u;
    const MCPair est = mc_protocol(set, mc);
    const Rational analytic = expected_fidelity_paper(so.d, so.n);

    bool pass = std::abs(est.fidelity.mean - to_double(analytic)) <= so.sigma * est.fidelity.standard_error &&
                std::abs(est.total_probability.mean - 1) <= so.sigma * est.total_probability.standard_error;

    Json dims = Json::array();
    for (auto v : set.sector_dims) dims.push_back(v);
    Json j{{"d", so.d},
           {"n", so.n},
           {"analytic_fidelity",
            Json{{"num", num(analytic).str()}, {"den", den(analytic).str()}, {"float", to_double(analytic)}}},
           {"mc_mean", est.fidelity.mean},
           {"mc_stderr", est.fidelity.standard_error},
           {"samples", so.samples},
           {"seed", so.seed},
           {"total_prob_mean", est.total_probability.mean},
           {"total_prob_stderr", est.total_probability.standard_error}};
    if (so.check_cg) {
        Json residuals = Json::array();
        for (const auto& r : verify_cg_embedding(set, oo)) {
            residuals.push_back(Json{{"i", r.i},
                                     {"proj_self", r.proj_self},
                                     {"proj_next", r.proj_next},
                                     {"alpha", rational_json(r.alpha)},
                                     {"beta", rational_json(r.beta)},
                                     {"residual_alpha", r.residual_alpha},
                                     {"residual_beta", r.residual_beta},
                                     {"residual_total", r.residual_total}});
            pass = pass && r.max_residual() < so.cg_tolerance;
        }
        j["cg_residuals"] = residuals;
    }
    j["sector_dims"] = dims;
    j["pass"] = pass;
    out << j.dump(2) << "\n";
    return pass ? kSuccess : kVerificationFailure;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analysis and verification toolkit for Gamma-tableau pure-state estimation"};
    app.require_subcommand(1);

    std::string format = "table";
    auto add_format = [&](CLI::App* sub, const std::string& fallback) {
        sub->add_option("--format", format, "table, csv or json")->default_str(fallback);
    };

    int d = 2, n = 4;
    std::string shape;
    auto* dims = app.add_subcommand("dims", "dimensions of the Gamma shapes, or of --shape");
    dims->add_option("--d", d, "local dimension")->required();
    dims->add_option("--n", n, "number of queries (multiple of 2d)");
    dims->add_option("--shape", shape, "comma-separated row lengths");
    add_format(dims, "table");

    auto* coeffs = app.add_subcommand("coeffs", "exact coefficient table");
    coeffs->add_option("--d", d)->required();
    coeffs->add_option("--n", n)->required();
    add_format(coeffs, "table");

    auto* infid = app.add_subcommand("infidelity", "exact fidelity report");
    infid->add_option("--d", d)->required();
    infid->add_option("--n", n)->required();
    add_format(infid, "table");

    double eps = 0.1;
    auto* plan = app.add_subcommand("plan", "queries needed for trace-distance error eps");
    plan->add_option("--d", d)->required();
    plan->add_option("--eps", eps)->required();
    add_format(plan, "table");

    std::string d_range = "2:8", n_range = "1:400";
    auto* sweep = app.add_subcommand("sweep", "infidelity sweep over (d, n)");
    sweep->add_option("--d-range", d_range, "lo:hi")->capture_default_str();
    sweep->add_option("--n-range", n_range, "lo:hi; every multiple of 2d inside is used")->capture_default_str();
    sweep->add_option("--format", format, "table, csv or json")->default_str("csv");

    VerifyOptions vo;
    std::vector<int> fault;
    auto* verify = app.add_subcommand("verify", "exact identity suite");
    verify->add_option("--max-d", vo.max_d)->capture_default_str();
    verify->add_option("--max-L", vo.max_L)->capture_default_str();
    verify->add_option("--seed", vo.seed)->capture_default_str();
    verify->add_option("--inject-g-fault", fault, "d,L,i: corrupt g_i to exercise the failure path")
        ->delimiter(',')
        ->expected(3);
    add_format(verify, "table");

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "brute-force simulation (d in {2,3,4}, d^n <= 1e5)");
    simulate->add_option("--d", so.d)->required();
    simulate->add_option("--n", so.n)->required();
    simulate->add_option("--samples", so.samples)->capture_default_str();
    simulate->add_option("--seed", so.seed)->capture_default_str();
    simulate->add_flag("--check-cg", so.check_cg, "also check the CG embedding");
    simulate->add_flag("--haar-u", so.haar_u, "draw the unknown unitary from the Haar measure too");
    simulate->add_option("--pick", so.pick, "first or last vector of each isotypic block")->capture_default_str();
    simulate->add_option("--null-tol", so.null_tolerance)->capture_default_str();
    simulate->add_option("--casimir-tol", so.casimir_tolerance)->capture_default_str();
    simulate->add_option("--cg-tol", so.cg_tolerance)->capture_default_str();
    simulate->add_option("--sigma", so.sigma, "agreement threshold in standard errors")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsageError;
    }
    if (format.empty()) format = "table";
    if (sweep->parsed() && sweep->count("--format") == 0) format = "csv";

    try {
        if (dims->parsed()) return cmd_dims(d, dims->count("--n") ? n : 0, shape, format, out, err);
        if (coeffs->parsed()) return cmd_coeffs(d, n, format, out, err);
        if (infid->parsed()) return cmd_infidelity(d, n, format, out, err);
        if (plan->parsed()) return cmd_plan(d, eps, format, out);
        if (sweep->parsed()) return cmd_sweep(d_range, n_range, format, out);
        if (verify->parsed()) {
            if (!fault.empty()) vo.g_fault = GFault{fault[0], fault[1], fault[2]};
            return run_verify(vo, format, out);
        }
        if (simulate->parsed()) return cmd_simulate(so, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << "\n";
        return kCapacityError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace gtprobe::cli
