// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gtprobe/fidelity.hpp"
#include "gtprobe/quantum_oracle.hpp"
#include "gtprobe/verification.hpp"

using namespace gtprobe;

namespace {

// Tolerances and limits.
constexpr double kEnvelope = 4.0;
constexpr double kAsymptoticEnvelope = 2.5;
constexpr double kCgResidual = 1e-8;
constexpr double kSigmas = 3.0;
constexpr double kSandwichSlack = 1e-10;
constexpr double kPlannerConstant = 60.0;
constexpr std::size_t kMcSamples = 100000;
constexpr std::uint64_t kSeed = 42;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    const char* id;
    const char* title;
    double time_limit;  // seconds, 0 = none
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome ac1() {
    Outcome o;
    int points = 0;
    for (int d = 2; d <= 6; ++d)
        for (int L = 1; L <= 12; ++L, ++points) {
            const Rational a = 1 - expected_fidelity_paper(d, 2 * d * L);
            if (a != lemma42_value(d, L) || a != closed_form_infidelity(d, L)) {
                o.pass = false;
                o.detail = "mismatch at d=" + std::to_string(d) + " L=" + std::to_string(L);
                return o;
            }
        }
    o.detail = std::to_string(points) + " grid points equal exactly";
    return o;
}

Outcome ac2() {
    Outcome o;
    const bool a = expected_fidelity_paper(2, 4) == ratio(7, 8);
    const bool b = expected_fidelity_paper(3, 6) == ratio(4, 5);
    bool c = true;
    for (int L = 1; L <= 50; ++L) {
        const Rational want = ratio(1, 2 * (L + 1) * (L + 1));
        c = c && 1 - expected_fidelity_paper(2, 4 * L) == want && closed_form_infidelity(2, L) == want;
    }
    o.pass = a && b && c;
    o.detail = std::string("7/8 ") + (a ? "ok" : "FAIL") + ", 4/5 " + (b ? "ok" : "FAIL") + ", d=2 L<=50 " +
               (c ? "ok" : "FAIL");
    return o;
}

Outcome ac3() {
    double worst = 0, worst_asym = 0;
    for (int d = 2; d <= 8; ++d) {
        for (int k = 1; k <= 100; ++k) worst = std::max(worst, theorem_bound_ratio(d, 2 * d * k));
        worst_asym = std::max(worst_asym, theorem_bound_ratio(d, 2000 * d));
    }
    return {worst <= kEnvelope && worst_asym <= kAsymptoticEnvelope,
            fmt("max ratio %.6f (<= 4)", worst) + fmt(", at n=2000d %.6f (<= 2.5)", worst_asym)};
}

Outcome ac4() {
    VerifyOptions opt;
    opt.max_d = 6;
    opt.ratio_max_L = 10;
    opt.max_L = 10;
    opt.seed = kSeed;
    opt.telescoping_trials = 100;
    opt.telescoping_max_k = 25;
    opt.amplitude_trials = 1000;
    opt.amplitude_max_dim = 16;
    const FamilyResult ratios = verify_dimension_ratios(opt);
    const FamilyResult tele = verify_telescoping(opt);
    const FamilyResult amp = verify_amplitude_reduction(opt);
    Outcome o;
    o.pass = ratios.passed && tele.passed && amp.passed;
    for (const auto* r : {&ratios, &tele, &amp}) {
        if (!o.detail.empty()) o.detail += ", ";
        o.detail += r->name + " " + std::to_string(r->checks) + (r->passed ? " ok" : " FAIL (" + r->counterexample + ")");
    }
    return o;
}

Outcome ac5() {
    Outcome o;
    double worst = 0;
    for (auto [d, n] : {std::pair{2, 4}, std::pair{3, 6}}) {
        const GTVectorSet set = extract_gt_vectors(d, n);
        const int L = n / (2 * d);
        for (int i = 0; i <= L; ++i)
            if (set.sector_dims[static_cast<std::size_t>(i)] != hook_length_dimension(gamma_shape(GammaParams(d, L, i)))) {
                o.pass = false;
                o.detail = "sector dimension mismatch d=" + std::to_string(d) + " i=" + std::to_string(i);
                return o;
            }
        for (const auto& r : verify_cg_embedding(set)) worst = std::max(worst, r.max_residual());
    }
    o.pass = worst < kCgResidual;
    o.detail = fmt("max residual %.3e (< 1e-8), sector dims = hook lengths", worst);
    return o;
}

Outcome ac6() {
    Outcome o;
    for (auto [d, n] : {std::pair{2, 4}, std::pair{3, 6}}) {
        const MCPair est = mc_protocol(extract_gt_vectors(d, n), MCOptions{kMcSamples, kSeed, false, std::nullopt});
        const double exact = to_double(expected_fidelity_paper(d, n));
        const double zf = (est.fidelity.mean - exact) / est.fidelity.standard_error;
        const double zt = (est.total_probability.mean - 1) / est.total_probability.standard_error;
        o.pass = o.pass && std::abs(zf) <= kSigmas && std::abs(zt) <= kSigmas;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += "d=" + std::to_string(d) + fmt(" F=%.4f", est.fidelity.mean) + fmt(" (z=%+.2f)", zf) +
                    fmt(" T=%.4f", est.total_probability.mean) + fmt(" (z=%+.2f)", zt);
    }
    return o;
}

Outcome ac7() {
    Outcome o;
    double min_gap = 1e9, max_gap = 0;
    for (int d = 2; d <= 6; ++d)
        for (int L = 1; L <= 12; ++L) {
            const FidelityReport r = fidelity_report(d, 2 * d * L);
            const double paper = to_double(r.fidelity_exact);
            if (r.optimal_rayleigh < paper - kSandwichSlack || r.optimal_rayleigh > 1 + kSandwichSlack) {
                o.pass = false;
                o.detail = "sandwich violated at d=" + std::to_string(d) + " L=" + std::to_string(L);
                return o;
            }
            min_gap = std::min(min_gap, r.gap_ratio());
            max_gap = std::max(max_gap, r.gap_ratio());
        }
    o.detail = fmt("gap ratio in [%.4f, ", min_gap) + fmt("%.4f] (reported)", max_gap);
    return o;
}

Outcome ac8() {
    Outcome o;
    double worst = 0;
    for (int d : {2, 4, 8})
        for (double eps : {0.5, 0.2, 0.1, 0.05}) {
            const int n = plan_queries(d, eps);
            const int L = n / (2 * d);
            const bool within = closed_form_infidelity(d, L) <= exact_rational(eps) * exact_rational(eps) / 100;
            const double ref = std::min(std::pow(d, 1.5) / eps, d / (eps * eps));
            worst = std::max(worst, n / ref);
            if (!within || n % (2 * d) != 0) {
                o.pass = false;
                o.detail = "target missed at d=" + std::to_string(d) + fmt(" eps=%g", eps);
                return o;
            }
        }
    o.pass = worst <= kPlannerConstant;
    o.detail = fmt("max n / min(d^1.5/eps, d/eps^2) = %.3f (<= 60)", worst);
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "exact identity chain", 10, ac1},   {"AC2", "golden fidelities", 0, ac2},
        {"AC3", "infidelity envelope", 5, ac3},     {"AC4", "fact suite", 0, ac4},
        {"AC5", "simulator CG check", 30, ac5},     {"AC6", "simulator Monte Carlo", 120, ac6},
        {"AC7", "optimizer sanity", 0, ac7},        {"AC8", "query planner", 0, ac8},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0 && secs > c.time_limit) {
            o.pass = false;
            o.detail += fmt("; over time limit %.0fs", c.time_limit);
        }
        std::printf("[%s] %s %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
