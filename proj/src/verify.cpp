#include "slopeflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

#include "slopeflow/greens.hpp"
#include "slopeflow/linearize.hpp"
#include "slopeflow/power.hpp"

namespace slopeflow {

namespace {

constexpr double kNodalTol = 1e-10;

const char* outcome_name(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::Pass: return "pass";
        case CheckOutcome::Fail: return "fail";
        default: return "skipped";
    }
}

}  // namespace

CheckResult wmp_check(const ProblemSpec& spec, const SolutionProfile& profile) {
    CheckResult r;
    r.name = "weak-maximum-principle";
    if (spec.p <= 2.0 || !spec.source.is_nonnegative()) {
        r.note = "hypotheses not met (needs p > 2 and f >= 0)";
        return r;
    }
    double min_u = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < profile.u.size(); ++i)
        if (profile.u[i] < min_u) {
            min_u = profile.u[i];
            arg = i;
        }
    r.witness_value = min_u;
    r.witness_x = profile.grid.nodes[arg];
    r.outcome = min_u >= -kNodalTol ? CheckOutcome::Pass : CheckOutcome::Fail;
    return r;
}

CheckResult smp_check(const ProblemSpec& spec, const SolutionProfile& profile,
                      const GreensTable& table, double fixed_point_tol) {
    CheckResult r;
    r.name = "strong-maximum-principle";
    if (spec.p <= 2.0 || !spec.source.is_nonnegative() || spec.source.is_zero()) {
        r.note = "hypotheses not met (needs p > 2, f >= 0, f != 0)";
        return r;
    }

    double min_interior = std::numeric_limits<double>::infinity();
    std::size_t arg = 1;
    for (std::size_t i = 1; i + 1 < profile.u.size(); ++i)
        if (profile.u[i] < min_interior) {
            min_interior = profile.u[i];
            arg = i;
        }
    r.witness_value = min_interior;
    r.witness_x = profile.grid.nodes[arg];
    if (min_interior <= 0.0) {
        r.outcome = CheckOutcome::Fail;
        r.note = "interior minimum not strictly positive";
        return r;
    }

    const auto [g_min, g_arg] = positivity_scan(table);
    if (g_min <= 0.0) {
        r.outcome = CheckOutcome::Fail;
        r.witness_value = g_min;
        r.witness_x = g_arg.first;
        r.note = "Green's function not positive on the interior grid";
        return r;
    }

    const SolutionProfile lin = green_solve(table, spec.source);
    double disc = 0.0;
    for (std::size_t i = 0; i < profile.u.size(); ++i)
        disc = std::max(disc, std::abs(lin.u[i] - profile.u[i]));
    if (disc > fixed_point_tol) {
        r.outcome = CheckOutcome::Fail;
        r.witness_value = disc;
        r.note = "linear solve does not reproduce the profile";
        return r;
    }
    r.outcome = CheckOutcome::Pass;
    return r;
}

double simon_inequality_check(double x, double y, double p) {
    if (p < 2.0) throw std::domain_error("simon_inequality_check: requires p >= 2");
    const double lhs = (phi_pow(p, x) - phi_pow(p, y)) * (x - y);
    return lhs - std::pow(2.0, 2.0 - p) * std::pow(std::abs(x - y), p);
}

double coercivity_gap(const ProblemSpec& spec) {
    const double t = std::tan(spec.phi);
    const double p = spec.p;
    auto psi = [&](double s) {
        return phi_pow(p, s + t) * s - 0.5 * std::pow(std::abs(s), p);
    };
    // Beyond |s| = S the |s|^p/2 deficit cannot win: psi(s) >= |s|^p(... ) > 0
    // once |s| dominates tan phi, so a bounded scan suffices.
    const double S = 8.0 * (1.0 + t);
    const int samples = 4096;
    double best = 0.0, arg = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double s = -S + 2.0 * S * i / samples;
        const double v = psi(s);
        if (v < best) {
            best = v;
            arg = s;
        }
    }
    // Golden-section refinement around the discrete minimizer.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = arg - 2.0 * S / samples, b = arg + 2.0 * S / samples;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = psi(c), fd = psi(d);
    for (int i = 0; i < 80 && b - a > 1e-14; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = psi(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = psi(d);
        }
    }
    best = std::min(best, psi(0.5 * (a + b)));
    return -std::min(0.0, best);
}

double main_part_monotonicity_check(double r, double s, double s_tilde,
                                    const ProblemSpec& spec, double k) {
    if (k <= 0.0 || k >= spec.H)
        throw std::invalid_argument("main_part_monotonicity_check: need 0 < k < H");
    if (spec.p < 2.0)
        throw std::domain_error("main_part_monotonicity_check: requires p >= 2");
    const double t = std::tan(spec.phi);
    const double thick = spec.H + truncate(r, k);
    const double cpow = std::pow(std::cos(spec.phi), spec.p - 1.0);
    auto a = [&](double z) { return thick * cpow * phi_pow(spec.p, z + t); };
    const double lhs = (a(s) - a(s_tilde)) * (s - s_tilde);
    return lhs - std::pow(2.0, 2.0 - spec.p) * thick * cpow *
                     std::pow(std::abs(s - s_tilde), spec.p);
}

bool VerificationReport::all_passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const CheckResult& c) { return c.outcome == CheckOutcome::Fail; });
}

std::string VerificationReport::to_json() const {
    nlohmann::json j;
    j["scenario_hash"] = scenario_hash;
    j["fixed_point_tol"] = fixed_point_tol;
    j["all_passed"] = all_passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"outcome", outcome_name(c.outcome)},
                               {"witness_value", c.witness_value},
                               {"witness_x", c.witness_x},
                               {"note", c.note}});
    }
    return j.dump(2);
}

std::string VerificationReport::to_table() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << c.name;
        for (std::size_t i = c.name.size(); i < 36; ++i) os << ' ';
        os << outcome_name(c.outcome);
        if (!c.note.empty()) os << "  (" << c.note << ')';
        os << '\n';
    }
    return os.str();
}

VerificationReport verify_scenario(const ProblemSpec& spec, const SolutionProfile& profile,
                                   double fixed_point_tol, unsigned seed) {
    VerificationReport report;
    report.fixed_point_tol = fixed_point_tol;
    {
        std::ostringstream h;
        h << std::hex << std::hash<std::string>{}(spec.source.to_json()) << '-' << spec.p << '-'
          << spec.H << '-' << spec.phi;
        report.scenario_hash = h.str();
    }

    report.checks.push_back(wmp_check(spec, profile));

    if (spec.p > 2.0 && spec.source.is_nonnegative() && !spec.source.is_zero() &&
        profile.min_head > 0.0) {
        const DiffusionProfile D = build_diffusion(spec, profile);
        const GreensTable table = build_greens(D, spec.lambda());
        report.checks.push_back(smp_check(spec, profile, table, fixed_point_tol));
    } else {
        CheckResult skip;
        skip.name = "strong-maximum-principle";
        skip.note = "hypotheses not met";
        report.checks.push_back(skip);
    }

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> xy(-10.0, 10.0);
    std::uniform_real_distribution<double> pe(2.0, 6.0);
    {
        CheckResult c;
        c.name = "simon-inequality-sweep";
        c.outcome = CheckOutcome::Pass;
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 20000; ++i) {
            const double x = xy(rng), y = xy(rng), p = pe(rng);
            const double m = simon_inequality_check(x, y, p);
            if (m < worst) {
                worst = m;
                c.witness_x = x;
            }
            if (m < -1e-12) c.outcome = CheckOutcome::Fail;
        }
        c.witness_value = worst;
        report.checks.push_back(c);
    }
    {
        CheckResult c;
        c.name = "coercivity-gap";
        const double mu = coercivity_gap(spec);
        c.witness_value = mu;
        c.outcome = (std::isfinite(mu) && mu >= 0.0) ? CheckOutcome::Pass : CheckOutcome::Fail;
        report.checks.push_back(c);
    }
    if (spec.p >= 2.0) {
        CheckResult c;
        c.name = "main-part-monotonicity-sweep";
        c.outcome = CheckOutcome::Pass;
        const double k = 0.5 * spec.H;
        std::uniform_real_distribution<double> rr(-3.0 * spec.H, 3.0 * spec.H);
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 20000; ++i) {
            const double m =
                main_part_monotonicity_check(rr(rng), xy(rng), xy(rng), spec, k);
            worst = std::min(worst, m);
            if (m < -1e-12) c.outcome = CheckOutcome::Fail;
        }
        c.witness_value = worst;
        report.checks.push_back(c);
    }
    if (spec.p > 2.0) {
        CheckResult c;
        c.name = "half-integral-bound-scan";
        c.outcome = CheckOutcome::Pass;
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 2000; ++i) {
            const double a = -50.0 + 100.0 * i / 2000.0;
            const double v = lemma_half_bound(a, spec.p);
            if (v < worst) {
                worst = v;
                c.witness_x = a;
            }
            if (v < 0.5 - 1e-12) c.outcome = CheckOutcome::Fail;
        }
        c.witness_value = worst;
        report.checks.push_back(c);
    }
    return report;
}

}  // namespace slopeflow
