/**
 * @file main.cpp
 * @brief Scenario runner: parses a JSON config, dispatches subcommands, and
 * emits CSV/JSON artifacts.
 *
 * Exit codes: 0 success, 1 solver failure, 2 config error, 3 unsupported
 * regime (the linearization pipeline requires p > 2).
 */

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "slopeflow/bounds.hpp"
#include "slopeflow/greens.hpp"
#include "slopeflow/linearize.hpp"
#include "slopeflow/oracle.hpp"
#include "slopeflow/steady.hpp"
#include "slopeflow/transient.hpp"
#include "slopeflow/verify.hpp"

namespace {

using nlohmann::json;
using namespace slopeflow;

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitUnsupportedRegime = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepAxes {
    std::vector<double> p{2.5, 3.0, 4.0};
    std::vector<double> phi{0.1, 0.3, 0.785398163397448279};
    std::vector<double> amplitude{0.25, 0.5, 1.0};
};

struct ScenarioConfig {
    ProblemSpec problem;
    int n_cells = 512;
    ShooterConfig shooter;
    FdConfig fd;
    double t_end = 15.0;
    double snapshot_every = 0.0;
    std::string outputs;  // may be overridden by --out / SLOPEFLOW_OUT
    unsigned seed = 1;
    SweepAxes sweep;
};

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) { known = true; break; }
        if (!known)
            throw ConfigError(std::string("unknown key \"") + item.key() + "\" in " + where);
    }
}

SourceFunction parse_source(const json& arr) {
    if (!arr.is_array()) throw ConfigError("\"source\" must be an array of pieces");
    std::vector<SourcePiece> pieces;
    for (const json& item : arr) {
        reject_unknown_keys(item, "source piece", {"interval", "coeffs"});
        if (!item.contains("interval") || !item.contains("coeffs"))
            throw ConfigError("source piece needs \"interval\" and \"coeffs\"");
        SourcePiece piece;
        piece.lo = item["interval"].at(0).get<double>();
        piece.hi = item["interval"].at(1).get<double>();
        piece.poly.coeffs = item["coeffs"].get<std::vector<double>>();
        pieces.push_back(std::move(piece));
    }
    return SourceFunction(std::move(pieces));
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ScenarioConfig cfg;
    reject_unknown_keys(doc, "config",
                        {"problem", "grid", "solver", "transient", "outputs", "seed", "sweep"});

    if (!doc.contains("problem")) throw ConfigError("config needs a \"problem\" object");
    const json& prob = doc["problem"];
    reject_unknown_keys(prob, "problem",
                        {"p", "H", "phi", "conductivity", "source", "H_minus", "H_plus"});
    if (prob.contains("p")) cfg.problem.p = prob["p"].get<double>();
    if (prob.contains("H")) cfg.problem.H = prob["H"].get<double>();
    if (prob.contains("phi")) cfg.problem.phi = prob["phi"].get<double>();
    if (prob.contains("conductivity"))
        cfg.problem.conductivity = prob["conductivity"].get<double>();
    if (prob.contains("source")) cfg.problem.source = parse_source(prob["source"]);
    cfg.problem.H_minus = cfg.problem.H;
    cfg.problem.H_plus = cfg.problem.H;
    if (prob.contains("H_minus")) cfg.problem.H_minus = prob["H_minus"].get<double>();
    if (prob.contains("H_plus")) cfg.problem.H_plus = prob["H_plus"].get<double>();

    if (doc.contains("grid")) {
        reject_unknown_keys(doc["grid"], "grid", {"n_cells"});
        if (doc["grid"].contains("n_cells")) cfg.n_cells = doc["grid"]["n_cells"].get<int>();
    }
    if (doc.contains("solver")) {
        const json& solver = doc["solver"];
        reject_unknown_keys(solver, "solver", {"shooter", "fd"});
        if (solver.contains("shooter")) {
            const json& sh = solver["shooter"];
            reject_unknown_keys(sh, "solver.shooter",
                                {"bracket_init_lo", "bracket_init_hi", "max_expansions",
                                 "root_tol", "head_guard_rel"});
            if (sh.contains("bracket_init_lo"))
                cfg.shooter.bracket_init_lo = sh["bracket_init_lo"].get<double>();
            if (sh.contains("bracket_init_hi"))
                cfg.shooter.bracket_init_hi = sh["bracket_init_hi"].get<double>();
            if (sh.contains("max_expansions"))
                cfg.shooter.max_expansions = sh["max_expansions"].get<int>();
            if (sh.contains("root_tol")) cfg.shooter.root_tol = sh["root_tol"].get<double>();
            if (sh.contains("head_guard_rel"))
                cfg.shooter.head_guard_rel = sh["head_guard_rel"].get<double>();
        }
        if (solver.contains("fd")) {
            const json& fd = solver["fd"];
            reject_unknown_keys(fd, "solver.fd",
                                {"newton_tol", "max_iters", "damping_min",
                                 "continuation_steps"});
            if (fd.contains("newton_tol")) cfg.fd.newton_tol = fd["newton_tol"].get<double>();
            if (fd.contains("max_iters")) cfg.fd.max_iters = fd["max_iters"].get<int>();
            if (fd.contains("damping_min"))
                cfg.fd.damping_min = fd["damping_min"].get<double>();
            if (fd.contains("continuation_steps"))
                cfg.fd.continuation_steps = fd["continuation_steps"].get<int>();
        }
    }
    if (doc.contains("transient")) {
        const json& tr = doc["transient"];
        reject_unknown_keys(tr, "transient", {"t_end", "snapshot_every"});
        if (tr.contains("t_end")) cfg.t_end = tr["t_end"].get<double>();
        if (tr.contains("snapshot_every"))
            cfg.snapshot_every = tr["snapshot_every"].get<double>();
    }
    if (doc.contains("outputs")) cfg.outputs = doc["outputs"].get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<unsigned>();
    if (doc.contains("sweep")) {
        const json& sw = doc["sweep"];
        reject_unknown_keys(sw, "sweep", {"p", "phi", "amplitude"});
        if (sw.contains("p")) cfg.sweep.p = sw["p"].get<std::vector<double>>();
        if (sw.contains("phi")) cfg.sweep.phi = sw["phi"].get<std::vector<double>>();
        if (sw.contains("amplitude"))
            cfg.sweep.amplitude = sw["amplitude"].get<std::vector<double>>();
    }

    try {
        cfg.problem.validate();
        cfg.fd.n_cells = cfg.n_cells;
        cfg.shooter.validate();
        if (cfg.n_cells < 16) throw std::invalid_argument("grid.n_cells must be >= 16");
        if (cfg.t_end <= 0.0) throw std::invalid_argument("transient.t_end must be positive");
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::filesystem::path resolve_out_dir(const ScenarioConfig& cfg, const std::string& flag_out) {
    std::string dir = "out";
    if (!cfg.outputs.empty()) dir = cfg.outputs;
    if (const char* env = std::getenv("SLOPEFLOW_OUT"); env && *env) dir = env;
    if (!flag_out.empty()) dir = flag_out;
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

int thread_budget() {
    if (const char* env = std::getenv("SLOPEFLOW_THREADS"); env && *env) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

const char* shoot_status_name(ShootStatus s) {
    switch (s) {
        case ShootStatus::Ok: return "ok";
        case ShootStatus::NoBracket: return "no-bracket";
        case ShootStatus::Infeasible: return "infeasible";
        case ShootStatus::Tolerance: return "tolerance";
    }
    return "unknown";
}

// --- steady -----------------------------------------------------------------

int cmd_steady(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    const Grid grid = Grid::uniform(cfg.n_cells);
    json report;
    report["existence_condition"] = existence_condition(cfg.problem);
    if (!existence_condition(cfg.problem))
        report["warnings"] = json::array(
            {"smallness condition ||f||_1 < H (sin phi)^(p-1) violated; "
             "the solve is attempted anyway (the condition is sufficient, not necessary)"});

    const ShootResult shoot = solve_steady(cfg.problem, grid, cfg.shooter);
    report["shoot_status"] = shoot_status_name(shoot.status);
    if (shoot.status != ShootStatus::Ok) {
        write_file(out / "report.json", report.dump(2) + "\n");
        std::cerr << "steady solve failed: " << shoot_status_name(shoot.status) << "\n";
        return kExitSolverFailure;
    }

    const FdResult fd = solve_fd(cfg.problem, cfg.fd);
    report["fd_status"] = fd.status == FdStatus::Ok ? "ok" : "diverged";

    const BoundsReport bounds = bounds_report(cfg.problem, shoot.profile);
    write_file(out / "steady.csv", shoot.profile.to_csv());
    write_file(out / "bounds.json", bounds.to_json() + "\n");

    report["s_end"] = shoot.profile.s_end;
    report["sup_u"] = shoot.profile.sup_norm_u();
    report["min_head"] = shoot.profile.min_head;
    report["residual_first_order"] = shoot.profile.residual_first_order;

    bool pass = true;
    const double residual_tol = 1e-8 * (1.0 + cfg.problem.source.l1_norm());
    pass &= shoot.profile.residual_first_order <= residual_tol;
    pass &= shoot.profile.min_head > 0.0;
    if (bounds.hf_holds)
        pass &= shoot.profile.sup_norm_u() <= bounds.sup_bound + 1e-9;

    if (fd.status == FdStatus::Ok) {
        write_file(out / "oracle.csv", fd.profile.to_csv());
        const auto [sup, l2] = compare_profiles(shoot.profile, fd.profile);
        report["oracle_sup_distance"] = sup;
        report["oracle_l2_distance"] = l2;
        pass &= sup <= 5e-5 * (1.0 + shoot.profile.sup_norm_u());
    } else {
        pass = false;
    }
    report["pass"] = pass;
    write_file(out / "report.json", report.dump(2) + "\n");
    std::cout << (pass ? "steady: pass" : "steady: fail") << "\n";
    return pass ? kExitOk : kExitSolverFailure;
}

// --- green ------------------------------------------------------------------

int cmd_green(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    if (cfg.problem.p <= 2.0) {
        std::cerr << "green: the linearization pipeline requires p > 2 "
                     "(1 < p <= 2 is unsupported)\n";
        return kExitUnsupportedRegime;
    }
    const Grid grid = Grid::uniform(cfg.n_cells);
    const ShootResult shoot = solve_steady(cfg.problem, grid, cfg.shooter);
    if (shoot.status != ShootStatus::Ok) {
        std::cerr << "steady solve failed: " << shoot_status_name(shoot.status) << "\n";
        return kExitSolverFailure;
    }

    const DiffusionProfile D = build_diffusion(cfg.problem, shoot.profile);
    const GreensTable table = build_greens(D, cfg.problem.lambda());

    write_file(out / "diffusion.csv", D.to_csv());
    json dside{{"floor_name", D.floor_name}, {"floor_used", D.floor_used},
               {"min_D", D.min_D()}};
    write_file(out / "diffusion.json", dside.dump(2) + "\n");
    write_file(out / "weights.csv", weights_csv(table));
    write_file(out / "greens.bin", dump_matrix(table));
    write_file(out / "greens.json", header_json(table) + "\n");

    const auto [gmin, argmin] = positivity_scan(table);
    const double kappa = lipschitz_estimate(table);
    const double fp = fixed_point_check(cfg.problem, shoot.profile);

    json report{{"greens_interior_min", gmin},
                {"greens_argmin", {argmin.first, argmin.second}},
                {"lipschitz_kappa", kappa},
                {"fixed_point_distance", fp},
                {"min_D", D.min_D()},
                {"floor_used", D.floor_used},
                {"floor_respected", D.min_D() >= D.floor_used}};
    const bool pass = gmin > 0.0 && D.min_D() >= D.floor_used;
    report["pass"] = pass;
    write_file(out / "report.json", report.dump(2) + "\n");
    std::cout << (pass ? "green: pass" : "green: fail") << "\n";
    return pass ? kExitOk : kExitSolverFailure;
}

// --- transient ----------------------------------------------------------------

int cmd_transient(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    const Grid grid = Grid::uniform(cfg.n_cells);

    // The steady profile is only a comparison target; its failure does not
    // block the time stepping (e.g. boundary levels differing from H).
    std::optional<SolutionProfile> steady;
    if (cfg.problem.H_minus == cfg.problem.H && cfg.problem.H_plus == cfg.problem.H) {
        const ShootResult shoot = solve_steady(cfg.problem, grid, cfg.shooter);
        if (shoot.status == ShootStatus::Ok) steady = shoot.profile;
    }

    TransientState state = TransientState::initial(cfg.problem, cfg.n_cells);
    int snapshot_index = 0;
    auto snapshot = [&](const TransientState& s) {
        std::ostringstream name;
        name << "snapshot_" << snapshot_index++ << ".csv";
        write_file(out / name.str(), s.to_csv());
    };
    const RunSummary summary =
        run(cfg.problem, std::move(state), cfg.t_end, cfg.snapshot_every,
            cfg.snapshot_every > 0.0 ? std::function<void(const TransientState&)>(snapshot)
                                     : std::function<void(const TransientState&)>(),
            steady ? &*steady : nullptr);

    write_file(out / "summary.json", summary.to_json() + "\n");
    std::cout << "transient: t_end=" << summary.t_end << " steps=" << summary.steps;
    if (steady) std::cout << " sup_distance_to_steady=" << summary.final_sup_distance;
    std::cout << "\n";
    return kExitOk;
}

// --- verify -------------------------------------------------------------------

int cmd_verify(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    const Grid grid = Grid::uniform(cfg.n_cells);
    const ShootResult shoot = solve_steady(cfg.problem, grid, cfg.shooter);
    if (shoot.status != ShootStatus::Ok) {
        std::cerr << "steady solve failed: " << shoot_status_name(shoot.status) << "\n";
        return kExitSolverFailure;
    }
    const double fp_tol = 1e-4 * (1.0 + shoot.profile.sup_norm_u());
    const VerificationReport report =
        verify_scenario(cfg.problem, shoot.profile, fp_tol, cfg.seed);
    write_file(out / "verify.json", report.to_json() + "\n");
    std::cout << report.to_table();
    return report.all_passed() ? kExitOk : kExitSolverFailure;
}

// --- sweep --------------------------------------------------------------------

struct SweepRow {
    double p = 0.0, phi = 0.0, amplitude = 0.0;
    std::string status = "pending";
    double sup_u = 0.0, sup_bound = 0.0, min_head = 0.0, residual = 0.0;
    bool verify_passed = false;
};

int cmd_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out) {
    std::vector<SweepRow> rows;
    for (double p : cfg.sweep.p)
        for (double phi : cfg.sweep.phi)
            for (double amp : cfg.sweep.amplitude)
                rows.push_back({p, phi, amp});

    auto run_point = [&](SweepRow& row) {
        ProblemSpec spec = cfg.problem;
        spec.p = row.p;
        spec.phi = row.phi;
        std::vector<SourcePiece> scaled = spec.source.pieces();
        for (auto& piece : scaled)
            for (double& c : piece.poly.coeffs) c *= row.amplitude;
        spec.source = SourceFunction(std::move(scaled));

        try {
            const Grid grid = Grid::uniform(cfg.n_cells);
            const ShootResult shoot = solve_steady(spec, grid, cfg.shooter);
            if (shoot.status != ShootStatus::Ok) {
                row.status = shoot_status_name(shoot.status);
                return;
            }
            row.status = "ok";
            row.sup_u = shoot.profile.sup_norm_u();
            row.sup_bound = sup_norm_bound(spec);
            row.min_head = shoot.profile.min_head;
            row.residual = shoot.profile.residual_first_order;
            const double fp_tol = 1e-4 * (1.0 + row.sup_u);
            row.verify_passed =
                verify_scenario(spec, shoot.profile, fp_tol, cfg.seed).all_passed();
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
        }
    };

    // Bounded worker pool; rows are written in enumeration order regardless
    // of completion order, so the report is deterministic.
    const int workers = std::min<int>(thread_budget(), static_cast<int>(rows.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1))
                run_point(rows[i]);
        });
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv.precision(17);
    csv << "p,phi,amplitude,status,sup_u,sup_bound,min_head,residual,verify_passed\n";
    bool all_ok = true;
    for (const SweepRow& row : rows) {
        csv << row.p << ',' << row.phi << ',' << row.amplitude << ',' << row.status << ','
            << row.sup_u << ',' << row.sup_bound << ',' << row.min_head << ','
            << row.residual << ',' << (row.verify_passed ? "true" : "false") << '\n';
        all_ok &= row.status == "ok" && row.verify_passed;
    }
    write_file(out / "sweep.csv", csv.str());
    std::cout << "sweep: " << rows.size() << " points, "
              << (all_ok ? "all passed" : "some failed") << "\n";
    return all_ok ? kExitOk : kExitSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slopeflow: steady/transient hillslope groundwater solver "
                 "with built-in theorem checks"};
    app.require_subcommand(1);

    std::string config_path, out_flag;
    std::optional<int> grid_flag;
    std::optional<unsigned> seed_flag;

    const std::vector<std::string> names{"steady", "green", "transient", "verify", "sweep"};
    for (const std::string& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "scenario config (JSON)")->required();
        sub->add_option("--out", out_flag, "output directory (overrides SLOPEFLOW_OUT)");
        sub->add_option("--grid", grid_flag, "override grid.n_cells");
        sub->add_option("--seed", seed_flag, "override the property-sweep seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfigError;
    }

    try {
        ScenarioConfig cfg = parse_config(config_path);
        if (grid_flag) {
            cfg.n_cells = *grid_flag;
            cfg.fd.n_cells = *grid_flag;
            if (cfg.n_cells < 16) throw ConfigError("--grid must be >= 16");
        }
        if (seed_flag) cfg.seed = *seed_flag;
        const std::filesystem::path out = resolve_out_dir(cfg, out_flag);

        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "steady") return cmd_steady(cfg, out);
        if (sub == "green") return cmd_green(cfg, out);
        if (sub == "transient") return cmd_transient(cfg, out);
        if (sub == "verify") return cmd_verify(cfg, out);
        if (sub == "sweep") return cmd_sweep(cfg, out);
        return kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}
