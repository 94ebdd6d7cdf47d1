// Command-line front end: single runs, theta sweeps, velocity-law probes,
// Green-function self-tests and re-classification of existing series files.

#include <CLI11.hpp>

#include <iostream>

#include "corner_euler/io.hpp"

namespace ce = corner_euler;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string resume_path;
    std::string snapshot_out;
    double theta = 0.0;  // 0 = not set
    double T = -1.0;
    double dt = -1.0;
    int nr = 0;
    int nphi = 0;
    std::string kind;
    double epsilon = -1.0;
    bool quiet = false;
    bool jsonl = false;
};

ce::RunConfig assemble_config(const CliOptions& o) {
    ce::RunConfig cfg;
    if (!o.config_path.empty()) cfg = ce::load_config(o.config_path);
    if (o.theta > 0.0) cfg.scenario.theta = o.theta;
    if (!o.kind.empty()) cfg.scenario.kind = ce::scenario_kind_from_string(o.kind);
    if (o.epsilon > 0.0) cfg.scenario.epsilon = o.epsilon;
    if (o.T >= 0.0) cfg.T = o.T;
    if (o.dt > 0.0) cfg.dt = o.dt;
    if (o.nr > 0) cfg.scenario.n_r = o.nr;
    if (o.nphi > 0) cfg.scenario.n_phi = o.nphi;
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    return cfg;
}

ce::ScenarioKind kind_for_angle(double theta) {
    if (theta < ce::kPi / 2.0) return ce::ScenarioKind::A_abs_plus_one;
    if (theta == ce::kPi / 2.0) return ce::ScenarioKind::B_capped_ramp;
    if (theta < ce::kPi) return ce::ScenarioKind::C_abs;
    return ce::ScenarioKind::D_odd_reflection;
}

int do_run(const CliOptions& o) {
    ce::RunConfig cfg = assemble_config(o);
    cfg.scenario.validate();
    ce::RunParams p;
    p.T = cfg.T;
    p.dt = cfg.dt;
    p.sample_every = cfg.sample_every;
    p.quad = cfg.quad;
    p.workers = cfg.workers;

    ce::SimulationState st;
    if (!o.resume_path.empty()) {
        st = ce::read_snapshot(o.resume_path);
        p.T = cfg.T - st.time;  // continue on the same dt grid up to the requested T
        if (p.T < 0.0) throw ce::ConfigError("resume: snapshot time already past T");
    } else {
        st = ce::make_initial_state(cfg.scenario);
    }
    ce::RunResult res = ce::run_simulation(std::move(st), p);
    ce::write_outputs(cfg, res, cfg.output_dir, o.jsonl);
    if (!o.snapshot_out.empty()) ce::write_snapshot(o.snapshot_out, res.state);
    if (!o.quiet) {
        const ce::RunSummary s = ce::summarize_run(cfg, res);
        std::cout << "theta=" << cfg.scenario.theta << " mode=" << to_string(s.classification.mode)
                  << " rate=" << s.classification.rate << " r2=" << s.classification.r_squared
                  << " -> " << cfg.output_dir << "\n";
    }
    return 0;
}

int do_sweep(const CliOptions& o) {
    // one command across all three theorem regimes
    const std::vector<double> thetas = {ce::kPi / 4.0,       ce::kPi / 3.0,
                                        5.0 * ce::kPi / 12.0, ce::kPi / 2.0,
                                        7.0 * ce::kPi / 12.0, 2.0 * ce::kPi / 3.0,
                                        3.0 * ce::kPi / 4.0,  4.0 * ce::kPi / 3.0};
    ce::RunConfig base = assemble_config(o);
    const std::string root = base.output_dir;
    ce::json table = ce::json::array();
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        ce::RunConfig cfg = base;
        cfg.scenario.theta = thetas[i];
        cfg.scenario.kind = kind_for_angle(thetas[i]);
        cfg.output_dir = root + "/theta_" + std::to_string(i);
        ce::RunParams p;
        p.T = cfg.T;
        p.dt = cfg.dt;
        p.sample_every = cfg.sample_every;
        p.quad = cfg.quad;
        p.workers = cfg.workers;
        ce::RunResult res = ce::run_scenario(cfg.scenario, p);
        ce::write_outputs(cfg, res, cfg.output_dir, o.jsonl);
        const ce::RunSummary s = ce::summarize_run(cfg, res);
        table.push_back(ce::summary_to_json(s));
        if (!o.quiet) {
            std::cout << "theta=" << thetas[i] << " kind=" << to_string(cfg.scenario.kind)
                      << " mode=" << to_string(s.classification.mode) << "\n";
        }
    }
    std::filesystem::create_directories(root);
    ce::write_json(root + "/sweep.json", table);
    return 0;
}

int do_velocity_probe(const CliOptions& o, const std::string& direction) {
    const double theta = o.theta > 0.0 ? o.theta : ce::kPi / 3.0;
    const ce::SectorDomain dom(theta);
    const int nr = o.nr > 0 ? o.nr : 64;
    const int nphi = o.nphi > 0 ? o.nphi : 64;
    const auto cells = ce::build_cells(dom, nr, nphi, [](ce::PhysicalPoint) { return 1.0; });
    std::vector<double> radii;
    for (int i = 0; i < 12; ++i) {
        radii.push_back(dom.radius() * 1e-3 * std::pow(100.0, i / 11.0));
    }
    const ce::ProbeDirection dir =
        direction == "bisector" ? ce::ProbeDirection::bisector : ce::ProbeDirection::edge;
    const ce::ExponentFit fit = ce::velocity_exponent_probe(dom, cells, radii, dir);
    ce::json j = {{"theta", theta},
                  {"beta", dom.beta()},
                  {"direction", direction},
                  {"slope", fit.slope},
                  {"r_squared", fit.r_squared},
                  {"points_used", fit.points_used},
                  {"compensated_min", fit.compensated_min},
                  {"compensated_max", fit.compensated_max},
                  {"radii", fit.radii},
                  {"speeds", fit.speeds}};
    if (!o.out_dir.empty()) {
        std::filesystem::create_directories(o.out_dir);
        ce::write_json(o.out_dir + "/velocity_probe.json", j);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int do_green_selftest(const CliOptions& o, int samples) {
    const double theta = o.theta > 0.0 ? o.theta : ce::kPi / 2.0;
    const ce::GreenSelftestReport rep = ce::green_selftest(ce::SectorDomain(theta), samples);
    ce::json j = {{"boundary_residual", rep.boundary_residual},
                  {"symmetry_residual", rep.symmetry_residual},
                  {"harmonicity_residual", rep.harmonicity_residual},
                  {"harmonicity_ratio", rep.harmonicity_ratio},
                  {"samples", rep.samples}};
    if (!o.out_dir.empty()) {
        std::filesystem::create_directories(o.out_dir);
        ce::write_json(o.out_dir + "/green_selftest.json", j);
    }
    std::cout << j.dump(2) << "\n";
    const double tol = 1e-10;
    return (rep.boundary_residual < tol && rep.symmetry_residual < tol) ? 0 : 1;
}

int do_classify(const std::string& csv_path) {
    const ce::GrowthSeries s = ce::read_series_csv(csv_path);
    const ce::GrowthClassification c = ce::classify_growth(s);
    ce::json j = {{"mode", to_string(c.mode)},
                  {"rate", c.rate},
                  {"r_squared", c.r_squared},
                  {"window", {c.window_begin, c.window_end}}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian 2D Euler simulator on sector domains with corner diagnostics"};
    app.require_subcommand(1);
    CliOptions o;
    app.add_flag("--quiet", o.quiet, "suppress progress output");

    auto add_common = [&](CLI::App* c) {
        c->add_option("--theta", o.theta, "corner angle in radians");
        c->add_option("--T", o.T, "final time");
        c->add_option("--dt", o.dt, "time step");
        c->add_option("--nr", o.nr, "radial cells");
        c->add_option("--nphi", o.nphi, "angular cells");
        c->add_option("--out", o.out_dir, "output directory");
    };

    CLI::App* run = app.add_subcommand("run", "run one scenario and write CSV + JSON summary");
    run->add_option("--config", o.config_path, "JSON config file");
    run->add_option("--kind", o.kind, "scenario kind A|B|C|D");
    run->add_option("--epsilon", o.epsilon, "ramp width for kind B");
    run->add_option("--resume", o.resume_path, "resume from a state snapshot");
    run->add_option("--snapshot-out", o.snapshot_out, "write the final state snapshot here");
    run->add_flag("--jsonl", o.jsonl, "also write snapshots.jsonl");
    add_common(run);

    CLI::App* sweep = app.add_subcommand("sweep", "preset theta sweep across all regimes");
    sweep->add_option("--config", o.config_path, "JSON config file (base settings)");
    sweep->add_flag("--jsonl", o.jsonl, "also write snapshots.jsonl");
    add_common(sweep);

    std::string direction = "edge";
    CLI::App* probe = app.add_subcommand("velocity-probe", "near-corner velocity exponent report");
    probe->add_option("--direction", direction, "edge|bisector");
    add_common(probe);

    int samples = 1000;
    CLI::App* selftest = app.add_subcommand("green-selftest", "Green-function residual report");
    selftest->add_option("--samples", samples, "sample count");
    add_common(selftest);

    std::string csv_path;
    CLI::App* classify = app.add_subcommand("classify", "re-fit an existing series.csv");
    classify->add_option("--csv", csv_path, "path to series.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return do_run(o);
        if (sweep->parsed()) return do_sweep(o);
        if (probe->parsed()) return do_velocity_probe(o, direction);
        if (selftest->parsed()) return do_green_selftest(o, samples);
        if (classify->parsed()) return do_classify(csv_path);
    } catch (const ce::IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << "\n";
        return 3;
    } catch (const ce::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
