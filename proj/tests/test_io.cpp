#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "corner_euler/io.hpp"

using namespace corner_euler;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("corner_euler_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_config() {
    RunConfig cfg;
    cfg.scenario.kind = ScenarioKind::A_abs_plus_one;
    cfg.scenario.theta = kPi / 3.0;
    cfg.scenario.n_r = 8;
    cfg.scenario.n_phi = 8;
    cfg.scenario.marker_starts = {0.05, 0.1};
    cfg.T = 0.1;
    cfg.dt = 1e-2;
    cfg.sample_every = 2;
    return cfg;
}

RunParams params_of(const RunConfig& cfg) {
    RunParams p;
    p.T = cfg.T;
    p.dt = cfg.dt;
    p.sample_every = cfg.sample_every;
    p.quad = cfg.quad;
    p.workers = cfg.workers;
    return p;
}

}  // namespace

TEST_CASE("double formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, -2.5e8, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("1.25") == "1.25");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("config JSON round trip") {
    TempDir tmp;
    RunConfig cfg = small_config();
    cfg.quad.refinement_depth = 5;
    cfg.quad.blob_factor = 0.5;
    cfg.seed = 99;
    cfg.workers = 2;
    json j;
    to_json(j, cfg);
    write_json(tmp.file("config.json"), j);
    const RunConfig back = load_config(tmp.file("config.json"));
    CHECK(back.scenario.kind == cfg.scenario.kind);
    CHECK(back.scenario.theta == cfg.scenario.theta);
    CHECK(back.scenario.n_r == cfg.scenario.n_r);
    CHECK(back.scenario.marker_starts == cfg.scenario.marker_starts);
    CHECK(back.T == cfg.T);
    CHECK(back.dt == cfg.dt);
    CHECK(back.quad.refinement_depth == 5);
    CHECK(back.quad.blob_factor == 0.5);
    CHECK(back.seed == 99);
    CHECK(back.workers == 2);
}

TEST_CASE("invalid config files fail loudly") {
    TempDir tmp;
    CHECK_THROWS_AS(load_config(tmp.file("missing.json")), ConfigError);
    std::ofstream(tmp.file("bad.json")) << "{not json";
    CHECK_THROWS_AS(load_config(tmp.file("bad.json")), ConfigError);
}

TEST_CASE("series CSV schema and round trip") {
    TempDir tmp;
    std::vector<SampleRecord> samples(2);
    samples[0] = {0.0, 1.5, {0.05, 0.1}, 0.2, 1.0, 1.49};
    samples[1] = {0.1, 1.75, {0.04, 0.09}, 0.2, 1.0, 1.49};
    write_series_csv(tmp.file("series.csv"), samples);

    const std::string text = slurp(tmp.file("series.csv"));
    CHECK(text.rfind("time,L,marker_0_x1,marker_1_x1,circulation,omega_min,omega_max\n", 0) == 0);

    const GrowthSeries s = read_series_csv(tmp.file("series.csv"));
    REQUIRE(s.times.size() == 2);
    CHECK(s.times[1] == 0.1);
    CHECK(s.values[0] == 1.5);
    CHECK(s.values[1] == 1.75);
}

TEST_CASE("repeated writes are byte identical") {
    TempDir tmp;
    const RunConfig cfg = small_config();
    const RunResult res = run_scenario(cfg.scenario, params_of(cfg));
    write_outputs(cfg, res, tmp.file("a"), true);
    write_outputs(cfg, res, tmp.file("b"), true);
    CHECK(slurp(tmp.file("a/series.csv")) == slurp(tmp.file("b/series.csv")));
    CHECK(slurp(tmp.file("a/summary.json")) == slurp(tmp.file("b/summary.json")));
    CHECK(slurp(tmp.file("a/snapshots.jsonl")) == slurp(tmp.file("b/snapshots.jsonl")));
    CHECK_FALSE(slurp(tmp.file("a/series.csv")).empty());
}

TEST_CASE("snapshot round trip preserves the state exactly") {
    TempDir tmp;
    const RunConfig cfg = small_config();
    RunParams p = params_of(cfg);
    const RunResult res = run_scenario(cfg.scenario, p);
    write_snapshot(tmp.file("state.json"), res.state);
    const SimulationState back = read_snapshot(tmp.file("state.json"));
    CHECK(back.time == res.state.time);
    CHECK(back.step_count == res.state.step_count);
    REQUIRE(back.cells.size() == res.state.cells.size());
    for (std::size_t i = 0; i < back.cells.size(); ++i) {
        CHECK(back.cells[i].position.x1 == res.state.cells[i].position.x1);
        CHECK(back.cells[i].position.x2 == res.state.cells[i].position.x2);
        CHECK(back.cells[i].omega == res.state.cells[i].omega);
        CHECK(back.cells[i].area == res.state.cells[i].area);
        CHECK(back.cells[i].footprint.r0 == res.state.cells[i].footprint.r0);
        CHECK(back.cells[i].footprint.r1 == res.state.cells[i].footprint.r1);
    }
    REQUIRE(back.markers.size() == res.state.markers.size());
    for (std::size_t i = 0; i < back.markers.size(); ++i) {
        CHECK(back.markers[i].x1 == res.state.markers[i].x1);
    }
}

TEST_CASE("split run equals straight run through a snapshot") {
    TempDir tmp;
    RunConfig cfg = small_config();
    cfg.T = 0.1;
    RunParams p = params_of(cfg);

    const RunResult full = run_scenario(cfg.scenario, p);

    RunParams half = p;
    half.T = 0.05;
    const RunResult first = run_scenario(cfg.scenario, half);
    write_snapshot(tmp.file("mid.json"), first.state);
    SimulationState mid = read_snapshot(tmp.file("mid.json"));
    const RunResult second = run_simulation(mid, half);

    REQUIRE(second.state.cells.size() == full.state.cells.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < full.state.cells.size(); ++i) {
        worst = std::max(worst, distance(second.state.cells[i].position,
                                         full.state.cells[i].position));
    }
    for (std::size_t i = 0; i < full.state.markers.size(); ++i) {
        worst = std::max(worst, std::abs(second.state.markers[i].x1 - full.state.markers[i].x1));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("summary JSON fields") {
    const RunConfig cfg = small_config();
    const RunResult res = run_scenario(cfg.scenario, params_of(cfg));
    const json j = summary_to_json(summarize_run(cfg, res));
    CHECK(j.at("theta").get<double>() == cfg.scenario.theta);
    CHECK(j.at("beta").get<double>() == Catch::Approx(3.0));
    CHECK(j.at("scenario_kind").get<std::string>() == "A");
    CHECK(j.contains("mode"));
    CHECK(j.contains("rate"));
    CHECK(j.at("arrival_times").size() == cfg.scenario.marker_starts.size());
}

TEST_CASE("classification from a CSV fixture") {
    TempDir tmp;
    std::vector<SampleRecord> samples;
    for (int i = 0; i <= 50; ++i) {
        const double t = 0.1 * i;
        samples.push_back({t, 2.0 * std::exp(1.2 * t), {0.1}, 0.0, 1.0, 1.5});
    }
    write_series_csv(tmp.file("series.csv"), samples);
    const GrowthSeries s = read_series_csv(tmp.file("series.csv"));
    const GrowthClassification c = classify_growth(s);
    CHECK(c.mode == GrowthMode::exponential);
    CHECK(c.rate == Catch::Approx(1.2).epsilon(0.01));
}
