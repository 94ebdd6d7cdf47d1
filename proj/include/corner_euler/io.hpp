#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "simulation.hpp"

namespace corner_euler {

using json = nlohmann::ordered_json;

/// Shortest round-trippable decimal form, stable across runs and platforms.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// RFC-4180 field quoting; our fields are numeric so this is normally a
/// pass-through.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

/// Full run configuration, the unit of the CLI and of JSON config files.
struct RunConfig {
    ScenarioSpec scenario;
    double T = 1.0;
    double dt = 1e-2;
    int sample_every = 10;
    QuadratureConfig quad;
    std::string output_dir = "out";
    unsigned seed = 1234;
    int workers = 0;
};

inline void to_json(json& j, const RunConfig& c) {
    j = json{{"scenario",
              {{"kind", to_string(c.scenario.kind)},
               {"theta", c.scenario.theta},
               {"epsilon", c.scenario.epsilon},
               {"n_r", c.scenario.n_r},
               {"n_phi", c.scenario.n_phi},
               {"marker_starts", c.scenario.marker_starts},
               {"radius", c.scenario.radius}}},
             {"T", c.T},
             {"dt", c.dt},
             {"sample_every", c.sample_every},
             {"quad",
              {{"near_field_radius_factor", c.quad.near_field_radius_factor},
               {"refinement_depth", c.quad.refinement_depth},
               {"exclusion_radius", c.quad.exclusion_radius},
               {"blob_factor", c.quad.blob_factor}}},
             {"output_dir", c.output_dir},
             {"seed", c.seed},
             {"workers", c.workers}};
}

inline void from_json(const json& j, RunConfig& c) {
    if (j.contains("scenario")) {
        const json& s = j.at("scenario");
        if (s.contains("kind")) c.scenario.kind = scenario_kind_from_string(s.at("kind"));
        if (s.contains("theta")) s.at("theta").get_to(c.scenario.theta);
        if (s.contains("epsilon")) s.at("epsilon").get_to(c.scenario.epsilon);
        if (s.contains("n_r")) s.at("n_r").get_to(c.scenario.n_r);
        if (s.contains("n_phi")) s.at("n_phi").get_to(c.scenario.n_phi);
        if (s.contains("marker_starts")) s.at("marker_starts").get_to(c.scenario.marker_starts);
        if (s.contains("radius")) s.at("radius").get_to(c.scenario.radius);
    }
    if (j.contains("T")) j.at("T").get_to(c.T);
    if (j.contains("dt")) j.at("dt").get_to(c.dt);
    if (j.contains("sample_every")) j.at("sample_every").get_to(c.sample_every);
    if (j.contains("quad")) {
        const json& q = j.at("quad");
        if (q.contains("near_field_radius_factor"))
            q.at("near_field_radius_factor").get_to(c.quad.near_field_radius_factor);
        if (q.contains("refinement_depth")) q.at("refinement_depth").get_to(c.quad.refinement_depth);
        if (q.contains("exclusion_radius")) q.at("exclusion_radius").get_to(c.quad.exclusion_radius);
        if (q.contains("blob_factor")) q.at("blob_factor").get_to(c.quad.blob_factor);
    }
    if (j.contains("output_dir")) j.at("output_dir").get_to(c.output_dir);
    if (j.contains("seed")) j.at("seed").get_to(c.seed);
    if (j.contains("workers")) j.at("workers").get_to(c.workers);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    RunConfig c;
    from_json(j, c);
    return c;
}

/// series.csv schema: time,L,marker_0_x1,...,circulation,omega_min,omega_max
inline void write_series_csv(const std::string& path, std::span<const SampleRecord> samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    std::size_t nm = samples.empty() ? 0 : samples.front().marker_x1.size();
    out << "time,L";
    for (std::size_t m = 0; m < nm; ++m) out << ",marker_" << m << "_x1";
    out << ",circulation,omega_min,omega_max\n";
    for (const SampleRecord& s : samples) {
        out << csv_field(format_double(s.time)) << ',' << csv_field(format_double(s.lipschitz));
        for (double x : s.marker_x1) out << ',' << csv_field(format_double(x));
        out << ',' << csv_field(format_double(s.circulation)) << ','
            << csv_field(format_double(s.omega_min)) << ','
            << csv_field(format_double(s.omega_max)) << '\n';
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

/// Reads back the time and L columns of series.csv.
inline GrowthSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    GrowthSeries s;
    s.source = path;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string t, l;
        if (!std::getline(ss, t, ',') || !std::getline(ss, l, ',')) continue;
        s.times.push_back(std::stod(t));
        s.values.push_back(std::stod(l));
    }
    return s;
}

struct RunSummary {
    double theta = 0.0;
    double beta = 0.0;
    GrowthClassification classification;
    std::vector<double> arrival_times;  // NaN entries for markers that never arrived
    std::string scenario_kind;
    long projection_count = 0;
};

inline json summary_to_json(const RunSummary& s) {
    json arr = json::array();
    for (double t : s.arrival_times) {
        if (std::isfinite(t)) {
            arr.push_back(t);
        } else {
            arr.push_back(nullptr);
        }
    }
    return json{{"theta", s.theta},
                {"beta", s.beta},
                {"mode", to_string(s.classification.mode)},
                {"rate", s.classification.rate},
                {"r_squared", s.classification.r_squared},
                {"arrival_times", arr},
                {"scenario_kind", s.scenario_kind},
                {"projection_count", s.projection_count}};
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failure: " + path);
}

/// Full-state snapshot for resume.
inline json state_to_json(const SimulationState& st) {
    json cells = json::array();
    for (const VortexCell& c : st.cells) {
        cells.push_back({{"x", c.position.x1},
                         {"y", c.position.x2},
                         {"omega", c.omega},
                         {"area", c.area},
                         {"x0", c.initial_position.x1},
                         {"y0", c.initial_position.x2},
                         {"fp", {c.footprint.r0, c.footprint.r1, c.footprint.a0, c.footprint.a1}}});
    }
    json markers = json::array();
    for (const BoundaryMarker& m : st.markers) {
        json mj = {{"x1", m.x1}, {"omega0_value", m.omega0_value}};
        if (m.arrival_time) mj["arrival_time"] = *m.arrival_time;
        markers.push_back(mj);
    }
    return json{{"time", st.time},
                {"theta", st.dom.theta()},
                {"radius", st.dom.radius()},
                {"omega0_at_corner", st.omega0_at_corner},
                {"step_count", st.step_count},
                {"projection_count", st.projection_count},
                {"cells", cells},
                {"markers", markers}};
}

inline SimulationState state_from_json(const json& j) {
    SimulationState st;
    st.dom = SectorDomain(j.at("theta").get<double>(), j.at("radius").get<double>());
    st.time = j.at("time").get<double>();
    st.omega0_at_corner = j.at("omega0_at_corner").get<double>();
    st.step_count = j.value("step_count", 0L);
    st.projection_count = j.value("projection_count", 0L);
    for (const json& cj : j.at("cells")) {
        VortexCell c;
        c.position = {cj.at("x").get<double>(), cj.at("y").get<double>()};
        c.omega = cj.at("omega").get<double>();
        c.area = cj.at("area").get<double>();
        c.initial_position = {cj.at("x0").get<double>(), cj.at("y0").get<double>()};
        if (cj.contains("fp")) {
            const auto& fp = cj.at("fp");
            c.footprint = {fp.at(0).get<double>(), fp.at(1).get<double>(), fp.at(2).get<double>(),
                           fp.at(3).get<double>()};
        }
        st.cells.push_back(c);
    }
    for (const json& mj : j.at("markers")) {
        BoundaryMarker m;
        m.x1 = mj.at("x1").get<double>();
        m.omega0_value = mj.at("omega0_value").get<double>();
        if (mj.contains("arrival_time")) m.arrival_time = mj.at("arrival_time").get<double>();
        m.history.emplace_back(st.time, m.x1);
        st.markers.push_back(std::move(m));
    }
    return st;
}

inline void write_snapshot(const std::string& path, const SimulationState& st) {
    write_json(path, state_to_json(st));
}

inline SimulationState read_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open snapshot: " + path);
    json j;
    in >> j;
    return state_from_json(j);
}

/// One JSON-lines record per sample, mirroring the CSV columns.
inline void write_snapshots_jsonl(const std::string& path, std::span<const SampleRecord> samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const SampleRecord& s : samples) {
        json j = {{"time", s.time},
                  {"L", std::isfinite(s.lipschitz) ? json(s.lipschitz) : json(nullptr)},
                  {"marker_x1", s.marker_x1},
                  {"circulation", s.circulation},
                  {"omega_min", s.omega_min},
                  {"omega_max", s.omega_max}};
        out << j.dump() << '\n';
    }
}

inline RunSummary summarize_run(const RunConfig& cfg, const RunResult& res) {
    RunSummary s;
    s.theta = cfg.scenario.theta;
    s.beta = kPi / cfg.scenario.theta;
    s.scenario_kind = to_string(cfg.scenario.kind);
    s.classification = classify_growth(res.series, res.any_arrival);
    s.projection_count = res.state.projection_count;
    for (const BoundaryMarker& m : res.state.markers) {
        s.arrival_times.push_back(
            m.arrival_time ? *m.arrival_time : std::numeric_limits<double>::quiet_NaN());
    }
    return s;
}

/// Writes series.csv + summary.json (+ snapshots.jsonl) into dir.
inline void write_outputs(const RunConfig& cfg, const RunResult& res, const std::string& dir,
                          bool with_jsonl = false) {
    std::filesystem::create_directories(dir);
    write_series_csv(dir + "/series.csv", res.samples);
    write_json(dir + "/summary.json", summary_to_json(summarize_run(cfg, res)));
    if (with_jsonl) write_snapshots_jsonl(dir + "/snapshots.jsonl", res.samples);
}

}  // namespace corner_euler
