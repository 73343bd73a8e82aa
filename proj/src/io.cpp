#include "traceshape/io.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace traceshape {

using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << text;
}

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw std::runtime_error("scenario config: field '" + field + "': " + what);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("scenario config: ") + e.what());
  }

  if (!j.contains("polygon")) config_error("polygon", "missing");
  std::vector<Point> vertices;
  for (const auto& v : j.at("polygon")) {
    if (!v.is_array() || v.size() != 2) config_error("polygon", "vertices must be [x, y]");
    vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
  }

  Scenario s{.polygon = PolygonTarget::from_vertices(vertices)};
  s.omega_radius = j.value("omega_radius", 200.0);
  s.r_max = j.value("r_max", 100.0);
  s.n_s = j.value("n_s", 2000);
  s.report_period = j.value("report_period", 1.0);
  if (j.contains("duration") && !j.at("duration").is_null()) {
    s.duration = j.at("duration").get<double>();
  }
  s.epsilon_s = j.value("epsilon_s", 0.0);
  s.epsilon_l = j.value("epsilon_l", 0.0);
  s.seed = j.value("seed", 0ULL);
  s.v = j.value("v", 1.0);
  std::string mode = j.value("line_mode", std::string("monitor"));
  if (mode == "monitor") {
    s.line_mode = LineMode::kMonitorOmega;
  } else if (mode == "through") {
    s.line_mode = LineMode::kThroughOmega;
  } else {
    config_error("line_mode", "expected 'monitor' or 'through'");
  }
  if (j.contains("thetas")) {
    for (const auto& th : j.at("thetas")) s.thetas.push_back(th.get<double>());
  } else {
    s.thetas.push_back(j.value("theta", kPi / 2.0));
  }

  if (s.omega_radius <= 0.0) config_error("omega_radius", "must be positive");
  if (s.r_max <= 0.0) config_error("r_max", "must be positive");
  if (s.report_period <= 0.0) config_error("report_period", "must be positive");
  if (s.n_s < 0) config_error("n_s", "must be nonnegative");
  if (s.epsilon_l < 0.0 || s.epsilon_l > 1.0) config_error("epsilon_l", "must be in [0, 1]");
  if (s.epsilon_s < 0.0) config_error("epsilon_s", "must be nonnegative");
  for (const auto& p : vertices) {
    if (p.norm() > s.omega_radius) {
      config_error("polygon", "target must lie inside the monitored disk");
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  return parse_scenario(slurp(file));
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["omega_radius"] = s.omega_radius;
  j["r_max"] = s.r_max;
  j["n_s"] = s.n_s;
  j["report_period"] = s.report_period;
  if (s.duration) j["duration"] = *s.duration;
  j["epsilon_s"] = s.epsilon_s;
  j["epsilon_l"] = s.epsilon_l;
  j["seed"] = s.seed;
  j["v"] = s.v;
  j["line_mode"] = s.line_mode == LineMode::kMonitorOmega ? "monitor" : "through";
  if (s.thetas.size() == 1) {
    j["theta"] = s.thetas.front();
  } else {
    j["thetas"] = s.thetas;
  }
  json poly = json::array();
  for (const auto& v : s.polygon.vertices()) poly.push_back({v.x(), v.y()});
  j["polygon"] = poly;
  return j.dump(2) + "\n";
}

void write_traces(const std::filesystem::path& file,
                  const std::vector<std::vector<TraceSample>>& traces) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& trace : traces) {
    for (const auto& s : trace) {
      json j;
      j["sensor"] = s.sensor_id;
      j["t"] = s.t;
      if (s.reading) {
        j["r"] = *s.reading;
      } else {
        j["r"] = nullptr;
      }
      out << j.dump() << '\n';
    }
  }
}

std::vector<std::vector<TraceSample>> read_traces(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<std::vector<TraceSample>> traces;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      TraceSample s;
      s.sensor_id = j.at("sensor").get<int>();
      s.t = j.at("t").get<double>();
      if (!j.at("r").is_null()) s.reading = j.at("r").get<double>();
      if (s.sensor_id < 0) throw std::runtime_error("negative sensor id");
      if (traces.size() <= static_cast<std::size_t>(s.sensor_id)) {
        traces.resize(static_cast<std::size_t>(s.sensor_id) + 1);
      }
      traces[static_cast<std::size_t>(s.sensor_id)].push_back(s);
    } catch (const std::exception& e) {
      throw std::runtime_error("trace file " + file.string() + " line " +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  return traces;
}

void write_observations(const std::filesystem::path& file, const ObservationSet& set) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& o : set.edges) {
    json j{{"kind", "edge"}, {"sensor", o.sensor_id}, {"k", o.k}, {"l_d", o.l_d},
           {"s_d", o.s_d}};
    out << j.dump() << '\n';
  }
  for (const auto& o : set.vertices) {
    json j{{"kind", "vertex"}, {"sensor", o.sensor_id}, {"k", o.k}, {"s_a", o.s_a},
           {"s_b", o.s_b}};
    out << j.dump() << '\n';
  }
  for (const auto& o : set.adjacencies) {
    json j{{"kind", "adjacency"}, {"sensor", o.sensor_id}, {"k_a", o.k_a}, {"k_b", o.k_b}};
    out << j.dump() << '\n';
  }
}

ObservationSet read_observations(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  ObservationSet set;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      std::string kind = j.at("kind").get<std::string>();
      if (kind == "edge") {
        set.edges.push_back(WholeEdgeObservation{j.at("sensor").get<int>(), j.at("k").get<int>(),
                                                 j.at("l_d").get<double>(),
                                                 j.at("s_d").get<double>()});
      } else if (kind == "vertex") {
        set.vertices.push_back(VertexObservation{j.at("sensor").get<int>(), j.at("k").get<int>(),
                                                 j.at("s_a").get<double>(),
                                                 j.at("s_b").get<double>()});
      } else if (kind == "adjacency") {
        set.adjacencies.push_back(AdjacencyObservation{j.at("sensor").get<int>(),
                                                       j.at("k_a").get<int>(),
                                                       j.at("k_b").get<int>()});
      } else {
        throw std::runtime_error("unknown kind '" + kind + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("observations file " + file.string() + " line " +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  return set;
}

void write_known_params(const std::filesystem::path& file, const Scenario& scenario) {
  json j;
  j["r_max"] = scenario.r_max;
  j["l_omega"] = kTwoPi * scenario.omega_radius;
  j["report_period"] = scenario.report_period;
  json sensors = json::array();
  for (int i = 0; i < scenario.n_s; ++i) {
    sensors.push_back({{"id", i}, {"theta", scenario.theta_for(i)}, {"v", scenario.v}});
  }
  j["sensors"] = sensors;
  spit(file, j.dump(2) + "\n");
}

KnownParams read_known_params(const std::filesystem::path& file) {
  json j = json::parse(slurp(file));
  for (const auto& [key, value] : j.items()) {
    if (key != "r_max" && key != "l_omega" && key != "report_period" && key != "sensors") {
      throw std::runtime_error("known params: unexpected field '" + key + "'");
    }
  }
  KnownParams known;
  known.r_max = j.at("r_max").get<double>();
  known.l_omega = j.at("l_omega").get<double>();
  for (const auto& s : j.at("sensors")) {
    for (const auto& [key, value] : s.items()) {
      if (key != "id" && key != "theta" && key != "v") {
        throw std::runtime_error("known params: unexpected sensor field '" + key + "'");
      }
    }
    int id = s.at("id").get<int>();
    if (id != static_cast<int>(known.thetas.size())) {
      throw std::runtime_error("known params: sensor ids must be dense and ordered");
    }
    known.thetas.push_back(s.at("theta").get<double>());
    known.vs.push_back(s.at("v").get<double>());
  }
  return known;
}

namespace {

json classes_to_json(const EstimationResult& est, const ReportOptions& options) {
  json out;
  json lengths = json::array();
  for (const auto& c : est.length_classes) {
    json j;
    j["lambda_hat"] = c.lambda_hat;
    j["size"] = c.members.size();
    j["n_e_hat"] = c.count_hat;
    j["n_e_raw"] = c.count_raw;
    if (c.count_hat_uncorrected) j["n_e_hat_uncorrected"] = *c.count_hat_uncorrected;
    if (!options.true_lengths.empty()) {
      double best = options.true_lengths.front();
      for (double t : options.true_lengths) {
        if (std::abs(c.lambda_hat - t) < std::abs(c.lambda_hat - best)) best = t;
      }
      j["relative_error"] = (c.lambda_hat - best) / best;
    }
    lengths.push_back(j);
  }
  out["length_classes"] = lengths;

  json angles = json::array();
  for (const auto& c : est.angle_classes) {
    json j;
    j["gamma_hat"] = c.gamma_hat;
    j["size"] = c.members.size();
    j["n_e_hat"] = c.count_hat;
    j["n_e_raw"] = c.count_raw;
    if (!options.true_angles.empty()) {
      double best = options.true_angles.front();
      for (double t : options.true_angles) {
        if (std::abs(c.gamma_hat - t) < std::abs(c.gamma_hat - best)) best = t;
      }
      j["relative_error"] = (c.gamma_hat - best) / best;
    }
    angles.push_back(j);
  }
  out["angle_classes"] = angles;
  return out;
}

}  // namespace

std::string report_to_json(const EstimationResult& est, const AssemblyResult& assembly,
                           const ReportOptions& options) {
  json j = classes_to_json(est, options);
  j["min_support"] = est.min_support_used;
  j["discarded_degenerate_angles"] = est.discarded_degenerate_angles;
  j["total_edges"] = est.total_edge_count();
  j["total_vertices"] = est.total_vertex_count();

  json hyps = json::array();
  for (const auto& h : est.vertex_hypotheses) {
    hyps.push_back({{"angle_class", h.angle_class},
                    {"left", h.left},
                    {"right", h.right},
                    {"support", h.support}});
  }
  j["vertex_hypotheses"] = hyps;

  json adjacency;
  adjacency["counts"] = json::array();
  for (int a = 0; a < est.adjacency.n_classes; ++a) {
    json row = json::array();
    for (int b = 0; b < est.adjacency.n_classes; ++b) row.push_back(est.adjacency.at(a, b));
    adjacency["counts"].push_back(row);
  }
  json connected = json::array();
  for (const auto& [a, b] : est.adjacency.connected) connected.push_back({a, b});
  adjacency["connected"] = connected;
  j["adjacency"] = adjacency;

  if (!assembly.shapes.empty()) {
    const ShapeEstimate& best = assembly.shapes.front();
    json shape;
    json cycle = json::array();
    for (const auto& item : best.cycle) {
      cycle.push_back({{"lambda", item.lambda},
                       {"gamma", item.gamma},
                       {"length_class", item.length_class},
                       {"angle_class", item.angle_class}});
    }
    shape["cycle"] = cycle;
    shape["closure_residual"] = best.closure_residual;
    shape["angle_residual"] = best.angle_residual;
    shape["score"] = best.score;
    shape["alternatives"] = assembly.shapes.size() - 1;
    j["shape"] = shape;
  } else {
    j["shape_failure"] = assembly.failure;
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const EstimationResult& est, const AssemblyResult& assembly,
                           const ReportOptions& options) {
  std::ostringstream os;
  os << std::fixed;
  os << "              Estimated  Rel.error  size  n_e\n";
  json j = classes_to_json(est, options);
  int idx = 1;
  for (const auto& c : j["length_classes"]) {
    os << "lambda(L" << idx << ")  " << std::setw(10) << std::setprecision(2)
       << c["lambda_hat"].get<double>();
    if (c.contains("relative_error")) {
      os << "  " << std::setw(9) << std::setprecision(3) << c["relative_error"].get<double>();
    } else {
      os << "          -";
    }
    os << "  " << std::setw(4) << c["size"].get<int>() << "  " << std::setw(3)
       << c["n_e_hat"].get<int>();
    if (c.contains("n_e_hat_uncorrected")) {
      os << " (uncorrected " << c["n_e_hat_uncorrected"].get<int>() << ")";
    }
    os << '\n';
    ++idx;
  }
  idx = 1;
  for (const auto& c : j["angle_classes"]) {
    os << "gamma(G" << idx << ")   " << std::setw(10) << std::setprecision(3)
       << c["gamma_hat"].get<double>();
    if (c.contains("relative_error")) {
      os << "  " << std::setw(9) << std::setprecision(3) << c["relative_error"].get<double>();
    } else {
      os << "          -";
    }
    os << "  " << std::setw(4) << c["size"].get<int>() << "  " << std::setw(3)
       << c["n_e_hat"].get<int>() << '\n';
    ++idx;
  }
  os << "vertex hypotheses (angle, left, right, support):\n";
  for (const auto& h : est.vertex_hypotheses) {
    os << "  (G" << h.angle_class + 1 << ", "
       << (h.left >= 0 ? "L" + std::to_string(h.left + 1) : std::string("-")) << ", "
       << (h.right >= 0 ? "L" + std::to_string(h.right + 1) : std::string("-")) << ", "
       << h.support << ")\n";
  }
  if (!assembly.shapes.empty()) {
    const auto& best = assembly.shapes.front();
    os << "assembled cycle (lambda, gamma):";
    for (const auto& item : best.cycle) {
      os << " (" << std::setprecision(2) << item.lambda << ", " << std::setprecision(3)
         << item.gamma << ")";
    }
    os << "\n  closure residual " << std::setprecision(4) << best.closure_residual
       << ", angle residual " << best.angle_residual << '\n';
  } else {
    os << "no assembled shape: " << assembly.failure << '\n';
  }
  return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_manifest(const std::filesystem::path& file, const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["scenario_hash"] = m.scenario_hash;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["outputs"] = m.outputs;
  spit(file, j.dump(2) + "\n");
}

}  // namespace traceshape
