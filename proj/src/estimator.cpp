#include "traceshape/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace traceshape {

double temp_length(const WholeEdgeObservation& obs, double v, double theta) {
  double s = obs.s_d / v;
  return v * obs.l_d * std::sqrt(s * s + 2.0 * s * std::cos(theta) + 1.0);
}

double relative_direction(double s_d, double theta) {
  double base = std::atan2(s_d * std::sin(theta), s_d * std::cos(theta) + 1.0);
  // The arctan branch is fixed by the detectability window: the result must
  // land in [theta - pi, theta) mod 2*pi.
  if (modone(base - theta) < kPi) base += kPi;
  return modone(base);
}

double temp_angle(double s_a, double s_b, double theta) {
  double st = std::sin(theta);
  if (st == 0.0) throw std::invalid_argument("temp_angle: sin(theta) must be nonzero");
  double diff = relative_direction(s_a, theta) - relative_direction(s_b, theta);
  double g = (st > 0.0) ? kPi + diff : kPi - diff;
  return modone(g);
}

double class_length_estimate(const LengthClass& cls) {
  if (cls.members.empty()) throw std::invalid_argument("class_length_estimate: empty class");
  double sum = 0.0;
  for (const auto& m : cls.members) sum += m.value;
  return sum / static_cast<double>(cls.members.size());
}

double class_angle_estimate(const AngleClass& cls) {
  if (cls.members.empty()) throw std::invalid_argument("class_angle_estimate: empty class");
  // Members of one class sit on a short arc; average around the circular
  // mean of the first member to stay wrap-safe.
  double ref = cls.members.front().value;
  double sum = 0.0;
  for (const auto& m : cls.members) {
    double d = modone(m.value - ref);
    if (d > kPi) d -= kTwoPi;
    sum += d;
  }
  return modone(ref + sum / static_cast<double>(cls.members.size()));
}

namespace {

int rounded_count(int class_size, double expected) {
  if (class_size == 0) return 0;
  if (expected <= 0.0) {
    throw std::invalid_argument("class count: expected detector count must be positive");
  }
  int n = static_cast<int>(std::lround(static_cast<double>(class_size) / expected));
  return std::max(1, n);
}

}  // namespace

int class_edge_count(int class_size, double expected) {
  return rounded_count(class_size, expected);
}

int class_vertex_count(int class_size, double expected) {
  return rounded_count(class_size, expected);
}

int resolve_min_support(const EstimatorConfig& config,
                        const std::vector<LengthClass>& length_classes) {
  if (config.min_support > 0) return config.min_support;
  std::vector<std::size_t> sizes;
  for (const auto& c : length_classes) sizes.push_back(c.members.size());
  if (sizes.empty()) return 3;
  std::sort(sizes.begin(), sizes.end());
  double median = static_cast<double>(sizes[sizes.size() / 2]);
  return std::max(3, static_cast<int>(std::lround(0.1 * median)));
}

std::vector<VertexHypothesis> combine_vertices(
    const std::vector<VertexObservation>& vertex_obs,
    const std::vector<WholeEdgeObservation>& edge_obs,
    const std::vector<LengthClass>& length_classes,
    const std::vector<AngleClass>& angle_classes, const KnownParams& known, int min_support) {
  // Length-class lookup for segments that qualified as whole-edge records.
  std::map<std::pair<int, int>, int> edge_class;
  for (std::size_t m = 0; m < length_classes.size(); ++m) {
    for (const auto& member : length_classes[m].members) {
      edge_class[{member.sensor_id, member.k}] = static_cast<int>(m);
    }
  }
  (void)edge_obs;

  std::map<std::pair<int, int>, int> angle_class;
  for (std::size_t m = 0; m < angle_classes.size(); ++m) {
    for (const auto& member : angle_classes[m].members) {
      angle_class[{member.sensor_id, member.k}] = static_cast<int>(m);
    }
  }

  std::map<std::tuple<int, int, int>, int> tally;
  for (const auto& vo : vertex_obs) {
    auto ai = angle_class.find({vo.sensor_id, vo.k});
    if (ai == angle_class.end()) continue;  // discarded as degenerate
    double theta = known.theta_of(vo.sensor_id);
    auto first = edge_class.find({vo.sensor_id, vo.k});
    auto second = edge_class.find({vo.sensor_id, vo.k + 1});
    int a = first != edge_class.end() ? first->second : -1;
    int b = second != edge_class.end() ? second->second : -1;
    if (a < 0 && b < 0) continue;
    // Normalize flanks to boundary (counterclockwise) order.
    if (std::sin(theta) < 0.0) std::swap(a, b);
    ++tally[{ai->second, a, b}];
  }

  std::vector<VertexHypothesis> out;
  for (const auto& [key, support] : tally) {
    if (support < min_support) continue;
    out.push_back(VertexHypothesis{std::get<0>(key), std::get<1>(key), std::get<2>(key),
                                   support});
  }
  std::sort(out.begin(), out.end(), [](const VertexHypothesis& x, const VertexHypothesis& y) {
    if (x.support != y.support) return x.support > y.support;
    if (x.angle_class != y.angle_class) return x.angle_class < y.angle_class;
    if (x.left != y.left) return x.left < y.left;
    return x.right < y.right;
  });
  return out;
}

AdjacencyCount order_adjacency(const std::vector<AdjacencyObservation>& adjacency_obs,
                               const std::vector<WholeEdgeObservation>& edge_obs,
                               const std::vector<LengthClass>& length_classes,
                               const KnownParams& known, int min_support) {
  (void)edge_obs;
  std::map<std::pair<int, int>, int> edge_class;
  for (std::size_t m = 0; m < length_classes.size(); ++m) {
    for (const auto& member : length_classes[m].members) {
      edge_class[{member.sensor_id, member.k}] = static_cast<int>(m);
    }
  }

  AdjacencyCount ac;
  ac.n_classes = static_cast<int>(length_classes.size());
  ac.counts.assign(static_cast<std::size_t>(ac.n_classes) * ac.n_classes, 0);
  for (const auto& ao : adjacency_obs) {
    auto first = edge_class.find({ao.sensor_id, ao.k_a});
    auto second = edge_class.find({ao.sensor_id, ao.k_b});
    if (first == edge_class.end() || second == edge_class.end()) continue;
    int a = first->second;
    int b = second->second;
    if (std::sin(known.theta_of(ao.sensor_id)) < 0.0) std::swap(a, b);
    ++ac.counts[a * ac.n_classes + b];
  }
  for (int a = 0; a < ac.n_classes; ++a) {
    for (int b = 0; b < ac.n_classes; ++b) {
      if (ac.at(a, b) >= min_support) ac.connected.emplace_back(a, b);
    }
  }
  return ac;
}

void concave_correction(std::vector<LengthClass>& length_classes,
                        const std::vector<AngleClass>& angle_classes,
                        const std::vector<VertexHypothesis>& hypotheses,
                        const KnownParams& known) {
  // Strongest-supported concave hypothesis naming each length class.
  std::vector<const VertexHypothesis*> chosen(length_classes.size(), nullptr);
  for (const auto& hyp : hypotheses) {
    double gamma = angle_classes[static_cast<std::size_t>(hyp.angle_class)].gamma_hat;
    if (gamma <= kPi) continue;
    for (int side : {hyp.left, hyp.right}) {
      if (side < 0) continue;
      auto& slot = chosen[static_cast<std::size_t>(side)];
      if (!slot || hyp.support > (*slot).support) slot = &hyp;
    }
  }
  for (std::size_t m = 0; m < length_classes.size(); ++m) {
    if (!chosen[m] || length_classes[m].members.empty()) continue;
    double gamma = angle_classes[static_cast<std::size_t>(chosen[m]->angle_class)].gamma_hat;
    double delta_xi = gamma - kPi;
    double expected = expected_detectors_edge_concave(
        length_classes[m].lambda_hat, known.thetas, delta_xi, known.arena());
    if (expected <= 0.0) continue;
    length_classes[m].count_hat_uncorrected = length_classes[m].count_hat;
    length_classes[m].count_raw =
        static_cast<double>(length_classes[m].members.size()) / expected;
    length_classes[m].expected_per_edge = expected;
    length_classes[m].count_hat =
        class_edge_count(static_cast<int>(length_classes[m].members.size()), expected);
  }
}

int EstimationResult::total_edge_count() const {
  int n = 0;
  for (const auto& c : length_classes) n += c.count_hat;
  return n;
}

int EstimationResult::total_vertex_count() const {
  int n = 0;
  for (const auto& c : angle_classes) n += c.count_hat;
  return n;
}

EstimationResult estimate_shape(const ObservationSet& observations, const KnownParams& known,
                                const EstimatorConfig& config) {
  EstimationResult result;

  // Edge length part.
  std::vector<const WholeEdgeObservation*> used_edges;
  std::vector<double> lambdas;
  for (const auto& obs : observations.edges) {
    if (obs.l_d < config.min_edge_ld) continue;
    used_edges.push_back(&obs);
    lambdas.push_back(temp_length(obs, known.v_of(obs.sensor_id), known.theta_of(obs.sensor_id)));
  }
  Clustering length_clusters = cluster_1d(lambdas, config.gmm);
  result.length_classes.resize(static_cast<std::size_t>(length_clusters.k));
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    int c = length_clusters.assignment[i];
    result.length_classes[static_cast<std::size_t>(c)].members.push_back(
        ClassMember{used_edges[i]->sensor_id, used_edges[i]->k, lambdas[i]});
  }
  for (auto& cls : result.length_classes) {
    cls.lambda_hat = class_length_estimate(cls);
    cls.expected_per_edge = expected_detectors_edge(cls.lambda_hat, known.thetas, known.arena());
    cls.count_raw = cls.expected_per_edge > 0.0
                        ? static_cast<double>(cls.members.size()) / cls.expected_per_edge
                        : 0.0;
    cls.count_hat = class_edge_count(static_cast<int>(cls.members.size()), cls.expected_per_edge);
  }

  // Angle part.
  std::vector<const VertexObservation*> used_vertices;
  std::vector<double> gammas;
  for (const auto& obs : observations.vertices) {
    double theta = known.theta_of(obs.sensor_id);
    double v = known.v_of(obs.sensor_id);
    if (std::sin(theta) == 0.0) {
      ++result.discarded_degenerate_angles;
      continue;
    }
    double g = temp_angle(obs.s_a / v, obs.s_b / v, theta);
    if (std::abs(g - kPi) < config.degenerate_angle_tol) {
      ++result.discarded_degenerate_angles;
      continue;
    }
    used_vertices.push_back(&obs);
    gammas.push_back(g);
  }
  Clustering angle_clusters = cluster_circular(gammas, config.gmm);
  result.angle_classes.resize(static_cast<std::size_t>(angle_clusters.k));
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    int c = angle_clusters.assignment[i];
    result.angle_classes[static_cast<std::size_t>(c)].members.push_back(
        ClassMember{used_vertices[i]->sensor_id, used_vertices[i]->k, gammas[i]});
  }
  for (auto& cls : result.angle_classes) {
    cls.gamma_hat = class_angle_estimate(cls);
    cls.expected_per_vertex =
        expected_detectors_vertex(cls.gamma_hat, known.thetas, known.arena());
    cls.count_raw = cls.expected_per_vertex > 0.0
                        ? static_cast<double>(cls.members.size()) / cls.expected_per_vertex
                        : 0.0;
    cls.count_hat =
        class_vertex_count(static_cast<int>(cls.members.size()), cls.expected_per_vertex);
  }

  // Combining, order, and the concave compensation.
  result.min_support_used = resolve_min_support(config, result.length_classes);
  result.vertex_hypotheses =
      combine_vertices(observations.vertices, observations.edges, result.length_classes,
                       result.angle_classes, known, result.min_support_used);
  result.adjacency = order_adjacency(observations.adjacencies, observations.edges,
                                     result.length_classes, known, result.min_support_used);
  bool has_concave = std::any_of(result.angle_classes.begin(), result.angle_classes.end(),
                                 [](const AngleClass& c) { return c.gamma_hat > kPi; });
  if (has_concave) {
    concave_correction(result.length_classes, result.angle_classes, result.vertex_hypotheses,
                       known);
  }
  return result;
}

}  // namespace traceshape
