#include "traceshape/assembly.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace traceshape {

double ShapeEstimate::perimeter() const {
  double p = 0.0;
  for (const auto& item : cycle) p += item.lambda;
  return p;
}

std::vector<Point> ShapeEstimate::realize() const {
  std::vector<Point> pts;
  Point p = Point::Zero();
  double xi = 0.0;
  for (const auto& item : cycle) {
    pts.push_back(p);
    p += item.lambda * unit(xi);
    xi += kPi - item.gamma;
  }
  return pts;
}

std::pair<double, double> closure_check(const std::vector<std::pair<double, double>>& cycle) {
  Point sum = Point::Zero();
  double xi = 0.0;
  double ext = 0.0;
  for (const auto& [lambda, gamma] : cycle) {
    sum += lambda * unit(xi);
    double e = kPi - gamma;
    xi += e;
    ext += e;
  }
  return {sum.norm(), std::abs(ext - kTwoPi)};
}

namespace {

struct SearchContext {
  const EstimationResult* est;
  const AssemblyConfig* config;
  int n = 0;
  std::vector<int> edge_pool;    // remaining copies per length class
  std::vector<int> angle_pool;   // remaining copies per angle class
  std::vector<int> edge_seq;     // chosen length classes
  std::vector<int> angle_seq;    // chosen angle class after edge i
  // support lookup
  std::map<std::tuple<int, int, int>, int> two_sided;  // (angle, left, right)
  std::set<std::pair<int, int>> one_sided_left;        // (angle, left)
  std::set<std::pair<int, int>> one_sided_right;
  std::vector<ShapeEstimate> found;
  std::set<std::vector<std::pair<int, int>>> seen;  // canonical cycles
  std::string deepest_failure;
  int deepest_depth = -1;

  bool pair_supported(int a, int b) const {
    if (est->adjacency.n_classes > 0 &&
        std::find(est->adjacency.connected.begin(), est->adjacency.connected.end(),
                  std::make_pair(a, b)) != est->adjacency.connected.end()) {
      return true;
    }
    for (const auto& [key, support] : two_sided) {
      if (std::get<1>(key) == a && std::get<2>(key) == b) return true;
    }
    return false;
  }

  int joint_score(int a, int b, int g) const {
    int s = 0;
    auto it = two_sided.find({g, a, b});
    if (it != two_sided.end()) s += it->second;
    if (est->adjacency.n_classes > 0) s += est->adjacency.at(a, b);
    return s;
  }

  bool angle_compatible(int a, int b, int g) const {
    if (two_sided.count({g, a, b})) return true;
    // No direct witness: accept when the pair itself is witnessed and the
    // angle is seen one-sided on either flank.
    bool any_two_sided_for_pair = false;
    for (const auto& [key, support] : two_sided) {
      if (std::get<1>(key) == a && std::get<2>(key) == b) {
        any_two_sided_for_pair = true;
        break;
      }
    }
    if (any_two_sided_for_pair) return false;  // a witness exists but names another angle
    return one_sided_left.count({g, a}) || one_sided_right.count({g, b}) ||
           (one_sided_left.empty() && one_sided_right.empty());
  }

  void note_failure(int depth, const std::string& why) {
    if (depth > deepest_depth) {
      deepest_depth = depth;
      deepest_failure = why;
    }
  }
};

void canonicalize(std::vector<std::pair<int, int>> cycle,
                  std::vector<std::pair<int, int>>* best) {
  const int n = static_cast<int>(cycle.size());
  *best = cycle;
  auto consider = [&](const std::vector<std::pair<int, int>>& c) {
    if (c < *best) *best = c;
  };
  std::vector<std::pair<int, int>> rot(cycle);
  for (int r = 0; r < n; ++r) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    consider(rot);
  }
  // Reflection: reverse edge order; the angle after edge i becomes the angle
  // before it, so angles shift by one position.
  std::vector<std::pair<int, int>> ref(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int src = (n - 1 - i) % n;
    int angle_src = (src + n - 1) % n;
    ref[static_cast<std::size_t>(i)] = {cycle[static_cast<std::size_t>(src)].first,
                                        cycle[static_cast<std::size_t>(angle_src)].second};
  }
  for (int r = 0; r < n; ++r) {
    consider(ref);
    std::rotate(ref.begin(), ref.begin() + 1, ref.end());
  }
}

void finish_candidate(SearchContext& ctx) {
  std::vector<std::pair<double, double>> cycle;
  std::vector<std::pair<int, int>> classes;
  double score = 0.0;
  const auto& lc = ctx.est->length_classes;
  const auto& ac = ctx.est->angle_classes;
  for (int i = 0; i < ctx.n; ++i) {
    int e = ctx.edge_seq[i];
    int g = ctx.angle_seq[i];
    cycle.emplace_back(lc[e].lambda_hat, ac[g].gamma_hat);
    classes.emplace_back(e, g);
    score += ctx.joint_score(e, ctx.edge_seq[(i + 1) % ctx.n], g);
  }
  auto [closure, angle_res] = closure_check(cycle);
  if (angle_res > ctx.config->angle_residual_tol) {
    ctx.note_failure(ctx.n * 2, "exterior angles do not close within tolerance");
    return;
  }
  double perimeter = 0.0;
  for (const auto& [lambda, gamma] : cycle) perimeter += lambda;
  if (closure > ctx.config->closure_fraction_tol * perimeter) {
    ctx.note_failure(ctx.n * 2, "edge vectors do not close within tolerance");
    return;
  }
  std::vector<std::pair<int, int>> canon;
  canonicalize(classes, &canon);
  if (!ctx.seen.insert(canon).second) return;

  ShapeEstimate shape;
  for (int i = 0; i < ctx.n; ++i) {
    shape.cycle.push_back(ShapeEstimate::Item{lc[ctx.edge_seq[i]].lambda_hat,
                                              ac[ctx.angle_seq[i]].gamma_hat,
                                              ctx.edge_seq[i], ctx.angle_seq[i]});
  }
  shape.closure_residual = closure;
  shape.angle_residual = angle_res;
  shape.score = score;
  ctx.found.push_back(std::move(shape));
}

void search_angles(SearchContext& ctx, int joint);

void search_edges(SearchContext& ctx, int depth) {
  if (depth == ctx.n) {
    // Close the cycle: last edge to first.
    if (!ctx.pair_supported(ctx.edge_seq[ctx.n - 1], ctx.edge_seq[0])) {
      ctx.note_failure(depth, "closing edge pair has no adjacency or vertex witness");
      return;
    }
    search_angles(ctx, 0);
    return;
  }
  for (std::size_t c = 0; c < ctx.edge_pool.size(); ++c) {
    if (ctx.edge_pool[c] == 0) continue;
    if (depth > 0 && !ctx.pair_supported(ctx.edge_seq[depth - 1], static_cast<int>(c))) {
      ctx.note_failure(depth, "edge pair has no adjacency or vertex witness");
      continue;
    }
    ctx.edge_pool[c]--;
    ctx.edge_seq[depth] = static_cast<int>(c);
    search_edges(ctx, depth + 1);
    ctx.edge_pool[c]++;
  }
}

void search_angles(SearchContext& ctx, int joint) {
  if (joint == ctx.n) {
    finish_candidate(ctx);
    return;
  }
  int a = ctx.edge_seq[joint];
  int b = ctx.edge_seq[(joint + 1) % ctx.n];
  for (std::size_t g = 0; g < ctx.angle_pool.size(); ++g) {
    if (ctx.angle_pool[g] == 0) continue;
    if (!ctx.angle_compatible(a, b, static_cast<int>(g))) {
      ctx.note_failure(ctx.n + joint, "no angle class compatible with a joint");
      continue;
    }
    ctx.angle_pool[g]--;
    ctx.angle_seq[joint] = static_cast<int>(g);
    search_angles(ctx, joint + 1);
    ctx.angle_pool[g]++;
  }
}

}  // namespace

AssemblyResult assemble(const EstimationResult& estimate, const AssemblyConfig& config) {
  AssemblyResult result;
  const auto& lc = estimate.length_classes;
  const auto& ac = estimate.angle_classes;

  int n_edges = 0;
  for (const auto& c : lc) n_edges += c.count_hat;
  if (n_edges < 3) {
    result.failure = "need at least 3 estimated edges";
    return result;
  }
  if (n_edges > config.max_edges) {
    result.failure = "estimated edge count exceeds the assembly search bound";
    return result;
  }
  if (ac.empty()) {
    result.failure = "no angle classes";
    return result;
  }

  SearchContext ctx;
  ctx.est = &estimate;
  ctx.config = &config;
  ctx.n = n_edges;
  ctx.edge_pool.resize(lc.size());
  for (std::size_t i = 0; i < lc.size(); ++i) ctx.edge_pool[i] = lc[i].count_hat;

  // Vertex totals may disagree with the edge total (the two sides count
  // different sensing events); resolve toward the edge total by adjusting
  // the classes with the weakest fractional evidence.
  std::vector<int> angle_counts(ac.size());
  std::vector<double> raw(ac.size());
  int n_angles = 0;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    angle_counts[i] = ac[i].count_hat;
    raw[i] = ac[i].count_raw;
    n_angles += angle_counts[i];
  }
  while (n_angles > n_edges) {
    std::size_t pick = 0;
    double best_overshoot = -1e300;
    for (std::size_t i = 0; i < ac.size(); ++i) {
      if (angle_counts[i] <= 0) continue;
      double overshoot = static_cast<double>(angle_counts[i]) - raw[i];
      if (overshoot > best_overshoot) {
        best_overshoot = overshoot;
        pick = i;
      }
    }
    --angle_counts[pick];
    --n_angles;
  }
  while (n_angles < n_edges) {
    std::size_t pick = 0;
    double best_deficit = -1e300;
    for (std::size_t i = 0; i < ac.size(); ++i) {
      double deficit = raw[i] - static_cast<double>(angle_counts[i]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        pick = i;
      }
    }
    ++angle_counts[pick];
    ++n_angles;
  }
  ctx.angle_pool = angle_counts;

  for (const auto& hyp : estimate.vertex_hypotheses) {
    if (hyp.left >= 0 && hyp.right >= 0) {
      ctx.two_sided[{hyp.angle_class, hyp.left, hyp.right}] = hyp.support;
    } else if (hyp.left >= 0) {
      ctx.one_sided_left.insert({hyp.angle_class, hyp.left});
    } else if (hyp.right >= 0) {
      ctx.one_sided_right.insert({hyp.angle_class, hyp.right});
    }
  }

  ctx.edge_seq.assign(static_cast<std::size_t>(ctx.n), -1);
  ctx.angle_seq.assign(static_cast<std::size_t>(ctx.n), -1);

  // Fix the first slot to the first non-empty class: rotations of the same
  // cycle are deduplicated by the canonical form anyway.
  int first_class = -1;
  for (std::size_t i = 0; i < lc.size(); ++i) {
    if (ctx.edge_pool[i] > 0) {
      first_class = static_cast<int>(i);
      break;
    }
  }
  ctx.edge_pool[first_class]--;
  ctx.edge_seq[0] = first_class;
  search_edges(ctx, 1);

  if (ctx.found.empty()) {
    result.failure = ctx.deepest_failure.empty() ? "no feasible arrangement"
                                                 : ctx.deepest_failure;
    return result;
  }
  std::sort(ctx.found.begin(), ctx.found.end(),
            [](const ShapeEstimate& x, const ShapeEstimate& y) {
              if (x.score != y.score) return x.score > y.score;
              return x.closure_residual < y.closure_residual;
            });
  result.shapes = std::move(ctx.found);
  return result;
}

namespace {

void append_path(std::ostringstream& os, const std::vector<Point>& pts, const char* color,
                 const char* dash) {
  os << "  <path d=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << (i == 0 ? 'M' : 'L') << ' ' << pts[i].x() << ' ' << -pts[i].y() << ' ';
  }
  os << "Z\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
  if (dash) os << " stroke-dasharray=\"" << dash << "\"";
  os << "/>\n";
}

std::string svg_document(const std::vector<std::vector<Point>>& outlines,
                         const std::vector<const char*>& colors,
                         const std::vector<const char*>& dashes) {
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (const auto& pts : outlines) {
    for (const auto& p : pts) {
      min_x = std::min(min_x, p.x());
      max_x = std::max(max_x, p.x());
      min_y = std::min(min_y, -p.y());
      max_y = std::max(max_y, -p.y());
    }
  }
  double pad = 0.05 * std::max(max_x - min_x, max_y - min_y) + 1.0;
  std::ostringstream os;
  os.precision(10);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << (min_x - pad) << ' '
     << (min_y - pad) << ' ' << (max_x - min_x + 2 * pad) << ' ' << (max_y - min_y + 2 * pad)
     << "\">\n";
  for (std::size_t i = 0; i < outlines.size(); ++i) {
    append_path(os, outlines[i], colors[i], dashes[i]);
  }
  os << "</svg>\n";
  return os.str();
}

// Best rigid alignment (rotation + translation, optionally reflection) of
// `moving` onto `fixed`, over cyclic correspondences.
std::vector<Point> align_to(const std::vector<Point>& moving, const std::vector<Point>& fixed) {
  if (moving.size() != fixed.size() || moving.empty()) return moving;
  const int n = static_cast<int>(moving.size());
  double best_err = 1e300;
  std::vector<Point> best = moving;
  Point fc = Point::Zero(), mc = Point::Zero();
  for (const auto& p : fixed) fc += p;
  for (const auto& p : moving) mc += p;
  fc /= n;
  mc /= n;
  for (int reflect = 0; reflect < 2; ++reflect) {
    std::vector<Point> m(moving.size());
    for (int i = 0; i < n; ++i) {
      m[i] = moving[i] - mc;
      if (reflect) m[i].y() = -m[i].y();
    }
    for (int shift = 0; shift < n; ++shift) {
      double sc = 0.0, ss = 0.0;
      for (int i = 0; i < n; ++i) {
        const Point f = fixed[(i + shift) % n] - fc;
        sc += f.dot(m[i]);
        ss += cross2(m[i], f);
      }
      double angle = std::atan2(ss, sc);
      Eigen::Rotation2D<double> rot(angle);
      double err = 0.0;
      std::vector<Point> candidate(moving.size());
      for (int i = 0; i < n; ++i) {
        candidate[i] = rot * m[i] + fc;
        err += (candidate[i] - (fixed[(i + shift) % n])).squaredNorm();
      }
      if (err < best_err) {
        best_err = err;
        best = candidate;
      }
    }
  }
  return best;
}

}  // namespace

std::string render_svg(const ShapeEstimate& shape, const PolygonTarget* truth) {
  if (shape.cycle.empty()) return render_svg_placeholder("empty shape estimate");
  std::vector<std::vector<Point>> outlines;
  std::vector<const char*> colors, dashes;
  std::vector<Point> estimate = shape.realize();
  if (truth) {
    std::vector<Point> truth_pts = truth->vertices();
    outlines.push_back(truth_pts);
    colors.push_back("#888888");
    dashes.push_back("4 3");
    estimate = align_to(estimate, truth_pts);
  }
  outlines.push_back(estimate);
  colors.push_back("#0057b8");
  dashes.push_back(nullptr);
  return svg_document(outlines, colors, dashes);
}

std::string render_svg(const PolygonTarget& polygon) {
  return svg_document({polygon.vertices()}, {"#0057b8"}, {nullptr});
}

std::string render_svg_placeholder(const std::string& message) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 240 40\">\n"
     << "  <text x=\"10\" y=\"25\" font-size=\"12\">" << message << "</text>\n"
     << "</svg>\n";
  return os.str();
}

}  // namespace traceshape
