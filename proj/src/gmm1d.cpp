#include "traceshape/gmm1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "traceshape/angles.hpp"

namespace traceshape {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;

struct Model {
  std::vector<double> w, mu, sd;
  double loglik = -std::numeric_limits<double>::infinity();
};

double log_normal_pdf(double x, double mu, double sd) {
  double z = (x - mu) / sd;
  return -0.5 * (z * z + kLogTwoPi) - std::log(sd);
}

Model fit_k(const std::vector<double>& x, int k, double sd_floor, const Gmm1dConfig& cfg) {
  const int n = static_cast<int>(x.size());
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());

  Model m;
  m.w.assign(k, 1.0 / k);
  m.mu.resize(k);
  m.sd.resize(k);
  for (int c = 0; c < k; ++c) {
    // Quantile blocks give a deterministic, order-respecting start.
    int lo = (n * c) / k;
    int hi = std::max(lo + 1, (n * (c + 1)) / k);
    double mean = 0.0;
    for (int i = lo; i < hi; ++i) mean += sorted[i];
    mean /= (hi - lo);
    double var = 0.0;
    for (int i = lo; i < hi; ++i) var += (sorted[i] - mean) * (sorted[i] - mean);
    var /= (hi - lo);
    m.mu[c] = mean;
    m.sd[c] = std::max(std::sqrt(var), sd_floor);
  }

  std::vector<double> resp(static_cast<std::size_t>(n) * k);
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    // E step in log space.
    double loglik = 0.0;
    for (int i = 0; i < n; ++i) {
      double max_lp = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double lp = std::log(m.w[c]) + log_normal_pdf(x[i], m.mu[c], m.sd[c]);
        resp[i * k + c] = lp;
        max_lp = std::max(max_lp, lp);
      }
      double sum = 0.0;
      for (int c = 0; c < k; ++c) sum += std::exp(resp[i * k + c] - max_lp);
      double lse = max_lp + std::log(sum);
      loglik += lse;
      for (int c = 0; c < k; ++c) resp[i * k + c] = std::exp(resp[i * k + c] - lse);
    }
    bool converged = std::abs(loglik - m.loglik) <= cfg.tol * (1.0 + std::abs(loglik));
    m.loglik = loglik;
    if (converged) break;

    for (int c = 0; c < k; ++c) {
      double nc = 0.0, mean = 0.0;
      for (int i = 0; i < n; ++i) {
        nc += resp[i * k + c];
        mean += resp[i * k + c] * x[i];
      }
      if (nc < 1e-10) {
        m.w[c] = 1e-10;
        continue;
      }
      mean /= nc;
      double var = 0.0;
      for (int i = 0; i < n; ++i) {
        var += resp[i * k + c] * (x[i] - mean) * (x[i] - mean);
      }
      var /= nc;
      m.w[c] = nc / n;
      m.mu[c] = mean;
      m.sd[c] = std::max(std::sqrt(var), sd_floor);
    }
    double wsum = std::accumulate(m.w.begin(), m.w.end(), 0.0);
    for (double& w : m.w) w /= wsum;
  }
  return m;
}

}  // namespace

Clustering cluster_1d(const std::vector<double>& values, const Gmm1dConfig& config) {
  Clustering out;
  const int n = static_cast<int>(values.size());
  if (n == 0) return out;

  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double range = *mx - *mn;
  double sd_floor = std::max(1e-12, config.sd_floor_rel * std::max(range, std::abs(*mx)));

  int distinct = 1;
  {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 1; i < n; ++i) {
      if (sorted[i] - sorted[i - 1] > 1e-12) ++distinct;
    }
  }
  int k_max = std::min({config.k_max, n, distinct});

  Model best;
  double best_bic = std::numeric_limits<double>::infinity();
  int best_k = 1;
  for (int k = 1; k <= k_max; ++k) {
    Model m = fit_k(values, k, sd_floor, config);
    double params = 3.0 * k - 1.0;
    double bic = -2.0 * m.loglik + params * std::log(static_cast<double>(n));
    if (bic < best_bic - 1e-9) {
      best_bic = bic;
      best = m;
      best_k = k;
    }
  }

  // Posterior argmax, ties toward the lower-mean component.
  std::vector<int> order(best_k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return best.mu[a] < best.mu[b]; });
  std::vector<int> rank(best_k);
  for (int r = 0; r < best_k; ++r) rank[order[r]] = r;

  std::vector<int> assignment(n);
  std::vector<int> sizes(best_k, 0);
  for (int i = 0; i < n; ++i) {
    double best_lp = -std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (int r = 0; r < best_k; ++r) {
      int c = order[r];
      double lp = std::log(best.w[c]) + log_normal_pdf(values[i], best.mu[c], best.sd[c]);
      if (lp > best_lp + 1e-12) {
        best_lp = lp;
        best_c = r;
      }
    }
    assignment[i] = best_c;
    ++sizes[best_c];
  }

  // Drop components that won no points, preserving mean order.
  std::vector<int> remap(best_k, -1);
  int kept = 0;
  for (int r = 0; r < best_k; ++r) {
    if (sizes[r] > 0) remap[r] = kept++;
  }
  out.k = kept;
  out.bic = best_bic;
  out.components.reserve(kept);
  for (int r = 0; r < best_k; ++r) {
    if (remap[r] < 0) continue;
    int c = order[r];
    out.components.push_back(GmmComponent{best.w[c], best.mu[c], best.sd[c]});
  }
  out.assignment.resize(n);
  for (int i = 0; i < n; ++i) out.assignment[i] = remap[assignment[i]];
  return out;
}

Clustering cluster_circular(const std::vector<double>& values, const Gmm1dConfig& config) {
  Clustering out;
  const int n = static_cast<int>(values.size());
  if (n == 0) return out;

  std::vector<double> wrapped(values.size());
  for (int i = 0; i < n; ++i) wrapped[i] = modone(values[i]);

  // Cut the circle at the middle of the widest empty arc.
  std::vector<double> sorted = wrapped;
  std::sort(sorted.begin(), sorted.end());
  double best_gap = kTwoPi - sorted.back() + sorted.front();
  double cut = modone(sorted.back() + 0.5 * best_gap);
  for (int i = 1; i < n; ++i) {
    double gap = sorted[i] - sorted[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      cut = sorted[i - 1] + 0.5 * gap;
    }
  }

  std::vector<double> unrolled(values.size());
  for (int i = 0; i < n; ++i) unrolled[i] = modone(wrapped[i] - cut);
  out = cluster_1d(unrolled, config);
  for (auto& comp : out.components) comp.mean = modone(comp.mean + cut);
  return out;
}

}  // namespace traceshape
