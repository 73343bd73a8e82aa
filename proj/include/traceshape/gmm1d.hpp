#pragma once

#include <vector>

namespace traceshape {

struct GmmComponent {
  double weight;
  double mean;
  double sd;
};

struct Gmm1dConfig {
  int k_max = 12;
  int max_iter = 300;
  double tol = 1e-9;
  double sd_floor_rel = 1e-6;  // relative to the data range
};

struct Clustering {
  int k = 0;
  std::vector<GmmComponent> components;  // sorted by mean
  std::vector<int> assignment;           // per input value, posterior argmax
  double bic = 0.0;
};

/// Deterministic 1-D Gaussian-mixture clustering: EM from quantile
/// initialization, model count chosen by BIC over k = 1..k_max. Ties in the
/// posterior break toward the lower-mean component.
Clustering cluster_1d(const std::vector<double>& values, const Gmm1dConfig& config = {});

/// Same on the circle [0, 2*pi): the data is unrolled at the widest empty
/// arc, clustered linearly, and the means are wrapped back.
Clustering cluster_circular(const std::vector<double>& values, const Gmm1dConfig& config = {});

}  // namespace traceshape
