#include "traceshape/geom_prob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace traceshape {

double eta(double lambda, double theta, double r_max) {
  if (lambda <= 0.0) throw std::invalid_argument("eta: lambda must be positive");
  double strip = r_max * std::abs(std::sin(theta));
  if (strip >= lambda) return kPi / 2.0;
  return std::asin(strip / lambda);
}

double q_d_edge(double lambda, double theta, const ArenaParams& arena) {
  double s = arena.r_max * std::abs(std::sin(theta));
  if (s == 0.0) return 0.0;
  double e = eta(lambda, theta, arena.r_max);
  double num = 2.0 * e * s - 2.0 * lambda * (1.0 - std::cos(e));
  return std::max(0.0, num) / arena.monitor_measure(theta);
}

double expected_detectors_edge(double lambda, std::span<const double> thetas,
                               const ArenaParams& arena) {
  double sum = 0.0;
  for (double th : thetas) sum += q_d_edge(lambda, th, arena);
  return sum;
}

double q_d_vertex(double gamma, double theta, const ArenaParams& arena) {
  if (gamma <= 0.0 || gamma >= kTwoPi || gamma == kPi) {
    throw std::invalid_argument("q_d_vertex: degenerate inner angle");
  }
  double s = arena.r_max * std::abs(std::sin(theta));
  double window = (gamma < kPi) ? gamma : (kTwoPi - gamma);
  return window * s / arena.monitor_measure(theta);
}

double expected_detectors_vertex(double gamma, std::span<const double> thetas,
                                 const ArenaParams& arena) {
  double sum = 0.0;
  for (double th : thetas) sum += q_d_vertex(gamma, th, arena);
  return sum;
}

namespace {

// Zones of the mod-2*pi circle used by the blocking form: Z1=[0,eta),
// Z2=[eta,pi-eta), Z3=[pi-eta,pi), Z4=[pi,pi+eta), Z5=[pi+eta,2pi-eta),
// Z6=[2pi-eta,2pi).
int zone_of(double x, double e) {
  if (x < e) return 1;
  if (x < kPi - e) return 2;
  if (x < kPi) return 3;
  if (x < kPi + e) return 4;
  if (x < kTwoPi - e) return 5;
  return 6;
}

}  // namespace

BlockingEval blocking_f_detailed(double lambda, double theta, double delta_xi, double r_max) {
  if (!(delta_xi > 0.0 && delta_xi < kPi)) {
    throw std::invalid_argument("blocking_f: delta_xi must lie in (0, pi)");
  }
  const double s = r_max * std::abs(std::sin(theta));
  const double u = modone(-theta);
  const double w = modone(delta_xi - theta);
  const double cth = std::cos(theta);
  const double cdt = std::cos(delta_xi - theta);

  double f = 0.0;
  int branch = -1;

  if (s < lambda) {
    const double e = eta(lambda, theta, r_max);
    const double ce = std::cos(e);
    const int zu = zone_of(u, e);
    const int zw = zone_of(w, e);
    const int pair = zu * 10 + zw;
    switch (pair) {
      case 11:
      case 33:
        branch = 0;
        f = s * modone(2.0 * e - delta_xi) - lambda * (2.0 - 2.0 * ce + cdt - cth);
        break;
      case 12:
        branch = 1;
        f = s * modone(e - theta) - lambda * (2.0 - ce - cth);
        break;
      case 13:
        branch = 2;
        f = s * modone(kPi - delta_xi) - lambda * (2.0 + cdt - cth);
        break;
      case 14:
      case 36:
        branch = 3;
        f = s * modone(kPi - delta_xi) - lambda * (-cdt - cth);
        break;
      case 22:
      case 55:
        branch = 4;
        f = 2.0 * e * s - 2.0 * lambda * (1.0 - ce);
        break;
      case 23:
        branch = 5;
        f = s * modone(kPi + e - delta_xi + theta) - lambda * (2.0 + cdt - ce);
        break;
      case 24:
        branch = 6;
        f = s * modone(kPi + e - delta_xi + theta) - lambda * (-cdt - ce);
        break;
      case 25:
      case 52:
        branch = 7;
        f = 0.0;
        break;
      case 34:
        branch = 8;
        f = s * modone(2.0 * e - delta_xi) - lambda * (-2.0 * ce - cdt - cth);
        break;
      case 35:
        branch = 9;
        f = s * modone(e - theta - kPi) - lambda * (-ce - cth);
        break;
      case 44:
        branch = 10;
        f = s * modone(2.0 * e - delta_xi) - lambda * (2.0 - 2.0 * ce - cdt + cth);
        break;
      case 45:
        branch = 11;
        f = s * modone(kPi + e - theta) - lambda * (2.0 - ce + cth);
        break;
      case 46:
        branch = 12;
        f = s * modone(kPi - delta_xi) - lambda * (2.0 - cdt + cth);
        break;
      case 41:
      case 63:
        branch = 13;
        f = s * modone(kPi - delta_xi) - lambda * (cdt + cth);
        break;
      case 56:
        branch = 14;
        f = s * modone(e - delta_xi + theta) - lambda * (2.0 - cdt - ce);
        break;
      case 51:
        branch = 15;
        f = s * modone(e - delta_xi + theta) - lambda * (cdt - ce);
        break;
      case 66:
        branch = 16;
        f = s * modone(2.0 * e - delta_xi) - lambda * (2.0 - 2.0 * ce - cdt + cth);
        break;
      case 61:
        branch = 17;
        f = s * modone(2.0 * e - delta_xi) - lambda * (-2.0 * ce + cdt + cth);
        break;
      case 62:
        branch = 18;
        f = s * modone(e - theta) - lambda * (-ce + cth);
        break;
      default:
        throw std::logic_error("blocking_f: unreachable zone pair");
    }
  } else {
    const bool u_first = u < kPi;
    const bool w_first = w < kPi;
    if (u_first && w_first) {
      branch = 19;
      f = s * modone(kPi - delta_xi) - lambda * (2.0 + cdt - cth);
    } else if (u_first && !w_first) {
      branch = 20;
      f = s * modone(kPi - delta_xi) - lambda * (-cdt - cth);
    } else if (!u_first && !w_first) {
      branch = 21;
      f = s * modone(kPi - delta_xi) - lambda * (2.0 - cdt + cth);
    } else {
      branch = 22;
      f = s * modone(kPi - delta_xi) - lambda * (cdt + cth);
    }
  }
  return BlockingEval{std::max(0.0, f), branch};
}

double blocking_f(double lambda, double theta, double delta_xi, double r_max) {
  return blocking_f_detailed(lambda, theta, delta_xi, r_max).value;
}

int blocking_f_branch_count() { return 23; }

double q_d_edge_concave(double lambda, double theta, double delta_xi,
                        const ArenaParams& arena) {
  return blocking_f(lambda, theta, delta_xi, arena.r_max) / arena.monitor_measure(theta);
}

double expected_detectors_edge_concave(double lambda, std::span<const double> thetas,
                                       double delta_xi, const ArenaParams& arena) {
  double sum = 0.0;
  for (double th : thetas) sum += q_d_edge_concave(lambda, th, delta_xi, arena);
  return sum;
}

}  // namespace traceshape
