#pragma once

// Independent numeric oracles used by the tests: Gauss-Legendre quadrature
// and a brute-force evaluation of the uncollapsed joint density. These stay
// deliberately separate from the library's own collapsed-form algebra.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "msiq/gibbs.hpp"
#include "msiq/read_model.hpp"

namespace oracles {

struct GaussLegendre {
  std::vector<double> nodes;    // on (0, 1)
  std::vector<double> weights;

  explicit GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on Legendre polynomials over [-1, 1], then mapped.
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 0; k < n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
        }
        pp = n * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      nodes[i] = 0.5 * (1.0 - x);  // descending roots -> ascending nodes
      weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
  }

  double integrate(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

// Integral over the probability simplex of prod_j v_j^{expo_j}, with respect
// to Lebesgue measure on the first J-1 coordinates. Supports J = 2 and 3.
inline double simplex_integral(const std::vector<double>& expo,
                               const GaussLegendre& gl) {
  if (expo.size() == 2) {
    return gl.integrate([&](double x) {
      return std::pow(x, expo[0]) * std::pow(1.0 - x, expo[1]);
    });
  }
  if (expo.size() == 3) {
    return gl.integrate([&](double x) {
      const double inner = gl.integrate([&](double u) {
        const double y = u * (1.0 - x);  // y in (0, 1 - x)
        return std::pow(y, expo[1]) * std::pow(1.0 - x - y, expo[2]);
      });
      return std::pow(x, expo[0]) * inner * (1.0 - x);
    });
  }
  throw std::invalid_argument("simplex_integral: only J = 2 or 3 supported");
}

inline double log_multivariate_beta(const std::vector<double>& v) {
  double s = 0.0, total = 0.0;
  for (double x : v) {
    s += std::lgamma(x);
    total += x;
  }
  return s - std::lgamma(total);
}

// Brute-force marginal of one (Z, E) configuration by numeric integration of
// the uncollapsed joint over alpha, the betas of non-informative samples
// (each with its proper Dirichlet prior density), and gamma. The gamma prior
// normalizer is left out, matching the library's proportional form.
inline double config_marginal_numeric(const msiq::ChainState& state,
                                      const std::vector<msiq::GeneratingMatrix>& H,
                                      const msiq::Hyperparameters& hyper,
                                      const GaussLegendre& gl) {
  const int D = static_cast<int>(H.size());
  const int J = H.front().cols();

  std::vector<std::vector<double>> counts(D, std::vector<double>(J, 0.0));
  double h_factor = 1.0;
  for (int d = 0; d < D; ++d)
    for (int i = 0; i < H[d].rows(); ++i) {
      counts[d][state.z[d][i]] += 1.0;
      h_factor *= H[d](i, state.z[d][i]);
    }

  // alpha integral: exponents lambda_j - 1 + informative-pool counts
  std::vector<double> alpha_expo(J);
  for (int j = 0; j < J; ++j) {
    alpha_expo[j] = hyper.lambda[j] - 1.0;
    for (int d = 0; d < D; ++d)
      if (state.e[d] == 1) alpha_expo[j] += counts[d][j];
  }
  double value = simplex_integral(alpha_expo, gl) * h_factor;

  // beta integrals for non-informative samples, prior-normalized
  for (int d = 0; d < D; ++d) {
    if (state.e[d] == 1) continue;
    std::vector<double> expo(J);
    for (int j = 0; j < J; ++j) expo[j] = hyper.lambda[j] - 1.0 + counts[d][j];
    value *= simplex_integral(expo, gl) /
             std::exp(log_multivariate_beta(hyper.lambda));
  }

  // gamma integral
  double sum_e = 0.0;
  for (int v : state.e) sum_e += v;
  value *= gl.integrate([&](double g) {
    return std::pow(g, sum_e + hyper.a - 1.0) *
           std::pow(1.0 - g, D - sum_e + hyper.b - 1.0);
  });
  return value;
}

// All (Z, E) configurations with Z restricted to positive-h supports.
inline std::vector<msiq::ChainState> enumerate_configs(
    const std::vector<msiq::GeneratingMatrix>& H) {
  const int D = static_cast<int>(H.size());
  const int J = H.front().cols();
  std::vector<std::vector<int>> supports;
  std::vector<std::pair<int, int>> where;
  for (int d = 0; d < D; ++d)
    for (int i = 0; i < H[d].rows(); ++i) {
      std::vector<int> s;
      for (int j = 0; j < J; ++j)
        if (H[d](i, j) > 0.0) s.push_back(j);
      supports.push_back(std::move(s));
      where.emplace_back(d, i);
    }
  const int M = static_cast<int>(supports.size());

  std::vector<msiq::ChainState> out;
  for (unsigned mask = 0; mask < (1u << D); ++mask) {
    std::vector<int> pick(M, 0);
    for (;;) {
      msiq::ChainState st;
      st.gamma = 0.5;
      st.e.resize(D);
      for (int d = 0; d < D; ++d) st.e[d] = (mask >> d) & 1u;
      st.z.resize(D);
      for (int d = 0; d < D; ++d) st.z[d].resize(H[d].rows());
      for (int k = 0; k < M; ++k)
        st.z[where[k].first][where[k].second] = supports[k][pick[k]];
      out.push_back(std::move(st));
      int k = 0;
      while (k < M) {
        if (++pick[k] < static_cast<int>(supports[k].size())) break;
        pick[k] = 0;
        ++k;
      }
      if (k == M) break;
    }
  }
  return out;
}

// Analytic marginal weight of a configuration with gamma integrated via the
// Beta function; shares only log_collapsed_joint with the library.
inline double config_log_weight_via_lcj(const msiq::ChainState& state,
                                        const std::vector<msiq::GeneratingMatrix>& H,
                                        const msiq::Hyperparameters& hyper) {
  // Evaluate the collapsed joint at a reference gamma, then strip the gamma
  // factor and replace it with its Beta-function integral.
  const int D = static_cast<int>(H.size());
  double sum_e = 0.0;
  for (int v : state.e) sum_e += v;
  msiq::ChainState ref = state;
  ref.gamma = 0.5;
  const double lcj = msiq::log_collapsed_joint(ref, H, hyper);
  const double gamma_factor = (sum_e + hyper.a - 1.0) * std::log(0.5) +
                              (D - sum_e + hyper.b - 1.0) * std::log(0.5);
  const double log_beta = std::lgamma(sum_e + hyper.a) +
                          std::lgamma(D - sum_e + hyper.b) -
                          std::lgamma(D + hyper.a + hyper.b);
  return lcj - gamma_factor + log_beta;
}

}  // namespace oracles
