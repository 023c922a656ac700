#include "msiq/gibbs.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace msiq {

namespace {

double log_gamma(double x) { return std::lgamma(x); }

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Gamma draws can round to the open-interval boundaries; keep log(gamma) and
// log(1-gamma) finite.
double clamp_unit_open(double g) {
  return std::min(std::max(g, 1e-300), 1.0 - 1e-16);
}

int common_cols(const std::vector<GeneratingMatrix>& H) {
  if (H.empty())
    throw std::invalid_argument("gibbs: needs at least one sample");
  const int J = H.front().cols();
  for (const GeneratingMatrix& m : H)
    if (m.cols() != J)
      throw std::invalid_argument("gibbs: samples disagree on isoform count");
  return J;
}

// Count bookkeeping shared by the single-coordinate samplers and the chain
// runner. Pool counts aggregate the samples currently flagged informative;
// all conditional formulas are evaluated in log space via lgamma.
class Engine {
 public:
  Engine(const std::vector<GeneratingMatrix>& H, const Hyperparameters& hyper,
         ChainState state)
      : H_(H), hp_(hyper), st_(std::move(state)) {
    J_ = common_cols(H);
    D_ = static_cast<int>(H.size());
    hp_.validate(J_);
    if (static_cast<int>(st_.e.size()) != D_ ||
        static_cast<int>(st_.z.size()) != D_)
      throw std::invalid_argument("gibbs: state dimensions do not match data");
    if (!(st_.gamma > 0.0 && st_.gamma < 1.0))
      throw std::invalid_argument("gibbs: gamma must lie in (0, 1)");
    lambda_sum_ = 0.0;
    log_b_lambda_ = 0.0;
    for (double l : hp_.lambda) {
      lambda_sum_ += l;
      log_b_lambda_ += log_gamma(l);
    }
    log_b_lambda_ -= log_gamma(lambda_sum_);

    counts_.assign(D_, std::vector<long>(J_, 0));
    sample_total_.assign(D_, 0);
    pool_.assign(J_, 0);
    pool_total_ = 0;
    for (int d = 0; d < D_; ++d) {
      if (static_cast<int>(st_.z[d].size()) != H[d].rows())
        throw std::invalid_argument("gibbs: state dimensions do not match data");
      if (st_.e[d] != 0 && st_.e[d] != 1)
        throw std::invalid_argument("gibbs: E entries must be 0 or 1");
      for (int i = 0; i < H[d].rows(); ++i) {
        const int z = st_.z[d][i];
        if (z < 0 || z >= J_)
          throw std::invalid_argument("gibbs: origin index out of range");
        if (!(H[d](i, z) > 0.0))
          throw std::invalid_argument(
              "gibbs: read assigned to an isoform with zero generating probability");
        counts_[d][z]++;
      }
      sample_total_[d] = H[d].rows();
      if (st_.e[d] == 1) {
        for (int j = 0; j < J_; ++j) pool_[j] += counts_[d][j];
        pool_total_ += sample_total_[d];
      }
    }
    wbuf_.assign(J_, 0.0);
  }

  const ChainState& state() const { return st_; }
  int num_samples() const { return D_; }
  int num_isoforms() const { return J_; }

  // log B1 with the informative pool as counted now.
  double log_b1() const {
    double v = 0.0;
    for (int j = 0; j < J_; ++j) v += log_gamma(hp_.lambda[j] + pool_[j]);
    return v - log_gamma(lambda_sum_ + pool_total_);
  }

  // log of the d-sample marginal under E_d = 0, normalized by the Dirichlet
  // prior constant so an empty sample contributes nothing.
  double log_b0(int d) const {
    double v = -log_b_lambda_;
    for (int j = 0; j < J_; ++j) v += log_gamma(hp_.lambda[j] + counts_[d][j]);
    return v - log_gamma(lambda_sum_ + sample_total_[d]);
  }

  double informative_log_odds(int d) const {
    const bool in = st_.e[d] == 1;
    const auto& cd = counts_[d];
    double delta = 0.0;
    for (int j = 0; j < J_; ++j) {
      const double base = hp_.lambda[j] + (pool_[j] - (in ? cd[j] : 0));
      delta += log_gamma(base + cd[j]) - log_gamma(base);
    }
    const double base_tot =
        lambda_sum_ + (pool_total_ - (in ? sample_total_[d] : 0));
    delta -= log_gamma(base_tot + sample_total_[d]) - log_gamma(base_tot);
    return delta - log_b0(d) + std::log(st_.gamma) - std::log1p(-st_.gamma);
  }

  // Polya-urn weights for read i of sample d, own assignment excluded.
  void origin_weights(int d, int i, double* w) const {
    const double* hrow = H_[d].row(i);
    const int old = st_.z[d][i];
    const bool in = st_.e[d] == 1;
    const long* base = in ? pool_.data() : counts_[d].data();
    for (int j = 0; j < J_; ++j) {
      if (hrow[j] > 0.0) {
        const long c = base[j] - (j == old ? 1 : 0);
        w[j] = hrow[j] * (hp_.lambda[j] + static_cast<double>(c));
      } else {
        w[j] = 0.0;
      }
    }
  }

  int resample_E(int d, Rng& rng) {
    const double p = logistic(informative_log_odds(d));
    const int v = rng.uniform01() < p ? 1 : 0;
    set_E(d, v);
    return v;
  }

  int resample_Z(int d, int i, Rng& rng) {
    auto& cd = counts_[d];
    const int old = st_.z[d][i];
    const bool in = st_.e[d] == 1;
    cd[old]--;
    if (in) pool_[old]--;
    const double* hrow = H_[d].row(i);
    const long* base = in ? pool_.data() : cd.data();
    double total = 0.0;
    for (int j = 0; j < J_; ++j) {
      const double w =
          hrow[j] > 0.0
              ? hrow[j] * (hp_.lambda[j] + static_cast<double>(base[j]))
              : 0.0;
      wbuf_[j] = w;
      total += w;
    }
    double u = rng.uniform01() * total;
    int pick = -1;
    for (int j = 0; j < J_; ++j) {
      u -= wbuf_[j];
      if (u < 0.0) {
        pick = j;
        break;
      }
    }
    if (pick < 0)
      for (int j = J_; pick < 0 && j-- > 0;)
        if (wbuf_[j] > 0.0) pick = j;
    assert(H_[d](i, pick) > 0.0);
    cd[pick]++;
    if (in) pool_[pick]++;
    st_.z[d][i] = pick;
    return pick;
  }

  double resample_gamma(Rng& rng) {
    const double sum_e = static_cast<double>(informative_count());
    st_.gamma = clamp_unit_open(
        rng.beta(sum_e + hp_.a, static_cast<double>(D_) - sum_e + hp_.b));
    return st_.gamma;
  }

  void sweep(Rng& rng, bool update_e = true) {
    if (update_e)
      for (int d = 0; d < D_; ++d) resample_E(d, rng);
    for (int d = 0; d < D_; ++d)
      for (int i = 0; i < H_[d].rows(); ++i) resample_Z(d, i, rng);
    resample_gamma(rng);
  }

  long informative_count() const {
    long s = 0;
    for (int v : st_.e) s += v;
    return s;
  }

  // Per-iteration proportion estimate; reduces to the prior mean when the
  // informative group is empty.
  void accumulate_alpha(std::vector<double>& acc) const {
    const double denom = lambda_sum_ + static_cast<double>(pool_total_);
    for (int j = 0; j < J_; ++j)
      acc[j] += (hp_.lambda[j] + static_cast<double>(pool_[j])) / denom;
  }

  std::vector<double> iteration_alpha() const {
    std::vector<double> a(J_, 0.0);
    accumulate_alpha(a);
    return a;
  }

  double sum_log_h() const {
    double v = 0.0;
    for (int d = 0; d < D_; ++d)
      for (int i = 0; i < H_[d].rows(); ++i)
        v += std::log(H_[d](i, st_.z[d][i]));
    return v;
  }

 private:
  void set_E(int d, int v) {
    if (st_.e[d] == v) return;
    const int sign = v == 1 ? 1 : -1;
    for (int j = 0; j < J_; ++j) pool_[j] += sign * counts_[d][j];
    pool_total_ += sign * sample_total_[d];
    st_.e[d] = v;
  }

  const std::vector<GeneratingMatrix>& H_;
  Hyperparameters hp_;
  ChainState st_;
  int D_ = 0;
  int J_ = 0;
  double lambda_sum_ = 0.0;
  double log_b_lambda_ = 0.0;
  std::vector<std::vector<long>> counts_;
  std::vector<long> sample_total_;
  std::vector<long> pool_;
  long pool_total_ = 0;
  std::vector<double> wbuf_;
};

// Plain per-sample EM proportions, used only to seed the chain.
std::vector<double> rough_tau(const GeneratingMatrix& H) {
  const int J = H.cols();
  std::vector<double> tau(J, 1.0 / J), next(J);
  for (int it = 0; it < 100; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < H.rows(); ++i) {
      double mix = 0.0;
      for (int j = 0; j < J; ++j) mix += H(i, j) * tau[j];
      for (int j = 0; j < J; ++j) next[j] += H(i, j) * tau[j] / mix;
    }
    for (int j = 0; j < J; ++j) next[j] /= static_cast<double>(H.rows());
    tau.swap(next);
  }
  return tau;
}

// Initial informative set: the majority of samples closest to the
// componentwise median of the per-sample EM proportions. Starting from a
// coherent majority keeps the first indicator updates from evicting the
// whole pool and nucleating a label-swapped group that single-flip updates
// cannot leave; the stationary distribution itself does not depend on the
// starting point.
std::vector<int> initial_informative(const std::vector<GeneratingMatrix>& H) {
  const int D = static_cast<int>(H.size());
  const int J = H.front().cols();
  if (D == 1) return {1};
  std::vector<std::vector<double>> taus;
  taus.reserve(D);
  for (const GeneratingMatrix& m : H) taus.push_back(rough_tau(m));
  std::vector<double> median(J);
  std::vector<double> column(D);
  for (int j = 0; j < J; ++j) {
    for (int d = 0; d < D; ++d) column[d] = taus[d][j];
    std::nth_element(column.begin(), column.begin() + (D - 1) / 2, column.end());
    median[j] = column[(D - 1) / 2];
  }
  std::vector<std::pair<double, int>> by_distance(D);
  for (int d = 0; d < D; ++d) {
    double dist = 0.0;
    for (int j = 0; j < J; ++j) dist += std::fabs(taus[d][j] - median[j]);
    by_distance[d] = {dist, d};
  }
  std::sort(by_distance.begin(), by_distance.end());
  std::vector<int> e(D, 0);
  for (int k = 0; k < (D + 1) / 2; ++k) e[by_distance[k].second] = 1;
  return e;
}

}  // namespace

Hyperparameters Hyperparameters::uniform(int num_isoforms) {
  Hyperparameters hp;
  hp.lambda.assign(static_cast<std::size_t>(num_isoforms), 1.0);
  return hp;
}

void Hyperparameters::validate(int num_isoforms) const {
  if (static_cast<int>(lambda.size()) != num_isoforms)
    throw std::invalid_argument("Hyperparameters: lambda size must equal isoform count");
  for (double l : lambda)
    if (!(l > 0.0))
      throw std::invalid_argument("Hyperparameters: lambda entries must be > 0");
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("Hyperparameters: a and b must be > 0");
}

double log_collapsed_joint(const ChainState& state,
                           const std::vector<GeneratingMatrix>& H,
                           const Hyperparameters& hyper) {
  Engine eng(H, hyper, state);
  const int D = eng.num_samples();
  double v = eng.log_b1();
  for (int d = 0; d < D; ++d)
    if (state.e[d] == 0) v += eng.log_b0(d);
  v += eng.sum_log_h();
  const double sum_e = static_cast<double>(eng.informative_count());
  v += (sum_e + hyper.a - 1.0) * std::log(state.gamma);
  v += (static_cast<double>(D) - sum_e + hyper.b - 1.0) *
       std::log1p(-state.gamma);
  return v;
}

double conditional_informative_probability(const ChainState& state, int d,
                                           const std::vector<GeneratingMatrix>& H,
                                           const Hyperparameters& hyper) {
  Engine eng(H, hyper, state);
  if (d < 0 || d >= eng.num_samples())
    throw std::invalid_argument("conditional_informative_probability: bad sample index");
  return logistic(eng.informative_log_odds(d));
}

std::vector<double> conditional_origin_distribution(
    const ChainState& state, int d, int i,
    const std::vector<GeneratingMatrix>& H, const Hyperparameters& hyper) {
  Engine eng(H, hyper, state);
  if (d < 0 || d >= eng.num_samples())
    throw std::invalid_argument("conditional_origin_distribution: bad sample index");
  if (i < 0 || i >= H[d].rows())
    throw std::invalid_argument("conditional_origin_distribution: bad read index");
  std::vector<double> w(eng.num_isoforms(), 0.0);
  eng.origin_weights(d, i, w.data());
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

std::pair<double, double> gamma_posterior_params(const ChainState& state,
                                                 const Hyperparameters& hyper) {
  double sum_e = 0.0;
  for (int v : state.e) sum_e += v;
  return {sum_e + hyper.a,
          static_cast<double>(state.e.size()) - sum_e + hyper.b};
}

int sample_E(ChainState& state, int d, const std::vector<GeneratingMatrix>& H,
             const Hyperparameters& hyper, Rng& rng) {
  Engine eng(H, hyper, state);
  const int v = eng.resample_E(d, rng);
  state = eng.state();
  return v;
}

int sample_Z(ChainState& state, int d, int i,
             const std::vector<GeneratingMatrix>& H,
             const Hyperparameters& hyper, Rng& rng) {
  Engine eng(H, hyper, state);
  const int v = eng.resample_Z(d, i, rng);
  state = eng.state();
  return v;
}

double sample_gamma(ChainState& state, const Hyperparameters& hyper, Rng& rng) {
  // With no samples this reduces to the Beta(a, b) prior.
  const auto [x, y] = gamma_posterior_params(state, hyper);
  state.gamma = clamp_unit_open(rng.beta(x, y));
  return state.gamma;
}

PosteriorSummary run_chain(const std::vector<GeneratingMatrix>& H,
                           const Hyperparameters& hyper,
                           const ChainConfig& config) {
  const int J = common_cols(H);
  hyper.validate(J);
  if (config.iterations < 1)
    throw std::invalid_argument("run_chain: iterations must be >= 1");
  if (config.burn_in < 0)
    throw std::invalid_argument("run_chain: burn_in must be >= 0");
  const int D = static_cast<int>(H.size());
  for (int d = 0; d < D; ++d)
    if (H[d].rows() == 0)
      throw std::invalid_argument("run_chain: sample " + std::to_string(d + 1) +
                                  " has zero reads");

  Rng rng(config.seed);
  ChainState init;
  init.e = initial_informative(H);
  init.gamma = hyper.a / (hyper.a + hyper.b);
  init.z.resize(D);
  for (int d = 0; d < D; ++d) {
    init.z[d].resize(H[d].rows());
    for (int i = 0; i < H[d].rows(); ++i)
      init.z[d][i] = rng.categorical(H[d].row(i), static_cast<std::size_t>(J));
  }
  Engine eng(H, hyper, std::move(init));

  // The group indicators stay frozen while Z adapts to the seeded partition
  // over the first half of burn-in; indicator updates against unadapted
  // assignments can evict the whole pool and strand the chain in a
  // label-swapped mode. Retained sweeps always use the full kernel, so the
  // invariant distribution is unchanged.
  const int freeze = config.burn_in / 2;
  for (int t = 0; t < config.burn_in; ++t) eng.sweep(rng, t >= freeze);

  PosteriorSummary out;
  out.iterations = config.iterations;
  out.burn_in = config.burn_in;
  out.seed = config.seed;
  std::vector<double> alpha_acc(J, 0.0);
  std::vector<double> theta_acc(D, 0.0);
  if (config.keep_alpha_trace) out.alpha_trace.reserve(config.iterations);
  for (int t = 0; t < config.iterations; ++t) {
    eng.sweep(rng);
    eng.accumulate_alpha(alpha_acc);
    for (int d = 0; d < D; ++d) theta_acc[d] += eng.state().e[d];
    if (config.keep_alpha_trace) out.alpha_trace.push_back(eng.iteration_alpha());
  }
  const double T = static_cast<double>(config.iterations);
  out.alpha_hat.resize(J);
  out.theta_hat.resize(D);
  double alpha_sum = 0.0;
  for (int j = 0; j < J; ++j) {
    out.alpha_hat[j] = alpha_acc[j] / T;
    alpha_sum += out.alpha_hat[j];
  }
  for (int d = 0; d < D; ++d) out.theta_hat[d] = theta_acc[d] / T;
  if (std::fabs(alpha_sum - 1.0) > 1e-9)
    throw std::logic_error("run_chain: alpha_hat left the simplex");
  return out;
}

ExactPosterior exact_posterior(const std::vector<GeneratingMatrix>& H,
                               const Hyperparameters& hyper) {
  const int J = common_cols(H);
  hyper.validate(J);
  const int D = static_cast<int>(H.size());

  long total_reads = 0;
  for (const GeneratingMatrix& m : H) total_reads += m.rows();
  const double config_count =
      std::pow(static_cast<double>(J), static_cast<double>(total_reads)) *
      std::pow(2.0, static_cast<double>(D));
  if (config_count > 1e6)
    throw std::length_error("exact_posterior: configuration count exceeds 1e6");

  double lambda_sum = 0.0, log_b_lambda = 0.0;
  for (double l : hyper.lambda) {
    lambda_sum += l;
    log_b_lambda += log_gamma(l);
  }
  log_b_lambda -= log_gamma(lambda_sum);

  // Flattened reads with their supports, plus per-read log h lookups.
  struct FlatRead {
    int d;
    int i;
    std::vector<int> support;
  };
  std::vector<FlatRead> reads;
  for (int d = 0; d < D; ++d)
    for (int i = 0; i < H[d].rows(); ++i) {
      FlatRead fr{d, i, {}};
      for (int j = 0; j < J; ++j)
        if (H[d](i, j) > 0.0) fr.support.push_back(j);
      reads.push_back(std::move(fr));
    }
  const int M = static_cast<int>(reads.size());

  // Online log-sum-exp accumulators.
  double max_lw = -std::numeric_limits<double>::infinity();
  double total_w = 0.0;
  std::vector<double> alpha_acc(J, 0.0), theta_acc(D, 0.0);
  const double log_gamma_norm = log_gamma(static_cast<double>(D) + hyper.a + hyper.b);

  std::vector<int> pick(M, 0);
  std::vector<std::vector<long>> counts(D, std::vector<long>(J, 0));
  std::vector<long> nd(D, 0);
  for (int d = 0; d < D; ++d) nd[d] = H[d].rows();

  for (unsigned mask = 0; mask < (1u << D); ++mask) {
    std::fill(pick.begin(), pick.end(), 0);
    int sum_e = 0;
    for (int d = 0; d < D; ++d) sum_e += (mask >> d) & 1u;
    for (;;) {
      // counts for this configuration
      for (auto& c : counts) std::fill(c.begin(), c.end(), 0L);
      double log_h = 0.0;
      for (int k = 0; k < M; ++k) {
        const int j = reads[k].support[pick[k]];
        counts[reads[k].d][j]++;
        log_h += std::log(H[reads[k].d](reads[k].i, j));
      }
      std::vector<long> pool(J, 0);
      long pool_total = 0;
      double log_b0_sum = 0.0;
      for (int d = 0; d < D; ++d) {
        if ((mask >> d) & 1u) {
          for (int j = 0; j < J; ++j) pool[j] += counts[d][j];
          pool_total += nd[d];
        } else {
          double b0 = -log_b_lambda;
          for (int j = 0; j < J; ++j) b0 += log_gamma(hyper.lambda[j] + counts[d][j]);
          b0 -= log_gamma(lambda_sum + nd[d]);
          log_b0_sum += b0;
        }
      }
      double log_b1 = -log_gamma(lambda_sum + pool_total);
      for (int j = 0; j < J; ++j) log_b1 += log_gamma(hyper.lambda[j] + pool[j]);
      const double log_gamma_term = log_gamma(sum_e + hyper.a) +
                                    log_gamma(D - sum_e + hyper.b) -
                                    log_gamma_norm;
      const double lw = log_b1 + log_b0_sum + log_h + log_gamma_term;

      double w;
      if (lw > max_lw) {
        const double scale = std::exp(max_lw - lw);
        total_w *= scale;
        for (double& v : alpha_acc) v *= scale;
        for (double& v : theta_acc) v *= scale;
        max_lw = lw;
        w = 1.0;
      } else {
        w = std::exp(lw - max_lw);
      }
      total_w += w;
      const double denom = lambda_sum + static_cast<double>(pool_total);
      for (int j = 0; j < J; ++j)
        alpha_acc[j] += w * (hyper.lambda[j] + static_cast<double>(pool[j])) / denom;
      for (int d = 0; d < D; ++d)
        if ((mask >> d) & 1u) theta_acc[d] += w;

      // odometer
      int k = 0;
      while (k < M) {
        if (++pick[k] < static_cast<int>(reads[k].support.size())) break;
        pick[k] = 0;
        ++k;
      }
      if (k == M) break;
    }
  }

  ExactPosterior out;
  out.alpha.resize(J);
  out.theta.resize(D);
  for (int j = 0; j < J; ++j) out.alpha[j] = alpha_acc[j] / total_w;
  for (int d = 0; d < D; ++d) out.theta[d] = theta_acc[d] / total_w;
  return out;
}

}  // namespace msiq
