#include "oracles.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace dyadic::oracle {

DenseRidge ridge_normal_equations(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
                                  double lambda, double sigma) {
  const Eigen::Index n = static_cast<Eigen::Index>(X.size());
  const Eigen::Index p = n ? static_cast<Eigen::Index>(X.front().size()) : 0;
  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) A(i, j) = X[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const double s2 = sigma * sigma;
  const Eigen::MatrixXd precision = A.transpose() * A / s2 + lambda * Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd cov = precision.fullPivLu().inverse();
  const Eigen::VectorXd mean = cov * (A.transpose() * b / s2);
  DenseRidge out;
  out.mean.assign(mean.data(), mean.data() + p);
  out.cov.resize(static_cast<std::size_t>(p * p));
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) out.cov[static_cast<std::size_t>(i * p + j)] = cov(i, j);
  return out;
}

double min_eigenvalue(const std::vector<double>& a, std::size_t n) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

BlockMDP random_block_mdp(Rng& rng, int states, int actions, int horizon) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BlockMDP mdp(horizon, states, actions);
  for (int h = 0; h < horizon; ++h)
    for (int s = 0; s < states; ++s)
      for (int a = 0; a < actions; ++a) {
        std::vector<double> w(static_cast<std::size_t>(states));
        double total = 0.0;
        for (double& x : w) total += x = u(rng) + 1e-3;
        std::vector<Successor> next;
        double acc = 0.0;
        for (int s2 = 0; s2 + 1 < states; ++s2) {
          const double p = w[static_cast<std::size_t>(s2)] / total;
          next.push_back({s2, p});
          acc += p;
        }
        next.push_back({states - 1, 1.0 - acc});
        mdp.set(h, s, a, u(rng), std::move(next));
      }
  return mdp;
}

std::vector<double> forward_value(const BlockMDP& mdp, const DeterministicPolicy& pi) {
  const int S = mdp.states();
  std::vector<double> out(static_cast<std::size_t>(S));
  for (int start = 0; start < S; ++start) {
    std::vector<double> d(static_cast<std::size_t>(S), 0.0);
    d[static_cast<std::size_t>(start)] = 1.0;
    double v = 0.0;
    for (int h = 0; h < mdp.horizon(); ++h) {
      std::vector<double> nd(static_cast<std::size_t>(S), 0.0);
      for (int s = 0; s < S; ++s) {
        const int a = pi[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
        v += d[static_cast<std::size_t>(s)] * mdp.reward(h, s, a);
        for (const Successor& n : mdp.next(h, s, a)) nd[static_cast<std::size_t>(n.state)] += d[static_cast<std::size_t>(s)] * n.prob;
      }
      d.swap(nd);
    }
    out[static_cast<std::size_t>(start)] = v;
  }
  return out;
}

std::vector<double> enumerate_optimal(const BlockMDP& mdp) {
  const int S = mdp.states(), A = mdp.actions(), H = mdp.horizon();
  const int cells = S * H;
  long long total = 1;
  for (int i = 0; i < cells; ++i) total *= A;
  std::vector<double> best(static_cast<std::size_t>(S), -INFINITY);
  DeterministicPolicy pi(static_cast<std::size_t>(H), std::vector<int>(static_cast<std::size_t>(S)));
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s) {
        pi[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)] = static_cast<int>(c % A);
        c /= A;
      }
    const auto v = forward_value(mdp, pi);
    for (int s = 0; s < S; ++s) best[static_cast<std::size_t>(s)] = std::max(best[static_cast<std::size_t>(s)], v[static_cast<std::size_t>(s)]);
  }
  return best;
}

McEstimate monte_carlo_value(const BlockMDP& mdp, const DeterministicPolicy& pi, int start, int rollouts, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < rollouts; ++r) {
    int s = start;
    double ret = 0.0;
    for (int h = 0; h < mdp.horizon(); ++h) {
      const int a = pi[static_cast<std::size_t>(h)][static_cast<std::size_t>(s)];
      ret += mdp.reward(h, s, a);
      const double x = u(rng);
      double acc = 0.0;
      const auto next = mdp.next(h, s, a);
      int chosen = next.back().state;
      for (const Successor& n : next) {
        acc += n.prob;
        if (x < acc) {
          chosen = n.state;
          break;
        }
      }
      s = chosen;
    }
    sum += ret;
    sum2 += ret * ret;
  }
  const double mean = sum / rollouts;
  const double var = (sum2 - rollouts * mean * mean) / (rollouts - 1);
  return {mean, std::sqrt(std::max(var, 0.0) / rollouts)};
}

}  // namespace dyadic::oracle
