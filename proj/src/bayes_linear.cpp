#include "dyadic/bayes_linear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyadic/errors.hpp"
#include "dyadic/kernels.hpp"

namespace dyadic {
namespace {

void check_hyper(double lambda, double sigma) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidInput("posterior: lambda must be positive and finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidInput("posterior: sigma must be positive and finite");
}

void check_row(const FeatureVector& x, std::size_t p) {
  if (x.dimension() != p)
    throw InvalidInput("regression row has dimension " + std::to_string(x.dimension()) +
                       ", expected " + std::to_string(p));
  for (double v : x.values())
    if (!std::isfinite(v)) throw InvalidInput("regression row has a non-finite entry");
}

// Inverse of an SPD matrix from its lower Cholesky factor, by solving
// L L^T X = I one column at a time.
std::vector<double> inverse_from_cholesky(const std::vector<double>& l, std::size_t n) {
  const auto& k = kernels::active();
  std::vector<double> inv(n * n, 0.0);
  std::vector<double> col(n);
  // Row-major L^T makes the back substitution a contiguous dot as well.
  std::vector<double> lt(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) lt[j * n + i] = l[i * n + j];
  for (std::size_t c = 0; c < n; ++c) {
    // forward: L z = e_c (z_i = 0 for i < c)
    std::fill(col.begin(), col.end(), 0.0);
    for (std::size_t i = c; i < n; ++i) {
      const double rhs = (i == c ? 1.0 : 0.0) - k.dot(l.data() + i * n + c, col.data() + c, i - c);
      col[i] = rhs / l[i * n + i];
    }
    // backward: L^T x = z
    for (std::size_t ii = n; ii-- > 0;) {
      const double rhs = col[ii] - k.dot(lt.data() + ii * n + ii + 1, col.data() + ii + 1, n - ii - 1);
      col[ii] = rhs / l[ii * n + ii];
    }
    for (std::size_t i = 0; i < n; ++i) inv[i * n + c] = col[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double s = 0.5 * (inv[i * n + j] + inv[j * n + i]);
      inv[i * n + j] = s;
      inv[j * n + i] = s;
    }
  return inv;
}

std::string diagnostics(std::span<const double> a, std::size_t n, std::size_t pivot) {
  double dmin = INFINITY, dmax = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    dmin = std::min(dmin, a[i * n + i]);
    dmax = std::max(dmax, a[i * n + i]);
  }
  std::ostringstream os;
  os << "n=" << n << ", failed pivot " << pivot << ", diagonal range [" << dmin << ", " << dmax
     << "], diagonal ratio " << (dmin > 0 ? dmax / dmin : INFINITY);
  return os.str();
}

}  // namespace

void Gram::add(const FeatureVector& x) {
  check_row(x, p_);
  const auto v = x.values();
  const std::size_t o = x.offset();
  ++rows_;
  if (is_diagonal() && v.size() <= 1) {
    if (v.size() == 1) diag_[o] = diag_[o] + v[0] * v[0];
    return;
  }
  if (is_diagonal()) {
    dense_.assign(p_ * p_, 0.0);
    for (std::size_t i = 0; i < p_; ++i) dense_[i * p_ + i] = diag_[i];
    diag_.clear();
  }
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < v.size(); ++i)
    k.axpy(v[i], v.data(), dense_.data() + (o + i) * p_ + o, v.size());
}

double Gram::at(std::size_t i, std::size_t j) const {
  if (is_diagonal()) return i == j ? diag_[i] : 0.0;
  return dense_[i * p_ + j];
}

void accumulate_xty(const FeatureVector& x, double y, std::span<double> xty) {
  const auto v = x.values();
  if (v.size() == 1) {
    xty[x.offset()] = xty[x.offset()] + y * v[0];
    return;
  }
  kernels::active().axpy(y, v.data(), xty.data() + x.offset(), v.size());
}

Posterior Posterior::diagonal(std::vector<double> mean, std::vector<double> variances) {
  if (mean.size() != variances.size()) throw InvalidInput("Posterior: dimension mismatch");
  Posterior p;
  p.mean_ = std::move(mean);
  p.diag_ = std::move(variances);
  return p;
}

Posterior Posterior::dense(std::vector<double> mean, std::vector<double> covariance) {
  if (covariance.size() != mean.size() * mean.size())
    throw InvalidInput("Posterior: dimension mismatch");
  Posterior p;
  p.mean_ = std::move(mean);
  p.dense_ = std::move(covariance);
  if (p.mean_.empty()) p.diag_.clear();
  return p;
}

double Posterior::covariance(std::size_t i, std::size_t j) const {
  if (is_diagonal()) return i == j ? diag_[i] : 0.0;
  return dense_[i * mean_.size() + j];
}

std::vector<double> Posterior::dense_covariance() const {
  if (!is_diagonal()) return dense_;
  const std::size_t n = mean_.size();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = diag_[i];
  return out;
}

bool cholesky_lower(std::span<const double> a, std::size_t n, std::vector<double>& l,
                    std::size_t* failed_at) {
  const auto& k = kernels::active();
  l.assign(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = a[j * n + j] - k.dot(l.data() + j * n, l.data() + j * n, j);
    if (!(d > 0.0) || !std::isfinite(d)) {
      if (failed_at) *failed_at = j;
      return false;
    }
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i)
      l[i * n + j] = (a[i * n + j] - k.dot(l.data() + i * n, l.data() + j * n, j)) / ljj;
  }
  return true;
}

Posterior posterior(const Gram& gram, std::span<const double> xty, double lambda, double sigma) {
  check_hyper(lambda, sigma);
  const std::size_t p = gram.dimension();
  if (xty.size() != p) throw InvalidInput("posterior: X^T y has the wrong dimension");
  const double inv_s2 = 1.0 / (sigma * sigma);
  std::vector<double> mean(p);
  if (gram.is_diagonal()) {
    std::vector<double> var(p);
    kernels::active().diag_posterior(gram.diagonal().data(), xty.data(), inv_s2, lambda, mean.data(),
                                     var.data(), p);
    return Posterior::diagonal(std::move(mean), std::move(var));
  }
  std::vector<double> precision(gram.dense().begin(), gram.dense().end());
  for (double& v : precision) v *= inv_s2;
  for (std::size_t i = 0; i < p; ++i) precision[i * p + i] += lambda;
  std::vector<double> l;
  std::size_t pivot = 0;
  if (!cholesky_lower(precision, p, l, &pivot))
    throw NumericError("posterior: precision matrix not positive definite (" +
                       diagnostics(precision, p, pivot) + ")");
  std::vector<double> cov = inverse_from_cholesky(l, p);
  std::vector<double> b(xty.begin(), xty.end());
  for (double& v : b) v *= inv_s2;
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < p; ++i) mean[i] = k.dot(cov.data() + i * p, b.data(), p);
  return Posterior::dense(std::move(mean), std::move(cov));
}

Posterior posterior(const RegressionData& data, double lambda, double sigma) {
  check_hyper(lambda, sigma);
  if (data.rows.size() != data.targets.size())
    throw InvalidInput("posterior: " + std::to_string(data.rows.size()) + " rows but " +
                       std::to_string(data.targets.size()) + " targets");
  Gram gram(data.dimension);
  std::vector<double> xty(data.dimension, 0.0);
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    if (!std::isfinite(data.targets[r])) throw InvalidInput("posterior: non-finite target");
    gram.add(data.rows[r]);
    accumulate_xty(data.rows[r], data.targets[r], xty);
  }
  return posterior(gram, xty, lambda, sigma);
}

std::vector<double> sample_weights(const Posterior& post, Rng& rng) {
  const std::size_t n = post.dimension();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(n);
  for (double& v : z) v = normal(rng);
  std::vector<double> out(n);
  const auto& k = kernels::active();
  if (post.is_diagonal()) {
    std::vector<double> scale(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = post.variances()[i];
      if (!(v > 0.0) || !std::isfinite(v))
        throw NumericError("sample_weights: variance " + std::to_string(v) + " at coordinate " +
                           std::to_string(i) + " is not positive");
      scale[i] = std::sqrt(v);
    }
    k.affine(post.mean().data(), scale.data(), z.data(), out.data(), n);
    return out;
  }
  std::vector<double> cov = post.dense_covariance();
  std::vector<double> l;
  std::size_t pivot = 0;
  if (!cholesky_lower(cov, n, l, &pivot)) {
    const std::string first = diagnostics(cov, n, pivot);
    for (std::size_t i = 0; i < n; ++i) cov[i * n + i] += 1e-10;
    if (!cholesky_lower(cov, n, l, &pivot))
      throw NumericError("sample_weights: covariance not positive definite even with 1e-10 jitter (" +
                         first + ")");
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = post.mean()[i] + k.dot(l.data() + i * n, z.data(), i + 1);
  return out;
}

}  // namespace dyadic
