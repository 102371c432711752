#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dyadic/features.hpp"
#include "dyadic/random.hpp"

namespace dyadic {

struct RegressionData {
  std::size_t dimension = 0;
  std::vector<FeatureVector> rows;
  std::vector<double> targets;

  explicit RegressionData(std::size_t p = 0) : dimension(p) {}
  void add(FeatureVector x, double y) {
    rows.push_back(std::move(x));
    targets.push_back(y);
  }
};

// X^T X, accumulated row by row. Stays diagonal (p doubles) while every row
// has a single nonzero, which is always the case for one-hot features, and
// switches to a dense row-major p x p matrix on the first wider row.
// Accumulation order is the row order, so two Grams fed the same rows in the
// same order are bitwise equal however they were built.
class Gram {
 public:
  explicit Gram(std::size_t p = 0) : p_(p), diag_(p, 0.0) {}

  void add(const FeatureVector& x);

  std::size_t dimension() const { return p_; }
  std::size_t rows() const { return rows_; }
  bool is_diagonal() const { return dense_.empty(); }
  // Valid only while is_diagonal().
  std::span<const double> diagonal() const { return diag_; }
  // Valid only when !is_diagonal().
  std::span<const double> dense() const { return dense_; }
  double at(std::size_t i, std::size_t j) const;

 private:
  std::size_t p_;
  std::size_t rows_ = 0;
  std::vector<double> diag_;
  std::vector<double> dense_;
};

// xty += y * x
void accumulate_xty(const FeatureVector& x, double y, std::span<double> xty);

class Posterior {
 public:
  Posterior() = default;
  static Posterior diagonal(std::vector<double> mean, std::vector<double> variances);
  static Posterior dense(std::vector<double> mean, std::vector<double> covariance);

  std::size_t dimension() const { return mean_.size(); }
  std::span<const double> mean() const { return mean_; }
  bool is_diagonal() const { return dense_.empty(); }
  std::span<const double> variances() const { return diag_; }
  double covariance(std::size_t i, std::size_t j) const;
  std::vector<double> dense_covariance() const;

 private:
  std::vector<double> mean_;
  std::vector<double> diag_;
  std::vector<double> dense_;
};

// covariance = (X^T X / sigma^2 + lambda I)^-1, mean = covariance X^T y / sigma^2.
Posterior posterior(const RegressionData& data, double lambda, double sigma);
Posterior posterior(const Gram& gram, std::span<const double> xty, double lambda, double sigma);

// One draw from N(mean, covariance).
std::vector<double> sample_weights(const Posterior& post, Rng& rng);

// Lower Cholesky factor of a symmetric positive definite row-major matrix.
// Returns false (leaving the pivot index in *failed_at) instead of throwing.
bool cholesky_lower(std::span<const double> a, std::size_t n, std::vector<double>& l,
                    std::size_t* failed_at = nullptr);

}  // namespace dyadic
