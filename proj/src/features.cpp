#include "dyadic/features.hpp"

#include <cmath>
#include <string>

#include "dyadic/errors.hpp"
#include "dyadic/kernels.hpp"

namespace dyadic {

std::size_t SpaceSpec::dimension() const {
  std::size_t d = 1;
  for (int c : cardinalities) {
    if (c < 1) throw InvalidInput("SpaceSpec: cardinality must be >= 1");
    d *= static_cast<std::size_t>(c);
  }
  return d;
}

FeatureVector::FeatureVector(std::size_t dimension, std::size_t offset, Values values)
    : dimension_(dimension), offset_(offset), values_(std::move(values)) {
  if (offset_ + values_.size() > dimension_)
    throw InvalidInput("FeatureVector: segment exceeds dimension");
}

FeatureVector FeatureVector::dense(std::span<const double> values) {
  return FeatureVector(values.size(), 0, Values(values.begin(), values.end()));
}

double FeatureVector::operator[](std::size_t i) const {
  if (i < offset_ || i >= offset_ + values_.size()) return 0.0;
  return values_[i - offset_];
}

double FeatureVector::dot(std::span<const double> theta) const {
  if (theta.size() != dimension_) throw InvalidInput("FeatureVector::dot: dimension mismatch");
  if (values_.size() == 1) return theta[offset_] * values_[0];
  return kernels::active().dot(theta.data() + offset_, values_.data(), values_.size());
}

std::vector<double> FeatureVector::to_dense() const {
  std::vector<double> out(dimension_, 0.0);
  for (std::size_t i = 0; i < values_.size(); ++i) out[offset_ + i] = values_[i];
  return out;
}

std::size_t one_hot_index(const SpaceSpec& spec, std::span<const int> indices) {
  if (indices.size() != spec.cardinalities.size())
    throw InvalidInput("one_hot: expected " + std::to_string(spec.cardinalities.size()) +
                       " indices, got " + std::to_string(indices.size()));
  std::size_t pos = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const int c = spec.cardinalities[i];
    if (c < 1) throw InvalidInput("SpaceSpec: cardinality must be >= 1");
    if (indices[i] < 0 || indices[i] >= c)
      throw InvalidInput("one_hot: index " + std::to_string(indices[i]) + " out of range for component " +
                         std::to_string(i) + " (cardinality " + std::to_string(c) + ")");
    pos = pos * static_cast<std::size_t>(c) + static_cast<std::size_t>(indices[i]);
  }
  return pos;
}

FeatureVector one_hot(const SpaceSpec& spec, std::span<const int> indices) {
  const std::size_t pos = one_hot_index(spec, indices);
  return FeatureVector(spec.dimension(), pos, FeatureVector::Values{1.0});
}

FeatureVector linear_features(std::span<const double> state, int action_levels, int action) {
  if (action_levels < 1) throw InvalidInput("linear_features: action_levels must be >= 1");
  if (action < 0 || action >= action_levels)
    throw InvalidInput("linear_features: action " + std::to_string(action) + " out of range");
  FeatureVector::Values v;
  v.reserve(state.size() + 1);
  v.push_back(1.0);
  for (double s : state) {
    if (!std::isfinite(s)) throw InvalidInput("linear_features: non-finite state entry");
    v.push_back(s);
  }
  const std::size_t block = state.size() + 1;
  return FeatureVector(linear_dimension(state.size(), action_levels),
                       static_cast<std::size_t>(action) * block, std::move(v));
}

}  // namespace dyadic
