#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace dyadic {

// Cardinalities of the discrete components that are one-hot encoded together,
// most significant first.
struct SpaceSpec {
  std::vector<int> cardinalities;

  std::size_t dimension() const;
};

// A feature vector whose nonzeros all sit in one contiguous segment
// [offset, offset + values.size()) of a length-`dimension` vector. Both the
// one-hot and the per-action linear layouts have this shape, which keeps
// inner products and Gram updates proportional to the segment length.
class FeatureVector {
 public:
  using Values = boost::container::small_vector<double, 8>;

  FeatureVector() = default;
  FeatureVector(std::size_t dimension, std::size_t offset, Values values);

  static FeatureVector dense(std::span<const double> values);

  std::size_t dimension() const { return dimension_; }
  std::size_t offset() const { return offset_; }
  std::span<const double> values() const { return {values_.data(), values_.size()}; }

  double operator[](std::size_t i) const;
  // theta must have length dimension().
  double dot(std::span<const double> theta) const;
  std::vector<double> to_dense() const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::size_t offset_ = 0;
  Values values_;
};

std::size_t one_hot_index(const SpaceSpec& spec, std::span<const int> indices);
FeatureVector one_hot(const SpaceSpec& spec, std::span<const int> indices);
inline FeatureVector one_hot(const SpaceSpec& spec, std::initializer_list<int> indices) {
  return one_hot(spec, std::span<const int>(indices.begin(), indices.size()));
}

// (1, state...) in the block belonging to `action`; zeros elsewhere.
FeatureVector linear_features(std::span<const double> state, int action_levels, int action);

constexpr std::size_t linear_dimension(std::size_t state_size, int action_levels) {
  return static_cast<std::size_t>(action_levels) * (1 + state_size);
}

}  // namespace dyadic
