#ifndef RAUZY_POINT_CLOUD_HPP
#define RAUZY_POINT_CLOUD_HPP

#include <span>
#include <string>
#include <vector>

#include "substitution.hpp"

namespace rauzy {

enum class Provenance { markov, enumeration, gifs, sadic, chaos };

std::string to_string(Provenance p);

// Per-letter buckets of chart points stored flat (stride = dim). Optional
// per-point weights; unweighted clouds give every point weight 1.
class PointCloud {
 public:
  PointCloud(std::size_t letters, std::size_t dim, Provenance provenance);

  std::size_t letters() const { return buckets_.size(); }
  std::size_t dim() const { return dim_; }
  Provenance provenance() const { return provenance_; }
  bool weighted() const { return weighted_; }

  void add(Letter a, const double* x);
  void add(Letter a, const double* x, double weight);

  std::size_t count(Letter a) const { return buckets_[a].size() / dim_; }
  std::size_t total() const;
  std::span<const double> bucket(Letter a) const { return buckets_[a]; }
  std::span<const double> point(Letter a, std::size_t i) const {
    return std::span<const double>(buckets_[a]).subspan(i * dim_, dim_);
  }
  double weight(Letter a, std::size_t i) const { return weighted_ ? weights_[a][i] : 1.0; }
  double bucket_weight(Letter a) const;
  double total_weight() const;

  // Appends every bucket of `other` (same shape) after the existing points.
  void append(const PointCloud& other);
  void reserve(Letter a, std::size_t points) { buckets_[a].reserve(points * dim_); }

 private:
  std::size_t dim_;
  Provenance provenance_;
  bool weighted_ = false;
  std::vector<std::vector<double>> buckets_;
  std::vector<std::vector<double>> weights_;
};

}  // namespace rauzy

#endif
