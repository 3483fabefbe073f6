#include "point_cloud.hpp"

#include "errors.hpp"

namespace rauzy {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::markov: return "markov";
    case Provenance::enumeration: return "enumeration";
    case Provenance::gifs: return "gifs";
    case Provenance::sadic: return "sadic";
    case Provenance::chaos: return "chaos";
  }
  return "unknown";
}

PointCloud::PointCloud(std::size_t letters, std::size_t dim, Provenance provenance)
    : dim_(dim), provenance_(provenance), buckets_(letters), weights_(letters) {
  if (dim == 0) throw ValidationError("point cloud dimension must be positive");
}

void PointCloud::add(Letter a, const double* x) {
  if (weighted_) {
    add(a, x, 1.0);
    return;
  }
  buckets_[a].insert(buckets_[a].end(), x, x + dim_);
}

void PointCloud::add(Letter a, const double* x, double weight) {
  if (!weighted_) {
    for (std::size_t b = 0; b < buckets_.size(); ++b) weights_[b].assign(buckets_[b].size() / dim_, 1.0);
    weighted_ = true;
  }
  buckets_[a].insert(buckets_[a].end(), x, x + dim_);
  weights_[a].push_back(weight);
}

std::size_t PointCloud::total() const {
  std::size_t n = 0;
  for (std::size_t a = 0; a < buckets_.size(); ++a) n += count(static_cast<Letter>(a));
  return n;
}

double PointCloud::bucket_weight(Letter a) const {
  if (!weighted_) return static_cast<double>(count(a));
  double s = 0.0;
  for (double w : weights_[a]) s += w;
  return s;
}

double PointCloud::total_weight() const {
  double s = 0.0;
  for (std::size_t a = 0; a < buckets_.size(); ++a) s += bucket_weight(static_cast<Letter>(a));
  return s;
}

void PointCloud::append(const PointCloud& other) {
  if (other.letters() != letters() || other.dim() != dim()) throw ValidationError("cannot merge clouds of different shape");
  if (other.weighted_ && !weighted_) {
    for (std::size_t b = 0; b < buckets_.size(); ++b) weights_[b].assign(buckets_[b].size() / dim_, 1.0);
    weighted_ = true;
  }
  for (std::size_t a = 0; a < buckets_.size(); ++a) {
    buckets_[a].insert(buckets_[a].end(), other.buckets_[a].begin(), other.buckets_[a].end());
    if (weighted_) {
      if (other.weighted_)
        weights_[a].insert(weights_[a].end(), other.weights_[a].begin(), other.weights_[a].end());
      else
        weights_[a].resize(buckets_[a].size() / dim_, 1.0);
    }
  }
}

}  // namespace rauzy
