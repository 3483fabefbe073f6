#ifndef RAUZY_CLOUD_HPP
#define RAUZY_CLOUD_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "point_cloud.hpp"
#include "spectral.hpp"
#include "substitution.hpp"

namespace rauzy {

struct MarkovOptions {
  Letter letter = 0;
  unsigned level = 20;
  std::uint64_t seed = 0;
  std::size_t max_points = 50'000'000;
  // Pin the leftmost branch to the self-start cycle; `letter` is then the
  // cycle letter and `level` must be a multiple of the cycle period.
  bool pinned = false;
  unsigned workers = 1;
};

// |s^n(a)| from the integer matrix, exact.
std::int64_t power_length(const IntMatrix& m, Letter a, unsigned level);

// Streams one realisation of s^n(a); the prefix of length k goes into the
// bucket of letter k+1. Output does not depend on the worker count.
PointCloud sample_cloud_markov(const RandomSubstitution& s, const Chart& chart, const MarkovOptions& opt);

// pi(psi(w_[1,k])) into the bucket of w_{k+1}, for k = 0 .. |w|-1.
PointCloud project_prefixes(const Chart& chart, const Word& w, Provenance provenance);

// Expected-count weighted enumeration of every prefix of every realisation
// of s^k(a), a in `starts` (default: the eventually first letters).
// Weights are normalised to total 1.
PointCloud enumerate_prefix_language(const RandomSubstitution& s, const Chart& chart, unsigned depth,
                                     std::optional<std::vector<Letter>> starts = std::nullopt,
                                     std::size_t cap = 5'000'000);

// Distinct (abelianisation, next letter) pairs produced by the enumeration.
struct PrefixPoint {
  AbelianVector psi;
  Letter next;
  double weight;
};
std::vector<PrefixPoint> enumerate_prefix_points(const RandomSubstitution& s, unsigned depth,
                                                 const std::vector<Letter>& starts, std::size_t cap = 5'000'000);

// Nearest-neighbour index over a flat point set (stride dim).
class NearestIndex {
 public:
  NearestIndex(std::span<const double> points, std::size_t dim);
  double distance(const double* x) const;

 private:
  std::size_t dim_;
  std::vector<double> sorted_;  // 1-D
  std::vector<double> points_;
  double cell_ = 1.0;
  Eigen::VectorXd origin_;
  std::vector<std::int64_t> extent_;
  std::vector<std::vector<std::size_t>> cells_;
  std::size_t cell_index(const std::vector<std::int64_t>& c) const;
};

// One-sided sup distance from A to B.
double directed_hausdorff(std::span<const double> a, std::span<const double> b, std::size_t dim);

struct HausdorffReport {
  std::vector<double> per_letter;
  double global = 0.0;
};
HausdorffReport hausdorff_distance(const PointCloud& a, const PointCloud& b);
// Same, but only the direction A -> B.
HausdorffReport directed_distance(const PointCloud& a, const PointCloud& b);

struct BoundsReport {
  std::vector<Eigen::VectorXd> min;
  std::vector<Eigen::VectorXd> max;
  std::vector<std::size_t> counts;
  std::vector<double> mass_fractions;
};
BoundsReport bounds(const PointCloud& c);

struct BalancednessReport {
  // discrepancy[l-1][a]: max over legal u, |u| <= l, of | |u|_a - |u| R_a |
  std::vector<std::vector<double>> discrepancy;
  std::vector<double> overall;
  bool growth_flag = false;
};
BalancednessReport balancedness_report(const RandomSubstitution& s, const Eigen::VectorXd& right, std::size_t max_len);

bool shift_translation_check(const Chart& chart, const Word& w, std::size_t k, std::size_t m, double tol = 1e-10);

}  // namespace rauzy

#endif
