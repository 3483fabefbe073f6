#ifndef RAUZY_GIFS_HPP
#define RAUZY_GIFS_HPP

#include <vector>

#include <Eigen/Core>

#include "point_cloud.hpp"
#include "spectral.hpp"
#include "substitution.hpp"

namespace rauzy {

// Edge from -> to labelled (prefix, from, suffix), where prefix.from.suffix is
// realisation rule_index of s(to).
struct Edge {
  Letter from;
  Letter to;
  Word prefix;
  Word suffix;
  double word_prob;
  std::size_t rule_index;
};

class PrefixSuffixGraph {
 public:
  PrefixSuffixGraph(std::size_t letters, std::vector<Edge> edges);

  std::size_t letters() const { return out_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const std::vector<std::size_t>& out_edges(Letter a) const { return out_[a]; }
  const std::vector<std::size_t>& in_edges(Letter b) const { return in_[b]; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

PrefixSuffixGraph prefix_suffix_graph(const RandomSubstitution& s);

struct AffineMap {
  Eigen::MatrixXd linear;
  Eigen::VectorXd translation;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return linear * x + translation; }
};

std::vector<AffineMap> gifs_maps(const PrefixSuffixGraph& g, const Chart& chart);

// p^a_e for every edge e out of a, indexed like the graph's edge list.
struct EdgeProbabilities {
  std::vector<double> edge;
  std::vector<double> vertex_sums;
};

EdgeProbabilities edge_probabilities(const PrefixSuffixGraph& g, const PerronData& pd);

struct SetIterationOptions {
  unsigned depth = 30;
  double dedup = 1e-4;
  std::size_t cap = 5'000'000;
};

// Applies R_a <- U_{e: a->b} f_e(R_b) `depth` times from {0} at every vertex,
// keeping one point per grid cell of pitch `dedup`.
PointCloud iterate_sets(const PrefixSuffixGraph& g, const std::vector<AffineMap>& maps, std::size_t dim,
                        const SetIterationOptions& opt);

struct ChaosOptions {
  std::size_t steps = 100000;
  std::size_t burn_in = 60;
  std::uint64_t seed = 0;
};

// Reversed vertex chain with stationary weights L_a R_a. Bucket a collects
// samples of the normalised measure on tile a.
PointCloud chaos_game(const PrefixSuffixGraph& g, const EdgeProbabilities& probs, const std::vector<AffineMap>& maps,
                      const PerronData& pd, const ChaosOptions& opt);

}  // namespace rauzy

#endif
