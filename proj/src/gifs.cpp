#include "gifs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

#include "errors.hpp"

namespace rauzy {

PrefixSuffixGraph::PrefixSuffixGraph(std::size_t letters, std::vector<Edge> edges)
    : edges_(std::move(edges)), out_(letters), in_(letters) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    out_[edges_[i].from].push_back(i);
    in_[edges_[i].to].push_back(i);
  }
}

PrefixSuffixGraph prefix_suffix_graph(const RandomSubstitution& s) {
  std::vector<Edge> edges;
  for (std::size_t b = 0; b < s.size(); ++b) {
    const auto rules = s.rules(static_cast<Letter>(b));
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const Word& v = rules[r].word;
      for (std::size_t i = 0; i < v.size(); ++i)
        edges.push_back({v[i], static_cast<Letter>(b), v.prefix(i), v.subword(i + 1, v.size() - i - 1),
                         rules[r].probability, r});
    }
  }
  // Group by source vertex; stable so edge order inside a group follows the rules.
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.from < y.from; });
  return PrefixSuffixGraph(s.size(), std::move(edges));
}

std::vector<AffineMap> gifs_maps(const PrefixSuffixGraph& g, const Chart& chart) {
  std::vector<AffineMap> maps;
  for (const Edge& e : g.edges()) maps.push_back({chart.h, project(chart, abelianise(e.prefix, chart.d))});
  return maps;
}

EdgeProbabilities edge_probabilities(const PrefixSuffixGraph& g, const PerronData& pd) {
  EdgeProbabilities p;
  p.vertex_sums.assign(g.letters(), 0.0);
  for (const Edge& e : g.edges()) {
    const double v = e.word_prob * pd.right[e.to] / (pd.lambda * pd.right[e.from]);
    p.edge.push_back(v);
    p.vertex_sums[e.from] += v;
  }
  for (std::size_t a = 0; a < g.letters(); ++a)
    if (std::abs(p.vertex_sums[a] - 1.0) > 1e-9)
      throw NumericalError("edge probabilities out of letter " + std::to_string(a + 1) + " sum to " +
                           std::to_string(p.vertex_sums[a]));
  return p;
}

namespace {

using CellKey = std::array<std::int64_t, 3>;

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 0;
    for (auto v : k) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const double* x, std::size_t dim, double pitch) {
  CellKey k{0, 0, 0};
  for (std::size_t i = 0; i < dim; ++i) k[i] = static_cast<std::int64_t>(std::floor(x[i] / pitch));
  return k;
}

}  // namespace

PointCloud iterate_sets(const PrefixSuffixGraph& g, const std::vector<AffineMap>& maps, std::size_t dim,
                        const SetIterationOptions& opt) {
  if (dim > 3) throw ValidationError("set iteration supports charts of dimension at most 3");
  if (!(opt.dedup > 0.0)) throw ValidationError("dedup pitch must be positive");
  const std::size_t n = g.letters();
  std::vector<std::vector<double>> sets(n, std::vector<double>(dim, 0.0));
  for (unsigned step = 0; step < opt.depth; ++step) {
    std::vector<std::vector<double>> next(n);
    std::size_t total = 0;
    for (std::size_t a = 0; a < n; ++a) {
      std::unordered_set<CellKey, CellHash> seen;
      for (std::size_t ei : g.out_edges(static_cast<Letter>(a))) {
        const AffineMap& f = maps[ei];
        const auto& src = sets[g.edge(ei).to];
        Eigen::VectorXd x(dim);
        for (std::size_t i = 0; i < src.size(); i += dim) {
          for (std::size_t c = 0; c < dim; ++c) x[c] = src[i + c];
          const Eigen::VectorXd y = f(x);
          if (seen.insert(cell_of(y.data(), dim, opt.dedup)).second) next[a].insert(next[a].end(), y.data(), y.data() + dim);
        }
      }
      total += next[a].size() / dim;
      if (total > opt.cap)
        throw LimitError("set iteration exceeded " + std::to_string(opt.cap) + " points; use a larger dedup pitch");
    }
    sets = std::move(next);
  }
  PointCloud cloud(n, dim, Provenance::gifs);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < sets[a].size(); i += dim) cloud.add(static_cast<Letter>(a), &sets[a][i]);
  return cloud;
}

PointCloud chaos_game(const PrefixSuffixGraph& g, const EdgeProbabilities& probs, const std::vector<AffineMap>& maps,
                      const PerronData& pd, const ChaosOptions& opt) {
  if (opt.burn_in < 50 || opt.steps <= opt.burn_in) throw ValidationError("chaos game needs steps > burn-in >= 50");
  const std::size_t n = g.letters();
  const std::size_t dim = static_cast<std::size_t>(maps.front().translation.size());

  // In-edge e = a->b of b is taken with probability L_a R_a p^a_e / (L_b R_b).
  std::vector<std::vector<double>> cumulative(n);
  for (std::size_t b = 0; b < n; ++b) {
    double acc = 0.0;
    for (std::size_t ei : g.in_edges(static_cast<Letter>(b))) {
      const Letter a = g.edge(ei).from;
      acc += pd.left[a] * pd.right[a] * probs.edge[ei];
      cumulative[b].push_back(acc);
    }
    for (double& c : cumulative[b]) c /= acc;
    cumulative[b].back() = 1.0;
  }
  std::vector<double> stationary(n);
  double acc = 0.0;
  for (std::size_t a = 0; a < n; ++a) stationary[a] = acc += pd.left[a] * pd.right[a];
  for (double& c : stationary) c /= acc;
  stationary.back() = 1.0;

  Rng rng = make_rng(opt.seed);
  auto draw = [&](const std::vector<double>& cum) {
    const double u = uniform01(rng);
    return static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  };
  std::size_t vertex = std::min(draw(stationary), n - 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  PointCloud cloud(n, dim, Provenance::chaos);
  for (std::size_t step = 0; step < opt.steps; ++step) {
    const auto& in = g.in_edges(static_cast<Letter>(vertex));
    const std::size_t ei = in[std::min(draw(cumulative[vertex]), in.size() - 1)];
    x = maps[ei](x);
    vertex = g.edge(ei).from;
    if (step >= opt.burn_in) cloud.add(static_cast<Letter>(vertex), x.data());
  }
  return cloud;
}

}  // namespace rauzy
