#include "cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "errors.hpp"

namespace rauzy {

std::int64_t power_length(const IntMatrix& m, Letter a, unsigned level) {
  IntMatrix col = IntMatrix::Zero(m.rows(), 1);
  col(a, 0) = 1;
  for (unsigned i = 0; i < level; ++i) {
    col = (m * col).eval();
    if (col.sum() > (std::int64_t{1} << 52)) return std::numeric_limits<std::int64_t>::max();
  }
  return col.sum();
}

namespace {

IntMatrix matrix_power(const IntMatrix& m, unsigned k) {
  IntMatrix out = IntMatrix::Identity(m.rows(), m.cols());
  for (unsigned i = 0; i < k; ++i) out = (out * m).eval();
  return out;
}

// Streams the expansion of consecutive tree nodes starting from an exact
// abelianisation offset, projecting every prefix.
class PrefixProjector {
 public:
  PrefixProjector(const Chart& chart, PointCloud& cloud, std::vector<std::int64_t> z)
      : chart_(chart), cloud_(cloud), z_(std::move(z)), x_(chart.dim()) {}

  void operator()(std::span<const Letter> chunk) {
    const std::size_t dim = chart_.dim();
    for (Letter c : chunk) {
      for (std::size_t r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (std::size_t i = 0; i < z_.size(); ++i) acc += chart_.pi(r, i) * static_cast<double>(z_[i]);
        x_[r] = acc;
      }
      cloud_.add(c, x_.data());
      ++z_[c];
    }
  }

 private:
  const Chart& chart_;
  PointCloud& cloud_;
  std::vector<std::int64_t> z_;
  std::vector<double> x_;
};

}  // namespace

PointCloud sample_cloud_markov(const RandomSubstitution& s, const Chart& chart, const MarkovOptions& opt) {
  const IntMatrix m = integer_matrix(s);
  const std::size_t d = s.size();
  std::optional<SelfStart> pin;
  if (opt.pinned) {
    pin = find_self_start(s);
    if (!pin) throw ValidationError("no self-starting letter for a pinned cloud");
  }
  InflationTree tree(s, opt.seed, pin);
  const InflationNode root = opt.pinned ? tree.pinned_root(opt.level) : tree.root(opt.letter, opt.level);
  const std::int64_t length = power_length(m, root.letter, opt.level);
  if (length > static_cast<std::int64_t>(opt.max_points))
    throw LimitError("level " + std::to_string(opt.level) + " gives " + std::to_string(length) +
                     " points, above the limit of " + std::to_string(opt.max_points));

  const unsigned workers = std::max(1u, opt.workers);
  std::vector<InflationNode> nodes{root};
  unsigned split = opt.level;
  while (workers > 1 && nodes.size() < 8 * workers && split > 0) {
    --split;
    nodes = tree.frontier(root, split);
  }
  const IntMatrix step = matrix_power(m, split);
  std::vector<std::vector<std::int64_t>> offsets;
  std::vector<std::int64_t> z(d, 0);
  for (const auto& node : nodes) {
    offsets.push_back(z);
    for (std::size_t i = 0; i < d; ++i) z[i] += step(i, node.letter);
  }

  const std::size_t shards = std::min<std::size_t>(workers, nodes.size());
  std::vector<PointCloud> parts(shards, PointCloud(d, chart.dim(), Provenance::markov));
  auto run = [&](std::size_t shard) {
    const std::size_t begin = nodes.size() * shard / shards, end = nodes.size() * (shard + 1) / shards;
    if (begin == end) return;
    PrefixProjector sink(chart, parts[shard], offsets[begin]);
    for (std::size_t i = begin; i < end; ++i)
      tree.expand(nodes[i], SIZE_MAX, [&](std::span<const Letter> chunk) { sink(chunk); });
  };
  if (shards == 1) {
    for (std::size_t a = 0; a < d; ++a)
      parts[0].reserve(static_cast<Letter>(a), static_cast<std::size_t>(length) / d + 16);
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < shards; ++k) pool.emplace_back(run, k);
    for (auto& t : pool) t.join();
  }
  PointCloud out = std::move(parts[0]);
  for (std::size_t k = 1; k < shards; ++k) out.append(parts[k]);
  return out;
}

PointCloud project_prefixes(const Chart& chart, const Word& w, Provenance provenance) {
  PointCloud cloud(chart.d, chart.dim(), provenance);
  PrefixProjector sink(chart, cloud, std::vector<std::int64_t>(chart.d, 0));
  sink(w.letters());
  return cloud;
}

std::vector<PrefixPoint> enumerate_prefix_points(const RandomSubstitution& s, unsigned depth,
                                                 const std::vector<Letter>& starts, std::size_t cap) {
  const IntMatrix m = integer_matrix(s);
  const std::size_t d = s.size();
  using Key = std::pair<std::vector<std::int64_t>, Letter>;
  std::map<Key, double> current;
  for (Letter a : starts) current[{std::vector<std::int64_t>(d, 0), a}] += 1.0;
  for (unsigned level = 0; level < depth; ++level) {
    std::map<Key, double> next;
    for (const auto& [key, w] : current) {
      const auto& [z, c] = key;
      std::vector<std::int64_t> base(d, 0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) base[i] += m(i, j) * z[j];
      for (const auto& r : s.rules(c)) {
        std::vector<std::int64_t> y = base;
        for (Letter b : r.word.letters()) {
          next[{y, b}] += w * r.probability;
          ++y[b];
        }
      }
      if (next.size() > cap)
        throw LimitError("prefix enumeration exceeded " + std::to_string(cap) + " points; lower the depth");
    }
    current = std::move(next);
  }
  std::vector<PrefixPoint> out;
  for (const auto& [key, w] : current) out.push_back({AbelianVector(key.first), key.second, w});
  return out;
}

PointCloud enumerate_prefix_language(const RandomSubstitution& s, const Chart& chart, unsigned depth,
                                     std::optional<std::vector<Letter>> starts, std::size_t cap) {
  const std::vector<Letter> from = starts ? *starts : eventually_first_letters(s);
  if (from.empty()) throw ValidationError("no start letters for prefix enumeration");
  const auto points = enumerate_prefix_points(s, depth, from, cap);
  double total = 0.0;
  for (const auto& p : points) total += p.weight;
  PointCloud cloud(s.size(), chart.dim(), Provenance::enumeration);
  for (const auto& p : points) {
    const Eigen::VectorXd x = project(chart, p.psi);
    cloud.add(p.next, x.data(), p.weight / total);
  }
  return cloud;
}

// ------------------------------------------------------ nearest neighbours

NearestIndex::NearestIndex(std::span<const double> points, std::size_t dim)
    : dim_(dim), points_(points.begin(), points.end()) {
  if (points.empty()) throw ValidationError("nearest-neighbour index over an empty set");
  if (dim == 1) {
    sorted_ = points_;
    std::sort(sorted_.begin(), sorted_.end());
    return;
  }
  const std::size_t n = points.size() / dim;
  origin_ = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) {
      origin_[c] = std::min(origin_[c], points_[i * dim + c]);
      hi[c] = std::max(hi[c], points_[i * dim + c]);
    }
  const double span = std::max((hi - origin_).maxCoeff(), 1e-12);
  cell_ = span / std::max(1.0, std::pow(static_cast<double>(n), 1.0 / static_cast<double>(dim)));
  extent_.resize(dim);
  std::size_t cells = 1;
  for (std::size_t c = 0; c < dim; ++c) {
    extent_[c] = static_cast<std::int64_t>(std::floor((hi[c] - origin_[c]) / cell_)) + 1;
    cells *= static_cast<std::size_t>(extent_[c]);
  }
  cells_.resize(cells);
  std::vector<std::int64_t> idx(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < dim; ++c)
      idx[c] = std::clamp<std::int64_t>(static_cast<std::int64_t>((points_[i * dim + c] - origin_[c]) / cell_), 0,
                                        extent_[c] - 1);
    cells_[cell_index(idx)].push_back(i);
  }
}

std::size_t NearestIndex::cell_index(const std::vector<std::int64_t>& c) const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i) k = k * static_cast<std::size_t>(extent_[i]) + static_cast<std::size_t>(c[i]);
  return k;
}

double NearestIndex::distance(const double* x) const {
  if (dim_ == 1) {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x[0]);
    double best = std::numeric_limits<double>::infinity();
    if (it != sorted_.end()) best = *it - x[0];
    if (it != sorted_.begin()) best = std::min(best, x[0] - *std::prev(it));
    return best;
  }
  std::vector<std::int64_t> q(dim_);
  std::int64_t max_extent = 0;
  for (std::size_t c = 0; c < dim_; ++c) {
    q[c] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x[c] - origin_[c]) / cell_)), 0,
                                    extent_[c] - 1);
    max_extent = std::max(max_extent, extent_[c]);
  }
  double best2 = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> off(dim_), cell(dim_);
  for (std::int64_t r = 0; r <= max_extent; ++r) {
    // Visit cells at Chebyshev index distance exactly r from q.
    std::fill(off.begin(), off.end(), -r);
    while (true) {
      bool on_shell = false, inside = true;
      for (std::size_t c = 0; c < dim_; ++c) {
        on_shell = on_shell || std::llabs(off[c]) == r;
        cell[c] = q[c] + off[c];
        inside = inside && cell[c] >= 0 && cell[c] < extent_[c];
      }
      if (on_shell && inside) {
        for (std::size_t i : cells_[cell_index(cell)]) {
          double d2 = 0.0;
          for (std::size_t c = 0; c < dim_; ++c) {
            const double t = points_[i * dim_ + c] - x[c];
            d2 += t * t;
          }
          best2 = std::min(best2, d2);
        }
      }
      std::size_t c = 0;
      while (c < dim_ && off[c] == r) off[c++] = -r;
      if (c == dim_) break;
      ++off[c];
    }
    // Cells further out are at least r * cell_ away from the projection of
    // x onto the grid box, hence from x.
    const double bound = static_cast<double>(r) * cell_;
    if (best2 <= bound * bound) break;
  }
  return std::sqrt(best2);
}

double directed_hausdorff(std::span<const double> a, std::span<const double> b, std::size_t dim) {
  NearestIndex index(b, dim);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); i += dim) worst = std::max(worst, index.distance(&a[i]));
  return worst;
}

namespace {

HausdorffReport compare(const PointCloud& a, const PointCloud& b, bool symmetric) {
  if (a.letters() != b.letters() || a.dim() != b.dim()) throw ValidationError("clouds have different shapes");
  HausdorffReport r;
  for (std::size_t l = 0; l < a.letters(); ++l) {
    const auto x = static_cast<Letter>(l);
    if (a.count(x) == 0 || b.count(x) == 0)
      throw ValidationError("empty bucket for letter " + std::to_string(l + 1));
    double dist = directed_hausdorff(a.bucket(x), b.bucket(x), a.dim());
    if (symmetric) dist = std::max(dist, directed_hausdorff(b.bucket(x), a.bucket(x), a.dim()));
    r.per_letter.push_back(dist);
    r.global = std::max(r.global, dist);
  }
  return r;
}

}  // namespace

HausdorffReport hausdorff_distance(const PointCloud& a, const PointCloud& b) { return compare(a, b, true); }
HausdorffReport directed_distance(const PointCloud& a, const PointCloud& b) { return compare(a, b, false); }

BoundsReport bounds(const PointCloud& c) {
  BoundsReport r;
  const double total = c.total_weight();
  if (!(total > 0.0)) throw ValidationError("bounds of an empty cloud");
  const auto dim = static_cast<Eigen::Index>(c.dim());
  for (std::size_t l = 0; l < c.letters(); ++l) {
    const auto a = static_cast<Letter>(l);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::quiet_NaN());
    Eigen::VectorXd hi = lo;
    const auto pts = c.bucket(a);
    for (std::size_t i = 0; i < pts.size(); i += c.dim())
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double v = pts[i + static_cast<std::size_t>(k)];
        lo[k] = i == 0 ? v : std::min(lo[k], v);
        hi[k] = i == 0 ? v : std::max(hi[k], v);
      }
    r.min.push_back(lo);
    r.max.push_back(hi);
    r.counts.push_back(c.count(a));
    r.mass_fractions.push_back(c.bucket_weight(a) / total);
  }
  return r;
}

BalancednessReport balancedness_report(const RandomSubstitution& s, const Eigen::VectorXd& right, std::size_t max_len) {
  const std::size_t d = s.size();
  const LanguageSlice slice = legal_words(s, max_len);
  std::vector<std::vector<double>> exact(max_len, std::vector<double>(d, 0.0));
  std::vector<std::int64_t> counts(d);
  for (const Word& w : slice.words) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t j = i; j < w.size(); ++j) {
        ++counts[w[j]];
        const std::size_t len = j - i + 1;
        for (std::size_t a = 0; a < d; ++a) {
          const double disc = std::abs(static_cast<double>(counts[a]) - static_cast<double>(len) * right[a]);
          exact[len - 1][a] = std::max(exact[len - 1][a], disc);
        }
      }
    }
  }
  BalancednessReport r;
  std::vector<double> running(d, 0.0);
  for (std::size_t l = 0; l < max_len; ++l) {
    for (std::size_t a = 0; a < d; ++a) running[a] = std::max(running[a], exact[l][a]);
    r.discrepancy.push_back(running);
    r.overall.push_back(*std::max_element(running.begin(), running.end()));
  }
  const std::size_t half = std::max<std::size_t>(1, max_len / 2);
  r.growth_flag = r.overall.back() - r.overall[half - 1] > 0.5;
  return r;
}

bool shift_translation_check(const Chart& chart, const Word& w, std::size_t k, std::size_t m, double tol) {
  if (w.size() < k + m + 1) throw ValidationError("shift-translation window exceeds the available prefix");
  const std::size_t d = chart.d;
  const std::size_t dim = chart.dim();
  PointCloud shifted(d, dim, Provenance::markov), original(d, dim, Provenance::markov);

  AbelianVector z(d);
  for (std::size_t j = 0; j <= m; ++j) {
    const Eigen::VectorXd x = project(chart, z);
    shifted.add(w[k + j], x.data());
    z.add(w[k + j]);
  }
  const Eigen::VectorXd base = project(chart, abelianise(w.prefix(k), d));
  AbelianVector y(d);
  for (std::size_t i = 0; i <= k + m; ++i) {
    const Eigen::VectorXd x = project(chart, y) - base;
    original.add(w[i], x.data());
    y.add(w[i]);
  }
  for (std::size_t l = 0; l < d; ++l) {
    const auto a = static_cast<Letter>(l);
    if (shifted.count(a) == 0) continue;
    if (original.count(a) == 0) return false;
    if (directed_hausdorff(shifted.bucket(a), original.bucket(a), dim) > tol) return false;
  }
  return true;
}

}  // namespace rauzy
