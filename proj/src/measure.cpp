#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/LU>

#include "cloud.hpp"
#include "errors.hpp"

namespace rauzy {

double EmpiricalMeasure::mass() const {
  long double sum = 0.0L;
  for (double w : weights) sum += w;
  return static_cast<double>(sum);
}

EmpiricalMeasure EmpiricalMeasure::normalised() const {
  const double m = mass();
  if (!(m > 0.0)) throw ValidationError("cannot normalise a measure of zero mass");
  return scaled(1.0 / m);
}

EmpiricalMeasure EmpiricalMeasure::scaled(double factor) const {
  EmpiricalMeasure out = *this;
  for (double& w : out.weights) w *= factor;
  return out;
}

std::vector<EmpiricalMeasure> empirical_measure(const PointCloud& c) {
  const double total = c.total_weight();
  if (!(total > 0.0)) throw ValidationError("empirical measure of an empty cloud");
  std::vector<EmpiricalMeasure> out;
  for (std::size_t l = 0; l < c.letters(); ++l) {
    const auto a = static_cast<Letter>(l);
    EmpiricalMeasure m;
    m.dim = c.dim();
    m.points.assign(c.bucket(a).begin(), c.bucket(a).end());
    for (std::size_t i = 0; i < c.count(a); ++i) m.weights.push_back(c.weight(a, i) / total);
    out.push_back(std::move(m));
  }
  return out;
}

EmpiricalMeasure total_measure(const PointCloud& c) {
  EmpiricalMeasure sum;
  sum.dim = c.dim();
  for (const auto& m : empirical_measure(c)) {
    sum.points.insert(sum.points.end(), m.points.begin(), m.points.end());
    sum.weights.insert(sum.weights.end(), m.weights.begin(), m.weights.end());
  }
  return sum;
}

EmpiricalMeasure normalised_tile(const PointCloud& c, Letter a) {
  if (c.count(a) == 0) throw ValidationError("empty bucket for letter " + std::to_string(a + 1));
  EmpiricalMeasure m;
  m.dim = c.dim();
  m.points.assign(c.bucket(a).begin(), c.bucket(a).end());
  for (std::size_t i = 0; i < c.count(a); ++i) m.weights.push_back(c.weight(a, i));
  return m.normalised();
}

EmpiricalMeasure dirac(const Eigen::VectorXd& x, double mass) {
  EmpiricalMeasure m;
  m.dim = static_cast<std::size_t>(x.size());
  m.points.assign(x.data(), x.data() + x.size());
  m.weights = {mass};
  return m;
}

EmpiricalMeasure uniform_measure(double lo, double hi, double mass, std::size_t n) {
  if (n == 0 || !(hi >= lo)) throw ValidationError("uniform measure needs n >= 1 and lo <= hi");
  EmpiricalMeasure m;
  m.dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    m.points.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    m.weights.push_back(mass / static_cast<double>(n));
  }
  return m;
}

namespace {

struct Box {
  std::vector<double> lo, hi;
};

Box bounding_box(const std::vector<double>& pts, std::size_t dim) {
  Box b{std::vector<double>(dim, INFINITY), std::vector<double>(dim, -INFINITY)};
  for (std::size_t i = 0; i < pts.size(); i += dim)
    for (std::size_t c = 0; c < dim; ++c) {
      b.lo[c] = std::min(b.lo[c], pts[i + c]);
      b.hi[c] = std::max(b.hi[c], pts[i + c]);
    }
  return b;
}

std::size_t grid_cell(const double* x, const std::vector<double>& lo, const std::vector<double>& pitch,
                      const std::vector<std::size_t>& shape) {
  std::size_t k = 0;
  for (std::size_t c = 0; c < shape.size(); ++c) {
    const double t = pitch[c] > 0.0 ? (x[c] - lo[c]) / pitch[c] : 0.0;
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(t), 0.0, static_cast<double>(shape[c] - 1)));
    k = k * shape[c] + i;
  }
  return k;
}

}  // namespace

EmpiricalMeasure rebin(const EmpiricalMeasure& m, std::size_t bins) {
  if (m.size() == 0) return m;
  const std::size_t dim = m.dim;
  const Box box = bounding_box(m.points, dim);
  std::vector<double> pitch(dim);
  std::vector<std::size_t> shape(dim, bins);
  for (std::size_t c = 0; c < dim; ++c) pitch[c] = (box.hi[c] - box.lo[c]) / static_cast<double>(bins);
  struct Acc {
    double mass = 0.0;
    std::vector<double> moment;
  };
  std::unordered_map<std::size_t, Acc> cells;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double* x = &m.points[i * dim];
    Acc& acc = cells[grid_cell(x, box.lo, pitch, shape)];
    if (acc.moment.empty()) acc.moment.assign(dim, 0.0);
    acc.mass += m.weights[i];
    for (std::size_t c = 0; c < dim; ++c) acc.moment[c] += m.weights[i] * x[c];
  }
  std::vector<std::size_t> keys;
  for (const auto& kv : cells) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  EmpiricalMeasure out;
  out.dim = dim;
  for (std::size_t k : keys) {
    const Acc& acc = cells[k];
    if (!(acc.mass > 0.0)) continue;
    for (std::size_t c = 0; c < dim; ++c) out.points.push_back(acc.moment[c] / acc.mass);
    out.weights.push_back(acc.mass);
  }
  return out;
}

Histogram histogram(const EmpiricalMeasure& m, std::size_t bins,
                    std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> box) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  const std::size_t dim = m.dim;
  Histogram h;
  if (box) {
    h.lo.assign(box->first.data(), box->first.data() + dim);
    const std::vector<double> hi(box->second.data(), box->second.data() + dim);
    for (std::size_t c = 0; c < dim; ++c) h.pitch.push_back((hi[c] - h.lo[c]) / static_cast<double>(bins));
  } else {
    const Box b = bounding_box(m.points, dim);
    h.lo = b.lo;
    for (std::size_t c = 0; c < dim; ++c) h.pitch.push_back((b.hi[c] - b.lo[c]) / static_cast<double>(bins));
  }
  h.shape.assign(dim, bins);
  std::size_t cells = 1;
  for (auto s : h.shape) cells *= s;
  std::vector<long double> acc(cells, 0.0L);
  for (std::size_t i = 0; i < m.size(); ++i) acc[grid_cell(&m.points[i * dim], h.lo, h.pitch, h.shape)] += m.weights[i];
  h.masses.assign(acc.begin(), acc.end());
  return h;
}

double CDFCurve::operator()(double t) const {
  auto it = std::upper_bound(x.begin(), x.end(), t);
  if (it == x.begin()) return 0.0;
  return F[static_cast<std::size_t>(it - x.begin()) - 1];
}

CDFCurve cdf(const EmpiricalMeasure& m) {
  if (m.dim != 1) throw ValidationError("CDF needs a one-dimensional measure");
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m.points[a] < m.points[b]; });
  CDFCurve c;
  double acc = 0.0;
  for (std::size_t i : order) {
    acc += m.weights[i];
    if (!c.x.empty() && c.x.back() == m.points[i])
      c.F.back() = acc;
    else {
      c.x.push_back(m.points[i]);
      c.F.push_back(acc);
    }
  }
  return c;
}

double mk_distance_1d(const CDFCurve& f, const CDFCurve& g) {
  if (std::abs(f.mass() - g.mass()) > 1e-9)
    throw ValidationError("MK distance needs equal masses (" + std::to_string(f.mass()) + " vs " +
                          std::to_string(g.mass()) + ")");
  std::size_t i = 0, j = 0;
  double fv = 0.0, gv = 0.0, total = 0.0;
  double prev = 0.0;
  bool started = false;
  while (i < f.x.size() || j < g.x.size()) {
    const double next = (j >= g.x.size() || (i < f.x.size() && f.x[i] <= g.x[j])) ? f.x[i] : g.x[j];
    if (started) total += std::abs(fv - gv) * (next - prev);
    while (i < f.x.size() && f.x[i] == next) fv = f.F[i++];
    while (j < g.x.size() && g.x[j] == next) gv = g.F[j++];
    prev = next;
    started = true;
  }
  return total;
}

double mk_distance_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b) { return mk_distance_1d(cdf(a), cdf(b)); }

std::complex<double> empirical_cf(const EmpiricalMeasure& m, const Eigen::VectorXd& k) {
  if (static_cast<std::size_t>(k.size()) != m.dim) throw ValidationError("frequency dimension mismatch");
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double phase = 0.0;
    for (std::size_t c = 0; c < m.dim; ++c) phase += k[static_cast<Eigen::Index>(c)] * m.points[i * m.dim + c];
    phase *= -2.0 * std::numbers::pi;
    re += m.weights[i] * std::cos(phase);
    im += m.weights[i] * std::sin(phase);
  }
  return {re, im};
}

Eigen::MatrixXcd fourier_matrix(const PrefixSuffixGraph& g, const std::vector<AffineMap>& maps, std::size_t letters,
                                const Eigen::VectorXd& k) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(letters), static_cast<Eigen::Index>(letters));
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const Edge& e = g.edge(i);
    const double phase = -2.0 * std::numbers::pi * k.dot(maps[i].translation);
    b(e.from, e.to) += e.word_prob * std::polar(1.0, phase);
  }
  return b;
}

CocycleResult fourier_cocycle(const Model& model, const Eigen::VectorXd& k, unsigned n) {
  if (static_cast<std::size_t>(k.size()) != model.dim()) throw ValidationError("frequency dimension mismatch");
  const auto d = static_cast<Eigen::Index>(model.letters());
  CocycleResult r;
  r.k = k;
  r.n = n;
  r.matrix = Eigen::MatrixXcd::Identity(d, d);
  Eigen::VectorXd kk = k;
  for (unsigned j = 0; j < n; ++j) {
    r.matrix = (r.matrix * fourier_matrix(model.graph, model.maps, model.letters(), kk)).eval() / model.pd.lambda;
    kk = model.chart.g * kk;
  }
  r.c = r.matrix * model.pd.right.cast<std::complex<double>>();
  const Eigen::MatrixXcd diff = r.matrix - r.c * model.pd.left.cast<std::complex<double>>().transpose();
  r.residual = diff.cwiseAbs().rowwise().sum().maxCoeff();
  return r;
}

std::vector<EmpiricalMeasure> pushforward(const PrefixSuffixGraph& g, const std::vector<AffineMap>& maps,
                                          const std::vector<double>& edge_weights,
                                          const std::vector<EmpiricalMeasure>& in, std::size_t cap, std::size_t bins) {
  const std::size_t n = g.letters();
  if (in.size() != n) throw ValidationError("pushforward needs one measure per letter");
  const std::size_t dim = in.front().dim;
  std::vector<EmpiricalMeasure> out(n);
  for (std::size_t a = 0; a < n; ++a) {
    EmpiricalMeasure& m = out[a];
    m.dim = dim;
    for (std::size_t ei : g.out_edges(static_cast<Letter>(a))) {
      const AffineMap& f = maps[ei];
      const EmpiricalMeasure& src = in[g.edge(ei).to];
      for (std::size_t i = 0; i < src.size(); ++i) {
        const double* x = &src.points[i * dim];
        for (std::size_t r = 0; r < dim; ++r) {
          double acc = f.translation[static_cast<Eigen::Index>(r)];
          for (std::size_t c = 0; c < dim; ++c) acc += f.linear(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
          m.points.push_back(acc);
        }
        m.weights.push_back(edge_weights[ei] * src.weights[i]);
      }
    }
    if (m.size() > cap) m = rebin(m, bins);
  }
  return out;
}

namespace {

// Generator coordinates reduced into [0,1)^dim.
std::vector<double> fold(const Eigen::MatrixXd& inverse, const double* x, std::size_t dim) {
  std::vector<double> t(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) acc += inverse(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
    acc -= std::floor(acc);
    t[r] = acc >= 1.0 ? 0.0 : acc;
  }
  return t;
}

}  // namespace

CoveringReport covering_check(const EmpiricalMeasure& total, const Lattice& lat, std::size_t bins) {
  const std::size_t dim = total.dim;
  if (static_cast<std::size_t>(lat.generators.rows()) != dim) throw ValidationError("lattice dimension mismatch");
  if (bins == 0) throw ValidationError("covering check needs at least one bin");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lat.generators);
  if (!lu.isInvertible()) throw NumericalError("lattice generators are rank deficient");
  const Eigen::MatrixXd inverse = lu.inverse();

  CoveringReport r;
  r.density = lat.density;
  r.shape.assign(dim, bins);
  std::size_t cells = 1;
  for (auto s : r.shape) cells *= s;
  std::vector<double> mass(cells, 0.0);
  const std::vector<double> zero(dim, 0.0), unit(dim, 1.0 / static_cast<double>(bins));
  const double m = total.mass();
  for (std::size_t i = 0; i < total.size(); ++i) {
    const auto t = fold(inverse, &total.points[i * dim], dim);
    mass[grid_cell(t.data(), zero, unit, r.shape)] += total.weights[i] / m;
  }
  // Each bin has volume 1 / (D * cells), so relative density is mass * cells.
  double sum_dev = 0.0;
  for (double v : mass) {
    r.folded_mass += v;
    const double rel = v * static_cast<double>(cells);
    r.relative_density.push_back(rel);
    const double dev = std::abs(rel - 1.0);
    r.max_deviation = std::max(r.max_deviation, dev);
    sum_dev += dev;
  }
  r.mean_deviation = sum_dev / static_cast<double>(cells);
  return r;
}

LebesgueEstimate estimate_lebesgue(const PointCloud& c, const Lattice& lat, std::size_t bins) {
  if (bins == 0) throw ValidationError("Lebesgue estimate needs at least one bin");
  const std::size_t dim = c.dim();
  std::vector<double> all;
  for (std::size_t a = 0; a < c.letters(); ++a) {
    const auto b = c.bucket(static_cast<Letter>(a));
    all.insert(all.end(), b.begin(), b.end());
  }
  if (all.empty()) throw ValidationError("Lebesgue estimate of an empty cloud");
  const Box box = bounding_box(all, dim);
  auto occupied_volume = [&](std::size_t per_axis) {
    std::vector<double> pitch(dim);
    std::vector<std::size_t> shape(dim, per_axis);
    double cell_volume = 1.0;
    for (std::size_t k = 0; k < dim; ++k) {
      pitch[k] = (box.hi[k] - box.lo[k]) / static_cast<double>(per_axis);
      cell_volume *= pitch[k];
    }
    std::unordered_set<std::size_t> cells;
    for (std::size_t i = 0; i < all.size(); i += dim) cells.insert(grid_cell(&all[i], box.lo, pitch, shape));
    return static_cast<double>(cells.size()) * cell_volume;
  };
  LebesgueEstimate e;
  e.bins = bins;
  e.coarse = occupied_volume(bins);
  e.fine = occupied_volume(2 * bins);
  e.fundamental_volume = 1.0 / lat.density;
  e.below_twice_fundamental = e.fine < 2.0 * e.fundamental_volume;
  return e;
}

WeylReport torus_equidistribution(const PointCloud& c, const Lattice& lat, const std::vector<std::vector<int>>& freqs) {
  const std::size_t dim = c.dim();
  const Eigen::MatrixXd inverse = lat.generators.inverse();
  WeylReport r;
  r.frequencies = freqs;
  std::vector<std::complex<double>> sums(freqs.size());
  std::size_t n = 0;
  for (std::size_t a = 0; a < c.letters(); ++a) {
    const auto pts = c.bucket(static_cast<Letter>(a));
    for (std::size_t i = 0; i < pts.size(); i += dim) {
      const auto t = fold(inverse, &pts[i], dim);
      for (std::size_t f = 0; f < freqs.size(); ++f) {
        if (freqs[f].size() != dim) throw ValidationError("frequency dimension mismatch");
        double phase = 0.0;
        for (std::size_t k = 0; k < dim; ++k) phase += freqs[f][k] * t[k];
        sums[f] += std::polar(1.0, 2.0 * std::numbers::pi * phase);
      }
      ++n;
    }
  }
  for (auto& s : sums) r.sums.push_back(std::abs(s) / static_cast<double>(n));
  return r;
}

SweepReport measure_sweep(const SubstitutionTemplate& t, const SweepOptions& opt) {
  if (!t.parametric()) throw ValidationError("sweep needs a template with a free parameter p");
  if (opt.p_values.size() < 2) throw ValidationError("sweep needs at least two p values");
  auto tile = [&](double p) {
    const Model model = build_model(t.instantiate(p));
    MarkovOptions mo;
    mo.letter = opt.letter;
    mo.level = opt.level;
    mo.seed = opt.seed;
    mo.workers = opt.workers;
    const PointCloud cloud = sample_cloud_markov(model.sub, model.chart, mo);
    std::vector<double> masses;
    for (std::size_t a = 0; a < cloud.letters(); ++a)
      masses.push_back(static_cast<double>(cloud.count(static_cast<Letter>(a))) / static_cast<double>(cloud.total()));
    return std::make_pair(normalised_tile(cloud, opt.letter), masses);
  };
  SweepReport r;
  r.p_values = opt.p_values;
  std::vector<EmpiricalMeasure> tiles;
  for (double p : opt.p_values) {
    auto [m, masses] = tile(p);
    tiles.push_back(std::move(m));
    r.masses.push_back(std::move(masses));
  }
  const bool one_d = tiles.front().dim == 1;
  r.metric = one_d ? "mk" : "cf";
  if (!one_d && opt.frequencies.empty()) throw ValidationError("sweep over a 2-D chart needs frequencies");
  auto gap = [&](const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (one_d) return mk_distance_1d(a, b);
    double worst = 0.0;
    for (const auto& k : opt.frequencies) worst = std::max(worst, std::abs(empirical_cf(a, k) - empirical_cf(b, k)));
    return worst;
  };
  for (std::size_t i = 0; i + 1 < tiles.size(); ++i) r.consecutive.push_back(gap(tiles[i], tiles[i + 1]));
  r.full_range = gap(tiles.front(), tiles.back());
  const EmpiricalMeasure low = tile(0.0).first, high = tile(1.0).first;
  for (const auto& m : tiles) {
    r.to_low_end.push_back(gap(m, low));
    r.to_high_end.push_back(gap(m, high));
  }
  r.dominated = std::all_of(r.consecutive.begin(), r.consecutive.end(), [&](double v) { return v < r.full_range; });
  return r;
}

}  // namespace rauzy
