#ifndef RAUZY_MEASURE_HPP
#define RAUZY_MEASURE_HPP

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gifs.hpp"
#include "model.hpp"
#include "point_cloud.hpp"
#include "spectral.hpp"

namespace rauzy {

// Weighted point measure; histograms are stored as weighted cell points.
struct EmpiricalMeasure {
  std::size_t dim = 1;
  std::vector<double> points;  // flat, stride dim
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double mass() const;
  EmpiricalMeasure normalised() const;
  EmpiricalMeasure scaled(double factor) const;
};

// Per-letter measures with mass bucket_weight / total_weight.
std::vector<EmpiricalMeasure> empirical_measure(const PointCloud& c);
// Sum over letters.
EmpiricalMeasure total_measure(const PointCloud& c);
EmpiricalMeasure dirac(const Eigen::VectorXd& x, double mass = 1.0);
// n evenly spaced atoms on [lo, hi]; MK distance to the uniform law is (hi-lo)/(4n).
EmpiricalMeasure uniform_measure(double lo, double hi, double mass, std::size_t n);
// Merges atoms on a regular grid (bins per axis over the bounding box),
// each cell keeping its mass at the mass-weighted mean position.
EmpiricalMeasure rebin(const EmpiricalMeasure& m, std::size_t bins);

struct Histogram {
  std::vector<double> lo, pitch;
  std::vector<std::size_t> shape;
  std::vector<double> masses;
};
Histogram histogram(const EmpiricalMeasure& m, std::size_t bins, std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> box = std::nullopt);

struct CDFCurve {
  std::vector<double> x;  // sorted breakpoints
  std::vector<double> F;  // value on [x_i, x_{i+1})
  double mass() const { return F.empty() ? 0.0 : F.back(); }
  double operator()(double t) const;
};
CDFCurve cdf(const EmpiricalMeasure& m);
// Integral of |F - G|; masses must agree within 1e-9.
double mk_distance_1d(const CDFCurve& f, const CDFCurve& g);
double mk_distance_1d(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

std::complex<double> empirical_cf(const EmpiricalMeasure& m, const Eigen::VectorXd& k);

// B(k)_{ab} = sum over edges a->b of P[pas] exp(-2 pi i <k, pi psi(p)>).
Eigen::MatrixXcd fourier_matrix(const PrefixSuffixGraph& g, const std::vector<AffineMap>& maps, std::size_t letters,
                                const Eigen::VectorXd& k);

struct CocycleResult {
  Eigen::VectorXd k;
  unsigned n = 0;
  Eigen::MatrixXcd matrix;  // lambda^-n B^(n)(k)
  Eigen::VectorXcd c;       // matrix * R
  double residual = 0.0;    // |matrix - c L^T|_inf
};
CocycleResult fourier_cocycle(const Model& model, const Eigen::VectorXd& k, unsigned n);

// out_a = sum over edges e: a->b of w_e (mu_b o f_e^-1). Rebins to `bins`
// per axis whenever an output exceeds `cap` atoms.
std::vector<EmpiricalMeasure> pushforward(const PrefixSuffixGraph& g, const std::vector<AffineMap>& maps,
                                          const std::vector<double>& edge_weights,
                                          const std::vector<EmpiricalMeasure>& in, std::size_t cap = 200'000,
                                          std::size_t bins = 8192);

struct CoveringReport {
  double density = 0.0;
  std::vector<std::size_t> shape;
  std::vector<double> relative_density;  // bin mass / (D * bin volume)
  double folded_mass = 0.0;
  double max_deviation = 0.0;
  double mean_deviation = 0.0;
};
// Folds the (normalised) measure into the fundamental domain spanned by the
// lattice generators and compares bin masses with D times Lebesgue.
CoveringReport covering_check(const EmpiricalMeasure& total, const Lattice& lat, std::size_t bins);

struct LebesgueEstimate {
  std::size_t bins = 0;
  double coarse = 0.0;  // bins per axis
  double fine = 0.0;    // 2 * bins per axis
  double fundamental_volume = 0.0;
  bool below_twice_fundamental = false;
};
// Grid-occupancy area of a point set (all buckets united).
LebesgueEstimate estimate_lebesgue(const PointCloud& c, const Lattice& lat, std::size_t bins);

struct WeylReport {
  std::vector<std::vector<int>> frequencies;
  std::vector<double> sums;
};
WeylReport torus_equidistribution(const PointCloud& c, const Lattice& lat, const std::vector<std::vector<int>>& freqs);

struct SweepOptions {
  std::vector<double> p_values;
  unsigned level = 25;
  std::uint64_t seed = 0;
  Letter letter = 0;
  unsigned workers = 1;
  std::vector<Eigen::VectorXd> frequencies;  // for charts of dimension > 1
};
struct SweepReport {
  std::vector<double> p_values;
  std::vector<std::vector<double>> masses;
  std::vector<double> consecutive;  // MK (dim 1) or max CF gap between neighbours
  double full_range = 0.0;          // first vs last p
  std::vector<double> to_low_end;   // against the p = 0 marginal
  std::vector<double> to_high_end;  // against the p = 1 marginal
  bool dominated = false;           // every consecutive entry < full_range
  std::string metric;
};
SweepReport measure_sweep(const SubstitutionTemplate& t, const SweepOptions& opt);

// Bucket `a` of a markov cloud as a normalised measure.
EmpiricalMeasure normalised_tile(const PointCloud& c, Letter a);

}  // namespace rauzy

#endif
