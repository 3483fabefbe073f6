#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numbers>

#include "cloud.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "measure.hpp"
#include "rng.hpp"
#include "support.hpp"

using namespace rauzy;

namespace {

// Smallest level whose word from letter 0 has at least `points` letters.
unsigned level_for(const Model& m, std::int64_t points) {
  unsigned level = 1;
  while (power_length(m.matrix, 0, level) < points) ++level;
  return level;
}

PointCloud markov(const Model& m, unsigned level, std::uint64_t seed = 0) {
  MarkovOptions opt;
  opt.level = level;
  opt.seed = seed;
  return sample_cloud_markov(m.sub, m.chart, opt);
}

EmpiricalMeasure atoms(const std::vector<double>& x, const std::vector<double>& w) {
  EmpiricalMeasure m;
  m.points = x;
  m.weights = w;
  return m;
}

// Riemann sum of |F - G| on a fine grid.
double riemann_mk(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double lo, double hi, std::size_t steps) {
  const CDFCurve f = cdf(a), g = cdf(b);
  const double dx = (hi - lo) / static_cast<double>(steps);
  double sum = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * dx;
    sum += std::abs(f(x) - g(x)) * dx;
  }
  return sum;
}

}  // namespace

TEST_CASE("empirical masses") {
  const double t = test::tau;
  const auto m = test::model("rfib.toml");
  const auto cloud = markov(m, level_for(m, 1'000'000));
  const auto mu = empirical_measure(cloud);
  REQUIRE(mu.size() == 2);
  CHECK(std::abs(mu[0].mass() - 1 / t) < 0.005);
  CHECK(std::abs(mu[1].mass() - 1 / (t * t)) < 0.005);
  CHECK(std::abs(mu[0].mass() + mu[1].mass() - 1.0) < 1e-12);
  CHECK(std::abs(total_measure(cloud).mass() - 1.0) < 1e-12);

  const auto h = histogram(mu[0], 512);
  double sum = 0.0;
  for (double v : h.masses) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(std::abs(sum - mu[0].mass()) < 1e-12);

  PointCloud single(2, 1, Provenance::markov);
  const double x = 0.3;
  single.add(1, &x);
  const auto d = empirical_measure(single);
  CHECK(d[0].mass() == 0.0);
  REQUIRE(d[1].size() == 1);
  CHECK(d[1].mass() == 1.0);
  CHECK(d[1].points[0] == 0.3);
}

TEST_CASE("masses approach R on every fixture") {
  for (const std::string name : {"fib.toml", "twisted.toml", "rfib.toml", "trib.toml", "rtrib.toml", "ex72.toml"}) {
    INFO(name);
    const auto m = test::model(name);
    const auto mu = empirical_measure(markov(m, level_for(m, 1'000'000), 5));
    for (Letter a = 0; a < m.letters(); ++a) CHECK(std::abs(mu[a].mass() - m.pd.right[a]) < 0.01);
  }
}

TEST_CASE("deterministic Fibonacci tiles are uniform") {
  const double t = test::tau;
  const auto m = test::model("fib.toml");
  const auto cloud = markov(m, 25);
  const auto u1 = uniform_measure(-1 / (t * t), 1 / (t * t * t), 1.0, 4096);
  const auto u2 = uniform_measure(1 / (t * t * t), 1 / t, 1.0, 4096);
  CHECK(mk_distance_1d(normalised_tile(cloud, 0), u1) < 0.02);
  CHECK(mk_distance_1d(normalised_tile(cloud, 1), u2) < 0.02);

  // The chaos game reaches the same law.
  ChaosOptions co;
  co.steps = 400'000;
  co.seed = 9;
  const auto chaos = chaos_game(m.graph, m.probs, m.maps, m.pd, co);
  CHECK(mk_distance_1d(normalised_tile(chaos, 0), u1) < 0.02);
  CHECK(mk_distance_1d(normalised_tile(chaos, 1), u2) < 0.02);
}

TEST_CASE("cdf") {
  const auto d = cdf(dirac(Eigen::VectorXd::Zero(1)));
  CHECK(d(-1e-12) == 0.0);
  CHECK(d(0.0) == 1.0);
  CHECK(d(5.0) == 1.0);

  const auto u = cdf(uniform_measure(0.0, 1.0, 1.0, 1000));
  for (double x : {0.1, 0.25, 0.5, 0.77, 0.9}) CHECK(std::abs(u(x) - x) <= 1e-3);

  const double t = test::tau;
  const auto m = test::model("rfib.toml");
  const auto cloud = markov(m, 25);
  const auto f = cdf(empirical_measure(cloud)[0]);
  CHECK(f(-1 - 0.02) == 0.0);
  CHECK(f(1 / t + 0.02) == doctest::Approx(f.mass()));
  for (double x = -1 + 0.02; x < 1 / t - 0.04; x += 0.02) CHECK(f(x + 0.02) > f(x));
  for (std::size_t i = 1; i < f.F.size(); ++i) CHECK(f.F[i] >= f.F[i - 1]);

  EmpiricalMeasure plane;
  plane.dim = 2;
  plane.points = {0.0, 0.0};
  plane.weights = {1.0};
  CHECK_THROWS_AS(cdf(plane), ValidationError);
}

TEST_CASE("MK distance") {
  const auto zero = dirac(Eigen::VectorXd::Zero(1));
  const auto one = dirac(Eigen::VectorXd::Ones(1));
  CHECK(mk_distance_1d(zero, zero) == 0.0);
  CHECK(mk_distance_1d(zero, one) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(mk_distance_1d(zero, dirac(Eigen::VectorXd::Zero(1), 0.5)), ValidationError);

  // Equal-weight atoms: transport pairs sorted samples.
  auto rng = make_rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(200), y(200), w(200, 1.0 / 200);
    for (auto& v : x) v = uniform01(rng) * 2 - 1;
    for (auto& v : y) v = uniform01(rng) * uniform01(rng);
    double expected = 0.0;
    auto sx = x, sy = y;
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    for (std::size_t i = 0; i < sx.size(); ++i) expected += std::abs(sx[i] - sy[i]) / 200.0;
    CHECK(mk_distance_1d(atoms(x, w), atoms(y, w)) == doctest::Approx(expected).epsilon(1e-12));
  }

  // Unequal weights against a Riemann sum.
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(30), y(50), wx(30), wy(50);
    double sx = 0.0, sy = 0.0;
    for (auto& v : x) v = uniform01(rng);
    for (auto& v : y) v = uniform01(rng);
    for (auto& v : wx) sx += v = uniform01(rng);
    for (auto& v : wy) sy += v = uniform01(rng);
    for (auto& v : wx) v /= sx;
    for (auto& v : wy) v /= sy;
    const auto a = atoms(x, wx), b = atoms(y, wy);
    CHECK(std::abs(mk_distance_1d(a, b) - riemann_mk(a, b, 0.0, 1.0, 400'000)) < 1e-4);
  }

  for (std::size_t n : {1u, 3u, 10u, 64u}) {
    const double expected = 3.0 / (4.0 * static_cast<double>(n));
    const double got = mk_distance_1d(uniform_measure(-1.0, 2.0, 1.0, n), uniform_measure(-1.0, 2.0, 1.0, 1001 * n));
    CHECK(got == doctest::Approx(expected).epsilon(1e-5));
  }
}

TEST_CASE("MK metric axioms") {
  auto rng = make_rng(4);
  auto random_measure = [&] {
    std::vector<double> x(40), w(40);
    double s = 0.0;
    for (auto& v : x) v = uniform01(rng) * 4 - 2;
    for (auto& v : w) s += v = uniform01(rng);
    for (auto& v : w) v /= s;
    return atoms(x, w);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_measure(), b = random_measure(), c = random_measure();
    const double ab = mk_distance_1d(a, b), ba = mk_distance_1d(b, a);
    CHECK(std::abs(ab - ba) < 1e-14);
    CHECK(ab <= mk_distance_1d(a, c) + mk_distance_1d(c, b) + 1e-14);
    CHECK(ab > 0.0);
    CHECK(mk_distance_1d(a, a) < 1e-15);
  }
}

TEST_CASE("independent seeds agree") {
  const auto m = test::model("rfib.toml");
  const unsigned level = level_for(m, 1'000'000);
  const auto a = markov(m, level, 1), b = markov(m, level, 2);
  for (Letter l = 0; l < 2; ++l) CHECK(mk_distance_1d(normalised_tile(a, l), normalised_tile(b, l)) < 0.01);
}

TEST_CASE("characteristic function") {
  const auto m = atoms({0.25, -0.5}, {0.5, 0.25});
  CHECK(std::abs(empirical_cf(m, Eigen::VectorXd::Zero(1)) - std::complex<double>(0.75)) < 1e-15);
  const Eigen::VectorXd k = Eigen::VectorXd::Constant(1, 1.7);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(1, 0.3);
  const auto expected = std::exp(std::complex<double>(0, -2 * std::numbers::pi * 1.7 * 0.3));
  CHECK(std::abs(empirical_cf(dirac(x0), k) - expected) < 1e-14);
}

TEST_CASE("Fourier matrix at zero is the substitution matrix") {
  for (const std::string name : {"fib.toml", "rfib.toml", "rtrib.toml", "ex72.toml"}) {
    INFO(name);
    const auto m = test::model(name);
    const auto b = fourier_matrix(m.graph, m.maps, m.letters(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.dim())));
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        CHECK(std::abs(b(i, j).imag()) == 0.0);
        CHECK(std::abs(b(i, j).real() - static_cast<double>(m.matrix(i, j))) < 1e-14);
      }
  }
}

TEST_CASE("cocycle limit at zero") {
  const auto m = test::model("fib.toml");
  const auto r = fourier_cocycle(m, Eigen::VectorXd::Zero(1), 60);
  CHECK(r.residual < 1e-8);
  for (Letter a = 0; a < 2; ++a) {
    CHECK(std::abs(r.c[a] - std::complex<double>(m.pd.right[a])) < 1e-10);
    for (Letter b = 0; b < 2; ++b) CHECK(std::abs(r.matrix(a, b) - m.pd.right[a] * m.pd.left[b]) < 1e-8);
  }
}

TEST_CASE("cocycle identity and rank-1 limit") {
  auto rng = make_rng(12);
  for (const std::string name : {"fib.toml", "twisted.toml", "rfib.toml", "trib.toml", "rtrib.toml", "ex72.toml"}) {
    INFO(name);
    const auto m = test::model(name);
    const auto dim = static_cast<Eigen::Index>(m.dim());
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::VectorXd k(dim);
      for (Eigen::Index i = 0; i < dim; ++i) k[i] = uniform01(rng) * 2 - 1;
      k /= std::max(1.0, k.norm());
      const unsigned n = 12;
      const Eigen::MatrixXcd step = fourier_matrix(m.graph, m.maps, m.letters(), k) / m.pd.lambda;
      const auto tail = fourier_cocycle(m, m.chart.g * k, n);
      const auto full = fourier_cocycle(m, k, n + 1);
      CHECK((step * tail.matrix - full.matrix).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(fourier_cocycle(m, k, 60).residual < 1e-6);
    }
  }
}

TEST_CASE("cocycle limit is the Fourier transform of the measure") {
  const auto m = test::model("rfib.toml");
  const auto mu = empirical_measure(markov(m, level_for(m, 1'000'000), 3));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd k = Eigen::VectorXd::Constant(1, i == 0 ? 0.3 : -1.0 + 0.23 * i);
    const auto r = fourier_cocycle(m, k, 60);
    for (Letter a = 0; a < 2; ++a) worst = std::max(worst, std::abs(r.c[a] - empirical_cf(mu[a], k)));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("measure is a fixed point of the weighted operator") {
  for (const std::string name : {"fib.toml", "twisted.toml", "rfib.toml"}) {
    INFO(name);
    const auto m = test::model(name);
    const auto cloud = markov(m, level_for(m, 1'000'000), 8);
    std::vector<EmpiricalMeasure> tiles;
    for (Letter a = 0; a < 2; ++a) tiles.push_back(rebin(normalised_tile(cloud, a), 8192));
    const auto pushed = pushforward(m.graph, m.maps, m.probs.edge, tiles);
    for (Letter a = 0; a < 2; ++a) {
      CHECK(std::abs(pushed[a].mass() - 1.0) < 1e-12);
      CHECK(mk_distance_1d(pushed[a], tiles[a]) < 0.02);
    }
  }
}

TEST_CASE("covering") {
  {
    const auto m = test::model("fib.toml");
    const auto r = covering_check(total_measure(markov(m, level_for(m, 1'000'000))), m.lat, 64);
    CHECK(r.mean_deviation < 0.03);
    CHECK(std::abs(r.folded_mass - 1.0) < 1e-9);
    CHECK(m.lat.density == doctest::Approx(1.0));
  }
  {
    const auto m = test::model("rfib.toml");
    const auto r = covering_check(total_measure(markov(m, level_for(m, 1'000'000))), m.lat, 64);
    CHECK(r.mean_deviation < 0.05);
    CHECK(std::abs(r.folded_mass - 1.0) < 0.01);
  }
  {
    const auto m = test::model("rtrib.toml");
    const auto r = covering_check(total_measure(markov(m, level_for(m, 1'000'000))), m.lat, 32);
    CHECK(r.shape == std::vector<std::size_t>{32, 32});
    CHECK(r.mean_deviation < 0.08);
    CHECK(std::abs(r.folded_mass - 1.0) < 0.01);
  }
  // A single atom piles everything into one bin.
  const auto m = test::model("fib.toml");
  const auto r = covering_check(dirac(Eigen::VectorXd::Constant(1, 0.1)), m.lat, 10);
  CHECK(r.max_deviation == doctest::Approx(9.0));
}

TEST_CASE("Lebesgue estimates") {
  const double t = test::tau;
  auto estimate = [](const std::string& name) {
    const auto m = test::model(name);
    SetIterationOptions so;
    so.depth = 30;
    so.dedup = 1e-4;
    return estimate_lebesgue(iterate_sets(m.graph, m.maps, 1, so), m.lat, 1024);
  };
  const auto ex72 = estimate("ex72.toml");
  CHECK(std::abs(ex72.coarse - t) < 0.05);
  CHECK(std::abs(ex72.fine - t) < 0.05);
  CHECK(ex72.below_twice_fundamental);
  const auto rfib = estimate("rfib.toml");
  CHECK(std::abs(rfib.coarse - 2.0) < 0.05);
  CHECK(std::abs(rfib.fine - 2.0) < 0.05);
  const auto fib = estimate("fib.toml");
  CHECK(std::abs(fib.coarse - 1.0) < 0.02);
  CHECK(std::abs(fib.fine - 1.0) < 0.02);
}

TEST_CASE("torus equidistribution") {
  const double t = test::tau;
  const auto fib = test::model("fib.toml");
  const auto cloud = markov(fib, level_for(fib, 100'000));
  const auto r = torus_equidistribution(cloud, fib.lat, {{0}, {1}, {2}, {3}});
  CHECK(r.sums[0] == doctest::Approx(1.0));
  // The prefix points fold to the rotation orbit k / tau mod 1.
  const std::size_t n = cloud.total();
  for (int f = 1; f <= 3; ++f) {
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::polar(1.0, 2 * std::numbers::pi * f * std::fmod(static_cast<double>(k) / t, 1.0));
    CHECK(r.sums[static_cast<std::size_t>(f)] == doctest::Approx(std::abs(s) / static_cast<double>(n)).epsilon(1e-6));
    CHECK(r.sums[static_cast<std::size_t>(f)] < 0.02);
  }
  const auto rfib = test::model("rfib.toml");
  const auto rr = torus_equidistribution(markov(rfib, level_for(rfib, 100'000), 6), rfib.lat, {{1}, {2}, {3}});
  for (double v : rr.sums) CHECK(v < 0.05);
}

TEST_CASE("sweep over p") {
  const auto tpl = parse_substitution_template(config::read_file(test::fixture("rfib_p.toml")));
  SweepOptions opt;
  for (int i = 1; i <= 9; ++i) opt.p_values.push_back(i / 10.0);
  opt.level = 28;
  const auto r = measure_sweep(tpl, opt);
  CHECK(r.metric == "mk");
  CHECK(r.dominated);
  for (double v : r.consecutive) CHECK(v < r.full_range);

  SweepOptions ends;
  ends.p_values = {0.2, 0.1, 0.05};
  ends.level = 28;
  const auto e = measure_sweep(tpl, ends);
  CHECK(e.to_low_end[1] < e.to_low_end[0]);
  CHECK(e.to_low_end[2] < e.to_low_end[1]);

  const auto m = build_model(tpl.instantiate(0.5));
  const auto a = markov(m, 28, 1), b = markov(m, 28, 2);
  CHECK(mk_distance_1d(normalised_tile(a, 0), normalised_tile(b, 0)) < 0.01);

  SweepOptions bad;
  bad.p_values = {0.5};
  CHECK_THROWS_AS(measure_sweep(tpl, bad), ValidationError);
}
