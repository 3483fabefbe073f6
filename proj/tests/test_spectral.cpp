#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "spectral.hpp"
#include "support.hpp"

using namespace rauzy;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (auto v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

IntMatrix companion(const std::vector<std::int64_t>& monic) {
  const auto d = static_cast<Eigen::Index>(monic.size() - 1);
  IntMatrix c = IntMatrix::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) c(i, i - 1) = 1;
  for (Eigen::Index i = 0; i < d; ++i) c(i, d - 1) = -monic[static_cast<std::size_t>(i)];
  return c;
}

// det(xI - M) at x = 0..d, then a Vandermonde solve for the coefficients.
std::vector<std::int64_t> interpolated_char_poly(const IntMatrix& m) {
  const auto d = m.rows();
  Eigen::MatrixXd v(d + 1, d + 1);
  Eigen::VectorXd y(d + 1);
  for (Eigen::Index x = 0; x <= d; ++x) {
    const Eigen::MatrixXd a = static_cast<double>(x) * Eigen::MatrixXd::Identity(d, d) - m.cast<double>();
    y(x) = a.determinant();
    for (Eigen::Index k = 0; k <= d; ++k) v(x, k) = std::pow(static_cast<double>(x), static_cast<double>(k));
  }
  const Eigen::VectorXd c = v.fullPivLu().solve(y);
  std::vector<std::int64_t> out;
  for (Eigen::Index k = 0; k <= d; ++k) out.push_back(std::llround(c(k)));
  return out;
}

const std::vector<std::string> kPisot = {"fib.toml", "twisted.toml", "rfib.toml", "trib.toml", "rtrib.toml", "ex72.toml"};

}  // namespace

TEST_CASE("characteristic polynomials") {
  CHECK(char_poly(mat({{1, 1, 1}, {1, 0, 0}, {0, 1, 0}})).coefficients == std::vector<std::int64_t>{-1, -1, -1, 1});
  CHECK(char_poly(mat({{1, 1}, {1, 0}})).coefficients == std::vector<std::int64_t>{-1, -1, 1});
  CHECK(char_poly(IntMatrix::Identity(2, 2)).coefficients == std::vector<std::int64_t>{1, -2, 1});
}

TEST_CASE("char poly matches interpolation and Cayley-Hamilton") {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 5);
    IntMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = static_cast<std::int64_t>(rng() % 4);
    const CharPoly p = char_poly(m);
    CHECK(p.coefficients.back() == 1);
    CHECK(p.coefficients == interpolated_char_poly(m));
    CHECK(p.evaluate(m) == IntMatrix::Zero(d, d));
    CHECK(determinant(m) == std::llround(m.cast<double>().determinant()));
  }
}

TEST_CASE("Perron data") {
  const double t = test::tribonacci_constant();
  const auto trib = perron_data(substitution_matrix(test::load("trib.toml")));
  CHECK(trib.lambda == doctest::Approx(t).epsilon(1e-12));
  CHECK(trib.lambda == doctest::Approx(1.83929).epsilon(1e-5));
  CHECK(trib.right[0] == doctest::Approx(1 / t).epsilon(1e-12));
  CHECK(trib.right[1] == doctest::Approx(1 / (t * t)).epsilon(1e-12));
  CHECK(trib.right[2] == doctest::Approx(1 / (t * t * t)).epsilon(1e-12));
  const auto fib = perron_data(substitution_matrix(test::load("fib.toml")));
  CHECK(fib.lambda == doctest::Approx(test::tau).epsilon(1e-13));
  CHECK(fib.right[0] == doctest::Approx(1 / test::tau).epsilon(1e-12));
  CHECK(fib.right[1] == doctest::Approx(1 / (test::tau * test::tau)).epsilon(1e-12));
}

TEST_CASE("Perron data invariants on every fixture") {
  for (const std::string& name : kPisot) {
    INFO(name);
    const Eigen::MatrixXd m = substitution_matrix(test::load(name));
    const auto pd = perron_data(m);
    CHECK(pd.right.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pd.left.dot(pd.right) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((m * pd.right - pd.lambda * pd.right).norm() < 1e-10);
    CHECK((m.transpose() * pd.left - pd.lambda * pd.left).norm() < 1e-10);
    CHECK(pd.right.minCoeff() > 0.0);
    CHECK(pd.left.minCoeff() > 0.0);
    // Independent eigen-solve.
    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    double top = 0.0, product = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      top = std::max(top, es.eigenvalues()[i].real());
      product *= std::abs(es.eigenvalues()[i]);
    }
    CHECK(pd.lambda == doctest::Approx(top).epsilon(1e-10));
    double mine = pd.lambda;
    for (auto z : pd.conjugates) mine *= std::abs(z);
    CHECK(mine == doctest::Approx(product).epsilon(1e-8));
    CHECK(mine == doctest::Approx(std::abs(static_cast<double>(determinant(integer_matrix(test::load(name)))))).epsilon(1e-8));
  }
}

TEST_CASE("classification") {
  for (const std::string& name : kPisot) {
    const auto s = test::load(name);
    const IntMatrix m = integer_matrix(s);
    const auto c = classify(m, char_poly(m), perron_data(m.cast<double>()));
    INFO(name);
    CHECK(c.primitive);
    CHECK(c.pisot);
    CHECK(c.irreducible);
    CHECK(c.unimodular);
  }
  const IntMatrix ones = mat({{1, 1}, {1, 1}});
  const auto c = classify(ones, char_poly(ones), perron_data(ones.cast<double>()));
  CHECK(c.primitive);
  CHECK_FALSE(c.irreducible);
  CHECK_FALSE(c.unimodular);
  const IntMatrix big = mat({{3, 1}, {1, 2}});
  const auto nb = classify(big, char_poly(big), perron_data(big.cast<double>()));
  CHECK_FALSE(nb.pisot);
}

TEST_CASE("irreducibility over Z") {
  CHECK(is_irreducible(CharPoly{{-1, -1, 1}}));
  CHECK_FALSE(is_irreducible(CharPoly{{0, -2, 1}}));
  CHECK(is_irreducible(CharPoly{{-1, -1, -1, 1}}));
  // x^4 - x^3 - x^2 - x - 1 is irreducible; (x^2 - x - 1)(x^2 + 1) has no
  // rational root but factors.
  CHECK(is_irreducible(CharPoly{{-1, -1, -1, -1, 1}}));
  CHECK_FALSE(is_irreducible(CharPoly{{-1, -1, 0, -1, 1}}));
  // (x^2 + 3x - 5)(x^2 - 7x + 2)
  CHECK_FALSE(is_irreducible(CharPoly{{-10, 41, -24, -4, 1}}));
  CHECK_FALSE(is_irreducible(CharPoly{{6, -5, 1, 0, 0}}));
  CHECK_THROWS_AS(is_irreducible(CharPoly{{-1, -1, -1, -1, -1, 1}}), ValidationError);
  // The companion matrix route gives the same verdicts.
  CHECK(char_poly(companion({-1, -1, 0, -1, 1})).coefficients == std::vector<std::int64_t>{-1, -1, 0, -1, 1});
}

TEST_CASE("Fibonacci chart") {
  const auto m = test::model("fib.toml");
  const double t = test::tau;
  CHECK(m.chart.pi(0, 0) == doctest::Approx(1 / (t * t)).epsilon(1e-12));
  CHECK(m.chart.pi(0, 1) == doctest::Approx(-1 / t).epsilon(1e-12));
  CHECK(m.chart.h(0, 0) == doctest::Approx(-1 / t).epsilon(1e-12));
  CHECK(m.chart.g(0, 0) == m.chart.h(0, 0));
  CHECK(m.chart.pi(0, 0) - m.chart.pi(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(project(m.chart, AbelianVector({1, 0}))[0] == doctest::Approx(0.381966).epsilon(1e-6));
  CHECK(project(m.chart, AbelianVector({1, 1}))[0] == doctest::Approx(-1 / (t * t * t)).epsilon(1e-12));
  CHECK(std::abs(project(m.chart, Eigen::VectorXd(m.pd.right))[0]) < 1e-12);
  CHECK(m.lat.generators(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(m.lat.density == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chart invariants on every fixture") {
  for (const std::string& name : kPisot) {
    INFO(name);
    const auto md = test::model(name);
    const Eigen::MatrixXd m = md.matrix.cast<double>();
    CHECK((md.chart.pi * md.pd.right).norm() < 1e-12);
    CHECK((md.chart.h * md.chart.pi - md.chart.pi * m).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((md.chart.g - md.chart.h.transpose()).norm() == 0.0);
    CHECK(spectral_radius(md.chart.h) < 1 - 1e-9);
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(md.chart.h.rows(), md.chart.h.cols());
    for (int i = 0; i < 40; ++i) p = md.chart.h * p;
    // Diagonal or rotation-scaling blocks: |h^n|_inf <= sqrt(2) rho^n.
    const double rho = spectral_radius(md.chart.h);
    CHECK(p.cwiseAbs().rowwise().sum().maxCoeff() <= std::sqrt(2.0) * std::pow(rho, 40) * (1 + 1e-9));
    for (int i = 40; i < 60; ++i) p = md.chart.h * p;
    CHECK(p.cwiseAbs().rowwise().sum().maxCoeff() < 1e-6);
    const double det = std::abs(md.lat.generators.determinant());
    CHECK(md.lat.density * det == doctest::Approx(1.0).epsilon(1e-12));
    // Rows are normalised on e1 - e2 (a complex pair gives 1 on Re, 0 on Im).
    const Eigen::VectorXd pairing = md.chart.pi.col(0) - md.chart.pi.col(1);
    CHECK(pairing[0] == doctest::Approx(1.0).epsilon(1e-12));
    if (md.chart.d == 3 && std::abs(md.chart.h(0, 1)) > 0) CHECK(std::abs(pairing[1]) < 1e-12);
    if (md.chart.d == 2) CHECK(md.lat.generators(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  }
}

TEST_CASE("tribonacci chart has a rotation-scaling block") {
  const auto md = test::model("trib.toml");
  REQUIRE(md.chart.dim() == 2);
  const Eigen::MatrixXd& h = md.chart.h;
  CHECK(h(0, 0) == doctest::Approx(h(1, 1)).epsilon(1e-12));
  CHECK(h(0, 1) == doctest::Approx(-h(1, 0)).epsilon(1e-12));
  const double modulus = std::sqrt(h(0, 0) * h(0, 0) + h(1, 0) * h(1, 0));
  CHECK(modulus == doctest::Approx(1 / std::sqrt(test::tribonacci_constant())).epsilon(1e-10));
}

TEST_CASE("non-Pisot input is rejected by the model") {
  CHECK_THROWS_AS(test::model("bad_nonpisot.toml"), NumericalError);
}
