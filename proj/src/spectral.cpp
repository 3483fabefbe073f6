#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "errors.hpp"

namespace rauzy {

namespace {

using Int128 = __int128;

std::int64_t checked(Int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw NumericalError("integer overflow in exact linear algebra");
  return static_cast<std::int64_t>(v);
}

// p(x) exactly, for monic integer p.
Int128 eval_exact(const std::vector<std::int64_t>& c, std::int64_t x) {
  Int128 acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  const std::int64_t a = std::llabs(n);
  for (std::int64_t k = 1; k * k <= a; ++k) {
    if (a % k != 0) continue;
    out.push_back(k);
    out.push_back(-k);
    if (k != a / k) {
      out.push_back(a / k);
      out.push_back(-(a / k));
    }
  }
  return out;
}

bool has_integer_root(const std::vector<std::int64_t>& c) {
  if (c[0] == 0) return true;
  for (std::int64_t r : divisors(c[0]))
    if (eval_exact(c, r) == 0) return true;
  return false;
}

// Monic quartic x^4 + c3 x^3 + c2 x^2 + c1 x + c0 = (x^2 + a x + b)(x^2 + c x + e).
// Matching coefficients gives c = c3 - a and a (e - b) = c1 - b c3, so each
// divisor pair (b, e) of c0 fixes a, or leaves a quadratic for it when b = e.
bool has_quadratic_factor(const std::vector<std::int64_t>& coef) {
  const Int128 c0 = coef[0], c1 = coef[1], c2 = coef[2], c3 = coef[3];
  auto matches = [&](Int128 a, Int128 b, Int128 e) { return b + e + a * (c3 - a) == c2 && a * e + b * (c3 - a) == c1; };
  for (std::int64_t bi : divisors(coef[0])) {
    const Int128 b = bi, e = c0 / b;
    const Int128 rhs = c1 - b * c3;
    if (e != b) {
      if (rhs % (e - b) != 0) continue;
      if (matches(rhs / (e - b), b, e)) return true;
    } else {
      if (rhs != 0) continue;
      const Int128 disc = c3 * c3 - 4 * (c2 - 2 * b);
      if (disc < 0) continue;
      Int128 root = static_cast<Int128>(std::llround(std::sqrt(static_cast<double>(disc))));
      while (root * root > disc) --root;
      while ((root + 1) * (root + 1) <= disc) ++root;
      if (root * root != disc) continue;
      for (Int128 num : {c3 + root, c3 - root})
        if (num % 2 == 0 && matches(num / 2, b, e)) return true;
    }
  }
  return false;
}

std::vector<double> real_char_poly(const Eigen::MatrixXd& m) {
  const auto d = m.rows();
  std::vector<double> c(d + 1, 0.0);
  c[d] = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Identity(d, d);
  for (Eigen::Index k = 1; k <= d; ++k) {
    Eigen::MatrixXd am = m * mk;
    c[d - k] = -am.trace() / static_cast<double>(k);
    mk = am + c[d - k] * Eigen::MatrixXd::Identity(d, d);
  }
  return c;
}

std::vector<Complex> companion_roots(const std::vector<double>& c) {
  const std::size_t d = c.size() - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < d; ++i) comp(i, d - 1) = -c[i];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericalError("companion eigenvalue solve failed");
  std::vector<Complex> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) roots.push_back(es.eigenvalues()[i]);
  return roots;
}

void sort_roots(std::vector<Complex>& roots) {
  for (auto& r : roots)
    if (std::abs(r.imag()) < 1e-12 * std::max(1.0, std::abs(r))) r = {r.real(), 0.0};
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

Eigen::VectorXd power_iterate(const Eigen::MatrixXd& m, double& lambda) {
  const auto d = m.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd y = m * x;
    const double next = y.sum();
    if (!(next > 0.0)) throw NumericalError("power iteration collapsed; matrix not primitive");
    y /= next;
    const double step = (y - x).lpNorm<Eigen::Infinity>();
    const bool done = std::abs(next - lambda) <= 1e-13 * next && step <= 1e-13;
    x = y;
    lambda = next;
    if (done) return x;
  }
  throw NumericalError("power iteration did not converge in 1e5 steps");
}

}  // namespace

IntMatrix CharPoly::evaluate(const IntMatrix& m) const {
  const auto d = m.rows();
  IntMatrix acc = IntMatrix::Zero(d, d);
  for (std::size_t i = coefficients.size(); i-- > 0;) {
    acc = (acc * m).eval();
    acc += coefficients[i] * IntMatrix::Identity(d, d);
  }
  return acc;
}

std::vector<Complex> CharPoly::roots() const {
  std::vector<double> c(coefficients.begin(), coefficients.end());
  auto r = companion_roots(c);
  sort_roots(r);
  return r;
}

CharPoly char_poly(const IntMatrix& m) {
  const auto d = m.rows();
  if (d != m.cols() || d == 0) throw ValidationError("char_poly needs a non-empty square matrix");
  if (d > 8) throw ValidationError("char_poly supports dimension at most 8");
  CharPoly p;
  p.coefficients.assign(d + 1, 0);
  p.coefficients[d] = 1;
  IntMatrix mk = IntMatrix::Identity(d, d);
  for (Eigen::Index k = 1; k <= d; ++k) {
    IntMatrix am = m * mk;
    const std::int64_t tr = am.trace();
    if (tr % k != 0) throw NumericalError("Faddeev-LeVerrier division not exact");
    p.coefficients[d - k] = -tr / k;
    mk = am + p.coefficients[d - k] * IntMatrix::Identity(d, d);
  }
  return p;
}

std::int64_t determinant(const IntMatrix& m) {
  const auto n = m.rows();
  if (n != m.cols()) throw ValidationError("determinant needs a square matrix");
  std::vector<std::vector<Int128>> a(n, std::vector<Int128>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
  Int128 sign = 1, prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      Eigen::Index swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return checked(sign * a[n - 1][n - 1]);
}

PerronData perron_data(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 2) throw ValidationError("perron_data needs a square matrix of size >= 2");
  PerronData pd;
  double lt = 0.0;
  pd.right = power_iterate(m, pd.lambda);
  pd.left = power_iterate(m.transpose(), lt);
  pd.right /= pd.right.sum();
  pd.left /= pd.left.dot(pd.right);

  auto roots = companion_roots(real_char_poly(m));
  std::size_t best = 0;
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (std::abs(roots[i] - pd.lambda) < std::abs(roots[best] - pd.lambda)) best = i;
  roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(best));
  sort_roots(roots);
  pd.conjugates = std::move(roots);
  return pd;
}

bool is_irreducible(const CharPoly& poly) {
  const std::size_t deg = poly.degree();
  if (deg > 4) throw ValidationError("irreducibility test unsupported for degree " + std::to_string(deg));
  if (deg <= 1) return true;
  if (has_integer_root(poly.coefficients)) return false;
  if (deg == 4 && has_quadratic_factor(poly.coefficients)) return false;
  return true;
}

Classification classify(const IntMatrix& m, const CharPoly& poly, const PerronData& pd) {
  Classification c;
  c.primitive = primitivity_exponent(m.cast<double>()).has_value() && pd.lambda > 1.0 + 1e-9;
  c.pisot = pd.lambda > 1.0;
  for (const auto& z : pd.conjugates) c.pisot = c.pisot && std::abs(z) < 1.0 - 1e-9;
  c.irreducible = is_irreducible(poly);
  c.unimodular = std::llabs(determinant(m)) == 1;
  return c;
}

Chart build_chart(const Eigen::MatrixXd& m, const PerronData& pd) {
  const auto d = m.rows();
  Chart chart;
  chart.d = static_cast<std::size_t>(d);
  chart.pi = Eigen::MatrixXd::Zero(d - 1, d);
  chart.h = Eigen::MatrixXd::Zero(d - 1, d - 1);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.transpose().cast<Complex>());
  if (es.info() != Eigen::Success) throw NumericalError("left eigenvector solve failed");
  const auto& values = es.eigenvalues();

  Eigen::Index row = 0;
  for (const Complex mu : pd.conjugates) {
    if (mu.imag() < 0.0) continue;
    Eigen::Index idx = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i)
      if (std::abs(values[i] - mu) < std::abs(values[idx] - mu)) idx = i;
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (i != idx && std::abs(values[i] - mu) < 1e-8)
        throw NumericalError("repeated eigenvalue; chart needs a simple spectrum");
    Eigen::VectorXcd u = es.eigenvectors().col(idx);
    Complex pairing = 0.0;
    for (Eigen::Index k = 1; k < d; ++k) {
      pairing = u[0] - u[k];
      if (std::abs(pairing) > 1e-9 * u.norm()) break;
    }
    if (std::abs(pairing) <= 1e-9 * u.norm()) throw NumericalError("degenerate left eigenvector");
    u /= pairing;
    if (mu.imag() == 0.0) {
      chart.pi.row(row) = u.real().transpose();
      chart.h(row, row) = mu.real();
      row += 1;
    } else {
      chart.pi.row(row) = u.real().transpose();
      chart.pi.row(row + 1) = u.imag().transpose();
      chart.h(row, row) = mu.real();
      chart.h(row, row + 1) = -mu.imag();
      chart.h(row + 1, row) = mu.imag();
      chart.h(row + 1, row + 1) = mu.real();
      row += 2;
    }
  }
  if (row != d - 1) throw NumericalError("conjugate eigenvalues do not fill the contracting hyperplane");
  chart.g = chart.h.transpose();
  const double rho = spectral_radius(chart.h);
  if (!(rho < 1.0 - 1e-9))
    throw NumericalError("not Pisot: conjugate eigenvalue of modulus " + std::to_string(rho));
  return chart;
}

Eigen::VectorXd project(const Chart& chart, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != chart.d) throw ValidationError("projection dimension mismatch");
  return chart.pi * v;
}

Eigen::VectorXd project(const Chart& chart, const AbelianVector& v) { return project(chart, v.as_real()); }

Lattice lattice(const Chart& chart) {
  const auto d = static_cast<Eigen::Index>(chart.d);
  Lattice lat;
  lat.generators.resize(d - 1, d - 1);
  for (Eigen::Index i = 1; i < d; ++i) lat.generators.col(i - 1) = chart.pi.col(i) - chart.pi.col(0);
  const double det = lat.generators.determinant();
  if (!(std::abs(det) > 1e-12)) throw NumericalError("lattice generators are linearly dependent");
  lat.density = 1.0 / std::abs(det);
  return lat;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()[i]));
  return r;
}

}  // namespace rauzy
