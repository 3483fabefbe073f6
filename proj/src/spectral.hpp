#ifndef RAUZY_SPECTRAL_HPP
#define RAUZY_SPECTRAL_HPP

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "substitution.hpp"

namespace rauzy {

using Complex = std::complex<double>;

// Monic integer polynomial, coefficients[i] multiplies x^i.
struct CharPoly {
  std::vector<std::int64_t> coefficients;

  std::size_t degree() const { return coefficients.size() - 1; }
  IntMatrix evaluate(const IntMatrix& m) const;
  std::vector<Complex> roots() const;
};

// Faddeev-LeVerrier in exact integer arithmetic.
CharPoly char_poly(const IntMatrix& m);

std::int64_t determinant(const IntMatrix& m);

struct PerronData {
  double lambda = 0.0;
  Eigen::VectorXd left;   // L, normalised so L.R = 1
  Eigen::VectorXd right;  // R, normalised so |R|_1 = 1
  // Remaining eigenvalues; complex pairs appear once each with both signs of
  // the imaginary part, sorted by decreasing real part then imaginary part.
  std::vector<Complex> conjugates;
};

PerronData perron_data(const Eigen::MatrixXd& m);

struct Classification {
  bool primitive = false;
  bool pisot = false;
  bool irreducible = false;
  bool unimodular = false;
};

// Exact test over Z for degree <= 4; throws ValidationError above that.
bool is_irreducible(const CharPoly& poly);
Classification classify(const IntMatrix& m, const CharPoly& poly, const PerronData& pd);

// Coordinates on the contracting hyperplane. Rows of pi are left
// eigenvectors for the conjugates (Re/Im rows for complex pairs); h is the
// action of M in these coordinates and g = h^T its dual.
struct Chart {
  std::size_t d = 0;
  Eigen::MatrixXd pi;
  Eigen::MatrixXd h;
  Eigen::MatrixXd g;

  std::size_t dim() const { return d - 1; }
};

Chart build_chart(const Eigen::MatrixXd& m, const PerronData& pd);

Eigen::VectorXd project(const Chart& chart, const Eigen::VectorXd& v);
Eigen::VectorXd project(const Chart& chart, const AbelianVector& v);

struct Lattice {
  Eigen::MatrixXd generators;  // column i-1 is pi(e_{i+1} - e_1)
  double density = 0.0;
};

Lattice lattice(const Chart& chart);

double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace rauzy

#endif
