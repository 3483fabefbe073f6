#ifndef RAUZY_MODEL_HPP
#define RAUZY_MODEL_HPP

#include <vector>

#include "gifs.hpp"
#include "spectral.hpp"
#include "substitution.hpp"

namespace rauzy {

// Everything derived once from a compatible irreducible Pisot substitution.
struct Model {
  RandomSubstitution sub;
  IntMatrix matrix;
  CharPoly poly;
  PerronData pd;
  Classification cls;
  Chart chart;
  Lattice lat;
  PrefixSuffixGraph graph;
  std::vector<AffineMap> maps;
  EdgeProbabilities probs;

  std::size_t letters() const { return sub.size(); }
  std::size_t dim() const { return chart.dim(); }
};

// Throws ValidationError for incompatible or non-primitive input and
// NumericalError when the matrix is not irreducible Pisot.
Model build_model(RandomSubstitution s);

}  // namespace rauzy

#endif
