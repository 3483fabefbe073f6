#include "model.hpp"

#include "errors.hpp"

namespace rauzy {

Model build_model(RandomSubstitution s) {
  if (!is_compatible(s)) throw ValidationError("substitution is not compatible");
  IntMatrix m = integer_matrix(s);
  if (!is_primitive(s)) throw ValidationError("substitution is not primitive");
  CharPoly poly = char_poly(m);
  PerronData pd = perron_data(m.cast<double>());
  Classification cls = classify(m, poly, pd);
  if (!cls.pisot) throw NumericalError("substitution is not Pisot");
  if (!cls.irreducible) throw NumericalError("characteristic polynomial is reducible");
  Chart chart = build_chart(m.cast<double>(), pd);
  Lattice lat = lattice(chart);
  PrefixSuffixGraph graph = prefix_suffix_graph(s);
  std::vector<AffineMap> maps = gifs_maps(graph, chart);
  EdgeProbabilities probs = edge_probabilities(graph, pd);
  return Model{std::move(s), std::move(m), std::move(poly), std::move(pd), cls, std::move(chart),
               std::move(lat), std::move(graph), std::move(maps), std::move(probs)};
}

}  // namespace rauzy
