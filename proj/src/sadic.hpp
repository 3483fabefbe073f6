#ifndef RAUZY_SADIC_HPP
#define RAUZY_SADIC_HPP

#include <string>
#include <vector>

#include "cloud.hpp"
#include "gifs.hpp"
#include "measure.hpp"
#include "spectral.hpp"
#include "substitution.hpp"

namespace rauzy {

// Deterministic substitutions sharing one integer matrix, with the shared
// spectral data computed once.
struct CompatibleFamily {
  std::vector<std::string> names;
  std::vector<RandomSubstitution> members;
  IntMatrix matrix;
  PerronData pd;
  Chart chart;
  Lattice lat;
  std::vector<PrefixSuffixGraph> graphs;
  std::vector<std::vector<AffineMap>> maps;

  std::size_t size() const { return members.size(); }
  std::size_t letters() const { return members.front().size(); }
  const Word& image(std::size_t member, Letter a) const { return members[member].rules(a)[0].word; }
};

CompatibleFamily compatible_family(std::vector<RandomSubstitution> members, std::vector<std::string> names = {});
// alphabet = [...] and [[member]] tables with name and images = {"1" = "12", ...}.
CompatibleFamily parse_family(std::string_view text);
CompatibleFamily load_family(const std::string& path);

// theta_1, theta_2, ... as member indices.
class DirectiveSequence {
 public:
  // "0,1,1,(0,1)*": finite prefix then a repeated block. A missing tail
  // repeats the last entry.
  static DirectiveSequence parse(std::string_view text, std::size_t members);
  static DirectiveSequence bernoulli(std::vector<double> weights, std::uint64_t seed);
  // Explicit entries followed by a repeated block (non-empty).
  static DirectiveSequence periodic(std::vector<std::size_t> prefix, std::vector<std::size_t> period,
                                    std::size_t members);

  std::size_t at(std::size_t n) const;  // n >= 1
  bool is_bernoulli() const { return !weights_.empty(); }

 private:
  std::vector<std::size_t> prefix_;
  std::vector<std::size_t> period_;
  std::vector<double> weights_;
  std::uint64_t seed_ = 0;
};

// a_0 .. a_N with theta_n(a_n) starting with a_{n-1} for 1 <= n <= N.
std::vector<Letter> adapted_letter_sequence(const CompatibleFamily& f, const DirectiveSequence& dseq, std::size_t depth);

// theta_1 o ... o theta_n (a_n).
Word limiting_prefix(const CompatibleFamily& f, const DirectiveSequence& dseq, const std::vector<Letter>& adapted,
                     std::size_t n);

PointCloud sadic_cloud(const CompatibleFamily& f, const DirectiveSequence& dseq, std::size_t n);

// Hausdorff distance between the depth-n cloud of dseq and that of the
// sequence agreeing with dseq on its first `agree` entries and shifted by one
// member index afterwards, for agree = 0 .. max_agree.
struct ContinuityEntry {
  std::size_t agree = 0;
  std::vector<double> per_letter;
  double global = 0.0;
};
std::vector<ContinuityEntry> continuity_report(const CompatibleFamily& f, const DirectiveSequence& dseq, std::size_t n,
                                               std::size_t max_agree);

// One application of Phi_theta on measures of masses R.
std::vector<EmpiricalMeasure> sadic_measure_operator(const CompatibleFamily& f, std::size_t member,
                                                     const std::vector<EmpiricalMeasure>& measures,
                                                     std::size_t cap = 200'000, std::size_t bins = 8192);

// Realisations of a are the distinct member images; P[u] sums the weights
// of the members mapping a to u (zero weights are dropped).
RandomSubstitution derived_substitution(const CompatibleFamily& f, const std::vector<double>& weights);
RandomSubstitution enveloping(const CompatibleFamily& f);

struct UnionReport {
  std::size_t samples = 0;
  std::vector<double> union_to_envelope;
  std::vector<double> envelope_to_union;
  std::vector<double> envelope_to_union_by_prefix;  // after 1, 2, 4, ... samples
};

struct SadicSampling {
  std::vector<double> weights;
  std::size_t samples = 64;
  std::size_t depth = 20;
  std::uint64_t seed = 0;
  unsigned envelope_level = 25;
  unsigned workers = 1;
};

UnionReport union_vs_envelope(const CompatibleFamily& f, const SadicSampling& opt);

struct AveragedReport {
  std::vector<EmpiricalMeasure> average;   // per letter, masses ~ R
  std::vector<EmpiricalMeasure> envelope;  // enveloping markov estimate
  std::vector<double> masses;
  std::vector<double> mk;  // normalised tiles, one entry per letter (dim 1 only)
};
AveragedReport averaged_measure(const CompatibleFamily& f, const SadicSampling& opt);

}  // namespace rauzy

#endif
