#ifndef RAUZY_SUBSTITUTION_HPP
#define RAUZY_SUBSTITUTION_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rng.hpp"

namespace rauzy {

// 0-based letter index; letters display 1-based through Alphabet symbols.
using Letter = std::uint8_t;
inline constexpr std::size_t kMaxAlphabet = 16;

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : data_(letters.begin(), letters.end()) {}
  explicit Word(std::span<const Letter> letters) : data_(letters.begin(), letters.end()) {}

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  Letter operator[](std::size_t i) const { return static_cast<Letter>(data_[i]); }
  Letter front() const { return static_cast<Letter>(data_.front()); }
  Letter back() const { return static_cast<Letter>(data_.back()); }

  std::span<const Letter> letters() const {
    return {reinterpret_cast<const Letter*>(data_.data()), data_.size()};
  }

  void push_back(Letter a) { data_.push_back(static_cast<char>(a)); }
  void append(std::span<const Letter> letters) {
    data_.append(reinterpret_cast<const char*>(letters.data()), letters.size());
  }
  Word& operator+=(const Word& other) {
    data_ += other.data_;
    return *this;
  }
  friend Word operator+(Word lhs, const Word& rhs) { return lhs += rhs; }

  Word prefix(std::size_t n) const { return Word(data_.substr(0, n)); }
  Word subword(std::size_t pos, std::size_t len) const { return Word(data_.substr(pos, len)); }
  bool starts_with(const Word& p) const { return data_.compare(0, p.size(), p.data_) == 0; }

  const std::string& bytes() const { return data_; }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    return a.data_.compare(b.data_) <=> 0;
  }

 private:
  explicit Word(std::string raw) : data_(std::move(raw)) {}
  std::string data_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return std::hash<std::string>{}(w.bytes()); }
};

class AbelianVector {
 public:
  explicit AbelianVector(std::size_t d) : counts_(d, 0) {}
  explicit AbelianVector(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {}

  std::size_t size() const { return counts_.size(); }
  std::int64_t operator[](std::size_t i) const { return counts_[i]; }
  void add(Letter a, std::int64_t n = 1) { counts_[a] += n; }
  std::int64_t total() const;
  const std::vector<std::int64_t>& counts() const { return counts_; }
  Eigen::VectorXd as_real() const;

  AbelianVector& operator+=(const AbelianVector& o);
  friend AbelianVector operator+(AbelianVector a, const AbelianVector& b) { return a += b; }
  friend bool operator==(const AbelianVector&, const AbelianVector&) = default;
  friend auto operator<=>(const AbelianVector&, const AbelianVector&) = default;

 private:
  std::vector<std::int64_t> counts_;
};

AbelianVector abelianise(const Word& u, std::size_t d);

// Ordered single-character symbols. Letter i displays as symbols[i].
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);
  static Alphabet numeric(std::size_t d);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(Letter a) const { return symbols_[a]; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<Letter> index_of(std::string_view symbol) const;

  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

struct Realisation {
  Word word;
  double probability;
};

// Per-letter weighted realisation lists. Immutable once constructed; the
// constructor enforces every invariant (distinct non-empty words over the
// alphabet, probabilities in (0,1] summing to 1).
class RandomSubstitution {
 public:
  RandomSubstitution(Alphabet alphabet, std::vector<std::vector<Realisation>> rules,
                     double sum_tolerance = 1e-12);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  std::span<const Realisation> rules(Letter a) const { return rules_[a]; }
  bool is_deterministic() const;
  std::size_t max_image_length() const;

  // Realisation index for a uniform variate u in [0,1).
  std::size_t pick(Letter a, double u) const;

 private:
  Alphabet alphabet_;
  std::vector<std::vector<Realisation>> rules_;
  std::vector<std::vector<double>> cumulative_;
};

// Probabilities that are either fixed or tied to one free parameter p
// (written "p" or "1-p" in a config). Used by probability sweeps.
class SubstitutionTemplate {
 public:
  enum class Weight { fixed, p, one_minus_p };
  struct Image {
    Word word;
    Weight weight;
    double value;
  };

  SubstitutionTemplate(Alphabet alphabet, std::vector<std::vector<Image>> images);

  bool parametric() const;
  // Instantiates at p; realisations whose weight becomes exactly zero are
  // dropped, so p = 0 and p = 1 give the degenerate marginals.
  RandomSubstitution instantiate(std::optional<double> p) const;
  const Alphabet& alphabet() const { return alphabet_; }

 private:
  Alphabet alphabet_;
  std::vector<std::vector<Image>> images_;
};

SubstitutionTemplate parse_substitution_template(std::string_view text);
RandomSubstitution parse_substitution(std::string_view text);
RandomSubstitution load_substitution(const std::string& path);

bool is_compatible(const RandomSubstitution& s);
// M[i][j] = sum_v p_j(v) |v|_i.
Eigen::MatrixXd substitution_matrix(const RandomSubstitution& s);
// Exact integer matrix; throws ValidationError for incompatible input.
IntMatrix integer_matrix(const RandomSubstitution& s);
bool is_primitive(const RandomSubstitution& s);
// Smallest k <= (d-1)^2+1 with M^k > 0 entrywise, if any.
std::optional<unsigned> primitivity_exponent(const Eigen::MatrixXd& m);

Word realize(const RandomSubstitution& s, const Word& u, Rng& rng);

struct MarginalSelector {
  std::vector<std::size_t> choice;
};
RandomSubstitution marginal(const RandomSubstitution& s, const MarginalSelector& sel);

// Letters a with some realisation of s^n(b) starting with a for infinitely
// many n: those on, or reachable from, a cycle of the first-letter digraph.
std::vector<Letter> eventually_first_letters(const RandomSubstitution& s);

// A letter a and a cycle a = c_0 -> c_1 -> ... -> c_{k-1} -> a of the
// first-letter digraph; choices[j] indexes the realisation of c_j that starts
// with c_{j+1}. Pinning these along the leftmost branch makes s^{nk}(a)
// realisations nest as n grows.
struct SelfStart {
  std::vector<Letter> cycle;
  std::vector<std::size_t> choices;
  Letter letter() const { return cycle.front(); }
  std::size_t period() const { return cycle.size(); }
};
std::optional<SelfStart> find_self_start(const RandomSubstitution& s);

struct InflationNode {
  Letter letter;
  unsigned level;
  std::uint64_t seed;
  bool spine = false;
};

using ChunkSink = std::function<void(std::span<const Letter>)>;

// Depth-first expansion of one realisation of s^n(a). Every node draws its
// realisation from its own seed, and child seeds are derived from the parent
// seed and child position, so any subtree can be regenerated on its own.
// Memory is O(n * max image length).
class InflationTree {
 public:
  InflationTree(const RandomSubstitution& s, std::uint64_t seed,
                std::optional<SelfStart> pin = std::nullopt);

  InflationNode root(Letter a, unsigned level) const;
  // Root of the pinned tree; level must be a multiple of the cycle period.
  InflationNode pinned_root(unsigned level) const;

  std::size_t choose(const InflationNode& node) const;
  InflationNode child(const InflationNode& parent, std::size_t index) const;
  // All descendants at `level`, in word order.
  std::vector<InflationNode> frontier(const InflationNode& node, unsigned level) const;
  // Emits the letters of the node's realisation, at most cap of them.
  std::size_t expand(const InflationNode& node, std::size_t cap, const ChunkSink& sink) const;

  const RandomSubstitution& substitution() const { return *s_; }

 private:
  std::uint64_t spine_seed(unsigned level) const;
  std::size_t spine_phase(unsigned level) const;

  const RandomSubstitution* s_;
  std::uint64_t seed_;
  std::optional<SelfStart> pin_;
};

std::size_t realize_power_stream(const RandomSubstitution& s, Letter a, unsigned level,
                                 std::uint64_t seed, std::size_t cap, const ChunkSink& sink);
Word realize_power(const RandomSubstitution& s, Letter a, unsigned level, std::uint64_t seed,
                   std::size_t cap = SIZE_MAX);

// Prefix of a level-infinity inflation sequence: a realisation of s^{nk}(a)
// with the leftmost branch pinned to the self-start cycle (k its period).
// Outputs nest in n for a fixed seed.
Word level_inf_prefix(const RandomSubstitution& s, unsigned n, std::uint64_t seed);

struct LanguageSlice {
  std::size_t length;
  std::vector<Word> words;  // sorted
};
LanguageSlice legal_words(const RandomSubstitution& s, std::size_t length);

}  // namespace rauzy

#endif
