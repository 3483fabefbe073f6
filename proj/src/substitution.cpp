#include "substitution.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "config.hpp"
#include "errors.hpp"

namespace rauzy {

std::int64_t AbelianVector::total() const {
  std::int64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

Eigen::VectorXd AbelianVector::as_real() const {
  Eigen::VectorXd v(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) v[i] = static_cast<double>(counts_[i]);
  return v;
}

AbelianVector& AbelianVector::operator+=(const AbelianVector& o) {
  if (o.size() != size()) throw ValidationError("abelian vector dimension mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
  return *this;
}

AbelianVector abelianise(const Word& u, std::size_t d) {
  AbelianVector v(d);
  for (Letter a : u.letters()) {
    if (a >= d) throw ValidationError("letter outside alphabet");
    v.add(a);
  }
  return v;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw ValidationError("alphabet needs at least two letters");
  if (symbols_.size() > kMaxAlphabet)
    throw ValidationError("alphabet larger than " + std::to_string(kMaxAlphabet));
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.size() != 1) throw ValidationError("alphabet symbols must be single characters: '" + s + "'");
    if (!seen.insert(s).second) throw ValidationError("duplicate letter '" + s + "' in alphabet");
  }
}

Alphabet Alphabet::numeric(std::size_t d) {
  std::vector<std::string> symbols;
  for (std::size_t i = 1; i <= d; ++i) symbols.push_back(std::to_string(i));
  return Alphabet(std::move(symbols));
}

std::optional<Letter> Alphabet::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == symbol) return static_cast<Letter>(i);
  return std::nullopt;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  for (char c : text) {
    auto idx = index_of(std::string_view(&c, 1));
    if (!idx) throw ValidationError(std::string("unknown symbol '") + c + "' in word '" + std::string(text) + "'");
    w.push_back(*idx);
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (Letter a : w.letters()) out += symbols_.at(a);
  return out;
}

RandomSubstitution::RandomSubstitution(Alphabet alphabet, std::vector<std::vector<Realisation>> rules,
                                       double sum_tolerance)
    : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
  const std::size_t d = alphabet_.size();
  if (rules_.size() != d) throw ValidationError("one rule per letter required");
  for (std::size_t a = 0; a < d; ++a) {
    const auto& list = rules_[a];
    const std::string& name = alphabet_.symbol(static_cast<Letter>(a));
    if (list.empty()) throw ValidationError("letter '" + name + "' has no realisation");
    double sum = 0.0;
    std::set<Word> distinct;
    for (const auto& r : list) {
      if (r.word.empty()) throw ValidationError("empty realisation for letter '" + name + "'");
      for (Letter b : r.word.letters())
        if (b >= d) throw ValidationError("realisation of '" + name + "' leaves the alphabet");
      if (!(r.probability > 0.0) || r.probability > 1.0)
        throw ValidationError("probability of '" + alphabet_.format(r.word) + "' for letter '" + name +
                              "' must lie in (0,1]");
      if (!distinct.insert(r.word).second)
        throw ValidationError("duplicate realisation '" + alphabet_.format(r.word) + "' for letter '" +
                              name + "'");
      sum += r.probability;
    }
    if (std::abs(sum - 1.0) > sum_tolerance)
      throw ValidationError("probabilities for letter '" + name + "' sum to " + std::to_string(sum));
    std::vector<double> cum;
    double acc = 0.0;
    for (const auto& r : list) cum.push_back(acc += r.probability);
    cum.back() = 1.0;
    cumulative_.push_back(std::move(cum));
  }
}

bool RandomSubstitution::is_deterministic() const {
  return std::all_of(rules_.begin(), rules_.end(), [](const auto& r) { return r.size() == 1; });
}

std::size_t RandomSubstitution::max_image_length() const {
  std::size_t m = 0;
  for (const auto& list : rules_)
    for (const auto& r : list) m = std::max(m, r.word.size());
  return m;
}

std::size_t RandomSubstitution::pick(Letter a, double u) const {
  const auto& cum = cumulative_[a];
  if (cum.size() == 1) return 0;
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

// ---------------------------------------------------------------- parsing

SubstitutionTemplate::SubstitutionTemplate(Alphabet alphabet, std::vector<std::vector<Image>> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {}

bool SubstitutionTemplate::parametric() const {
  for (const auto& list : images_)
    for (const auto& im : list)
      if (im.weight != Weight::fixed) return true;
  return false;
}

RandomSubstitution SubstitutionTemplate::instantiate(std::optional<double> p) const {
  if (parametric() && !p) throw ValidationError("substitution has a free parameter p; supply a value");
  if (!parametric() && p) throw ValidationError("substitution has no free parameter p");
  if (p && !(*p >= 0.0 && *p <= 1.0)) throw ValidationError("parameter p must lie in [0,1]");
  std::vector<std::vector<Realisation>> rules;
  for (std::size_t a = 0; a < images_.size(); ++a) {
    std::vector<Realisation> list;
    double sum = 0.0;
    for (const auto& im : images_[a]) {
      double w = im.value;
      if (im.weight == Weight::p) w = *p;
      if (im.weight == Weight::one_minus_p) w = 1.0 - *p;
      if (w == 0.0 && im.weight != Weight::fixed) continue;
      list.push_back({im.word, w});
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ValidationError("probabilities for letter '" + alphabet_.symbol(static_cast<Letter>(a)) +
                            "' sum to " + std::to_string(sum));
    for (auto& r : list) r.probability /= sum;
    rules.push_back(std::move(list));
  }
  return RandomSubstitution(alphabet_, std::move(rules));
}

SubstitutionTemplate parse_substitution_template(std::string_view text) {
  const nlohmann::json doc = config::parse_toml(text);
  if (!doc.contains("alphabet") || !doc["alphabet"].is_array())
    throw ValidationError("config needs an 'alphabet' array");
  std::vector<std::string> symbols;
  for (const auto& s : doc["alphabet"]) {
    if (!s.is_string()) throw ValidationError("alphabet entries must be strings");
    symbols.push_back(s.get<std::string>());
  }
  Alphabet alphabet(std::move(symbols));
  const std::size_t d = alphabet.size();
  if (!doc.contains("rule") || !doc["rule"].is_array())
    throw ValidationError("config needs [[rule]] tables");

  std::vector<std::vector<SubstitutionTemplate::Image>> images(d);
  std::vector<bool> seen(d, false);
  for (const auto& rule : doc["rule"]) {
    if (!rule.contains("letter") || !rule["letter"].is_string())
      throw ValidationError("[[rule]] needs letter = \"...\"");
    const std::string sym = rule["letter"].get<std::string>();
    auto a = alphabet.index_of(sym);
    if (!a) throw ValidationError("rule for unknown letter '" + sym + "'");
    if (seen[*a]) throw ValidationError("duplicate rule for letter '" + sym + "'");
    seen[*a] = true;
    if (!rule.contains("images") || !rule["images"].is_array() || rule["images"].empty())
      throw ValidationError("rule for '" + sym + "' needs a non-empty images array");
    const auto& list = rule["images"];
    for (const auto& im : list) {
      if (!im.is_object() || !im.contains("word") || !im["word"].is_string())
        throw ValidationError("image of '" + sym + "' needs word = \"...\"");
      const std::string text_word = im["word"].get<std::string>();
      if (text_word.empty()) throw ValidationError("empty realisation for letter '" + sym + "'");
      SubstitutionTemplate::Image image{alphabet.parse(text_word), SubstitutionTemplate::Weight::fixed, 1.0};
      if (im.contains("p")) {
        const auto& p = im["p"];
        if (p.is_number()) {
          image.value = p.get<double>();
          if (!(image.value > 0.0))
            throw ValidationError("probability of '" + text_word + "' must be positive (drop the realisation instead)");
        } else if (p.is_string() && p.get<std::string>() == "p") {
          image.weight = SubstitutionTemplate::Weight::p;
        } else if (p.is_string() && p.get<std::string>() == "1-p") {
          image.weight = SubstitutionTemplate::Weight::one_minus_p;
        } else {
          throw ValidationError("probability of '" + text_word + "' must be a number, \"p\" or \"1-p\"");
        }
      } else if (list.size() > 1) {
        throw ValidationError("letter '" + sym + "' has several images; each needs p");
      }
      images[*a].push_back(std::move(image));
    }
  }
  for (std::size_t a = 0; a < d; ++a)
    if (!seen[a]) throw ValidationError("no rule for letter '" + alphabet.symbol(static_cast<Letter>(a)) + "'");
  return SubstitutionTemplate(std::move(alphabet), std::move(images));
}

RandomSubstitution parse_substitution(std::string_view text) {
  return parse_substitution_template(text).instantiate(std::nullopt);
}

RandomSubstitution load_substitution(const std::string& path) {
  return parse_substitution(config::read_file(path));
}

// ------------------------------------------------------------ matrix data

bool is_compatible(const RandomSubstitution& s) {
  const std::size_t d = s.size();
  for (std::size_t a = 0; a < d; ++a) {
    auto rules = s.rules(static_cast<Letter>(a));
    const AbelianVector first = abelianise(rules[0].word, d);
    for (const auto& r : rules.subspan(1))
      if (abelianise(r.word, d) != first) return false;
  }
  return true;
}

Eigen::MatrixXd substitution_matrix(const RandomSubstitution& s) {
  const std::size_t d = s.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (const auto& r : s.rules(static_cast<Letter>(j)))
      for (Letter i : r.word.letters()) m(i, j) += r.probability;
  return m;
}

IntMatrix integer_matrix(const RandomSubstitution& s) {
  if (!is_compatible(s)) throw ValidationError("substitution is not compatible");
  const std::size_t d = s.size();
  IntMatrix m = IntMatrix::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (Letter i : s.rules(static_cast<Letter>(j))[0].word.letters()) m(i, j) += 1;
  return m;
}

std::optional<unsigned> primitivity_exponent(const Eigen::MatrixXd& m) {
  const auto d = m.rows();
  using Pattern = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  Pattern base = (m.array() > 0.0).cast<int>().matrix();
  Pattern power = base;
  const unsigned bound = static_cast<unsigned>((d - 1) * (d - 1) + 1);
  for (unsigned k = 1; k <= bound; ++k) {
    if ((power.array() > 0).all()) return k;
    power = ((power * base).array() > 0).cast<int>().matrix();
  }
  return std::nullopt;
}

bool is_primitive(const RandomSubstitution& s) {
  const Eigen::MatrixXd m = substitution_matrix(s);
  if (!primitivity_exponent(m)) return false;
  // Positive power guarantees convergence of the power iteration.
  Eigen::VectorXd x = Eigen::VectorXd::Ones(m.rows()) / static_cast<double>(m.rows());
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd y = m * x;
    double next = y.sum();
    x = y / next;
    if (std::abs(next - lambda) < 1e-14 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda > 1.0 + 1e-9;
}

Word realize(const RandomSubstitution& s, const Word& u, Rng& rng) {
  Word out;
  for (Letter a : u.letters()) {
    const auto rules = s.rules(a);
    const std::size_t k = rules.size() == 1 ? 0 : s.pick(a, uniform01(rng));
    out += rules[k].word;
  }
  return out;
}

RandomSubstitution marginal(const RandomSubstitution& s, const MarginalSelector& sel) {
  if (sel.choice.size() != s.size()) throw ValidationError("marginal selector needs one index per letter");
  std::vector<std::vector<Realisation>> rules;
  for (std::size_t a = 0; a < s.size(); ++a) {
    auto list = s.rules(static_cast<Letter>(a));
    if (sel.choice[a] >= list.size())
      throw ValidationError("marginal index out of range for letter '" +
                            s.alphabet().symbol(static_cast<Letter>(a)) + "'");
    rules.push_back({{list[sel.choice[a]].word, 1.0}});
  }
  return RandomSubstitution(s.alphabet(), std::move(rules));
}

// ------------------------------------------------------ first-letter graph

namespace {

std::vector<std::vector<bool>> first_letter_graph(const RandomSubstitution& s) {
  const std::size_t d = s.size();
  std::vector<std::vector<bool>> edge(d, std::vector<bool>(d, false));
  for (std::size_t c = 0; c < d; ++c)
    for (const auto& r : s.rules(static_cast<Letter>(c))) edge[c][r.word.front()] = true;
  return edge;
}

}  // namespace

std::vector<Letter> eventually_first_letters(const RandomSubstitution& s) {
  const std::size_t d = s.size();
  const auto edge = first_letter_graph(s);
  // reach[u][v]: v reachable from u by a path of length >= 1.
  std::vector<std::vector<bool>> reach = edge;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < d; ++j)
          if (reach[k][j]) reach[i][j] = true;
  std::vector<Letter> out;
  for (std::size_t v = 0; v < d; ++v) {
    bool ok = reach[v][v];
    for (std::size_t u = 0; u < d && !ok; ++u) ok = reach[u][u] && reach[u][v];
    if (ok) out.push_back(static_cast<Letter>(v));
  }
  return out;
}

std::optional<SelfStart> find_self_start(const RandomSubstitution& s) {
  const std::size_t d = s.size();
  const auto edge = first_letter_graph(s);
  for (std::size_t k = 1; k <= d; ++k) {
    for (std::size_t a = 0; a < d; ++a) {
      // Breadth-first over paths of exactly k steps from a, keeping one
      // predecessor per (step, vertex) with the smallest vertex order.
      std::vector<std::vector<int>> pred(k + 1, std::vector<int>(d, -1));
      std::vector<bool> layer(d, false);
      layer[a] = true;
      for (std::size_t step = 1; step <= k; ++step) {
        std::vector<bool> next(d, false);
        for (std::size_t u = 0; u < d; ++u) {
          if (!layer[u]) continue;
          for (std::size_t v = 0; v < d; ++v) {
            if (edge[u][v] && !next[v]) {
              next[v] = true;
              pred[step][v] = static_cast<int>(u);
            }
          }
        }
        layer = std::move(next);
      }
      if (!layer[a]) continue;
      std::vector<Letter> cycle(k);
      std::size_t v = a;
      for (std::size_t step = k; step >= 1; --step) {
        v = static_cast<std::size_t>(pred[step][v]);
        cycle[step - 1] = static_cast<Letter>(v);
      }
      SelfStart start{cycle, {}};
      for (std::size_t j = 0; j < k; ++j) {
        const Letter target = cycle[(j + 1) % k];
        auto rules = s.rules(cycle[j]);
        std::size_t idx = 0;
        while (rules[idx].word.front() != target) ++idx;
        start.choices.push_back(idx);
      }
      return start;
    }
  }
  return std::nullopt;
}

// --------------------------------------------------------- inflation tree

InflationTree::InflationTree(const RandomSubstitution& s, std::uint64_t seed, std::optional<SelfStart> pin)
    : s_(&s), seed_(seed), pin_(std::move(pin)) {}

InflationNode InflationTree::root(Letter a, unsigned level) const {
  if (a >= s_->size()) throw ValidationError("letter outside alphabet");
  return {a, level, seed_, false};
}

InflationNode InflationTree::pinned_root(unsigned level) const {
  if (!pin_) throw ValidationError("inflation tree has no pinned branch");
  if (level % pin_->period() != 0) throw ValidationError("pinned level must be a multiple of the cycle period");
  return {pin_->letter(), level, spine_seed(level), true};
}

std::uint64_t InflationTree::spine_seed(unsigned level) const {
  return derive_seed(seed_, 0x5350494E45000000ULL + level);
}

std::size_t InflationTree::spine_phase(unsigned level) const {
  const std::size_t k = pin_->period();
  return (k - level % k) % k;
}

std::size_t InflationTree::choose(const InflationNode& node) const {
  if (node.spine) return pin_->choices[spine_phase(node.level)];
  const auto rules = s_->rules(node.letter);
  if (rules.size() == 1) return 0;
  return s_->pick(node.letter, unit_double(splitmix64(node.seed)));
}

InflationNode InflationTree::child(const InflationNode& parent, std::size_t index) const {
  const Word& w = s_->rules(parent.letter)[choose(parent)].word;
  const unsigned level = parent.level - 1;
  if (parent.spine && index == 0) return {w[0], level, spine_seed(level), true};
  return {w[index], level, derive_seed(parent.seed, index), false};
}

std::vector<InflationNode> InflationTree::frontier(const InflationNode& node, unsigned level) const {
  std::vector<InflationNode> out{node};
  for (unsigned l = node.level; l > level; --l) {
    std::vector<InflationNode> next;
    for (const auto& n : out) {
      const std::size_t len = s_->rules(n.letter)[choose(n)].word.size();
      for (std::size_t i = 0; i < len; ++i) next.push_back(child(n, i));
    }
    out = std::move(next);
  }
  return out;
}

std::size_t InflationTree::expand(const InflationNode& node, std::size_t cap, const ChunkSink& sink) const {
  std::size_t emitted = 0;
  auto emit = [&](std::span<const Letter> chunk) {
    const std::size_t take = std::min(chunk.size(), cap - emitted);
    if (take > 0) sink(chunk.first(take));
    emitted += take;
  };
  if (cap == 0) return 0;
  if (node.level == 0) {
    emit(std::span<const Letter>(&node.letter, 1));
    return emitted;
  }
  struct Frame {
    InflationNode node;
    const Word* word;
    std::size_t next;
  };
  std::vector<Frame> stack;
  stack.push_back({node, &s_->rules(node.letter)[choose(node)].word, 0});
  while (!stack.empty() && emitted < cap) {
    Frame& top = stack.back();
    if (top.node.level == 1) {
      emit(top.word->letters());
      stack.pop_back();
      continue;
    }
    if (top.next == top.word->size()) {
      stack.pop_back();
      continue;
    }
    const InflationNode c = child(top.node, top.next++);
    stack.push_back({c, &s_->rules(c.letter)[choose(c)].word, 0});
  }
  return emitted;
}

std::size_t realize_power_stream(const RandomSubstitution& s, Letter a, unsigned level, std::uint64_t seed,
                                 std::size_t cap, const ChunkSink& sink) {
  if (cap == 0) throw ValidationError("cap must be at least 1");
  InflationTree tree(s, seed);
  return tree.expand(tree.root(a, level), cap, sink);
}

Word realize_power(const RandomSubstitution& s, Letter a, unsigned level, std::uint64_t seed, std::size_t cap) {
  Word w;
  realize_power_stream(s, a, level, seed, cap, [&](std::span<const Letter> chunk) { w.append(chunk); });
  return w;
}

Word level_inf_prefix(const RandomSubstitution& s, unsigned n, std::uint64_t seed) {
  if (!is_primitive(s)) throw ValidationError("level-infinity prefixes need a primitive substitution");
  auto start = find_self_start(s);
  if (!start) throw ValidationError("no letter a with a realisation of s^k(a) starting with a for k <= d");
  InflationTree tree(s, seed, *start);
  Word w;
  tree.expand(tree.pinned_root(n * static_cast<unsigned>(start->period())), SIZE_MAX,
              [&](std::span<const Letter> chunk) { w.append(chunk); });
  return w;
}

}  // namespace rauzy
