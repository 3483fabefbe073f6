#include "sadic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "config.hpp"
#include "errors.hpp"

namespace rauzy {

CompatibleFamily compatible_family(std::vector<RandomSubstitution> members, std::vector<std::string> names) {
  if (members.empty()) throw ValidationError("a family needs at least one member");
  if (names.empty())
    for (std::size_t i = 0; i < members.size(); ++i) names.push_back("member" + std::to_string(i));
  if (names.size() != members.size()) throw ValidationError("one name per family member required");
  const std::size_t d = members.front().size();
  for (const auto& m : members) {
    if (m.size() != d) throw ValidationError("family members have different alphabet sizes");
    if (!m.is_deterministic()) throw ValidationError("family members must be deterministic substitutions");
  }
  CompatibleFamily f;
  f.matrix = integer_matrix(members.front());
  for (std::size_t i = 1; i < members.size(); ++i)
    if (integer_matrix(members[i]) != f.matrix)
      throw ValidationError("member '" + names[i] + "' has a different substitution matrix");
  if (!is_primitive(members.front())) throw ValidationError("family matrix is not primitive");
  const CharPoly poly = char_poly(f.matrix);
  f.pd = perron_data(f.matrix.cast<double>());
  const Classification cls = classify(f.matrix, poly, f.pd);
  if (!cls.pisot || !cls.irreducible) throw NumericalError("family matrix is not irreducible Pisot");
  f.chart = build_chart(f.matrix.cast<double>(), f.pd);
  f.lat = lattice(f.chart);
  for (const auto& m : members) {
    f.graphs.push_back(prefix_suffix_graph(m));
    f.maps.push_back(gifs_maps(f.graphs.back(), f.chart));
  }
  f.members = std::move(members);
  f.names = std::move(names);
  return f;
}

CompatibleFamily parse_family(std::string_view text) {
  const nlohmann::json doc = config::parse_toml(text);
  if (!doc.contains("alphabet") || !doc["alphabet"].is_array()) throw ValidationError("family needs an 'alphabet' array");
  std::vector<std::string> symbols;
  for (const auto& s : doc["alphabet"]) {
    if (!s.is_string()) throw ValidationError("alphabet entries must be strings");
    symbols.push_back(s.get<std::string>());
  }
  const Alphabet alphabet(symbols);
  if (!doc.contains("member") || !doc["member"].is_array()) throw ValidationError("family needs [[member]] tables");
  std::vector<RandomSubstitution> members;
  std::vector<std::string> names;
  for (const auto& m : doc["member"]) {
    const std::string name = m.value("name", "member" + std::to_string(members.size()));
    if (!m.contains("images") || !m["images"].is_object())
      throw ValidationError("member '" + name + "' needs images = {\"1\" = \"...\", ...}");
    std::vector<std::vector<Realisation>> rules(alphabet.size());
    for (const auto& [key, value] : m["images"].items()) {
      auto a = alphabet.index_of(key);
      if (!a) throw ValidationError("member '" + name + "' maps unknown letter '" + key + "'");
      if (!value.is_string()) throw ValidationError("member '" + name + "' image of '" + key + "' must be a string");
      rules[*a] = {{alphabet.parse(value.get<std::string>()), 1.0}};
    }
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      if (rules[a].empty())
        throw ValidationError("member '" + name + "' has no image for '" + alphabet.symbol(static_cast<Letter>(a)) + "'");
    members.emplace_back(alphabet, std::move(rules));
    names.push_back(name);
  }
  return compatible_family(std::move(members), std::move(names));
}

CompatibleFamily load_family(const std::string& path) { return parse_family(config::read_file(path)); }

// ------------------------------------------------------------- directives

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t parse_index(const std::string& token, std::size_t members) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(token, &pos);
  } catch (const std::exception&) {
    throw ValidationError("bad directive entry '" + token + "'");
  }
  if (pos != token.size()) throw ValidationError("bad directive entry '" + token + "'");
  if (v >= members) throw ValidationError("directive index " + token + " out of range");
  return v;
}

}  // namespace

DirectiveSequence DirectiveSequence::parse(std::string_view text, std::size_t members) {
  DirectiveSequence seq;
  std::string body = trim(text);
  const auto open = body.find('(');
  std::string head = body, tail;
  if (open != std::string::npos) {
    const auto close = body.find(")*", open);
    if (close == std::string::npos || trim(std::string_view(body).substr(close + 2)) != "")
      throw ValidationError("periodic block must be written (i,j,...)* at the end");
    head = body.substr(0, open);
    tail = body.substr(open + 1, close - open - 1);
  }
  auto split = [&](const std::string& s, std::vector<std::size_t>& out) {
    std::size_t start = 0;
    while (start <= s.size()) {
      auto comma = s.find(',', start);
      if (comma == std::string::npos) comma = s.size();
      const std::string tok = trim(std::string_view(s).substr(start, comma - start));
      if (!tok.empty()) out.push_back(parse_index(tok, members));
      start = comma + 1;
    }
  };
  split(head, seq.prefix_);
  split(tail, seq.period_);
  if (open != std::string::npos && seq.period_.empty()) throw ValidationError("empty periodic block");
  if (seq.prefix_.empty() && seq.period_.empty()) throw ValidationError("empty directive sequence");
  if (seq.period_.empty()) seq.period_ = {seq.prefix_.back()};
  return seq;
}

DirectiveSequence DirectiveSequence::bernoulli(std::vector<double> weights, std::uint64_t seed) {
  if (weights.empty()) throw ValidationError("Bernoulli directive needs weights");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("Bernoulli weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("Bernoulli weights must sum to 1");
  DirectiveSequence seq;
  double acc = 0.0;
  for (double w : weights) seq.weights_.push_back(acc += w / sum);
  seq.weights_.back() = 1.0;
  seq.seed_ = seed;
  return seq;
}

DirectiveSequence DirectiveSequence::periodic(std::vector<std::size_t> prefix, std::vector<std::size_t> period,
                                               std::size_t members) {
  if (period.empty()) throw ValidationError("empty periodic block");
  for (auto v : prefix)
    if (v >= members) throw ValidationError("directive index out of range");
  for (auto v : period)
    if (v >= members) throw ValidationError("directive index out of range");
  DirectiveSequence seq;
  seq.prefix_ = std::move(prefix);
  seq.period_ = std::move(period);
  return seq;
}

std::size_t DirectiveSequence::at(std::size_t n) const {
  if (n == 0) throw ValidationError("directive positions start at 1");
  if (is_bernoulli()) {
    // A pure function of (seed, n): extending the depth never changes earlier draws.
    const double u = unit_double(splitmix64(derive_seed(seed_, n)));
    const auto it = std::upper_bound(weights_.begin(), weights_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - weights_.begin()), weights_.size() - 1);
  }
  if (n <= prefix_.size()) return prefix_[n - 1];
  return period_[(n - prefix_.size() - 1) % period_.size()];
}

std::vector<Letter> adapted_letter_sequence(const CompatibleFamily& f, const DirectiveSequence& dseq, std::size_t depth) {
  const std::size_t d = f.letters();
  // reach[n]: letters that can be a_n for some continuation down to depth.
  std::vector<std::vector<bool>> reach(depth + 1, std::vector<bool>(d, false));
  std::fill(reach[depth].begin(), reach[depth].end(), true);
  for (std::size_t n = depth; n >= 1; --n) {
    const std::size_t m = dseq.at(n);
    for (std::size_t b = 0; b < d; ++b)
      if (reach[n][b]) reach[n - 1][f.image(m, static_cast<Letter>(b)).front()] = true;
    if (std::none_of(reach[n - 1].begin(), reach[n - 1].end(), [](bool x) { return x; }))
      throw ValidationError("no adapted letter sequence at level " + std::to_string(n - 1));
  }
  std::vector<Letter> a;
  for (std::size_t l = 0; l < d; ++l)
    if (reach[0][l]) {
      a.push_back(static_cast<Letter>(l));
      break;
    }
  for (std::size_t n = 1; n <= depth; ++n) {
    const std::size_t m = dseq.at(n);
    bool found = false;
    for (std::size_t b = 0; b < d && !found; ++b) {
      if (reach[n][b] && f.image(m, static_cast<Letter>(b)).front() == a.back()) {
        a.push_back(static_cast<Letter>(b));
        found = true;
      }
    }
    if (!found) throw ValidationError("no adapted letter sequence at level " + std::to_string(n));
  }
  return a;
}

Word limiting_prefix(const CompatibleFamily& f, const DirectiveSequence& dseq, const std::vector<Letter>& adapted,
                     std::size_t n) {
  if (adapted.size() <= n) throw ValidationError("adapted sequence shorter than the requested depth");
  Word w{adapted[n]};
  for (std::size_t j = n; j >= 1; --j) {
    const std::size_t m = dseq.at(j);
    Word next;
    for (Letter c : w.letters()) next += f.image(m, c);
    w = std::move(next);
  }
  return w;
}

PointCloud sadic_cloud(const CompatibleFamily& f, const DirectiveSequence& dseq, std::size_t n) {
  const auto adapted = adapted_letter_sequence(f, dseq, n);
  return project_prefixes(f.chart, limiting_prefix(f, dseq, adapted, n), Provenance::sadic);
}

std::vector<ContinuityEntry> continuity_report(const CompatibleFamily& f, const DirectiveSequence& dseq, std::size_t n,
                                               std::size_t max_agree) {
  std::vector<ContinuityEntry> out;
  if (f.size() < 2) return out;
  const PointCloud base = sadic_cloud(f, dseq, n);
  for (std::size_t agree = 0; agree <= std::min(max_agree, n); ++agree) {
    std::vector<std::size_t> head, block;
    for (std::size_t j = 1; j <= n; ++j) (j <= agree ? head : block).push_back(j <= agree ? dseq.at(j) : (dseq.at(j) + 1) % f.size());
    if (block.empty()) block.push_back(dseq.at(n + 1));
    const auto other = DirectiveSequence::periodic(head, block, f.size());
    const HausdorffReport h = hausdorff_distance(base, sadic_cloud(f, other, n));
    out.push_back({agree, h.per_letter, h.global});
  }
  return out;
}

std::vector<EmpiricalMeasure> sadic_measure_operator(const CompatibleFamily& f, std::size_t member,
                                                     const std::vector<EmpiricalMeasure>& measures, std::size_t cap,
                                                     std::size_t bins) {
  if (member >= f.size()) throw ValidationError("family member index out of range");
  if (measures.size() != f.letters()) throw ValidationError("one measure per letter required");
  for (std::size_t a = 0; a < f.letters(); ++a)
    if (std::abs(measures[a].mass() - f.pd.right[static_cast<Eigen::Index>(a)]) > 1e-9)
      throw ValidationError("input measures must carry masses R");
  const std::vector<double> weights(f.graphs[member].edges().size(), 1.0 / f.pd.lambda);
  auto out = pushforward(f.graphs[member], f.maps[member], weights, measures, cap, bins);
  for (std::size_t a = 0; a < f.letters(); ++a)
    if (std::abs(out[a].mass() - f.pd.right[static_cast<Eigen::Index>(a)]) > 1e-9)
      throw NumericalError("measure operator drifted from masses R");
  return out;
}

RandomSubstitution derived_substitution(const CompatibleFamily& f, const std::vector<double>& weights) {
  if (weights.size() != f.size()) throw ValidationError("one weight per family member required");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ValidationError("family weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("family weights must sum to 1");
  std::vector<std::vector<Realisation>> rules(f.letters());
  for (std::size_t a = 0; a < f.letters(); ++a) {
    for (std::size_t m = 0; m < f.size(); ++m) {
      if (weights[m] == 0.0) continue;
      const Word& u = f.image(m, static_cast<Letter>(a));
      auto it = std::find_if(rules[a].begin(), rules[a].end(), [&](const Realisation& r) { return r.word == u; });
      if (it == rules[a].end())
        rules[a].push_back({u, weights[m] / sum});
      else
        it->probability += weights[m] / sum;
    }
  }
  return RandomSubstitution(f.members.front().alphabet(), std::move(rules), 1e-9);
}

RandomSubstitution enveloping(const CompatibleFamily& f) {
  return derived_substitution(f, std::vector<double>(f.size(), 1.0 / static_cast<double>(f.size())));
}

namespace {

PointCloud envelope_cloud(const CompatibleFamily& f, const RandomSubstitution& env, const SadicSampling& opt) {
  MarkovOptions mo;
  mo.level = opt.envelope_level;
  mo.seed = derive_seed(opt.seed, 0x454E56ULL);
  mo.workers = opt.workers;
  return sample_cloud_markov(env, f.chart, mo);
}

DirectiveSequence draw(const SadicSampling& opt, std::size_t i) {
  return DirectiveSequence::bernoulli(opt.weights, derive_seed(opt.seed, i));
}

}  // namespace

UnionReport union_vs_envelope(const CompatibleFamily& f, const SadicSampling& opt) {
  if (opt.samples == 0) throw ValidationError("union report needs at least one sample");
  const PointCloud envelope = envelope_cloud(f, enveloping(f), opt);
  PointCloud joined(f.letters(), f.chart.dim(), Provenance::sadic);
  UnionReport r;
  r.samples = opt.samples;
  std::size_t next_report = 1;
  for (std::size_t i = 0; i < opt.samples; ++i) {
    joined.append(sadic_cloud(f, draw(opt, i), opt.depth));
    if (i + 1 == next_report || i + 1 == opt.samples) {
      r.envelope_to_union_by_prefix.push_back(directed_distance(envelope, joined).global);
      next_report *= 2;
    }
  }
  r.union_to_envelope = directed_distance(joined, envelope).per_letter;
  r.envelope_to_union = directed_distance(envelope, joined).per_letter;
  return r;
}

AveragedReport averaged_measure(const CompatibleFamily& f, const SadicSampling& opt) {
  if (opt.samples == 0) throw ValidationError("averaged measure needs at least one sample");
  const std::size_t d = f.letters();
  AveragedReport r;
  r.average.resize(d);
  for (auto& m : r.average) m.dim = f.chart.dim();
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const auto parts = empirical_measure(sadic_cloud(f, draw(opt, i), opt.depth));
    for (std::size_t a = 0; a < d; ++a) {
      r.average[a].points.insert(r.average[a].points.end(), parts[a].points.begin(), parts[a].points.end());
      for (double w : parts[a].weights) r.average[a].weights.push_back(w / static_cast<double>(opt.samples));
    }
  }
  r.envelope = empirical_measure(envelope_cloud(f, derived_substitution(f, opt.weights), opt));
  for (std::size_t a = 0; a < d; ++a) {
    r.masses.push_back(r.average[a].mass());
    if (f.chart.dim() == 1 && r.average[a].size() > 0 && r.envelope[a].size() > 0)
      r.mk.push_back(mk_distance_1d(r.average[a].normalised(), r.envelope[a].normalised()));
  }
  return r;
}

}  // namespace rauzy
