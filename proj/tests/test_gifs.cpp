#include <doctest.h>

#include <algorithm>
#include <set>
#include <tuple>

#include "errors.hpp"
#include "gifs.hpp"
#include "support.hpp"

using namespace rauzy;

namespace {

using Label = std::tuple<int, int, std::string, std::string>;  // from, to, prefix, suffix (1-based)

std::multiset<Label> labels(const RandomSubstitution& s, const PrefixSuffixGraph& g) {
  std::multiset<Label> out;
  for (const auto& e : g.edges())
    out.insert({e.from + 1, e.to + 1, s.alphabet().format(e.prefix), s.alphabet().format(e.suffix)});
  return out;
}

// Edge labels straight from the definition: one per letter position of each realisation.
std::multiset<Label> oracle_labels(const RandomSubstitution& s) {
  std::multiset<Label> out;
  for (Letter b = 0; b < s.size(); ++b)
    for (const auto& r : s.rules(b)) {
      const std::string v = s.alphabet().format(r.word);
      for (std::size_t i = 0; i < v.size(); ++i)
        out.insert({*s.alphabet().index_of(v.substr(i, 1)) + 1, b + 1, v.substr(0, i), v.substr(i + 1)});
    }
  return out;
}

std::vector<double> sorted_bucket(const PointCloud& c, Letter a) {
  const auto b = c.bucket(a);
  std::vector<double> v(b.begin(), b.end());
  std::sort(v.begin(), v.end());
  return v;
}

double directed_1d(const std::vector<double>& a, const std::vector<double>& sorted_b) {
  double worst = 0.0;
  for (double x : a) {
    auto it = std::lower_bound(sorted_b.begin(), sorted_b.end(), x);
    double best = INFINITY;
    if (it != sorted_b.end()) best = *it - x;
    if (it != sorted_b.begin()) best = std::min(best, x - *std::prev(it));
    worst = std::max(worst, best);
  }
  return worst;
}

const std::vector<std::string> kFixtures = {"fib.toml", "twisted.toml", "rfib.toml", "trib.toml", "rtrib.toml", "ex72.toml"};

}  // namespace

TEST_CASE("prefix-suffix graph of random Fibonacci") {
  const auto s = test::load("rfib.toml");
  const auto g = prefix_suffix_graph(s);
  CHECK(g.edges().size() == 5);
  const std::multiset<Label> expected = {
      {1, 1, "", "2"}, {1, 1, "2", ""}, {1, 2, "", ""}, {2, 1, "1", ""}, {2, 1, "", "1"}};
  CHECK(labels(s, g) == expected);
}

TEST_CASE("edge counts") {
  CHECK(prefix_suffix_graph(test::load("fib.toml")).edges().size() == 3);
  CHECK(prefix_suffix_graph(test::load("rtrib.toml")).edges().size() == 7);
  for (const auto& name : kFixtures) {
    INFO(name);
    const auto s = test::load(name);
    const auto g = prefix_suffix_graph(s);
    CHECK(labels(s, g) == oracle_labels(s));
    for (Letter a = 0; a < s.size(); ++a) {
      std::size_t expected = 0;
      for (Letter b = 0; b < s.size(); ++b)
        for (const auto& r : s.rules(b)) expected += static_cast<std::size_t>(abelianise(r.word, s.size())[a]);
      CHECK(g.out_edges(a).size() == expected);
    }
    for (const auto& e : g.edges()) {
      Word w = e.prefix;
      w.append(std::span<const Letter>(&e.from, 1));
      w.append(e.suffix.letters());
      CHECK(w == s.rules(e.to)[e.rule_index].word);
      CHECK(e.word_prob == s.rules(e.to)[e.rule_index].probability);
    }
  }
}

TEST_CASE("random Fibonacci maps") {
  const auto m = test::model("rfib.toml");
  const double t = test::tau;
  for (std::size_t i = 0; i < m.graph.edges().size(); ++i) {
    const Edge& e = m.graph.edge(i);
    const auto& f = m.maps[i];
    CHECK(f.linear(0, 0) == doctest::Approx(-1 / t).epsilon(1e-12));
    const std::string p = m.sub.alphabet().format(e.prefix);
    if (p.empty()) CHECK(f.translation[0] == 0.0);
    if (p == "2") CHECK(f.translation[0] == doctest::Approx(-1 / t).epsilon(1e-12));
    if (p == "1") CHECK(f.translation[0] == doctest::Approx(1 / (t * t)).epsilon(1e-12));
  }
}

TEST_CASE("edge probabilities") {
  const auto m = test::model("rfib.toml");
  const double t = test::tau;
  std::multiset<long> from1, from2;
  for (std::size_t i = 0; i < m.graph.edges().size(); ++i) {
    const long key = std::lround(m.probs.edge[i] * 1e9);
    (m.graph.edge(i).from == 0 ? from1 : from2).insert(key);
  }
  CHECK(from1 == std::multiset<long>{std::lround(0.5 / t * 1e9), std::lround(0.5 / t * 1e9), std::lround(1e9 / (t * t))});
  CHECK(from2 == std::multiset<long>{500000000, 500000000});
  for (const auto& name : kFixtures) {
    INFO(name);
    const auto md = test::model(name);
    for (Letter a = 0; a < md.letters(); ++a) {
      double sum = 0.0;
      for (auto i : md.graph.out_edges(a)) {
        const Edge& e = md.graph.edge(i);
        const double expected = e.word_prob * md.pd.right[e.to] / (md.pd.lambda * md.pd.right[a]);
        CHECK(md.probs.edge[i] == doctest::Approx(expected).epsilon(1e-14));
        sum += md.probs.edge[i];
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("stationarity of L_a R_a") {
  for (const auto& name : kFixtures) {
    INFO(name);
    const auto md = test::model(name);
    const std::size_t d = md.letters();
    Eigen::VectorXd pi(static_cast<Eigen::Index>(d)), flow = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t a = 0; a < d; ++a) pi[a] = md.pd.left[a] * md.pd.right[a];
    CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < md.graph.edges().size(); ++i) {
      const Edge& e = md.graph.edge(i);
      flow[e.to] += pi[e.from] * md.probs.edge[i];
    }
    CHECK((flow - pi).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("set iteration") {
  const auto rfib = test::model("rfib.toml");
  const double t = test::tau;
  SetIterationOptions zero;
  zero.depth = 0;
  const auto seed = iterate_sets(rfib.graph, rfib.maps, 1, zero);
  for (Letter a = 0; a < 2; ++a) {
    REQUIRE(seed.count(a) == 1);
    CHECK(seed.point(a, 0)[0] == 0.0);
  }
  const auto sets = iterate_sets(rfib.graph, rfib.maps, 1, {});
  const auto b1 = sorted_bucket(sets, 0), b2 = sorted_bucket(sets, 1);
  CHECK(b1.front() >= -1 - 1e-3);
  CHECK(b1.back() <= 1 / t + 1e-3);
  CHECK(b1.front() == doctest::Approx(-1.0).epsilon(1e-2));
  CHECK(b1.back() == doctest::Approx(1 / t).epsilon(1e-2));
  CHECK(b2.front() == doctest::Approx(-1 / (t * t)).epsilon(1e-2));
  CHECK(b2.back() == doctest::Approx(1.0).epsilon(1e-2));
  const auto fib = test::model("fib.toml");
  const auto fs = iterate_sets(fib.graph, fib.maps, 1, {});
  const auto f1 = sorted_bucket(fs, 0);
  CHECK(std::abs(f1.front() + 1 / (t * t)) < 1e-2);
  CHECK(std::abs(f1.back() - 1 / (t * t * t)) < 1e-2);
  // Intervals: no gap wider than a few dedup cells.
  double gap = 0.0;
  for (std::size_t i = 1; i < f1.size(); ++i) gap = std::max(gap, f1[i] - f1[i - 1]);
  CHECK(gap < 1e-3);
}

TEST_CASE("set iteration is self-consistent") {
  for (const std::string name : {"rfib.toml", "ex72.toml", "twisted.toml"}) {
    INFO(name);
    const auto md = test::model(name);
    SetIterationOptions opt;
    opt.depth = 30;
    const auto sets = iterate_sets(md.graph, md.maps, 1, opt);
    // One more application of the set operator, done by hand.
    for (Letter a = 0; a < md.letters(); ++a) {
      std::vector<double> image;
      for (auto i : md.graph.out_edges(a)) {
        const Edge& e = md.graph.edge(i);
        for (double x : sets.bucket(e.to)) image.push_back(md.maps[i].linear(0, 0) * x + md.maps[i].translation[0]);
      }
      std::sort(image.begin(), image.end());
      const auto mine = sorted_bucket(sets, a);
      const double c = std::pow(1 / md.pd.lambda, 30) * 4.0;
      CHECK(directed_1d(mine, image) <= 2 * (c + opt.dedup));
      CHECK(directed_1d(image, mine) <= 2 * (c + opt.dedup));
    }
  }
}

TEST_CASE("set iteration point cap") {
  const auto md = test::model("rtrib.toml");
  SetIterationOptions opt;
  opt.depth = 30;
  opt.dedup = 1e-6;
  opt.cap = 10000;
  CHECK_THROWS_AS(iterate_sets(md.graph, md.maps, 2, opt), LimitError);
}

TEST_CASE("chaos game") {
  const auto md = test::model("rfib.toml");
  const double t = test::tau;
  ChaosOptions opt;
  opt.steps = 100000;
  opt.seed = 17;
  const auto c = chaos_game(md.graph, md.probs, md.maps, md.pd, opt);
  CHECK(c.total() == opt.steps - opt.burn_in);
  const auto b1 = sorted_bucket(c, 0);
  CHECK(b1.front() >= -1 - 1e-6);
  CHECK(b1.back() <= 1 / t + 1e-6);
  for (Letter a = 0; a < 2; ++a) {
    const double occupation = static_cast<double>(c.count(a)) / static_cast<double>(c.total());
    CHECK(std::abs(occupation - md.pd.left[a] * md.pd.right[a]) < 0.01);
  }
  // Same seed, same samples.
  const auto again = chaos_game(md.graph, md.probs, md.maps, md.pd, opt);
  CHECK(std::equal(c.bucket(0).begin(), c.bucket(0).end(), again.bucket(0).begin(), again.bucket(0).end()));
}

TEST_CASE("chaos game inside the set-iteration hull") {
  for (const std::string name : {"rfib.toml", "ex72.toml", "rtrib.toml"}) {
    INFO(name);
    const auto md = test::model(name);
    SetIterationOptions so;
    so.depth = md.dim() == 1 ? 30 : 14;
    so.dedup = md.dim() == 1 ? 1e-4 : 4e-3;
    const auto sets = iterate_sets(md.graph, md.maps, md.dim(), so);
    ChaosOptions co;
    co.steps = 20000;
    co.seed = 5;
    const auto chaos = chaos_game(md.graph, md.probs, md.maps, md.pd, co);
    for (Letter a = 0; a < md.letters(); ++a) {
      Eigen::VectorXd lo = Eigen::VectorXd::Constant(md.dim(), INFINITY), hi = -lo;
      for (std::size_t i = 0; i < sets.count(a); ++i) {
        const auto x = sets.point(a, i);
        for (std::size_t k = 0; k < md.dim(); ++k) {
          lo[k] = std::min(lo[k], x[k]);
          hi[k] = std::max(hi[k], x[k]);
        }
      }
      const double slack = 4.0 * std::pow(spectral_radius(md.chart.h), so.depth) * 4.0 + 2 * so.dedup;
      for (std::size_t i = 0; i < chaos.count(a); ++i) {
        const auto x = chaos.point(a, i);
        for (std::size_t k = 0; k < md.dim(); ++k) {
          CHECK(x[k] >= lo[k] - slack);
          CHECK(x[k] <= hi[k] + slack);
        }
      }
    }
  }
}
