#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cloud.hpp"
#include "errors.hpp"
#include "measure.hpp"
#include "svg.hpp"

namespace rauzy {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
  return rows;
}

json int_mat(const IntMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::int64_t> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

void write_json(const std::string& path, const json& j, RunResult& r) {
  write_text(path, j.dump(2) + "\n");
  r.artifacts.push_back(path);
}

std::string symbol(const Alphabet* alphabet, std::size_t a) {
  return alphabet ? alphabet->symbol(static_cast<Letter>(a)) : std::to_string(a + 1);
}

json bounds_json(const PointCloud& c, const Alphabet& alphabet) {
  const BoundsReport b = bounds(c);
  json out = json::array();
  for (std::size_t a = 0; a < c.letters(); ++a) {
    json entry = {{"letter", alphabet.symbol(static_cast<Letter>(a))},
                  {"count", b.counts[a]},
                  {"mass", b.mass_fractions[a]}};
    if (b.counts[a] > 0) {
      entry["min"] = vec(b.min[a]);
      entry["max"] = vec(b.max[a]);
    } else {
      entry["min"] = json::array();
      entry["max"] = json::array();
    }
    out.push_back(entry);
  }
  return out;
}

Letter letter_option(const json& o, const Alphabet& alphabet) {
  if (!o.contains("letter")) return 0;
  const std::string sym = o["letter"].is_string() ? o["letter"].get<std::string>() : std::to_string(o["letter"].get<int>());
  auto a = alphabet.index_of(sym);
  if (!a) throw ValidationError("unknown letter '" + sym + "'");
  return *a;
}

// Largest level whose word fits into `points` letters.
unsigned auto_level(const IntMatrix& m, Letter a, std::size_t points) {
  unsigned level = 0;
  while (level < 200 && power_length(m, a, level + 1) <= static_cast<std::int64_t>(points)) ++level;
  return level;
}

PointCloud markov_from_options(const Model& model, const json& o, std::size_t default_points) {
  MarkovOptions mo;
  mo.letter = letter_option(o, model.sub.alphabet());
  const std::size_t points = o.value("points", default_points);
  mo.level = o.contains("level") ? o["level"].get<unsigned>() : auto_level(model.matrix, mo.letter, points);
  mo.max_points = std::max<std::size_t>(points, 1);
  if (o.contains("level")) mo.max_points = std::max<std::size_t>(mo.max_points, 50'000'000);
  mo.seed = o.value("seed", std::uint64_t{0});
  mo.workers = o.value("workers", 1u);
  return sample_cloud_markov(model.sub, model.chart, mo);
}

std::vector<Eigen::VectorXd> sample_frequencies(std::size_t dim, std::size_t count, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<Eigen::VectorXd> out;
  while (out.size() < count) {
    Eigen::VectorXd k(static_cast<Eigen::Index>(dim));
    for (auto& v : k) v = 2.0 * uniform01(rng) - 1.0;
    if (k.norm() <= 1.0 && k.norm() > 0.0) out.push_back(k);
  }
  return out;
}

void write_cdf_csv(const std::string& path, const EmpiricalMeasure& m, std::size_t samples) {
  const CDFCurve c = cdf(m);
  std::string text = "x,F\n";
  const double lo = c.x.front(), hi = c.x.back();
  for (std::size_t i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    text += g12(x) + "," + g12(c(x)) + "\n";
  }
  write_text(path, text);
}

}  // namespace

// ---------------------------------------------------------------- info

json info_json(const Model& model) {
  json j;
  const auto& sub = model.sub;
  j["alphabet"] = sub.alphabet().symbols();
  j["matrix"] = int_mat(model.matrix);
  j["char_poly"] = model.poly.coefficients;
  j["lambda"] = model.pd.lambda;
  j["L"] = vec(model.pd.left);
  j["R"] = vec(model.pd.right);
  j["conjugates"] = json::array();
  for (auto z : model.pd.conjugates) j["conjugates"].push_back(complex_json(z));
  j["classification"] = {{"primitive", model.cls.primitive},
                         {"pisot", model.cls.pisot},
                         {"irreducible", model.cls.irreducible},
                         {"unimodular", model.cls.unimodular},
                         {"compatible", true},
                         {"deterministic", sub.is_deterministic()}};
  j["chart"] = {{"pi", mat(model.chart.pi)}, {"h", mat(model.chart.h)}, {"g", mat(model.chart.g)}};
  j["lattice"] = {{"generators", mat(model.lat.generators)}, {"density", model.lat.density}};
  json first = json::array();
  for (Letter a : eventually_first_letters(sub)) first.push_back(sub.alphabet().symbol(a));
  j["eventually_first_letters"] = first;
  j["edges"] = model.graph.edges().size();
  return j;
}

RunResult run_info(const Model& model, const std::string& out_dir) {
  RunResult r;
  r.summary = info_json(model);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_json(join(out_dir, "info.json"), r.summary, r);
  }
  return r;
}

// ----------------------------------------------------------------- CSV

void write_cloud_csv(const PointCloud& cloud, const std::string& path, const Alphabet* alphabet) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << (cloud.dim() == 1 ? "letter,x\n" : cloud.dim() == 2 ? "letter,x,y\n" : "letter,x,y,z\n");
  std::string line;
  for (std::size_t a = 0; a < cloud.letters(); ++a) {
    const auto pts = cloud.bucket(static_cast<Letter>(a));
    const std::string sym = symbol(alphabet, a);
    for (std::size_t i = 0; i < pts.size(); i += cloud.dim()) {
      line = sym;
      for (std::size_t c = 0; c < cloud.dim(); ++c) line += "," + g12(pts[i + c]);
      line += '\n';
      out << line;
    }
  }
}

PointCloud read_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("letter,", 0) != 0) throw ValidationError("'" + path + "' is not a cloud CSV");
  const std::size_t dim = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  std::vector<std::string> symbols;
  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    auto it = std::find(symbols.begin(), symbols.end(), cell);
    std::size_t idx = static_cast<std::size_t>(it - symbols.begin());
    if (it == symbols.end()) symbols.push_back(cell);
    std::vector<double> x;
    while (std::getline(ss, cell, ',')) {
      try {
        x.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (x.size() != dim) throw ValidationError(path + ":" + std::to_string(lineno) + ": wrong number of columns");
    rows.emplace_back(idx, std::move(x));
  }
  // Letters are ordered by symbol so colours follow the alphabet.
  std::vector<std::size_t> order(symbols.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return symbols[a] < symbols[b]; });
  std::vector<std::size_t> rank(symbols.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  PointCloud cloud(std::max<std::size_t>(symbols.size(), 1), std::max<std::size_t>(dim, 1), Provenance::markov);
  for (const auto& [idx, x] : rows) cloud.add(static_cast<Letter>(rank[idx]), x.data());
  return cloud;
}

// ---------------------------------------------------------------- cloud

RunResult run_cloud(const Model& model, const json& o, const std::string& out_dir) {
  ensure_dir(out_dir);
  RunResult r;
  const std::string mode = o.value("mode", "markov");
  PointCloud cloud(model.letters(), model.dim(), Provenance::markov);
  json s;
  if (mode == "markov") {
    cloud = markov_from_options(model, o, 1'000'000);
  } else if (mode == "enumerate") {
    cloud = enumerate_prefix_language(model.sub, model.chart, o.value("depth", 12u));
    s["depth"] = o.value("depth", 12u);
  } else {
    throw ValidationError("unknown cloud mode '" + mode + "' (markov or enumerate)");
  }
  s["mode"] = mode;
  s["seed"] = o.value("seed", std::uint64_t{0});
  s["total"] = cloud.total();
  s["R"] = vec(model.pd.right);
  s["tiles"] = bounds_json(cloud, model.sub.alphabet());
  const std::string csv = join(out_dir, "cloud.csv");
  write_cloud_csv(cloud, csv, &model.sub.alphabet());
  r.artifacts.push_back(csv);
  r.summary = s;
  write_json(join(out_dir, "cloud.json"), s, r);
  return r;
}

// ----------------------------------------------------------------- gifs

RunResult run_gifs(const Model& model, const json& o, const std::string& out_dir) {
  ensure_dir(out_dir);
  RunResult r;
  json s;
  const auto& alphabet = model.sub.alphabet();
  json edges = json::array();
  for (std::size_t i = 0; i < model.graph.edges().size(); ++i) {
    const Edge& e = model.graph.edge(i);
    edges.push_back({{"from", alphabet.symbol(e.from)},
                     {"to", alphabet.symbol(e.to)},
                     {"prefix", alphabet.format(e.prefix)},
                     {"suffix", alphabet.format(e.suffix)},
                     {"word_prob", e.word_prob},
                     {"probability", model.probs.edge[i]},
                     {"translation", vec(model.maps[i].translation)}});
  }
  s["edges"] = edges;
  s["vertex_sums"] = model.probs.vertex_sums;
  s["separation"] = "not-checked";

  SetIterationOptions so;
  so.depth = o.value("depth", model.dim() == 1 ? 30u : 16u);
  so.dedup = o.value("dedup", model.dim() == 1 ? 1e-4 : 4e-3);
  const PointCloud sets = iterate_sets(model.graph, model.maps, model.dim(), so);
  s["sets"] = {{"depth", so.depth}, {"dedup", so.dedup}, {"tiles", bounds_json(sets, alphabet)}};
  const std::string sets_csv = join(out_dir, "gifs_sets.csv");
  write_cloud_csv(sets, sets_csv, &alphabet);
  r.artifacts.push_back(sets_csv);

  const std::size_t steps = o.value("chaos", std::size_t{0});
  if (steps > 0) {
    ChaosOptions co;
    co.steps = steps;
    co.burn_in = o.value("burn", std::size_t{60});
    co.seed = o.value("seed", std::uint64_t{0});
    const PointCloud chaos = chaos_game(model.graph, model.probs, model.maps, model.pd, co);
    json occupation = json::array(), stationary = json::array();
    for (std::size_t a = 0; a < model.letters(); ++a) {
      occupation.push_back(static_cast<double>(chaos.count(static_cast<Letter>(a))) / static_cast<double>(chaos.total()));
      stationary.push_back(model.pd.left[static_cast<Eigen::Index>(a)] * model.pd.right[static_cast<Eigen::Index>(a)]);
    }
    s["chaos"] = {{"steps", co.steps},
                  {"burn_in", co.burn_in},
                  {"seed", co.seed},
                  {"occupation", occupation},
                  {"stationary", stationary},
                  {"tiles", bounds_json(chaos, alphabet)}};
    const std::string chaos_csv = join(out_dir, "gifs_chaos.csv");
    write_cloud_csv(chaos, chaos_csv, &alphabet);
    r.artifacts.push_back(chaos_csv);
  }
  r.summary = s;
  write_json(join(out_dir, "gifs.json"), s, r);
  return r;
}

// -------------------------------------------------------------- measure

RunResult run_measure(const Model& model, const json& o, const std::string& out_dir) {
  ensure_dir(out_dir);
  RunResult r;
  json s;
  const auto& alphabet = model.sub.alphabet();
  const std::size_t d = model.letters(), dim = model.dim();
  const std::uint64_t seed = o.value("seed", std::uint64_t{0});
  const std::size_t bins = o.value("bins", dim == 1 ? std::size_t{512} : std::size_t{128});

  const PointCloud markov = markov_from_options(model, o, 1'000'000);
  const auto measures = empirical_measure(markov);
  json masses = json::array();
  for (std::size_t a = 0; a < d; ++a)
    masses.push_back({{"letter", alphabet.symbol(static_cast<Letter>(a))},
                      {"mass", measures[a].mass()},
                      {"R", model.pd.right[static_cast<Eigen::Index>(a)]},
                      {"deviation", std::abs(measures[a].mass() - model.pd.right[static_cast<Eigen::Index>(a)])}});
  s["points"] = markov.total();
  s["seed"] = seed;
  s["masses"] = masses;

  // Fourier cocycle at 0 and at sampled frequencies in the unit ball.
  const unsigned depth = o.value("cocycle_depth", 60u);
  const CocycleResult zero = fourier_cocycle(model, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)), depth);
  double c0_error = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    c0_error = std::max(c0_error, std::abs(zero.c[static_cast<Eigen::Index>(a)] - model.pd.right[static_cast<Eigen::Index>(a)]));
  json cocycle = {{"depth", depth}, {"residual_at_zero", zero.residual}, {"c0_error", c0_error}};
  json samples = json::array();
  for (const auto& k : sample_frequencies(dim, o.value("frequencies", std::size_t{10}), derive_seed(seed, 0xC0C0ULL))) {
    const CocycleResult cr = fourier_cocycle(model, k, depth);
    double cf_gap = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      cf_gap = std::max(cf_gap, std::abs(empirical_cf(measures[a], k) - cr.c[static_cast<Eigen::Index>(a)]));
    samples.push_back({{"k", vec(k)}, {"residual", cr.residual}, {"cf_gap", cf_gap}});
  }
  cocycle["samples"] = samples;
  s["cocycle"] = cocycle;

  // Independent estimates of the normalised tiles.
  ChaosOptions co;
  co.steps = o.value("chaos", markov.total());
  co.burn_in = o.value("burn", std::size_t{60});
  co.seed = derive_seed(seed, 0xC4A05ULL);
  const PointCloud chaos = chaos_game(model.graph, model.probs, model.maps, model.pd, co);
  const unsigned enum_depth = o.value("depth", dim == 1 ? 14u : 8u);
  const PointCloud enumeration = enumerate_prefix_language(model.sub, model.chart, enum_depth);
  if (dim == 1) {
    json table = json::array();
    for (std::size_t a = 0; a < d; ++a) {
      const auto l = static_cast<Letter>(a);
      const auto mm = normalised_tile(markov, l), mc = normalised_tile(chaos, l), me = normalised_tile(enumeration, l);
      table.push_back({{"letter", alphabet.symbol(l)},
                       {"markov_chaos", mk_distance_1d(mm, mc)},
                       {"markov_enumeration", mk_distance_1d(mm, me)},
                       {"chaos_enumeration", mk_distance_1d(mc, me)}});
      const std::string path = join(out_dir, "cdf_" + alphabet.symbol(l) + ".csv");
      write_cdf_csv(path, mm, bins);
      r.artifacts.push_back(path);
    }
    s["mk"] = table;
  }
  s["enumeration_depth"] = enum_depth;
  s["chaos_steps"] = co.steps;

  // Histogram of every tile on a common grid.
  {
    const EmpiricalMeasure total = total_measure(markov);
    const BoundsReport b = bounds(markov);
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), INFINITY), hi = -lo;
    for (std::size_t a = 0; a < d; ++a)
      if (b.counts[a] > 0) {
        lo = lo.cwiseMin(b.min[a]);
        hi = hi.cwiseMax(b.max[a]);
      }
    std::string text = dim == 1 ? "letter,x,mass\n" : "letter,x,y,mass\n";
    for (std::size_t a = 0; a < d; ++a) {
      const Histogram h = histogram(measures[a], bins, std::make_pair(lo, hi));
      for (std::size_t i = 0; i < h.masses.size(); ++i) {
        if (h.masses[i] == 0.0) continue;
        text += alphabet.symbol(static_cast<Letter>(a));
        if (dim == 1) {
          text += "," + g12(h.lo[0] + (static_cast<double>(i) + 0.5) * h.pitch[0]);
        } else {
          const std::size_t ix = i / h.shape[1], iy = i % h.shape[1];
          text += "," + g12(h.lo[0] + (static_cast<double>(ix) + 0.5) * h.pitch[0]) + "," +
                  g12(h.lo[1] + (static_cast<double>(iy) + 0.5) * h.pitch[1]);
        }
        text += "," + g12(h.masses[i]) + "\n";
      }
    }
    const std::string path = join(out_dir, "measure_hist.csv");
    write_text(path, text);
    r.artifacts.push_back(path);
  }

  // Support size from the set iteration.
  if (dim <= 2) {
    SetIterationOptions so;
    so.depth = o.value("set_depth", dim == 1 ? 30u : 16u);
    so.dedup = o.value("dedup", dim == 1 ? 1e-4 : 4e-3);
    const PointCloud sets = iterate_sets(model.graph, model.maps, dim, so);
    const LebesgueEstimate le = estimate_lebesgue(sets, model.lat, o.value("lebesgue_bins", dim == 1 ? std::size_t{1024} : std::size_t{128}));
    s["lebesgue"] = {{"bins", le.bins},
                     {"coarse", le.coarse},
                     {"fine", le.fine},
                     {"fundamental_volume", le.fundamental_volume},
                     {"below_twice_fundamental", le.below_twice_fundamental}};
    s["tiles"] = bounds_json(sets, alphabet);
  }
  r.summary = s;
  write_json(join(out_dir, "measure.json"), s, r);
  return r;
}

// ------------------------------------------------------------- covering

RunResult run_covering(const Model& model, const json& o, const std::string& out_dir) {
  ensure_dir(out_dir);
  RunResult r;
  const std::size_t dim = model.dim();
  const PointCloud markov = markov_from_options(model, o, 1'000'000);
  const std::size_t bins = o.value("bins", dim == 1 ? std::size_t{64} : std::size_t{32});
  const CoveringReport cov = covering_check(total_measure(markov), model.lat, bins);
  std::vector<std::vector<int>> freqs;
  if (dim == 1) {
    freqs = {{1}, {2}, {3}};
  } else {
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<int> e(dim, 0);
      e[i] = 1;
      freqs.push_back(e);
    }
    freqs.push_back(std::vector<int>(dim, 1));
  }
  const WeylReport weyl = torus_equidistribution(markov, model.lat, freqs);
  json s = {{"points", markov.total()},
            {"bins", cov.shape},
            {"density", cov.density},
            {"folded_mass", cov.folded_mass},
            {"max_deviation", cov.max_deviation},
            {"mean_deviation", cov.mean_deviation},
            {"weyl", {{"frequencies", weyl.frequencies}, {"sums", weyl.sums}}}};
  std::string text = dim == 1 ? "bin,relative_density\n" : "bin_x,bin_y,relative_density\n";
  for (std::size_t i = 0; i < cov.relative_density.size(); ++i) {
    if (dim == 1)
      text += std::to_string(i);
    else
      text += std::to_string(i / bins) + "," + std::to_string(i % bins);
    text += "," + g12(cov.relative_density[i]) + "\n";
  }
  const std::string path = join(out_dir, "covering_hist.csv");
  write_text(path, text);
  r.artifacts.push_back(path);
  r.summary = s;
  write_json(join(out_dir, "covering.json"), s, r);
  return r;
}

// ---------------------------------------------------------------- sweep

RunResult run_sweep(const SubstitutionTemplate& tpl, const json& o, const std::string& out_dir) {
  ensure_dir(out_dir);
  RunResult r;
  SweepOptions so;
  if (o.contains("p")) {
    so.p_values = o["p"].get<std::vector<double>>();
  } else {
    for (int i = 1; i <= 9; ++i) so.p_values.push_back(i / 10.0);
  }
  const Model probe = build_model(tpl.instantiate(so.p_values.front()));
  so.letter = letter_option(o, tpl.alphabet());
  so.level = o.contains("level") ? o["level"].get<unsigned>()
                                 : auto_level(probe.matrix, so.letter, o.value("points", std::size_t{1'000'000}));
  so.seed = o.value("seed", std::uint64_t{0});
  so.workers = o.value("workers", 1u);
  if (probe.dim() > 1) so.frequencies = sample_frequencies(probe.dim(), 8, derive_seed(so.seed, 0x5EEDULL));
  const SweepReport sw = measure_sweep(tpl, so);
  json s = {{"p", sw.p_values},   {"level", so.level},          {"seed", so.seed},
            {"metric", sw.metric}, {"masses", sw.masses},        {"consecutive", sw.consecutive},
            {"full_range", sw.full_range}, {"to_low_end", sw.to_low_end}, {"to_high_end", sw.to_high_end},
            {"dominated", sw.dominated}, {"letter", tpl.alphabet().symbol(so.letter)}};
  std::string text = "p,to_next,to_low_end,to_high_end\n";
  for (std::size_t i = 0; i < sw.p_values.size(); ++i) {
    text += g12(sw.p_values[i]) + "," + (i < sw.consecutive.size() ? g12(sw.consecutive[i]) : std::string()) + "," +
            g12(sw.to_low_end[i]) + "," + g12(sw.to_high_end[i]) + "\n";
  }
  const std::string path = join(out_dir, "sweep.csv");
  write_text(path, text);
  r.artifacts.push_back(path);
  r.summary = s;
  write_json(join(out_dir, "sweep.json"), s, r);
  return r;
}

// ---------------------------------------------------------------- sadic

RunResult run_sadic(const CompatibleFamily& f, const json& o, const std::string& out_dir) {
  ensure_dir(out_dir);
  RunResult r;
  json s;
  const Alphabet& alphabet = f.members.front().alphabet();
  s["members"] = f.names;
  s["matrix"] = int_mat(f.matrix);
  const std::size_t depth = o.value("depth", std::size_t{20});
  s["depth"] = depth;
  if (o.contains("directive")) {
    const DirectiveSequence dseq = DirectiveSequence::parse(o["directive"].get<std::string>(), f.size());
    const auto adapted = adapted_letter_sequence(f, dseq, depth);
    const Word w = limiting_prefix(f, dseq, adapted, depth);
    json letters = json::array(), directive = json::array();
    for (Letter a : adapted) letters.push_back(alphabet.symbol(a));
    for (std::size_t n = 1; n <= depth; ++n) directive.push_back(dseq.at(n));
    const PointCloud cloud = project_prefixes(f.chart, w, Provenance::sadic);
    s["mode"] = "directive";
    s["directive"] = directive;
    s["adapted_letters"] = letters;
    s["prefix_length"] = w.size();
    s["prefix_head"] = alphabet.format(w.prefix(64));
    s["tiles"] = bounds_json(cloud, alphabet);
    json cont = json::array();
    for (const auto& e : continuity_report(f, dseq, depth, o.value("continuity_max", std::size_t{12})))
      cont.push_back({{"agree", e.agree}, {"distance", e.global}, {"per_letter", e.per_letter}});
    s["continuity"] = cont;
    const std::string csv = join(out_dir, "sadic_cloud.csv");
    write_cloud_csv(cloud, csv, &alphabet);
    r.artifacts.push_back(csv);
  } else {
    SadicSampling opt;
    opt.weights = o.contains("bernoulli") ? o["bernoulli"].get<std::vector<double>>()
                                          : std::vector<double>(f.size(), 1.0 / static_cast<double>(f.size()));
    opt.samples = o.value("samples", std::size_t{64});
    opt.depth = depth;
    opt.seed = o.value("seed", std::uint64_t{0});
    opt.envelope_level = o.value("envelope_level", 25u);
    opt.workers = o.value("workers", 1u);
    const UnionReport u = union_vs_envelope(f, opt);
    const AveragedReport avg = averaged_measure(f, opt);
    s["mode"] = "bernoulli";
    s["weights"] = opt.weights;
    s["samples"] = opt.samples;
    s["seed"] = opt.seed;
    s["union"] = {{"union_to_envelope", u.union_to_envelope},
                  {"envelope_to_union", u.envelope_to_union},
                  {"envelope_to_union_by_prefix", u.envelope_to_union_by_prefix}};
    s["average"] = {{"masses", avg.masses}, {"R", vec(f.pd.right)}, {"mk", avg.mk}};
    if (f.chart.dim() == 1) {
      for (std::size_t a = 0; a < f.letters(); ++a) {
        const std::string path = join(out_dir, "sadic_average_cdf_" + alphabet.symbol(static_cast<Letter>(a)) + ".csv");
        write_cdf_csv(path, avg.average[a].normalised(), 512);
        r.artifacts.push_back(path);
      }
    }
  }
  r.summary = s;
  write_json(join(out_dir, "sadic.json"), s, r);
  return r;
}

// --------------------------------------------------------------- render

RunResult run_render(const std::string& csv_path, const json& o, const std::string& svg_path) {
  const PointCloud cloud = read_cloud_csv(csv_path);
  SvgOptions so;
  so.width = o.value("width", 800);
  so.height = o.value("height", 800);
  so.max_points = o.value("max_points", std::size_t{60000});
  const fs::path parent = fs::path(svg_path).parent_path();
  if (!parent.empty()) ensure_dir(parent.string());
  write_text(svg_path, render_svg(cloud, so));
  RunResult r;
  r.summary = {{"input", csv_path}, {"points", cloud.total()}, {"letters", cloud.letters()}};
  r.artifacts.push_back(svg_path);
  return r;
}

}  // namespace rauzy
