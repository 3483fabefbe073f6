// rauzy: Rauzy fractals and measures of random substitutions.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rauzy/rauzy.h"

using nlohmann::json;

namespace {

struct Failure {
  rauzy_status status;
};

void check(rauzy_status s, const char* context) {
  if (s == RAUZY_OK) return;
  std::fprintf(stderr, "rauzy %s: %s\n", context, rauzy_last_error());
  throw Failure{s};
}

int exit_code(rauzy_status s) {
  switch (s) {
    case RAUZY_OK: return 0;
    case RAUZY_NUMERIC:
    case RAUZY_INTERNAL: return 2;
    default: return 1;
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != cell.size()) throw CLI::ValidationError("bad number '" + cell + "' in list");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("RAUZY_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

struct Handles {
  rauzy_substitution* sub = nullptr;
  rauzy_model* model = nullptr;
  rauzy_family* family = nullptr;
  ~Handles() {
    rauzy_model_free(model);
    rauzy_substitution_free(sub);
    rauzy_family_free(family);
  }
};

void report(char* summary, char* artifacts, bool print_summary) {
  if (print_summary && summary) std::cout << json::parse(summary).dump(2) << "\n";
  if (artifacts)
    for (const auto& path : json::parse(artifacts)) std::cout << "wrote " << path.get<std::string>() << "\n";
  rauzy_string_free(summary);
  rauzy_string_free(artifacts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rauzy fractals and measures of random substitutions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rauzy_version());

  std::string spec, out = "out", letter, mode = "markov", family, directive, bernoulli, p_text;
  std::uint64_t seed = 0;
  std::optional<unsigned> level, depth;
  std::optional<std::size_t> points, bins, chaos, samples;
  std::optional<double> dedup;
  std::size_t burn = 60;
  unsigned workers = default_workers();

  auto common = [&](CLI::App* sub, bool takes_spec) {
    if (takes_spec) sub->add_option("spec", spec, "substitution file (TOML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "64-bit seed");
    sub->add_option("--workers", workers, "worker threads (default RAUZY_WORKERS or 1)")->check(CLI::PositiveNumber);
  };

  auto* info = app.add_subcommand("info", "spectral data, chart and classification as JSON");
  common(info, true);
  auto* cloud = app.add_subcommand("cloud", "point cloud of a level-n realisation");
  common(cloud, true);
  auto* gifs = app.add_subcommand("gifs", "prefix-suffix graph, set iteration and chaos game");
  common(gifs, true);
  auto* measure = app.add_subcommand("measure", "tile masses, MK table and Fourier cocycle");
  common(measure, true);
  auto* covering = app.add_subcommand("covering", "fold the measure into a fundamental domain");
  common(covering, true);
  auto* sweep = app.add_subcommand("sweep", "continuity of the tile measures in p");
  common(sweep, true);
  auto* sadic = app.add_subcommand("sadic", "S-adic directive sequences over a compatible family");
  common(sadic, false);
  auto* render = app.add_subcommand("render", "SVG scatter plot of a cloud CSV");
  std::string svg_out = "cloud.svg";
  render->add_option("csv", spec, "cloud CSV")->required()->check(CLI::ExistingFile);
  render->add_option("--out", svg_out, "SVG file");
  std::optional<std::size_t> max_points;
  render->add_option("--points", max_points, "maximum points drawn");

  for (auto* sub : {cloud, gifs, measure, covering, sweep}) sub->add_option("--p", p_text, "probability parameter");
  for (auto* sub : {cloud, measure, covering, sweep}) {
    sub->add_option("--level", level, "inflation level");
    sub->add_option("--points", points, "point budget (picks the level when --level is absent)");
    sub->add_option("--letter", letter, "seed letter");
  }
  for (auto* sub : {measure, covering}) sub->add_option("--bins", bins, "histogram bins per axis");
  cloud->add_option("--mode", mode, "markov or enumerate")->check(CLI::IsMember({"markov", "enumerate"}));
  for (auto* sub : {cloud, gifs, measure, sadic}) sub->add_option("--depth", depth, "depth");
  for (auto* sub : {gifs, measure}) {
    sub->add_option("--dedup", dedup, "dedup pitch");
    sub->add_option("--chaos", chaos, "chaos-game steps");
    sub->add_option("--burn", burn, "chaos-game burn-in (at least 50)")->check(CLI::Range(50, 1 << 30));
  }
  sadic->add_option("--family", family, "family file")->required()->check(CLI::ExistingFile);
  auto* dir_opt = sadic->add_option("--directive", directive, "directive sequence, e.g. \"0,1,1,(0,1)*\"");
  sadic->add_option("--bernoulli", bernoulli, "member weights, e.g. \"0.5,0.5\"")->excludes(dir_opt);
  sadic->add_option("--samples", samples, "sampled directive sequences");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  Handles h;
  try {
    json o;
    o["seed"] = seed;
    o["workers"] = workers;
    if (level) o["level"] = *level;
    if (points) o["points"] = *points;
    if (bins) o["bins"] = *bins;
    if (depth) o["depth"] = *depth;
    if (dedup) o["dedup"] = *dedup;
    if (chaos) o["chaos"] = *chaos;
    o["burn"] = burn;
    if (!letter.empty()) o["letter"] = letter;
    if (samples) o["samples"] = *samples;
    char* summary = nullptr;
    char* artifacts = nullptr;

    if (*render) {
      json ro;
      if (max_points) ro["max_points"] = *max_points;
      check(rauzy_run_render(spec.c_str(), ro.dump().c_str(), svg_out.c_str(), &summary, &artifacts), "render");
      report(summary, artifacts, false);
      return 0;
    }
    if (*sweep) {
      if (!p_text.empty()) o["p"] = parse_list(p_text);
      check(rauzy_run_sweep(spec.c_str(), o.dump().c_str(), out.c_str(), &summary, &artifacts), "sweep");
      report(summary, artifacts, false);
      return 0;
    }
    if (*sadic) {
      if (!directive.empty()) o["directive"] = directive;
      if (!bernoulli.empty()) o["bernoulli"] = parse_list(bernoulli);
      check(rauzy_family_load(family.c_str(), &h.family), "sadic");
      check(rauzy_run_sadic(h.family, o.dump().c_str(), out.c_str(), &summary, &artifacts), "sadic");
      report(summary, artifacts, false);
      return 0;
    }

    std::optional<double> p;
    if (!p_text.empty()) {
      const auto values = parse_list(p_text);
      if (values.size() != 1) throw CLI::ValidationError("--p takes one value here");
      p = values[0];
    }
    check(rauzy_substitution_load(spec.c_str(), p ? &*p : nullptr, &h.sub), "spec");
    check(rauzy_model_build(h.sub, &h.model), "model");

    const std::string dump = o.dump();
    if (*info) {
      const bool to_dir = info->count("--out") > 0;
      check(rauzy_run_info(h.model, to_dir ? out.c_str() : nullptr, &summary, &artifacts), "info");
      report(summary, artifacts, true);
    } else if (*cloud) {
      o["mode"] = mode;
      check(rauzy_run_cloud(h.model, o.dump().c_str(), out.c_str(), &summary, &artifacts), "cloud");
      report(summary, artifacts, false);
    } else if (*gifs) {
      check(rauzy_run_gifs(h.model, dump.c_str(), out.c_str(), &summary, &artifacts), "gifs");
      report(summary, artifacts, false);
    } else if (*measure) {
      check(rauzy_run_measure(h.model, dump.c_str(), out.c_str(), &summary, &artifacts), "measure");
      report(summary, artifacts, false);
    } else if (*covering) {
      check(rauzy_run_covering(h.model, dump.c_str(), out.c_str(), &summary, &artifacts), "covering");
      report(summary, artifacts, false);
    }
    return 0;
  } catch (const Failure& f) {
    return exit_code(f.status);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "rauzy: %s\n", e.what());
    return 1;
  }
}
