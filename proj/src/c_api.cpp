#include "rauzy/rauzy.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include <json.hpp>

#include "cloud.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "gifs.hpp"
#include "measure.hpp"
#include "model.hpp"
#include "report.hpp"
#include "sadic.hpp"

struct rauzy_substitution {
  rauzy::RandomSubstitution sub;
  bool parametric;
};

struct rauzy_model {
  rauzy::Model model;
};

struct rauzy_cloud {
  rauzy::PointCloud cloud;
};

struct rauzy_family {
  rauzy::CompatibleFamily family;
};

namespace {

thread_local std::string last_error;

rauzy_status fail(rauzy_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Runs f, mapping exceptions to status codes.
template <class F>
rauzy_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return RAUZY_OK;
  } catch (const rauzy::ValidationError& e) {
    return fail(RAUZY_VALIDATION, e.what());
  } catch (const rauzy::NumericalError& e) {
    return fail(RAUZY_NUMERIC, e.what());
  } catch (const rauzy::LimitError& e) {
    return fail(RAUZY_LIMIT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RAUZY_INVALID_ARGUMENT, std::string("options: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(RAUZY_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(RAUZY_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json options(const char* text) {
  if (!text || !*text) return nlohmann::json::object();
  auto j = nlohmann::json::parse(text);
  if (!j.is_object()) throw rauzy::ValidationError("options must be a JSON object");
  return j;
}

void emit(const rauzy::RunResult& r, char** summary, char** artifacts) {
  if (summary) *summary = dup(r.summary.dump());
  if (artifacts) *artifacts = dup(nlohmann::json(r.artifacts).dump());
}

rauzy_substitution* make_substitution(const rauzy::SubstitutionTemplate& t, const double* p) {
  if (t.parametric() && !p) throw rauzy::ValidationError("parametric weights need a value for p");
  std::optional<double> pv;
  if (p) pv = *p;
  return new rauzy_substitution{t.instantiate(pv), t.parametric()};
}

}  // namespace

#define REQUIRE(cond, msg) \
  if (!(cond)) return fail(RAUZY_INVALID_ARGUMENT, msg)

extern "C" {

const char* rauzy_last_error(void) { return last_error.c_str(); }
const char* rauzy_version(void) { return "0.1.0"; }
void rauzy_string_free(char* s) { std::free(s); }

rauzy_status rauzy_substitution_parse(const char* text, const double* p, rauzy_substitution** out) {
  REQUIRE(text && out, "null argument");
  return guarded([&] { *out = make_substitution(rauzy::parse_substitution_template(text), p); });
}

rauzy_status rauzy_substitution_load(const char* path, const double* p, rauzy_substitution** out) {
  REQUIRE(path && out, "null argument");
  return guarded([&] {
    try {
      *out = make_substitution(rauzy::parse_substitution_template(rauzy::config::read_file(path)), p);
    } catch (const rauzy::ValidationError& e) {
      throw rauzy::ValidationError(std::string(path) + ": " + e.what());
    }
  });
}

void rauzy_substitution_free(rauzy_substitution* s) { delete s; }
size_t rauzy_substitution_letters(const rauzy_substitution* s) { return s ? s->sub.size() : 0; }
int rauzy_substitution_is_parametric(const rauzy_substitution* s) { return s && s->parametric ? 1 : 0; }

rauzy_status rauzy_model_build(const rauzy_substitution* s, rauzy_model** out) {
  REQUIRE(s && out, "null argument");
  return guarded([&] { *out = new rauzy_model{rauzy::build_model(s->sub)}; });
}

void rauzy_model_free(rauzy_model* m) { delete m; }
size_t rauzy_model_dim(const rauzy_model* m) { return m ? m->model.dim() : 0; }
double rauzy_model_lambda(const rauzy_model* m) { return m ? m->model.pd.lambda : 0.0; }

rauzy_status rauzy_model_right(const rauzy_model* m, double* out, size_t len) {
  REQUIRE(m && out, "null argument");
  REQUIRE(len >= m->model.letters(), "buffer too short");
  for (size_t a = 0; a < m->model.letters(); ++a) out[a] = m->model.pd.right[static_cast<Eigen::Index>(a)];
  return RAUZY_OK;
}

rauzy_status rauzy_model_info_json(const rauzy_model* m, char** json) {
  REQUIRE(m && json, "null argument");
  return guarded([&] { *json = dup(rauzy::info_json(m->model).dump()); });
}

rauzy_status rauzy_cloud_markov(const rauzy_model* m, unsigned letter, unsigned level, uint64_t seed, unsigned workers,
                                rauzy_cloud** out) {
  REQUIRE(m && out, "null argument");
  REQUIRE(letter < m->model.letters(), "letter out of range");
  return guarded([&] {
    rauzy::MarkovOptions o;
    o.letter = static_cast<rauzy::Letter>(letter);
    o.level = level;
    o.seed = seed;
    o.workers = workers == 0 ? 1 : workers;
    *out = new rauzy_cloud{rauzy::sample_cloud_markov(m->model.sub, m->model.chart, o)};
  });
}

rauzy_status rauzy_cloud_enumerate(const rauzy_model* m, unsigned depth, rauzy_cloud** out) {
  REQUIRE(m && out, "null argument");
  return guarded(
      [&] { *out = new rauzy_cloud{rauzy::enumerate_prefix_language(m->model.sub, m->model.chart, depth)}; });
}

rauzy_status rauzy_cloud_gifs_sets(const rauzy_model* m, unsigned depth, double dedup, rauzy_cloud** out) {
  REQUIRE(m && out, "null argument");
  REQUIRE(dedup > 0.0, "dedup must be positive");
  return guarded([&] {
    rauzy::SetIterationOptions o;
    o.depth = depth;
    o.dedup = dedup;
    *out = new rauzy_cloud{rauzy::iterate_sets(m->model.graph, m->model.maps, m->model.dim(), o)};
  });
}

rauzy_status rauzy_cloud_chaos(const rauzy_model* m, size_t steps, size_t burn_in, uint64_t seed, rauzy_cloud** out) {
  REQUIRE(m && out, "null argument");
  return guarded([&] {
    rauzy::ChaosOptions o;
    o.steps = steps;
    o.burn_in = burn_in;
    o.seed = seed;
    const auto& md = m->model;
    *out = new rauzy_cloud{rauzy::chaos_game(md.graph, md.probs, md.maps, md.pd, o)};
  });
}

void rauzy_cloud_free(rauzy_cloud* c) { delete c; }
size_t rauzy_cloud_dim(const rauzy_cloud* c) { return c ? c->cloud.dim() : 0; }
size_t rauzy_cloud_letters(const rauzy_cloud* c) { return c ? c->cloud.letters() : 0; }

size_t rauzy_cloud_count(const rauzy_cloud* c, unsigned letter) {
  if (!c || letter >= c->cloud.letters()) return 0;
  return c->cloud.count(static_cast<rauzy::Letter>(letter));
}

rauzy_status rauzy_cloud_point(const rauzy_cloud* c, unsigned letter, size_t i, double* out) {
  REQUIRE(c && out, "null argument");
  REQUIRE(letter < c->cloud.letters(), "letter out of range");
  REQUIRE(i < c->cloud.count(static_cast<rauzy::Letter>(letter)), "point index out of range");
  const auto x = c->cloud.point(static_cast<rauzy::Letter>(letter), i);
  std::copy(x.begin(), x.end(), out);
  return RAUZY_OK;
}

double rauzy_cloud_mass(const rauzy_cloud* c, unsigned letter) {
  if (!c || letter >= c->cloud.letters() || c->cloud.total_weight() == 0.0) return 0.0;
  return c->cloud.bucket_weight(static_cast<rauzy::Letter>(letter)) / c->cloud.total_weight();
}

rauzy_status rauzy_cloud_write_csv(const rauzy_cloud* c, const rauzy_model* m, const char* path) {
  REQUIRE(c && path, "null argument");
  return guarded([&] { rauzy::write_cloud_csv(c->cloud, path, m ? &m->model.sub.alphabet() : nullptr); });
}

rauzy_status rauzy_cloud_mk_distance(const rauzy_cloud* a, const rauzy_cloud* b, unsigned letter, double* out) {
  REQUIRE(a && b && out, "null argument");
  REQUIRE(a->cloud.dim() == 1 && b->cloud.dim() == 1, "MK distance needs 1-D clouds");
  REQUIRE(letter < a->cloud.letters() && letter < b->cloud.letters(), "letter out of range");
  return guarded([&] {
    const auto l = static_cast<rauzy::Letter>(letter);
    *out = rauzy::mk_distance_1d(rauzy::normalised_tile(a->cloud, l), rauzy::normalised_tile(b->cloud, l));
  });
}

rauzy_status rauzy_family_load(const char* path, rauzy_family** out) {
  REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new rauzy_family{rauzy::load_family(path)}; });
}

void rauzy_family_free(rauzy_family* f) { delete f; }

rauzy_status rauzy_run_info(const rauzy_model* m, const char* out_dir, char** summary, char** artifacts) {
  REQUIRE(m, "null model");
  return guarded([&] { emit(rauzy::run_info(m->model, out_dir ? out_dir : ""), summary, artifacts); });
}

rauzy_status rauzy_run_cloud(const rauzy_model* m, const char* opts, const char* out_dir, char** summary,
                             char** artifacts) {
  REQUIRE(m && out_dir, "null argument");
  return guarded([&] { emit(rauzy::run_cloud(m->model, options(opts), out_dir), summary, artifacts); });
}

rauzy_status rauzy_run_gifs(const rauzy_model* m, const char* opts, const char* out_dir, char** summary,
                            char** artifacts) {
  REQUIRE(m && out_dir, "null argument");
  return guarded([&] { emit(rauzy::run_gifs(m->model, options(opts), out_dir), summary, artifacts); });
}

rauzy_status rauzy_run_measure(const rauzy_model* m, const char* opts, const char* out_dir, char** summary,
                               char** artifacts) {
  REQUIRE(m && out_dir, "null argument");
  return guarded([&] { emit(rauzy::run_measure(m->model, options(opts), out_dir), summary, artifacts); });
}

rauzy_status rauzy_run_covering(const rauzy_model* m, const char* opts, const char* out_dir, char** summary,
                                char** artifacts) {
  REQUIRE(m && out_dir, "null argument");
  return guarded([&] { emit(rauzy::run_covering(m->model, options(opts), out_dir), summary, artifacts); });
}

rauzy_status rauzy_run_sweep(const char* spec_path, const char* opts, const char* out_dir, char** summary,
                             char** artifacts) {
  REQUIRE(spec_path && out_dir, "null argument");
  return guarded([&] {
    const auto tpl = rauzy::parse_substitution_template(rauzy::config::read_file(spec_path));
    if (!tpl.parametric()) throw rauzy::ValidationError("sweep needs weights written as p and 1-p");
    emit(rauzy::run_sweep(tpl, options(opts), out_dir), summary, artifacts);
  });
}

rauzy_status rauzy_run_sadic(const rauzy_family* f, const char* opts, const char* out_dir, char** summary,
                             char** artifacts) {
  REQUIRE(f && out_dir, "null argument");
  return guarded([&] { emit(rauzy::run_sadic(f->family, options(opts), out_dir), summary, artifacts); });
}

rauzy_status rauzy_run_render(const char* csv_path, const char* opts, const char* svg_path, char** summary,
                              char** artifacts) {
  REQUIRE(csv_path && svg_path, "null argument");
  return guarded([&] { emit(rauzy::run_render(csv_path, options(opts), svg_path), summary, artifacts); });
}

}  // extern "C"
