#include "plunge/plunge.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>

#include "bounds.hpp"
#include "frames.hpp"
#include "harness.hpp"
#include "json.hpp"
#include "parse.hpp"

using namespace plunge;
using nlohmann::json;

struct plg_domain {
  DomainPtr d;
};
struct plg_gridset {
  GridSet g;
};
struct plg_spectrum {
  SpectrumSummary s;
};

namespace {

thread_local std::string last_error;

template <class F>
plg_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return PLG_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<plg_status>(e.status());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PLG_CAP_EXCEEDED;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PLG_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  require(p != nullptr, Status::invalid_argument, std::string(what) + " is null");
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

extern "C" {

const char* plg_last_error(void) { return last_error.c_str(); }

const char* plg_status_name(plg_status s) {
  switch (s) {
    case PLG_OK: return "ok";
    case PLG_INVALID_ARGUMENT: return "invalid_argument";
    case PLG_PRECONDITION: return "precondition";
    case PLG_CAP_EXCEEDED: return "cap_exceeded";
    case PLG_NUMERICAL: return "numerical";
    case PLG_UNSUPPORTED: return "unsupported";
    case PLG_IO: return "io";
    case PLG_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* plg_version(void) { return "1.0.0"; }

void plg_string_free(char* s) { std::free(s); }

plg_status plg_domain_parse(const char* spec, int default_dim, plg_domain** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new plg_domain{parse_domain(spec, default_dim)};
  });
}

plg_status plg_domain_catalog(const char* name, const double* params, size_t n, int d, plg_domain** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    require(n == 0 || params, Status::invalid_argument, "params is null");
    *out = new plg_domain{catalog(name, std::vector<double>(params, params + n), d)};
  });
}

void plg_domain_free(plg_domain* dom) { delete dom; }

int plg_domain_dim(const plg_domain* dom) { return dom ? dom->d->dim() : 0; }

int plg_domain_contains(const plg_domain* dom, const double* x) { return dom && x && dom->d->contains(x) ? 1 : 0; }

plg_status plg_domain_info(const plg_domain* dom, double h, char** out) {
  return guarded([&] {
    need(dom, "domain");
    need(out, "out");
    const Domain& D = *dom->d;
    const Box& b = D.bbox();
    double diam2 = 0;
    for (int i = 0; i < D.dim(); ++i) diam2 += (b.hi[i] - b.lo[i]) * (b.hi[i] - b.lo[i]);
    if (h <= 0) h = std::sqrt(diam2) / 256;
    json j;
    j["describe"] = D.describe();
    j["dim"] = D.dim();
    j["bbox"] = {{"lo", b.lo}, {"hi", b.hi}};
    j["volume"] = D.volume() ? json(*D.volume()) : json(nullptr);
    j["boundary_measure_exact"] = D.boundary_measure() ? json(*D.boundary_measure()) : json(nullptr);
    if (D.dim() >= 2) {
      j["boundary_measure"] = boundary_measure(D, h);
      const auto r = continuous_ahlfors_estimate(D, h);
      j["ahlfors"] = {{"eta", r.eta}, {"kappa", r.kappa}, {"resolution", r.resolution}, {"samples", r.samples},
                      {"mode", "continuous_approximate"}};
    } else {
      j["boundary_measure"] = num(D.boundary_measure() ? *D.boundary_measure() : NAN);
    }
    *out = dup(j.dump(2));
  });
}

plg_status plg_discretize(const plg_domain* dom, double L, plg_gridset** out) {
  return guarded([&] {
    need(dom, "domain");
    need(out, "out");
    *out = new plg_gridset{discretize(*dom->d, L)};
  });
}

void plg_gridset_free(plg_gridset* g) { delete g; }
size_t plg_gridset_size(const plg_gridset* g) { return g ? g->g.size() : 0; }
int plg_gridset_dim(const plg_gridset* g) { return g ? g->g.dim() : 0; }
double plg_gridset_resolution(const plg_gridset* g) { return g ? g->g.resolution() : 0; }

plg_status plg_gridset_point(const plg_gridset* g, size_t i, int64_t* k) {
  return guarded([&] {
    need(g, "gridset");
    need(k, "k");
    require(i < g->g.size(), Status::invalid_argument, "point index out of range");
    std::memcpy(k, g->g.point(i), sizeof(int64_t) * g->g.dim());
  });
}

plg_status plg_gridset_boundary(const plg_gridset* g, plg_gridset** out) {
  return guarded([&] {
    need(g, "gridset");
    need(out, "out");
    *out = new plg_gridset{discrete_boundary(g->g)};
  });
}

plg_status plg_gridset_regularity(const plg_gridset* g, double* eta, double* kappa) {
  return guarded([&] {
    need(g, "gridset");
    const auto r = discrete_ahlfors(g->g);
    if (eta) *eta = r.eta;
    if (kappa) *kappa = r.kappa;
  });
}

plg_status plg_spectrum_compute(const plg_gridset* omega, const plg_domain* F, size_t cap, int parity,
                                plg_spectrum** out) {
  return guarded([&] {
    need(omega, "omega");
    need(F, "F");
    need(out, "out");
    SpectrumOptions so;
    if (cap) so.assemble.cap = cap;
    so.allow_parity = parity != 0;
    *out = new plg_spectrum{spectrum_of(omega->g, F->d, so)};
  });
}

void plg_spectrum_free(plg_spectrum* s) { delete s; }
size_t plg_spectrum_size(const plg_spectrum* s) { return s ? s->s.lambda.size() : 0; }
double plg_spectrum_trace(const plg_spectrum* s) { return s ? s->s.trace : NAN; }
double plg_spectrum_trace_residual(const plg_spectrum* s) { return s ? s->s.trace_residual : NAN; }

plg_status plg_spectrum_values(const plg_spectrum* s, double* out, size_t n) {
  return guarded([&] {
    need(s, "spectrum");
    need(out, "out");
    require(n >= s->s.lambda.size(), Status::invalid_argument, "output buffer too small");
    std::copy(s->s.lambda.begin(), s->s.lambda.end(), out);
  });
}

plg_status plg_spectrum_counts(const plg_spectrum* s, double eps, long* plunge, long* distribution) {
  return guarded([&] {
    need(s, "spectrum");
    if (plunge) *plunge = plunge_count(s->s, eps);
    if (distribution) *distribution = distribution_count(s->s, eps);
  });
}

plg_status plg_spectrum_audit(const plg_spectrum* s, char** report) {
  return guarded([&] {
    need(s, "spectrum");
    need(report, "report");
    *report = dup(audit(s->s));
  });
}

plg_status plg_spectrum_csv(const plg_spectrum* s, char** csv) {
  return guarded([&] {
    need(s, "spectrum");
    need(csv, "csv");
    *csv = dup(spectrum_csv(s->s));
  });
}

plg_status plg_spectrum_json(const plg_spectrum* s, const double* eps, size_t n_eps, char** out) {
  return guarded([&] {
    need(s, "spectrum");
    need(out, "out");
    require(n_eps == 0 || eps, Status::invalid_argument, "eps is null");
    const auto& S = s->s;
    const auto t = transition_check(S);
    json j;
    j["n"] = S.lambda.size();
    j["source"] = S.source;
    j["trace"] = S.trace;
    j["trace_residual"] = S.trace_residual;
    j["transition"] = {{"K", t.K}, {"width", t.width}, {"upper_ok", t.upper_ok}, {"lower_ok", t.lower_ok}};
    j["audit"] = audit(S);
    json per = json::array();
    for (size_t i = 0; i < n_eps; ++i) {
      const auto dev = deviation_check(S, eps[i]);
      per.push_back({{"eps", eps[i]},
                     {"plunge_count", plunge_count(S, eps[i])},
                     {"distribution_count", distribution_count(S, eps[i])},
                     {"deviation", dev.deviation},
                     {"deviation_bound", dev.bound},
                     {"deviation_ok", dev.holds}});
    }
    j["eps"] = per;
    *out = dup(j.dump(2));
  });
}

plg_status plg_matrix_csv(const plg_gridset* omega, const plg_domain* F, size_t cap, char** csv) {
  return guarded([&] {
    need(omega, "omega");
    need(F, "F");
    need(csv, "csv");
    AssembleOptions ao;
    if (cap) ao.cap = cap;
    *csv = dup(matrix_csv(assemble(omega->g, F->d, ao)));
  });
}

plg_status plg_nystrom(const plg_gridset* omega, const plg_domain* F, int grid_n, double* out, size_t n) {
  return guarded([&] {
    need(omega, "omega");
    need(F, "F");
    need(out, "out");
    const auto v = nystrom_oracle(omega->g, *F->d, grid_n);
    require(n >= v.size(), Status::invalid_argument, "output buffer too small");
    std::copy(v.begin(), v.end(), out);
  });
}

void plg_bound_defaults(plg_bound_inputs* in) {
  if (!in) return;
  *in = plg_bound_inputs{"th2", 2, 0, 1, 0, 1, 1, 1, 0.1, 0.25, 1, 1};
}

plg_status plg_bound(const plg_bound_inputs* in, plg_bound_result* out) {
  return guarded([&] {
    need(in, "inputs");
    need(out, "out");
    BoundInputs b;
    b.variant = parse_variant(in->variant ? in->variant : "th2");
    b.d = in->d;
    b.bE = in->bE;
    b.kE = in->kE;
    b.bF = in->bF;
    b.kF = in->kF;
    b.eta = in->eta;
    b.W_max = in->W_max;
    b.eps = in->eps;
    b.alpha = in->alpha;
    b.A = in->A;
    b.extra_log = in->extra_log != 0;
    const auto v = theorem_rhs_checked(b);
    *out = plg_bound_result{v.value, v.product_ok, v.eps_ok, v.alpha_ok};
  });
}

double plg_landau_widom(double ab, double eps, double c) {
  double v = std::numeric_limits<double>::quiet_NaN();
  guarded([&] { v = landau_widom(ab, eps, c); });
  return v;
}

plg_status plg_fit(const double* x, const double* y, size_t n, const char* model, char** out) {
  return guarded([&] {
    need(x, "x");
    need(y, "y");
    need(model, "model");
    need(out, "out");
    const std::string m = model;
    Model mm;
    if (m == "power_law") mm = Model::power_law;
    else if (m == "log_linear") mm = Model::log_linear;
    else if (m == "ratio") mm = Model::ratio;
    else fail(Status::invalid_argument, "unknown model '" + m + "'");
    const auto f = fit_scaling(std::vector<double>(x, x + n), std::vector<double>(y, y + n), mm);
    json j = {{"model", m}, {"coef", f.coef}, {"r2", num(f.r2)}, {"residuals", f.residuals}};
    *out = dup(j.dump(2));
  });
}

plg_status plg_frame_residual(const double* W, int d, double delta, double alpha, size_t count, uint64_t seed,
                              char** out) {
  return guarded([&] {
    need(W, "W");
    need(out, "out");
    require(d >= 1 && d <= 3, Status::invalid_argument, "dimension must be 1, 2 or 3");
    const std::vector<double> w(W, W + d);
    const auto p = partition(w, delta);
    const Window win(alpha);
    Box support;
    for (int i = 0; i < d; ++i) {
      support.lo.push_back(-0.3 * w[i]);
      support.hi.push_back(0.3 * w[i]);
    }
    const auto fs = random_test_functions(support, count, seed);
    const auto r = tight_frame_residual(p, win, fs);
    json j = {{"W", w},
              {"delta", delta},
              {"alpha", alpha},
              {"seed", seed},
              {"functions", count},
              {"residual", r.residual},
              {"each", r.each},
              {"max_nodes", r.max_nodes},
              {"fit", {{"A", win.fit_A}, {"a", win.fit_a}, {"rms", win.fit_rms}}}};
    *out = dup(j.dump(2));
  });
}

plg_status plg_israel(const plg_gridset* omega, const double* W, double s, double delta, double eps, double alpha,
                      char** out) {
  return guarded([&] {
    need(omega, "omega");
    need(W, "W");
    need(out, "out");
    const std::vector<double> w(W, W + omega->g.dim());
    const auto c = israel_certificate(omega->g, w, s, delta, eps, Window(alpha));
    json j = {{"hypothesis_lhs", c.hypothesis_lhs}, {"threshold", c.threshold},   {"hypothesis_met", c.hypothesis_met},
              {"plunge_count", c.conclusion_count}, {"bound", c.bound},           {"holds", c.holds},
              {"high_part", c.high_part},           {"low_part", c.low_part},     {"outside_box", c.outside_box},
              {"small_d", c.small_d},               {"med", c.med},               {"low", c.low},
              {"high", c.high}};
    *out = dup(j.dump(2));
  });
}

plg_status plg_sweep(const char* config_json, int timestamp, char** csv, char** out) {
  return guarded([&] {
    need(config_json, "config");
    const auto cfg = sweep_config_from_json(config_json);
    const auto res = run_sweep(cfg);
    if (csv) *csv = dup(sweep_csv(res, cfg, timestamp != 0));
    if (out) *out = dup(sweep_json(res));
  });
}

plg_status plg_converge(const plg_domain* E, const plg_domain* F, const double* L, size_t n_L, size_t k, size_t cap,
                        char** out) {
  return guarded([&] {
    need(E, "E");
    need(F, "F");
    need(L, "L");
    need(out, "out");
    const auto t = convergence_study(E->d, F->d, std::vector<double>(L, L + n_L), k, cap ? cap : 6000);
    json rows = json::array();
    for (size_t i = 0; i < t.L.size(); ++i) rows.push_back({{"L", t.L[i]}, {"top", t.top[i]}});
    json j = {{"rows", rows}, {"diffs", t.diffs}};
    *out = dup(j.dump(2));
  });
}

plg_status plg_constants_path(char** path) {
  return guarded([&] {
    need(path, "path");
    *path = dup(constants_path());
  });
}

}  // extern "C"
