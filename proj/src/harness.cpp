#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "bounds.hpp"
#include "json.hpp"
#include "parse.hpp"

namespace plunge {

using nlohmann::json;

DomainPtr catalog(const std::string& name, const std::vector<double>& p, int d) {
  auto need = [&](std::size_t n) {
    require(p.size() == n, Status::invalid_argument, name + " takes " + std::to_string(n) + " parameter(s)");
  };
  if (name == "box") {
    require(!p.empty(), Status::invalid_argument, "box needs at least one width");
    return Domain::box(p.size() == 1 ? std::vector<double>(d, p[0]) : p);
  }
  if (name == "ball") return need(1), Domain::ball(d, p[0]);
  if (name == "annulus") return need(2), Domain::annulus(d, p[0], p[1]);
  if (name == "boxminusball") return need(2), Domain::box_minus_ball(d, p[0], p[1]);
  if (name == "squareminusdisk") return need(2), Domain::box_minus_ball(2, p[0], p[1]);
  if (name == "lshape") return need(2), Domain::l_shape(p[0], p[1]);
  if (name == "twobox") {
    // Two squares of side p[0] centred at (+-p[1], 0).
    need(2);
    require(p[1] > 0.5 * p[0], Status::invalid_argument, "twobox squares must not overlap");
    auto sq = Domain::box({p[0], p[0]});
    return Domain::unite({Domain::shift(sq, {-p[1], 0.0}), Domain::shift(sq, {p[1], 0.0})});
  }
  fail(Status::invalid_argument, "unknown catalog domain '" + name + "'");
}

std::string SweepRecord::key() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "|%.17g|%.17g|%.17g", L, r, eps);
  return E + "|" + F + buf;
}

void validate(const SweepConfig& cfg) {
  require(!cfg.E.empty(), Status::invalid_argument, "sweep needs at least one E spec");
  require(!cfg.F.empty(), Status::invalid_argument, "sweep needs at least one F spec");
  require(!cfg.L.empty(), Status::invalid_argument, "sweep needs at least one resolution");
  require(!cfg.r.empty(), Status::invalid_argument, "sweep needs at least one dilation");
  require(!cfg.eps.empty(), Status::invalid_argument, "sweep needs at least one eps");
  require(cfg.cap > 0, Status::invalid_argument, "cap must be positive");
  require(cfg.d >= 1 && cfg.d <= 3, Status::invalid_argument, "dimension must be 1, 2 or 3");
  require(cfg.alpha > 0 && cfg.alpha < 0.5, Status::invalid_argument, "alpha must lie in (0, 1/2)");
  for (double v : cfg.L) require(v > 0, Status::invalid_argument, "resolutions must be positive");
  for (double v : cfg.r) require(v > 0, Status::invalid_argument, "dilations must be positive");
  for (double v : cfg.eps) require(v > 0 && v < 0.5, Status::invalid_argument, "eps must lie in (0, 1/2)");
}

namespace {

struct Combo {
  std::string E, F;
  double L, r;
};

struct Geometry {
  double bm = 0, kappa = 1, vol = 0;
};

Geometry continuous_geometry(const Domain& D, int raster) {
  Geometry g;
  const Box& b = D.bbox();
  double diam2 = 0;
  for (int i = 0; i < D.dim(); ++i) diam2 += (b.hi[i] - b.lo[i]) * (b.hi[i] - b.lo[i]);
  const double h = std::sqrt(diam2) / raster;
  if (D.dim() == 1) {
    g.bm = D.boundary_measure() ? *D.boundary_measure() : 2.0 * double(D.children().size() ? D.children().size() : 1);
    g.kappa = 1.0;
  } else {
    g.bm = boundary_measure(D, h);
    g.kappa = continuous_ahlfors_estimate(D, h).kappa;
  }
  g.vol = D.volume() ? *D.volume() : std::nan("");
  return g;
}

std::vector<SweepRecord> run_combo(const Combo& c, const SweepConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<SweepRecord> out;
  SweepRecord base;
  base.E = c.E;
  base.F = c.F;
  base.L = c.L;
  base.r = c.r;
  try {
    auto E = parse_domain(c.E, cfg.d);
    if (c.r != 1.0) E = Domain::dilate(E, c.r);
    const auto F = parse_domain(c.F, cfg.d);
    require(E->dim() == F->dim(), Status::invalid_argument, "E and F differ in dimension");
    const int d = E->dim();
    const auto omega = discretize(*E, c.L);
    require(!omega.empty(), Status::precondition, "E contains no lattice points at this resolution");
    const auto bd = discrete_boundary(omega);
    base.n_omega = omega.size();
    base.n_boundary = bd.size();
    base.kappa_omega = d >= 2 ? discrete_ahlfors(bd).kappa : 1.0;
    const auto gE = continuous_geometry(*E, cfg.raster);
    const auto gF = continuous_geometry(*F, cfg.raster);
    base.bE = gE.bm;
    base.kappa_E = gE.kappa;
    base.vol_E = gE.vol;
    base.bF = gF.bm;
    base.kappa_F = gF.kappa;
    base.vol_F = gF.vol;

    SpectrumOptions so;
    so.assemble.cap = cfg.cap;
    so.allow_parity = cfg.parity;
    const auto s = spectrum_of(omega, F, so);
    base.trace = s.trace;
    base.trace_residual = s.trace_residual;
    const auto t = transition_check(s);
    base.transition_upper = t.upper_ok;
    base.transition_lower = t.lower_ok;
    for (double eps : cfg.eps) {
      SweepRecord rec = base;
      rec.eps = eps;
      rec.plunge = plunge_count(s, eps);
      rec.distribution = distribution_count(s, eps);
      const auto dev = deviation_check(s, eps);
      rec.deviation = dev.deviation;
      rec.deviation_bound = dev.bound;
      rec.deviation_ok = dev.holds;
      rec.schatten_ok = true;
      for (double p : {0.1, 0.25, 0.5, 1.0}) rec.schatten_ok = rec.schatten_ok && schatten_plunge_bound(s, eps, p).holds;
      BoundInputs bi;
      bi.variant = Variant::th2;
      bi.d = d;
      bi.bE = rec.bE;
      bi.kE = rec.kappa_E;
      bi.bF = rec.bF;
      bi.kF = rec.kappa_F;
      bi.eps = eps;
      bi.alpha = cfg.alpha;
      rec.rhs_th2 = theorem_rhs_checked(bi).value;
      bi.variant = Variant::th3;
      bi.bE = double(rec.n_boundary);
      bi.kE = rec.kappa_omega;
      bi.bF = rec.bF / std::pow(c.L, d - 1);
      rec.rhs_th3 = theorem_rhs_checked(bi).value;
      out.push_back(rec);
    }
    if (!t.upper_ok || !t.lower_ok)
      for (auto& r : out) r.error = "transition check failed";
  } catch (const std::exception& e) {
    out.clear();
    for (double eps : cfg.eps) {
      SweepRecord rec = base;
      rec.eps = eps;
      rec.error = e.what();
      out.push_back(rec);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : out) r.seconds = secs;
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  SweepResult res;
  std::vector<Combo> combos;
  std::map<std::string, bool> seen;
  for (const auto& e : cfg.E)
    for (const auto& f : cfg.F)
      for (double L : cfg.L)
        for (double r : cfg.r) {
          std::string ce = e, cf = f;
          try {
            ce = parse_domain(e, cfg.d)->describe();
            cf = parse_domain(f, cfg.d)->describe();
          } catch (const std::exception&) {
          }
          char buf[96];
          std::snprintf(buf, sizeof buf, "|%.17g|%.17g", L, r);
          const std::string key = ce + "|" + cf + buf;
          if (seen[key]) {
            res.warnings.push_back("duplicate combination skipped: " + key);
            continue;
          }
          seen[key] = true;
          combos.push_back({ce, cf, L, r});
        }

  std::vector<std::vector<SweepRecord>> slots(combos.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < combos.size(); i = next++) slots[i] = run_combo(combos[i], cfg);
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(combos.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& s : slots) res.records.insert(res.records.end(), s.begin(), s.end());
  std::sort(res.records.begin(), res.records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.key() < b.key(); });
  return res;
}

const char* const kSweepColumns =
    "E,F,L,r,eps,n_omega,n_boundary,kappa_omega,bE,kappa_E,bF,kappa_F,vol_E,vol_F,trace,trace_residual,"
    "plunge_count,distribution_count,deviation,deviation_bound,transition_upper,transition_lower,schatten_ok,"
    "deviation_ok,rhs_th2,rhs_th3,error";

std::string sweep_csv(const SweepResult& res, const SweepConfig& cfg, bool timestamp) {
  std::ostringstream os;
  os << "# plunge sweep csv v1\n";
  if (timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# generated " << buf << "\n";
  }
  os << "# d=" << cfg.d << " alpha=" << fmt(cfg.alpha) << " cap=" << cfg.cap << " seed=" << cfg.seed << "\n";
  os << kSweepColumns << "\n";
  for (const auto& r : res.records) {
    os << csv_field(r.E) << ',' << csv_field(r.F) << ',' << fmt(r.L) << ',' << fmt(r.r) << ',' << fmt(r.eps) << ','
       << r.n_omega << ',' << r.n_boundary << ',' << fmt(r.kappa_omega) << ',' << fmt(r.bE) << ',' << fmt(r.kappa_E)
       << ',' << fmt(r.bF) << ',' << fmt(r.kappa_F) << ',' << fmt(r.vol_E) << ',' << fmt(r.vol_F) << ','
       << fmt(r.trace) << ',' << fmt(r.trace_residual) << ',' << r.plunge << ',' << r.distribution << ','
       << fmt(r.deviation) << ',' << fmt(r.deviation_bound) << ',' << r.transition_upper << ','
       << r.transition_lower << ',' << r.schatten_ok << ',' << r.deviation_ok << ',' << fmt(r.rhs_th2) << ','
       << fmt(r.rhs_th3) << ',' << csv_field(r.error) << '\n';
  }
  return os.str();
}

SweepConfig sweep_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(Status::invalid_argument, std::string("sweep config is not valid JSON: ") + e.what());
  }
  SweepConfig c;
  try {
    if (j.contains("E")) c.E = j["E"].get<std::vector<std::string>>();
    if (j.contains("F")) c.F = j["F"].get<std::vector<std::string>>();
    if (j.contains("L")) c.L = j["L"].get<std::vector<double>>();
    if (j.contains("r")) c.r = j["r"].get<std::vector<double>>();
    if (j.contains("eps")) c.eps = j["eps"].get<std::vector<double>>();
    if (j.contains("d")) c.d = j["d"].get<int>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("cap")) c.cap = j["cap"].get<std::size_t>();
    if (j.contains("parity")) c.parity = j["parity"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("raster")) c.raster = j["raster"].get<int>();
  } catch (const json::exception& e) {
    fail(Status::invalid_argument, std::string("sweep config field has the wrong type: ") + e.what());
  }
  return c;
}

std::string sweep_json(const SweepResult& res) {
  json arr = json::array();
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  for (const auto& r : res.records) {
    arr.push_back({{"E", r.E},
                   {"F", r.F},
                   {"L", r.L},
                   {"r", r.r},
                   {"eps", r.eps},
                   {"n_omega", r.n_omega},
                   {"n_boundary", r.n_boundary},
                   {"kappa_omega", num(r.kappa_omega)},
                   {"bE", num(r.bE)},
                   {"kappa_E", num(r.kappa_E)},
                   {"bF", num(r.bF)},
                   {"kappa_F", num(r.kappa_F)},
                   {"vol_E", num(r.vol_E)},
                   {"vol_F", num(r.vol_F)},
                   {"trace", num(r.trace)},
                   {"trace_residual", num(r.trace_residual)},
                   {"plunge_count", r.plunge},
                   {"distribution_count", r.distribution},
                   {"deviation", num(r.deviation)},
                   {"deviation_bound", num(r.deviation_bound)},
                   {"transition_upper", r.transition_upper},
                   {"transition_lower", r.transition_lower},
                   {"schatten_ok", r.schatten_ok},
                   {"deviation_ok", r.deviation_ok},
                   {"rhs_th2", num(r.rhs_th2)},
                   {"rhs_th3", num(r.rhs_th3)},
                   {"seconds", r.seconds},
                   {"error", r.error}});
  }
  json out = {{"records", arr}, {"warnings", res.warnings}};
  return out.dump(2);
}

ConvergenceTable convergence_study(const DomainPtr& E, const DomainPtr& F, const std::vector<double>& L, std::size_t k,
                                   std::size_t cap) {
  require(!L.empty(), Status::invalid_argument, "resolution list is empty");
  require(k > 0, Status::invalid_argument, "k must be positive");
  for (std::size_t i = 1; i < L.size(); ++i)
    require(L[i] > L[i - 1], Status::invalid_argument, "resolutions must increase");
  ConvergenceTable t;
  SpectrumOptions so;
  so.assemble.cap = cap;
  for (double l : L) {
    const auto s = spectrum_of(discretize(*E, l), F, so);
    std::vector<double> top(k, 0.0);
    for (std::size_t i = 0; i < k && i < s.lambda.size(); ++i) top[i] = s.lambda[i];
    t.L.push_back(l);
    t.top.push_back(top);
    if (t.top.size() > 1) {
      const auto& prev = t.top[t.top.size() - 2];
      double m = 0;
      for (std::size_t i = 0; i < k; ++i) m = std::max(m, std::abs(top[i] - prev[i]));
      t.diffs.push_back(m);
    }
  }
  return t;
}

std::string constants_path(const std::string& fallback) {
  const char* v = std::getenv("PLUNGE_CONSTANTS");
  return v && *v ? std::string(v) : fallback;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), Status::io, "cannot open " + path + " for writing");
  out << text;
  require(static_cast<bool>(out), Status::io, "failed writing " + path);
}

}  // namespace plunge
