// Command-line front end; talks to the library only through the C API.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plunge/plunge.h"

using nlohmann::json;

namespace {

struct Failure {
  plg_status status;
  std::string what;
};

void check(plg_status s) {
  if (s != PLG_OK) throw Failure{s, plg_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  plg_string_free(s);
  return out;
}

using DomainHandle = std::unique_ptr<plg_domain, decltype(&plg_domain_free)>;
using GridHandle = std::unique_ptr<plg_gridset, decltype(&plg_gridset_free)>;
using SpectrumHandle = std::unique_ptr<plg_spectrum, decltype(&plg_spectrum_free)>;

DomainHandle domain(const std::string& spec, int d) {
  plg_domain* p = nullptr;
  check(plg_domain_parse(spec.c_str(), d, &p));
  return DomainHandle(p, plg_domain_free);
}

GridHandle grid(const plg_domain* dom, double L) {
  plg_gridset* g = nullptr;
  check(plg_discretize(dom, L, &g));
  return GridHandle(g, plg_gridset_free);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{PLG_IO, "cannot read " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Failure{PLG_IO, "cannot write " + path};
  out << text;
}

// Reads two numeric columns from a CSV; lines starting with '#' and a non-numeric header are skipped.
void read_xy(const std::string& path, const std::string& xcol, const std::string& ycol, std::vector<double>& x,
             std::vector<double>& y) {
  std::istringstream in(slurp(path));
  std::string line;
  std::vector<std::string> head;
  int xi = 0, yi = 1;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::string cur;
    bool q = false;
    for (char c : s) {
      if (c == '"') q = !q;
      else if (c == ',' && !q) f.push_back(cur), cur.clear();
      else cur += c;
    }
    f.push_back(cur);
    return f;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line);
    if (head.empty()) {
      char* end = nullptr;
      std::strtod(f[0].c_str(), &end);
      if (end == f[0].c_str()) {
        head = f;
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (f[i] == xcol) xi = static_cast<int>(i);
          if (f[i] == ycol) yi = static_cast<int>(i);
        }
        continue;
      }
      head = {"x", "y"};
    }
    if (static_cast<int>(f.size()) <= std::max(xi, yi)) continue;
    x.push_back(std::stod(f[xi]));
    y.push_back(std::stod(f[yi]));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plunge: concentration operators, plunge regions and their bounds"};
  app.require_subcommand(1);

  int d = 2;
  std::string E, F, dom_spec;
  double L = 0;
  std::size_t cap = 0;

  auto* geo = app.add_subcommand("geometry", "Volume, boundary measure and regularity of a domain");
  geo->add_option("domain", dom_spec, "Domain spec, e.g. ball(2)")->required();
  geo->add_option("--d", d, "Dimension for dimension-free specs");
  geo->add_option("--L", L, "Also discretize at this resolution");
  double h = 0;
  geo->add_option("--step", h, "Raster step for continuous estimates");

  auto* spec = app.add_subcommand("spectrum", "Eigenvalues of the concentration matrix");
  std::vector<double> eps_list{0.1};
  std::string csv_out, matrix_out;
  bool no_parity = false;
  spec->add_option("--E", E, "Frequency domain")->required();
  spec->add_option("--F", F, "Spatial domain")->required();
  spec->add_option("--L", L, "Resolution")->required();
  spec->add_option("--d", d);
  spec->add_option("--cap", cap, "Largest dense matrix");
  spec->add_option("--eps", eps_list);
  spec->add_option("--csv", csv_out, "Write eigenvalues here");
  spec->add_option("--matrix", matrix_out, "Write the matrix entries here");
  spec->add_flag("--no-parity", no_parity);

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  std::string config_path, sweep_csv_path, sweep_json_path;
  std::vector<std::string> sE, sF;
  std::vector<double> sL, sr, seps;
  double s_alpha = 0;
  unsigned threads = 0;
  long long seed = -1;
  bool no_stamp = false;
  sweep->add_option("--config", config_path, "JSON config");
  sweep->add_option("--E", sE);
  sweep->add_option("--F", sF);
  sweep->add_option("--L", sL);
  sweep->add_option("--r", sr);
  sweep->add_option("--eps", seps);
  sweep->add_option("--d", d);
  sweep->add_option("--alpha", s_alpha);
  sweep->add_option("--cap", cap);
  sweep->add_option("--threads", threads);
  sweep->add_option("--seed", seed);
  sweep->add_option("--out", sweep_csv_path, "CSV path (stdout when empty)");
  sweep->add_option("--json", sweep_json_path, "JSON path");
  sweep->add_flag("--no-timestamp", no_stamp);

  auto* frame = app.add_subcommand("frame", "Tight-frame residual or plunge certificate");
  std::vector<double> W{2.0};
  double delta = 1e-3, alpha = 0.25, s = 1, f_eps = 0.3;
  std::size_t count = 10;
  std::uint64_t fseed = 1;
  bool israel = false;
  frame->add_option("--W", W, "Box side lengths");
  frame->add_option("--delta", delta);
  frame->add_option("--alpha", alpha);
  frame->add_option("--count", count, "Random test functions");
  frame->add_option("--seed", fseed);
  frame->add_flag("--certificate", israel, "Classify indices and certify the plunge bound instead");
  frame->add_option("--E", E, "Frequency domain for --certificate");
  frame->add_option("--L", L);
  frame->add_option("--s", s);
  frame->add_option("--eps", f_eps);

  auto* bound = app.add_subcommand("bound", "Theorem right-hand sides");
  plg_bound_inputs bi;
  plg_bound_defaults(&bi);
  std::string variant = "th2";
  double A = NAN;
  bool no_extra_log = false;
  bound->add_option("--variant", variant);
  bound->add_option("--d", bi.d);
  bound->add_option("--bE", bi.bE);
  bound->add_option("--kE", bi.kE);
  bound->add_option("--bF", bi.bF);
  bound->add_option("--kF", bi.kF);
  bound->add_option("--eta", bi.eta);
  bound->add_option("--W", bi.W_max);
  bound->add_option("--eps", bi.eps);
  bound->add_option("--alpha", bi.alpha);
  bound->add_option("--A", A, "Constant (default: fitted value from the constants file, else 1)");
  bound->add_flag("--no-extra-log", no_extra_log);

  auto* fit = app.add_subcommand("fit", "Fit a scaling law to two CSV columns");
  std::string fit_csv, model = "power_law", xcol = "x", ycol = "y";
  fit->add_option("csv", fit_csv)->required();
  fit->add_option("--x", xcol);
  fit->add_option("--y", ycol);
  fit->add_option("--model", model)->check(CLI::IsMember({"power_law", "log_linear", "ratio"}));

  auto* conv = app.add_subcommand("converge", "Top eigenvalues as the resolution grows");
  std::vector<double> Ls;
  std::size_t k = 10;
  conv->add_option("--E", E)->required();
  conv->add_option("--F", F)->required();
  conv->add_option("--L", Ls)->required();
  conv->add_option("--k", k);
  conv->add_option("--d", d);
  conv->add_option("--cap", cap);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*geo) {
      auto D = domain(dom_spec, d);
      json j = json::parse(take([&] {
        char* t = nullptr;
        check(plg_domain_info(D.get(), h, &t));
        return t;
      }()));
      if (L > 0) {
        auto G = grid(D.get(), L);
        plg_gridset* b = nullptr;
        check(plg_gridset_boundary(G.get(), &b));
        GridHandle B(b, plg_gridset_free);
        json g = {{"L", L}, {"points", plg_gridset_size(G.get())}, {"boundary", plg_gridset_size(B.get())}};
        if (plg_gridset_dim(B.get()) >= 2 && plg_gridset_size(B.get()) > 0) {
          double eta = 0, kappa = 0;
          check(plg_gridset_regularity(B.get(), &eta, &kappa));
          g["eta"] = eta;
          g["kappa"] = kappa;
        }
        j["lattice"] = g;
      }
      std::cout << j.dump(2) << "\n";
    } else if (*spec) {
      auto Ed = domain(E, d);
      auto Fd = domain(F, d);
      auto G = grid(Ed.get(), L);
      plg_spectrum* sp = nullptr;
      check(plg_spectrum_compute(G.get(), Fd.get(), cap, no_parity ? 0 : 1, &sp));
      SpectrumHandle S(sp, plg_spectrum_free);
      char* t = nullptr;
      check(plg_spectrum_json(S.get(), eps_list.data(), eps_list.size(), &t));
      std::cout << take(t) << "\n";
      if (!csv_out.empty()) {
        check(plg_spectrum_csv(S.get(), &t));
        spit(csv_out, take(t));
      }
      if (!matrix_out.empty()) {
        check(plg_matrix_csv(G.get(), Fd.get(), cap, &t));
        spit(matrix_out, take(t));
      }
    } else if (*sweep) {
      json cfg = config_path.empty() ? json::object() : json::parse(slurp(config_path));
      if (!sE.empty()) cfg["E"] = sE;
      if (!sF.empty()) cfg["F"] = sF;
      if (!sL.empty()) cfg["L"] = sL;
      if (!sr.empty()) cfg["r"] = sr;
      if (!seps.empty()) cfg["eps"] = seps;
      if (sweep->count("--d")) cfg["d"] = d;
      if (s_alpha > 0) cfg["alpha"] = s_alpha;
      if (cap) cfg["cap"] = cap;
      if (threads) cfg["threads"] = threads;
      if (seed >= 0) cfg["seed"] = seed;
      char *c = nullptr, *j = nullptr;
      check(plg_sweep(cfg.dump().c_str(), no_stamp ? 0 : 1, &c, sweep_json_path.empty() ? nullptr : &j));
      const std::string csv = take(c);
      if (sweep_csv_path.empty()) std::cout << csv;
      else spit(sweep_csv_path, csv);
      if (!sweep_json_path.empty()) spit(sweep_json_path, take(j));
    } else if (*frame) {
      char* t = nullptr;
      if (israel) {
        if (E.empty() || L <= 0) throw Failure{PLG_INVALID_ARGUMENT, "--certificate needs --E and --L"};
        auto Ed = domain(E, static_cast<int>(W.size()));
        auto G = grid(Ed.get(), L);
        check(plg_israel(G.get(), W.data(), s, delta, f_eps, alpha, &t));
      } else {
        check(plg_frame_residual(W.data(), static_cast<int>(W.size()), delta, alpha, count, fseed, &t));
      }
      std::cout << take(t) << "\n";
    } else if (*bound) {
      if (std::isnan(A)) {
        A = 1;
        char* p = nullptr;
        check(plg_constants_path(&p));
        const std::string path = take(p);
        std::ifstream in(path);
        if (in) {
          const json c = json::parse(in, nullptr, false);
          if (c.is_object() && c.contains("A") && c["A"].is_number()) A = c["A"].get<double>();
        }
      }
      bi.variant = variant.c_str();
      bi.A = A;
      bi.extra_log = no_extra_log ? 0 : 1;
      plg_bound_result r{};
      check(plg_bound(&bi, &r));
      json j = {{"variant", variant},
                {"A", A},
                {"value", std::isfinite(r.value) ? json(r.value) : json(nullptr)},
                {"product_ok", r.product_ok != 0},
                {"eps_ok", r.eps_ok != 0},
                {"alpha_ok", r.alpha_ok != 0}};
      std::cout << j.dump(2) << "\n";
    } else if (*fit) {
      std::vector<double> x, y;
      read_xy(fit_csv, xcol, ycol, x, y);
      char* t = nullptr;
      check(plg_fit(x.data(), y.data(), x.size(), model.c_str(), &t));
      std::cout << take(t) << "\n";
    } else if (*conv) {
      auto Ed = domain(E, d);
      auto Fd = domain(F, d);
      char* t = nullptr;
      check(plg_converge(Ed.get(), Fd.get(), Ls.data(), Ls.size(), k, cap, &t));
      std::cout << take(t) << "\n";
    }
  } catch (const Failure& f) {
    std::cerr << "error (" << plg_status_name(f.status) << "): " << f.what << "\n";
    return static_cast<int>(f.status) + 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
