// jiggle-rr: command-line front end. Flat key=value config files, flag
// overrides (flags win), deterministic CSV/JSON outputs.
//
// Exit codes: 0 success, 1 criteria violation (quantum flo-scan), 2 config
// error, 3 numeric non-convergence, 4 runaway overflow guard.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jrr/dynamics.hpp"
#include "jrr/flo.hpp"
#include "jrr/io.hpp"
#include "jrr/kernel.hpp"
#include "jrr/model.hpp"
#include "jrr/parallel.hpp"
#include "jrr/spectrum.hpp"

namespace {

using nlohmann::ordered_json;

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using KV = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

KV parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  KV kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw config_error(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
    kv[key] = val;
  }
  return kv;
}

void apply_set(KV& kv, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error("--set expects key=value, got: " + s);
    kv[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
  }
}

void check_keys(const KV& kv, const std::set<std::string>& allowed,
                const std::string& cmd) {
  for (const auto& [k, v] : kv)
    if (!allowed.count(k))
      throw config_error("unknown key for " + cmd + ": " + k);
}

const std::string& require(const KV& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw config_error("missing required key: " + key);
  return it->second;
}

std::string get_or(const KV& kv, const std::string& key, const std::string& dflt) {
  const auto it = kv.find(key);
  return it == kv.end() ? dflt : it->second;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw config_error("key " + key + ": not a number: " + s);
  }
}

double to_beta(const std::string& key, const std::string& s) {
  if (s == "INFINITE") return jrr::INFINITE;
  return to_double(key, s);
}

long to_long(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw config_error("key " + key + ": not an integer: " + s);
  }
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw config_error("key " + key + ": expected true/false: " + s);
}

std::vector<double> to_list(const std::string& key, const std::string& s,
                            bool beta_literals = false) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw config_error("key " + key + ": empty list element");
    out.push_back(beta_literals ? to_beta(key, item) : to_double(key, item));
  }
  if (out.empty()) throw config_error("key " + key + ": empty list");
  return out;
}

jrr::FieldStatistics to_stats(const std::string& s) {
  if (s == "quantum") return jrr::FieldStatistics::QUANTUM;
  if (s == "classical") return jrr::FieldStatistics::CLASSICAL;
  throw config_error("stats must be quantum or classical, got: " + s);
}

jrr::ReducedParams reduced_from(const KV& kv) {
  jrr::PhysicalParams p{};
  p.gamma = to_double("gamma", require(kv, "gamma"));
  p.omega0 = to_double("omega0", require(kv, "omega0"));
  p.omegaI = to_double("omegaI", require(kv, "omegaI"));
  p.omegaM = to_double("omegaM", require(kv, "omegaM"));
  p.beta = to_beta("beta", require(kv, "beta"));
  p.validate();
  return jrr::reduce(p);
}

void setup_threads(const KV& kv) {
  const long n = to_long("threads", get_or(kv, "threads", "0"));
  if (n < 0) throw config_error("threads must be >= 0");
  // worker pools read the env var at dispatch time; single process, so this
  // is the cleanest way to honor --threads without plumbing it everywhere
  if (n > 0) setenv("JIGGLE_RR_THREADS", std::to_string(n).c_str(), 1);
}

std::vector<double> linear_grid(double a, double b, long n) {
  if (n < 1) throw config_error("grid size must be >= 1");
  if (n == 1) return {a};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

std::vector<double> log_grid(double a, double b, long n) {
  if (!(a > 0.0) || !(b > a)) throw config_error("log grid needs 0 < start < stop");
  if (n < 2) throw config_error("log grid size must be >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
  return g;
}

const std::set<std::string> physical_keys = {"gamma", "omega0", "omegaI",
                                             "omegaM", "beta"};

std::set<std::string> with_physical(std::set<std::string> s) {
  s.insert(physical_keys.begin(), physical_keys.end());
  return s;
}

int cmd_kernel(const KV& kv) {
  check_keys(kv,
             with_physical({"threads", "out", "stats", "tau_start", "tau_stop",
                            "tau_n", "tau_spacing", "tol", "tau_min"}),
             "kernel");
  setup_threads(kv);
  const auto rp = reduced_from(kv);
  const auto stats = to_stats(get_or(kv, "stats", "quantum"));
  jrr::require_valid_stats(stats, rp.beta_omegaI);
  const double tol = to_double("tol", get_or(kv, "tol", "1e-8"));
  const double tau_min = to_double("tau_min", get_or(kv, "tau_min", "1e-3"));
  const std::string spacing = get_or(kv, "tau_spacing", "linear");
  const double t0 = to_double("tau_start", require(kv, "tau_start"));
  const double t1 = to_double("tau_stop", require(kv, "tau_stop"));
  const long n = to_long("tau_n", require(kv, "tau_n"));
  std::vector<double> taus;
  if (spacing == "linear")
    taus = linear_grid(t0, t1, n);
  else if (spacing == "log")
    taus = log_grid(t0, t1, n);
  else
    throw config_error("tau_spacing must be linear or log");
  for (double t : taus)
    if (!(t > tau_min))
      throw config_error("tau grid must lie above tau_min = " +
                         jrr::format_g17(tau_min));

  const double nan = std::nan("");
  std::vector<std::pair<double, double>> rows(taus.size(), {nan, nan});
  std::vector<char> failed(taus.size(), 0);
  jrr::parallel_for(taus.size(), [&](std::size_t i) {
    try {
      rows[i] = jrr::memory_kernel_d(taus[i], rp, stats, tol, tau_min);
    } catch (const jrr::convergence_error&) {
      failed[i] = 1;
    }
  });

  std::string csv = "tau,D,err\n";
  for (std::size_t i = 0; i < taus.size(); ++i)
    csv += jrr::format_g17(taus[i]) + "," + jrr::format_g17(rows[i].first) +
           "," + jrr::format_g17(rows[i].second) + "\n";
  jrr::write_text_file(require(kv, "out"), csv);
  return std::any_of(failed.begin(), failed.end(), [](char c) { return c; }) ? 3 : 0;
}

int cmd_spectrum(const KV& kv) {
  check_keys(kv,
             with_physical({"threads", "out", "stats", "mode", "z", "omega_grid",
                            "omega_start", "omega_stop", "omega_n", "tol"}),
             "spectrum");
  setup_threads(kv);
  const auto rp = reduced_from(kv);
  const auto stats = to_stats(get_or(kv, "stats", "quantum"));
  jrr::require_valid_stats(stats, rp.beta_omegaI);
  const double tol = to_double("tol", get_or(kv, "tol", "1e-7"));
  const std::string mode = require(kv, "mode");

  std::vector<jrr::SpectrumSample> samples;
  bool any_failed = false;
  if (mode == "complex") {
    const auto parts = to_list("z", require(kv, "z"));
    if (parts.size() != 2) throw config_error("z must be re,im");
    samples.push_back(jrr::mu_complex({parts[0], parts[1]}, rp, stats, tol));
  } else if (mode == "boundary") {
    std::vector<double> grid;
    if (kv.count("omega_grid"))
      grid = to_list("omega_grid", kv.at("omega_grid"));
    else
      grid = linear_grid(to_double("omega_start", require(kv, "omega_start")),
                         to_double("omega_stop", require(kv, "omega_stop")),
                         to_long("omega_n", require(kv, "omega_n")));
    for (double w : grid)
      if (std::abs(w) < 1e-3)
        throw config_error("boundary grid must satisfy |omega| >= 1e-3, got " +
                           jrr::format_g17(w));
    samples.resize(grid.size());
    std::vector<char> failed(grid.size(), 0);
    jrr::parallel_for(grid.size(), [&](std::size_t i) {
      try {
        samples[i] = jrr::mu_boundary(grid[i], rp, stats, tol);
      } catch (const jrr::convergence_error&) {
        failed[i] = 1;
        samples[i].omega = grid[i];
        samples[i].stats = stats;
        samples[i].re_mu = samples[i].im_mu = std::nan("");
        samples[i].re_err = samples[i].im_err = std::nan("");
      }
    });
    any_failed = std::any_of(failed.begin(), failed.end(), [](char c) { return c; });
  } else {
    throw config_error("mode must be boundary or complex");
  }
  jrr::write_text_file(require(kv, "out"), jrr::spectrum_csv(samples));
  return any_failed ? 3 : 0;
}

int cmd_flo_scan(const KV& kv) {
  check_keys(kv,
             with_physical({"threads", "out", "stats", "chi_grid", "beta_grid",
                            "omega_min", "omega_max", "omega_n", "tol_scale"}),
             "flo-scan");
  setup_threads(kv);
  const auto rp = reduced_from(kv);
  const auto stats = to_stats(get_or(kv, "stats", "quantum"));
  const auto chi_grid = to_list("chi_grid", get_or(kv, "chi_grid", "0.1,1,10"));
  const std::string beta_dflt =
      stats == jrr::FieldStatistics::QUANTUM ? "0.1,1,10,INFINITE" : "0.1,1,10";
  const auto beta_grid =
      to_list("beta_grid", get_or(kv, "beta_grid", beta_dflt), true);
  const double wmin = to_double("omega_min", get_or(kv, "omega_min", "1e-2"));
  const double wmax = to_double("omega_max", get_or(kv, "omega_max", "10"));
  const long wn = to_long("omega_n", get_or(kv, "omega_n", "81"));
  const double tol_scale =
      to_double("tol_scale", get_or(kv, "tol_scale", "1e-8"));

  const auto half = log_grid(wmin, wmax, wn);
  std::vector<double> omega_grid;
  omega_grid.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it) omega_grid.push_back(-*it);
  for (double w : half) omega_grid.push_back(w);

  const auto reports =
      jrr::scan(rp, chi_grid, beta_grid, omega_grid, stats, tol_scale);
  jrr::write_text_file(require(kv, "out"), jrr::flo_reports_to_json(reports));

  bool flagged = false, all_pass = true;
  for (const auto& r : reports) {
    if (!r.criterion_i.flagged.empty() || !r.criterion_ii.flagged_omegas.empty())
      flagged = true;
    if (!(r.criterion_i.pass && r.criterion_ii.pass && r.criterion_iii.pass))
      all_pass = false;
  }
  if (flagged) return 3;
  if (stats == jrr::FieldStatistics::QUANTUM && !all_pass) return 1;
  return 0;
}

int cmd_roots(const KV& kv) {
  check_keys(kv, {"threads", "out", "gamma", "omega0"}, "roots");
  setup_threads(kv);
  const double gamma = to_double("gamma", require(kv, "gamma"));
  const double omega0 = to_double("omega0", require(kv, "omega0"));
  const auto cr = jrr::al_char_roots(gamma, omega0);

  ordered_json j;
  j["gamma"] = gamma;
  j["omega0"] = omega0;
  j["roots"] = ordered_json::array();
  const std::complex<double> I(0.0, 1.0);
  for (const auto& z : cr.roots) {
    const std::complex<double> res = I * gamma * z * z * z + z * z - omega0 * omega0;
    ordered_json rj;
    rj["re"] = z.real();
    rj["im"] = z.imag();
    rj["residual"] = std::abs(res);
    j["roots"].push_back(rj);
  }
  jrr::write_text_file(require(kv, "out"), j.dump(2) + "\n");
  return 0;
}

int cmd_evolve(const KV& kv) {
  const std::string model = require(kv, "model");
  const std::set<std::string> base = {"threads", "out", "model", "r0", "v0", "T"};
  std::set<std::string> allowed = base;
  if (model == "classical-al") {
    allowed.insert({"gamma", "omega0", "dt", "suppress_runaway"});
  } else if (model == "amended") {
    allowed = with_physical(base);
    allowed.insert({"stats", "n_samples"});
  } else if (model == "volterra") {
    allowed = with_physical(base);
    allowed.insert({"stats", "dt", "tau_min"});
  } else {
    throw config_error("model must be classical-al, amended, or volterra");
  }
  check_keys(kv, allowed, "evolve");
  setup_threads(kv);
  const double r0 = to_double("r0", require(kv, "r0"));
  const double v0 = to_double("v0", require(kv, "v0"));
  const double T = to_double("T", require(kv, "T"));

  jrr::Trajectory tr;
  if (model == "classical-al") {
    const double gamma = to_double("gamma", require(kv, "gamma"));
    const double omega0 = to_double("omega0", require(kv, "omega0"));
    const double dt = to_double("dt", require(kv, "dt"));
    const bool suppress =
        to_bool("suppress_runaway", get_or(kv, "suppress_runaway", "true"));
    tr = jrr::al_trajectory(gamma, omega0, r0, v0, T, dt, suppress);
  } else {
    const auto rp = reduced_from(kv);
    const auto stats = to_stats(get_or(kv, "stats", "quantum"));
    if (model == "amended") {
      const long n = to_long("n_samples", require(kv, "n_samples"));
      if (n < 8) throw config_error("n_samples must be >= 8");
      tr = jrr::amended_trajectory(r0, v0, T, static_cast<std::size_t>(n), rp, stats);
    } else {
      const double dt = to_double("dt", require(kv, "dt"));
      const double tau_min = to_double("tau_min", get_or(kv, "tau_min", "1e-3"));
      tr = jrr::volterra_evolve(r0, v0, T, dt, tau_min, rp, stats);
    }
  }
  jrr::write_text_file(require(kv, "out"), jrr::trajectory_csv(tr));
  return 0;
}

int cmd_markov_probe(const KV& kv) {
  check_keys(kv,
             with_physical({"threads", "out", "stats", "tau", "chi_sequence",
                            "tol", "tau_min"}),
             "markov-probe");
  setup_threads(kv);
  const auto rp = reduced_from(kv);
  const auto stats = to_stats(get_or(kv, "stats", "quantum"));
  jrr::require_valid_stats(stats, rp.beta_omegaI);
  const double tau = to_double("tau", require(kv, "tau"));
  const auto chis = to_list("chi_sequence", require(kv, "chi_sequence"));
  const double tol = to_double("tol", get_or(kv, "tol", "1e-8"));
  const double tau_min = to_double("tau_min", get_or(kv, "tau_min", "1e-3"));
  const auto ds = jrr::markov_limit_probe(tau, chis, rp, stats, tol, tau_min);

  std::string csv = "chi,D\n";
  for (std::size_t i = 0; i < chis.size(); ++i)
    csv += jrr::format_g17(chis[i]) + "," + jrr::format_g17(ds[i]) + "\n";
  jrr::write_text_file(require(kv, "out"), csv);
  return 0;
}

struct SubArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out, stats, model, complex_z;
  long threads = -1;
  bool boundary = false, no_suppress = false;
};

// merge config file, --set pairs, then named flags (flags win)
KV resolve(const SubArgs& a) {
  KV kv;
  if (!a.config.empty()) kv = parse_config_file(a.config);
  apply_set(kv, a.sets);
  if (!a.out.empty()) kv["out"] = a.out;
  if (!a.stats.empty()) kv["stats"] = a.stats;
  if (!a.model.empty()) kv["model"] = a.model;
  if (a.threads >= 0) kv["threads"] = std::to_string(a.threads);
  if (a.boundary) kv["mode"] = "boundary";
  if (!a.complex_z.empty()) {
    kv["mode"] = "complex";
    kv["z"] = a.complex_z;
  }
  if (a.no_suppress) kv["suppress_runaway"] = "false";
  return kv;
}

void add_common(CLI::App* sub, SubArgs& a) {
  sub->add_option("--config", a.config, "flat key = value config file");
  sub->add_option("--set", a.sets, "override a config key, key=value")->take_all();
  sub->add_option("--out", a.out, "output file path");
  sub->add_option("--threads", a.threads, "worker threads (0 = auto)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"amended radiation reaction toolkit"};
  app.require_subcommand(1);

  std::map<std::string, SubArgs> args;
  std::map<std::string, int (*)(const KV&)> runners = {
      {"kernel", cmd_kernel},         {"spectrum", cmd_spectrum},
      {"flo-scan", cmd_flo_scan},     {"roots", cmd_roots},
      {"evolve", cmd_evolve},         {"markov-probe", cmd_markov_probe},
  };

  for (auto& [name, fn] : runners) {
    auto* sub = app.add_subcommand(name);
    auto& a = args[name];
    add_common(sub, a);
    if (name != "roots") sub->add_option("--stats", a.stats, "quantum|classical");
    if (name == "spectrum") {
      sub->add_flag("--boundary", a.boundary, "evaluate on the real axis");
      sub->add_option("--complex", a.complex_z, "evaluate at one point, re,im");
    }
    if (name == "evolve") {
      sub->add_option("--model", a.model, "classical-al|amended|volterra");
      sub->add_flag("--no-suppress-runaway", a.no_suppress,
                    "keep the runaway mode excited (a(0) = 0 closure)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return runners.at(name)(resolve(args.at(name)));
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const jrr::invalid_combination& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const jrr::runaway_overflow& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return 4;
  } catch (const jrr::convergence_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const jrr::near_resonance_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const jrr::bandwidth_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const jrr::contour_resolution_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const jrr::contour_degenerate_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
