#include "masep/cli.hpp"

#include "masep/json.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

namespace masep {

namespace {

struct Options {
  int n = 2;
  int l = 2;
  std::string q = "1";
  std::string spec;
  std::string side = "left";
  std::string a = "1";
  std::string c = "1";
  std::string left;
  std::string right;
  int samples = 5;
  std::uint64_t seed = 0;
  int k_max = 4;
  Index cap = 256;
  std::int64_t events = 1000000;
  std::int64_t burn_in = 10000;
  std::int64_t stride = 10000;
  int replicas = 1;
  int threads = 0;
  bool track_transitions = false;
  std::vector<int> initial;
  std::string sim_report;
  std::string csv;
  double tv_max = 0.01;
  std::string out;
  std::string config;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// key = value lines; '#' starts a comment. Keys are long flag names.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

bool flag_given(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

/// Appends file entries for every flag not already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "config") throw UsageError("config files cannot include other config files");
    if (flag_given(args, key)) continue;
    if (key == "track-transitions") {
      if (value == "true") args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

int thread_budget(int requested) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("MASEP_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) threads = std::min(threads, cap);
    }
  }
  return std::max(1, threads);
}

template <typename T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> results(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) results[i] = fn(i);
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return results;
}

Side side_of(const Options& o) { return parse_side(o.side); }

std::vector<BoundarySpec> specs_for(const Options& o) {
  const Rat a = Rat::parse(o.a);
  const Rat c = Rat::parse(o.c);
  if (!o.spec.empty()) return {parse_spec(o.spec, side_of(o), o.n, a, c)};
  std::vector<BoundarySpec> specs;
  for (BoundarySpec s : enumerate_specs(o.n)) {
    specs.push_back(BoundarySpec::make(side_of(o), a, c, s.s1, s.s2, s.f2, s.f1, s.variant, o.n));
  }
  return specs;
}

LatticeModel model_from(const Options& o) {
  if (o.left.empty() || o.right.empty()) throw UsageError("--left and --right are required");
  const Rat a = Rat::parse(o.a);
  const Rat c = Rat::parse(o.c);
  LatticeModel m;
  m.n_species = o.n;
  m.sites = o.l;
  m.q = Rat::parse(o.q);
  m.left = parse_spec(o.left, Side::Left, o.n, a, c);
  m.right = parse_spec(o.right, Side::Right, o.n, a, c);
  m.validate();
  return m;
}

SimConfig sim_config_from(const Options& o) {
  SimConfig cfg;
  cfg.seed = o.seed;
  cfg.total_events = o.events;
  cfg.burn_in_events = o.burn_in;
  cfg.record_stride = o.stride;
  cfg.track_transitions = o.track_transitions;
  if (!o.initial.empty()) cfg.initial = o.initial;
  cfg.validate();
  return cfg;
}

struct Outcome {
  Json reports = Json::array();
  bool failed = false;
};

Outcome run_check(const std::string& name, const Options& o) {
  const Rat q = Rat::parse(o.q);
  const BulkParams bulk{o.n, q};
  std::vector<CheckReport> reports;

  if (name == "ybe") {
    reports.push_back(check_ybe(bulk, o.samples, o.seed));
  } else if (name == "runitarity") {
    reports.push_back(check_r_unitarity(bulk, o.samples, o.seed));
  } else if (name == "hecke") {
    reports.push_back(check_hecke(bulk));
  } else if (name == "transfer") {
    std::vector<LatticeModel> models;
    if (o.left.empty() && o.right.empty()) {
      const Rat a = Rat::parse(o.a);
      const Rat c = Rat::parse(o.c);
      for (const auto& l : enumerate_specs(o.n)) {
        for (const auto& r : enumerate_specs(o.n)) {
          LatticeModel m{o.n, o.l, q,
                         BoundarySpec::make(Side::Left, a, c, l.s1, l.s2, l.f2, l.f1, l.variant, o.n),
                         BoundarySpec::make(Side::Right, a, c, r.s1, r.s2, r.f2, r.f1, r.variant, o.n)};
          models.push_back(m);
        }
      }
    } else {
      models.push_back(model_from(o));
    }
    reports = parallel_map<CheckReport>(models.size(), thread_budget(o.threads), [&](std::size_t i) {
      return check_transfer_commutation(models[i], o.samples, o.seed, o.cap);
    });
  } else {
    const auto specs = specs_for(o);
    std::function<CheckReport(const BoundarySpec&)> one;
    if (name == "reflection") {
      one = [&](const BoundarySpec& s) { return check_reflection(s, q, o.samples, o.seed); };
    } else if (name == "kunitarity") {
      one = [&](const BoundarySpec& s) { return check_k_unitarity(s, q, o.samples, o.seed); };
    } else if (name == "algebra") {
      one = [&](const BoundarySpec& s) { return check_boundary_algebra(s, q); };
    } else if (name == "lemma") {
      one = [&](const BoundarySpec& s) { return check_lemma_relations(s, q, o.k_max); };
    } else if (name == "poly") {
      one = [&](const BoundarySpec& s) { return check_poly_relations(s, q); };
    } else if (name == "cyclotomic") {
      one = [&](const BoundarySpec& s) { return check_cyclotomic_map(s, q); };
    } else if (name == "bijection") {
      one = [&](const BoundarySpec& s) { return check_right_bijection(s, q); };
    } else {
      throw UsageError("unknown check '" + name + "'");
    }
    reports = parallel_map<CheckReport>(specs.size(), thread_budget(o.threads),
                                        [&](std::size_t i) { return one(specs[i]); });
  }

  std::stable_sort(reports.begin(), reports.end(), [](const CheckReport& x, const CheckReport& y) {
    return std::tie(x.check, x.params) < std::tie(y.check, y.params);
  });
  Outcome out;
  for (const auto& r : reports) {
    out.reports.push_back(r);
    out.failed = out.failed || !r.passed();
  }
  return out;
}

Outcome run_boundaries(const std::string& name, const Options& o) {
  Outcome out;
  if (name == "enumerate") {
    Options all = o;
    all.spec.clear();
    for (const auto& s : specs_for(all)) out.reports.push_back(s);
    return out;
  }
  if (o.spec.empty()) throw UsageError("boundaries show needs --spec");
  const Rat q = Rat::parse(o.q);
  const BoundarySpec spec = specs_for(o).front();
  spec.validate_for(q);
  const BoundarySpec ks = spec.k_spec();
  const auto parts = decompose_boundary(spec, q);
  const auto [at, ct] = tilde_rates(spec.rate_a, spec.rate_c, q);
  out.reports.push_back(Json{{"spec", spec},
                             {"k_spec", ks},
                             {"tilde_rates", Json{{"a", at}, {"c", ct}}},
                             {"matrix", matrix_to_json(build_boundary(spec, q))},
                             {"b0", matrix_to_json(parts.b0)},
                             {"b0_plus", matrix_to_json(parts.b0_plus)},
                             {"b0_minus", matrix_to_json(parts.b0_minus)},
                             {"transitions", boundary_transitions(ks, q)}});
  return out;
}

SimReport load_sim_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read simulation report '" + path + "'");
  const Json doc = Json::parse(in);
  const Json& reports = doc.at("reports");
  if (reports.empty()) throw UsageError("simulation report file holds no reports");
  return reports.at(0).get<SimReport>();
}

Outcome run_simulation(const std::string& command, const Options& o) {
  const LatticeModel model = model_from(o);
  Outcome out;
  if (command == "stationary") {
    out.reports.push_back(stationary_distribution(model));
    return out;
  }
  if (command == "irreducible") {
    const auto graph = transition_graph(model);
    std::vector<std::vector<Index>> adjacency(graph.size());
    for (std::size_t i = 0; i < graph.size(); ++i) {
      for (const auto& e : graph[i]) adjacency[i].push_back(e.to);
    }
    int components = 0;
    strongly_connected_components(adjacency, &components);
    out.reports.push_back(Json{{"irreducible", components == 1},
                               {"components", components},
                               {"configurations", graph.size()}});
    return out;
  }
  const auto simulate_now = [&] {
    return simulate_replicas(model, sim_config_from(o), o.replicas, thread_budget(o.threads));
  };
  if (command == "simulate") {
    const SimReport rep = simulate_now();
    if (!o.csv.empty()) {
      std::ofstream csv(o.csv);
      if (!csv) throw UsageError("cannot write '" + o.csv + "'");
      csv << densities_csv(rep);
    }
    out.reports.push_back(rep);
    return out;
  }
  const SimReport rep = o.sim_report.empty() ? simulate_now() : load_sim_report(o.sim_report);
  if (rep.n_species != model.n_species || rep.sites != model.sites) {
    throw Error(ErrorKind::InvalidComparison, "simulation report was produced for a different lattice");
  }
  const Divergence d = compare_empirical(rep, stationary_distribution(model));
  const bool passed = d.total_variation < o.tv_max;
  out.reports.push_back(Json{{"divergence", d},
                             {"tv_max", o.tv_max},
                             {"passed", passed},
                             {"events", rep.events},
                             {"seed", rep.seed},
                             {"generator", rep.generator}});
  out.failed = !passed;
  return out;
}

void add_options(CLI::App& app, Options& o) {
  app.add_option("--n", o.n, "number of species N");
  app.add_option("--l", o.l, "number of sites L");
  app.add_option("--q", o.q, "bulk asymmetry as p/q");
  app.add_option("--spec", o.spec, "boundary s1,s2,f2,f1[,variant][:a=..,c=..]; all specs when omitted");
  app.add_option("--side", o.side, "side of --spec")->check(CLI::IsMember({"left", "right"}));
  app.add_option("--a", o.a, "default rate a (alpha or beta)");
  app.add_option("--c", o.c, "default rate c (gamma or delta)");
  app.add_option("--left", o.left, "left boundary spec");
  app.add_option("--right", o.right, "right boundary spec");
  app.add_option("--samples", o.samples, "sample points per check")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "seed for sample points and simulation");
  app.add_option("--k-max", o.k_max, "largest k in the lemma families")->check(CLI::PositiveNumber);
  app.add_option("--cap", o.cap, "dimension cap for transfer matrices")->check(CLI::PositiveNumber);
  app.add_option("--events", o.events, "simulated events, burn-in included");
  app.add_option("--burn-in", o.burn_in, "events discarded before recording");
  app.add_option("--stride", o.stride, "events per batch for current errors");
  app.add_option("--replicas", o.replicas, "independent replicas")->check(CLI::PositiveNumber);
  app.add_option("--threads", o.threads, "worker threads (0: MASEP_THREADS or all cores)");
  app.add_flag("--track-transitions", o.track_transitions, "record per-transition counts");
  app.add_option("--initial", o.initial, "initial configuration, one species per site")->delimiter(',');
  app.add_option("--sim-report", o.sim_report, "compare: reuse a simulate report instead of simulating");
  app.add_option("--csv", o.csv, "simulate: also write densities and currents as CSV");
  app.add_option("--tv-max", o.tv_max, "compare: total-variation threshold");
  app.add_option("--out", o.out, "write the JSON report here instead of stdout");
  app.add_option("--config", o.config, "key = value file mirroring the flags");
}

std::map<std::string, std::string> effective_config(const CLI::App& app) {
  std::map<std::string, std::string> config;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string key = opt->get_name();
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    std::string value;
    for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    config[key] = value;
  }
  return config;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact checks and simulation for integrable multi-species open ASEP boundaries", "masep"};
  app.fallthrough();
  app.require_subcommand(1);
  add_options(app, o);

  const std::vector<std::string> check_names{"ybe",   "runitarity", "reflection", "kunitarity", "hecke",
                                             "algebra", "lemma",      "poly",       "cyclotomic", "transfer", "bijection"};
  CLI::App* check = app.add_subcommand("check", "verify an integrability identity");
  check->require_subcommand(1);
  for (const auto& name : check_names) check->add_subcommand(name);
  CLI::App* boundaries = app.add_subcommand("boundaries", "list or inspect boundary matrices");
  boundaries->require_subcommand(1);
  boundaries->add_subcommand("enumerate", "all boundaries for N species");
  boundaries->add_subcommand("show", "matrix, parts and transitions of --spec");
  for (const char* name : {"stationary", "irreducible", "simulate", "compare"}) app.add_subcommand(name);

  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  try {
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const CLI::App* cmd = app.get_subcommands().front();
    std::string command = cmd->get_name();
    Outcome outcome;
    if (cmd == check) {
      const std::string name = check->get_subcommands().front()->get_name();
      command += " " + name;
      outcome = run_check(name, o);
    } else if (cmd == boundaries) {
      const std::string name = boundaries->get_subcommands().front()->get_name();
      command += " " + name;
      outcome = run_boundaries(name, o);
    } else {
      outcome = run_simulation(command, o);
    }

    const std::string text = make_envelope(command, effective_config(app), outcome.reports).dump(2) + "\n";
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out);
      if (!file) throw UsageError("cannot write '" + o.out + "'");
      file << text;
    }
    return outcome.failed ? 1 : 0;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace masep
