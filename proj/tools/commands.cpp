#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "selftest.hpp"
#include "vilenkin/error.hpp"
#include "vilenkin/experiments.hpp"
#include "vilenkin/io.hpp"
#include "vilenkin/martingale.hpp"
#include "vilenkin/norms.hpp"

namespace vilenkin::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : Error {
  using Error::Error;
};

struct OptionSpec {
  const char* key;
  const char* help;
};

const std::vector<OptionSpec> kCommon = {
    {"m", "generator sequence: 2^, 2,3,4 or (2,3)^"},
    {"N", "resolution"},
    {"p", "exponent"},
    {"seed", "random seed"},
    {"format", "comma list of csv, json, svg, binary"},
};

const std::map<std::string, std::vector<OptionSpec>> kCommandOptions = {
    {"transform",
     {{"input", "function file (index,re,im CSV or VLK1 binary)"},
      {"input-format", "csv or binary (default: by extension)"},
      {"direction", "forward or inverse"}}},
    {"dirichlet", {{"n", "kernel index"}}},
    {"lebesgue", {{"convention", "auto, from0 or from1"}, {"limit", "largest n + 1"}}},
    {"atom",
     {{"mode", "generate or validate"},
      {"rank", "support rank r"},
      {"base", "comma list of the first r coordinates of the support coset"},
      {"input", "function file to validate"},
      {"input-format", "csv or binary"},
      {"fill", "fraction of the sup bound used by generated atoms"}}},
    {"counterexample",
     {{"rule", "divergent, gap or explicit"},
      {"alphas", "comma list of alpha_k"},
      {"lambdas", "comma list of lambda_k for rule=explicit"},
      {"phi", "constant:c, log or power:s"}}},
    {"scan",
     {{"trials", "random atoms per resolution"},
      {"functions", "random functions per resolution"},
      {"resolutions", "comma list of N"},
      {"variant", "scan variant"},
      {"phi", "constant:c, log or power:s"},
      {"candidates", "comma list of candidate indices"},
      {"f-rule", "gap or fast_decay"},
      {"n-rule", "alphas, Mn or Mn_plus_1"},
      {"rho", "rho for the rho_bounded variant"},
      {"R", "evaluation resolution of the upper estimate"},
      {"limit", "largest n + 1"},
      {"reference-N", "reference resolution"},
      {"stability", "stability factor"},
      {"growth-run", "increasing run length"},
      {"growth-factor", "growth factor"},
      {"tolerance", "equality tolerance"}}},
    {"selftest", {}},
};

const std::map<std::string, std::string> kDescriptions = {
    {"transform", "forward or inverse transform of a function file"},
    {"dirichlet", "emit D_n and check the closed and scale forms"},
    {"lebesgue", "L_n table with its two-sided bounds"},
    {"atom", "generate or validate a p-atom"},
    {"counterexample", "build a martingale spec and its coefficients"},
    {"scan", "run an experiment scenario by name"},
    {"selftest", "closed-form identities as assertions"},
};

const std::vector<std::string> kScans = {"atom_ratio", "divergence",     "boundedness",
                                         "simon",      "modulus",        "supp_measure",
                                         "lower_estimate", "upper_estimate"};

template <class T>
T to_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw UsageError("option " + key + ": bad number '" + text + "'");
  return v;
}

template <class T>
std::vector<T> to_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(to_number<T>(key, item));
  return out;
}

template <class T>
T number_or(const RunConfig& cfg, const std::string& key, T fallback) {
  const auto v = cfg.get(key);
  return v ? to_number<T>(key, *v) : fallback;
}

std::string required(const RunConfig& cfg, const std::string& key) {
  const auto v = cfg.get(key);
  if (!v) throw UsageError(cfg.command + " needs --" + key);
  return *v;
}

class Artifacts {
 public:
  Artifacts(const RunConfig& cfg, std::ostream& log)
      : cfg_(cfg), dir_(resolve_out_dir(cfg.out_dir.empty() ? std::nullopt : std::optional(cfg.out_dir))), log_(log) {}

  void csv(const std::string& name, const std::string& body) {
    write(name + ".csv", cfg_.header("# ") + body);
  }
  void json(const std::string& name, nlohmann::json j) {
    j["run_config"] = cfg_.entries();
    write(name + ".json", j.dump(2) + "\n");
  }
  void svg(const std::string& name, const std::string& body) {
    write(name + ".svg", "<!--\n" + cfg_.header("# ") + "-->\n" + body);
  }
  void binary(const std::string& name, const detail::ResolvedArray& values) {
    std::ostringstream os(std::ios::binary);
    io::write_binary(os, values);
    write(name + ".bin", os.str());
    write(name + ".bin.cfg", cfg_.to_text());
  }

 private:
  void write(const std::string& file, const std::string& bytes) {
    fs::create_directories(dir_);
    const fs::path path = fs::path(dir_) / file;
    std::ofstream out(path, std::ios::binary);
    out << bytes;
    if (!out) throw Error("cannot write " + path.string());
    log_ << "wrote " << path.string() << "\n";
  }

  const RunConfig& cfg_;
  std::string dir_;
  std::ostream& log_;
};

std::string grid_csv(const detail::ResolvedArray& values) {
  std::ostringstream os;
  io::write_csv(os, values);
  return os.str();
}

GridFunction load_function(const RunConfig& cfg, const GeneratorSequence& m) {
  const std::string path = required(cfg, "input");
  const std::string fmt = cfg.get_or("input-format", fs::path(path).extension() == ".bin" ? "binary" : "csv");
  if (fmt != "csv" && fmt != "binary") throw UsageError("input-format must be csv or binary");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return io::read_grid_function(in, fmt == "binary", m, cfg.N);
}

int cmd_transform(const RunConfig& cfg, const GeneratorSequence& m, std::ostream& out) {
  const GridFunction f = load_function(cfg, m);
  const std::string dir = cfg.get_or("direction", "forward");
  std::vector<Complex> result;
  if (dir == "forward")
    result = forward(f).data();
  else if (dir == "inverse")
    result = inverse(SpectralVector(m, cfg.N, f.data())).data();
  else
    throw UsageError("direction must be forward or inverse");
  const GridFunction g(m, cfg.N, std::move(result));
  Artifacts art(cfg, out);
  if (cfg.format.empty() || cfg.wants("csv")) art.csv("transform", grid_csv(g));
  if (cfg.wants("binary")) art.binary("transform", g);
  return kExitOk;
}

int cmd_dirichlet(const RunConfig& cfg, const GeneratorSequence& m, std::ostream& out) {
  const auto n = to_number<Index>("n", required(cfg, "n"));
  if (n > m.scaled_base(cfg.N)) throw UsageError("n must be at most M_N");
  const GridFunction direct = dirichlet_direct(m, n, cfg.N);
  const GridFunction closed = n == 0 ? GridFunction(m, cfg.N) : dirichlet_closed(m, n, cfg.N);
  double err = 0;
  for (Index i = 0; i < direct.size(); ++i) err = std::max(err, std::abs(direct[i] - closed[i]));
  out << "n=" << n << " closed_vs_direct_max_error=" << io::fixed12(err) << "\n";
  bool ok = err <= 1e-9;
  for (std::size_t k = 0; k <= cfg.N; ++k) {
    if (m.scaled_base(k) != n) continue;
    const GridFunction scale = dirichlet_at_scale(m, k, cfg.N);
    double e = 0;
    for (Index i = 0; i < direct.size(); ++i) e = std::max(e, std::abs(direct[i] - scale[i]));
    out << "n=M_" << k << " scale_identity_max_error=" << io::fixed12(e) << "\n";
    ok = ok && e <= 1e-9;
  }
  Artifacts art(cfg, out);
  if (cfg.format.empty() || cfg.wants("csv")) art.csv("dirichlet", grid_csv(direct));
  if (cfg.wants("binary")) art.binary("dirichlet", direct);
  return ok ? kExitOk : kExitViolated;
}

int cmd_lebesgue(const RunConfig& cfg, const GeneratorSequence& m, std::ostream& out) {
  const auto limit = number_or<Index>(cfg, "limit", 0);
  const std::string conv_text = cfg.get_or("convention", "auto");
  DigitConvention conv;
  if (conv_text == "auto") {
    const auto verdict = select_convention(m, cfg.N, limit);
    conv = verdict.winner;
    out << "convention violations: from0=" << verdict.violations_from0.size()
        << " from1=" << verdict.violations_from1.size() << " winner=" << to_string(conv) << "\n";
  } else {
    conv = parse_convention(conv_text);
  }
  const auto table = lebesgue_table(m, cfg.N, conv, limit);
  std::vector<NormReport> rows;
  std::size_t violations = 0;
  for (const auto& r : table) {
    rows.push_back(io::to_norm_report(r));
    if (!r.within_bounds()) ++violations;
  }
  out << "rows=" << rows.size() << " bracket_violations=" << violations << "\n";
  std::ostringstream body;
  io::write_csv(body, rows);
  Artifacts(cfg, out).csv("lebesgue", body.str());
  return violations ? kExitViolated : kExitOk;
}

GroupPoint base_point(const RunConfig& cfg, const GeneratorSequence& m, std::size_t rank) {
  GroupPoint base;
  if (const auto text = cfg.get("base")) {
    for (auto c : to_list<Radix>("base", *text)) base.coords.push_back(c);
    if (base.coords.size() != rank) throw UsageError("base needs exactly rank coordinates");
    for (std::size_t k = 0; k < rank; ++k)
      if (base.coords[k] >= m.radix(k)) throw UsageError("base coordinate out of range");
  } else {
    base.coords.assign(rank, 0);
  }
  return base;
}

int cmd_atom(const RunConfig& cfg, const GeneratorSequence& m, std::ostream& out) {
  const auto rank = number_or<std::size_t>(cfg, "rank", 0);
  if (rank >= cfg.N) throw UsageError("rank must be below N");
  const GroupPoint base = base_point(cfg, m, rank);
  const std::string mode = cfg.get_or("mode", "generate");
  if (mode == "validate") {
    const GridFunction f = load_function(cfg, m);
    try {
      validate_atom(f, cfg.p, rank, base);
    } catch (const AtomError& e) {
      out << "invalid:";
      for (auto v : e.violations()) out << ' ' << to_string(v);
      out << "\n";
      return kExitViolated;
    }
    out << "valid\n";
    return kExitOk;
  }
  if (mode != "generate") throw UsageError("mode must be generate or validate");
  std::mt19937_64 rng(cfg.seed);
  const PAtom atom = random_atom(m, cfg.N, cfg.p, rank, base, rng, number_or<double>(cfg, "fill", 0.9));
  Artifacts art(cfg, out);
  if (cfg.format.empty() || cfg.wants("csv")) art.csv("atom", grid_csv(atom.values));
  if (cfg.wants("binary")) art.binary("atom", atom.values);
  return kExitOk;
}

int cmd_counterexample(const RunConfig& cfg, const GeneratorSequence& m, std::ostream& out) {
  const LambdaRule rule = parse_lambda_rule(cfg.get_or("rule", "divergent"));
  const auto phi = PhiSequence::parse(cfg.get_or("phi", "constant:1"));
  std::vector<Index> alphas = cfg.get("alphas") ? to_list<Index>("alphas", *cfg.get("alphas"))
                                                : default_alphas(m, cfg.N);
  std::vector<double> lambdas;
  if (const auto l = cfg.get("lambdas")) lambdas = to_list<double>("lambdas", *l);
  const MartingaleSpec spec = build_counterexample(m, cfg.p, alphas, rule, phi, cfg.N, lambdas);
  out << "terms=" << spec.alphas.size() << " realized=" << spec.realized_terms()
      << " budget=" << io::fixed12(spec.budget()) << "\n";
  Artifacts art(cfg, out);
  const bool defaults = cfg.format.empty();
  if (defaults || cfg.wants("json")) art.json("counterexample", io::to_json(spec));
  if (defaults || cfg.wants("csv")) art.csv("counterexample_coefficients", grid_csv(closed_coefficients(spec)));
  if (cfg.wants("binary")) art.binary("counterexample", spec.realized);
  return kExitOk;
}

std::vector<std::size_t> resolutions(const RunConfig& cfg) {
  if (const auto r = cfg.get("resolutions")) {
    auto out = to_list<std::size_t>("resolutions", *r);
    if (out.empty()) throw UsageError("resolutions is empty");
    return out;
  }
  return {cfg.N};
}

int cmd_scan(const RunConfig& cfg, const GeneratorSequence& m, std::ostream& out) {
  const std::string name = required(cfg, "scan");
  ScanThresholds thr;
  thr.stability_factor = number_or(cfg, "stability", thr.stability_factor);
  thr.growth_run = number_or(cfg, "growth-run", thr.growth_run);
  thr.growth_factor = number_or(cfg, "growth-factor", thr.growth_factor);
  thr.equality_tolerance = number_or(cfg, "tolerance", thr.equality_tolerance);
  const auto functions = number_or<std::size_t>(cfg, "functions", 50);

  ScenarioResult r;
  if (name == "atom_ratio") {
    r = atom_ratio_scan(m, cfg.p, cfg.N, number_or<std::size_t>(cfg, "trials", 200), cfg.seed, thr,
                        number_or<std::size_t>(cfg, "reference-N", 0));
  } else if (name == "divergence") {
    std::vector<Index> cands;
    if (const auto c = cfg.get("candidates")) cands = to_list<Index>("candidates", *c);
    r = divergence_scan(m, cfg.p, parse_divergence_variant(cfg.get_or("variant", "Mn_plus_1")),
                        PhiSequence::parse(cfg.get_or("phi", "constant:1")), resolutions(cfg), cands, thr);
  } else if (name == "boundedness") {
    r = boundedness_scan(m, cfg.p, parse_boundedness_variant(cfg.get_or("variant", "Mn")),
                         resolutions(cfg), functions, cfg.seed, thr,
                         number_or<std::size_t>(cfg, "rho", 2));
  } else if (name == "simon") {
    r = simon_scan(m, cfg.p, resolutions(cfg), functions, cfg.seed, thr);
  } else if (name == "modulus") {
    r = modulus_convergence_scan(m, cfg.p, parse_modulus_function_rule(cfg.get_or("f-rule", "gap")),
                                 parse_modulus_index_rule(cfg.get_or("n-rule", "alphas")), cfg.N, thr);
  } else if (name == "supp_measure") {
    r = supp_measure_scan(m, cfg.N);
  } else if (name == "lower_estimate") {
    r = lower_estimate_scan(m, cfg.N, number_or<Index>(cfg, "limit", 0));
  } else if (name == "upper_estimate") {
    r = upper_estimate_scan(m, cfg.N, number_or<std::size_t>(cfg, "R", cfg.N + 2));
  } else {
    throw UsageError("unknown scan '" + name + "'");
  }

  out << "scenario=" << r.scenario << " verdict=" << to_string(r.verdict) << "\n";
  for (const auto& [k, v] : r.constants) out << "  " << k << "=" << io::fixed12(v) << "\n";
  Artifacts art(cfg, out);
  const bool defaults = cfg.format.empty();
  if (defaults || cfg.wants("json")) art.json(name, io::to_json(r));
  if (defaults || cfg.wants("csv")) {
    std::ostringstream os;
    io::write_csv(os, r);
    art.csv(name, os.str());
  }
  if (cfg.wants("svg")) {
    std::ostringstream os;
    io::write_svg(os, r);
    art.svg(name, os.str());
  }
  return r.verdict == Verdict::violated ? kExitViolated : kExitOk;
}

int cmd_selftest(std::ostream& out) {
  std::size_t failed = 0;
  for (const auto& c : run_selftest()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
    failed += !c.passed;
  }
  return failed ? kExitViolated : kExitOk;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct OptionValues {
  std::map<std::string, std::string> values;
  std::string config;
  std::string out;
};

void add_options(CLI::App& app, OptionValues& store, const std::vector<OptionSpec>& specs) {
  for (const auto& s : specs)
    app.add_option(std::string("--") + s.key, store.values[s.key], s.help);
}

void merge(RunConfig& cfg, CLI::App& app, const OptionValues& store) {
  for (const auto& [key, value] : store.values)
    if (app.count("--" + key) > 0) cfg.set(key, value);
  if (!store.out.empty()) cfg.out_dir = store.out;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "selftest") return cmd_selftest(out);
    if (!kCommandOptions.count(cfg.command)) throw UsageError("unknown command '" + cfg.command + "'");
    const auto m = GeneratorSequence::parse(cfg.generators);
    check_resolution(m, cfg.N);
    if (cfg.command == "transform") return cmd_transform(cfg, m, out);
    if (cfg.command == "dirichlet") return cmd_dirichlet(cfg, m, out);
    if (cfg.command == "lebesgue") return cmd_lebesgue(cfg, m, out);
    if (cfg.command == "atom") return cmd_atom(cfg, m, out);
    if (cfg.command == "counterexample") return cmd_counterexample(cfg, m, out);
    return cmd_scan(cfg, m, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vilenkin-Fourier analysis at finite resolution"};
  app.require_subcommand(0, 1);
  OptionValues top;
  app.add_option("--config", top.config, "key=value file or artifact with an embedded header");
  app.add_option("--out", top.out, std::string("output directory (default $") + kOutDirEnv + " or " +
                                       kDefaultOutDir + ")");

  std::map<std::string, OptionValues> stores;
  std::map<std::string, CLI::App*> subs;
  std::string scan_name;
  for (const auto& [name, specs] : kCommandOptions) {
    auto* sub = app.add_subcommand(name, kDescriptions.at(name));
    auto& store = stores[name];
    add_options(*sub, store, kCommon);
    add_options(*sub, store, specs);
    sub->add_option("--config", store.config, "key=value file or artifact with an embedded header");
    sub->add_option("--out", store.out, "output directory");
    subs[name] = sub;
  }
  subs["scan"]->add_option("name", scan_name, "scan to run")->check(CLI::IsMember(kScans));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    if (!top.config.empty()) cfg = parse_config(read_file(top.config));
    CLI::App* chosen = nullptr;
    for (auto& [name, sub] : subs)
      if (sub->parsed()) chosen = sub;
    if (chosen) {
      auto& store = stores[chosen->get_name()];
      if (!store.config.empty()) cfg = parse_config(read_file(store.config));
      cfg.command = chosen->get_name();
      if (!top.out.empty()) cfg.out_dir = top.out;
      merge(cfg, *chosen, store);
      if (!scan_name.empty()) cfg.set("scan", scan_name);
    } else if (!top.out.empty()) {
      cfg.out_dir = top.out;
    }
    if (cfg.command.empty()) {
      err << app.help();
      return kExitUsage;
    }
    return execute(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace vilenkin::cli
