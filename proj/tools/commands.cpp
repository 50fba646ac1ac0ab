#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sbqa/errors.hpp"
#include "sbqa/forge.hpp"
#include "sbqa/io.hpp"
#include "sbqa/reduce.hpp"

namespace sbqa::cli {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"sbm", {"a0", "c0", "n_steps", "total_time", "nonlinearity", "threshold_slope", "n_replicas"}},
      {"sbqa",
       {"a0", "c0", "n_steps", "total_time", "nonlinearity", "threshold_slope", "replicas", "n_sets", "beta", "alpha",
        "gamma0"}},
      {"sa", {"sweeps", "n_reads", "beta_min", "beta_max"}},
      {"dtsqa", {"replicas", "beta", "gamma0", "alpha", "n_steps"}},
  };
  return keys;
}

Nonlinearity parse_nonlinearity(const std::string& s) {
  if (s == "ballistic") return Nonlinearity::ballistic;
  if (s == "discrete") return Nonlinearity::discrete;
  if (s == "thresholded") return Nonlinearity::thresholded;
  throw UsageError("unknown nonlinearity '" + s + "' (ballistic, discrete, thresholded)");
}

std::string nonlinearity_name(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::ballistic:
      return "ballistic";
    case Nonlinearity::discrete:
      return "discrete";
    case Nonlinearity::thresholded:
      return "thresholded";
  }
  return "thresholded";
}

template <class T>
void take(const json& b, const char* key, T& dst) {
  if (b.contains(key)) dst = b.at(key).get<T>();
}

template <class T>
void take(const json& b, const char* key, std::optional<T>& dst) {
  if (b.contains(key) && !b.at(key).is_null()) dst = b.at(key).get<T>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

void set_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

// ---- instance generation -------------------------------------------------

struct GenSpec {
  std::string family;
  int size = 0;  // m, L, n or n_swap depending on the family
  int lz = 0;    // cubic/embedded depth, 0 means L
  int pegasus_m = 0;
  int s2q = 1;
  int s3q = 6;
  std::string dist;
  std::string fields;
};

const std::set<std::string> kFamilies{"zephyr", "cubic", "embedded", "square", "ring", "complete", "heavyhex"};

std::string default_dist(const std::string& family) {
  if (family == "square") return "pm1";
  if (family == "heavyhex") return "cauchy";
  if (family == "zephyr") return "uniform";
  return "normal";
}

std::string size_tag(const GenSpec& g) {
  if (g.family == "zephyr") return "m" + std::to_string(g.size);
  if (g.family == "cubic" || g.family == "embedded") {
    return "L" + std::to_string(g.size) + "x" + std::to_string(g.lz > 0 ? g.lz : g.size);
  }
  if (g.family == "square") return "L" + std::to_string(g.size);
  if (g.family == "heavyhex") return "nswap" + std::to_string(g.size);
  return "n" + std::to_string(g.size);
}

Instance generate(const GenSpec& g, std::uint64_t seed) {
  const auto dist = CouplingDistribution::parse(g.dist.empty() ? default_dist(g.family) : g.dist);
  std::optional<CouplingDistribution> fields;
  if (!g.fields.empty()) fields = CouplingDistribution::parse(g.fields);
  Instance inst;
  const int lz = g.lz > 0 ? g.lz : g.size;
  if (g.family == "zephyr") {
    inst.model = gen_zephyr_instance(g.size, seed);
  } else if (g.family == "cubic") {
    inst.model = gen_cubic_instance(g.size, lz, dist, seed);
  } else if (g.family == "embedded") {
    const int M = g.pegasus_m > 0 ? g.pegasus_m : g.size + 1;
    inst.model = embed_cubic_into_pegasus(gen_cubic_instance(g.size, lz, dist, seed), g.size, lz, M).physical;
  } else if (g.family == "square") {
    inst.model = ising_on_graph(gen_square_lattice(g.size, true), dist, seed, fields);
  } else if (g.family == "ring") {
    inst.model = ising_on_graph(gen_ring(g.size), dist, seed, fields);
  } else if (g.family == "complete") {
    inst.model = ising_on_graph(gen_complete(g.size), dist, seed, fields);
  } else if (g.family == "heavyhex") {
    inst.model = gen_heavyhex_hubo(g.size, g.s2q, g.s3q, dist, seed);
  } else {
    throw UsageError("unknown family '" + g.family + "'");
  }
  return inst;
}

double hubo_ground_energy(const HuboModel& m) {
  if (m.size() > 24) throw InputError("exhaustive HUBO enumeration is limited to 24 variables");
  SpinConfig s(m.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.size()); ++mask) {
    for (std::size_t i = 0; i < m.size(); ++i) s[i] = (mask >> i) & 1 ? 1 : -1;
    best = std::min(best, m.energy(s));
  }
  return best;
}

// ---- solver flags ----------------------------------------------------------

struct SolverFlags {
  std::string solver;
  std::string params_file;
  std::optional<int> steps, replicas, sets, reads;
  std::optional<double> beta, alpha, gamma0, a0, c0, total_time, slope, beta_min, beta_max;
  std::optional<std::string> nonlinearity;

  void add(CLI::App* app, bool require_solver) {
    auto* opt = app->add_option("--solver", solver, "sbm, sbqa, sa or dtsqa")
                    ->check(CLI::IsMember({"sbm", "sbqa", "sa", "dtsqa"}));
    if (require_solver) opt->required();
    app->add_option("--params", params_file, "JSON file with a parameter block");
    app->add_option("--steps", steps, "integration steps (sweeps for sa)");
    app->add_option("--replicas", replicas, "replicas (sbm, sbqa, dtsqa)");
    app->add_option("--sets", sets, "independent replica sets (sbqa)");
    app->add_option("--reads", reads, "independent reads (sa)");
    app->add_option("--beta", beta, "inverse temperature (sbqa, dtsqa)");
    app->add_option("--alpha", alpha, "schedule exponent (sbqa, dtsqa)");
    app->add_option("--gamma0", gamma0, "initial transverse field (sbqa, dtsqa)");
    app->add_option("--a0", a0, "detuning (sbm, sbqa)");
    app->add_option("--c0", c0, "coupling scale (sbm, sbqa)");
    app->add_option("--total-time", total_time, "evolution time T (sbm, sbqa)");
    app->add_option("--slope", slope, "threshold slope (sbm, sbqa)");
    app->add_option("--nonlinearity", nonlinearity, "ballistic, discrete or thresholded (sbm, sbqa)");
    app->add_option("--beta-min", beta_min, "hot end of the annealing ladder (sa)");
    app->add_option("--beta-max", beta_max, "cold end of the annealing ladder (sa)");
  }

  json block() const {
    json b = params_file.empty() ? json::object() : read_json_file(params_file);
    if (!b.is_object()) throw UsageError("--params must hold a JSON object");
    if (b.contains("params")) b = b.at("params");
    const bool sa = solver == "sa";
    if (steps) b[sa ? "sweeps" : "n_steps"] = *steps;
    if (replicas) {
      if (sa) throw UsageError("--replicas does not apply to sa (use --reads)");
      b[solver == "sbm" ? "n_replicas" : "replicas"] = *replicas;
    }
    if (sets) b["n_sets"] = *sets;
    if (reads) b["n_reads"] = *reads;
    if (beta) b["beta"] = *beta;
    if (alpha) b["alpha"] = *alpha;
    if (gamma0) b["gamma0"] = *gamma0;
    if (a0) b["a0"] = *a0;
    if (c0) b["c0"] = *c0;
    if (total_time) b["total_time"] = *total_time;
    if (slope) b["threshold_slope"] = *slope;
    if (nonlinearity) b["nonlinearity"] = *nonlinearity;
    if (beta_min) b["beta_min"] = *beta_min;
    if (beta_max) b["beta_max"] = *beta_max;
    return b;
  }

  SolverParams params() const { return params_from_json(solver, block()); }
};

SolverParams with_steps(SolverParams p, long steps) {
  std::visit(
      [steps](auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SaParams>) {
          v.sweeps = static_cast<int>(steps);
        } else {
          v.n_steps = static_cast<int>(steps);
        }
      },
      p);
  return p;
}

json run_to_json(const SolverRun& run) {
  json j;
  j["solver"] = run.solver;
  j["seed"] = run.seed;
  j["params"] = params_to_json(run.params);
  j["best_energy"] = number_or_null(run.best_energy);
  j["best_step"] = run.best_step;
  j["runtime_s"] = run.runtime_seconds;
  j["best_spins"] = run.best_spins;
  return j;
}

// ---- subcommands -----------------------------------------------------------

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string command;
};

int cmd_gen(const Context& ctx, const GenSpec& spec, int count, std::uint64_t seed, const std::string& reference,
            const std::string& format, const fs::path& out_dir) {
  if (count < 1) throw UsageError("--count must be >= 1");
  if (spec.size < 1) throw UsageError("the family size flag (--m, --L, --n or --nswap) is required");
  if (!spec.fields.empty() && spec.family != "ring" && spec.family != "complete" && spec.family != "square") {
    throw UsageError("--fields applies to ring, complete and square only");
  }
  fs::create_directories(out_dir);
  for (int k = 0; k < count; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    Instance inst = generate(spec, s);
    const bool exact = reference == "exact" || (reference == "auto" && inst.size() <= 20);
    if (exact) {
      inst.reference_energy = inst.is_ising() ? ground_state_energy(inst.ising()) : hubo_ground_energy(inst.hubo());
    } else if (reference != "none" && reference != "auto") {
      throw UsageError("--reference must be auto, exact or none");
    }
    inst.comments.push_back("generated: " + ctx.command);
    inst.comments.push_back("family " + spec.family + " " + size_tag(spec) + " dist " +
                            (spec.dist.empty() ? default_dist(spec.family) : spec.dist) + " seed " + std::to_string(s));
    const fs::path path =
        out_dir / (spec.family + "_" + size_tag(spec) + "_s" + std::to_string(s) + (format == "json" ? ".json" : ".txt"));
    save_instance(path, inst);
    ctx.out << path.string() << '\n';
  }
  return kExitOk;
}

struct HuboSolve {
  Reduction reduction;
  SolverRun run;
};

int cmd_solve(const Context& ctx, const std::string& instance_path, const SolverFlags& flags, std::uint64_t seed,
              bool autotune, int samples, int repetitions, const std::string& penalty, const std::string& out_path) {
  if (autotune && flags.solver != "sbqa") throw UsageError("--autotune applies to sbqa only");
  const SolverParams params = flags.params();
  const Instance inst = load_instance(instance_path);

  std::optional<Reduction> reduction;
  const IsingModel* model = nullptr;
  IsingModel reduced;
  if (inst.is_hubo()) {
    if (penalty.empty()) throw UsageError("HUBO instances need --penalty (a number or 'safe')");
    const double p = penalty == "safe" ? safe_penalty(inst.hubo()) : std::stod(penalty);
    reduction = reduce_hubo(inst.hubo(), p);
    reduced = reduction->ising();
    model = &reduced;
  } else {
    if (!penalty.empty()) throw UsageError("--penalty applies to HUBO instances only");
    model = &inst.ising();
  }

  json j;
  SolverRun run;
  if (autotune) {
    const auto tuned = autotune_sbqa(*model, samples, repetitions, std::get<SbqaParams>(params), seed);
    run = tuned.best;
    j = run_to_json(run);
    j["autotune"] = {{"samples", samples},
                     {"repetitions", repetitions},
                     {"replicas_per_repetition", samples / repetitions},
                     {"betas", tuned.betas},
                     {"alphas", tuned.alphas},
                     {"energies", tuned.energies}};
  } else {
    run = solve_with(*model, params, seed);
    j = run_to_json(run);
  }
  j["command"] = ctx.command;
  j["instance"] = instance_path;
  if (reduction) {
    const SpinConfig original = reduction->original_spins(run.best_spins);
    j["penalty"] = reduction->penalty;
    j["aux_count"] = reduction->aux_count();
    j["hubo_energy"] = inst.hubo().energy(original);
    j["hubo_spins"] = original;
  }
  const double energy = reduction ? inst.hubo().energy(reduction->original_spins(run.best_spins)) : run.best_energy;
  if (inst.reference_energy) {
    j["reference_energy"] = *inst.reference_energy;
    if (*inst.reference_energy != 0.0) j["gap"] = optimality_gap(energy, *inst.reference_energy);
  }

  if (out_path.empty()) {
    ctx.out << j.dump(2) << '\n';
  } else {
    open_out(out_path) << j.dump(2) << '\n';
    ctx.out << "energy " << format_double(energy);
    if (j.contains("gap")) ctx.out << " gap " << format_double(j["gap"].get<double>());
    ctx.out << " runtime_s " << format_double(run.runtime_seconds) << '\n';
  }
  return kExitOk;
}

int cmd_reduce(const Context& ctx, const std::vector<std::string>& instances, const std::string& penalty,
               const std::vector<double>& line_search, const SolverFlags& flags, std::uint64_t seed,
               const std::string& out_path, const fs::path& out_dir) {
  if (instances.empty()) throw UsageError("--instance is required");
  if (!line_search.empty()) {
    if (flags.solver.empty()) throw UsageError("--line-search needs --solver");
    const SolverParams params = flags.params();
    std::vector<HuboModel> ensemble;
    for (const auto& path : instances) {
      const Instance inst = load_instance(path);
      if (!inst.is_hubo()) throw UsageError(path + " is not a HUBO instance");
      ensemble.push_back(inst.hubo());
    }
    const auto result = penalty_line_search(
        ensemble, [&params](const IsingModel& m, std::uint64_t s) { return solve_with(m, params, s).best_spins; },
        line_search, seed);
    json j{{"best_penalty", result.best_penalty},
           {"candidates", result.candidates},
           {"mean_energy", result.mean_energy},
           {"solver", flags.solver},
           {"params", params_to_json(params)},
           {"instances", instances},
           {"seed", seed},
           {"command", ctx.command}};
    if (out_path.empty()) {
      ctx.out << j.dump(2) << '\n';
    } else {
      open_out(out_path) << j.dump(2) << '\n';
      ctx.out << "best_penalty " << format_double(result.best_penalty) << '\n';
    }
    return kExitOk;
  }

  if (instances.size() != 1) throw UsageError("reduce takes one --instance unless --line-search is given");
  if (!flags.solver.empty()) throw UsageError("--solver applies to --line-search only");
  const Instance inst = load_instance(instances.front());
  if (!inst.is_hubo()) throw UsageError(instances.front() + " is not a HUBO instance");
  const double p = penalty.empty() || penalty == "safe" ? safe_penalty(inst.hubo()) : std::stod(penalty);
  const Reduction r = reduce_hubo(inst.hubo(), p);

  const fs::path target = out_path.empty() ? out_dir / (fs::path(instances.front()).stem().string() + "_reduced.txt")
                                           : fs::path(out_path);
  Instance reduced;
  reduced.model = r.ising();
  reduced.reference_energy = inst.reference_energy;
  reduced.comments.push_back("generated: " + ctx.command);
  reduced.comments.push_back("penalty " + format_double(p) + " aux " + std::to_string(r.aux_count()));
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  save_instance(target, reduced);

  json pairs = json::array();
  for (const auto& a : r.pairs) pairs.push_back({a.aux, a.a, a.b});
  json entries = json::array();
  for (const auto& e : r.qubo.entries()) entries.push_back({e.i, e.j, e.value});
  json side{{"source", instances.front()},
            {"penalty", p},
            {"n_original", r.n_original},
            {"aux_count", r.aux_count()},
            {"pairs", pairs},
            {"qubo", {{"n", r.qubo.size()}, {"offset", r.qubo.offset()}, {"entries", entries}}},
            {"command", ctx.command}};
  fs::path sidecar = target;
  sidecar += ".pairs.json";
  open_out(sidecar) << side.dump(2) << '\n';
  ctx.out << target.string() << '\n' << sidecar.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const Context& ctx, const std::string& instance_path, SolverFlags flags, const std::vector<double>& betas,
              const std::vector<double>& alphas, int runs, std::optional<double> reference, std::uint64_t seed,
              const std::string& out_path, const fs::path& out_dir) {
  if (!flags.solver.empty() && flags.solver != "sbqa") throw UsageError("sweep runs sbqa only");
  if (flags.beta || flags.alpha) throw UsageError("sweep takes --betas and --alphas lists");
  flags.solver = "sbqa";
  const auto params = std::get<SbqaParams>(flags.params());
  const Instance inst = load_instance(instance_path);
  if (!inst.is_ising()) throw UsageError("sweep needs an Ising instance");
  double e0 = 0.0;
  if (reference) {
    e0 = *reference;
  } else if (inst.reference_energy) {
    e0 = *inst.reference_energy;
  } else if (inst.size() <= 28) {
    e0 = ground_state_energy(inst.ising());
  } else {
    throw UsageError("instance has no reference energy; pass --reference");
  }
  const GapMatrix m = sensitivity_sweep(inst.ising(), e0, betas, alphas, runs, params, seed);
  const fs::path target = out_path.empty() ? out_dir / "sweep.csv" : fs::path(out_path);
  json cfg{{"instance", instance_path}, {"betas", betas},          {"alphas", alphas},      {"runs", runs},
           {"reference_energy", e0},    {"params", params_to_json(params)}, {"seed", seed}};
  auto out = open_out(target);
  write_gap_matrix_csv(out, m, {"command " + ctx.command, "config " + cfg.dump(), "master_seed " + std::to_string(seed)});
  ctx.out << target.string() << '\n';
  return kExitOk;
}

int cmd_fit(const Context& ctx, const std::string& input) {
  const fs::path path(input);
  json result;
  if (path.extension() == ".json") {
    const json report = read_json_file(path);
    result["fits"] = json::array();
    for (const auto& r : report.at("reports")) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : r.at("per_size")) {
        if (!p.at("tte_median").is_null()) pts.emplace_back(p.at("n").get<double>(), p.at("tte_median").get<double>());
      }
      const auto fit = fit_power_law(pts);
      result["fits"].push_back({{"solver", r.at("solver")},
                                {"epsilon", r.at("epsilon")},
                                {"gamma", fit.gamma},
                                {"intercept", fit.intercept},
                                {"residuals", fit.residuals}});
    }
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + input);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
      std::istringstream ss(line);
      std::string a, b;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) throw ParseError("expected 'n,tte'", lineno);
      try {
        pts.emplace_back(std::stod(a), b == "inf" ? std::numeric_limits<double>::infinity() : std::stod(b));
      } catch (const std::logic_error&) {
        throw ParseError("invalid number", lineno);
      }
    }
    const auto fit = fit_power_law(pts);
    result = {{"gamma", fit.gamma}, {"intercept", fit.intercept}, {"residuals", fit.residuals}};
  }
  ctx.out << result.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

fs::path default_output_dir() {
  if (const char* dir = std::getenv("SBQA_OUTPUT_DIR"); dir && *dir) return fs::path(dir);
  return fs::current_path();
}

SolverParams params_from_json(const std::string& solver, const json& block) {
  const auto& keys = allowed_keys();
  const auto it = keys.find(solver);
  if (it == keys.end()) throw UsageError("unknown solver '" + solver + "'");
  if (!block.is_object()) throw UsageError("parameter block must be a JSON object");
  for (const auto& [key, value] : block.items()) {
    if (!it->second.count(key)) throw UsageError("parameter '" + key + "' does not apply to " + solver);
  }
  try {
    if (solver == "sbm") {
      SbmParams p;
      take(block, "a0", p.a0);
      take(block, "c0", p.c0);
      take(block, "n_steps", p.n_steps);
      take(block, "total_time", p.total_time);
      if (block.contains("nonlinearity")) p.nonlinearity = parse_nonlinearity(block.at("nonlinearity"));
      take(block, "threshold_slope", p.threshold_slope);
      take(block, "n_replicas", p.n_replicas);
      p.validate();
      return p;
    }
    if (solver == "sbqa") {
      SbqaParams p;
      take(block, "a0", p.a0);
      take(block, "c0", p.c0);
      take(block, "n_steps", p.n_steps);
      take(block, "total_time", p.total_time);
      if (block.contains("nonlinearity")) p.nonlinearity = parse_nonlinearity(block.at("nonlinearity"));
      take(block, "threshold_slope", p.threshold_slope);
      take(block, "replicas", p.replicas);
      take(block, "n_sets", p.n_sets);
      take(block, "beta", p.beta);
      take(block, "alpha", p.alpha);
      take(block, "gamma0", p.gamma0);
      p.validate();
      return p;
    }
    if (solver == "sa") {
      SaParams p;
      take(block, "sweeps", p.sweeps);
      take(block, "n_reads", p.n_reads);
      take(block, "beta_min", p.beta_min);
      take(block, "beta_max", p.beta_max);
      p.validate();
      return p;
    }
    DtsqaParams p;
    take(block, "replicas", p.replicas);
    take(block, "beta", p.beta);
    take(block, "gamma0", p.gamma0);
    take(block, "alpha", p.alpha);
    take(block, "n_steps", p.n_steps);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad parameter value: ") + e.what());
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
}

json params_to_json(const SolverParams& params) {
  struct Visitor {
    json operator()(const SbmParams& p) const {
      json j{{"a0", p.a0},
             {"n_steps", p.n_steps},
             {"nonlinearity", nonlinearity_name(p.nonlinearity)},
             {"threshold_slope", p.threshold_slope},
             {"n_replicas", p.n_replicas}};
      if (p.c0) j["c0"] = *p.c0;
      if (p.total_time) j["total_time"] = *p.total_time;
      return j;
    }
    json operator()(const SbqaParams& p) const {
      json j{{"a0", p.a0},
             {"n_steps", p.n_steps},
             {"nonlinearity", nonlinearity_name(p.nonlinearity)},
             {"threshold_slope", p.threshold_slope},
             {"replicas", p.replicas},
             {"n_sets", p.n_sets},
             {"beta", p.beta},
             {"alpha", p.alpha},
             {"gamma0", p.resolved_gamma0()}};
      if (p.c0) j["c0"] = *p.c0;
      if (p.total_time) j["total_time"] = *p.total_time;
      return j;
    }
    json operator()(const SaParams& p) const {
      json j{{"sweeps", p.sweeps}, {"n_reads", p.n_reads}};
      if (p.beta_min) j["beta_min"] = *p.beta_min;
      if (p.beta_max) j["beta_max"] = *p.beta_max;
      return j;
    }
    json operator()(const DtsqaParams& p) const {
      return {{"replicas", p.replicas}, {"beta", p.beta}, {"gamma0", p.gamma0}, {"alpha", p.alpha},
              {"n_steps", p.n_steps}};
    }
  };
  return std::visit(Visitor{}, params);
}

SolverRun solve_with(const IsingModel& model, const SolverParams& params, std::uint64_t seed) {
  struct Visitor {
    const IsingModel& m;
    std::uint64_t seed;
    SolverRun operator()(const SbmParams& p) const { return sbm_solve(m, p, seed); }
    SolverRun operator()(const SbqaParams& p) const { return sbqa_solve(m, p, seed); }
    SolverRun operator()(const SaParams& p) const { return sa_solve(m, p, seed); }
    SolverRun operator()(const DtsqaParams& p) const {
      return dtsqa_solve(m, p, dsatur_coloring(m.adjacency()), seed);
    }
  };
  return std::visit(Visitor{model, seed}, params);
}

BenchOutput run_bench(const json& config, const fs::path& out_dir, std::optional<std::uint64_t> seed_override,
                      std::ostream& log) {
  if (!config.is_object()) throw UsageError("bench config must be a JSON object");
  const std::uint64_t seed = seed_override ? *seed_override : config.value("seed", std::uint64_t{1});
  const int runs = config.value("runs", 10);
  const double p_target = config.value("p_target", 0.99);
  const std::vector<double> epsilons = config.value("epsilons", std::vector<double>{0.0});
  const std::string reference = config.value("reference", std::string("auto"));

  TteOptions options;
  options.runs = runs;
  if (config.contains("step_grid")) {
    options.step_grid = config.at("step_grid").get<std::vector<long>>();
  } else if (config.contains("step_range")) {
    const auto r = config.at("step_range").get<std::vector<long>>();
    if (r.size() != 2) throw UsageError("step_range needs [lo, hi]");
    options.step_grid = log_step_grid(r[0], r[1]);
  } else {
    throw UsageError("bench config needs step_grid or step_range");
  }

  // Ensemble, shared by every solver.
  std::vector<BenchInstance> ensemble;
  if (config.contains("instance_files")) {
    for (const auto& f : config.at("instance_files")) {
      const std::string path = f.get<std::string>();
      const Instance inst = load_instance(path);
      if (!inst.is_ising()) throw UsageError(path + " is not an Ising instance");
      BenchInstance b{fs::path(path).stem().string(), "file", static_cast<long>(inst.size()), inst.ising(),
                      inst.reference_energy};
      ensemble.push_back(std::move(b));
    }
  }
  if (config.contains("instances")) {
    const json& g = config.at("instances");
    GenSpec spec;
    spec.family = g.at("family").get<std::string>();
    if (!kFamilies.count(spec.family) || spec.family == "heavyhex") {
      throw UsageError("bench cannot generate family '" + spec.family + "'");
    }
    spec.dist = g.value("distribution", std::string());
    spec.fields = g.value("fields", std::string());
    spec.lz = g.value("Lz", 0);
    const int count = g.value("count", 1);
    const std::uint64_t inst_seed = g.value("seed", seed);
    const auto sizes = g.at("sizes").get<std::vector<int>>();
    for (std::size_t si = 0; si < sizes.size(); ++si) {
      spec.size = sizes[si];
      for (int k = 0; k < count; ++k) {
        const std::uint64_t s = derive_seed(inst_seed, {0x1a, si, static_cast<std::uint64_t>(k)});
        Instance inst = generate(spec, s);
        BenchInstance b{spec.family + "_" + size_tag(spec) + "_" + std::to_string(k), spec.family, sizes[si],
                        inst.ising(), std::nullopt};
        ensemble.push_back(std::move(b));
      }
    }
  }
  if (ensemble.empty()) throw UsageError("bench config needs instances or instance_files");

  for (auto& b : ensemble) {
    if (reference == "file" || (reference == "auto" && b.reference_energy)) continue;
    if (reference == "exact" || (reference == "auto" && b.model.size() <= 28)) {
      b.reference_energy = ground_state_energy(b.model);
    } else if (reference == "sa" || reference == "auto") {
      SaParams p;
      p.sweeps = 10000;
      p.n_reads = 64;
      b.reference_energy = sa_solve(b.model, p, derive_seed(seed, {0x5ef})).best_energy;
    } else {
      throw UsageError("reference must be auto, exact, sa or file");
    }
  }

  if (!config.contains("solvers") || !config.at("solvers").is_array() || config.at("solvers").empty()) {
    throw UsageError("bench config needs a nonempty solvers list");
  }

  std::vector<RunRecord> all;
  json reports = json::array();
  json warnings = json::array();
  std::size_t skipped = 0;
  for (const auto& entry : config.at("solvers")) {
    const std::string name = entry.at("name").get<std::string>();
    const SolverParams base = params_from_json(name, entry.value("params", json::object()));
    NamedSolver solver;
    solver.name = name;
    if (entry.contains("autotune")) {
      if (name != "sbqa") throw UsageError("autotune applies to sbqa only");
      const int samples = entry.at("autotune").value("samples", 128);
      const int reps = entry.at("autotune").value("repetitions", 8);
      solver.name = "sbqa_autotune";
      solver.run = [base, samples, reps](const IsingModel& m, long steps, std::uint64_t s) {
        auto p = std::get<SbqaParams>(with_steps(base, steps));
        return autotune_sbqa(m, samples, reps, p, s).best;
      };
    } else {
      solver.run = [base](const IsingModel& m, long steps, std::uint64_t s) {
        return solve_with(m, with_steps(base, steps), s);
      };
    }
    const RunGrid grid = run_grid(solver, ensemble, options, seed);
    skipped = grid.skipped;
    for (const auto& w : grid.warnings) {
      log << "warning: " << w << '\n';
      warnings.push_back(w);
    }
    if (grid.records.empty()) continue;

    std::map<long, std::vector<RunRecord>> by_size;
    for (const auto& r : grid.records) by_size[r.size].push_back(r);
    for (double eps : epsilons) {
      json per_size = json::array();
      std::vector<std::pair<double, double>> points;
      for (const auto& [size, recs] : by_size) {
        const TteReport rep = tte_from_records(recs, eps, p_target);
        const double n = static_cast<double>(recs.front().n_vars);
        per_size.push_back({{"n", recs.front().n_vars},
                            {"size", size},
                            {"tte_median", number_or_null(rep.tte_min)},
                            {"n_steps_opt", rep.n_steps_opt},
                            {"n_instances", rep.grid.front().tte.size()}});
        points.emplace_back(n, rep.tte_min);
      }
      json fit = nullptr;
      if (config.value("fit", true)) {
        try {
          const auto f = fit_power_law(points);
          fit = {{"gamma", f.gamma}, {"intercept", f.intercept}};
        } catch (const InsufficientDataError&) {
        }
      }
      reports.push_back({{"solver", solver.name},
                         {"epsilon", eps},
                         {"p_target", p_target},
                         {"runs", runs},
                         {"per_size", per_size},
                         {"fit", fit}});
    }
    all.insert(all.end(), grid.records.begin(), grid.records.end());
  }
  if (all.empty()) throw InputError("every instance was skipped (no reference energies)");

  BenchOutput out;
  out.skipped = skipped;
  out.instances = ensemble.size();
  fs::create_directories(out_dir);
  out.csv = out_dir / "runs.csv";
  out.report = out_dir / "report.json";
  {
    auto csv = open_out(out.csv);
    write_runs_csv(csv, all, {"config " + config.dump(), "master_seed " + std::to_string(seed)});
  }
  json report{{"config", config}, {"master_seed", seed}, {"reports", reports}, {"warnings", warnings}};
  open_out(out.report) << report.dump(2) << '\n';
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sbqa");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulated bifurcation and quantum-annealing benchmark suite"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "OpenMP worker threads (0 keeps the default)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instance files");
  GenSpec spec;
  int count = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_reference = "auto", gen_format = "text", gen_out;
  int m = 0, L = 0, n = 0, nswap = -1;
  gen->add_option("--family", spec.family)->required()->check(CLI::IsMember(kFamilies));
  gen->add_option("--m", m, "Zephyr size");
  gen->add_option("--L", L, "lattice side (cubic, embedded, square)");
  gen->add_option("--Lz", spec.lz, "lattice depth (cubic, embedded; default L)");
  gen->add_option("--M", spec.pegasus_m, "Pegasus size for embedded (default L + 1)");
  gen->add_option("--n", n, "spins (ring, complete)");
  gen->add_option("--nswap", nswap, "SWAP layers (heavyhex)");
  gen->add_option("--s2q", spec.s2q, "2-body sets per layer (heavyhex)");
  gen->add_option("--s3q", spec.s3q, "3-body sets per layer (heavyhex)");
  gen->add_option("--dist", spec.dist, "coupling distribution, e.g. normal, pm1, sidon28, cauchy, pareto:2");
  gen->add_option("--fields", spec.fields, "field distribution (ring, complete, square)");
  gen->add_option("--count", count, "instances to write");
  gen->add_option("--seed", gen_seed, "seed of the first instance");
  gen->add_option("--reference", gen_reference, "auto (exact up to 20 spins), exact or none");
  gen->add_option("--format", gen_format)->check(CLI::IsMember({"text", "json"}));
  gen->add_option("--out", gen_out, "output directory");

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver on an instance");
  SolverFlags solve_flags;
  std::string solve_instance, solve_out, solve_penalty;
  std::uint64_t solve_seed = 1;
  bool autotune = false;
  int samples = 1024, repetitions = 8;
  solve->add_option("--instance", solve_instance, "Ising or HUBO instance file")->required();
  solve_flags.add(solve, true);
  solve->add_option("--seed", solve_seed);
  solve->add_flag("--autotune", autotune, "random (beta, alpha) over repetitions (sbqa)");
  solve->add_option("--samples", samples, "total replicas for --autotune");
  solve->add_option("--repetitions", repetitions, "independent solves for --autotune");
  solve->add_option("--penalty", solve_penalty, "reduction penalty for HUBO instances (number or 'safe')");
  solve->add_option("--out", solve_out, "write the result JSON here");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Reduce a cubic HUBO to an Ising model, or line-search the penalty");
  std::vector<std::string> reduce_instances;
  std::string reduce_penalty, reduce_out;
  std::vector<double> line_search;
  SolverFlags reduce_flags;
  std::uint64_t reduce_seed = 1;
  reduce->add_option("--instance", reduce_instances, "HUBO file (several for --line-search)");
  reduce->add_option("--penalty", reduce_penalty, "penalty P (number or 'safe', default safe)");
  reduce->add_option("--line-search", line_search, "candidate penalties")->delimiter(',');
  reduce_flags.add(reduce, false);
  reduce->add_option("--seed", reduce_seed);
  reduce->add_option("--out", reduce_out, "output path");

  // bench
  auto* bench = app.add_subcommand("bench", "Run the time-to-epsilon protocol from a config file");
  std::string bench_config, bench_out;
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("--config", bench_config, "JSON config file")->required();
  bench->add_option("--seed", bench_seed, "override the config's master seed");
  bench->add_option("--out", bench_out, "output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Mean SBQA gap over an (alpha, beta) grid");
  std::string sweep_instance, sweep_out;
  std::vector<double> betas{0.05, 0.5, 1.0}, alphas{0.5, 1.0};
  int sweep_runs = 20;
  std::optional<double> sweep_reference;
  std::uint64_t sweep_seed = 1;
  SolverFlags sweep_flags;
  sweep->add_option("--instance", sweep_instance, "Ising instance file")->required();
  sweep->add_option("--betas", betas)->delimiter(',');
  sweep->add_option("--alphas", alphas)->delimiter(',');
  sweep->add_option("--runs", sweep_runs);
  sweep->add_option("--reference", sweep_reference, "reference energy E0");
  sweep->add_option("--seed", sweep_seed);
  sweep->add_option("--out", sweep_out, "CSV path");
  sweep_flags.add(sweep, false);

  // fit
  auto* fit = app.add_subcommand("fit", "Power-law fit of TTe against N");
  std::string fit_input;
  fit->add_option("--input", fit_input, "report.json or CSV with n,tte rows")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::vector<std::string> args;
  for (int k = 0; k < argc; ++k) args.emplace_back(argv[k]);
  const Context ctx{out, err, join_args(args)};

  try {
    set_jobs(jobs);
    const fs::path fallback = default_output_dir();
    if (*gen) {
      const std::string& f = spec.family;
      if (f == "zephyr") spec.size = m;
      else if (f == "cubic" || f == "embedded" || f == "square") spec.size = L;
      else if (f == "ring" || f == "complete") spec.size = n;
      else spec.size = nswap >= 0 ? nswap : 0;
      if (f == "heavyhex") {
        if (nswap < 0) throw UsageError("heavyhex needs --nswap");
        spec.size = nswap;
        const Instance probe = generate(spec, gen_seed);  // validates before writing
        (void)probe;
        fs::create_directories(gen_out.empty() ? fallback : fs::path(gen_out));
        const fs::path dir = gen_out.empty() ? fallback : fs::path(gen_out);
        for (int k = 0; k < count; ++k) {
          const std::uint64_t s = gen_seed + static_cast<std::uint64_t>(k);
          Instance inst = generate(spec, s);
          inst.comments.push_back("generated: " + ctx.command);
          inst.comments.push_back("family heavyhex " + size_tag(spec) + " seed " + std::to_string(s));
          const fs::path path = dir / ("heavyhex_" + size_tag(spec) + "_s" + std::to_string(s) +
                                       (gen_format == "json" ? ".json" : ".txt"));
          save_instance(path, inst);
          out << path.string() << '\n';
        }
        return kExitOk;
      }
      return cmd_gen(ctx, spec, count, gen_seed, gen_reference, gen_format, gen_out.empty() ? fallback : fs::path(gen_out));
    }
    if (*solve) {
      return cmd_solve(ctx, solve_instance, solve_flags, solve_seed, autotune, samples, repetitions, solve_penalty,
                       solve_out);
    }
    if (*reduce) {
      return cmd_reduce(ctx, reduce_instances, reduce_penalty, line_search, reduce_flags, reduce_seed, reduce_out,
                        fallback);
    }
    if (*bench) {
      const auto result = run_bench(read_json_file(bench_config), bench_out.empty() ? fallback : fs::path(bench_out),
                                    bench_seed, err);
      out << result.csv.string() << '\n' << result.report.string() << '\n';
      return kExitOk;
    }
    if (*sweep) {
      return cmd_sweep(ctx, sweep_instance, sweep_flags, betas, alphas, sweep_runs, sweep_reference, sweep_seed,
                       sweep_out, fallback);
    }
    if (*fit) return cmd_fit(ctx, fit_input);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sbqa::cli
