// carshare: generate instances, solve them exactly or heuristically, and
// inspect the network reduction and the priority constraints.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "carshare/bnb.hpp"
#include "carshare/heuristics.hpp"
#include "carshare/instance.hpp"
#include "carshare/model.hpp"
#include "carshare/network.hpp"
#include "carshare/preprocess.hpp"
#include "carshare/priority.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace carshare;

namespace {

constexpr int kInputError = 2;

// Thrown for anything the user can fix by changing the command line or files.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance load(const std::string& path) {
  try {
    return read_instance(path);
  } catch (const InstanceError& e) {
    throw InputError(e.what());
  }
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string method = "bb";
  std::string model = "cs2";
  double time_limit = 600.0;
  double alpha = 0.8;
  double tenure = 0.046;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool no_preprocess = false;
  std::string csv;
  std::vector<std::string> inputs;
};

struct Outcome {
  json report;
  std::string set;
  bool optimal = false;
  int constraints = 0;
};

// "st-n1000" from the generator manifest, else the file stem up to its last '-'.
std::string set_label(const Instance& inst, const std::string& path) {
  if (inst.provenance) return to_string(inst.provenance->group) + "-n" + std::to_string(inst.size());
  const std::string stem = fs::path(path).stem().string();
  const auto cut = stem.rfind('-');
  return cut == std::string::npos ? stem : stem.substr(0, cut);
}

Outcome solve_one(const SolveArgs& a, const std::string& path) {
  const Instance inst = load(path);
  const ModelKind kind = parse_model_kind(a.model);
  const Model model = build_model(inst, kind, !a.no_preprocess);
  Outcome out;
  out.set = set_label(inst, path);
  out.constraints = model.row_count(RowKind::precedence);
  json r;
  r["instance"] = path;
  r["method"] = a.method;
  r["model"] = a.model;
  r["n"] = inst.size();
  if (a.method == "bb") {
    BnbOptions o;
    o.time_limit = a.time_limit;
    o.seed = a.seed;
    const SolveReport s = solve_exact(model, inst, o);
    r["value"] = s.lb;
    r["ub"] = s.ub;
    r["gap_pct"] = s.gap_pct;
    r["iterations"] = s.nodes;
    r["improvements"] = 0;
    r["construction_value"] = nullptr;
    r["elapsed_s"] = s.elapsed;
    r["status"] = to_string(s.status);
    out.optimal = s.status == SolveStatus::optimal;
  } else {
    HeuristicOptions o;
    o.alpha = a.alpha;
    o.tenure = a.tenure;
    o.time_limit = a.time_limit;
    o.seed = a.seed;
    HeuristicReport h;
    if (a.method == "grasp")
      h = grasp(inst, model, o);
    else if (a.method == "vns")
      h = vns(inst, model, o);
    else
      h = tabu_search(inst, model, o);
    const int value = h.best.value();
    r["value"] = value;
    r["ub"] = h.bound;
    r["gap_pct"] = relative_gap(h.bound, value);
    r["iterations"] = h.iterations;
    r["improvements"] = h.improvements;
    r["construction_value"] = h.construction_value;
    r["elapsed_s"] = h.elapsed;
    if (a.method == "grasp") r["alpha"] = a.alpha;
    if (a.method == "ts") r["tenure"] = a.tenure;
    out.optimal = value >= h.bound;
    r["status"] = out.optimal ? "optimal" : "time-limit";
  }
  r["seed"] = a.seed;
  out.report = std::move(r);
  return out;
}

struct MeanSd {
  double mean = 0, sd = 0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    for (double x : v) m.sd += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(m.sd / static_cast<double>(v.size() - 1));
  }
  return m;
}

void write_csv(const std::string& path, const SolveArgs& a, const std::vector<Outcome>& outcomes) {
  std::map<std::string, std::vector<const Outcome*>> sets;
  for (const auto& o : outcomes) sets[o.set].push_back(&o);
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << "set,method,model,instances,opt,avg_value,sd_value,avg_gap,sd_gap,avg_constraints,avg_iterations\n";
  for (const auto& [name, list] : sets) {
    std::vector<double> value, gap, cons, iters;
    int opt = 0;
    for (const Outcome* o : list) {
      value.push_back(o->report["value"].get<double>());
      gap.push_back(o->report["gap_pct"].get<double>());
      cons.push_back(o->constraints);
      iters.push_back(o->report["iterations"].get<double>());
      opt += o->optimal;
    }
    const MeanSd v = mean_sd(value), g = mean_sd(gap);
    char line[512];
    std::snprintf(line, sizeof line, "%s,%s,%s,%zu,%d,%.2f,%.2f,%.3f,%.3f,%.2f,%.2f\n", name.c_str(), a.method.c_str(),
                  a.model.c_str(), list.size(), opt, v.mean, v.sd, g.mean, g.sd, mean_sd(cons).mean,
                  mean_sd(iters).mean);
    f << line;
  }
}

int run_solve(const SolveArgs& a) {
  parse_model_kind(a.model);
  if (a.alpha < 0 || a.alpha > 1) throw InputError("--alpha must be in [0, 1]");
  if (a.tenure < 0) throw InputError("--tenure must be nonnegative");
  for (const auto& p : a.inputs)
    if (!fs::exists(p)) throw InputError(p + ": no such file");

  std::vector<Outcome> outcomes(a.inputs.size());
  std::vector<std::string> errors(a.inputs.size());
  std::vector<int> codes(a.inputs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < a.inputs.size();) {
      try {
        outcomes[i] = solve_one(a, a.inputs[i]);
      } catch (const InputError& e) {
        errors[i] = e.what();
        codes[i] = kInputError;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        codes[i] = 1;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(a.jobs, static_cast<int>(a.inputs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  int status = 0;
  std::vector<Outcome> done;
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << (codes[i] == kInputError ? "error: " : "fatal: ") << errors[i] << "\n";
      status = std::max(status, codes[i]);
      continue;
    }
    std::cout << outcomes[i].report.dump() << "\n";
    done.push_back(std::move(outcomes[i]));
  }
  if (!a.csv.empty()) write_csv(a.csv, a, done);
  return status;
}

// ---------------------------------------------------------------------------
// the small subcommands

int run_generate(const std::string& group, int n, int count, std::uint64_t seed, const std::string& out) {
  const Group g = parse_group(group);
  if (n < 0 || count < 0) throw InputError("--n and --count must be nonnegative");
  if (count == 0) return 0;
  fs::create_directories(out);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const fs::path file = fs::path(out) / (group + "-n" + std::to_string(n) + "-s" + std::to_string(s) + ".txt");
    write_instance(generate(g, n, s), file);
  }
  return 0;
}

int run_preprocess(const std::vector<std::string>& inputs) {
  std::cout << "instance,vertices_before,vertices_after,arcs_before,arcs_after,reductions\n";
  for (const auto& p : inputs) {
    const Network net = build_network(load(p));
    const MinimizeResult r = minimize(net);
    std::cout << p << ',' << net.vertex_count() << ',' << r.network.vertex_count() << ',' << net.arc_count() << ','
              << r.network.arc_count() << ',' << r.trace.steps.size() << "\n";
  }
  return 0;
}

int run_export(const std::string& format, const std::string& model, bool raw, const std::string& out,
               const std::string& input) {
  const ModelFormat f = parse_model_format(format);
  const Model m = build_model(load(input), parse_model_kind(model), !raw);
  if (out.empty() || out == "-") {
    if (f == ModelFormat::mps)
      write_mps(m, std::cout);
    else
      write_lp(m, std::cout);
  } else {
    export_model(m, f, out);
  }
  return 0;
}

int run_priority_stats(const std::vector<std::string>& inputs) {
  std::cout << "instance,dominance_arcs,reduced_arcs,forest_arcs\n";
  double dom = 0, red = 0, forest = 0;
  for (const auto& p : inputs) {
    const PriorityStats s = priority_constraints(load(p)).stats();
    std::cout << p << ',' << s.dominance_arcs << ',' << s.reduced_arcs << ',' << s.forest_arcs << "\n";
    dom += s.dominance_arcs;
    red += s.reduced_arcs;
    forest += s.forest_arcs;
  }
  if (inputs.size() > 1) {
    const double k = static_cast<double>(inputs.size());
    std::printf("average,%.2f,%.2f,%.2f\n", dom / k, red / k, forest / k);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-station one-way car-sharing: customer satisfaction solver"};
  app.require_subcommand(1);

  std::string group = "st", out_dir = ".";
  int gen_n = 1000, gen_count = 1;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("generate", "Write random benchmark instances");
  gen->add_option("--group", group, "st, ft or fc")->check(CLI::IsMember({"st", "ft", "fc"}));
  gen->add_option("--n", gen_n, "Customers per instance");
  gen->add_option("--count", gen_count, "Number of instances");
  gen->add_option("--seed", gen_seed, "Seed of the first instance; the i-th uses seed+i");
  gen->add_option("--out", out_dir, "Output directory");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve instances and print one JSON report per line");
  solve->add_option("--method", sa.method, "bb, grasp, vns or ts")->check(CLI::IsMember({"bb", "grasp", "vns", "ts"}));
  solve->add_option("--model", sa.model, "cs1 or cs2")->check(CLI::IsMember({"cs1", "cs2"}));
  solve->add_option("--time-limit", sa.time_limit, "Seconds per instance");
  solve->add_option("--alpha", sa.alpha, "GRASP greediness in [0, 1]");
  solve->add_option("--tenure", sa.tenure, "Tabu list size as a fraction of n");
  solve->add_option("--seed", sa.seed, "Random seed");
  solve->add_option("--jobs", sa.jobs, "Instances solved in parallel");
  solve->add_flag("--no-preprocess", sa.no_preprocess, "Build the model on the unreduced network");
  solve->add_option("--csv", sa.csv, "Write aggregate statistics per instance set to this file");
  solve->add_option("inputs", sa.inputs, "Instance files")->required();

  std::vector<std::string> pre_inputs;
  auto* pre = app.add_subcommand("preprocess", "Report network sizes before and after reduction (CSV)");
  pre->add_option("inputs", pre_inputs, "Instance files")->required();

  std::string fmt = "mps", exp_model = "cs2", exp_out, exp_input;
  bool raw = false;
  auto* exp = app.add_subcommand("export", "Write the MIP model of an instance");
  exp->add_option("--format", fmt, "mps or lp")->check(CLI::IsMember({"mps", "lp"}));
  exp->add_option("--model", exp_model, "cs1 or cs2")->check(CLI::IsMember({"cs1", "cs2"}));
  exp->add_option("--out,-o", exp_out, "Output file (default: standard output)");
  exp->add_flag("--no-preprocess", raw, "Build the model on the unreduced network");
  exp->add_option("input", exp_input, "Instance file")->required();

  std::vector<std::string> pri_inputs;
  auto* pri = app.add_subcommand("priority-stats", "Count priority arcs per instance (CSV)");
  pri->add_option("inputs", pri_inputs, "Instance files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*gen) return run_generate(group, gen_n, gen_count, gen_seed, out_dir);
    if (*solve) return run_solve(sa);
    if (*pre) return run_preprocess(pre_inputs);
    if (*exp) return run_export(fmt, exp_model, raw, exp_out, exp_input);
    if (*pri) return run_priority_stats(pri_inputs);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
