// pgmatch: command line front end.
//
//   pgmatch check --mode hom|iso|sub G1 G2
//   pgmatch ged [--relabel] [--weights unit|gedc|FILE] G1 G2
//   pgmatch encode --kind KIND G1 G2
//   pgmatch solve --kind KIND [--solver PATH] G1 G2
//   pgmatch gen chain|cycle|random ...
//   pgmatch bench --suite FILE
//   pgmatch apply G SCRIPT
//   pgmatch canon G SCRIPT
//
// Exit codes: 0 found/optimal, 1 no solution, 2 timeout, 3 error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pgmatch/pgmatch.hpp"

namespace {

using namespace pgmatch;

constexpr int kFound = 0, kNone = 1, kTimeout = 2, kError = 3;

std::chrono::milliseconds seconds_to_ms(double s) {
  if (!(s > 0)) throw std::invalid_argument("timeout must be positive");
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(s * 1000)));
}

CostModel load_weights(const std::string& spec) {
  if (spec == "unit") return CostModel::unit();
  if (spec == "gedc") return CostModel::gedc();
  return read_cost_model_file(spec);
}

ProblemKind parse_kind(const std::string& s) {
  auto k = kind_from_name(s);
  if (!k) throw std::invalid_argument("unknown kind '" + s + "'");
  return *k;
}

NodeOrder parse_order(const std::string& s) {
  if (s == "lex") return NodeOrder::lex;
  if (s == "degree") return NodeOrder::degree_desc;
  throw std::invalid_argument("unknown order '" + s + "'");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

// --- check -----------------------------------------------------------------

struct CheckArgs {
  std::string mode = "hom", g1, g2, order = "degree";
  bool soft = false;
  double timeout = 30;
};

int run_check(const CheckArgs& a) {
  MatchKind kind = a.mode == "iso" ? MatchKind::iso : a.mode == "sub" ? MatchKind::sub : MatchKind::hom;
  SearchOptions opts;
  opts.budget = seconds_to_ms(a.timeout);
  opts.order = parse_order(a.order);
  if (a.soft) opts.properties = PropertyMode::soft;
  const auto g1 = read_graph_file(a.g1), g2 = read_graph_file(a.g2);
  try {
    auto r = find_match(kind, g1, g2, opts);
    if (!r) {
      std::cout << "none\n";
      return kNone;
    }
    std::cout << "found\n";
    if (a.soft) std::cout << "property_cost " << r->property_cost << '\n';
    std::cout << write_matching(r->witness);
    return kFound;
  } catch (const SearchTimeout&) {
    std::cout << "timeout\n";
    return kTimeout;
  }
}

// --- ged -------------------------------------------------------------------

struct GedArgs {
  std::string g1, g2, weights = "unit", order = "degree";
  bool relabel = false, matching = false;
  double timeout = 30;
};

int run_ged(const GedArgs& a) {
  SearchOptions opts;
  opts.labels = a.relabel ? LabelMode::relabel : LabelMode::hard;
  opts.costs = load_weights(a.weights);
  opts.budget = seconds_to_ms(a.timeout);
  opts.order = parse_order(a.order);
  const auto r = min_edit_matching(read_graph_file(a.g1), read_graph_file(a.g2), opts);
  std::cout << "cost " << r.cost << '\n' << "optimal " << (r.optimal ? "yes" : "no") << '\n';
  if (a.matching) std::cout << write_matching(r.matching);
  std::cout << write_script(r.script);
  return r.optimal ? kFound : kTimeout;
}

// --- encode / solve ----------------------------------------------------------

struct JobArgs {
  std::string kind, g1, g2, weights, output, solver = default_solver_path();
  std::vector<std::string> solver_args;
  bool angle = false, raw = false;
  double timeout = 30;
  int models = 0;
};

std::optional<CostModel> job_weights(ProblemKind kind, const std::string& spec) {
  if (kind != ProblemKind::gedc_weighted) {
    if (!spec.empty()) throw std::invalid_argument("--weights only applies to --kind gedc");
    return std::nullopt;
  }
  return spec.empty() ? CostModel::gedc() : load_weights(spec);
}

int run_encode(const JobArgs& a) {
  const ProblemKind kind = parse_kind(a.kind);
  const auto g1 = read_graph_file(a.g1);
  const auto g2 = make_disjoint(g1, read_graph_file(a.g2));
  write_output(render_job(g1, g2, kind, job_weights(kind, a.weights),
                          a.angle ? Comparison::angle : Comparison::neq),
               a.output);
  return kFound;
}

int run_solve(const JobArgs& a) {
  const ProblemKind kind = parse_kind(a.kind);
  const auto cm = job_weights(kind, a.weights);
  const auto g1 = read_graph_file(a.g1);
  const auto g2 = make_disjoint(g1, read_graph_file(a.g2));
  SolverConfig cfg;
  cfg.path = a.solver;
  cfg.args = a.solver_args;
  cfg.budget = seconds_to_ms(a.timeout);
  cfg.models = a.models;
  const AnswerSet m = run_solver(render_job(g1, g2, kind, cm), cfg);

  std::cout << "status " << status_name(m.status) << '\n';
  if (!m.costs.empty()) std::cout << "cost " << m.total() << '\n';
  if (a.raw) {
    for (const auto& atom : m.atoms) std::cout << render_atom(atom) << '\n';
  } else if (m.has_model) {
    std::cout << write_matching(decode_matching(m, g1, g2));
    if (is_edit_distance(kind))
      std::cout << write_script(decode_edit_script(m, g1, g2, kind, cm.value_or(CostModel::gedc())).script);
  }
  return exit_code(m.status);
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string shape;
  std::vector<std::string> params;
  bool second = false, self_loops = false;
};

int run_gen(const GenArgs& a) {
  const GenNames names = a.second ? GenNames::second() : GenNames{};
  auto need = [&](std::size_t n) {
    if (a.params.size() != n)
      throw std::invalid_argument(a.shape + " takes " + std::to_string(n) + " argument(s)");
  };
  PropertyGraph g;
  if (a.shape == "chain") {
    need(1);
    g = gen_chain(std::stoi(a.params[0]), names);
  } else if (a.shape == "cycle") {
    need(1);
    g = gen_cycle(std::stoi(a.params[0]), names);
  } else if (a.shape == "random") {
    need(3);
    g = gen_random(std::stoi(a.params[0]), std::stod(a.params[1]), std::stoull(a.params[2]),
                   a.self_loops, names);
  } else {
    throw std::invalid_argument("unknown shape '" + a.shape + "'");
  }
  std::cout << write_graph(g);
  return kFound;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string suite, csv, backends, solver = default_solver_path();
  double timeout = 0;
  unsigned workers = 0;
  bool require_success = false;
};

int run_bench_cmd(const BenchArgs& a) {
  Suite suite = read_suite_file(a.suite);
  if (!a.backends.empty()) {
    suite.backends.clear();
    std::stringstream ss(a.backends);
    for (std::string b; std::getline(ss, b, ',');) {
      if (b == "native") suite.backends.push_back(Backend::native);
      else if (b == "asp") suite.backends.push_back(Backend::asp);
      else throw std::invalid_argument("unknown backend '" + b + "'");
    }
  }
  BenchOptions opts;
  if (a.timeout > 0) opts.budget_override = seconds_to_ms(a.timeout);
  opts.solver.path = a.solver;
  opts.workers = a.workers;
  const auto results = run_bench(suite, opts);

  const std::string csv = write_csv(results);
  if (a.csv.empty()) std::cout << csv << '\n';
  else write_output(csv, a.csv);
  std::cout << write_summary(summarize(results));

  bool all = true;
  for (const auto& r : results) {
    if (!r.error.empty()) std::cerr << r.instance << ' ' << kind_name(r.kind) << ": " << r.error << '\n';
    all = all && r.success();
  }
  return a.require_success && !all ? kNone : kFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Property graph matching and edit distance"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Search for a homomorphism, isomorphism or embedding");
  c->add_option("--mode", check.mode, "hom, iso or sub")
      ->check(CLI::IsMember({"hom", "iso", "sub"}))
      ->capture_default_str();
  c->add_flag("--soft-props", check.soft, "Minimize property mismatches instead of requiring them");
  c->add_option("--order", check.order, "Variable order: degree or lex")->capture_default_str();
  c->add_option("--timeout", check.timeout, "Seconds")->capture_default_str();
  c->add_option("g1", check.g1)->required()->check(CLI::ExistingFile);
  c->add_option("g2", check.g2)->required()->check(CLI::ExistingFile);

  GedArgs ged;
  auto* d = app.add_subcommand("ged", "Exact graph edit distance with a canonical script");
  d->add_flag("--relabel", ged.relabel, "Allow in-place relabeling");
  d->add_option("--weights", ged.weights, "unit, gedc or a cost file")->capture_default_str();
  d->add_flag("--matching", ged.matching, "Also print the matching");
  d->add_option("--order", ged.order, "Variable order: degree or lex")->capture_default_str();
  d->add_option("--timeout", ged.timeout, "Seconds")->capture_default_str();
  d->add_option("g1", ged.g1)->required()->check(CLI::ExistingFile);
  d->add_option("g2", ged.g2)->required()->check(CLI::ExistingFile);

  JobArgs job;
  std::vector<std::string> kinds;
  for (auto k : kProblemKinds) kinds.emplace_back(kind_name(k));
  auto* e = app.add_subcommand("encode", "Print the answer-set job for two graphs");
  auto* s = app.add_subcommand("solve", "Solve a job with an external solver and decode it");
  for (auto* sub : {e, s}) {
    sub->add_option("--kind", job.kind, "Problem kind")->required()->check(CLI::IsMember(kinds));
    sub->add_option("--weights", job.weights, "gedc only: unit, gedc or a cost file");
    sub->add_option("g1", job.g1)->required()->check(CLI::ExistingFile);
    sub->add_option("g2", job.g2)->required()->check(CLI::ExistingFile);
  }
  e->add_flag("--angle", job.angle, "Spell disequality as <>");
  e->add_option("-o,--output", job.output, "Output file");
  s->add_option("--solver", job.solver, "Solver executable (default $PGMATCH_SOLVER or clingo)");
  s->add_option("--solver-arg", job.solver_args, "Extra solver argument (repeatable)");
  s->add_option("--timeout", job.timeout, "Seconds")->capture_default_str();
  s->add_option("--models", job.models, "Model limit (0: solver default)");
  s->add_flag("--raw", job.raw, "Print the model atoms instead of decoding");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate chain K | cycle K | random N P SEED");
  g->add_option("shape", gen.shape)->required()->check(CLI::IsMember({"chain", "cycle", "random"}));
  g->add_option("params", gen.params)->required();
  g->add_flag("--second", gen.second, "Use w/f id prefixes");
  g->add_flag("--self-loops", gen.self_loops, "random: allow self-loops");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark suite");
  b->add_option("--suite", bench.suite)->required()->check(CLI::ExistingFile);
  b->add_option("--timeout", bench.timeout, "Seconds per cell (overrides the suite)");
  b->add_option("--backends", bench.backends, "Comma separated: native,asp");
  b->add_option("--solver", bench.solver, "Solver executable for the asp backend");
  b->add_option("--workers", bench.workers, "Parallel cells (0: all cores)");
  b->add_option("--csv", bench.csv, "Write CSV here instead of stdout");
  b->add_flag("--require-success", bench.require_success, "Exit 1 unless every cell succeeds");

  std::string graph_path, script_path;
  auto* ap = app.add_subcommand("apply", "Apply an edit script to a graph");
  auto* ca = app.add_subcommand("canon", "Canonicalize an edit script valid on a graph");
  for (auto* sub : {ap, ca}) {
    sub->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    sub->add_option("script", script_path)->required()->check(CLI::ExistingFile);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c) return run_check(check);
    if (*d) return run_ged(ged);
    if (*e) return run_encode(job);
    if (*s) return run_solve(job);
    if (*g) return run_gen(gen);
    if (*b) return run_bench_cmd(bench);
    if (*ap) {
      std::cout << write_graph(apply_script(read_graph_file(graph_path), read_script_file(script_path)));
      return kFound;
    }
    if (*ca) {
      std::cout << write_script(canonicalize(read_script_file(script_path), read_graph_file(graph_path)));
      return kFound;
    }
  } catch (const std::exception& ex) {
    std::cerr << "pgmatch: " << ex.what() << '\n';
    return kError;
  }
  return kError;
}
