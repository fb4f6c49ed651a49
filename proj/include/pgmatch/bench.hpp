#pragma once

// Benchmark harness: suites of (graph pair, problem kind) jobs run on the
// native engine and/or an external solver under a per-cell time budget.
//
// Suite files are line based:
//
//   # comment
//   timeout 30
//   backends native asp
//   preset synthetic-decision
//   job ged chain:4 cycle:4
//   job iso random:10:0.1:1 data/g.pg
//
// Graph specs are chain:K, cycle:K, random:N:P:SEED or a graph file path
// (relative to the suite file).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "pgmatch/asp.hpp"
#include "pgmatch/errors.hpp"
#include "pgmatch/ged.hpp"
#include "pgmatch/generators.hpp"
#include "pgmatch/search.hpp"
#include "pgmatch/solver.hpp"
#include "pgmatch/text_io.hpp"

namespace pgmatch {

enum class Backend { native, asp };

inline std::string_view backend_name(Backend b) { return b == Backend::native ? "native" : "asp"; }

struct BenchJob {
  ProblemKind kind;
  std::string g1_spec, g2_spec;

  std::string instance() const { return g1_spec + "/" + g2_spec; }
};

struct Suite {
  std::vector<BenchJob> jobs;
  std::vector<Backend> backends{Backend::native};
  std::optional<std::chrono::milliseconds> budget;
  std::filesystem::path base_dir;
};

struct BenchResult {
  std::string instance;
  ProblemKind kind = ProblemKind::hom;
  Backend backend = Backend::native;
  SolverStatus status = SolverStatus::error;
  std::optional<std::int64_t> cost;
  double ms = 0;
  bool timed_out = false;
  std::string error;

  // Decision problems succeed with a definite answer either way;
  // optimization problems need a proven optimum.
  bool success() const {
    if (is_decision(kind)) return status == SolverStatus::sat || status == SolverStatus::unsat;
    return status == SolverStatus::optimum || status == SolverStatus::unsat;
  }
};

// ---------------------------------------------------------------------------
// Suites

inline std::vector<BenchJob> preset_jobs(std::string_view name) {
  std::vector<BenchJob> out;
  auto four = [&](ProblemKind kind, int k) {
    const std::string c = "chain:" + std::to_string(k), y = "cycle:" + std::to_string(k);
    for (const auto& [a, b] : {std::pair{c, c}, {c, y}, {y, c}, {y, y}}) out.push_back({kind, a, b});
  };
  const std::vector<ProblemKind> decision{ProblemKind::hom, ProblemKind::iso, ProblemKind::sub};
  if (name == "synthetic-matrix" || name == "synthetic-decision") {
    auto kinds = decision;
    if (name == "synthetic-matrix") kinds.push_back(ProblemKind::ged);
    for (auto kind : kinds)
      for (int k = 10; k <= 100; k += 10) four(kind, k);
  } else if (name == "synthetic-random") {
    auto kinds = decision;
    kinds.push_back(ProblemKind::ged);
    for (auto kind : kinds)
      for (int n = 5; n <= 50; n += 5) {
        std::ostringstream a, b;
        a << "random:" << n << ":0.1:" << n;
        b << "random:" << n << ":0.1:" << 1000 + n;
        out.push_back({kind, a.str(), b.str()});
      }
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return out;
}

inline Suite parse_suite(std::istream& in, std::filesystem::path base_dir = {}) {
  Suite s;
  s.base_dir = std::move(base_dir);
  bool backends_set = false;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    auto t = tokenize(line, no);
    if (t.empty()) continue;
    auto fail = [&](const std::string& why) -> ParseError { return ParseError(why, no); };
    if (t[0] == "preset") {
      if (t.size() != 2) throw fail("preset takes one name");
      try {
        auto jobs = preset_jobs(t[1]);
        s.jobs.insert(s.jobs.end(), jobs.begin(), jobs.end());
      } catch (const std::invalid_argument& e) {
        throw fail(e.what());
      }
    } else if (t[0] == "job") {
      if (t.size() != 4) throw fail("job takes a kind and two graph specs");
      auto kind = kind_from_name(t[1]);
      if (!kind) throw fail("unknown problem kind '" + t[1] + "'");
      s.jobs.push_back({*kind, t[2], t[3]});
    } else if (t[0] == "backends") {
      if (!backends_set) s.backends.clear();
      backends_set = true;
      for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] == "native") s.backends.push_back(Backend::native);
        else if (t[i] == "asp") s.backends.push_back(Backend::asp);
        else throw fail("unknown backend '" + t[i] + "'");
      }
    } else if (t[0] == "timeout") {
      if (t.size() != 2) throw fail("timeout takes seconds");
      double sec = 0;
      try {
        sec = std::stod(t[1]);
      } catch (const std::exception&) {
        throw fail("bad timeout '" + t[1] + "'");
      }
      if (!(sec > 0)) throw fail("timeout must be positive");
      s.budget = std::chrono::milliseconds(static_cast<std::int64_t>(sec * 1000));
    } else {
      throw fail("unknown directive '" + t[0] + "'");
    }
  }
  return s;
}

inline Suite read_suite_file(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_suite(in, std::filesystem::path(path).parent_path());
}

// Builds a graph from a spec; `second` selects the w/f id prefixes.
inline PropertyGraph graph_from_spec(const std::string& spec, bool second,
                                     const std::filesystem::path& base_dir = {}) {
  const GenNames names = second ? GenNames::second() : GenNames{};
  std::vector<std::string> parts;
  {
    std::stringstream ss(spec);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
  }
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number in '" + spec + "'");
    return v;
  };
  if (parts.size() == 2 && parts[0] == "chain") return gen_chain(static_cast<int>(num(parts[1])), names);
  if (parts.size() == 2 && parts[0] == "cycle") return gen_cycle(static_cast<int>(num(parts[1])), names);
  if (parts.size() == 4 && parts[0] == "random")
    return gen_random(static_cast<int>(num(parts[1])), std::stod(parts[2]),
                      static_cast<std::uint64_t>(num(parts[3])), false, names);
  std::filesystem::path p(spec);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return read_graph_file(p.string());
}

// ---------------------------------------------------------------------------
// Running

struct BenchOptions {
  std::chrono::milliseconds budget{30'000};  // used when the suite sets none
  std::optional<std::chrono::milliseconds> budget_override;
  SolverConfig solver;
  unsigned workers = 0;  // 0: hardware concurrency
};

namespace detail {

inline void run_native(BenchResult& r, const PropertyGraph& g1, const PropertyGraph& g2,
                       std::chrono::milliseconds budget) {
  SearchOptions opts;
  opts.budget = budget;
  switch (r.kind) {
    case ProblemKind::hom:
    case ProblemKind::iso:
    case ProblemKind::sub: {
      const MatchKind mk = r.kind == ProblemKind::hom   ? MatchKind::hom
                           : r.kind == ProblemKind::iso ? MatchKind::iso
                                                        : MatchKind::sub;
      r.status = find_match(mk, g1, g2, opts) ? SolverStatus::sat : SolverStatus::unsat;
      return;
    }
    case ProblemKind::approx_sub_old:
    case ProblemKind::approx_sub_new: {
      opts.properties = PropertyMode::soft;
      auto m = find_match(MatchKind::sub, g1, g2, opts);
      if (!m) {
        r.status = SolverStatus::unsat;
      } else {
        r.status = SolverStatus::optimum;
        r.cost = m->property_cost;
      }
      return;
    }
    case ProblemKind::ged:
    case ProblemKind::ged_relabel:
    case ProblemKind::gedc_weighted: {
      if (r.kind != ProblemKind::ged) opts.labels = LabelMode::relabel;
      if (r.kind == ProblemKind::gedc_weighted) opts.costs = CostModel::gedc();
      auto res = min_edit_matching(g1, g2, opts);
      r.cost = res.cost;
      r.status = res.optimal ? SolverStatus::optimum : SolverStatus::timeout;
      return;
    }
  }
}

inline void run_asp(BenchResult& r, const PropertyGraph& g1, const PropertyGraph& g2_in,
                    std::chrono::milliseconds budget, SolverConfig cfg) {
  const PropertyGraph g2 = make_disjoint(g1, g2_in);
  std::optional<CostModel> cm;
  if (r.kind == ProblemKind::gedc_weighted) cm = CostModel::gedc();
  cfg.budget = budget;
  AnswerSet m = run_solver(render_job(g1, g2, r.kind, cm), cfg);
  r.status = m.status;
  if (is_edit_distance(r.kind) && m.has_model) r.cost = decode_edit_script(m, g1, g2, r.kind).cost;
  else if (!is_decision(r.kind) && m.has_model) r.cost = m.total();
}

}  // namespace detail

inline BenchResult run_cell(const BenchJob& job, Backend backend, std::chrono::milliseconds budget,
                            const SolverConfig& solver, const std::filesystem::path& base_dir = {}) {
  BenchResult r;
  r.instance = job.instance();
  r.kind = job.kind;
  r.backend = backend;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const PropertyGraph g1 = graph_from_spec(job.g1_spec, false, base_dir);
    const PropertyGraph g2 = graph_from_spec(job.g2_spec, true, base_dir);
    if (backend == Backend::native) detail::run_native(r, g1, g2, budget);
    else detail::run_asp(r, g1, g2, budget, solver);
  } catch (const SearchTimeout&) {
    r.status = SolverStatus::timeout;
  } catch (const std::exception& e) {
    r.status = SolverStatus::error;
    r.error = e.what();
  }
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.timed_out = r.status == SolverStatus::timeout;
  return r;
}

// Runs every (job, backend) cell. Cells run in parallel; the result is
// sorted by instance, kind and backend. Errors are recorded per cell.
inline std::vector<BenchResult> run_bench(const Suite& suite, const BenchOptions& opts = {}) {
  const auto budget = opts.budget_override ? *opts.budget_override : suite.budget.value_or(opts.budget);
  std::vector<std::pair<const BenchJob*, Backend>> cells;
  for (const auto& job : suite.jobs)
    for (auto b : suite.backends) cells.emplace_back(&job, b);

  std::vector<BenchResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cells.size();)
      results[i] = run_cell(*cells[i].first, cells[i].second, budget, opts.solver, suite.base_dir);
  };
  unsigned n = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, cells.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::sort(results.begin(), results.end(), [](const BenchResult& a, const BenchResult& b) {
    return std::tie(a.instance, a.kind, a.backend) < std::tie(b.instance, b.kind, b.backend);
  });
  return results;
}

// ---------------------------------------------------------------------------
// Reporting

inline constexpr std::string_view kCsvHeader = "instance,kind,backend,status,cost,ms,timed_out";

inline std::string write_csv(const std::vector<BenchResult>& results) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : results) {
    out << r.instance << ',' << kind_name(r.kind) << ',' << backend_name(r.backend) << ','
        << status_name(r.status) << ',';
    if (r.cost) out << *r.cost;
    out << ',' << std::fixed << std::setprecision(1) << r.ms << ',' << (r.timed_out ? "true" : "false")
        << '\n';
  }
  return out.str();
}

struct SummaryRow {
  ProblemKind kind;
  Backend backend;
  std::size_t cells = 0, solved = 0;
  double total_ms = 0;

  double success_rate() const { return cells ? static_cast<double>(solved) / cells : 0.0; }
};

inline std::vector<SummaryRow> summarize(const std::vector<BenchResult>& results) {
  std::map<std::pair<ProblemKind, Backend>, SummaryRow> rows;
  for (const auto& r : results) {
    auto& row = rows.try_emplace({r.kind, r.backend}, SummaryRow{r.kind, r.backend}).first->second;
    ++row.cells;
    if (r.success()) ++row.solved;
    row.total_ms += r.ms;
  }
  std::vector<SummaryRow> out;
  for (auto& [_, row] : rows) out.push_back(row);
  return out;
}

inline std::string write_summary(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "kind" << std::setw(8) << "backend" << std::right
      << std::setw(7) << "cells" << std::setw(8) << "solved" << std::setw(9) << "success"
      << std::setw(12) << "mean ms" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(16) << kind_name(r.kind) << std::setw(8) << backend_name(r.backend)
        << std::right << std::setw(7) << r.cells << std::setw(8) << r.solved << std::setw(8)
        << std::fixed << std::setprecision(1) << 100.0 * r.success_rate() << '%' << std::setw(12)
        << (r.cells ? r.total_ms / r.cells : 0.0) << '\n';
  }
  return out.str();
}

}  // namespace pgmatch
