#pragma once

// Running an external answer-set solver on a rendered job and decoding its
// models. The solver is a subprocess speaking clingo's text output format:
//
//   Answer: 1
//   h(v,w) ...
//   Optimization: 3
//   OPTIMUM FOUND

#include <fcntl.h>
#include <poll.h>
#include <pthread.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pgmatch/asp.hpp"
#include "pgmatch/derive.hpp"
#include "pgmatch/edit.hpp"
#include "pgmatch/errors.hpp"
#include "pgmatch/graph.hpp"

namespace pgmatch {

enum class SolverStatus { sat, unsat, optimum, timeout, error };

inline std::string_view status_name(SolverStatus s) {
  switch (s) {
    case SolverStatus::sat: return "SAT";
    case SolverStatus::unsat: return "UNSAT";
    case SolverStatus::optimum: return "OPTIMUM";
    case SolverStatus::timeout: return "TIMEOUT";
    case SolverStatus::error: return "ERROR";
  }
  return "?";
}

// Process exit code for a status.
inline int exit_code(SolverStatus s) {
  switch (s) {
    case SolverStatus::sat:
    case SolverStatus::optimum: return 0;
    case SolverStatus::unsat: return 1;
    case SolverStatus::timeout: return 2;
    case SolverStatus::error: return 3;
  }
  return 3;
}

inline constexpr const char* kSolverEnv = "PGMATCH_SOLVER";

// $PGMATCH_SOLVER, or "clingo" looked up on PATH.
inline std::string default_solver_path() {
  if (const char* p = std::getenv(kSolverEnv); p && *p) return p;
  return "clingo";
}

struct SolverConfig {
  std::string path = default_solver_path();
  std::vector<std::string> args;
  std::chrono::milliseconds budget{30'000};
  int models = 0;  // 0: solver default
};

struct AnswerSet {
  std::vector<Atom> atoms;  // last (best) model
  std::vector<std::int64_t> costs;  // one entry per priority level
  bool has_model = false;
  bool optimal = false;
  SolverStatus status = SolverStatus::error;

  // Our programs use a single priority level.
  std::int64_t total() const { return std::accumulate(costs.begin(), costs.end(), std::int64_t{0}); }
};

// ---------------------------------------------------------------------------
// Output parsing

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::int64_t> parse_costs(std::string_view s) {
  std::vector<std::int64_t> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      throw SolverParseFailure("bad optimization value '" + tok + "'");
    }
  }
  return out;
}

inline bool looks_like_atoms(const std::string& line) {
  if (line.empty() || !(std::islower(static_cast<unsigned char>(line[0])) || line[0] == '_'))
    return false;
  try {
    parse_atoms(line);
    return true;
  } catch (const SolverParseFailure&) {
    return false;
  }
}

}  // namespace detail

// Strict parse of clingo-style output; when no result line is present,
// falls back to the last line that reads as a list of atoms.
inline AnswerSet parse_solver_output(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) lines.push_back(detail::trim(line));
  }

  AnswerSet r;
  std::optional<SolverStatus> status;
  bool optimum_yes = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.starts_with("Answer:")) {
      r.has_model = true;
      r.costs.clear();
      r.atoms.clear();
      if (i + 1 < lines.size() && !lines[i + 1].starts_with("Optimization:") &&
          !lines[i + 1].starts_with("Answer:"))
        r.atoms = parse_atoms(lines[++i]);
    } else if (l.starts_with("Optimization:")) {
      r.costs = detail::parse_costs(std::string_view(l).substr(13));
    } else if (l == "SATISFIABLE") {
      status = SolverStatus::sat;
    } else if (l == "UNSATISFIABLE") {
      status = SolverStatus::unsat;
    } else if (l == "OPTIMUM FOUND") {
      status = SolverStatus::optimum;
    } else if (l == "UNKNOWN") {
      status = SolverStatus::error;
    } else if (l.starts_with("Optimum") && l.ends_with("yes")) {
      optimum_yes = true;
    }
  }

  if (!status) {
    // Permissive mode.
    for (auto it = lines.rbegin(); it != lines.rend(); ++it)
      if (detail::looks_like_atoms(*it)) {
        r.atoms = parse_atoms(*it);
        r.has_model = true;
        r.status = r.costs.empty() ? SolverStatus::sat : SolverStatus::error;
        return r;
      }
    throw SolverParseFailure("no result line and no model in solver output");
  }
  r.status = *status;
  if (r.status == SolverStatus::sat && optimum_yes) r.status = SolverStatus::optimum;
  r.optimal = r.status == SolverStatus::optimum;
  return r;
}

// ---------------------------------------------------------------------------
// Process handling

namespace detail {

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

inline void make_pipe(Fd& r, Fd& w) {
  int p[2];
  if (::pipe2(p, O_CLOEXEC) != 0)
    throw ProcessFailure(std::string("pipe: ") + std::strerror(errno));
  r.fd = p[0];
  w.fd = p[1];
}

struct ProcessOutput {
  std::string out, err;
  int status = 0;
  bool interrupted = false;
};

// Writes input to the child's stdin while draining stdout and stderr. At
// the deadline the child gets SIGINT so it can report its best model, and
// SIGKILL after a grace period.
inline ProcessOutput run_process(const std::vector<std::string>& argv, std::string_view input,
                                 std::chrono::milliseconds budget,
                                 std::chrono::milliseconds grace = std::chrono::milliseconds{2000}) {
  Fd in_r, in_w, out_r, out_w, err_r, err_w, exec_r, exec_w;
  make_pipe(in_r, in_w);
  make_pipe(out_r, out_w);
  make_pipe(err_r, err_w);
  make_pipe(exec_r, exec_w);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  // EPIPE instead of a process-wide SIGPIPE when the child exits early.
  sigset_t pipe_set, old_mask;
  sigemptyset(&pipe_set);
  sigaddset(&pipe_set, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &pipe_set, &old_mask);

  const pid_t pid = ::fork();
  if (pid < 0) {
    pthread_sigmask(SIG_SETMASK, &old_mask, nullptr);
    throw ProcessFailure(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    sigset_t none;
    sigemptyset(&none);
    sigprocmask(SIG_SETMASK, &none, nullptr);
    ::signal(SIGINT, SIG_DFL);
    ::setpgid(0, 0);
    ::dup2(in_r.fd, 0);
    ::dup2(out_w.fd, 1);
    ::dup2(err_w.fd, 2);
    ::execvp(cargv[0], cargv.data());
    int e = errno;
    [[maybe_unused]] auto n = ::write(exec_w.fd, &e, sizeof e);
    ::_exit(127);
  }

  // Own process group, so signals also reach helpers the solver spawned.
  ::setpgid(pid, pid);
  in_r.reset();
  out_w.reset();
  err_w.reset();
  exec_w.reset();

  int exec_errno = 0;
  if (::read(exec_r.fd, &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    ::waitpid(pid, nullptr, 0);
    pthread_sigmask(SIG_SETMASK, &old_mask, nullptr);
    throw ProcessFailure("cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
  }

  ::fcntl(in_w.fd, F_SETFL, ::fcntl(in_w.fd, F_GETFL) | O_NONBLOCK);

  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + budget;
  auto kill_at = clock::time_point::max();
  ProcessOutput res;
  std::size_t written = 0;
  if (input.empty()) in_w.reset();

  char buf[65536];
  while (out_r.fd >= 0 || err_r.fd >= 0) {
    const auto now = clock::now();
    if (!res.interrupted && now >= deadline) {
      ::kill(-pid, SIGINT);
      res.interrupted = true;
      kill_at = now + grace;
      in_w.reset();
    }
    if (now >= kill_at) {
      ::kill(-pid, SIGKILL);
      kill_at = clock::time_point::max();
    }
    const auto until = res.interrupted ? kill_at : deadline;
    int wait_ms = 100;
    if (until != clock::time_point::max())
      wait_ms = static_cast<int>(std::clamp<std::int64_t>(
          std::chrono::duration_cast<std::chrono::milliseconds>(until - now).count() + 1, 0, 100));

    pollfd fds[3];
    int nfds = 0;
    for (int fd : {out_r.fd, err_r.fd})
      if (fd >= 0) fds[nfds++] = {fd, POLLIN, 0};
    if (in_w.fd >= 0) fds[nfds++] = {in_w.fd, POLLOUT, 0};
    if (::poll(fds, nfds, wait_ms) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < nfds; ++i) {
      if (!fds[i].revents) continue;
      if (fds[i].fd == in_w.fd) {
        ssize_t n = ::write(in_w.fd, input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) in_w.reset();
        if (written == input.size()) in_w.reset();
        continue;
      }
      ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      if (n > 0) {
        (fds[i].fd == out_r.fd ? res.out : res.err).append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        if (fds[i].fd == out_r.fd) out_r.reset();
        else err_r.reset();
      }
    }
  }
  in_w.reset();

  int status = 0;
  for (;;) {
    pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    const auto now = clock::now();
    if (!res.interrupted && now >= deadline) {
      ::kill(-pid, SIGINT);
      res.interrupted = true;
      kill_at = now + grace;
    }
    if (now >= kill_at) {
      ::kill(-pid, SIGKILL);
      kill_at = clock::time_point::max();
    }
    ::usleep(2000);
  }
  res.status = status;

  // Drop a SIGPIPE raised while it was blocked.
  sigset_t pending;
  sigpending(&pending);
  if (sigismember(&pending, SIGPIPE)) {
    timespec zero{0, 0};
    sigtimedwait(&pipe_set, nullptr, &zero);
  }
  pthread_sigmask(SIG_SETMASK, &old_mask, nullptr);
  return res;
}

}  // namespace detail

// Solves one program. A run that exceeds the budget yields status TIMEOUT
// with the best model reported before termination, if any. Throws
// ProcessFailure when the solver cannot run or fails, and
// SolverParseFailure when its output is not understood.
inline AnswerSet run_solver(std::string_view program, const SolverConfig& cfg = {}) {
  if (cfg.budget.count() <= 0) throw std::invalid_argument("solver budget must be positive");
  std::vector<std::string> argv{cfg.path};
  if (cfg.models > 0) argv.push_back(std::to_string(cfg.models));
  argv.insert(argv.end(), cfg.args.begin(), cfg.args.end());

  auto proc = detail::run_process(argv, program, cfg.budget);

  const int st = proc.status;
  if (!proc.interrupted) {
    if (WIFSIGNALED(st))
      throw ProcessFailure("solver killed by signal " + std::to_string(WTERMSIG(st)) + ": " +
                           detail::trim(proc.err));
    // clingo: 10 satisfiable, 20 exhausted, 30 both, +1 interrupted;
    // 33 and above are errors.
    if (WIFEXITED(st) && WEXITSTATUS(st) >= 33)
      throw ProcessFailure("solver exited with " + std::to_string(WEXITSTATUS(st)) + ": " +
                           detail::trim(proc.err));
  }

  AnswerSet r;
  try {
    r = parse_solver_output(proc.out);
  } catch (const SolverParseFailure&) {
    if (!proc.interrupted) throw;
    r = AnswerSet{};
  }
  // A #minimize that grounds to nothing (e.g. two empty graphs) leaves the
  // solver in plain satisfiability mode: every model costs 0, so it is optimal.
  if (!proc.interrupted && r.status == SolverStatus::sat && r.has_model && r.costs.empty() &&
      program.find("#minimize") != std::string_view::npos) {
    r.status = SolverStatus::optimum;
    r.optimal = true;
    r.costs = {0};
  }
  if (proc.interrupted && r.status != SolverStatus::optimum && r.status != SolverStatus::unsat &&
      !(r.status == SolverStatus::sat && r.costs.empty())) {
    r.status = SolverStatus::timeout;
    r.optimal = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Decoding

// h/2 atoms as a matching; each pair is classified as nodes or edges by
// looking the ids up in the graphs. Throws DecodeMismatch for unknown ids.
// The result need not be injective (homomorphisms).
inline Matching decode_matching(const AnswerSet& m, const PropertyGraph& g1,
                                const PropertyGraph& g2) {
  Matching h;
  for (const auto& a : m.atoms) {
    if (a.pred != "h" || a.args.size() != 2) continue;
    const auto& [x, y] = std::tie(a.args[0], a.args[1]);
    std::map<std::string, std::string>* target = nullptr;
    if (g1.has_node(x) && g2.has_node(y)) target = &h.node_map;
    else if (g1.has_edge(x) && g2.has_edge(y)) target = &h.edge_map;
    else throw DecodeMismatch("h(" + x + "," + y + ") does not relate two nodes or two edges");
    if (!target->emplace(x, y).second)
      throw DecodeMismatch("'" + x + "' is mapped twice");
  }
  for (const auto& [x, y] : h.edge_map) {
    const Edge& e = g1.edges().at(x);
    const Edge& f = g2.edges().at(y);
    auto s = h.node_map.find(e.src), t = h.node_map.find(e.tgt);
    if (s == h.node_map.end() || t == h.node_map.end() || s->second != f.src ||
        t->second != f.tgt)
      throw DecodeMismatch("edge pair " + x + " -> " + y + " does not preserve endpoints");
  }
  return h;
}

namespace detail {

// Total order used to compare scripts read from atoms with derived ones.
inline auto op_key(const EditOp& op) {
  std::string a, b;
  std::visit(
      [&](const auto& o) {
        if constexpr (requires { o.owner; }) {
          a = o.owner;
          b = o.key;
        } else if constexpr (requires { o.node; }) {
          a = o.node;
        } else {
          a = o.edge;
        }
      },
      op);
  return std::make_tuple(kind_of(op), a, b);
}

inline void sort_script(EditScript& s) {
  std::stable_sort(s.ops.begin(), s.ops.end(),
                   [](const EditOp& x, const EditOp& y) { return op_key(x) < op_key(y); });
}

}  // namespace detail

// Edit script of a GED-family model with its cost. For ged and ged-relabel
// the script is read from the delete/insert/update/relabel atoms and must
// coincide with the script derived from h; for the weighted program, whose
// models carry only h and cost atoms, it is derived from h. Either way the
// cost must equal the solver's optimization value. Throws DecodeMismatch.
inline DerivedScript decode_edit_script(const AnswerSet& m, const PropertyGraph& g1,
                                        const PropertyGraph& g2, ProblemKind kind,
                                        const CostModel& weighted = CostModel::gedc()) {
  if (!is_edit_distance(kind)) throw std::invalid_argument("not an edit distance job");
  if (!m.has_model) throw DecodeMismatch("no model to decode");
  const Matching h = decode_matching(m, g1, g2);
  const LabelMode mode = kind == ProblemKind::ged ? LabelMode::hard : LabelMode::relabel;
  const CostModel cm = kind == ProblemKind::gedc_weighted ? weighted : CostModel::unit();

  DerivedScript expected;
  try {
    expected = script_from_matching(h, g1, g2, mode, cm);
  } catch (const InvalidMatching& e) {
    throw DecodeMismatch(std::string("model is not a partial isomorphism: ") + e.what());
  }

  DerivedScript out;
  if (kind == ProblemKind::gedc_weighted) {
    out = expected;
  } else {
    std::map<std::string, std::string> pre;
    for (const auto& [x, y] : h.node_map) pre.emplace(y, x);
    for (const auto& [x, y] : h.edge_map) pre.emplace(y, x);
    auto local = [&](const std::string& y) {
      auto it = pre.find(y);
      return it == pre.end() ? y : it->second;
    };
    auto& ops = out.script.ops;
    for (const auto& a : m.atoms) {
      const auto& p = a.pred;
      const auto& x = a.args;
      auto need = [&](std::size_t n) {
        if (x.size() != n) throw DecodeMismatch("unexpected arity: " + render_atom(a));
      };
      if (p == "delete_node") need(1), ops.push_back(DeleteNode{x[0]});
      else if (p == "insert_node") need(2), ops.push_back(InsertNode{x[0], x[1]});
      else if (p == "delete_edge") need(1), ops.push_back(DeleteEdge{x[0]});
      else if (p == "insert_edge") need(4), ops.push_back(InsertEdge{x[0], local(x[1]), local(x[2]), x[3]});
      else if (p == "update_prop") need(4), ops.push_back(UpdateProp{x[0], x[1], x[3]});
      else if (p == "delete_prop") need(2), ops.push_back(DeleteProp{x[0], x[1]});
      else if (p == "insert_prop") need(3), ops.push_back(InsertProp{local(x[0]), x[1], x[2]});
      else if (p == "relabel_node") need(2), ops.push_back(RelabelNode{x[0], x[1]});
      else if (p == "relabel_edge") need(2), ops.push_back(RelabelEdge{x[0], x[1]});
    }
    detail::sort_script(out.script);
    EditScript want = expected.script;
    detail::sort_script(want);
    if (!(out.script == want))
      throw DecodeMismatch("edit atoms do not match the script induced by h");
    out.cost = script_cost(out.script, cm);
  }

  if (!m.costs.empty() && out.cost != m.total())
    throw DecodeMismatch("script cost " + std::to_string(out.cost) + " but solver reported " +
                         std::to_string(m.total()));
  if (m.costs.empty() && out.cost != 0)
    throw DecodeMismatch("solver reported no cost for a non-empty script");
  return out;
}

}  // namespace pgmatch
