#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <string>

#include "pgmatch/asp.hpp"
#include "pgmatch/ged.hpp"
#include "pgmatch/solver.hpp"
#include "pgmatch/text_io.hpp"

using namespace pgmatch;
using namespace std::chrono_literals;

namespace {

std::string fake(const std::string& name) { return std::string(PGMATCH_TEST_DATA) + "/" + name; }

SolverConfig fake_config(const std::string& name, std::chrono::milliseconds budget = 10s) {
  SolverConfig cfg;
  cfg.path = fake(name);
  cfg.budget = budget;
  return cfg;
}

bool have_solver() {
  const char* p = std::getenv(kSolverEnv);
  return p && *p;
}

#define REQUIRE_SOLVER() \
  if (!have_solver()) GTEST_SKIP() << "no solver configured (set PGMATCH_SOLVER)"

AnswerSet model(std::vector<Atom> atoms, std::vector<std::int64_t> costs = {}) {
  AnswerSet m;
  m.atoms = std::move(atoms);
  m.costs = std::move(costs);
  m.has_model = true;
  m.status = m.costs.empty() ? SolverStatus::sat : SolverStatus::optimum;
  return m;
}

PropertyGraph one_node(const std::string& id, const std::string& label) {
  PropertyGraph g;
  g.add_node(id, label);
  return g;
}

}  // namespace

TEST(Status, NamesAndExitCodes) {
  EXPECT_EQ(status_name(SolverStatus::optimum), "OPTIMUM");
  EXPECT_EQ(exit_code(SolverStatus::sat), 0);
  EXPECT_EQ(exit_code(SolverStatus::optimum), 0);
  EXPECT_EQ(exit_code(SolverStatus::unsat), 1);
  EXPECT_EQ(exit_code(SolverStatus::timeout), 2);
  EXPECT_EQ(exit_code(SolverStatus::error), 3);
}

TEST(ParseOutput, Satisfiable) {
  const auto m = parse_solver_output(
      "clingo version 5.6.2\nReading from stdin\nSolving...\nAnswer: 1\nh(v,w) h(e,f)\n"
      "SATISFIABLE\n\nModels       : 1+\nCalls        : 1\n");
  EXPECT_EQ(m.status, SolverStatus::sat);
  EXPECT_TRUE(m.has_model);
  EXPECT_FALSE(m.optimal);
  EXPECT_TRUE(m.costs.empty());
  EXPECT_EQ(m.atoms, (std::vector<Atom>{{"h", {"v", "w"}}, {"h", {"e", "f"}}}));
}

TEST(ParseOutput, KeepsLastModelOfOptimization) {
  const auto m = parse_solver_output(
      "Answer: 1\nh(a,b)\nOptimization: 7\nAnswer: 2\nh(a,c) delete_node(x)\nOptimization: 3\n"
      "OPTIMUM FOUND\n\nModels       : 2\n  Optimum    : yes\nOptimization : 3\n");
  EXPECT_EQ(m.status, SolverStatus::optimum);
  EXPECT_TRUE(m.optimal);
  EXPECT_EQ(m.costs, std::vector<std::int64_t>{3});
  EXPECT_EQ(m.total(), 3);
  EXPECT_EQ(m.atoms.size(), 2u);
  EXPECT_EQ(m.atoms[0], (Atom{"h", {"a", "c"}}));
}

TEST(ParseOutput, EmptyModelAndUnsat) {
  auto m = parse_solver_output("Answer: 1\n\nSATISFIABLE\n");
  EXPECT_TRUE(m.has_model);
  EXPECT_TRUE(m.atoms.empty());
  m = parse_solver_output("Answer: 1\nOptimization: 0\nOPTIMUM FOUND\n");
  EXPECT_TRUE(m.atoms.empty());
  EXPECT_EQ(m.total(), 0);
  m = parse_solver_output("Solving...\nUNSATISFIABLE\n");
  EXPECT_EQ(m.status, SolverStatus::unsat);
  EXPECT_FALSE(m.has_model);
  m = parse_solver_output("UNKNOWN\n");
  EXPECT_EQ(m.status, SolverStatus::error);
}

TEST(ParseOutput, OptimumYesUpgradesSat) {
  const auto m = parse_solver_output("Answer: 1\nh(a,b)\nOptimization: 1\nSATISFIABLE\nOptimum    : yes\n");
  EXPECT_EQ(m.status, SolverStatus::optimum);
}

TEST(ParseOutput, QuotedTermsAreUnescaped) {
  const auto m = parse_solver_output("Answer: 1\nh(\"V 2\",w) h(\"a\\\"b\",\"c\\\\d\")\nSATISFIABLE\n");
  ASSERT_EQ(m.atoms.size(), 2u);
  EXPECT_EQ(m.atoms[0].args[0], "V 2");
  EXPECT_EQ(m.atoms[1].args[0], "a\"b");
  EXPECT_EQ(m.atoms[1].args[1], "c\\d");
}

TEST(ParseOutput, PermissiveFallback) {
  const auto m = parse_solver_output("banner\nh(v1,w1)\nnoise line here\nh(v2,w2) h(e,f)\n");
  EXPECT_EQ(m.status, SolverStatus::sat);
  EXPECT_EQ(m.atoms.size(), 2u);
  EXPECT_THROW(parse_solver_output("Hello, world\n"), SolverParseFailure);
  EXPECT_THROW(parse_solver_output(""), SolverParseFailure);
  EXPECT_THROW(parse_solver_output("Answer: 1\nh(a,b)\nOptimization: x\nOPTIMUM FOUND\n"),
               SolverParseFailure);
}

TEST(RunSolver, PermissiveOutputFromProcess) {
  const auto m = run_solver("p.", fake_config("fake-bare.sh"));
  EXPECT_EQ(m.status, SolverStatus::sat);
  EXPECT_EQ(m.atoms.size(), 2u);
}

TEST(RunSolver, ErrorExitIsProcessFailure) {
  try {
    run_solver("p.", fake_config("fake-error.sh"));
    FAIL() << "expected ProcessFailure";
  } catch (const ProcessFailure& e) {
    EXPECT_NE(std::string(e.what()).find("parse error"), std::string::npos);
  }
}

TEST(RunSolver, GarbageIsParseFailure) {
  EXPECT_THROW(run_solver("p.", fake_config("fake-garbage.sh")), SolverParseFailure);
}

TEST(RunSolver, MissingExecutable) {
  EXPECT_THROW(run_solver("p.", fake_config("no-such-solver")), ProcessFailure);
}

TEST(RunSolver, BudgetMustBePositive) {
  EXPECT_THROW(run_solver("p.", fake_config("fake-bare.sh", 0ms)), std::invalid_argument);
}

TEST(RunSolver, ChildThatIgnoresInputDoesNotKillUs) {
  const std::string big(4 << 20, 'x');
  const auto m = run_solver(big, fake_config("fake-noread.sh"));
  EXPECT_EQ(m.status, SolverStatus::unsat);
}

TEST(RunSolver, ModelsAndArgsArePassed) {
  auto cfg = fake_config("fake-echo-args.sh");
  cfg.models = 3;
  cfg.args = {"--opt-mode=opt", "-q"};
  const auto m = run_solver("p.", cfg);
  ASSERT_EQ(m.atoms.size(), 1u);
  EXPECT_EQ(m.atoms[0], (Atom{"args", {"3"}}));
}

TEST(RunSolver, EmptyMinimizeIsOptimal) {
  const auto cfg = fake_config("fake-echo-args.sh");
  EXPECT_EQ(run_solver("p.", cfg).status, SolverStatus::sat);
  const auto m = run_solver("p. #minimize { 1,X : q(X) }.", cfg);
  EXPECT_EQ(m.status, SolverStatus::optimum);
  EXPECT_TRUE(m.optimal);
  EXPECT_EQ(m.total(), 0);
}

TEST(RunSolver, TimeoutReturnsBestModelSoFar) {
  const auto start = std::chrono::steady_clock::now();
  const auto m = run_solver("p.", fake_config("fake-partial.sh", 300ms));
  const auto took = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(m.status, SolverStatus::timeout);
  EXPECT_FALSE(m.optimal);
  ASSERT_TRUE(m.has_model);
  EXPECT_EQ(m.atoms, (std::vector<Atom>{{"h", {"v", "u"}}}));
  EXPECT_EQ(m.total(), 4);
  EXPECT_LT(took, 5s);
}

TEST(RunSolver, TimeoutKillsStubbornSolver) {
  const auto start = std::chrono::steady_clock::now();
  const auto m = run_solver("p.", fake_config("fake-stubborn.sh", 200ms));
  const auto took = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(m.status, SolverStatus::timeout);
  EXPECT_FALSE(m.has_model);
  // Budget plus the two second grace period, with slack.
  EXPECT_GE(took, 2s);
  EXPECT_LT(took, 8s);
}

TEST(DecodeMatching, NodesAndEdges) {
  PropertyGraph g1, g2;
  g1.add_node("v1", "a").add_node("V 2", "a").add_edge("e1", "v1", "V 2", "r");
  g2.add_node("w1", "a").add_node("w", "a").add_edge("f1", "w1", "w", "r");
  auto h = decode_matching(model({{"h", {"v1", "w1"}}}), g1, g2);
  EXPECT_EQ(h.node_map, (std::map<std::string, std::string>{{"v1", "w1"}}));
  EXPECT_TRUE(h.edge_map.empty());
  h = decode_matching(model({{"h", {"v1", "w1"}}, {"h", {"V 2", "w"}}, {"h", {"e1", "f1"}}}), g1, g2);
  EXPECT_EQ(h.node_map.at("V 2"), "w");
  EXPECT_EQ(h.edge_map.at("e1"), "f1");
  EXPECT_TRUE(check_isomorphism(h, g1, g2));
  // Atoms read back from solver text.
  const auto m = parse_solver_output("Answer: 1\nh(\"V 2\",w) h(v1,w1) h(e1,f1)\nSATISFIABLE\n");
  EXPECT_EQ(decode_matching(m, g1, g2), h);
}

TEST(DecodeMatching, Errors) {
  PropertyGraph g1, g2;
  g1.add_node("v1", "a").add_node("v2", "a").add_edge("e1", "v1", "v2", "r");
  g2.add_node("w1", "a").add_node("w2", "a").add_edge("f1", "w1", "w2", "r");
  EXPECT_THROW(decode_matching(model({{"h", {"zz", "w1"}}}), g1, g2), DecodeMismatch);
  EXPECT_THROW(decode_matching(model({{"h", {"v1", "f1"}}}), g1, g2), DecodeMismatch);
  EXPECT_THROW(decode_matching(model({{"h", {"v1", "w1"}}, {"h", {"v1", "w2"}}}), g1, g2),
               DecodeMismatch);
  EXPECT_THROW(decode_matching(model({{"h", {"v1", "w2"}}, {"h", {"v2", "w1"}}, {"h", {"e1", "f1"}}}),
                               g1, g2),
               DecodeMismatch);
  // Homomorphisms may be non-injective.
  const auto h = decode_matching(model({{"h", {"v1", "w1"}}, {"h", {"v2", "w1"}}}), g1, g2);
  EXPECT_EQ(h.node_map.size(), 2u);
}

TEST(DecodeEditScript, IdenticalGraphs) {
  PropertyGraph g1 = one_node("v", "a"), g2 = one_node("w", "a");
  const auto d = decode_edit_script(model({{"h", {"v", "w"}}}, {0}), g1, g2, ProblemKind::ged);
  EXPECT_TRUE(d.script.ops.empty());
  EXPECT_EQ(d.cost, 0);
}

TEST(DecodeEditScript, LabelHardSingleNodes) {
  const auto g1 = one_node("v", "a"), g2 = one_node("w", "b");
  EXPECT_EQ(oracle_ged(g1, g2), 2);
  const auto m = model({{"delete_node", {"v"}}, {"insert_node", {"w", "b"}}}, {2});
  const auto d = decode_edit_script(m, g1, g2, ProblemKind::ged);
  EXPECT_EQ(d.script, (EditScript{DeleteNode{"v"}, InsertNode{"w", "b"}}));
  EXPECT_EQ(d.cost, 2);
  EXPECT_EQ(apply_script(g1, d.script), g2);
}

TEST(DecodeEditScript, MissingInsertIsMismatch) {
  const auto g1 = one_node("v", "a"), g2 = one_node("w", "b");
  EXPECT_THROW(decode_edit_script(model({{"delete_node", {"v"}}}, {1}), g1, g2, ProblemKind::ged),
               DecodeMismatch);
  EXPECT_THROW(decode_edit_script(model({{"delete_node", {"v"}}, {"insert_node", {"w", "b"}}}, {5}),
                                  g1, g2, ProblemKind::ged),
               DecodeMismatch);
  EXPECT_THROW(decode_edit_script(model({{"h", {"v", "w"}}}, {0}), g1, g2, ProblemKind::ged),
               DecodeMismatch);
  AnswerSet none;
  none.status = SolverStatus::unsat;
  EXPECT_THROW(decode_edit_script(none, g1, g2, ProblemKind::ged), DecodeMismatch);
  EXPECT_THROW(decode_edit_script(model({}), g1, g2, ProblemKind::hom), std::invalid_argument);
}

TEST(DecodeEditScript, RelabelAndWeighted) {
  const auto g1 = one_node("v", "a"), g2 = one_node("w", "b");
  auto d = decode_edit_script(model({{"h", {"v", "w"}}, {"relabel_node", {"v", "b"}}}, {1}), g1, g2,
                              ProblemKind::ged_relabel);
  EXPECT_EQ(d.script, (EditScript{RelabelNode{"v", "b"}}));
  EXPECT_EQ(d.cost, 1);
  d = decode_edit_script(model({{"h", {"v", "w"}}, {"node_cost", {"v", "2"}}}, {2}), g1, g2,
                         ProblemKind::gedc_weighted);
  EXPECT_EQ(d.script, (EditScript{RelabelNode{"v", "b"}}));
  EXPECT_EQ(d.cost, 2);
  // Empty h: delete and insert at 4 each.
  EXPECT_EQ(decode_edit_script(model({}, {8}), g1, g2, ProblemKind::gedc_weighted).cost, 8);
  EXPECT_THROW(decode_edit_script(model({}, {5}), g1, g2, ProblemKind::gedc_weighted), DecodeMismatch);
}

TEST(DecodeEditScript, InsertedEdgeBetweenMatchedNodes) {
  PropertyGraph g1, g2;
  g1.add_node("v1", "a").add_node("v2", "a");
  g2.add_node("w1", "a").add_node("w2", "a").add_edge("f", "w1", "w2", "r").set_prop("f", "k", "x");
  const auto m = model({{"h", {"v1", "w1"}},
                        {"h", {"v2", "w2"}},
                        {"insert_edge", {"f", "w1", "w2", "r"}},
                        {"insert_prop", {"f", "k", "x"}}},
                       {2});
  const auto d = decode_edit_script(m, g1, g2, ProblemKind::ged);
  EXPECT_EQ(d.script, (EditScript{InsertEdge{"f", "v1", "v2", "r"}, InsertProp{"f", "k", "x"}}));
}

// The tests below need a working solver.

TEST(LiveSolver, Unsat) {
  REQUIRE_SOLVER();
  EXPECT_EQ(run_solver("a. :- a.\n").status, SolverStatus::unsat);
}

TEST(LiveSolver, HomOfIdenticalSingleNodes) {
  REQUIRE_SOLVER();
  const auto g1 = one_node("v", "a"), g2 = one_node("w", "a");
  const auto m = run_solver(render_job(g1, g2, ProblemKind::hom));
  EXPECT_EQ(m.status, SolverStatus::sat);
  EXPECT_EQ(decode_matching(m, g1, g2).node_map.at("v"), "w");
}

TEST(LiveSolver, GedOfIdenticalGraphsIsZero) {
  REQUIRE_SOLVER();
  auto g1 = read_graph_file(std::string(PGMATCH_TEST_DATA) + "/fixed_g1.pg");
  const auto g2 = make_disjoint(g1, g1);
  const auto m = run_solver(render_job(g1, g2, ProblemKind::ged));
  EXPECT_EQ(m.status, SolverStatus::optimum);
  EXPECT_EQ(m.total(), 0);
  EXPECT_TRUE(decode_edit_script(m, g1, g2, ProblemKind::ged).script.ops.empty());
}

TEST(LiveSolver, GedOfEmptyGraphsIsOptimal) {
  REQUIRE_SOLVER();
  const PropertyGraph empty;
  const auto m = run_solver(render_job(empty, empty, ProblemKind::ged));
  EXPECT_EQ(m.status, SolverStatus::optimum);
  EXPECT_EQ(m.total(), 0);
}

TEST(LiveSolver, EditKindsDecodeConsistently) {
  REQUIRE_SOLVER();
  const auto g1 = read_graph_file(std::string(PGMATCH_TEST_DATA) + "/fixed_g1.pg");
  const auto g2 = read_graph_file(std::string(PGMATCH_TEST_DATA) + "/fixed_g2.pg");
  for (auto kind : {ProblemKind::ged, ProblemKind::ged_relabel, ProblemKind::gedc_weighted}) {
    std::optional<CostModel> cm;
    if (kind == ProblemKind::gedc_weighted) cm = CostModel::gedc();
    const auto m = run_solver(render_job(g1, g2, kind, cm));
    ASSERT_EQ(m.status, SolverStatus::optimum) << kind_name(kind);
    const auto d = decode_edit_script(m, g1, g2, kind);
    SearchOptions opts;
    opts.labels = kind == ProblemKind::ged ? LabelMode::hard : LabelMode::relabel;
    if (cm) opts.costs = *cm;
    EXPECT_EQ(d.cost, min_edit_matching(g1, g2, opts).cost) << kind_name(kind);
    EXPECT_EQ(rename(apply_script(g1, d.script), decode_matching(m, g1, g2)), g2);
  }
}

TEST(LiveSolver, GedcSingleNodeRelabelCostsTwo) {
  REQUIRE_SOLVER();
  const auto g1 = one_node("v", "a"), g2 = one_node("w", "b");
  const auto m = run_solver(render_job(g1, g2, ProblemKind::gedc_weighted, CostModel::gedc()));
  EXPECT_EQ(m.status, SolverStatus::optimum);
  EXPECT_EQ(m.total(), 2);
}
