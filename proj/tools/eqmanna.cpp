// eqmanna: command-line front end for the equitable allocation library.
//
// Exit codes: 0 success, 1 usage or other error, 2 verified non-existence,
// 3 not applicable, 4 ceiling exceeded, 5 parse error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqmanna/eq1po.hpp"
#include "eqmanna/errors.hpp"
#include "eqmanna/fairness.hpp"
#include "eqmanna/instances.hpp"
#include "eqmanna/io.hpp"
#include "eqmanna/objective.hpp"
#include "eqmanna/oracle.hpp"
#include "eqmanna/transfer.hpp"
#include "eqmanna/two_agent.hpp"
#include "eqmanna/welfare_dp.hpp"

using namespace eqmanna;

namespace {

enum Exit { ok = 0, failure = 1, none_exists = 2, not_applicable = 3, ceiling = 4, parse_failure = 5 };

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string vector_text(std::span<const Value> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

// Writes to `path`, or to stdout when the path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    save_text(path, text);
}

std::vector<ItemId> parse_items(const std::string& text) {
  std::vector<ItemId> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw PreconditionViolated("bad item index '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

Instance load_restricted(const std::string& path, const std::string& items) {
  Instance inst = load_instance(path).instance;
  if (items.empty()) return inst;
  const auto keep = parse_items(items);
  for (ItemId o : keep)
    if (o < 0 || o >= inst.num_items()) throw PreconditionViolated("item " + std::to_string(o) + " is out of range");
  return inst.restricted_to(keep);
}

// ---- classify -------------------------------------------------------------

int cmd_classify(const std::string& path) {
  const Instance inst = load_instance(path).instance;
  const ItemClass ic = classify_items(inst);
  const ValuationClass vc = classify_valuations(inst);
  std::cout << "instance: " << (inst.name().empty() ? "(unnamed)" : inst.name()) << " (" << inst.num_agents()
            << " agents, " << inst.num_items() << " items)\n";
  std::cout << "normalized: " << yes_no(vc.is_normalized) << ", O±: " << ic.subjective.size() << "\n";
  std::cout << "O+: " << ic.objective_goods.size() << ", O-: " << ic.objective_chores.size() << "\n";
  std::cout << "type-normalized: " << yes_no(vc.is_type_normalized);
  if (vc.is_type_normalized && vc.good_sum && vc.chore_sum)
    std::cout << " (g=" << *vc.good_sum << ", c=" << *vc.chore_sum << ")";
  std::cout << "\n";
  std::cout << "objective: " << yes_no(vc.is_objective) << ", identical: " << yes_no(vc.is_identical)
            << ", binary: " << yes_no(vc.is_binary) << "\n";
  std::cout << "symmetric bi-valued: " << yes_no(vc.is_symmetric_bivalued)
            << ", symmetric tri-valued: " << yes_no(vc.is_symmetric_trivalued);
  if (vc.is_symmetric_bivalued || vc.is_symmetric_trivalued) std::cout << " (w=" << vc.scale << ")";
  std::cout << "\n";
  if (vc.total) std::cout << "common total: " << *vc.total << "\n";
  return ok;
}

// ---- solve ----------------------------------------------------------------

struct SolveRun {
  std::string algorithm;
  std::optional<Allocation> allocation;
  bool verified_none = false;
  bool po_certified = false;
  std::vector<std::string> trace;
};

std::string kind_text(TransferKind k) { return std::string(to_string(k)); }

SolveRun run_objective(const Instance& inst, std::optional<std::uint64_t> seed, bool trace) {
  GreedyOptions opts;
  opts.tie_seed = seed;
  GreedyResult r = solve_objective_eq1(inst, opts);
  SolveRun out{"objective", std::move(r.allocation)};
  if (trace)
    for (const TraceStep& s : r.trace)
      out.trace.push_back("step " + std::to_string(s.step) + ": " + (s.phase == Phase::goods ? "good" : "chore") +
                          " o" + std::to_string(s.item + 1) + " -> a" + std::to_string(s.agent + 1) + " (" +
                          std::to_string(s.utility_before) + " -> " + std::to_string(s.utility_after) + ")");
  return out;
}

SolveRun run_transfer(const Instance& inst, bool trivalued, std::optional<std::uint64_t> seed, bool trace) {
  TransferOptions opts;
  opts.order_seed = seed;
  TransferResult r = trivalued ? solve_trivalued_eq1(inst, opts) : solve_bivalued_eqx(inst, opts);
  SolveRun out{trivalued ? "trivalued" : "bivalued", std::move(r.allocation)};
  if (trace) {
    for (const TransferRecord& t : r.log)
      out.trace.push_back(kind_text(t.kind) + ": o" + std::to_string(t.item + 1) + " a" + std::to_string(t.from + 1) +
                          " -> a" + std::to_string(t.to + 1) + " (values " + std::to_string(t.from_value) + "/" +
                          std::to_string(t.to_value) + ", gap " + std::to_string(t.gap_before) + ")");
    if (r.fallback_rounds > 0) out.trace.push_back("fallback rounds: " + std::to_string(r.fallback_rounds));
  }
  return out;
}

SolveRun run_eq1po(const Instance& inst, std::optional<std::uint64_t> seed) {
  NashOptions opts;
  opts.path_seed = seed;
  SolverOutcome r = solve_trivalued_eq1po(inst, opts);
  SolveRun out{"eq1po"};
  if (r.found()) {
    out.allocation = std::move(r.allocation);
    out.po_certified = true;
  } else {
    out.verified_none = true;
  }
  return out;
}

SolveRun run_two_agent(const Instance& inst) {
  const ValuationClass vc = classify_valuations(inst);
  if (inst.num_agents() == 2 && vc.is_type_normalized && classify_items(inst).objective_goods.empty() &&
      classify_items(inst).objective_chores.empty())
    return {"two-agent-subjective", solve_two_agent_subjective_eq(inst)};
  return {"two-agent", solve_two_agent_type_normalized(inst)};
}

SolveRun run_named(const std::string& algorithm, const Instance& inst, std::optional<std::uint64_t> seed, bool trace) {
  if (algorithm == "objective") return run_objective(inst, seed, trace);
  if (algorithm == "bivalued") return run_transfer(inst, false, seed, trace);
  if (algorithm == "trivalued") return run_transfer(inst, true, seed, trace);
  if (algorithm == "eq1po") return run_eq1po(inst, seed);
  if (algorithm == "two-agent") return run_two_agent(inst);
  if (algorithm == "two-agent-tripo") {
    SolveRun r{"two-agent-tripo", solve_two_agent_trivalued_eq1po(inst)};
    r.po_certified = true;
    return r;
  }
  if (algorithm == "identical") {
    SolveRun r{"identical", solve_identical_eq1po(inst)};
    r.po_certified = true;
    return r;
  }
  throw PreconditionViolated("unknown algorithm '" + algorithm + "'");
}

// Most specific applicable solver first. A verified "no EQ1+PO" from the
// tri-valued decision does not end the search: the next solver may still
// produce an EQ1 allocation.
SolveRun run_auto(const Instance& inst, std::optional<std::uint64_t> seed, bool trace, std::vector<std::string>& notes) {
  const ValuationClass vc = classify_valuations(inst);
  const ItemClass ic = classify_items(inst);
  if (vc.is_identical) return run_named("identical", inst, seed, trace);
  if (vc.is_symmetric_bivalued && vc.is_normalized) return run_named("bivalued", inst, seed, trace);
  if (vc.is_symmetric_trivalued) {
    SolveRun r = run_eq1po(inst, seed);
    if (!r.verified_none) return r;
    notes.push_back("eq1po: no EQ1+PO allocation exists");
  }
  if (vc.is_symmetric_trivalued && vc.is_normalized) return run_named("trivalued", inst, seed, trace);
  if (inst.num_agents() == 2 && vc.is_type_normalized) {
    if (vc.is_symmetric_trivalued) return run_named("two-agent-tripo", inst, seed, trace);
    return run_two_agent(inst);
  }
  if (ic.is_objective()) return run_named("objective", inst, seed, trace);
  throw NotApplicable("auto", "no solver covers non-normalized subjective instances; try `decide`");
}

int cmd_solve(const std::string& path, const std::string& algorithm, bool trace, std::optional<std::uint64_t> seed,
              const std::string& out_path, bool exact_po_check) {
  const Instance inst = load_instance(path).instance;
  std::vector<std::string> notes;
  SolveRun run;
  try {
    run = algorithm == "auto" ? run_auto(inst, seed, trace, notes) : run_named(algorithm, inst, seed, trace);
  } catch (const NotApplicable& e) {
    for (const auto& n : notes) std::cout << n << "\n";
    std::cout << "not applicable: " << e.what() << "\n";
    return not_applicable;
  }
  for (const auto& n : notes) std::cout << n << "\n";
  if (run.verified_none) {
    std::cout << "no EQ1+PO allocation exists\n";
    return none_exists;
  }
  for (const auto& line : run.trace) std::cout << "  " << line << "\n";
  const Allocation& a = *run.allocation;
  FairnessReport report = evaluate(inst, a);
  if (exact_po_check)
    report.po = exact_po(inst, a);
  else if (run.po_certified)
    report.po = true;
  std::cout << "algorithm: " << run.algorithm << "\n";
  std::cout << "utilities: " << vector_text(a.utilities()) << "\n";
  std::cout << describe(report) << "\n";
  const std::string doc = write_allocation(a, run.algorithm);
  if (out_path.empty())
    std::cout << doc;
  else
    save_text(out_path, doc);
  return ok;
}

// ---- check ----------------------------------------------------------------

int cmd_check(const std::string& instance_path, const std::string& allocation_path, bool exact) {
  const Instance inst = load_instance(instance_path).instance;
  const AllocationDocument doc = load_allocation(inst, allocation_path);
  FairnessReport report = evaluate(inst, doc.allocation);
  if (exact) {
    if (!doc.allocation.is_complete()) throw PreconditionViolated("exact PO needs a complete allocation");
    report.po = exact_po(inst, doc.allocation);
  }
  std::cout << "complete: " << yes_no(doc.allocation.is_complete()) << "\n";
  std::cout << "utilities: " << vector_text(doc.allocation.utilities()) << "\n";
  std::cout << describe(report) << "\n";
  return ok;
}

// ---- decide ---------------------------------------------------------------

int cmd_decide(const std::string& path, const std::string& items, const std::string& property,
               std::optional<std::uint64_t> ceiling_override, const std::string& out_path) {
  const Instance inst = load_restricted(path, items);
  OracleOptions opts;
  if (ceiling_override) opts.ceiling = *ceiling_override;
  const PropertyPredicate pred = PropertyPredicate::parse(property);
  const ExistsResult r = exists_with(inst, pred, opts);
  if (!r.witness) {
    std::cout << "NONE (" << r.scanned << " allocations scanned)\n";
    return none_exists;
  }
  std::cout << "FOUND " << pred.to_string() << " (allocation " << r.scanned << " in enumeration order)\n";
  std::cout << "utilities: " << vector_text(r.witness->utilities()) << "\n";
  emit(out_path, write_allocation(*r.witness, "decide " + pred.to_string()));
  return ok;
}

// ---- optimize -------------------------------------------------------------

int cmd_optimize(const std::string& path, const std::string& objective, const std::string& method, bool stats,
                 const std::string& out_path) {
  const Instance inst = load_instance(path).instance;
  const bool uw = objective == "uw";
  if (!uw && objective != "ew") throw PreconditionViolated("objective must be uw or ew");
  std::optional<Allocation> best;
  Value optimum = 0;
  if (method == "dp") {
    DpResult r = dp_welfare_eqx(inst, uw ? Objective::utilitarian : Objective::egalitarian);
    if (stats) {
      std::cout << "states: " << r.stats.total_states << " (bound " << static_cast<double>(r.stats.runtime_bound)
                << ", V=" << r.stats.value_range << ")\n";
      std::cout << "per layer:";
      for (std::size_t c : r.stats.layer_states) std::cout << " " << c;
      std::cout << "\n";
    }
    if (r.exists) {
      best = std::move(r.allocation);
      optimum = r.optimum;
    }
  } else if (method == "oracle") {
    const auto r = optimize_within(inst, {Property::eqx}, uw ? WelfareKind::utilitarian : WelfareKind::egalitarian);
    if (stats) std::cout << "allocations scanned: " << static_cast<double>(allocation_count(inst)) << "\n";
    if (r) {
      best = r->allocation;
      optimum = r->value.scalar;
    }
  } else {
    throw PreconditionViolated("method must be dp or oracle");
  }
  if (!best) {
    std::cout << "no EQX allocation\n";
    return none_exists;
  }
  std::cout << (uw ? "UW" : "EW") << " optimum: " << optimum << "\n";
  std::cout << "utilities: " << vector_text(best->utilities()) << "\n";
  emit(out_path, write_allocation(*best, "optimize " + objective + " " + method));
  return ok;
}

// ---- gen ------------------------------------------------------------------

int cmd_gen(const std::string& regime, int n, int m, Value bound, std::uint64_t seed, std::optional<int> k1,
            const std::string& out_path) {
  GeneratorSpec spec{parse_regime(regime), n, m, bound, seed, k1};
  Instance inst = generate(spec);
  inst.set_name(std::string(to_string(spec.regime)) + "-n" + std::to_string(n) + "-m" + std::to_string(m) + "-s" +
                std::to_string(seed));
  emit(out_path, write_instance(inst, std::string(to_string(spec.regime))));
  return ok;
}

// ---- fixture --------------------------------------------------------------

int cmd_fixture(const std::string& name, const std::string& out_path, bool highlighted) {
  if (name.empty()) {
    for (const auto& [key, f] : fixtures()) std::cout << key << ": " << f.property << "\n";
    return ok;
  }
  const Fixture& f = fixture(name);
  if (highlighted) {
    if (!f.highlighted) throw PreconditionViolated("fixture '" + name + "' has no highlighted allocation");
    emit(out_path, write_allocation(*f.highlighted, "fixture " + name));
  } else {
    emit(out_path, write_instance(f.instance));
  }
  return ok;
}

// ---- bench ----------------------------------------------------------------

struct Suite {
  std::string name;
  Regime regime;
  std::string algorithm;
  int n_lo, n_hi, m_lo, m_hi;
  Value bound;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"objective", Regime::objective, "objective", 2, 5, 1, 12, 9},
      {"bivalued", Regime::symmetric_bivalued_normalized, "bivalued", 2, 5, 2, 12, 1},
      {"trivalued", Regime::symmetric_trivalued_normalized, "trivalued", 2, 5, 2, 12, 1},
      {"eq1po", Regime::trivalued, "eq1po", 2, 3, 0, 7, 1},
      {"two-agent", Regime::two_agent_type_normalized, "two-agent", 2, 2, 2, 10, 4},
      {"two-agent-tripo", Regime::trivalued_type_normalized, "two-agent-tripo", 2, 2, 0, 10, 1},
      {"identical", Regime::identical, "identical", 2, 5, 1, 12, 5},
  };
  return all;
}

struct BenchRow {
  std::string regime;
  int n = 0, m = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  long long wall_ns = 0;
  std::string eq1 = "false", eqx = "false", po = "unchecked", result;
};

BenchRow bench_one(const Suite& s, std::size_t index, std::uint64_t base_seed, std::optional<int> n_fixed,
                   std::optional<int> m_fixed, std::uint64_t po_ceiling) {
  BenchRow row;
  row.seed = base_seed + index;
  const int n_span = s.n_hi - s.n_lo + 1;
  const int m_span = s.m_hi - s.m_lo + 1;
  row.n = n_fixed.value_or(s.n_lo + static_cast<int>(index % n_span));
  row.m = m_fixed.value_or(s.m_lo + static_cast<int>((index / n_span) % m_span));
  row.regime = std::string(to_string(s.regime));
  row.algorithm = s.algorithm;
  try {
    const Instance inst = generate(GeneratorSpec{s.regime, row.n, row.m, s.bound, row.seed});
    const auto t0 = std::chrono::steady_clock::now();
    SolveRun run = run_named(s.algorithm, inst, std::nullopt, false);
    row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
    if (run.verified_none) {
      row.result = "none";
      return row;
    }
    row.eq1 = yes_no(check_eq1(inst, *run.allocation).holds);
    row.eqx = yes_no(check_eqx(inst, *run.allocation).holds);
    if (allocation_count(inst) <= static_cast<long double>(po_ceiling)) {
      OracleOptions serial;
      serial.execution = Execution::serial;
      serial.ceiling = po_ceiling;
      row.po = yes_no(exact_po(inst, *run.allocation, serial));
    }
    row.result = "found";
  } catch (const NotApplicable&) {
    row.result = "not_applicable";
  } catch (const std::exception&) {
    row.result = "error";
  }
  return row;
}

int cmd_bench(const std::string& suite_name, std::size_t count, std::uint64_t seed, std::optional<int> n,
              std::optional<int> m, std::uint64_t po_ceiling, const std::string& csv_path) {
  const Suite* suite = nullptr;
  for (const Suite& s : suites())
    if (s.name == suite_name) suite = &s;
  if (!suite) {
    std::string names;
    for (const Suite& s : suites()) names += (names.empty() ? "" : ", ") + s.name;
    throw PreconditionViolated("unknown suite '" + suite_name + "' (known: " + names + ")");
  }
  std::vector<BenchRow> rows(count);
  // Instances are independent; each solver run stays on one thread and the
  // rows keep suite order.
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < static_cast<long long>(count); ++k)
    rows[k] = bench_one(*suite, static_cast<std::size_t>(k), seed, n, m, po_ceiling);

  std::ostringstream csv;
  csv << "regime,n,m,seed,algorithm,wall_ns,eq1,eqx,po_checked,result\n";
  for (const BenchRow& r : rows)
    csv << r.regime << ',' << r.n << ',' << r.m << ',' << r.seed << ',' << r.algorithm << ',' << r.wall_ns << ','
        << r.eq1 << ',' << r.eqx << ',' << r.po << ',' << r.result << '\n';
  emit(csv_path, csv.str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equitable allocation of indivisible goods and chores"};
  app.require_subcommand(1);

  std::string instance_path, allocation_path, out_path, items, algorithm = "auto", property = "eq1";
  std::string objective = "uw", method = "dp", regime, suite, csv_path;
  bool trace = false, stats = false, exact = false;
  std::optional<std::uint64_t> seed, ceiling_override;
  std::optional<int> k1, bench_n, bench_m;
  int n = 2, m = 4;
  Value bound = 3;
  std::uint64_t gen_seed = 0, bench_seed = 0, po_ceiling = 1U << 16;
  std::size_t count = 100;

  auto* classify = app.add_subcommand("classify", "Item classes and valuation flags of an instance");
  classify->add_option("instance", instance_path, "Instance file")->required();

  auto* solve = app.add_subcommand("solve", "Run a solver and report which fairness checks pass");
  solve->add_option("instance", instance_path, "Instance file")->required();
  solve->add_option("--algorithm", algorithm, "Solver to run")
      ->check(CLI::IsMember({"auto", "objective", "bivalued", "trivalued", "two-agent", "two-agent-tripo",
                             "identical", "eq1po"}));
  solve->add_flag("--trace", trace, "Print the solver's steps");
  solve->add_option("--seed", seed, "Tie-break / ordering seed");
  solve->add_option("--out", out_path, "Allocation file to write (default: stdout)");
  solve->add_flag("--exact-po", exact, "Also decide PO exactly by enumeration");

  auto* check = app.add_subcommand("check", "Evaluate an allocation file against an instance");
  check->add_option("instance", instance_path, "Instance file")->required();
  check->add_option("allocation", allocation_path, "Allocation file")->required();
  check->add_flag("--exact-po", exact, "Also decide PO exactly by enumeration");

  auto* decide = app.add_subcommand("decide", "Exhaustively decide whether an allocation with a property exists");
  decide->add_option("instance", instance_path, "Instance file")->required();
  decide->add_option("--property", property, "Properties joined by '+', e.g. eq1, eqx, eq1po, ef1+po");
  decide->add_option("--ceiling", ceiling_override, "Maximum number of allocations to enumerate");
  decide->add_option("--items", items, "Comma-separated item indices to keep (0-based)");
  decide->add_option("--out", out_path, "Witness allocation file (default: stdout)");

  auto* optimize = app.add_subcommand("optimize", "Welfare-maximal EQX allocation");
  optimize->add_option("instance", instance_path, "Instance file")->required();
  optimize->add_option("--objective", objective, "uw or ew")->check(CLI::IsMember({"uw", "ew"}));
  optimize->add_option("--method", method, "dp or oracle")->check(CLI::IsMember({"dp", "oracle"}));
  optimize->add_flag("--stats", stats, "Print state counts");
  optimize->add_option("--out", out_path, "Allocation file (default: stdout)");

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--regime", regime, "Valuation regime")->required();
  gen->add_option("--n", n, "Agents");
  gen->add_option("--m", m, "Items");
  gen->add_option("--bound", bound, "Value bound");
  gen->add_option("--k1", k1, "Number of +1 items per agent (bi-valued)");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", out_path, "Instance file (default: stdout)");

  std::string fixture_name;
  bool highlighted = false;
  auto* fix = app.add_subcommand("fixture", "Write a named example instance (lists them without a name)");
  fix->add_option("name", fixture_name, "Fixture name");
  fix->add_flag("--highlighted", highlighted, "Write the highlighted allocation instead");
  fix->add_option("--out", out_path, "Output file (default: stdout)");

  auto* bench = app.add_subcommand("bench", "Run a solver suite and emit CSV");
  bench->add_option("--suite", suite, "objective, bivalued, trivalued, eq1po, two-agent, two-agent-tripo, identical")
      ->required();
  bench->add_option("--count", count, "Number of instances");
  bench->add_option("--seed", bench_seed, "Seed of the first instance");
  bench->add_option("--n", bench_n, "Fix the number of agents");
  bench->add_option("--m", bench_m, "Fix the number of items");
  bench->add_option("--po-ceiling", po_ceiling, "Largest n^m for which PO is checked exactly");
  bench->add_option("--csv", csv_path, "CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : failure;
  }

  try {
    if (*classify) return cmd_classify(instance_path);
    if (*solve) return cmd_solve(instance_path, algorithm, trace, seed, out_path, exact);
    if (*check) return cmd_check(instance_path, allocation_path, exact);
    if (*decide) return cmd_decide(instance_path, items, property, ceiling_override, out_path);
    if (*optimize) return cmd_optimize(instance_path, objective, method, stats, out_path);
    if (*gen) return cmd_gen(regime, n, m, bound, gen_seed, k1, out_path);
    if (*fix) return cmd_fixture(fixture_name, out_path, highlighted);
    if (*bench) return cmd_bench(suite, count, bench_seed, bench_n, bench_m, po_ceiling, csv_path);
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line();
    if (!e.field().empty()) std::cerr << " (field " << e.field() << ")";
    std::cerr << ": " << e.what() << "\n";
    return parse_failure;
  } catch (const CeilingExceeded& e) {
    std::cerr << "ceiling exceeded: " << e.what() << "\n";
    return ceiling;
  } catch (const NotApplicable& e) {
    std::cout << "not applicable: " << e.what() << " (requires " << e.flag() << ")\n";
    return not_applicable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
  return failure;
}
