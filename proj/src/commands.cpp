#include "fct/commands.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "fct/entropy.hpp"
#include "fct/partitions.hpp"
#include "fct/solvability.hpp"
#include "fct/typecalc.hpp"
#include "fct/verify.hpp"

namespace fct {

namespace {

using json = nlohmann::ordered_json;

std::size_t idx(Symbol s) { return static_cast<std::size_t>(s); }

std::string fmt(double v, int precision = 9) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << v;
    return out.str();
}

std::string render_set(const std::vector<Symbol>& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
    return out + "}";
}

std::string render_blocks(const std::vector<std::vector<Symbol>>& blocks) {
    std::string out;
    for (std::size_t k = 0; k < blocks.size(); ++k) out += (k ? " " : "") + render_set(blocks[k]);
    return out;
}

std::string render_cells(const std::vector<Cell>& cells) {
    std::string out;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        out += (k ? " " : "") + std::string("(") + std::to_string(cells[k].first) + "," +
               std::to_string(cells[k].second) + ")";
    }
    return out;
}

json provenance(const CommandOptions& o) {
    json p;
    p["tool"] = "fct";
    p["version"] = kToolVersion;
    p["seed"] = o.seed;
    p["tol"] = o.tol;
    return p;
}

json start(const std::string& command, const Instance* instance, const CommandOptions& o) {
    json j;
    j["command"] = command;
    if (instance) {
        j["instance"]["name"] = instance->options.name;
        j["instance"]["digest"] = instance_digest(*instance);
        j["instance"]["document"] = json::parse(serialize_instance(*instance));
    }
    j["provenance"] = provenance(o);
    return j;
}

std::vector<FamilyMode> applicable_modes(const FunctionTable& f) {
    std::vector<FamilyMode> modes{FamilyMode::symbolwise, FamilyMode::type};
    if (f.numeric_codomain()) modes.push_back(FamilyMode::modsum);
    return modes;
}

json cells_json(const std::vector<Cell>& cells) {
    json a = json::array();
    for (const auto& [x, y] : cells) a.push_back({x, y});
    return a;
}

json profile_json(const BalanceProfile& p, const FunctionTable& f) {
    json j;
    for (Symbol v = 0; v < f.v_size(); ++v) {
        if (p.incremental[idx(v)] == 0 && p.decremental[idx(v)] == 0) continue;
        j[f.v_labels()[idx(v)]] = {{"incremental", p.incremental[idx(v)]}, {"decremental", p.decremental[idx(v)]}};
    }
    return j;
}

double binary_entropy(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

} // namespace

Report cmd_partitions(const Instance& instance, const CommandOptions& o) {
    Report r;
    r.json = start("partitions", &instance, o);
    std::vector<FamilyMode> modes;
    if (o.mode) modes = {*o.mode};
    else if (instance.options.mode) modes = {*instance.options.mode};
    else modes = applicable_modes(instance.function);
    json results = json::array();
    std::ostringstream text;
    text << "mode        partition\n";
    for (const auto m : modes) {
        const auto part = induced_partition(family_for(instance, m));
        results.push_back({{"mode", to_string(m)}, {"partition", part.blocks()}});
        text << std::left << std::setw(12) << to_string(m) << render_blocks(part.blocks()) << "\n";
    }
    r.json["results"] = results;
    r.text = text.str();
    return r;
}

Report cmd_informative(const Instance& instance, const CommandOptions& o) {
    Report r;
    r.json = start("informative", &instance, o);
    const FamilyMode mode = o.mode.value_or(instance.options.mode.value_or(FamilyMode::symbolwise));
    const auto family = family_for(instance, mode);
    std::vector<std::pair<std::string, Partition>> candidates;
    if (mode == FamilyMode::ring_xor) {
        candidates = {{"singletons", Partition::singletons(family.x_size())},
                      {"trivial", Partition::trivial(family.x_size())}};
    } else {
        candidates = {{"induced", induced_partition(family)}};
    }
    r.json["mode"] = to_string(mode);
    json per_n = json::array();
    std::ostringstream text;
    text << "mode " << to_string(mode) << " (positions are 1-based)\n";
    text << "n  partition      condition1  condition2  finest condition-1 partition\n";
    for (const int n : o.n_list) {
        const auto finest = finest_condition1_partition(family, n);
        json entry{{"n", n}, {"finest_condition1_partition", finest.blocks()}};
        json checks = json::array();
        for (const auto& [label, part] : candidates) {
            const auto rep = check_informative(family, part, n);
            json c{{"partition_kind", label}, {"partition", part.blocks()}, {"condition1", rep.condition1}};
            if (rep.condition1_witness) {
                const auto& w = *rep.condition1_witness;
                c["condition1_witness"] = {{"position", w.position + 1}, {"a", w.a},      {"a_prime", w.a_prime},
                                           {"x", w.x},                   {"x_prime", w.x_prime}, {"y", w.y},
                                           {"y_prime", w.y_prime},      {"replays", replay_condition1(family, part, w)}};
            }
            c["condition2"] = rep.condition2;
            if (rep.condition2_witness) {
                const auto& w = *rep.condition2_witness;
                c["condition2_witness"] = {{"x", w.x},
                                           {"y", w.y},
                                           {"swap", {w.swap.first + 1, w.swap.second + 1}},
                                           {"replays", replay_condition2(family, part, w)}};
            }
            checks.push_back(c);
            text << std::left << std::setw(3) << n << std::setw(15) << label << std::setw(12)
                 << (rep.condition1 ? "pass" : "fail") << std::setw(12) << (rep.condition2 ? "pass" : "fail")
                 << render_blocks(finest.blocks()) << "\n";
        }
        entry["checks"] = checks;
        per_n.push_back(entry);
    }
    r.json["results"] = per_n;
    r.text = text.str();
    return r;
}

Report cmd_solvable(const Instance& instance, const CommandOptions& o) {
    Report r;
    r.json = start("solvable", &instance, o);
    const auto& f = instance.function;
    std::vector<Symbol> xs(idx(f.x_size())), ys(idx(f.y_size()));
    for (Symbol k = 0; k < f.x_size(); ++k) xs[idx(k)] = k;
    for (Symbol k = 0; k < f.y_size(); ++k) ys[idx(k)] = k;
    std::ostringstream text;
    json loops = json::array();
    text << "simple loops of X x Y (even positions incremental):\n";
    for (const auto& loop : enumerate_simple_loops(xs, ys, f)) {
        const auto profile = balance_profile(loop, f);
        loops.push_back({{"cells", cells_json(loop.cells)},
                         {"length", loop.length()},
                         {"profile", profile_json(profile, f)},
                         {"balanced", profile.balanced()}});
        text << "  " << render_cells(loop.cells) << "  " << (profile.balanced() ? "balanced" : "unbalanced") << "\n";
    }
    if (loops.empty()) text << "  none\n";
    r.json["loops"] = loops;
    const auto witness = find_unbalanced_loop(xs, ys, f);
    r.json["x_solvable"] = !witness.has_value();
    if (witness) r.json["unbalanced_witness"] = cells_json(witness->cells);
    const auto e = maximal_solvable_hyperedges(f);
    r.json["maximal_solvable_hyperedges"] = e.edges();
    text << "X solvable: " << (witness ? "no" : "yes") << "\n";
    text << "E(S,f): " << render_blocks(e.edges()) << "\n";
    r.text = text.str();
    return r;
}

Report cmd_rate(const Instance& instance, const CommandOptions& o) {
    Report r;
    r.json = start("rate", &instance, o);
    const auto& d = instance.distribution;
    const bool full = validate_full_support(d);
    const FamilyMode mode =
        o.mode.value_or(instance.options.mode.value_or(full ? FamilyMode::symbolwise : FamilyMode::type));
    std::ostringstream text;
    RateReport rate;
    if (full) {
        rate = optimal_rate_theorem1(family_for(instance, mode), d);
    } else {
        if (mode != FamilyMode::type) {
            throw ValidationError("restricted support is handled for the type family only (mode type)");
        }
        SolverOptions so;
        so.tol = o.tol;
        so.seed = o.seed;
        rate = optimal_rate_theorem2(instance.function, d, so);
    }
    r.json["mode"] = to_string(mode);
    r.json["theorem"] = rate.theorem;
    r.json["rate"] = rate.rate;
    r.json["sw_rate"] = rate.sw_rate;
    r.json["improvement"] = rate.sw_rate - rate.rate;
    if (rate.partition) r.json["partition"] = rate.partition->blocks();
    if (rate.hypergraph) r.json["hypergraph"] = rate.hypergraph->edges();
    if (rate.solver) {
        r.json["solver"] = {{"iterations", rate.solver->iterations},
                            {"residual", rate.solver->residual},
                            {"channel_edges", rate.solver->edges},
                            {"channel", rate.solver->channel.rows}};
    }
    text << "mode     " << to_string(mode) << "\n";
    text << "theorem  " << rate.theorem << "\n";
    if (rate.partition) text << "blocks   " << render_blocks(rate.partition->blocks()) << "\n";
    if (rate.hypergraph) text << "E(S,f)   " << render_blocks(rate.hypergraph->edges()) << "\n";
    text << "rate     " << fmt(rate.rate) << " bits\n";
    text << "sw_rate  " << fmt(rate.sw_rate) << " bits (H(X|Y))\n";
    r.text = text.str();
    return r;
}

Report cmd_verify(const CommandOptions& o) {
    Report r;
    r.json = start("verify", nullptr, o);
    VerifyOptions v;
    if (o.max_n) {
        v.lemma1_max_n = v.condition2_max_n = v.lemma2_max_n = v.lemma3_max_n = *o.max_n;
    }
    v.seed = o.seed;
    v.solver.tol = o.tol;
    v.solver.seed = o.seed;
    r.json["provenance"]["max_n"] = {{"lemma1", v.lemma1_max_n},
                                     {"condition2", v.condition2_max_n},
                                     {"lemma2", v.lemma2_max_n},
                                     {"lemma3", v.lemma3_max_n}};
    r.json["provenance"]["lemma3_samples"] = v.lemma3_samples;
    r.json["provenance"]["grid"] = {{"step", v.grid_step}, {"tolerance", v.grid_tolerance}};
    const auto corpus = load_corpus(o.corpus_dir);
    json corpus_json = json::array();
    for (const auto& inst : corpus) corpus_json.push_back({{"name", inst.options.name}, {"digest", instance_digest(inst)}});
    r.json["corpus"] = corpus_json;
    json sweeps = json::array();
    std::ostringstream text;
    text << std::left << std::setw(48) << "sweep" << std::setw(10) << "cases" << std::setw(12) << "violations"
         << "result\n";
    bool all = true;
    for (const auto& s : run_verification(corpus, v)) {
        sweeps.push_back({{"name", s.name},
                          {"cases", s.cases},
                          {"violations", s.violations},
                          {"passed", s.passed},
                          {"detail", s.detail}});
        text << std::setw(48) << s.name << std::setw(10) << s.cases << std::setw(12) << s.violations
             << (s.passed ? "PASS" : "FAIL") << (s.detail.empty() ? "" : "  " + s.detail) << "\n";
        all = all && s.passed;
    }
    r.json["sweeps"] = sweeps;
    r.json["passed"] = all;
    r.exit_code = all ? exit_ok : exit_verification;
    r.text = text.str();
    return r;
}

namespace {

struct ExampleRow {
    std::string target;
    std::string quantity;
    std::string expected;
    std::string observed;
    double tolerance = 0.0;  // 0 means exact comparison
    bool pass = false;
};

using RowBuilder = std::function<std::vector<ExampleRow>(const std::string& corpus)>;

ExampleRow numeric_row(std::string target, std::string quantity, double expected, double observed, double tol) {
    return {std::move(target), std::move(quantity), fmt(expected, 10), fmt(observed, 10), tol,
            std::abs(expected - observed) <= tol};
}

ExampleRow exact_row(std::string target, std::string quantity, std::string expected, std::string observed) {
    const bool pass = expected == observed;
    return {std::move(target), std::move(quantity), std::move(expected), std::move(observed), 0.0, pass};
}

Instance corpus_instance(const std::string& dir, const std::string& name) {
    return load_instance(dir + "/" + name + ".json");
}

const std::vector<std::pair<std::string, RowBuilder>>& example_targets() {
    static const std::vector<std::pair<std::string, RowBuilder>> targets{
        {"tableI",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "table1");
             return std::vector<ExampleRow>{
                 exact_row("tableI", "symbolwise partition", "{0} {1,2} {3} {4}",
                           render_blocks(induced_partition(FunctionFamily(FamilyMode::symbolwise, inst.function)).blocks())),
                 exact_row("tableI", "type partition", "{0,4} {1,2} {3}",
                           render_blocks(induced_partition(FunctionFamily(FamilyMode::type, inst.function)).blocks())),
                 exact_row("tableI", "modsum partition", "{0,4} {1,2,3}",
                           render_blocks(induced_partition(FunctionFamily(FamilyMode::modsum, inst.function)).blocks()))};
         }},
        {"example5",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "example5_joint_type");
             const auto r = optimal_rate_theorem1(FunctionFamily(FamilyMode::type, inst.function), inst.distribution);
             return std::vector<ExampleRow>{numeric_row("example5", "joint-type rate = H(X|Y)", r.sw_rate, r.rate, 1e-12)};
         }},
        {"example6",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "example6_marginal_type");
             const auto r = optimal_rate_theorem1(FunctionFamily(FamilyMode::type, inst.function), inst.distribution);
             return std::vector<ExampleRow>{numeric_row("example6", "marginal-type rate", 0.0, r.rate, 1e-12)};
         }},
        {"example7",
         [](const std::string&) {
             const Rational t(1, 3);
             const auto r = hypergraph_entropy({t, t, t}, Hypergraph(3, {{0, 1}, {1, 2}}));
             return std::vector<ExampleRow>{numeric_row("example7", "H_G(X), path", 2.0 / 3.0, r.value, 1e-6)};
         }},
        {"example8",
         [](const std::string&) {
             const Rational t(1, 3);
             const auto r = hypergraph_entropy({t, t, t}, Hypergraph(3, {{0, 1}, {0, 2}, {1, 2}}));
             return std::vector<ExampleRow>{
                 numeric_row("example8", "H_G(X), all pairs", std::log2(3.0) - 1.0, r.value, 1e-6)};
         }},
        {"example9",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "card_game");
             const auto r = conditional_hypergraph_entropy(inst.distribution, Hypergraph(3, {{0, 1}, {1, 2}}));
             return std::vector<ExampleRow>{
                 numeric_row("example9", "H_G(X|Y), path", 2.0 / 3.0 * binary_entropy(0.25), r.value, 1e-6)};
         }},
        {"example10",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "card_game");
             const auto r =
                 conditional_hypergraph_entropy(inst.distribution, Hypergraph(3, {{0, 1}, {0, 2}, {1, 2}}));
             return std::vector<ExampleRow>{numeric_row("example10", "H_G(X|Y), all pairs", 0.5, r.value, 1e-6)};
         }},
        {"example11",
         [](const std::string&) {
             const auto family = FunctionFamily::ring_xor();
             const auto singles = check_informative(family, Partition::singletons(2), 3);
             const auto trivial = check_informative(family, Partition::trivial(2), 3);
             auto verdict = [](bool c1, bool c2) {
                 return std::string(c1 ? "pass" : "fail") + "/" + (c2 ? "pass" : "fail");
             };
             const bool replays = singles.condition1_witness &&
                                  replay_condition1(family, Partition::singletons(2), *singles.condition1_witness) &&
                                  trivial.condition2_witness &&
                                  replay_condition2(family, Partition::trivial(2), *trivial.condition2_witness);
             return std::vector<ExampleRow>{
                 exact_row("example11", "singletons n=3 (cond1, witness replays)", "fail, yes",
                           std::string(singles.condition1 ? "pass" : "fail") + ", " + (replays ? "yes" : "no")),
                 exact_row("example11", "trivial n=3 cond1/cond2", "pass/fail",
                           verdict(trivial.condition1, trivial.condition2))};
         }},
        {"example12",
         [](const std::string& dir) {
             const auto none = corpus_instance(dir, "example12_no_loop");
             const auto bal = corpus_instance(dir, "example12_balanced_loop");
             const std::vector<Symbol> all3{0, 1, 2};
             const auto loops_none = enumerate_simple_loops({0, 1}, all3, none.function).size();
             // n = 4 with P_x = (2,2), P_y = (1,1,2): a single joint type.
             const auto unique = type_from_marginals({0, 1}, all3, none.function, TypeVector({2, 2}),
                                                     TypeVector({1, 1, 2}));
             const auto sol = type_from_marginals(all3, all3, bal.function, TypeVector({2, 2, 2}),
                                                  TypeVector({2, 2, 2}));
             std::string observed = "none";
             if (sol.kind == MarginalSolution::Kind::unique) {
                 std::ostringstream s;
                 for (Symbol v = 1; v <= 3; ++v) s << (v > 1 ? " " : "") << v << ":" << (*sol.f_type)[idx(v)];
                 s << " from " << sol.feasible_joint_types << " joint types";
                 observed = s.str();
             }
             return std::vector<ExampleRow>{
                 exact_row("example12", "no-loop table: loops / joint types", "0 / 1",
                           std::to_string(loops_none) + " / " + std::to_string(unique.feasible_joint_types)),
                 exact_row("example12", "balanced-loop f-type, n=6", "1:2 2:2 3:2 from 3 joint types", observed)};
         }},
        {"example13",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "example13_two_loops");
             const auto loops = enumerate_simple_loops({0, 1, 2, 3}, {0, 1, 2, 3, 4}, inst.function);
             std::string observed;
             for (const auto& l : loops) {
                 observed += (observed.empty() ? "" : " | ") + render_cells(l.sorted_cells()) +
                             (balance_profile(l, inst.function).balanced() ? " balanced" : " unbalanced");
             }
             return std::vector<ExampleRow>{exact_row(
                 "example13", "simple loops",
                 "(0,0) (0,4) (3,0) (3,4) balanced | (0,1) (0,3) (1,1) (1,2) (2,2) (2,3) balanced", observed)};
         }},
        {"example14",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "card_game");
             const auto e = maximal_solvable_hyperedges(inst.function);
             const auto w = find_unbalanced_loop({0, 1, 2}, {0, 1, 2}, inst.function);
             std::string witness = "none";
             if (w) {
                 const auto p = balance_profile(*w, inst.function);
                 witness = render_cells(w->cells) + " I+(1)=" + std::to_string(p.incremental[1]) +
                           " I-(1)=" + std::to_string(p.decremental[1]);
             }
             return std::vector<ExampleRow>{
                 exact_row("example14", "E(S,f)", "{0,1} {0,2} {1,2}", render_blocks(e.edges())),
                 exact_row("example14", "unbalanced witness for {0,1,2}",
                           "(0,1) (0,2) (1,2) (1,0) (2,0) (2,1) I+(1)=2 I-(1)=1", witness)};
         }},
        {"example15",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "card_game");
             const auto r = optimal_rate_theorem2(inst.function, inst.distribution);
             return std::vector<ExampleRow>{numeric_row("example15", "card rate", 0.5, r.rate, 1e-6),
                                            numeric_row("example15", "card sw_rate H(X|Y)", 1.0, r.sw_rate, 1e-12)};
         }},
        {"compatible",
         [](const std::string& dir) {
             const auto inst = corpus_instance(dir, "card_game");
             auto e = [&](std::int64_t a, std::int64_t b) {
                 const ListOfTypes list{TypeVector({4, 2}), TypeVector({a, b}), TypeVector({3, 3})};
                 return render_set(compatible_hyperedge(list, inst.function));
             };
             return std::vector<ExampleRow>{exact_row("compatible", "e((4,2),(3,3),(3,3))/6", "{0,1}", e(3, 3)),
                                            exact_row("compatible", "e((4,2),(4,2),(3,3))/6", "{1,2}", e(4, 2)),
                                            exact_row("compatible", "e((4,2),(2,4),(3,3))/6", "{1}", e(2, 4))};
         }},
    };
    return targets;
}

} // namespace

Report cmd_examples(const CommandOptions& o) {
    Report r;
    r.json = start("examples", nullptr, o);
    if (!o.only.empty()) r.json["provenance"]["only"] = o.only;
    const auto& targets = example_targets();
    bool known = o.only.empty();
    for (const auto& [name, build] : targets) known = known || name == o.only;
    if (!known) throw ValidationError("unknown example target \"" + o.only + "\"");

    json rows = json::array();
    std::ostringstream text;
    text << std::left << std::setw(11) << "target" << std::setw(42) << "quantity" << std::setw(10) << "tolerance"
         << "result  expected -> observed\n";
    bool all = true;
    for (const auto& [name, build] : targets) {
        if (!o.only.empty() && name != o.only) continue;
        std::vector<ExampleRow> built;
        try {
            built = build(o.corpus_dir);
        } catch (const std::exception& e) {
            built = {ExampleRow{name, "evaluation", "no error", e.what(), 0.0, false}};
        }
        for (const auto& row : built) {
            rows.push_back({{"target", row.target},
                            {"quantity", row.quantity},
                            {"expected", row.expected},
                            {"observed", row.observed},
                            {"tolerance", row.tolerance},
                            {"pass", row.pass}});
            std::ostringstream tol;
            if (row.tolerance > 0) tol << std::setprecision(0) << std::scientific << row.tolerance;
            else tol << "exact";
            text << std::setw(11) << row.target << std::setw(42) << row.quantity << std::setw(10) << tol.str()
                 << (row.pass ? "PASS    " : "FAIL    ") << row.expected << " -> " << row.observed << "\n";
            all = all && row.pass;
        }
    }
    r.json["rows"] = rows;
    r.json["passed"] = all;
    r.exit_code = all ? exit_ok : exit_verification;
    r.text = text.str();
    return r;
}

Report run_command(const std::string& command, const std::string& instance_path, const CommandOptions& options) {
    auto error_report = [&](const std::string& kind, const std::string& message, int code) {
        Report r;
        r.json = start(command, nullptr, options);
        r.json["error"] = {{"kind", kind}, {"message", message}};
        r.text = kind + " error: " + message + "\n";
        r.exit_code = code;
        return r;
    };
    try {
        if (command == "verify") return cmd_verify(options);
        if (command == "examples") return cmd_examples(options);
        using Handler = Report (*)(const Instance&, const CommandOptions&);
        Handler handler = nullptr;
        if (command == "partitions") handler = cmd_partitions;
        else if (command == "informative") handler = cmd_informative;
        else if (command == "solvable") handler = cmd_solvable;
        else if (command == "rate") handler = cmd_rate;
        else throw ValidationError("unknown command \"" + command + "\"");
        if (instance_path.empty()) throw ValidationError(command + " needs an instance file");
        const auto instance = load_instance(instance_path);
        try {
            return handler(instance, options);
        } catch (const ValidationError& e) {
            auto r = error_report("validation", e.what(), exit_validation);
            r.json["instance"] = {{"name", instance.options.name}, {"digest", instance_digest(instance)}};
            return r;
        }
    } catch (const ValidationError& e) {
        return error_report("validation", e.what(), exit_validation);
    } catch (const BudgetError& e) {
        return error_report("budget", e.what(), exit_budget);
    } catch (const ConvergenceError& e) {
        return error_report("budget", e.what(), exit_budget);
    } catch (const std::invalid_argument& e) {
        return error_report("validation", e.what(), exit_validation);
    } catch (const std::out_of_range& e) {
        return error_report("validation", e.what(), exit_validation);
    }
}

} // namespace fct
