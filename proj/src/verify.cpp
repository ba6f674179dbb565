#include "fct/verify.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "fct/solvability.hpp"
#include "fct/typecalc.hpp"

namespace fct {

namespace {

std::size_t idx(Symbol s) { return static_cast<std::size_t>(s); }

std::vector<Symbol> members(std::uint32_t mask, int size) {
    std::vector<Symbol> out;
    for (Symbol s = 0; s < size; ++s)
        if (mask & (1u << s)) out.push_back(s);
    return out;
}

// Calls visit on every (x, y) in S^n.
void for_each_support_pair(const FunctionTable& f, int n, const std::function<void(const SequencePair&)>& visit) {
    std::vector<std::pair<Symbol, Symbol>> cells;
    for (Symbol x = 0; x < f.x_size(); ++x)
        for (Symbol y = 0; y < f.y_size(); ++y)
            if (f.defined(x, y)) cells.emplace_back(x, y);
    std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
    while (true) {
        Sequence xs, ys;
        for (const auto d : digit) {
            xs.push_back(cells[d].first);
            ys.push_back(cells[d].second);
        }
        visit(SequencePair(std::move(xs), std::move(ys)));
        std::size_t k = 0;
        while (k < digit.size() && ++digit[k] == cells.size()) digit[k++] = 0;
        if (k == digit.size()) return;
    }
}

// Types over `size` symbols of length n whose support is exactly `support`.
std::vector<TypeVector> types_with_support(const std::vector<Symbol>& support, int size, int n) {
    std::vector<TypeVector> out;
    if (static_cast<int>(support.size()) > n) return out;
    std::vector<std::int64_t> counts(idx(size), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
        if (k + 1 == support.size()) {
            counts[idx(support[k])] = left;
            out.emplace_back(counts);
            return;
        }
        const int rest = static_cast<int>(support.size() - k - 1);
        for (int c = 1; c <= left - rest; ++c) {
            counts[idx(support[k])] = c;
            rec(k + 1, left - c);
        }
    };
    rec(0, n);
    return out;
}

std::vector<FamilyMode> applicable_modes(const FunctionTable& f) {
    std::vector<FamilyMode> modes{FamilyMode::symbolwise, FamilyMode::type};
    if (f.numeric_codomain()) modes.push_back(FamilyMode::modsum);
    return modes;
}

void finish(SweepResult& r) { r.passed = r.violations == 0; }

} // namespace

FunctionFamily family_for(const Instance& instance, FamilyMode mode) {
    if (mode == FamilyMode::ring_xor) return FunctionFamily::ring_xor();
    return FunctionFamily(mode, instance.function);
}

bool condition2_full_permutation(const FunctionFamily& family, const Partition& part, int n) {
    exhaustive_budget(family, n);
    const auto len = static_cast<std::size_t>(n);
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> sigma(len);
    std::iota(sigma.begin(), sigma.end(), 0);
    do perms.push_back(sigma);
    while (std::next_permutation(sigma.begin(), sigma.end()));

    Sequence x(len, 0);
    while (true) {
        Sequence y(len, 0);
        while (true) {
            const auto value = evaluate_family(family, x, y);
            for (const auto& p : perms) {
                Sequence moved(len);
                bool preserves = true;
                for (std::size_t i = 0; i < len && preserves; ++i) {
                    moved[i] = x[p[i]];
                    preserves = part.block_of(moved[i]) == part.block_of(x[i]);
                }
                if (preserves && evaluate_family(family, moved, y) != value) return false;
            }
            std::size_t k = 0;
            while (k < len && ++y[k] == family.y_size()) y[k++] = 0;
            if (k == len) break;
        }
        std::size_t k = 0;
        while (k < len && ++x[k] == family.x_size()) x[k++] = 0;
        if (k == len) break;
    }
    return true;
}

SweepResult sweep_lemma1(const std::vector<Instance>& corpus, int max_n) {
    SweepResult r{"lemma1_compatible_contains_symbol", 0, 0, true, {}};
    for (const auto& inst : corpus) {
        const auto& f = inst.function;
        if (f.x_size() > 3 || f.y_size() > 3) continue;
        for (int n = 1; n <= max_n; ++n) {
            for_each_support_pair(f, n, [&](const SequencePair& p) {
                for (std::size_t i = 0; i < p.n(); ++i) {
                    consistent_lists(f, p, i).for_each([&](const ListOfTypes& list) {
                        ++r.cases;
                        const auto e = compatible_hyperedge(list, f);
                        if (!std::binary_search(e.begin(), e.end(), p.x[i])) {
                            if (r.violations++ == 0) r.detail = inst.options.name + ": x_i not compatible";
                        }
                    });
                }
            });
        }
    }
    finish(r);
    return r;
}

SweepResult sweep_lemma2(const std::vector<Instance>& corpus, int max_n) {
    SweepResult r{"lemma2_solvable_sets_unambiguous", 0, 0, true, {}};
    for (const auto& inst : corpus) {
        const auto& f = inst.function;
        if (f.x_size() > 8 || f.y_size() > 8) continue;
        for (std::uint32_t am = 1; am < (1u << f.x_size()); ++am) {
            const auto rows = members(am, f.x_size());
            for (std::uint32_t bm = 1; bm < (1u << f.y_size()); ++bm) {
                const auto cols = members(bm, f.y_size());
                if (rows.size() * cols.size() > 36 || !is_solvable(rows, cols, f)) continue;
                for (int n = 1; n <= max_n; ++n) {
                    const auto pxs = types_with_support(rows, f.x_size(), n);
                    const auto pys = types_with_support(cols, f.y_size(), n);
                    for (const auto& px : pxs) {
                        for (const auto& py : pys) {
                            ++r.cases;
                            const auto sol = type_from_marginals(rows, cols, f, px, py);
                            if (sol.kind == MarginalSolution::Kind::ambiguous && r.violations++ == 0) {
                                r.detail = inst.options.name + ": ambiguous f-type on a solvable set";
                            }
                        }
                    }
                }
            }
        }
    }
    finish(r);
    return r;
}

SweepResult sweep_lemma2_ambiguity(const FunctionTable& f, const std::vector<Symbol>& rows,
                                   const std::vector<Symbol>& cols, int max_n) {
    SweepResult r{"lemma2_unsolvable_set_ambiguous", 0, 0, true, {}};
    std::uint64_t found = 0;
    for (int n = 1; n <= max_n; ++n) {
        for (const auto& px : types_with_support(rows, f.x_size(), n)) {
            for (const auto& py : types_with_support(cols, f.y_size(), n)) {
                ++r.cases;
                const auto sol = type_from_marginals(rows, cols, f, px, py);
                if (sol.kind != MarginalSolution::Kind::ambiguous) continue;
                ++found;
                // The two witnesses must be connected by marginal-preserving loop moves.
                auto p = sol.witness->first;
                for (const auto& move : loop_cancellation_transport(p, sol.witness->second)) {
                    apply_move(p, move);
                    if (p.marginal_x() != px || p.marginal_y() != py) ++r.violations;
                }
                if (!(p == sol.witness->second)) ++r.violations;
            }
        }
    }
    std::ostringstream msg;
    msg << found << " ambiguous marginal pairs";
    r.detail = msg.str();
    r.passed = found > 0 && r.violations == 0;
    return r;
}

SweepResult sweep_lemma3(const std::vector<Instance>& corpus, int max_n, int samples, std::uint64_t seed) {
    SweepResult r{"lemma3_compatible_edges_solvable", 0, 0, true, {}};
    if (max_n < 1 || samples < 1 || corpus.empty()) return r;
    std::mt19937_64 rng(seed);
    std::vector<Hypergraph> maximal;
    for (const auto& inst : corpus) maximal.push_back(maximal_solvable_hyperedges(inst.function));
    std::vector<std::pair<Symbol, Symbol>> cells;
    for (int s = 0; s < samples; ++s) {
        const std::size_t k = rng() % corpus.size();
        const auto& f = corpus[k].function;
        const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
        auto random_type = [&] {
            std::vector<std::int64_t> counts(idx(f.v_size()), 0);
            for (int j = 0; j < n; ++j) ++counts[rng() % counts.size()];
            return TypeVector(counts);
        };
        ListOfTypes list;
        if (s % 2 == 0) {
            cells.clear();
            for (Symbol x = 0; x < f.x_size(); ++x)
                for (Symbol y = 0; y < f.y_size(); ++y)
                    if (f.defined(x, y)) cells.emplace_back(x, y);
            Sequence xs, ys;
            for (int j = 0; j < n; ++j) {
                const auto& c = cells[rng() % cells.size()];
                xs.push_back(c.first);
                ys.push_back(c.second);
            }
            const SequencePair p(xs, ys);
            const auto set = consistent_lists(f, p, rng() % p.n());
            for (const auto& entry : set.pinned) list.push_back(entry ? *entry : random_type());
        } else {
            for (Symbol b = 0; b < f.y_size(); ++b) list.push_back(random_type());
        }
        ++r.cases;
        if (!verify_lemma3(list, f, maximal[k]) && r.violations++ == 0) {
            r.detail = corpus[k].options.name + ": compatible hyperedge not solvable or not covered";
        }
    }
    finish(r);
    return r;
}

SweepResult sweep_condition2(const std::vector<Instance>& corpus, int max_n) {
    SweepResult r{"condition2_transpositions_match_permutations", 0, 0, true, {}};
    for (const auto& inst : corpus) {
        std::vector<FunctionFamily> families;
        if (inst.options.mode == FamilyMode::ring_xor) {
            families.push_back(FunctionFamily::ring_xor());
        } else if (inst.function.full_support()) {
            for (const auto m : applicable_modes(inst.function)) families.emplace_back(m, inst.function);
        }
        for (const auto& family : families) {
            std::vector<Partition> parts{Partition::trivial(family.x_size()), Partition::singletons(family.x_size())};
            if (family.mode != FamilyMode::ring_xor) parts.push_back(induced_partition(family));
            for (int n = 1; n <= max_n; ++n) {
                for (const auto& part : parts) {
                    try {
                        exhaustive_budget(family, n);
                    } catch (const BudgetError&) {
                        continue;
                    }
                    ++r.cases;
                    const bool fast = check_informative(family, part, n).condition2;
                    if (fast != condition2_full_permutation(family, part, n) && r.violations++ == 0) {
                        r.detail = inst.options.name + " (" + to_string(family.mode) + "): verdicts differ";
                    }
                }
            }
        }
    }
    finish(r);
    return r;
}

SweepResult sweep_solver_vs_grid(double step, double tolerance, const SolverOptions& solver) {
    SweepResult r{"solver_matches_grid_oracle", 0, 0, true, {}};
    const Rational third(1, 3);
    const JointDistribution uniform3(3, 1, {third, third, third});
    std::vector<Rational> card(9, Rational(1, 6));
    card[0] = card[4] = card[8] = 0;
    const JointDistribution card_d(3, 3, card);
    const Hypergraph path(3, {{0, 1}, {1, 2}});
    const Hypergraph pairs(3, {{0, 1}, {0, 2}, {1, 2}});
    const std::vector<std::pair<const JointDistribution*, const Hypergraph*>> cases{
        {&uniform3, &path}, {&uniform3, &pairs}, {&card_d, &path}, {&card_d, &pairs}};
    std::ostringstream msg;
    for (const auto& [d, e] : cases) {
        ++r.cases;
        const double solved = conditional_hypergraph_entropy(*d, *e, solver).value;
        const double grid = grid_oracle_conditional(*d, *e, step);
        msg << (r.cases > 1 ? "; " : "") << solved << " vs " << grid;
        if (std::abs(solved - grid) > tolerance) ++r.violations;
    }
    r.detail = msg.str();
    finish(r);
    return r;
}

std::vector<SweepResult> run_verification(const std::vector<Instance>& corpus, const VerifyOptions& o) {
    std::vector<SweepResult> out;
    out.push_back(sweep_lemma1(corpus, o.lemma1_max_n));
    out.push_back(sweep_lemma2(corpus, o.lemma2_max_n));
    // Injected fixture: the card function on the unsolvable set {0,1,2} x Y.
    const FunctionTable card(3, 3, {"0", "1"}, {std::nullopt, 1, 1, 0, std::nullopt, 1, 0, 0, std::nullopt});
    auto ambiguity = sweep_lemma2_ambiguity(card, {0, 1, 2}, {0, 1, 2}, o.lemma2_max_n);
    if (o.lemma2_max_n < 3) ambiguity.passed = ambiguity.violations == 0;  // too short for a witness
    out.push_back(ambiguity);
    out.push_back(sweep_lemma3(corpus, o.lemma3_max_n, o.lemma3_samples, o.seed));
    out.push_back(sweep_condition2(corpus, o.condition2_max_n));
    out.push_back(sweep_solver_vs_grid(o.grid_step, o.grid_tolerance, o.solver));
    return out;
}

std::vector<Instance> load_corpus(const std::string& directory) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Instance> out;
    for (const auto& p : files) {
        auto inst = load_instance(p.string());
        if (inst.options.name.empty()) inst.options.name = p.stem().string();
        out.push_back(std::move(inst));
    }
    return out;
}

} // namespace fct
