#include "fct/solvability.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <unordered_map>

namespace fct {

namespace {

constexpr std::size_t kMaxLoopCells = 36;
constexpr int kMaxLatticeVertices = 20;

std::size_t idx(Symbol s) { return static_cast<std::size_t>(s); }

std::vector<Symbol> all_symbols(int size) {
    std::vector<Symbol> out(idx(size));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

} // namespace

std::vector<Cell> SimpleLoop::sorted_cells() const {
    auto out = cells;
    std::sort(out.begin(), out.end());
    return out;
}

SimpleLoop SimpleLoop::canonical(std::vector<Cell> cyclic) {
    if (cyclic.size() < 4 || cyclic.size() % 2 != 0) throw std::invalid_argument("a simple loop has 2m >= 4 cells");
    const auto first = std::min_element(cyclic.begin(), cyclic.end());
    std::rotate(cyclic.begin(), first, cyclic.end());
    // Orient so the row neighbour of the smallest cell comes second.
    if (cyclic[1].first != cyclic[0].first) std::reverse(cyclic.begin() + 1, cyclic.end());
    for (std::size_t k = 0; k < cyclic.size(); ++k) {
        const auto& c = cyclic[k];
        const auto& d = cyclic[(k + 1) % cyclic.size()];
        const bool row_step = (k % 2 == 0);
        if (row_step ? c.first != d.first : c.second != d.second) {
            throw std::invalid_argument("cells do not alternate rows and columns");
        }
    }
    return SimpleLoop{std::move(cyclic)};
}

void for_each_simple_loop(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols, const FunctionTable& f,
                          const std::function<bool(const SimpleLoop&)>& visit) {
    if (rows.size() * cols.size() > kMaxLoopCells) {
        throw BudgetError("simple-loop enumeration limited to |A||B| <= 36");
    }
    auto sorted_rows = rows, sorted_cols = cols;
    std::sort(sorted_rows.begin(), sorted_rows.end());
    std::sort(sorted_cols.begin(), sorted_cols.end());

    std::vector<bool> row_used(idx(f.x_size()), false), col_used(idx(f.y_size()), false);
    std::vector<Cell> path;
    bool stop = false;
    Cell start{};

    auto usable = [&](Symbol x, Symbol y) { return f.defined(x, y) && Cell{x, y} > start; };

    // At cell (a_k, b_k); take a row step to a new column or close on b_0.
    std::function<void(Symbol)> walk = [&](Symbol a) {
        for (const Symbol c : sorted_cols) {
            if (stop) return;
            if (c == start.second) {
                if (path.size() >= 3 && usable(a, c)) {
                    path.emplace_back(a, c);
                    stop = !visit(SimpleLoop{path});
                    path.pop_back();
                }
                continue;
            }
            if (col_used[idx(c)] || !usable(a, c)) continue;
            col_used[idx(c)] = true;
            path.emplace_back(a, c);
            for (const Symbol r : sorted_rows) {
                if (stop) break;
                if (row_used[idx(r)] || !usable(r, c)) continue;
                row_used[idx(r)] = true;
                path.emplace_back(r, c);
                walk(r);
                path.pop_back();
                row_used[idx(r)] = false;
            }
            path.pop_back();
            col_used[idx(c)] = false;
        }
    };

    for (const Symbol a : sorted_rows) {
        for (const Symbol b : sorted_cols) {
            if (stop) return;
            if (!f.defined(a, b)) continue;
            start = {a, b};
            row_used[idx(a)] = true;
            col_used[idx(b)] = true;
            path.assign(1, start);
            walk(a);
            row_used[idx(a)] = false;
            col_used[idx(b)] = false;
        }
    }
}

std::vector<SimpleLoop> enumerate_simple_loops(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols,
                                               const FunctionTable& f) {
    std::vector<SimpleLoop> out;
    for_each_simple_loop(rows, cols, f, [&](const SimpleLoop& loop) {
        out.push_back(loop);
        return true;
    });
    return out;
}

BalanceProfile balance_profile(const SimpleLoop& loop, const FunctionTable& f) {
    BalanceProfile p{std::vector<int>(idx(f.v_size()), 0), std::vector<int>(idx(f.v_size()), 0)};
    for (std::size_t k = 0; k < loop.cells.size(); ++k) {
        const auto [x, y] = loop.cells[k];
        auto& counts = (k % 2 == 0) ? p.incremental : p.decremental;
        ++counts[idx(f(x, y))];
    }
    return p;
}

std::optional<SimpleLoop> find_unbalanced_loop(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols,
                                               const FunctionTable& f) {
    std::optional<SimpleLoop> witness;
    if (rows.size() <= 1 || cols.size() <= 1) return witness;
    for_each_simple_loop(rows, cols, f, [&](const SimpleLoop& loop) {
        if (balance_profile(loop, f).balanced()) return true;
        witness = loop;
        return false;
    });
    return witness;
}

bool is_solvable(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols, const FunctionTable& f) {
    return !find_unbalanced_loop(rows, cols, f).has_value();
}

bool is_solvable_edge(const std::vector<Symbol>& edge, const FunctionTable& f) {
    return is_solvable(edge, all_symbols(f.y_size()), f);
}

Hypergraph maximal_solvable_hyperedges(const FunctionTable& f) {
    const int xs = f.x_size();
    if (xs > kMaxLatticeVertices) throw BudgetError("maximal solvable hyperedge search limited to |X| <= 20");
    using Mask = std::uint32_t;
    auto members = [&](Mask m) {
        std::vector<Symbol> out;
        for (Symbol x = 0; x < xs; ++x)
            if (m & (Mask{1} << x)) out.push_back(x);
        return out;
    };
    std::unordered_map<Mask, bool> memo;
    auto solvable = [&](Mask m) {
        auto [it, inserted] = memo.try_emplace(m, false);
        if (inserted) it->second = is_solvable_edge(members(m), f);
        return it->second;
    };

    // Top-down over the subset lattice. A candidate inside a known maximal
    // edge is skipped; otherwise, if solvable, all its supersets were already
    // rejected and it is maximal.
    std::vector<Mask> maximal;
    std::set<Mask> level{(Mask{1} << xs) - 1};
    while (!level.empty()) {
        std::set<Mask> next;
        for (const Mask m : level) {
            const bool covered =
                std::any_of(maximal.begin(), maximal.end(), [&](Mask e) { return (m & e) == m; });
            if (covered) continue;
            if (solvable(m)) {
                maximal.push_back(m);
                continue;
            }
            for (Symbol x = 0; x < xs; ++x) {
                const Mask bit = Mask{1} << x;
                if ((m & bit) && (m & ~bit)) next.insert(m & ~bit);
            }
        }
        level = std::move(next);
    }
    std::vector<Hypergraph::Edge> edges;
    for (const Mask m : maximal) edges.push_back(members(m));
    std::sort(edges.begin(), edges.end());
    return Hypergraph(xs, std::move(edges));
}

std::vector<Symbol> compatible_hyperedge(const ListOfTypes& list, const FunctionTable& f) {
    if (static_cast<int>(list.size()) != f.y_size()) throw std::invalid_argument("list needs one type per y");
    for (const auto& q : list) {
        if (q.n() != list.front().n() || static_cast<int>(q.alphabet_size()) != f.v_size()) {
            throw std::invalid_argument("list entries must share n and the codomain");
        }
    }
    std::vector<Symbol> out;
    for (Symbol a = 0; a < f.x_size(); ++a) {
        bool compatible = true;
        for (Symbol b1 = 0; b1 < f.y_size() && compatible; ++b1) {
            if (!f.defined(a, b1)) continue;
            for (Symbol b2 = 0; b2 < f.y_size() && compatible; ++b2) {
                if (!f.defined(a, b2)) continue;
                for (Symbol v = 0; v < f.v_size(); ++v) {
                    const auto lhs = list[idx(b1)][idx(v)] - list[idx(b2)][idx(v)];
                    const int rhs = int(f(a, b1) == v) - int(f(a, b2) == v);
                    if (lhs != rhs) {
                        compatible = false;
                        break;
                    }
                }
            }
        }
        if (compatible) out.push_back(a);
    }
    return out;
}

bool verify_lemma1(const FunctionTable& f, const SequencePair& p, std::size_t i) {
    bool ok = true;
    consistent_lists(f, p, i).for_each([&](const ListOfTypes& list) {
        const auto e = compatible_hyperedge(list, f);
        ok = ok && std::binary_search(e.begin(), e.end(), p.x[i]);
    });
    return ok;
}

std::optional<std::size_t> covering_edge(const Hypergraph& maximal, const std::vector<Symbol>& subset) {
    for (std::size_t k = 0; k < maximal.size(); ++k) {
        const auto& e = maximal.edges()[k];
        if (std::includes(e.begin(), e.end(), subset.begin(), subset.end())) return k;
    }
    return std::nullopt;
}

bool verify_lemma3(const ListOfTypes& list, const FunctionTable& f, const Hypergraph& maximal) {
    const auto e = compatible_hyperedge(list, f);
    if (e.empty()) return true;
    return is_solvable_edge(e, f) && covering_edge(maximal, e).has_value();
}

bool verify_lemma3(const ListOfTypes& list, const FunctionTable& f) {
    return verify_lemma3(list, f, maximal_solvable_hyperedges(f));
}

} // namespace fct
