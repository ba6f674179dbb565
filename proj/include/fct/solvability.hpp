#ifndef FCT_SOLVABILITY_HPP
#define FCT_SOLVABILITY_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fct/model.hpp"
#include "fct/typecalc.hpp"

namespace fct {

using Cell = std::pair<Symbol, Symbol>;

/// Alternating closed path (a0,b0),(a0,b1),(a1,b1),...,(a_{m-1},b_{m-1}),(a_{m-1},b0)
/// of support cells with distinct rows and distinct columns.
///
/// Canonical form: the lexicographically smallest cell comes first and the
/// second cell is its row neighbour (always the smaller neighbour). Even
/// positions are incremental, odd positions decremental.
struct SimpleLoop {
    std::vector<Cell> cells;

    std::size_t length() const { return cells.size() / 2; }
    std::vector<Cell> sorted_cells() const;
    static SimpleLoop canonical(std::vector<Cell> cyclic_cells);

    friend bool operator==(const SimpleLoop&, const SimpleLoop&) = default;
};

/// |I_+(v)| and |I_-(v)| for each function value v.
struct BalanceProfile {
    std::vector<int> incremental;
    std::vector<int> decremental;

    bool balanced() const { return incremental == decremental; }
};

/// Visits each simple loop of (A x B) n S once, in canonical form. The
/// visitor returns false to stop early. Guard: |A||B| <= 36.
void for_each_simple_loop(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols, const FunctionTable& f,
                          const std::function<bool(const SimpleLoop&)>& visit);

std::vector<SimpleLoop> enumerate_simple_loops(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols,
                                               const FunctionTable& f);

BalanceProfile balance_profile(const SimpleLoop& loop, const FunctionTable& f);

/// First unbalanced loop of (A x B) n S in enumeration order, if any.
std::optional<SimpleLoop> find_unbalanced_loop(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols,
                                               const FunctionTable& f);

bool is_solvable(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols, const FunctionTable& f);

/// Solvability of the hyperedge e, i.e. of e x Y.
bool is_solvable_edge(const std::vector<Symbol>& edge, const FunctionTable& f);

/// E(S, f): all inclusion-maximal solvable hyperedges, sorted. Guard: |X| <= 20.
Hypergraph maximal_solvable_hyperedges(const FunctionTable& f);

/// Symbols a whose support row is consistent with the list under the +-1
/// count identity. May be empty.
std::vector<Symbol> compatible_hyperedge(const ListOfTypes& list, const FunctionTable& f);

/// Every consistent list at position i has x_i in its compatible hyperedge.
bool verify_lemma1(const FunctionTable& f, const SequencePair& p, std::size_t i);

/// The compatible hyperedge of the list is solvable and lies inside some
/// member of the given E(S, f).
bool verify_lemma3(const ListOfTypes& list, const FunctionTable& f, const Hypergraph& maximal);
bool verify_lemma3(const ListOfTypes& list, const FunctionTable& f);

// Smallest (lexicographic) maximal edge containing the given set, if any.
std::optional<std::size_t> covering_edge(const Hypergraph& maximal, const std::vector<Symbol>& subset);

} // namespace fct

#endif // FCT_SOLVABILITY_HPP
