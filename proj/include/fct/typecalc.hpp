#ifndef FCT_TYPECALC_HPP
#define FCT_TYPECALC_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fct/model.hpp"

namespace fct {

// Position arguments in this header are 0-based; reports render them 1-based.

/// (f(x_1,y_1), ..., f(x_n,y_n)). Throws ValidationError if a pair is outside S.
Sequence eval_symbolwise(const FunctionTable& f, const SequencePair& p);

/// Occurrence counts of each symbol of an alphabet of the given size.
TypeVector type_of(const Sequence& seq, int alphabet_size);

/// Type of the symbol-wise function values, f_n^t(x, y).
TypeVector type_function(const FunctionTable& f, const SequencePair& p);

/// Sum of f(x_i, y_i) mod |V|; f must be fully defined with numeric labels.
Symbol modsum_function(const FunctionTable& f, const SequencePair& p);

/// Copy of seq with position i replaced by a.
Sequence substitute(const Sequence& seq, std::size_t i, Symbol a);

/// One type per side-information symbol b, all of the same blocklength.
using ListOfTypes = std::vector<TypeVector>;

/// The set of lists consistent with (x, y) at position i: entry b is pinned
/// to f_n^t(x, b y^(-i)) when (x_i, b) lies in S and is free otherwise.
struct ConsistentListSet {
    std::int64_t n = 0;
    int v_size = 0;
    std::vector<std::optional<TypeVector>> pinned;
    std::vector<Symbol> free;

    bool contains(const ListOfTypes& list) const;
    // Calls visit on every member; free entries range over all types of length n.
    // Throws BudgetError when more than `budget` lists would be produced.
    void for_each(const std::function<void(const ListOfTypes&)>& visit, std::uint64_t budget = 1000000) const;
};

ConsistentListSet consistent_lists(const FunctionTable& f, const SequencePair& p, std::size_t i);

/// Every type of length n over an alphabet of the given size, in lexicographic order.
std::vector<TypeVector> all_types(std::int64_t n, int alphabet_size);

/// Rebuilds a sequence with the given block labels and marginal type; each
/// block's positions are filled with its symbols in increasing symbol order.
Sequence reconstruct_representative(const Partition& part, const std::vector<int>& blocks, const TypeVector& marg);

/// Integer counts n P(x, y) over the full X x Y grid (row-major).
class JointType {
public:
    JointType(int x_size, int y_size, std::vector<std::int64_t> counts);
    static JointType of(const SequencePair& p, int x_size, int y_size);

    int x_size() const { return x_size_; }
    int y_size() const { return y_size_; }
    std::int64_t n() const;
    std::int64_t operator()(Symbol x, Symbol y) const;
    std::int64_t& at(Symbol x, Symbol y);
    const std::vector<std::int64_t>& counts() const { return counts_; }
    TypeVector marginal_x() const;
    TypeVector marginal_y() const;
    // Induced type of the function values, sum over f(x,y)=v of the counts.
    TypeVector f_type(const FunctionTable& f) const;

    friend bool operator==(const JointType&, const JointType&) = default;

private:
    int x_size_;
    int y_size_;
    std::vector<std::int64_t> counts_;
};

struct Ambiguity {
    JointType first;
    JointType second;
};

/// Outcome of recovering the f-type from two marginal types.
struct MarginalSolution {
    enum class Kind { unique, ambiguous, infeasible };
    Kind kind = Kind::infeasible;
    std::optional<TypeVector> f_type;
    std::optional<Ambiguity> witness;
    std::size_t feasible_joint_types = 0;
};

/// Thrown by consumers that require a unique f-type (the type decoder).
class AmbiguityError : public std::runtime_error {
public:
    AmbiguityError(const std::string& what, Ambiguity witness)
        : std::runtime_error(what), witness_(std::move(witness)) {}
    const Ambiguity& witness() const { return witness_; }

private:
    Ambiguity witness_;
};

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Enumerates every joint type on (A x B) n S with marginals px (over X,
/// mass inside A) and py (over Y, mass inside B). Guard: n <= 12, |A||B| <= 36.
void enumerate_joint_types(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols, const FunctionTable& f,
                           const TypeVector& px, const TypeVector& py,
                           const std::function<bool(const JointType&)>& visit);

MarginalSolution type_from_marginals(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols,
                                     const FunctionTable& f, const TypeVector& px, const TypeVector& py);

/// A simple loop given as alternating cells (a0,b0),(a0,b1),(a1,b1),...,(a_{m-1},b0).
/// Even positions lose one count and odd positions gain one when the move is applied.
struct LoopMove {
    std::vector<std::pair<Symbol, Symbol>> cells;
    // True when the walk closed on a revisited row rather than a column.
    bool closed_on_row = false;
};

void apply_move(JointType& p, const LoopMove& move);

/// Sequence of +-1 loop moves carrying p1 onto p2 (same n and marginals).
std::vector<LoopMove> loop_cancellation_transport(const JointType& p1, const JointType& p2);

/// Conditional types given the quantization sequence: one entry per edge of E.
struct ConditionalTypes {
    std::vector<TypeVector> rows;
};

/// Per hyperedge w, solves the f-type from the conditional marginals and
/// mixes the results with the weights of qw.
TypeVector decode_type_from_quantization(const Hypergraph& edges, const TypeVector& qw,
                                         const ConditionalTypes& qx_given_w, const ConditionalTypes& qy_given_w,
                                         const FunctionTable& f);

} // namespace fct

#endif // FCT_TYPECALC_HPP
