#ifndef FCT_PARTITIONS_HPP
#define FCT_PARTITIONS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fct/model.hpp"

namespace fct {

/// A blocklength-indexed function family f_n built from a base table.
///
///   symbolwise  f_n(x,y) = (f(x_1,y_1), ..., f(x_n,y_n))
///   type        f_n(x,y) = type of the symbol-wise values
///   modsum      f_n(x,y) = sum_i f(x_i,y_i) mod |V|
///   ring_xor    f_n(x,y) = (1[x_i xor y_i = x_{i+1} xor y_{i+1}])_i, cyclic,
///               a fixed binary family that ignores the base table
struct FunctionFamily {
    FamilyMode mode;
    FunctionTable base;

    FunctionFamily(FamilyMode m, FunctionTable f);
    static FunctionFamily ring_xor();

    int x_size() const { return base.x_size(); }
    int y_size() const { return base.y_size(); }
    int modulus() const { return base.v_size(); }
};

// Family outputs flattened to integer vectors so lists can be hashed.
using FamilyValue = std::vector<int>;
FamilyValue evaluate_family(const FunctionFamily& family, const Sequence& x, const Sequence& y);

struct Condition1Witness {
    std::size_t position;  // 0-based
    Symbol a;
    Symbol a_prime;
    Sequence x, x_prime;
    Sequence y, y_prime;
};

struct Condition2Witness {
    Sequence x;
    Sequence y;
    std::pair<std::size_t, std::size_t> swap;  // 0-based transposition
};

struct InformativenessReport {
    int n = 0;
    bool condition1 = true;
    std::optional<Condition1Witness> condition1_witness;
    bool condition2 = true;
    std::optional<Condition2Witness> condition2_witness;
};

/// x ~ x' iff f(x, y) = f(x', y) for every y. Needs full support.
Partition induced_partition_symbolwise(const FunctionTable& f);

/// Rows on which f is constant map to the fresh symbol m = |V|; the rest are copied.
FunctionTable hat_type_function(const FunctionTable& f);

/// f(x, y+1) - f(x, y) mod m with f(x, |Y|) = f(x, 0).
FunctionTable hat_modsum_function(const FunctionTable& f);

Partition induced_partition(const FunctionFamily& family);

/// Exhaustive check at a single blocklength. Guard: |X|^n |Y|^n <= 10^7.
InformativenessReport check_informative(const FunctionFamily& family, const Partition& part, int n);

/// Finest partition whose blocks are recoverable from the substitution lists
/// at blocklength n (union of all forced merges).
Partition finest_condition1_partition(const FunctionFamily& family, int n);

// Replays a witness against the family; true iff it shows a violation.
bool replay_condition1(const FunctionFamily& family, const Partition& part, const Condition1Witness& w);
bool replay_condition2(const FunctionFamily& family, const Partition& part, const Condition2Witness& w);

// Number of (x, y) pairs an exhaustive scan at blocklength n visits; throws BudgetError above 10^7.
std::uint64_t exhaustive_budget(const FunctionFamily& family, int n);

} // namespace fct

#endif // FCT_PARTITIONS_HPP
