#ifndef FCT_MODEL_HPP
#define FCT_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace fct {

using Rational = boost::multiprecision::cpp_rational;

// Symbols are dense indices: X = {0..|X|-1}, Y = {0..|Y|-1}, V = {0..|V|-1}.
using Symbol = int;
using Sequence = std::vector<Symbol>;

// Input rejected by a validation rule (exit code 1 at the CLI).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exhaustive enumeration would exceed its documented guard (exit code 2).
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);
double to_double(const Rational& r);

/// Partial map f : X x Y -> V. Cells outside the support S are undefined.
class FunctionTable {
public:
    FunctionTable(int x_size, int y_size, std::vector<std::string> v_labels,
                  std::vector<std::optional<Symbol>> entries);

    int x_size() const { return x_size_; }
    int y_size() const { return y_size_; }
    int v_size() const { return static_cast<int>(v_labels_.size()); }
    const std::vector<std::string>& v_labels() const { return v_labels_; }

    bool defined(Symbol x, Symbol y) const { return entry(x, y).has_value(); }
    const std::optional<Symbol>& entry(Symbol x, Symbol y) const;
    // Throws ValidationError on a cell outside S.
    Symbol operator()(Symbol x, Symbol y) const;

    bool full_support() const;
    // True iff v_labels are exactly "0", "1", ..., "m-1".
    bool numeric_codomain() const;
    std::size_t support_size() const;

    friend bool operator==(const FunctionTable&, const FunctionTable&) = default;

private:
    int x_size_;
    int y_size_;
    std::vector<std::string> v_labels_;
    std::vector<std::optional<Symbol>> entries_;
};

/// Joint distribution P_XY over X x Y with exact rational cells.
class JointDistribution {
public:
    JointDistribution(int x_size, int y_size, std::vector<Rational> probs);

    static JointDistribution uniform_on_support(const FunctionTable& f);

    int x_size() const { return x_size_; }
    int y_size() const { return y_size_; }
    const Rational& operator()(Symbol x, Symbol y) const;
    const std::vector<Rational>& probs() const { return probs_; }

    std::vector<Rational> marginal_x() const;
    std::vector<Rational> marginal_y() const;
    bool full_support() const;
    bool positive(Symbol x, Symbol y) const { return (*this)(x, y) > 0; }

    friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

private:
    int x_size_;
    int y_size_;
    std::vector<Rational> probs_;
};

/// True iff every cell of the distribution is strictly positive.
bool validate_full_support(const JointDistribution& d);

// Throws ValidationError("mass outside support") if supp(d) is not inside S.
void check_support_compatible(const FunctionTable& f, const JointDistribution& d);

/// Partition of X; block ids are 0..t-1 ordered by smallest member.
class Partition {
public:
    // Any labelling works; ids are renumbered canonically.
    explicit Partition(const std::vector<int>& labels);

    static Partition singletons(int size);
    static Partition trivial(int size);

    int size() const { return static_cast<int>(block_of_.size()); }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    int block_of(Symbol x) const { return block_of_.at(static_cast<std::size_t>(x)); }
    const std::vector<int>& block_ids() const { return block_of_; }
    const std::vector<std::vector<Symbol>>& blocks() const { return blocks_; }
    bool refines(const Partition& coarser) const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.block_of_ == b.block_of_;
    }

private:
    std::vector<int> block_of_;
    std::vector<std::vector<Symbol>> blocks_;
};

/// Integer count vector (n Q(v))_v of a length-n sequence.
class TypeVector {
public:
    TypeVector() = default;
    explicit TypeVector(std::vector<std::int64_t> counts);

    std::int64_t n() const { return n_; }
    std::size_t alphabet_size() const { return counts_.size(); }
    std::int64_t operator[](std::size_t v) const { return counts_.at(v); }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    Rational probability(std::size_t v) const;

    friend bool operator==(const TypeVector&, const TypeVector&) = default;
    friend auto operator<=>(const TypeVector&, const TypeVector&) = default;

private:
    std::int64_t n_ = 0;
    std::vector<std::int64_t> counts_;
};

/// Vertex set X with a family of nonempty, pairwise distinct hyperedges.
class Hypergraph {
public:
    using Edge = std::vector<Symbol>;

    Hypergraph(int x_size, std::vector<Edge> edges);

    int x_size() const { return x_size_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t size() const { return edges_.size(); }
    bool contains(std::size_t edge, Symbol x) const;
    // Vertices that belong to no edge.
    std::vector<Symbol> uncovered() const;
    bool is_antichain() const;
    // Edges that are not strictly contained in another edge of the family.
    Hypergraph maximal_edges() const;

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    int x_size_;
    std::vector<Edge> edges_;
};

struct SequencePair {
    Sequence x;
    Sequence y;

    SequencePair(Sequence xs, Sequence ys);
    std::size_t n() const { return x.size(); }
};

// Each row P_{W|X}(.|x) is a probability vector over the edges of a Hypergraph.
struct TestChannel {
    std::vector<std::vector<double>> rows;
};

enum class FamilyMode { symbolwise, type, modsum, ring_xor };

std::string to_string(FamilyMode mode);
FamilyMode parse_family_mode(std::string_view text);

struct InstanceOptions {
    std::string name;
    std::optional<FamilyMode> mode;

    friend bool operator==(const InstanceOptions&, const InstanceOptions&) = default;
};

struct Instance {
    FunctionTable function;
    JointDistribution distribution;
    InstanceOptions options;
};

/// Parses and validates an instance document (JSON text).
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

/// Canonical serialization; parse_instance(serialize_instance(i)) reproduces i.
std::string serialize_instance(const Instance& instance);

// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string instance_digest(const Instance& instance);

} // namespace fct

#endif // FCT_MODEL_HPP
