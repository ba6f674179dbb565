#include "fct/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "fct/typecalc.hpp"

namespace fct {

namespace {

constexpr std::uint64_t kExhaustiveBudget = 10'000'000;

std::size_t idx(Symbol s) { return static_cast<std::size_t>(s); }

struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const int e : v) h ^= std::hash<int>{}(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Advances a base-`radix` odometer; false after the last value.
bool next_sequence(Sequence& s, int radix) {
    for (auto& d : s) {
        if (++d < radix) return true;
        d = 0;
    }
    return false;
}

void require_full_support(const FunctionTable& f) {
    if (!f.full_support()) {
        throw ValidationError(
            "restricted support: induced partitions need a fully defined f; use the hypergraph (theorem 2) "
            "pipeline instead");
    }
}

// Concatenated list (f_n(x, b y^(-i)) : b in Y) with length prefixes.
std::vector<int> substitution_list(const FunctionFamily& family, const Sequence& x, Sequence& y, std::size_t i) {
    std::vector<int> key;
    const Symbol saved = y[i];
    for (Symbol b = 0; b < family.y_size(); ++b) {
        y[i] = b;
        const auto value = evaluate_family(family, x, y);
        key.push_back(static_cast<int>(value.size()));
        key.insert(key.end(), value.begin(), value.end());
    }
    y[i] = saved;
    return key;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(idx(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[idx(a)] != a) a = parent[idx(a)] = parent[idx(parent[idx(a)])];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[idx(std::max(a, b))] = std::min(a, b);
    }
};

} // namespace

FunctionFamily::FunctionFamily(FamilyMode m, FunctionTable f) : mode(m), base(std::move(f)) {
    if (mode == FamilyMode::modsum && !base.numeric_codomain()) {
        throw ValidationError("modulo-sum family needs codomain labels 0..m-1");
    }
    if (mode == FamilyMode::ring_xor && (base.x_size() != 2 || base.y_size() != 2)) {
        throw ValidationError("ring_xor family is binary: |X| = |Y| = 2");
    }
}

FunctionFamily FunctionFamily::ring_xor() {
    return FunctionFamily(FamilyMode::ring_xor, FunctionTable(2, 2, {"0", "1"}, {0, 1, 1, 0}));
}

FamilyValue evaluate_family(const FunctionFamily& family, const Sequence& x, const Sequence& y) {
    const SequencePair p(x, y);
    switch (family.mode) {
    case FamilyMode::symbolwise: return eval_symbolwise(family.base, p);
    case FamilyMode::type: {
        const auto t = type_function(family.base, p);
        return FamilyValue(t.counts().begin(), t.counts().end());
    }
    case FamilyMode::modsum: return {modsum_function(family.base, p)};
    case FamilyMode::ring_xor: {
        FamilyValue out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const std::size_t j = (i + 1) % x.size();
            out[i] = ((x[i] ^ y[i]) == (x[j] ^ y[j])) ? 1 : 0;
        }
        return out;
    }
    }
    throw std::logic_error("unknown family mode");
}

Partition induced_partition_symbolwise(const FunctionTable& f) {
    require_full_support(f);
    std::vector<int> labels(idx(f.x_size()));
    for (Symbol x = 0; x < f.x_size(); ++x) {
        labels[idx(x)] = x;
        for (Symbol prev = 0; prev < x; ++prev) {
            bool same = true;
            for (Symbol y = 0; y < f.y_size() && same; ++y) same = f(x, y) == f(prev, y);
            if (same) {
                labels[idx(x)] = labels[idx(prev)];
                break;
            }
        }
    }
    return Partition(labels);
}

FunctionTable hat_type_function(const FunctionTable& f) {
    require_full_support(f);
    const Symbol m = f.v_size();
    auto labels = f.v_labels();
    std::string fresh = std::to_string(m);
    while (std::find(labels.begin(), labels.end(), fresh) != labels.end()) fresh += "'";
    labels.push_back(fresh);
    std::vector<std::optional<Symbol>> entries;
    for (Symbol x = 0; x < f.x_size(); ++x) {
        bool constant = true;
        for (Symbol y = 1; y < f.y_size(); ++y) constant = constant && f(x, y) == f(x, 0);
        for (Symbol y = 0; y < f.y_size(); ++y) entries.emplace_back(constant ? m : f(x, y));
    }
    return FunctionTable(f.x_size(), f.y_size(), std::move(labels), std::move(entries));
}

FunctionTable hat_modsum_function(const FunctionTable& f) {
    require_full_support(f);
    if (!f.numeric_codomain()) throw ValidationError("modulo-sum needs codomain labels 0..m-1");
    const int m = f.v_size();
    std::vector<std::optional<Symbol>> entries;
    for (Symbol x = 0; x < f.x_size(); ++x) {
        for (Symbol y = 0; y < f.y_size(); ++y) {
            const Symbol next = f(x, (y + 1) % f.y_size());
            entries.emplace_back(((next - f(x, y)) % m + m) % m);
        }
    }
    return FunctionTable(f.x_size(), f.y_size(), f.v_labels(), std::move(entries));
}

Partition induced_partition(const FunctionFamily& family) {
    switch (family.mode) {
    case FamilyMode::symbolwise: return induced_partition_symbolwise(family.base);
    case FamilyMode::type: return induced_partition_symbolwise(hat_type_function(family.base));
    case FamilyMode::modsum: return induced_partition_symbolwise(hat_modsum_function(family.base));
    case FamilyMode::ring_xor: break;
    }
    throw ValidationError("ring_xor family is not informative for any partition");
}

std::uint64_t exhaustive_budget(const FunctionFamily& family, int n) {
    if (n < 1) throw std::invalid_argument("blocklength must be at least 1");
    std::uint64_t total = 1;
    const auto radix = static_cast<std::uint64_t>(family.x_size()) * static_cast<std::uint64_t>(family.y_size());
    for (int k = 0; k < n; ++k) {
        total *= radix;
        if (total > kExhaustiveBudget) {
            throw BudgetError("exhaustive scan over |X|^n |Y|^n = " + std::to_string(radix) + "^" +
                              std::to_string(n) + " pairs exceeds 10^7");
        }
    }
    return total;
}

InformativenessReport check_informative(const FunctionFamily& family, const Partition& part, int n) {
    if (family.mode != FamilyMode::ring_xor) require_full_support(family.base);
    if (part.size() != family.x_size()) throw std::invalid_argument("partition is not over X");
    exhaustive_budget(family, n);
    InformativenessReport report;
    report.n = n;
    const auto len = static_cast<std::size_t>(n);

    struct Seen {
        int block;
        Sequence x, y;
    };
    for (std::size_t i = 0; i < len && report.condition1; ++i) {
        std::unordered_map<std::vector<int>, Seen, VectorHash> first_seen;
        Sequence x(len, 0);
        do {
            Sequence y(len, 0);
            do {
                if (y[i] != 0) continue;  // the list does not depend on y_i
                auto key = substitution_list(family, x, y, i);
                const int block = part.block_of(x[i]);
                auto [it, inserted] = first_seen.try_emplace(std::move(key), Seen{block, x, y});
                if (!inserted && it->second.block != block) {
                    report.condition1 = false;
                    report.condition1_witness =
                        Condition1Witness{i, it->second.x[i], x[i], it->second.x, x, it->second.y, y};
                    break;
                }
            } while (next_sequence(y, family.y_size()));
        } while (report.condition1 && next_sequence(x, family.x_size()));
    }

    Sequence x(len, 0);
    do {
        Sequence y(len, 0);
        do {
            const auto value = evaluate_family(family, x, y);
            for (std::size_t j = 0; j < len && report.condition2; ++j) {
                for (std::size_t k = j + 1; k < len; ++k) {
                    if (x[j] == x[k] || part.block_of(x[j]) != part.block_of(x[k])) continue;
                    auto swapped = x;
                    std::swap(swapped[j], swapped[k]);
                    if (evaluate_family(family, swapped, y) != value) {
                        report.condition2 = false;
                        report.condition2_witness = Condition2Witness{x, y, {j, k}};
                        break;
                    }
                }
            }
        } while (report.condition2 && next_sequence(y, family.y_size()));
    } while (report.condition2 && next_sequence(x, family.x_size()));
    return report;
}

Partition finest_condition1_partition(const FunctionFamily& family, int n) {
    if (family.mode != FamilyMode::ring_xor) require_full_support(family.base);
    exhaustive_budget(family, n);
    const auto len = static_cast<std::size_t>(n);
    UnionFind uf(family.x_size());
    for (std::size_t i = 0; i < len; ++i) {
        std::unordered_map<std::vector<int>, Symbol, VectorHash> owner;
        Sequence x(len, 0);
        do {
            Sequence y(len, 0);
            do {
                if (y[i] != 0) continue;
                auto [it, inserted] = owner.try_emplace(substitution_list(family, x, y, i), x[i]);
                if (!inserted) uf.unite(it->second, x[i]);
            } while (next_sequence(y, family.y_size()));
        } while (next_sequence(x, family.x_size()));
    }
    std::vector<int> labels(idx(family.x_size()));
    for (Symbol a = 0; a < family.x_size(); ++a) labels[idx(a)] = uf.find(a);
    return Partition(labels);
}

bool replay_condition1(const FunctionFamily& family, const Partition& part, const Condition1Witness& w) {
    if (w.x[w.position] != w.a || w.x_prime[w.position] != w.a_prime) return false;
    auto y = w.y, y_prime = w.y_prime;
    return substitution_list(family, w.x, y, w.position) == substitution_list(family, w.x_prime, y_prime, w.position) &&
           part.block_of(w.a) != part.block_of(w.a_prime);
}

bool replay_condition2(const FunctionFamily& family, const Partition& part, const Condition2Witness& w) {
    const auto [j, k] = w.swap;
    if (part.block_of(w.x[j]) != part.block_of(w.x[k])) return false;
    auto swapped = w.x;
    std::swap(swapped[j], swapped[k]);
    return evaluate_family(family, swapped, w.y) != evaluate_family(family, w.x, w.y);
}

} // namespace fct
