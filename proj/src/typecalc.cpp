#include "fct/typecalc.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace fct {

namespace {

constexpr std::int64_t kMaxJointBlocklength = 12;
constexpr std::size_t kMaxJointCells = 36;

std::size_t idx(Symbol s) { return static_cast<std::size_t>(s); }

} // namespace

Sequence eval_symbolwise(const FunctionTable& f, const SequencePair& p) {
    Sequence out;
    out.reserve(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) {
        out.push_back(f(p.x[i], p.y[i]));
    }
    return out;
}

TypeVector type_of(const Sequence& seq, int alphabet_size) {
    if (seq.empty()) throw std::invalid_argument("type of an empty sequence (n must be at least 1)");
    std::vector<std::int64_t> counts(idx(alphabet_size), 0);
    for (const Symbol s : seq) {
        if (s < 0 || s >= alphabet_size) throw std::out_of_range("symbol outside the alphabet");
        ++counts[idx(s)];
    }
    return TypeVector(std::move(counts));
}

TypeVector type_function(const FunctionTable& f, const SequencePair& p) {
    return type_of(eval_symbolwise(f, p), f.v_size());
}

Symbol modsum_function(const FunctionTable& f, const SequencePair& p) {
    if (!f.full_support()) throw ValidationError("modulo-sum needs a fully defined function");
    if (!f.numeric_codomain()) throw ValidationError("modulo-sum needs codomain labels 0..m-1");
    const int m = f.v_size();
    int sum = 0;
    for (const Symbol v : eval_symbolwise(f, p)) sum = (sum + v) % m;
    return sum;
}

Sequence substitute(const Sequence& seq, std::size_t i, Symbol a) {
    if (i >= seq.size()) {
        throw std::out_of_range("substitution position " + std::to_string(i + 1) + " outside [1:" +
                                std::to_string(seq.size()) + "]");
    }
    Sequence out = seq;
    out[i] = a;
    return out;
}

// Consistent lists ---------------------------------------------------------

std::vector<TypeVector> all_types(std::int64_t n, int alphabet_size) {
    std::vector<TypeVector> out;
    std::vector<std::int64_t> counts(idx(alphabet_size), 0);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t pos, std::int64_t left) {
        if (pos + 1 == counts.size()) {
            counts[pos] = left;
            out.emplace_back(counts);
            return;
        }
        for (std::int64_t c = left; c >= 0; --c) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    if (alphabet_size > 0) rec(0, n);
    std::sort(out.begin(), out.end(),
              [](const TypeVector& a, const TypeVector& b) { return a.counts() < b.counts(); });
    return out;
}

bool ConsistentListSet::contains(const ListOfTypes& list) const {
    if (list.size() != pinned.size()) return false;
    for (std::size_t b = 0; b < list.size(); ++b) {
        if (list[b].n() != n || static_cast<int>(list[b].alphabet_size()) != v_size) return false;
        if (pinned[b] && *pinned[b] != list[b]) return false;
    }
    return true;
}

void ConsistentListSet::for_each(const std::function<void(const ListOfTypes&)>& visit,
                                 std::uint64_t budget) const {
    const auto types = all_types(n, v_size);
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < free.size(); ++k) {
        total *= types.size();
        if (total > budget) throw BudgetError("consistent-list scan exceeds budget of " + std::to_string(budget));
    }
    ListOfTypes list(pinned.size());
    for (std::size_t b = 0; b < pinned.size(); ++b) {
        if (pinned[b]) list[b] = *pinned[b];
    }
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == free.size()) {
            visit(list);
            return;
        }
        for (const auto& t : types) {
            list[idx(free[k])] = t;
            rec(k + 1);
        }
    };
    rec(0);
}

ConsistentListSet consistent_lists(const FunctionTable& f, const SequencePair& p, std::size_t i) {
    if (i >= p.n()) throw std::out_of_range("list position outside the sequence");
    ConsistentListSet set;
    set.n = static_cast<std::int64_t>(p.n());
    set.v_size = f.v_size();
    set.pinned.resize(idx(f.y_size()));
    for (Symbol b = 0; b < f.y_size(); ++b) {
        if (f.defined(p.x[i], b)) {
            set.pinned[idx(b)] = type_function(f, SequencePair(p.x, substitute(p.y, i, b)));
        } else {
            set.free.push_back(b);
        }
    }
    return set;
}

Sequence reconstruct_representative(const Partition& part, const std::vector<int>& blocks, const TypeVector& marg) {
    if (static_cast<int>(marg.alphabet_size()) != part.size()) {
        throw std::invalid_argument("marginal type is not over the partitioned alphabet");
    }
    std::vector<std::vector<std::size_t>> positions(idx(part.block_count()));
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i] < 0 || blocks[i] >= part.block_count()) throw std::out_of_range("block label out of range");
        positions[idx(blocks[i])].push_back(i);
    }
    Sequence out(blocks.size(), -1);
    for (int c = 0; c < part.block_count(); ++c) {
        const auto& members = part.blocks()[idx(c)];
        std::int64_t mass = 0;
        for (const Symbol a : members) mass += marg[idx(a)];
        if (mass != static_cast<std::int64_t>(positions[idx(c)].size())) {
            throw std::invalid_argument("count mismatch: block " + std::to_string(c) + " occupies " +
                                        std::to_string(positions[idx(c)].size()) +
                                        " positions but the marginal type assigns " + std::to_string(mass));
        }
        std::size_t next = 0;
        for (const Symbol a : members) {
            for (std::int64_t k = 0; k < marg[idx(a)]; ++k) out[positions[idx(c)][next++]] = a;
        }
    }
    return out;
}

// Joint types --------------------------------------------------------------

JointType::JointType(int x_size, int y_size, std::vector<std::int64_t> counts)
    : x_size_(x_size), y_size_(y_size), counts_(std::move(counts)) {
    if (counts_.size() != idx(x_size_) * idx(y_size_)) throw std::invalid_argument("joint type grid size mismatch");
    for (const auto c : counts_)
        if (c < 0) throw std::invalid_argument("negative joint count");
}

JointType JointType::of(const SequencePair& p, int x_size, int y_size) {
    JointType t(x_size, y_size, std::vector<std::int64_t>(idx(x_size) * idx(y_size), 0));
    for (std::size_t i = 0; i < p.n(); ++i) ++t.at(p.x[i], p.y[i]);
    return t;
}

std::int64_t JointType::n() const { return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0}); }

std::int64_t JointType::operator()(Symbol x, Symbol y) const { return counts_.at(idx(x) * idx(y_size_) + idx(y)); }

std::int64_t& JointType::at(Symbol x, Symbol y) { return counts_.at(idx(x) * idx(y_size_) + idx(y)); }

TypeVector JointType::marginal_x() const {
    std::vector<std::int64_t> m(idx(x_size_), 0);
    for (Symbol x = 0; x < x_size_; ++x)
        for (Symbol y = 0; y < y_size_; ++y) m[idx(x)] += (*this)(x, y);
    return TypeVector(std::move(m));
}

TypeVector JointType::marginal_y() const {
    std::vector<std::int64_t> m(idx(y_size_), 0);
    for (Symbol x = 0; x < x_size_; ++x)
        for (Symbol y = 0; y < y_size_; ++y) m[idx(y)] += (*this)(x, y);
    return TypeVector(std::move(m));
}

TypeVector JointType::f_type(const FunctionTable& f) const {
    std::vector<std::int64_t> m(idx(f.v_size()), 0);
    for (Symbol x = 0; x < x_size_; ++x) {
        for (Symbol y = 0; y < y_size_; ++y) {
            const auto c = (*this)(x, y);
            if (c > 0) m[idx(f(x, y))] += c;
        }
    }
    return TypeVector(std::move(m));
}

void enumerate_joint_types(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols, const FunctionTable& f,
                           const TypeVector& px, const TypeVector& py,
                           const std::function<bool(const JointType&)>& visit) {
    if (static_cast<int>(px.alphabet_size()) != f.x_size() || static_cast<int>(py.alphabet_size()) != f.y_size()) {
        throw std::invalid_argument("marginal types must be over X and Y");
    }
    if (rows.size() * cols.size() > kMaxJointCells) {
        throw BudgetError("joint-type enumeration limited to |A||B| <= 36");
    }
    if (px.n() > kMaxJointBlocklength) throw BudgetError("joint-type enumeration limited to n <= 12");
    if (px.n() != py.n()) return;

    std::vector<bool> in_rows(idx(f.x_size()), false), in_cols(idx(f.y_size()), false);
    for (const Symbol a : rows) in_rows.at(idx(a)) = true;
    for (const Symbol b : cols) in_cols.at(idx(b)) = true;
    for (Symbol x = 0; x < f.x_size(); ++x)
        if (!in_rows[idx(x)] && px[idx(x)] > 0) return;
    for (Symbol y = 0; y < f.y_size(); ++y)
        if (!in_cols[idx(y)] && py[idx(y)] > 0) return;

    struct Cell {
        Symbol x, y;
        bool last_in_row, last_in_col;
    };
    auto sorted_rows = rows, sorted_cols = cols;
    std::sort(sorted_rows.begin(), sorted_rows.end());
    std::sort(sorted_cols.begin(), sorted_cols.end());
    std::vector<Cell> cells;
    for (const Symbol a : sorted_rows)
        for (const Symbol b : sorted_cols)
            if (f.defined(a, b)) cells.push_back({a, b, false, false});
    for (std::size_t k = 0; k < cells.size(); ++k) {
        cells[k].last_in_row = std::none_of(cells.begin() + static_cast<std::ptrdiff_t>(k) + 1, cells.end(),
                                            [&](const Cell& c) { return c.x == cells[k].x; });
        cells[k].last_in_col = std::none_of(cells.begin() + static_cast<std::ptrdiff_t>(k) + 1, cells.end(),
                                            [&](const Cell& c) { return c.y == cells[k].y; });
    }
    // A row or column of A x B with mass but no support cell is infeasible.
    for (const Symbol a : sorted_rows)
        if (px[idx(a)] > 0 && std::none_of(cells.begin(), cells.end(), [&](const Cell& c) { return c.x == a; })) return;
    for (const Symbol b : sorted_cols)
        if (py[idx(b)] > 0 && std::none_of(cells.begin(), cells.end(), [&](const Cell& c) { return c.y == b; })) return;

    std::vector<std::int64_t> row_left = px.counts(), col_left = py.counts();
    JointType current(f.x_size(), f.y_size(), std::vector<std::int64_t>(idx(f.x_size()) * idx(f.y_size()), 0));
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (stop) return;
        if (k == cells.size()) {
            if (std::all_of(row_left.begin(), row_left.end(), [](auto v) { return v == 0; }) &&
                std::all_of(col_left.begin(), col_left.end(), [](auto v) { return v == 0; })) {
                stop = !visit(current);
            }
            return;
        }
        const Cell& c = cells[k];
        auto& r = row_left[idx(c.x)];
        auto& q = col_left[idx(c.y)];
        std::int64_t lo = 0, hi = std::min(r, q);
        if (c.last_in_row) lo = r;
        if (c.last_in_col) lo = std::max(lo, q);
        if (c.last_in_row && c.last_in_col && r != q) return;
        for (std::int64_t v = lo; v <= hi && !stop; ++v) {
            r -= v;
            q -= v;
            current.at(c.x, c.y) = v;
            rec(k + 1);
            current.at(c.x, c.y) = 0;
            r += v;
            q += v;
        }
    };
    rec(0);
}

MarginalSolution type_from_marginals(const std::vector<Symbol>& rows, const std::vector<Symbol>& cols,
                                     const FunctionTable& f, const TypeVector& px, const TypeVector& py) {
    MarginalSolution result;
    std::optional<JointType> first;
    enumerate_joint_types(rows, cols, f, px, py, [&](const JointType& t) {
        ++result.feasible_joint_types;
        auto ft = t.f_type(f);
        if (!first) {
            first = t;
            result.f_type = std::move(ft);
            return true;
        }
        if (ft != *result.f_type) {
            result.witness = Ambiguity{*first, t};
            return false;
        }
        return true;
    });
    if (result.witness) {
        result.kind = MarginalSolution::Kind::ambiguous;
        result.f_type.reset();
    } else if (first) {
        result.kind = MarginalSolution::Kind::unique;
    } else {
        result.kind = MarginalSolution::Kind::infeasible;
    }
    return result;
}

// Loop cancellation --------------------------------------------------------

void apply_move(JointType& p, const LoopMove& move) {
    for (std::size_t k = 0; k < move.cells.size(); ++k) {
        auto& c = p.at(move.cells[k].first, move.cells[k].second);
        c += (k % 2 == 0) ? -1 : 1;
        if (c < 0) throw std::logic_error("loop move drove a joint count negative");
    }
}

namespace {

// Alternating walk over cells with delta > 0 (row -> column steps land on
// delta < 0). Picks the first eligible unvisited symbol; once none is left the
// walk closes on a visited one, preferring the starting row or column.
LoopMove find_loop(const std::vector<std::int64_t>& delta, int xs, int ys) {
    auto d = [&](Symbol x, Symbol y) { return delta[idx(x) * idx(ys) + idx(y)]; };
    Symbol a0 = -1, b0 = -1;
    for (Symbol x = 0; x < xs && a0 < 0; ++x)
        for (Symbol y = 0; y < ys; ++y)
            if (d(x, y) > 0) {
                a0 = x;
                b0 = y;
                break;
            }
    std::vector<Symbol> as{a0}, bs{b0};
    std::map<Symbol, std::size_t> row_pos{{a0, 0}}, col_pos{{b0, 0}};

    while (true) {
        // Column step from the newest row.
        const Symbol a = as.back();
        Symbol next_b = -1;
        std::optional<std::size_t> close_col;
        for (Symbol y = 0; y < ys; ++y) {
            if (d(a, y) >= 0) continue;
            if (!col_pos.count(y)) {
                next_b = y;
                break;
            }
            if (!close_col || col_pos[y] == 0) close_col = col_pos[y];
        }
        if (next_b < 0) {
            if (!close_col) throw std::logic_error("row without a negative entry");
            // Rows a_j..a_k with columns b_j..b_k.
            const std::size_t j = *close_col, k = as.size() - 1;
            LoopMove move;
            for (std::size_t t = j; t <= k; ++t) {
                move.cells.emplace_back(as[t], bs[t]);
                move.cells.emplace_back(as[t], t < k ? bs[t + 1] : bs[j]);
            }
            return move;
        }
        col_pos[next_b] = bs.size();
        bs.push_back(next_b);

        // Row step from the newest column.
        const Symbol b = bs.back();
        Symbol next_a = -1;
        std::optional<std::size_t> close_row;
        for (Symbol x = 0; x < xs; ++x) {
            if (d(x, b) <= 0) continue;
            if (!row_pos.count(x)) {
                next_a = x;
                break;
            }
            if (!close_row || row_pos[x] == 0) close_row = row_pos[x];
        }
        if (next_a < 0) {
            if (!close_row) throw std::logic_error("column without a positive entry");
            // Rows a_j..a_{k-1} with columns b_{j+1}..b_k, entered at (a_j, b_k).
            const std::size_t j = *close_row, k = bs.size() - 1;
            LoopMove move;
            move.closed_on_row = true;
            move.cells.emplace_back(as[j], bs[k]);
            move.cells.emplace_back(as[j], bs[j + 1]);
            for (std::size_t t = j + 1; t < k; ++t) {
                move.cells.emplace_back(as[t], bs[t]);
                move.cells.emplace_back(as[t], bs[t + 1]);
            }
            return move;
        }
        row_pos[next_a] = as.size();
        as.push_back(next_a);
    }
}

} // namespace

std::vector<LoopMove> loop_cancellation_transport(const JointType& p1, const JointType& p2) {
    if (p1.x_size() != p2.x_size() || p1.y_size() != p2.y_size()) {
        throw std::invalid_argument("joint types over different alphabets");
    }
    if (p1.marginal_x() != p2.marginal_x() || p1.marginal_y() != p2.marginal_y()) {
        throw std::invalid_argument("marginal mismatch between joint types");
    }
    std::vector<LoopMove> moves;
    JointType current = p1;
    while (current != p2) {
        std::vector<std::int64_t> delta(current.counts().size());
        for (std::size_t k = 0; k < delta.size(); ++k) delta[k] = current.counts()[k] - p2.counts()[k];
        auto move = find_loop(delta, p1.x_size(), p1.y_size());
        apply_move(current, move);
        moves.push_back(std::move(move));
    }
    return moves;
}

TypeVector decode_type_from_quantization(const Hypergraph& edges, const TypeVector& qw,
                                         const ConditionalTypes& qx_given_w, const ConditionalTypes& qy_given_w,
                                         const FunctionTable& f) {
    if (qw.alphabet_size() != edges.size() || qx_given_w.rows.size() != edges.size() ||
        qy_given_w.rows.size() != edges.size()) {
        throw std::invalid_argument("quantization types must be indexed by the hyperedges");
    }
    std::vector<Symbol> all_y(idx(f.y_size()));
    std::iota(all_y.begin(), all_y.end(), 0);
    std::vector<std::int64_t> total(idx(f.v_size()), 0);
    for (std::size_t w = 0; w < edges.size(); ++w) {
        if (qw[w] == 0) continue;
        const auto& qx = qx_given_w.rows[w];
        const auto& qy = qy_given_w.rows[w];
        if (qx.n() != qw[w] || qy.n() != qw[w]) {
            throw std::invalid_argument("conditional types disagree with the hyperedge counts");
        }
        const auto sol = type_from_marginals(edges.edges()[w], all_y, f, qx, qy);
        if (sol.kind == MarginalSolution::Kind::ambiguous) {
            throw AmbiguityError("hyperedge " + std::to_string(w) + " does not determine the f-type", *sol.witness);
        }
        if (sol.kind == MarginalSolution::Kind::infeasible) {
            throw InfeasibleError("no joint type matches the conditional types of hyperedge " + std::to_string(w));
        }
        for (std::size_t v = 0; v < total.size(); ++v) total[v] += (*sol.f_type)[v];
    }
    return TypeVector(std::move(total));
}

} // namespace fct
