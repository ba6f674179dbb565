#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "fct/typecalc.hpp"

using namespace fct;

namespace {

const SequencePair kCardPair({0, 1, 2, 1, 2, 0}, {1, 0, 0, 2, 1, 2});

// Independent enumeration: every count vector on the support cells with the
// requested marginals, by plain nested counting.
std::vector<JointType> brute_joint_types(const FunctionTable& f, const TypeVector& px, const TypeVector& py) {
    std::vector<std::pair<Symbol, Symbol>> support;
    for (Symbol x = 0; x < f.x_size(); ++x)
        for (Symbol y = 0; y < f.y_size(); ++y)
            if (f.defined(x, y)) support.emplace_back(x, y);
    std::vector<JointType> out;
    std::vector<std::int64_t> c(support.size(), 0);
    const auto n = px.n();
    while (true) {
        if (std::accumulate(c.begin(), c.end(), std::int64_t{0}) == n) {
            std::vector<std::int64_t> grid(static_cast<std::size_t>(f.x_size() * f.y_size()), 0);
            for (std::size_t k = 0; k < support.size(); ++k)
                grid[static_cast<std::size_t>(support[k].first * f.y_size() + support[k].second)] = c[k];
            JointType j(f.x_size(), f.y_size(), grid);
            if (j.marginal_x() == px && j.marginal_y() == py) out.push_back(j);
        }
        std::size_t k = 0;
        while (k < c.size() && ++c[k] > n) c[k++] = 0;
        if (k == c.size()) break;
    }
    return out;
}

} // namespace

TEST_CASE("symbol-wise evaluation") {
    CHECK(eval_symbolwise(fixtures::card(), kCardPair) == Sequence{1, 0, 0, 1, 0, 1});
    CHECK(eval_symbolwise(FunctionTable(1, 1, {"0"}, {0}), SequencePair({0}, {0})) == Sequence{0});
    const auto id = fixtures::corpus("example5_joint_type").function;
    CHECK(eval_symbolwise(id, SequencePair({2, 0, 1}, {1, 1, 0})) == Sequence{5, 1, 2});
    CHECK_THROWS_AS(eval_symbolwise(fixtures::card(), SequencePair({1}, {1})), ValidationError);
}

TEST_CASE("types") {
    CHECK(type_of({1, 0, 0, 1, 0, 1}, 2) == TypeVector({3, 3}));
    CHECK(type_of({0, 0, 0}, 1) == TypeVector({3}));
    CHECK_THROWS_AS(type_of({}, 2), std::invalid_argument);
    CHECK(type_function(fixtures::card(), kCardPair) == TypeVector({3, 3}));
    CHECK(type_function(FunctionTable(1, 1, {"0"}, {0}), SequencePair({0}, {0})) == TypeVector({1}));
    const auto t = all_types(3, 2);
    CHECK(t.size() == 4);
    CHECK(std::is_sorted(t.begin(), t.end()));
}

TEST_CASE("modulo sum") {
    const auto conj = fixtures::binary({0, 0, 0, 1});
    const auto xr = fixtures::binary({0, 1, 1, 0});
    CHECK(modsum_function(conj, SequencePair({1, 1, 0}, {1, 0, 1})) == 1);
    CHECK(modsum_function(xr, SequencePair({1, 0, 1}, {1, 0, 1})) == 0);
    const SequencePair p({1, 0}, {1, 1});
    CHECK(modsum_function(conj, p) == 1);
    // Inner product: x_1 = f(x, 0 y^(-1)) xor f(x, 1 y^(-1)).
    for (const Sequence& x : {Sequence{0, 0}, Sequence{0, 1}, Sequence{1, 0}, Sequence{1, 1}}) {
        for (const Sequence& y : {Sequence{0, 0}, Sequence{0, 1}, Sequence{1, 0}, Sequence{1, 1}}) {
            const auto a = modsum_function(conj, SequencePair(x, substitute(y, 0, 0)));
            const auto b = modsum_function(conj, SequencePair(x, substitute(y, 0, 1)));
            CHECK((a ^ b) == x[0]);
        }
    }
    CHECK_THROWS_AS(modsum_function(fixtures::card(), kCardPair), ValidationError);
}

TEST_CASE("substitution") {
    CHECK(substitute({0, 1, 2}, 1, 0) == Sequence{0, 0, 2});
    CHECK(substitute({0}, 0, 1) == Sequence{1});
    const Sequence s{2, 1, 0};
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(substitute(s, i, s[i]) == s);
    CHECK_THROWS_AS(substitute(s, 3, 0), std::out_of_range);
}

TEST_CASE("consistent lists") {
    const auto set = consistent_lists(fixtures::card(), kCardPair, 3);
    REQUIRE(set.pinned.size() == 3);
    CHECK(set.pinned[0] == TypeVector({4, 2}));
    CHECK_FALSE(set.pinned[1].has_value());
    CHECK(set.pinned[2] == TypeVector({3, 3}));
    CHECK(set.free == std::vector<Symbol>{1});
    std::size_t count = 0;
    set.for_each([&](const ListOfTypes& l) {
        ++count;
        CHECK(set.contains(l));
    });
    CHECK(count == 7);
    CHECK_FALSE(set.contains({TypeVector({3, 3}), TypeVector({3, 3}), TypeVector({3, 3})}));

    const auto full = fixtures::table1();
    const auto pinned = consistent_lists(full, SequencePair({0, 3}, {1, 2}), 1);
    CHECK(pinned.free.empty());
    count = 0;
    pinned.for_each([&](const ListOfTypes&) { ++count; });
    CHECK(count == 1);

    // Only (x_i, y_i) in S: every other entry is free.
    const FunctionTable diag(2, 3, {"0"}, fixtures::cells({0, -1, 0, -1, 0, 0}));
    CHECK(consistent_lists(diag, SequencePair({1}, {1}), 0).free.size() == 1);
    const FunctionTable lone(2, 2, {"0"}, fixtures::cells({0, -1, 0, 0}));
    CHECK(consistent_lists(lone, SequencePair({0}, {0}), 0).free.size() == 1);
}

TEST_CASE("representative reconstruction") {
    const Partition singles = Partition::singletons(3);
    CHECK(reconstruct_representative(singles, {2, 0, 1}, TypeVector({1, 1, 1})) == Sequence{2, 0, 1});
    const Partition p({0, 1, 1});
    const std::vector<int> blocks{0, 1, 1};
    const auto xhat = reconstruct_representative(p, blocks, TypeVector({1, 1, 1}));
    CHECK(xhat == Sequence{0, 1, 2});
    const auto pair = reconstruct_representative(Partition::trivial(2), {0, 0, 0}, TypeVector({2, 1}));
    CHECK(pair == Sequence{0, 0, 1});
    CHECK_THROWS_AS(reconstruct_representative(p, blocks, TypeVector({2, 1, 0})), std::invalid_argument);

    // Random property: blocks and marginal type are reproduced.
    std::mt19937_64 rng(11);
    const Partition q({0, 0, 1, 2, 1});
    for (int t = 0; t < 200; ++t) {
        Sequence x(1 + rng() % 7);
        for (auto& s : x) s = static_cast<Symbol>(rng() % 5);
        std::vector<int> b;
        for (const auto s : x) b.push_back(q.block_of(s));
        const auto y = reconstruct_representative(q, b, type_of(x, 5));
        std::vector<int> by;
        for (const auto s : y) by.push_back(q.block_of(s));
        CHECK(by == b);
        CHECK(type_of(y, 5) == type_of(x, 5));
    }
}

TEST_CASE("type from marginals, no loop") {
    const auto f = fixtures::corpus("example12_no_loop").function;
    for (int n = 2; n <= 6; ++n) {
        for (const auto& px : all_types(n, 2)) {
            for (const auto& py : all_types(n, 3)) {
                const auto sol = type_from_marginals({0, 1}, {0, 1, 2}, f, px, py);
                const auto brute = brute_joint_types(f, px, py);
                CHECK(sol.feasible_joint_types == brute.size());
                if (brute.empty()) {
                    CHECK(sol.kind == MarginalSolution::Kind::infeasible);
                    continue;
                }
                REQUIRE(sol.kind == MarginalSolution::Kind::unique);
                CHECK(brute.size() == 1);
                CHECK(brute.front()(0, 1) == py[1]);
                CHECK(brute.front()(1, 0) == py[0]);
                CHECK(brute.front()(0, 2) == px[0] - py[1]);
            }
        }
    }
}

TEST_CASE("type from marginals, balanced loop") {
    const auto f = fixtures::corpus("example12_balanced_loop").function;
    const TypeVector m({2, 2, 2});
    const auto sol = type_from_marginals({0, 1, 2}, {0, 1, 2}, f, m, m);
    REQUIRE(sol.kind == MarginalSolution::Kind::unique);
    const auto brute = brute_joint_types(f, m, m);
    CHECK(brute.size() == 3);
    CHECK(sol.feasible_joint_types == brute.size());
    std::set<TypeVector> f_types;
    for (const auto& j : brute) f_types.insert(j.f_type(f));
    CHECK(f_types.size() == 1);
    CHECK(*sol.f_type == TypeVector({0, 2, 2, 2}));
    CHECK(*f_types.begin() == *sol.f_type);
}

TEST_CASE("type from marginals, card triple is ambiguous") {
    const auto f = fixtures::card();
    const TypeVector m({2, 2, 2});
    const auto sol = type_from_marginals({0, 1, 2}, {0, 1, 2}, f, m, m);
    REQUIRE(sol.kind == MarginalSolution::Kind::ambiguous);
    REQUIRE(sol.witness);
    CHECK_FALSE(sol.witness->first.f_type(f) == sol.witness->second.f_type(f));
    std::set<std::int64_t> wins;
    for (const auto& j : brute_joint_types(f, m, m)) wins.insert(j.f_type(f)[1]);
    CHECK(wins == std::set<std::int64_t>{2, 3, 4});
    CHECK(sol.witness->first.marginal_x() == m);
    CHECK(sol.witness->second.marginal_y() == m);
}

TEST_CASE("type from marginals guards") {
    const auto f = fixtures::card();
    CHECK_THROWS_AS(type_from_marginals({0, 1, 2}, {0, 1, 2}, f, TypeVector({5, 4, 4}), TypeVector({5, 4, 4})),
                    BudgetError);
    CHECK(type_from_marginals({0, 1}, {0, 1, 2}, f, TypeVector({1, 1, 1}), TypeVector({1, 1, 1})).kind ==
          MarginalSolution::Kind::infeasible);
}

TEST_CASE("loop cancellation transport") {
    const auto bal = fixtures::corpus("example12_balanced_loop").function;
    // Joint types from the row/column equations with a = nP(0,0).
    auto from_a = [](std::int64_t a) {
        const std::int64_t nx0 = 2, nx1 = 2, ny0 = 2, ny1 = 2, ny2 = 2;
        return JointType(3, 3, {a, 0, nx0 - a, ny0 - a, nx1 - ny0 + a, 0, 0, ny1 - nx1 + ny0 - a, ny2 - nx0 + a});
    };
    const auto p0 = from_a(0), p1 = from_a(1), p2 = from_a(2);
    CHECK(loop_cancellation_transport(p1, p1).empty());
    const auto moves = loop_cancellation_transport(p1, p0);
    REQUIRE(moves.size() == 1);
    CHECK(moves.front().cells.size() == 6);
    auto q = p1;
    apply_move(q, moves.front());
    CHECK(q == p0);
    CHECK(loop_cancellation_transport(p2, p0).size() == 2);

    const auto card = fixtures::card();
    const TypeVector m({2, 2, 2});
    const auto amb = type_from_marginals({0, 1, 2}, {0, 1, 2}, card, m, m);
    REQUIRE(amb.witness);
    auto c = amb.witness->first;
    const auto cm = loop_cancellation_transport(c, amb.witness->second);
    for (const auto& mv : cm) {
        CHECK(mv.cells.size() == 6);
        apply_move(c, mv);
    }
    CHECK(c == amb.witness->second);
    CHECK_THROWS_AS(loop_cancellation_transport(p0, JointType(3, 3, {6, 0, 0, 0, 0, 0, 0, 0, 0})),
                    std::invalid_argument);
}

TEST_CASE("transport reaches the target through both closing branches") {
    std::mt19937_64 rng(5);
    bool closed_on_row = false, closed_on_col = false;
    for (int t = 0; t < 400; ++t) {
        const int xs = 2 + static_cast<int>(rng() % 3), ys = 2 + static_cast<int>(rng() % 3);
        const int n = 2 + static_cast<int>(rng() % 8);
        std::vector<std::int64_t> a(static_cast<std::size_t>(xs * ys), 0);
        for (int k = 0; k < n; ++k) ++a[rng() % a.size()];
        const JointType p(xs, ys, a);
        // A second joint type with the same marginals, by random 2x2 swaps.
        JointType q = p;
        for (int k = 0; k < 20; ++k) {
            const Symbol x1 = static_cast<Symbol>(rng() % xs), x2 = static_cast<Symbol>(rng() % xs);
            const Symbol y1 = static_cast<Symbol>(rng() % ys), y2 = static_cast<Symbol>(rng() % ys);
            if (x1 == x2 || y1 == y2 || q(x1, y1) == 0 || q(x2, y2) == 0) continue;
            --q.at(x1, y1), --q.at(x2, y2), ++q.at(x1, y2), ++q.at(x2, y1);
        }
        auto cur = p;
        for (const auto& mv : loop_cancellation_transport(p, q)) {
            (mv.closed_on_row ? closed_on_row : closed_on_col) = true;
            apply_move(cur, mv);
            CHECK(cur.marginal_x() == p.marginal_x());
            CHECK(cur.marginal_y() == p.marginal_y());
        }
        CHECK(cur == q);
    }
    CHECK(closed_on_row);
    CHECK(closed_on_col);
}

TEST_CASE("balanced moves keep the f-type") {
    const auto f = fixtures::corpus("example13_two_loops").function;
    std::mt19937_64 rng(9);
    std::vector<std::pair<Symbol, Symbol>> support;
    for (Symbol x = 0; x < 4; ++x)
        for (Symbol y = 0; y < 5; ++y)
            if (f.defined(x, y)) support.emplace_back(x, y);
    for (int t = 0; t < 200; ++t) {
        Sequence xs, ys;
        for (int k = 0; k < 6; ++k) {
            const auto& c = support[rng() % support.size()];
            xs.push_back(c.first);
            ys.push_back(c.second);
        }
        const auto j = JointType::of(SequencePair(xs, ys), 4, 5);
        std::vector<JointType> all;
        enumerate_joint_types({0, 1, 2, 3}, {0, 1, 2, 3, 4}, f, j.marginal_x(), j.marginal_y(),
                              [&](const JointType& k) {
                                  all.push_back(k);
                                  return true;
                              });
        for (const auto& k : all) {
            auto cur = j;
            for (const auto& mv : loop_cancellation_transport(j, k)) {
                apply_move(cur, mv);
                CHECK(cur.f_type(f) == j.f_type(f));
            }
        }
    }
}

TEST_CASE("type function is invariant under joint permutations") {
    const auto f = fixtures::card();
    Sequence x = kCardPair.x, y = kCardPair.y;
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        std::shuffle(order.begin(), order.end(), rng);
        Sequence px, py;
        for (const auto i : order) {
            px.push_back(x[i]);
            py.push_back(y[i]);
        }
        CHECK(type_function(f, SequencePair(px, py)) == type_function(f, kCardPair));
    }
}

TEST_CASE("type decoder") {
    const auto f = fixtures::card();
    // Single edge X with full weight reduces to type_from_marginals.
    const auto bal = fixtures::corpus("example12_balanced_loop").function;
    const Hypergraph whole(3, {{0, 1, 2}});
    const TypeVector m({2, 2, 2});
    CHECK(decode_type_from_quantization(whole, TypeVector({6}), {{m}}, {{m}}, bal) ==
          *type_from_marginals({0, 1, 2}, {0, 1, 2}, bal, m, m).f_type);

    // Hand-built quantization: w_i contains x_i.
    const Hypergraph pairs(3, {{0, 1}, {0, 2}, {1, 2}});
    const Sequence x = kCardPair.x, y = kCardPair.y;
    const std::vector<std::size_t> w{0, 2, 1, 0, 2, 1};
    std::vector<std::vector<std::int64_t>> cx(3, std::vector<std::int64_t>(3, 0)), cy = cx;
    std::vector<std::int64_t> cw(3, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        REQUIRE(pairs.contains(w[i], x[i]));
        ++cw[w[i]];
        ++cx[w[i]][static_cast<std::size_t>(x[i])];
        ++cy[w[i]][static_cast<std::size_t>(y[i])];
    }
    ConditionalTypes qx, qy;
    for (std::size_t e = 0; e < 3; ++e) {
        qx.rows.emplace_back(cx[e]);
        qy.rows.emplace_back(cy[e]);
    }
    CHECK(decode_type_from_quantization(pairs, TypeVector(cw), qx, qy, f) == type_function(f, kCardPair));

    // The unsolvable edge {0,1,2} with ambiguous marginals.
    CHECK_THROWS_AS(decode_type_from_quantization(whole, TypeVector({6}), {{m}}, {{m}}, f), AmbiguityError);
}
