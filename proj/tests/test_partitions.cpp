#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "fct/partitions.hpp"
#include "fct/verify.hpp"

using namespace fct;

namespace {

using Blocks = std::vector<std::vector<Symbol>>;

FunctionTable random_table(std::mt19937_64& rng, int xs, int ys, int vs) {
    std::vector<std::optional<Symbol>> e;
    for (int k = 0; k < xs * ys; ++k) e.emplace_back(static_cast<Symbol>(rng() % static_cast<unsigned>(vs)));
    std::vector<std::string> labels;
    for (int v = 0; v < vs; ++v) labels.push_back(std::to_string(v));
    return FunctionTable(xs, ys, labels, e);
}

} // namespace

TEST_CASE("induced partitions of the Table I function") {
    const auto f = fixtures::table1();
    CHECK(induced_partition_symbolwise(f).blocks() == Blocks{{0}, {1, 2}, {3}, {4}});
    CHECK(induced_partition(FunctionFamily(FamilyMode::symbolwise, f)).blocks() == Blocks{{0}, {1, 2}, {3}, {4}});
    CHECK(induced_partition(FunctionFamily(FamilyMode::type, f)).blocks() == Blocks{{0, 4}, {1, 2}, {3}});
    CHECK(induced_partition(FunctionFamily(FamilyMode::modsum, f)).blocks() == Blocks{{0, 4}, {1, 2, 3}});
}

TEST_CASE("symbol-wise partition edge cases") {
    CHECK(induced_partition_symbolwise(fixtures::corpus("constant_full").function) == Partition::trivial(2));
    CHECK(induced_partition_symbolwise(fixtures::corpus("example6_marginal_type").function) ==
          Partition::singletons(3));
    CHECK_THROWS_AS(induced_partition_symbolwise(fixtures::card()), ValidationError);
    CHECK_THROWS_AS(induced_partition(FunctionFamily::ring_xor()), ValidationError);
}

TEST_CASE("hat type function") {
    const auto id = fixtures::corpus("example5_joint_type").function;
    const auto hid = hat_type_function(id);
    for (Symbol x = 0; x < 3; ++x)
        for (Symbol y = 0; y < 2; ++y) CHECK(hid(x, y) == id(x, y));
    const auto marg = hat_type_function(fixtures::corpus("example6_marginal_type").function);
    for (Symbol x = 0; x < 3; ++x)
        for (Symbol y = 0; y < 2; ++y) CHECK(marg(x, y) == 3);
    const auto f = fixtures::table1();
    const auto h = hat_type_function(f);
    CHECK(h.v_size() == 8);
    CHECK(h.v_labels().back() == "7");
    for (Symbol y = 0; y < 3; ++y) {
        CHECK(h(0, y) == 7);
        CHECK(h(4, y) == 7);
        for (Symbol x = 1; x <= 3; ++x) CHECK(h(x, y) == f(x, y));
    }
    // A fresh label that collides with an existing one is made unique.
    const FunctionTable odd(1, 2, {"1", "0"}, {0, 0});
    const auto ho = hat_type_function(odd);
    CHECK(ho.v_labels().size() == 3);
    CHECK(ho.v_labels()[2] != "1");
}

TEST_CASE("hat modulo-sum function") {
    const auto xr = hat_modsum_function(fixtures::binary({0, 1, 1, 0}));
    const auto conj = hat_modsum_function(fixtures::binary({0, 0, 0, 1}));
    for (Symbol x = 0; x < 2; ++x) {
        for (Symbol y = 0; y < 2; ++y) {
            CHECK(xr(x, y) == 1);
            CHECK(conj(x, y) == x);
        }
    }
    CHECK(induced_partition_symbolwise(hat_modsum_function(fixtures::table1())).blocks() ==
          Blocks{{0, 4}, {1, 2, 3}});
    CHECK_THROWS_AS(FunctionFamily(FamilyMode::modsum, fixtures::corpus("example5_joint_type").function),
                    ValidationError);
}

TEST_CASE("informativeness of the induced partition on Table I") {
    const auto f = fixtures::table1();
    const FunctionFamily fam(FamilyMode::symbolwise, f);
    const auto r = check_informative(fam, induced_partition(fam), 2);
    CHECK(r.condition1);
    CHECK(r.condition2);
    CHECK_FALSE(r.condition1_witness);
}

TEST_CASE("ring xor family at n = 3") {
    const auto fam = FunctionFamily::ring_xor();
    const auto singles = Partition::singletons(2);
    const auto trivial = Partition::trivial(2);
    const auto a = check_informative(fam, singles, 3);
    CHECK_FALSE(a.condition1);
    REQUIRE(a.condition1_witness);
    CHECK(replay_condition1(fam, singles, *a.condition1_witness));
    // Complementing x leaves every substitution list unchanged.
    for (Symbol b = 0; b < 2; ++b) {
        CHECK(evaluate_family(fam, {0, 1, 1}, {b, 0, 1}) == evaluate_family(fam, {1, 0, 0}, {b, 0, 1}));
    }
    const auto b = check_informative(fam, trivial, 3);
    CHECK(b.condition1);
    CHECK_FALSE(b.condition2);
    REQUIRE(b.condition2_witness);
    CHECK(replay_condition2(fam, trivial, *b.condition2_witness));
    CHECK(finest_condition1_partition(fam, 3) == trivial);
}

TEST_CASE("finest condition-1 partitions") {
    const FunctionFamily inner(FamilyMode::modsum, fixtures::binary({0, 0, 0, 1}));
    CHECK(finest_condition1_partition(inner, 2) == Partition::singletons(2));
    const FunctionFamily constant(FamilyMode::symbolwise, fixtures::corpus("constant_full").function);
    CHECK(finest_condition1_partition(constant, 2) == Partition::trivial(2));
}

TEST_CASE("budget guard") {
    const FunctionFamily fam(FamilyMode::symbolwise, fixtures::table1());
    CHECK(exhaustive_budget(fam, 5) == 759375);
    CHECK_THROWS_AS(exhaustive_budget(fam, 6), BudgetError);
    CHECK_THROWS_AS(check_informative(fam, Partition::singletons(5), 7), BudgetError);
}

TEST_CASE("induced partitions are informative and finest on random tables") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int t = 0; t < 40; ++t) {
        const int xs = 2 + static_cast<int>(rng() % 2), ys = 1 + static_cast<int>(rng() % 3);
        const int vs = 1 + static_cast<int>(rng() % 3);
        const auto f = random_table(rng, xs, ys, vs);
        for (const auto mode : {FamilyMode::symbolwise, FamilyMode::type, FamilyMode::modsum}) {
            if (mode == FamilyMode::modsum && !f.numeric_codomain()) continue;
            const FunctionFamily fam(mode, f);
            const auto part = induced_partition(fam);
            for (int n = 1; n <= 4; ++n) {
                if (xs * ys > 6 && n == 4) continue;
                CAPTURE(t);
                CAPTURE(n);
                const auto r = check_informative(fam, part, n);
                CHECK(r.condition1);
                CHECK(r.condition2);
                const auto finest = finest_condition1_partition(fam, n);
                CHECK(finest.refines(part));
                if (n >= 2) CHECK(finest == part);
                ++checked;
            }
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("transposition check agrees with full permutations") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 25; ++t) {
        const auto f = random_table(rng, 2 + static_cast<int>(rng() % 2), 2, 2);
        for (const auto mode : {FamilyMode::symbolwise, FamilyMode::type, FamilyMode::modsum}) {
            const FunctionFamily fam(mode, f);
            for (const auto& part : {Partition::trivial(f.x_size()), Partition::singletons(f.x_size()),
                                     induced_partition(fam)}) {
                for (int n = 1; n <= 4; ++n) {
                    CHECK(check_informative(fam, part, n).condition2 == condition2_full_permutation(fam, part, n));
                }
            }
        }
    }
    const auto ring = FunctionFamily::ring_xor();
    for (int n = 1; n <= 4; ++n) {
        CHECK(check_informative(ring, Partition::trivial(2), n).condition2 ==
              condition2_full_permutation(ring, Partition::trivial(2), n));
    }
}

TEST_CASE("symbol-wise partition ignores codomain labels") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
        const auto f = random_table(rng, 4, 3, 3);
        std::vector<Symbol> perm{2, 0, 1};
        std::vector<std::optional<Symbol>> e;
        for (Symbol x = 0; x < 4; ++x)
            for (Symbol y = 0; y < 3; ++y) e.emplace_back(perm[static_cast<std::size_t>(f(x, y))]);
        const FunctionTable g(4, 3, {"c", "a", "b"}, e);
        CHECK(induced_partition_symbolwise(f) == induced_partition_symbolwise(g));
    }
}
