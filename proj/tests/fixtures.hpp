#ifndef FCT_TEST_FIXTURES_HPP
#define FCT_TEST_FIXTURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "fct/model.hpp"

namespace fixtures {

inline const std::string corpus_dir = FCT_CORPUS_DIR;

inline fct::Instance corpus(const std::string& name) { return fct::load_instance(corpus_dir + "/" + name + ".json"); }

inline std::vector<std::optional<fct::Symbol>> cells(std::initializer_list<int> values) {
    std::vector<std::optional<fct::Symbol>> out;
    for (const int v : values) out.push_back(v < 0 ? std::nullopt : std::optional<fct::Symbol>(v));
    return out;
}

// Win indicator of the three-card game; -1 marks x = y.
inline fct::FunctionTable card() { return fct::FunctionTable(3, 3, {"0", "1"}, cells({-1, 1, 1, 0, -1, 1, 0, 0, -1})); }

inline fct::JointDistribution card_distribution() {
    std::vector<fct::Rational> p(9, fct::Rational(1, 6));
    p[0] = p[4] = p[8] = 0;
    return fct::JointDistribution(3, 3, p);
}

inline fct::FunctionTable table1() {
    return fct::FunctionTable(5, 3, {"0", "1", "2", "3", "4", "5", "6"},
                              cells({0, 0, 0, 1, 2, 3, 1, 2, 3, 4, 5, 6, 1, 1, 1}));
}

inline fct::FunctionTable binary(std::initializer_list<int> values) {
    return fct::FunctionTable(2, 2, {"0", "1"}, cells(values));
}

inline fct::JointDistribution uniform(int xs, int ys) {
    return fct::JointDistribution(xs, ys, std::vector<fct::Rational>(static_cast<std::size_t>(xs * ys),
                                                                     fct::Rational(1, xs * ys)));
}

inline const std::vector<std::string> corpus_names{
    "card_game",         "card_identity",          "constant_full",           "example11_ring_xor",
    "example12_balanced_loop", "example12_no_loop", "example13_two_loops",     "example5_joint_type",
    "example6_marginal_type",  "example7_xor",      "example8_and",            "table1"};

} // namespace fixtures

#endif // FCT_TEST_FIXTURES_HPP
