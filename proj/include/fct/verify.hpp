#ifndef FCT_VERIFY_HPP
#define FCT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fct/entropy.hpp"
#include "fct/model.hpp"
#include "fct/partitions.hpp"

namespace fct {

struct SweepResult {
    std::string name;
    std::uint64_t cases = 0;
    std::uint64_t violations = 0;
    bool passed = true;
    std::string detail;
};

struct VerifyOptions {
    int lemma1_max_n = 4;
    int condition2_max_n = 4;
    int lemma2_max_n = 6;
    int lemma3_max_n = 6;
    int lemma3_samples = 10000;
    std::uint64_t seed = 0;
    double grid_step = 0.01;
    double grid_tolerance = 5e-3;
    SolverOptions solver;
};

/// Condition (2) checked over every block-preserving permutation of positions.
bool condition2_full_permutation(const FunctionFamily& family, const Partition& part, int n);

/// Every consistent list at every position of every (x, y) in S^n contains x_i
/// in its compatible hyperedge. Instances with |X| or |Y| above 3 are skipped.
SweepResult sweep_lemma1(const std::vector<Instance>& corpus, int max_n);

/// Every solvable A x B with |A||B| <= 36, every n <= max_n and every pair of
/// marginal types with supports exactly A and B yields a unique f-type.
SweepResult sweep_lemma2(const std::vector<Instance>& corpus, int max_n);

/// Searches n <= max_n for marginals on A x B that admit two f-types; passes
/// when at least one is found and each witness is carried onto the other by
/// loop moves that preserve the marginals.
SweepResult sweep_lemma2_ambiguity(const FunctionTable& f, const std::vector<Symbol>& rows,
                                   const std::vector<Symbol>& cols, int max_n);

/// Random lists (half built from consistent lists, half uniform) have a
/// solvable compatible hyperedge covered by a maximal solvable edge.
SweepResult sweep_lemma3(const std::vector<Instance>& corpus, int max_n, int samples, std::uint64_t seed);

/// Transposition check agrees with the full-permutation oracle for the
/// induced, trivial and singleton partitions of each family in the corpus.
SweepResult sweep_condition2(const std::vector<Instance>& corpus, int max_n);

/// Solver against the grid oracle on the four hypergraph-entropy examples.
SweepResult sweep_solver_vs_grid(double step, double tolerance, const SolverOptions& solver);

std::vector<SweepResult> run_verification(const std::vector<Instance>& corpus, const VerifyOptions& options);

// All *.json instances in a directory, sorted by file name.
std::vector<Instance> load_corpus(const std::string& directory);

// Family for an instance, with ring_xor mapped to the fixed binary family.
FunctionFamily family_for(const Instance& instance, FamilyMode mode);

} // namespace fct

#endif // FCT_VERIFY_HPP
