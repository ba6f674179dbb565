#ifndef FCT_ENTROPY_HPP
#define FCT_ENTROPY_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fct/model.hpp"
#include "fct/partitions.hpp"

namespace fct {

// All entropies are in bits.

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    double tol = 1e-12;            // stop once one iteration lowers the objective by less than this
    int max_iterations = 100000;
    std::uint64_t seed = 0;
    int restarts = 8;              // random starts on top of the uniform one
};

struct EntropyResult {
    double value = 0.0;
    // Edges the channel is over (the maximal edges of the input family).
    std::vector<Hypergraph::Edge> edges;
    TestChannel channel;
    int iterations = 0;
    double residual = 0.0;
};

double conditional_entropy(const JointDistribution& d);

/// H_G(X) = min I(W;X) over channels with X in W.
EntropyResult hypergraph_entropy(const std::vector<Rational>& px, const Hypergraph& edges,
                                 const SolverOptions& options = {});

/// H_G(X|Y) = min I(W;X|Y) over channels P_{W|X} with X in W.
EntropyResult conditional_hypergraph_entropy(const JointDistribution& d, const Hypergraph& edges,
                                             const SolverOptions& options = {});

/// I(W;X|Y) of a channel whose rows range over `edges`.
double conditional_mutual_information(const JointDistribution& d, const TestChannel& channel);

/// min I(W;X|Y) subject to Pr(X in W) >= 1 - gamma, by grid search over all
/// channels whose entries are multiples of grid_step. Guard: |X| <= 3, |E| <= 3.
double relaxed_hypergraph_entropy(const JointDistribution& d, const Hypergraph& edges, double gamma,
                                  double grid_step);

/// Grid search over channels with X in W. Guard: |X| <= 3, |E| <= 3.
double grid_oracle_conditional(const JointDistribution& d, const Hypergraph& edges, double grid_step);

struct RateReport {
    int theorem = 0;
    double rate = 0.0;
    std::optional<Partition> partition;   // theorem 1
    std::optional<Hypergraph> hypergraph; // theorem 2
    std::optional<EntropyResult> solver;  // theorem 2
    double sw_rate = 0.0;
};

/// H([X]|Y) for the induced partition of the family; needs full support.
RateReport optimal_rate_theorem1(const FunctionFamily& family, const JointDistribution& d);

/// H_G(X|Y) with G = (X, E(S, f)); the support of d must equal S.
RateReport optimal_rate_theorem2(const FunctionTable& f, const JointDistribution& d,
                                 const SolverOptions& options = {});

} // namespace fct

#endif // FCT_ENTROPY_HPP
