#include "fct/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "fct/solvability.hpp"

namespace fct {

namespace {

constexpr int kGridMaxVertices = 3;
constexpr std::size_t kGridMaxEdges = 3;
constexpr double kGridMaxPoints = 5e7;

std::size_t idx(Symbol s) { return static_cast<std::size_t>(s); }

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double entropy_of(const std::vector<double>& row) {
    double h = 0.0;
    for (const double p : row) h -= plogp(p);
    return h;
}

// Joint distribution as doubles, with columns of zero mass removed.
struct Source {
    int xs = 0;
    int ys = 0;
    std::vector<double> p;  // row-major xs x ys
    std::vector<double> px, py;

    double operator()(int x, int y) const { return p[idx(x * ys + y)]; }
};

Source to_source(const JointDistribution& d) {
    const auto my = d.marginal_y();
    std::vector<Symbol> kept;
    for (Symbol y = 0; y < d.y_size(); ++y)
        if (my[idx(y)] > 0) kept.push_back(y);
    Source s;
    s.xs = d.x_size();
    s.ys = static_cast<int>(kept.size());
    s.px.assign(idx(s.xs), 0.0);
    s.py.assign(kept.size(), 0.0);
    for (Symbol x = 0; x < s.xs; ++x) {
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const double v = to_double(d(x, kept[k]));
            s.p.push_back(v);
            s.px[idx(x)] += v;
            s.py[k] += v;
        }
    }
    return s;
}

// I(W;X|Y) = H(W|Y) - H(W|X) under W - X - Y.
double objective(const Source& s, const std::vector<std::vector<double>>& rows, std::size_t edge_count) {
    double h_w_given_x = 0.0;
    for (int x = 0; x < s.xs; ++x) h_w_given_x += s.px[idx(x)] * entropy_of(rows[idx(x)]);
    double h_w_given_y = 0.0;
    std::vector<double> r(edge_count);
    for (int y = 0; y < s.ys; ++y) {
        std::fill(r.begin(), r.end(), 0.0);
        for (int x = 0; x < s.xs; ++x) {
            const double pxy = s(x, y);
            if (pxy == 0.0) continue;
            for (std::size_t w = 0; w < edge_count; ++w) r[w] += pxy * rows[idx(x)][w];
        }
        for (const double v : r)
            if (v > 0.0) h_w_given_y -= v * std::log2(v / s.py[idx(y)]);
    }
    return h_w_given_y - h_w_given_x;
}

struct Run {
    std::vector<std::vector<double>> rows;
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

Run alternating_minimization(const Source& s, const std::vector<std::vector<bool>>& member,
                             std::vector<std::vector<double>> rows, const SolverOptions& opt) {
    const std::size_t ne = member.front().size();
    Run run;
    double value = objective(s, rows, ne);
    std::vector<double> q(idx(s.ys) * ne);
    std::vector<double> logw(ne);
    run.residual = std::numeric_limits<double>::infinity();
    while (run.iterations < opt.max_iterations) {
        // Decoder-side marginal Q(w|y).
        std::fill(q.begin(), q.end(), 0.0);
        for (int y = 0; y < s.ys; ++y) {
            for (int x = 0; x < s.xs; ++x) {
                const double pxy = s(x, y);
                if (pxy == 0.0) continue;
                for (std::size_t w = 0; w < ne; ++w) q[idx(y) * ne + w] += pxy * rows[idx(x)][w] / s.py[idx(y)];
            }
        }
        // P(w|x) proportional to exp2(sum_y P(y|x) log2 Q(w|y)) on w containing x.
        for (int x = 0; x < s.xs; ++x) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t w = 0; w < ne; ++w) {
                logw[w] = -std::numeric_limits<double>::infinity();
                if (!member[idx(x)][w] || rows[idx(x)][w] == 0.0) continue;
                double acc = 0.0;
                for (int y = 0; y < s.ys; ++y) {
                    const double pxy = s(x, y);
                    if (pxy > 0.0) acc += pxy / s.px[idx(x)] * std::log2(q[idx(y) * ne + w]);
                }
                logw[w] = acc;
                best = std::max(best, acc);
            }
            double total = 0.0;
            for (std::size_t w = 0; w < ne; ++w) {
                rows[idx(x)][w] = std::isinf(logw[w]) ? 0.0 : std::exp2(logw[w] - best);
                total += rows[idx(x)][w];
            }
            for (auto& v : rows[idx(x)]) v /= total;
        }
        ++run.iterations;
        const double next = objective(s, rows, ne);
        run.residual = value - next;
        value = std::min(value, next);
        if (run.residual < opt.tol) {
            run.converged = true;
            break;
        }
    }
    run.rows = std::move(rows);
    run.value = std::max(0.0, value);
    run.residual = std::max(0.0, run.residual);
    return run;
}

EntropyResult solve(const Source& s, const Hypergraph& input, const SolverOptions& opt) {
    const auto uncovered = input.uncovered();
    if (!uncovered.empty()) throw ValidationError("uncovered vertex " + std::to_string(uncovered.front()));
    const Hypergraph maximal = input.maximal_edges();
    const auto& edges = maximal.edges();
    std::vector<std::vector<bool>> member(idx(s.xs), std::vector<bool>(edges.size(), false));
    for (std::size_t w = 0; w < edges.size(); ++w)
        for (const Symbol x : edges[w]) member[idx(x)][w] = true;

    auto start = [&](std::mt19937_64* rng) {
        std::vector<std::vector<double>> rows(idx(s.xs), std::vector<double>(edges.size(), 0.0));
        std::uniform_real_distribution<double> unit(0.05, 1.0);
        for (int x = 0; x < s.xs; ++x) {
            double total = 0.0;
            for (std::size_t w = 0; w < edges.size(); ++w) {
                if (!member[idx(x)][w]) continue;
                rows[idx(x)][w] = rng ? unit(*rng) : 1.0;
                total += rows[idx(x)][w];
            }
            for (auto& v : rows[idx(x)]) v /= total;
        }
        return rows;
    };

    std::optional<Run> best;
    for (int k = 0; k <= opt.restarts; ++k) {
        Run run;
        if (k == 0) {
            run = alternating_minimization(s, member, start(nullptr), opt);
        } else {
            std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(k)};
            std::mt19937_64 rng(seq);
            run = alternating_minimization(s, member, start(&rng), opt);
        }
        if (!run.converged) continue;
        if (!best || run.value < best->value) best = std::move(run);
    }
    if (!best) {
        throw ConvergenceError("no start reached an objective decrement below " + std::to_string(opt.tol) +
                               " within " + std::to_string(opt.max_iterations) + " iterations");
    }
    return EntropyResult{best->value, edges, TestChannel{best->rows}, best->iterations, best->residual};
}

void require_grid_budget(const JointDistribution& d, const Hypergraph& edges) {
    if (d.x_size() > kGridMaxVertices || edges.size() > kGridMaxEdges) {
        throw BudgetError("grid search limited to |X| <= 3 and |E| <= 3");
    }
}

int grid_resolution(double step) {
    const double k = std::round(1.0 / step);
    if (step <= 0.0 || std::abs(k * step - 1.0) > 1e-9) throw std::invalid_argument("grid step must be 1/K");
    return static_cast<int>(k);
}

// Every vector of `parts` nonnegative multiples of 1/k summing to 1.
std::vector<std::vector<double>> compositions(std::size_t parts, int k) {
    std::vector<std::vector<double>> out;
    std::vector<int> c(parts, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == parts) {
            c[i] = left;
            std::vector<double> v(parts);
            for (std::size_t j = 0; j < parts; ++j) v[j] = static_cast<double>(c[j]) / k;
            out.push_back(std::move(v));
            return;
        }
        for (int a = 0; a <= left; ++a) {
            c[i] = a;
            rec(i + 1, left - a);
        }
    };
    rec(0, k);
    return out;
}

// Minimum of the objective over the product of per-row candidate sets.
double grid_minimum(const Source& s, const std::vector<std::vector<std::vector<double>>>& candidates,
                     std::size_t edge_count, const std::function<bool(const std::vector<std::vector<double>>&)>& ok) {
    double points = 1.0;
    for (const auto& c : candidates) points *= static_cast<double>(c.size());
    if (points > kGridMaxPoints) throw BudgetError("grid has more than 5e7 points; use a coarser step");
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> rows(candidates.size());
    std::function<void(std::size_t)> rec = [&](std::size_t x) {
        if (x == candidates.size()) {
            if (ok(rows)) best = std::min(best, objective(s, rows, edge_count));
            return;
        }
        for (const auto& row : candidates[x]) {
            rows[x] = row;
            rec(x + 1);
        }
    };
    rec(0);
    return std::max(0.0, best);
}

} // namespace

double conditional_entropy(const JointDistribution& d) {
    const auto my = d.marginal_y();
    double h = 0.0;
    for (Symbol x = 0; x < d.x_size(); ++x) {
        for (Symbol y = 0; y < d.y_size(); ++y) {
            const double p = to_double(d(x, y));
            if (p > 0.0) h -= p * std::log2(p / to_double(my[idx(y)]));
        }
    }
    return h;
}

EntropyResult hypergraph_entropy(const std::vector<Rational>& px, const Hypergraph& edges, const SolverOptions& options) {
    if (static_cast<int>(px.size()) != edges.x_size()) throw ValidationError("distribution is not over X");
    return conditional_hypergraph_entropy(JointDistribution(edges.x_size(), 1, px), edges, options);
}

EntropyResult conditional_hypergraph_entropy(const JointDistribution& d, const Hypergraph& edges,
                                             const SolverOptions& options) {
    if (d.x_size() != edges.x_size()) throw ValidationError("hypergraph and distribution disagree on |X|");
    return solve(to_source(d), edges, options);
}

double conditional_mutual_information(const JointDistribution& d, const TestChannel& channel) {
    const auto my = d.marginal_y();
    const std::size_t ne = channel.rows.empty() ? 0 : channel.rows.front().size();
    double total = 0.0;
    for (Symbol y = 0; y < d.y_size(); ++y) {
        const double py = to_double(my[idx(y)]);
        if (py == 0.0) continue;
        std::vector<double> q(ne, 0.0);
        for (Symbol x = 0; x < d.x_size(); ++x)
            for (std::size_t w = 0; w < ne; ++w) q[w] += to_double(d(x, y)) / py * channel.rows[idx(x)][w];
        for (Symbol x = 0; x < d.x_size(); ++x) {
            const double pxy = to_double(d(x, y));
            for (std::size_t w = 0; w < ne; ++w) {
                const double pw = channel.rows[idx(x)][w];
                if (pxy > 0.0 && pw > 0.0) total += pxy * pw * std::log2(pw / q[w]);
            }
        }
    }
    return total;
}

double relaxed_hypergraph_entropy(const JointDistribution& d, const Hypergraph& edges, double gamma,
                                  double grid_step) {
    require_grid_budget(d, edges);
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in [0, 1]");
    const Source s = to_source(d);
    const int k = grid_resolution(grid_step);
    const auto all = compositions(edges.size(), k);
    std::vector<std::vector<std::vector<double>>> candidates(idx(s.xs), all);
    // Pr(X in W) for a grid channel; compared with a small slack for rounding.
    auto hit = [&](const std::vector<std::vector<double>>& rows) {
        double mass = 0.0;
        for (int x = 0; x < s.xs; ++x)
            for (std::size_t w = 0; w < edges.size(); ++w)
                if (edges.contains(w, x)) mass += s.px[idx(x)] * rows[idx(x)][w];
        return mass >= 1.0 - gamma - 1e-9;
    };
    return grid_minimum(s, candidates, edges.size(), hit);
}

double grid_oracle_conditional(const JointDistribution& d, const Hypergraph& edges, double grid_step) {
    require_grid_budget(d, edges);
    const auto uncovered = edges.uncovered();
    if (!uncovered.empty()) throw ValidationError("uncovered vertex " + std::to_string(uncovered.front()));
    const Source s = to_source(d);
    const int k = grid_resolution(grid_step);
    std::vector<std::vector<std::vector<double>>> candidates(idx(s.xs));
    for (int x = 0; x < s.xs; ++x) {
        std::vector<std::size_t> containing;
        for (std::size_t w = 0; w < edges.size(); ++w)
            if (edges.contains(w, x)) containing.push_back(w);
        for (const auto& c : compositions(containing.size(), k)) {
            std::vector<double> row(edges.size(), 0.0);
            for (std::size_t j = 0; j < containing.size(); ++j) row[containing[j]] = c[j];
            candidates[idx(x)].push_back(std::move(row));
        }
    }
    return grid_minimum(s, candidates, edges.size(), [](const auto&) { return true; });
}

RateReport optimal_rate_theorem1(const FunctionFamily& family, const JointDistribution& d) {
    if (family.mode == FamilyMode::ring_xor) throw ValidationError("ring_xor family has no rate formula");
    if (!validate_full_support(d)) {
        throw ValidationError("restricted support: use the hypergraph (theorem 2) pipeline");
    }
    if (d.x_size() != family.x_size() || d.y_size() != family.y_size()) {
        throw ValidationError("distribution and function disagree on alphabet sizes");
    }
    const Partition part = induced_partition(family);
    std::vector<Rational> collapsed(idx(part.block_count() * d.y_size()), Rational(0));
    for (Symbol x = 0; x < d.x_size(); ++x)
        for (Symbol y = 0; y < d.y_size(); ++y) collapsed[idx(part.block_of(x) * d.y_size() + y)] += d(x, y);
    const JointDistribution blocks(part.block_count(), d.y_size(), std::move(collapsed));
    RateReport r;
    r.theorem = 1;
    r.rate = conditional_entropy(blocks);
    r.partition = part;
    r.sw_rate = conditional_entropy(d);
    return r;
}

RateReport optimal_rate_theorem2(const FunctionTable& f, const JointDistribution& d, const SolverOptions& options) {
    if (d.x_size() != f.x_size() || d.y_size() != f.y_size()) {
        throw ValidationError("distribution and function disagree on alphabet sizes");
    }
    for (Symbol x = 0; x < f.x_size(); ++x)
        for (Symbol y = 0; y < f.y_size(); ++y)
            if (f.defined(x, y) != d.positive(x, y)) throw ValidationError("support of the distribution must equal S");
    RateReport r;
    r.theorem = 2;
    r.hypergraph = maximal_solvable_hyperedges(f);
    r.solver = conditional_hypergraph_entropy(d, *r.hypergraph, options);
    r.rate = r.solver->value;
    r.sw_rate = conditional_entropy(d);
    return r;
}

} // namespace fct
