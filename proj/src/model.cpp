#include "fct/model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace fct {

namespace {

std::size_t cell(int y_size, Symbol x, Symbol y) {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(y_size) +
           static_cast<std::size_t>(y);
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    const auto den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
        throw ValidationError("malformed rational \"" + std::string(text) + "\"");
    }
    const boost::multiprecision::cpp_int p(std::string{num});
    const boost::multiprecision::cpp_int q(std::string{den});
    if (q == 0) {
        throw ValidationError("zero denominator in \"" + std::string(text) + "\"");
    }
    return Rational(p, q);
}

std::string format_rational(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

// FunctionTable ------------------------------------------------------------

FunctionTable::FunctionTable(int x_size, int y_size, std::vector<std::string> v_labels,
                             std::vector<std::optional<Symbol>> entries)
    : x_size_(x_size), y_size_(y_size), v_labels_(std::move(v_labels)), entries_(std::move(entries)) {
    if (x_size_ <= 0 || y_size_ <= 0) {
        throw ValidationError("alphabet sizes must be positive");
    }
    if (entries_.size() != static_cast<std::size_t>(x_size_) * static_cast<std::size_t>(y_size_)) {
        throw ValidationError("malformed grid dimensions: function table has " +
                              std::to_string(entries_.size()) + " cells, expected " +
                              std::to_string(x_size_ * y_size_));
    }
    if (v_labels_.empty()) {
        throw ValidationError("codomain must be nonempty");
    }
    {
        auto sorted = v_labels_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ValidationError("duplicate codomain label");
        }
    }
    for (const auto& e : entries_) {
        if (e && (*e < 0 || *e >= v_size())) {
            throw ValidationError("function value " + std::to_string(*e) + " does not index into v_labels");
        }
    }
    for (Symbol x = 0; x < x_size_; ++x) {
        bool any = false;
        for (Symbol y = 0; y < y_size_; ++y) any = any || defined(x, y);
        if (!any) throw ValidationError("empty row " + std::to_string(x) + " of the support");
    }
    for (Symbol y = 0; y < y_size_; ++y) {
        bool any = false;
        for (Symbol x = 0; x < x_size_; ++x) any = any || defined(x, y);
        if (!any) throw ValidationError("empty column " + std::to_string(y) + " of the support");
    }
}

const std::optional<Symbol>& FunctionTable::entry(Symbol x, Symbol y) const {
    if (x < 0 || x >= x_size_ || y < 0 || y >= y_size_) {
        throw std::out_of_range("cell (" + std::to_string(x) + "," + std::to_string(y) + ") out of range");
    }
    return entries_[cell(y_size_, x, y)];
}

Symbol FunctionTable::operator()(Symbol x, Symbol y) const {
    const auto& e = entry(x, y);
    if (!e) {
        throw ValidationError("f is undefined at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
    return *e;
}

bool FunctionTable::full_support() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.has_value(); });
}

bool FunctionTable::numeric_codomain() const {
    for (std::size_t v = 0; v < v_labels_.size(); ++v) {
        if (v_labels_[v] != std::to_string(v)) return false;
    }
    return true;
}

std::size_t FunctionTable::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.has_value(); }));
}

// JointDistribution --------------------------------------------------------

JointDistribution::JointDistribution(int x_size, int y_size, std::vector<Rational> probs)
    : x_size_(x_size), y_size_(y_size), probs_(std::move(probs)) {
    if (x_size_ <= 0 || y_size_ <= 0) {
        throw ValidationError("alphabet sizes must be positive");
    }
    if (probs_.size() != static_cast<std::size_t>(x_size_) * static_cast<std::size_t>(y_size_)) {
        throw ValidationError("malformed grid dimensions: distribution has " + std::to_string(probs_.size()) +
                              " cells, expected " + std::to_string(x_size_ * y_size_));
    }
    Rational total = 0;
    for (const auto& p : probs_) {
        if (p < 0) throw ValidationError("negative probability " + format_rational(p));
        total += p;
    }
    if (total != 1) {
        throw ValidationError("probabilities sum to " + format_rational(total) + ", not 1");
    }
    const auto px = marginal_x();
    for (Symbol x = 0; x < x_size_; ++x) {
        if (px[static_cast<std::size_t>(x)] == 0) {
            throw ValidationError("marginal P_X(" + std::to_string(x) + ") is zero");
        }
    }
    const auto py = marginal_y();
    for (Symbol y = 0; y < y_size_; ++y) {
        if (py[static_cast<std::size_t>(y)] == 0) {
            throw ValidationError("marginal P_Y(" + std::to_string(y) + ") is zero");
        }
    }
}

JointDistribution JointDistribution::uniform_on_support(const FunctionTable& f) {
    const Rational mass(1, static_cast<long long>(f.support_size()));
    std::vector<Rational> probs;
    probs.reserve(static_cast<std::size_t>(f.x_size() * f.y_size()));
    for (Symbol x = 0; x < f.x_size(); ++x) {
        for (Symbol y = 0; y < f.y_size(); ++y) {
            probs.push_back(f.defined(x, y) ? mass : Rational(0));
        }
    }
    return JointDistribution(f.x_size(), f.y_size(), std::move(probs));
}

const Rational& JointDistribution::operator()(Symbol x, Symbol y) const {
    if (x < 0 || x >= x_size_ || y < 0 || y >= y_size_) {
        throw std::out_of_range("distribution cell out of range");
    }
    return probs_[cell(y_size_, x, y)];
}

std::vector<Rational> JointDistribution::marginal_x() const {
    std::vector<Rational> m(static_cast<std::size_t>(x_size_));
    for (Symbol x = 0; x < x_size_; ++x)
        for (Symbol y = 0; y < y_size_; ++y) m[static_cast<std::size_t>(x)] += (*this)(x, y);
    return m;
}

std::vector<Rational> JointDistribution::marginal_y() const {
    std::vector<Rational> m(static_cast<std::size_t>(y_size_));
    for (Symbol x = 0; x < x_size_; ++x)
        for (Symbol y = 0; y < y_size_; ++y) m[static_cast<std::size_t>(y)] += (*this)(x, y);
    return m;
}

bool JointDistribution::full_support() const {
    return std::all_of(probs_.begin(), probs_.end(), [](const Rational& p) { return p > 0; });
}

bool validate_full_support(const JointDistribution& d) { return d.full_support(); }

void check_support_compatible(const FunctionTable& f, const JointDistribution& d) {
    if (f.x_size() != d.x_size() || f.y_size() != d.y_size()) {
        throw ValidationError("malformed grid dimensions: function and distribution disagree");
    }
    for (Symbol x = 0; x < f.x_size(); ++x) {
        for (Symbol y = 0; y < f.y_size(); ++y) {
            if (d.positive(x, y) && !f.defined(x, y)) {
                throw ValidationError("mass outside support at (" + std::to_string(x) + "," +
                                      std::to_string(y) + ")");
            }
        }
    }
}

// Partition ----------------------------------------------------------------

Partition::Partition(const std::vector<int>& labels) {
    if (labels.empty()) {
        throw ValidationError("partition of an empty alphabet");
    }
    std::map<int, int> renumber;
    block_of_.reserve(labels.size());
    for (const int label : labels) {
        auto [it, inserted] = renumber.try_emplace(label, static_cast<int>(renumber.size()));
        if (inserted) blocks_.emplace_back();
        block_of_.push_back(it->second);
        blocks_[static_cast<std::size_t>(it->second)].push_back(static_cast<Symbol>(block_of_.size() - 1));
    }
}

Partition Partition::singletons(int size) {
    std::vector<int> labels(static_cast<std::size_t>(size));
    std::iota(labels.begin(), labels.end(), 0);
    return Partition(labels);
}

Partition Partition::trivial(int size) { return Partition(std::vector<int>(static_cast<std::size_t>(size), 0)); }

bool Partition::refines(const Partition& coarser) const {
    if (coarser.size() != size()) return false;
    for (const auto& block : blocks_) {
        for (const Symbol x : block) {
            if (coarser.block_of(x) != coarser.block_of(block.front())) return false;
        }
    }
    return true;
}

// TypeVector ---------------------------------------------------------------

TypeVector::TypeVector(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
    for (const auto c : counts_) {
        if (c < 0) throw std::invalid_argument("negative count in type vector");
        n_ += c;
    }
}

Rational TypeVector::probability(std::size_t v) const {
    if (n_ == 0) throw std::domain_error("probability of an empty type");
    return Rational(static_cast<long long>(counts_.at(v)), static_cast<long long>(n_));
}

// Hypergraph ---------------------------------------------------------------

Hypergraph::Hypergraph(int x_size, std::vector<Edge> edges) : x_size_(x_size), edges_(std::move(edges)) {
    if (x_size_ <= 0) throw ValidationError("hypergraph needs a nonempty vertex set");
    for (auto& e : edges_) {
        if (e.empty()) throw ValidationError("empty hyperedge");
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
            throw ValidationError("repeated vertex inside a hyperedge");
        }
        if (e.front() < 0 || e.back() >= x_size_) throw ValidationError("hyperedge vertex out of range");
    }
    auto sorted = edges_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("duplicate hyperedge");
    }
}

bool Hypergraph::contains(std::size_t edge, Symbol x) const {
    const auto& e = edges_.at(edge);
    return std::binary_search(e.begin(), e.end(), x);
}

std::vector<Symbol> Hypergraph::uncovered() const {
    std::vector<bool> seen(static_cast<std::size_t>(x_size_), false);
    for (const auto& e : edges_)
        for (const Symbol x : e) seen[static_cast<std::size_t>(x)] = true;
    std::vector<Symbol> out;
    for (Symbol x = 0; x < x_size_; ++x)
        if (!seen[static_cast<std::size_t>(x)]) out.push_back(x);
    return out;
}

namespace {
bool strict_subset(const Hypergraph::Edge& a, const Hypergraph::Edge& b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}
} // namespace

bool Hypergraph::is_antichain() const {
    for (const auto& a : edges_)
        for (const auto& b : edges_)
            if (strict_subset(a, b)) return false;
    return true;
}

Hypergraph Hypergraph::maximal_edges() const {
    std::vector<Edge> kept;
    for (const auto& a : edges_) {
        const bool dominated =
            std::any_of(edges_.begin(), edges_.end(), [&](const Edge& b) { return strict_subset(a, b); });
        if (!dominated) kept.push_back(a);
    }
    return Hypergraph(x_size_, std::move(kept));
}

SequencePair::SequencePair(Sequence xs, Sequence ys) : x(std::move(xs)), y(std::move(ys)) {
    if (x.size() != y.size()) throw std::invalid_argument("sequence pair of unequal lengths");
}

// Family modes -------------------------------------------------------------

std::string to_string(FamilyMode mode) {
    switch (mode) {
    case FamilyMode::symbolwise: return "symbolwise";
    case FamilyMode::type: return "type";
    case FamilyMode::modsum: return "modsum";
    case FamilyMode::ring_xor: return "ring_xor";
    }
    return "unknown";
}

FamilyMode parse_family_mode(std::string_view text) {
    if (text == "symbolwise") return FamilyMode::symbolwise;
    if (text == "type") return FamilyMode::type;
    if (text == "modsum") return FamilyMode::modsum;
    if (text == "ring_xor") return FamilyMode::ring_xor;
    throw ValidationError("unknown function family mode \"" + std::string(text) + "\"");
}

// Instance documents -------------------------------------------------------

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ValidationError(std::string("missing key \"") + key + "\"");
    return doc.at(key);
}

int positive_int(const json& doc, const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ValidationError(std::string("\"") + key + "\" must be a positive integer");
    }
    return v.get<int>();
}

const json& grid(const json& doc, const char* key, int rows, int cols) {
    const auto& g = require(doc, key);
    if (!g.is_array() || static_cast<int>(g.size()) != rows) {
        throw ValidationError(std::string("malformed grid dimensions: \"") + key + "\" needs " +
                              std::to_string(rows) + " rows");
    }
    for (const auto& row : g) {
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            throw ValidationError(std::string("malformed grid dimensions: \"") + key + "\" rows need " +
                                  std::to_string(cols) + " cells");
        }
    }
    return g;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

} // namespace

Instance parse_instance(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("instance is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("instance document must be a JSON object");

    const int xs = positive_int(doc, "x_size");
    const int ys = positive_int(doc, "y_size");

    const auto& labels_json = require(doc, "v_labels");
    if (!labels_json.is_array()) throw ValidationError("\"v_labels\" must be an array of strings");
    std::vector<std::string> labels;
    for (const auto& l : labels_json) {
        if (!l.is_string()) throw ValidationError("\"v_labels\" must be an array of strings");
        labels.push_back(l.get<std::string>());
    }

    std::vector<std::optional<Symbol>> entries;
    for (const auto& row : grid(doc, "function", xs, ys)) {
        for (const auto& c : row) {
            if (c.is_null()) {
                entries.emplace_back();
            } else if (c.is_number_integer()) {
                entries.emplace_back(c.get<int>());
            } else {
                throw ValidationError("function cells must be integers or null");
            }
        }
    }
    FunctionTable f(xs, ys, std::move(labels), std::move(entries));

    std::vector<Rational> probs;
    for (const auto& row : grid(doc, "distribution", xs, ys)) {
        for (const auto& c : row) {
            if (c.is_string()) {
                probs.push_back(parse_rational(c.get<std::string>()));
            } else if (c.is_number_unsigned()) {
                probs.emplace_back(c.get<unsigned long long>());
            } else {
                throw ValidationError("distribution cells must be rational strings \"p/q\"");
            }
        }
    }
    // Support mismatch is the more specific diagnosis, so check it before the sum.
    for (int x = 0; x < xs; ++x) {
        for (int y = 0; y < ys; ++y) {
            if (probs[cell(ys, x, y)] > 0 && !f.defined(x, y)) {
                throw ValidationError("mass outside support at (" + std::to_string(x) + "," +
                                      std::to_string(y) + ")");
            }
        }
    }
    JointDistribution d(xs, ys, std::move(probs));

    InstanceOptions options;
    if (doc.contains("options")) {
        const auto& o = doc.at("options");
        if (!o.is_object()) throw ValidationError("\"options\" must be an object");
        if (o.contains("name")) options.name = o.at("name").get<std::string>();
        if (o.contains("mode")) options.mode = parse_family_mode(o.at("mode").get<std::string>());
    }
    return Instance{std::move(f), std::move(d), std::move(options)};
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open instance file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

std::string serialize_instance(const Instance& instance) {
    const auto& f = instance.function;
    const auto& d = instance.distribution;
    std::ostringstream out;
    out << "{\n";
    out << "  \"x_size\": " << f.x_size() << ",\n";
    out << "  \"y_size\": " << f.y_size() << ",\n";
    out << "  \"v_labels\": [";
    for (std::size_t v = 0; v < f.v_labels().size(); ++v) {
        out << (v ? ", " : "") << quoted(f.v_labels()[v]);
    }
    out << "],\n";
    out << "  \"function\": [\n";
    for (Symbol x = 0; x < f.x_size(); ++x) {
        out << "    [";
        for (Symbol y = 0; y < f.y_size(); ++y) {
            const auto& e = f.entry(x, y);
            out << (y ? ", " : "") << (e ? std::to_string(*e) : std::string("null"));
        }
        out << "]" << (x + 1 < f.x_size() ? "," : "") << "\n";
    }
    out << "  ],\n";
    out << "  \"distribution\": [\n";
    for (Symbol x = 0; x < d.x_size(); ++x) {
        out << "    [";
        for (Symbol y = 0; y < d.y_size(); ++y) {
            out << (y ? ", " : "") << quoted(format_rational(d(x, y)));
        }
        out << "]" << (x + 1 < d.x_size() ? "," : "") << "\n";
    }
    out << "  ]";
    const auto& o = instance.options;
    if (!o.name.empty() || o.mode) {
        out << ",\n  \"options\": {";
        bool first = true;
        if (!o.name.empty()) {
            out << "\"name\": " << quoted(o.name);
            first = false;
        }
        if (o.mode) out << (first ? "" : ", ") << "\"mode\": " << quoted(to_string(*o.mode));
        out << "}";
    }
    out << "\n}\n";
    return out.str();
}

std::string instance_digest(const Instance& instance) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : serialize_instance(instance)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fct
