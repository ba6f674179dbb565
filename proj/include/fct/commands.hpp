#ifndef FCT_COMMANDS_HPP
#define FCT_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fct/model.hpp"

namespace fct {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_budget = 2, exit_verification = 3 };

struct Report {
    nlohmann::ordered_json json;
    std::string text;
    int exit_code = exit_ok;

    // Canonical form: two-space indent, key order fixed by construction.
    std::string canonical_json() const { return json.dump(2) + "\n"; }
};

struct CommandOptions {
    std::optional<FamilyMode> mode;
    std::vector<int> n_list{2, 3, 4};
    double tol = 1e-12;
    std::uint64_t seed = 0;
    std::optional<int> max_n;
    std::string corpus_dir;
    std::string only;
};

Report cmd_partitions(const Instance& instance, const CommandOptions& options);
Report cmd_informative(const Instance& instance, const CommandOptions& options);
Report cmd_solvable(const Instance& instance, const CommandOptions& options);
Report cmd_rate(const Instance& instance, const CommandOptions& options);
Report cmd_verify(const CommandOptions& options);
Report cmd_examples(const CommandOptions& options);

/// Dispatches by name and turns validation and budget errors into error
/// reports with the matching exit code. instance_path may be empty for
/// verify and examples.
Report run_command(const std::string& command, const std::string& instance_path, const CommandOptions& options);

} // namespace fct

#endif // FCT_COMMANDS_HPP
