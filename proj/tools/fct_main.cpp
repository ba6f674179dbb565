#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fct/commands.hpp"

#ifndef FCT_CORPUS_DIR
#define FCT_CORPUS_DIR "corpus"
#endif

namespace {

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const int n = std::stoi(item, &used);
        if (used != item.size() || n < 1) throw fct::ValidationError("bad blocklength \"" + item + "\" in --n");
        out.push_back(n);
    }
    if (out.empty()) throw fct::ValidationError("--n needs at least one blocklength");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal rates and verifiers for distributed function computation"};
    app.set_version_flag("--version", std::string(fct::kToolVersion));

    std::string command;
    std::string instance_path;
    std::string mode;
    std::string n_list = "2,3,4";
    std::string json_path;
    int max_n = -1;
    fct::CommandOptions options;
    options.corpus_dir = FCT_CORPUS_DIR;

    app.add_option("command", command, "partitions | informative | solvable | rate | verify | examples")
        ->required()
        ->check(CLI::IsMember({"partitions", "informative", "solvable", "rate", "verify", "examples"}));
    app.add_option("instance", instance_path, "instance file (JSON)");
    app.add_option("--mode", mode, "function family")
        ->check(CLI::IsMember({"symbolwise", "type", "modsum", "ring_xor"}));
    app.add_option("--n", n_list, "blocklengths for informative, comma separated");
    app.add_option("--tol", options.tol, "solver tolerance in bits")->check(CLI::PositiveNumber);
    app.add_option("--seed", options.seed, "seed for solver restarts and random sweeps");
    app.add_option("--json", json_path, "write the canonical JSON report here");
    app.add_option("--only", options.only, "single example target");
    app.add_option("--max-n", max_n, "blocklength cap for every verify sweep")->check(CLI::NonNegativeNumber);
    app.add_option("--corpus", options.corpus_dir, "instance corpus directory");

    CLI11_PARSE(app, argc, argv);

    fct::Report report;
    try {
        if (!mode.empty()) options.mode = fct::parse_family_mode(mode);
        options.n_list = parse_n_list(n_list);
        if (max_n >= 0) options.max_n = max_n;
        report = fct::run_command(command, instance_path, options);
    } catch (const std::exception& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return fct::exit_validation;
    }

    (report.exit_code == fct::exit_ok || report.exit_code == fct::exit_verification ? std::cout : std::cerr)
        << report.text;
    if (!json_path.empty()) {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << json_path << "\n";
            return fct::exit_validation;
        }
        out << report.canonical_json();
    }
    return report.exit_code;
}
