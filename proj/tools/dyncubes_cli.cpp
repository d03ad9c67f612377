// Command-line front end: runs one experiment per invocation and writes
// report.json / profiles.csv into the output directory.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iostream>

#include "dyncubes/experiment.hpp"

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> tol;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Experiment config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Override the config seed");
    cmd->add_option("--out", o.out, "Override the output directory");
    cmd->add_option("--threads", o.threads, "Worker cap (0 = all cores); results do not depend on it");
    cmd->add_option("--tol", o.tol, "Override the tolerance");
}

int run(dyncubes::ExperimentKind kind, const Overrides& o) {
    using namespace dyncubes;
    try {
        ExperimentConfig c = load_config(o.config, kind);
        if (o.seed) c.seed = *o.seed;
        if (o.out) c.output_dir = *o.out;
        if (o.tol) c.tol = *o.tol;
        validate_config(c);
        const int code = run_and_write(c, RunOptions{o.threads, utc_timestamp()});
        std::cout << to_string(kind) << ": exit " << code << ", reports in " << c.output_dir << "\n";
        return code;
    } catch (const ConfigError& e) {
        std::cerr << o.config << ": " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const DomainError& e) {
        std::cerr << o.config << ": " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const BudgetOverflow& e) {
        std::cerr << "budget overflow: " << e.what() << "\n";
        return kExitBudgetOverflow;
    }
}

}  // namespace

int main(int argc, char** argv) {
    using dyncubes::ExperimentKind;
    CLI::App app{"dyncubes: dynamical cubes of concrete minimal systems"};
    app.require_subcommand(1);

    app.add_subcommand("systems", "List built-in systems and factor maps")->callback([] {
        std::cout << dyncubes::list_systems();
    });

    const std::pair<const char*, ExperimentKind> experiments[] = {
        {"cube", ExperimentKind::CubeSample},
        {"rp", ExperimentKind::RpEstimate},
        {"saturation", ExperimentKind::Saturation},
        {"face-saturation", ExperimentKind::FaceSaturation},
        {"completion", ExperimentKind::Completion},
        {"sturmian-cex", ExperimentKind::SturmianCex},
    };
    std::vector<Overrides> overrides(std::size(experiments));
    std::vector<std::pair<CLI::App*, ExperimentKind>> commands;
    for (std::size_t i = 0; i < std::size(experiments); ++i) {
        auto* cmd = app.add_subcommand(experiments[i].first, std::string("Run a ") +
                                                                 std::string(dyncubes::to_string(experiments[i].second)) +
                                                                 " experiment");
        add_common(cmd, overrides[i]);
        commands.emplace_back(cmd, experiments[i].second);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dyncubes::kExitInvalidConfig;
    }
    for (std::size_t i = 0; i < commands.size(); ++i)
        if (commands[i].first->parsed()) return run(commands[i].second, overrides[i]);
    return 0;
}
