#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "xphase/errors.hpp"
#include "xphase/report.hpp"
#include "xphase/version.hpp"

namespace {

using xphase::Report;
using xphase::RunConfig;

void add_common_flags(CLI::App* cmd, RunConfig& config, std::string& config_path) {
    cmd->add_option("--n", config.n, "degrees of freedom");
    cmd->add_option("--hamiltonian", config.hamiltonian, "Hamiltonian expression");
    cmd->add_option("--hbar", config.hbar, "symbolic or a positive rational/decimal value");
    cmd->add_option("--order", config.order, "hbar truncation order");
    cmd->add_option("--ghosts", [&config](const std::vector<std::string>& values) {
        if (values.empty()) return false;
        if (values[0] == "on") {
            config.ghosts = true;
        } else if (values[0] == "off") {
            config.ghosts = false;
        } else {
            return false;
        }
        return true;
    }, "include the ghost sector (on|off)");
    cmd->add_option("--observables", config.observables, "observable expressions")->delimiter(',');
    cmd->add_flag("--alternative-start", config.alternative_start,
                  "fold multiplier terms into the Hamiltonian before the iteration");
    cmd->add_option("--out", config.out, "output file (default stdout)");
    cmd->add_option("--format", config.format, "json|text|csv");
    cmd->add_option("--config", config_path, "read the run configuration from a JSON file");
}

void add_wigner_flags(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--level", config.level, "Hermite level");
    cmd->add_option("--grid-hbar", config.grid_hbar, "numeric hbar for the grid run");
    cmd->add_option("--nq", config.nq, "q grid points");
    cmd->add_option("--np", config.np, "p grid points");
    cmd->add_option("--half-width", config.half_width, "q domain half width");
}

void merge_config_file(RunConfig& config, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw xphase::Error("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    config = xphase::config_from_json(text);
}

int emit(const Report& report, const RunConfig& config) {
    const std::string* payload = &report.json;
    if (config.format == "text") payload = &report.text;
    if (config.format == "csv") payload = &report.csv;
    if (config.out.empty()) {
        std::cout << *payload;
    } else {
        std::ofstream out(config.out);
        if (!out) throw xphase::Error("cannot open output file: " + config.out);
        out << *payload;
    }
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact graded phase-space algebra, Dirac constraint analysis, and Wigner checks"};
    app.set_version_flag("--version", std::string(xphase::kToolVersion));
    app.require_subcommand(1);

    RunConfig config;
    std::string config_path;
    std::string bracket_kind;
    std::vector<std::string> bracket_args;

    auto* bracket = app.add_subcommand("bracket", "evaluate pb/epb/moyal brackets");
    bracket->add_option("kind", bracket_kind, "pb|epb|moyal")->required();
    bracket->add_option("exprs", bracket_args, "two expressions F G")->expected(2);
    add_common_flags(bracket, config, config_path);

    auto* lift = app.add_subcommand("lift", "lift a Hamiltonian to the extended space");
    add_common_flags(lift, config, config_path);

    auto* dirac = app.add_subcommand("dirac", "run the full constraint analysis");
    add_common_flags(dirac, config, config_path);

    auto* compare = app.add_subcommand("compare", "constrained vs Moyal evolution");
    add_common_flags(compare, config, config_path);

    auto* coeffs = app.add_subcommand("coeffs", "coefficient-matching oracle for the hbar series");
    add_common_flags(coeffs, config, config_path);

    auto* wigner = app.add_subcommand("wigner", "Wigner-function grid checks");
    add_common_flags(wigner, config, config_path);
    add_wigner_flags(wigner, config);

    CLI11_PARSE(app, argc, argv);

    try {
        merge_config_file(config, config_path);
        Report report;
        if (bracket->parsed()) {
            report = xphase::cmd_bracket(bracket_kind, bracket_args.at(0), bracket_args.at(1),
                                         config);
        } else if (lift->parsed()) {
            report = xphase::cmd_lift(config);
        } else if (dirac->parsed()) {
            report = xphase::cmd_dirac(config);
        } else if (compare->parsed()) {
            report = xphase::cmd_compare(config);
        } else if (coeffs->parsed()) {
            report = xphase::cmd_coeffs(config);
        } else if (wigner->parsed()) {
            report = xphase::cmd_wigner(config);
        }
        return emit(report, config);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return xphase::kExitError;
    }
}
