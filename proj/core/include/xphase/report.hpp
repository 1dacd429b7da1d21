#pragma once

#include <optional>
#include <string>
#include <vector>

namespace xphase {

/// Exit codes shared by the command runners and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDivergence = 2;  // documented divergence outcomes

/// One batch-run configuration. Validated before any computation.
struct RunConfig {
    int n = 1;
    std::string hamiltonian;
    std::string hbar = "symbolic";  // "symbolic" or a positive rational/decimal literal
    std::optional<int> order;
    bool ghosts = false;
    std::vector<std::string> observables;
    bool alternative_start = false;  // fold multiplier terms into the Hamiltonian first

    // wigner runs
    int level = 0;
    double grid_hbar = 1.0;
    int nq = 513;
    int np = 513;
    std::optional<double> half_width;

    std::string format = "json";  // json | text | csv
    std::string out;              // output file; empty = stdout

    void validate() const;
};

/// Machine-readable run result. `json` is the full document; `comparable`
/// is the same document without the timing section and is byte-identical
/// across reruns of the same config.
struct Report {
    int exit_code = kExitOk;
    std::string json;
    std::string comparable;
    std::string text;
    std::string csv;
};

Report cmd_bracket(const std::string& kind, const std::string& f, const std::string& g,
                   const RunConfig& config);
Report cmd_lift(const RunConfig& config);
Report cmd_dirac(const RunConfig& config);
Report cmd_compare(const RunConfig& config);
Report cmd_coeffs(const RunConfig& config);
Report cmd_wigner(const RunConfig& config);

/// Parses a RunConfig from a JSON document (the --config file).
RunConfig config_from_json(const std::string& text);

}  // namespace xphase
