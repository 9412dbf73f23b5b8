// fgi: fractional Gaussian perimeters, asymmetries and isoperimetric checks.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fgi/cli/commands.hpp"
#include "fgi/cli/config.hpp"
#include "fgi/cli/table.hpp"
#include "fgi/errors.hpp"

namespace {

using namespace fgi;
using namespace fgi::cli;

struct Flags {
    std::vector<std::string> sets;
    std::vector<double> s;
    std::optional<std::string> s_grid;
    std::optional<std::size_t> K;
    std::optional<std::size_t> levelset_K;
    std::optional<std::string> convention;
    std::optional<double> c;
    std::optional<double> c_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> suite;
    std::optional<std::size_t> n;
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::optional<std::string> config;
    std::vector<double> x;
    std::vector<double> z;
    std::optional<std::string> r_grid;
};

RunConfig merge(const Flags& f) {
    RunConfig cfg = f.config ? load_config(*f.config) : RunConfig{};
    if (!f.sets.empty()) cfg.sets = f.sets;
    if (f.s_grid) cfg.s_grid = parse_grid(*f.s_grid);
    if (!f.s.empty()) cfg.s_grid = f.s;
    if (f.K) cfg.K = *f.K;
    if (f.levelset_K) cfg.levelset_K = *f.levelset_K;
    if (f.convention) cfg.convention = parse_convention(*f.convention);
    if (f.c) cfg.c = *f.c;
    if (f.c_max) cfg.c_max = *f.c_max;
    if (f.seed) cfg.seed = *f.seed;
    if (f.suite) {
        parse_suites(*f.suite);
        cfg.suite = *f.suite;
    }
    if (f.n) cfg.n = *f.n;
    if (f.format) cfg.format = parse_format(*f.format);
    if (f.out) cfg.out = *f.out;
    if (!f.x.empty()) cfg.x = f.x;
    if (!f.z.empty()) cfg.z = f.z;
    if (f.r_grid) cfg.r_grid = parse_grid(*f.r_grid);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Gaussian perimeters, asymmetries and isoperimetric deficits of 1D sets"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--set", f.sets, "Set, e.g. \"(-inf,0)|(1,2)\"; repeatable");
    app.add_option("--s", f.s, "Fractional order(s) in (0,1)")->delimiter(',');
    app.add_option("--s-grid", f.s_grid, "Order grid a:b:step");
    app.add_option("--K", f.K, "Hermite truncation");
    app.add_option("--levelset-K", f.levelset_K, "Truncation used by the level-set suites");
    app.add_option("--convention", f.convention, "with-constant or remark");
    app.add_option("--c", f.c, "Assumed absolute constant");
    app.add_option("--c-max", f.c_max, "Largest constant tried before a main-suite violation counts");
    app.add_option("--seed", f.seed, "Seed of the random set family");
    app.add_option("--suite", f.suite, "transfer, levelset, bounds, main or all");
    app.add_option("--n", f.n, "Random sets per suite");
    app.add_option("--format", f.format, "csv or json");
    app.add_option("--out", f.out, "Output file (default stdout)");
    app.add_option("--config", f.config, "JSON config file; flags override it");
    app.add_option("--x", f.x, "Evaluation points for extension-eval")->delimiter(',');
    app.add_option("--z", f.z, "Heights for extension-eval")->delimiter(',');
    app.add_option("--r-grid", f.r_grid, "Threshold grid a:b:step for sweep and asymptotic");

    const std::map<std::string, std::function<CommandResult(const RunConfig&)>> commands{
        {"perimeter", cmd_perimeter},
        {"deficit", cmd_deficit},
        {"asymmetry", cmd_asymmetry},
        {"extension-eval", cmd_extension_eval},
        {"verify", cmd_verify},
        {"sweep", cmd_sweep},
        {"asymptotic", cmd_asymptotic},
    };
    const std::map<std::string, std::string> help{
        {"perimeter", "Spectral perimeter of each set"},
        {"deficit", "Deficit report against the stability bound"},
        {"asymmetry", "Fraenkel asymmetry and optimal halfline"},
        {"extension-eval", "Extension field U(x, z)"},
        {"verify", "Randomized verification suites"},
        {"sweep", "Halfline perimeter over r and s grids"},
        {"asymptotic", "Scaled perimeter as s approaches 1"},
    };
    for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name))->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const RunConfig cfg = merge(f);
        const std::string name = app.get_subcommands().front()->get_name();
        const CommandResult res = commands.at(name)(cfg);
        const std::string conv(to_string(res.convention));
        if (cfg.out.empty()) {
            write_table(std::cout, res.table, cfg.format, conv);
        } else {
            std::ofstream os(cfg.out, std::ios::binary);
            if (!os) throw UsageError("cannot write " + cfg.out);
            write_table(os, res.table, cfg.format, conv);
        }
        return res.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DegenerateSetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
