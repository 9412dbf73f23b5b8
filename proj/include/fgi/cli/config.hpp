#pragma once

// Run configuration: JSON file values, then command-line flags on top.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgi/cli/table.hpp"
#include "fgi/errors.hpp"
#include "fgi/gauss_core.hpp"
#include "fgi/spectral_perimeter.hpp"
#include "fgi/suites.hpp"

namespace fgi::cli {

/// Bad flag values, config files or grids; the CLI maps these to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::vector<double> s_grid;  // empty: the command's default grid
    std::size_t K = kDefaultTruncation;
    std::size_t levelset_K = 4000;
    std::optional<Convention> convention;
    double c = 1.0;
    double c_max = 1000.0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> n;
    std::string suite = "all";
    Format format = Format::csv;
    std::string out;  // empty: standard output
    std::vector<std::string> sets;
    std::vector<double> x;
    std::vector<double> z;
    std::vector<double> r_grid;

    void validate() const {
        if (K < 1) throw UsageError("K must be at least 1");
        if (levelset_K < 1) throw UsageError("levelset_K must be at least 1");
        if (!(c > 0.0)) throw UsageError("c must be positive");
        if (!(c_max >= c)) throw UsageError("c_max must be at least c");
        for (double s : s_grid) {
            if (!(s > 0.0 && s < 1.0)) throw UsageError("every s must lie in (0, 1), got " + format_number(s));
        }
    }
};

/// "a:b:step" -> a, a + step, ..., up to b inclusive.
inline std::vector<double> parse_grid(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw UsageError("grid must look like a:b:step, got '" + text + "'");
    double a = 0.0;
    double b = 0.0;
    double step = 0.0;
    try {
        std::size_t used = 0;
        a = std::stod(text.substr(0, c1), &used);
        if (used != c1) throw std::invalid_argument("a");
        b = std::stod(text.substr(c1 + 1, c2 - c1 - 1), &used);
        if (used != c2 - c1 - 1) throw std::invalid_argument("b");
        step = std::stod(text.substr(c2 + 1), &used);
        if (used != text.size() - c2 - 1) throw std::invalid_argument("step");
    } catch (const std::exception&) {
        throw UsageError("grid must look like a:b:step, got '" + text + "'");
    }
    if (!(step > 0.0) || !(b >= a)) throw UsageError("grid needs step > 0 and b >= a, got '" + text + "'");
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
    return out;
}

inline Convention parse_convention(const std::string& text) {
    if (text == "with-constant") return Convention::with_constant;
    if (text == "remark") return Convention::remark;
    throw UsageError("convention must be with-constant or remark, got '" + text + "'");
}

inline Format parse_format(const std::string& text) {
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw UsageError("format must be csv or json, got '" + text + "'");
}

inline std::vector<Suite> parse_suites(const std::string& text) {
    if (text == "all") return {kAllSuites.begin(), kAllSuites.end()};
    for (auto s : kAllSuites) {
        if (text == to_string(s)) return {s};
    }
    throw UsageError("suite must be transfer, levelset, bounds, main or all, got '" + text + "'");
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw UsageError("config file " + path + ": " + ex.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    RunConfig cfg;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "s_grid") {
                cfg.s_grid = v.is_string() ? parse_grid(v.get<std::string>()) : v.get<std::vector<double>>();
            } else if (key == "K") {
                cfg.K = v.get<std::size_t>();
            } else if (key == "levelset_K") {
                cfg.levelset_K = v.get<std::size_t>();
            } else if (key == "convention") {
                cfg.convention = parse_convention(v.get<std::string>());
            } else if (key == "c") {
                cfg.c = v.get<double>();
            } else if (key == "c_max") {
                cfg.c_max = v.get<double>();
            } else if (key == "seed") {
                cfg.seed = v.get<std::uint64_t>();
            } else if (key == "n") {
                cfg.n = v.get<std::size_t>();
            } else if (key == "suite") {
                cfg.suite = v.get<std::string>();
                parse_suites(cfg.suite);
            } else if (key == "format") {
                cfg.format = parse_format(v.get<std::string>());
            } else if (key == "out") {
                cfg.out = v.get<std::string>();
            } else if (key == "sets") {
                cfg.sets = v.get<std::vector<std::string>>();
            } else {
                throw UsageError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw UsageError("config file " + path + ": " + ex.what());
    }
    return cfg;
}

}  // namespace fgi::cli
