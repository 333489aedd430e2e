#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "stieltjes/oscillator.hpp"

namespace stieltjes {

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline double parse_number(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (trim(s.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("derivator config: bad number '" + s + "' in " + context);
}

} // namespace detail

/// Parses the `stieltjes-derivator v1` text format:
///
///   stieltjes-derivator v1
///   horizon = 3.0
///   continuous.kind = piecewise_linear   # identity | piecewise_linear | staircase_saw
///   continuous.params = 0:1, 1:0, 2:1    # time:slope pairs (piecewise_linear only)
///   jumps = (0.5, 1.0), (1.2, 0.25)      # (time, magnitude) pairs, optional
///
/// Blank lines and '#' comments are ignored.
inline Derivator parse_derivator_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_version = false;
    double horizon = -1.0;
    std::string kind;
    std::string params;
    std::string jumps_text;

    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string s = detail::trim(line);
        if (s.empty()) continue;
        if (!have_version) {
            if (s != "stieltjes-derivator v1")
                throw ConfigError("derivator config: first line must be "
                                  "'stieltjes-derivator v1'");
            have_version = true;
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("derivator config: expected 'key = value', got '" + s + "'");
        std::string key = detail::trim(s.substr(0, eq));
        std::string value = detail::trim(s.substr(eq + 1));
        if (key == "horizon")
            horizon = detail::parse_number(value, "horizon");
        else if (key == "continuous.kind")
            kind = value;
        else if (key == "continuous.params")
            params = value;
        else if (key == "jumps")
            jumps_text = value;
        else
            throw ConfigError("derivator config: unknown key '" + key + "'");
    }
    if (!have_version) throw ConfigError("derivator config: empty file");
    if (!(horizon > 0.0)) throw ConfigError("derivator config: horizon must be set and > 0");
    if (kind.empty()) throw ConfigError("derivator config: continuous.kind must be set");

    ContinuousPart cont = [&]() {
        if (kind == "identity") return ContinuousPart::identity(horizon);
        if (kind == "staircase_saw") return ContinuousPart::staircase_saw(horizon);
        if (kind == "piecewise_linear") {
            std::vector<std::pair<double, double>> bp;
            std::istringstream ps(params);
            std::string item;
            while (std::getline(ps, item, ',')) {
                std::string entry = detail::trim(item);
                if (entry.empty()) continue;
                auto colon = entry.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("derivator config: continuous.params entries must be "
                                      "time:slope");
                bp.emplace_back(
                    detail::parse_number(detail::trim(entry.substr(0, colon)), "params"),
                    detail::parse_number(detail::trim(entry.substr(colon + 1)), "params"));
            }
            if (bp.empty())
                throw ConfigError("derivator config: piecewise_linear needs "
                                  "continuous.params");
            return ContinuousPart::piecewise_linear(std::move(bp), horizon);
        }
        throw ConfigError("derivator config: unknown continuous.kind '" + kind + "'");
    }();

    std::vector<Jump> jumps;
    std::string_view jv = jumps_text;
    std::size_t pos = 0;
    while (pos < jv.size()) {
        auto open = jv.find('(', pos);
        if (open == std::string_view::npos) break;
        auto close = jv.find(')', open);
        if (close == std::string_view::npos)
            throw ConfigError("derivator config: unbalanced parentheses in jumps");
        std::string inner(jv.substr(open + 1, close - open - 1));
        auto comma = inner.find(',');
        if (comma == std::string::npos)
            throw ConfigError("derivator config: jumps entries must be (time, magnitude)");
        jumps.push_back({detail::parse_number(detail::trim(inner.substr(0, comma)), "jumps"),
                         detail::parse_number(detail::trim(inner.substr(comma + 1)), "jumps")});
        pos = close + 1;
    }

    try {
        return Derivator(std::move(cont), JumpSet(std::move(jumps), horizon));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("derivator config: ") + e.what());
    }
}

inline Derivator load_derivator_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open derivator file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_derivator_text(ss.str());
}

/// Resolves either a preset name (`example1-g1`, `example1-g2`) or a config
/// file path. l and T apply to presets only.
inline Derivator resolve_derivator(const std::string& name_or_path, double l, double T) {
    if (name_or_path == "example1-g1") return example1_g1(l, T);
    if (name_or_path == "example1-g2") return example1_g2(l, T);
    return load_derivator_file(name_or_path);
}

} // namespace stieltjes
