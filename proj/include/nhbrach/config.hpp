// config.hpp
// Run configuration for the command-line front end: flat "key = value" files,
// "--set key=value" overrides, complex literals "re+imj", grid specs
// "start, stop, count".

#pragma once

#include "nhbrach/types.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace nhbrach {

enum class Command { Compute, Sweep, Trajectory, Verify, Fig1, Fig2, Fig3 };

inline const char* to_string(Command c) {
    switch (c) {
        case Command::Compute: return "compute";
        case Command::Sweep: return "sweep";
        case Command::Trajectory: return "trajectory";
        case Command::Verify: return "verify";
        case Command::Fig1: return "fig1";
        case Command::Fig2: return "fig2";
        case Command::Fig3: return "fig3";
    }
    return "?";
}

inline std::optional<Command> parse_command(std::string_view s) {
    for (Command c : {Command::Compute, Command::Sweep, Command::Trajectory, Command::Verify, Command::Fig1,
                      Command::Fig2, Command::Fig3})
        if (s == to_string(c)) return c;
    return std::nullopt;
}

struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 2;

    /// start + (stop - start) i/(count - 1); both ends hit exactly.
    double at(std::size_t i) const {
        if (i + 1 == count) return stop;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_number(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// "2.5", "pi", "-pi", "0.5*pi", "0.5pi"
inline std::optional<double> parse_real_token(std::string_view s) {
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        std::string_view pre = s.substr(0, s.size() - 2);
        if (!pre.empty() && pre.back() == '*') pre.remove_suffix(1);
        if (pre.empty() || pre == "+") return pi;
        if (pre == "-") return -pi;
        const auto f = parse_number(pre);
        if (!f) return std::nullopt;
        return *f * pi;
    }
    return parse_number(s);
}

}  // namespace detail

/// Complex literal: "1", "-2.5e-3", "3j", "1+2j", "1-0.5j", "pi", "0.5*pi+1j".
inline std::optional<cplx> parse_complex(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty()) return std::nullopt;
    if (s.back() != 'j') {
        const auto r = detail::parse_real_token(s);
        if (!r) return std::nullopt;
        return cplx{*r, 0.0};
    }
    s.pop_back();
    // split at the last sign that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    std::string_view re_part = split == std::string::npos ? std::string_view{} : std::string_view(s).substr(0, split);
    std::string_view im_part = split == std::string::npos ? std::string_view(s) : std::string_view(s).substr(split);
    double im = 0.0;
    if (im_part.empty() || im_part == "+") im = 1.0;
    else if (im_part == "-") im = -1.0;
    else {
        if (im_part.back() == '*') im_part.remove_suffix(1);
        const auto v = detail::parse_real_token(im_part);
        if (!v) return std::nullopt;
        im = *v;
    }
    double re = 0.0;
    if (!re_part.empty()) {
        const auto v = detail::parse_real_token(re_part);
        if (!v) return std::nullopt;
        re = *v;
    }
    return cplx{re, im};
}

inline std::optional<GridSpec> parse_grid(std::string_view text) {
    std::vector<std::string> parts;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(detail::trim(item));
    if (parts.size() != 3) return std::nullopt;
    const auto a = detail::parse_real_token(parts[0]);
    const auto b = detail::parse_real_token(parts[1]);
    const auto n = detail::parse_number(parts[2]);
    if (!a || !b || !n || *n != static_cast<double>(static_cast<long long>(*n)) || *n < 0) return std::nullopt;
    return GridSpec{*a, *b, static_cast<std::size_t>(*n)};
}

struct RunConfig {
    Command command = Command::Compute;
    std::map<std::string, std::string> params;
    std::string output_path;  // empty: standard output
    std::optional<double> tol;
    unsigned jobs = 1;

    bool has(const std::string& key) const { return params.count(key) != 0; }

    cplx get_complex(const std::string& key) const {
        const auto it = params.find(key);
        if (it == params.end()) throw error(errc::invalid_config, "missing parameter '" + key + "'");
        const auto v = parse_complex(it->second);
        if (!v) throw error(errc::invalid_config, "bad complex value for '" + key + "': " + it->second);
        return *v;
    }

    cplx get_complex(const std::string& key, cplx fallback) const { return has(key) ? get_complex(key) : fallback; }

    double get_real(const std::string& key) const {
        const cplx v = get_complex(key);
        if (v.imag() != 0.0) throw error(errc::invalid_config, "'" + key + "' must be real");
        return v.real();
    }

    double get_real(const std::string& key, double fallback) const { return has(key) ? get_real(key) : fallback; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }

    GridSpec get_grid(const std::string& key) const {
        const auto it = params.find(key);
        if (it == params.end()) throw error(errc::invalid_config, "missing grid '" + key + "'");
        const auto g = parse_grid(it->second);
        if (!g) throw error(errc::invalid_config, "bad grid for '" + key + "' (want start, stop, count): " + it->second);
        return *g;
    }

    GridSpec get_grid(const std::string& key, GridSpec fallback) const { return has(key) ? get_grid(key) : fallback; }

    /// Integrator tolerance: --tol, else the "tol" key, else the fallback.
    double tolerance(double fallback) const {
        if (tol) return *tol;
        return get_real("tol", fallback);
    }
};

/// "key=value" (one pair) into cfg.params.
inline void apply_setting(RunConfig& cfg, std::string_view kv) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) throw error(errc::invalid_config, "expected key=value: " + std::string(kv));
    const std::string key = detail::trim(kv.substr(0, eq));
    if (key.empty()) throw error(errc::invalid_config, "empty key in: " + std::string(kv));
    cfg.params[key] = detail::trim(kv.substr(eq + 1));
}

/// Flat "key = value" lines; '#' starts a comment.
inline void read_config_stream(RunConfig& cfg, std::istream& in) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (detail::trim(line).empty()) continue;
        if (line.find('=') == std::string::npos)
            throw error(errc::invalid_config, "line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(cfg, line);
    }
}

inline void read_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::invalid_config, "cannot open config file " + path);
    read_config_stream(cfg, in);
}

namespace detail {

inline void require(const RunConfig& c, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (!c.has(k))
            throw error(errc::invalid_config,
                        std::string("command '") + to_string(c.command) + "' needs parameter '" + k + "'");
}

inline void check_grid(const RunConfig& c, const std::string& key) {
    if (!c.has(key)) return;
    const GridSpec g = c.get_grid(key);
    if (g.count < 2) throw error(errc::invalid_config, "grid '" + key + "' needs count >= 2");
    if (!(g.start < g.stop)) throw error(errc::invalid_config, "grid '" + key + "' needs start < stop");
}

}  // namespace detail

/// Checks everything that can be checked before running. Throws invalid_config.
inline void validate(const RunConfig& c) {
    if (c.jobs == 0) throw error(errc::invalid_config, "jobs must be >= 1");
    if (c.tol && !(*c.tol > 0.0)) throw error(errc::invalid_config, "tol must be positive");
    // every value must at least parse
    for (const auto& [k, v] : c.params) {
        if (k == "quantity" || k == "param1" || k == "param2" || k == "branch") continue;
        if (k.size() > 5 && k.substr(k.size() - 5) == "_grid") {
            detail::check_grid(c, k);
            continue;
        }
        if (!parse_complex(v)) throw error(errc::invalid_config, "bad value for '" + k + "': " + v);
    }
    switch (c.command) {
        case Command::Compute: {
            const std::string q = c.get_string("quantity", "tau_p");
            if (q == "tau_p") {
                if (!c.has("z") && !c.has("theta"))
                    throw error(errc::invalid_config, "quantity tau_p needs 'z' (with 'omega') or 'theta'");
            } else if (q == "tau" || q == "length") {
                detail::require(c, {"theta"});
            } else if (q == "speed") {
                detail::require(c, {"theta"});
            } else if (q == "regime") {
                detail::require(c, {"rho", "delta"});
            } else {
                throw error(errc::invalid_config, "unknown quantity '" + q + "' (tau, tau_p, length, speed, regime)");
            }
            break;
        }
        case Command::Sweep: {
            detail::require(c, {"param1", "param2", "param1_grid", "param2_grid"});
            const std::string a = c.get_string("param1", ""), b = c.get_string("param2", "");
            const std::string br = c.get_string("branch", "coherent");
            if (br != "coherent" && br != "incoherent")
                throw error(errc::invalid_config, "branch must be coherent or incoherent");
            const bool ok = (a == "re_theta" && b == "im_theta") || (a == "re_z" && b == "im_z") ||
                            (a == "omega0" && b == "delta");
            if (!ok)
                throw error(errc::invalid_config,
                            "sweep pairs: (re_theta, im_theta), (re_z, im_z) or (omega0, delta)");
            break;
        }
        case Command::Trajectory: {
            detail::require(c, {"t_end"});
            if (!(c.get_real("t_end") > 0.0)) throw error(errc::invalid_config, "t_end must be positive");
            if (c.has("steps") && !(c.get_real("steps") >= 1.0))
                throw error(errc::invalid_config, "steps must be >= 1");
            bool cart = c.has("x") || c.has("y") || c.has("z");
            for (const char* k : {"x_re", "x_im", "y_re", "y_im", "z_re", "z_im"}) cart = cart || c.has(k);
            if (!cart && !c.has("theta")) throw error(errc::invalid_config, "trajectory needs x, y, z or theta");
            break;
        }
        case Command::Verify:
        case Command::Fig1:
        case Command::Fig2:
        case Command::Fig3: break;
    }
}

}  // namespace nhbrach
