#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "csv.hpp"
#include "ifs.hpp"
#include "measure.hpp"
#include "spectrum.hpp"

namespace framelab {

/// Key=value configuration. Raw lines are preserved so that parsing a file
/// and re-serializing it reproduces the input byte for byte (comments and
/// blank lines included); programmatic set() rewrites the one line holding
/// the key or appends a new line.
struct Config {
    struct Line {
        std::string raw;
        std::string key;  // empty for comments and blanks
        std::string value;
    };
    std::vector<Line> lines;

    std::optional<std::string> get(const std::string& key) const {
        const std::string* found = nullptr;
        for (const Line& l : lines) {
            if (!l.key.empty() && l.key == key) found = &l.value;
        }
        if (!found) return std::nullopt;
        return *found;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto v = get(key);
        return v ? *v : fallback;
    }

    void set(const std::string& key, const std::string& value) {
        for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
            if (it->key == key) {
                it->value = value;
                it->raw = key + "=" + value;
                return;
            }
        }
        lines.push_back({key + "=" + value, key, value});
    }

    bool has(const std::string& key) const { return get(key).has_value(); }
};

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string body = detail::strip(raw);
        if (body.empty() || body[0] == '#') {
            cfg.lines.push_back({raw, "", ""});
            continue;
        }
        std::size_t eq = body.find('=');
        require(eq != std::string::npos && eq > 0, "ConfigError",
                "line " + std::to_string(line_no) + ": expected key=value, got \"" + body + "\"");
        std::string key = detail::strip(body.substr(0, eq));
        std::string value = detail::strip(body.substr(eq + 1));
        require(!key.empty(), "ConfigError", "line " + std::to_string(line_no) + ": empty key");
        cfg.lines.push_back({raw, key, value});
    }
    return cfg;
}

inline std::string serialize_config(const Config& cfg) {
    std::string out;
    for (const Config::Line& l : cfg.lines) {
        out += l.raw;
        out += '\n';
    }
    return out;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "ConfigError", "cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline double config_double(const Config& cfg, const std::string& key, double fallback) {
    auto v = cfg.get(key);
    if (!v) return fallback;
    double out = 0.0;
    auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    require(res.ec == std::errc{} && res.ptr == v->data() + v->size(), "ConfigError",
            "key " + key + ": \"" + *v + "\" is not a number");
    return out;
}

inline long config_long(const Config& cfg, const std::string& key, long fallback) {
    auto v = cfg.get(key);
    if (!v) return fallback;
    long out = 0;
    auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    require(res.ec == std::errc{} && res.ptr == v->data() + v->size(), "ConfigError",
            "key " + key + ": \"" + *v + "\" is not an integer");
    return out;
}

namespace detail {

inline double descriptor_number(const std::string& text) {
    std::string t = strip(text);
    double out = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    require(res.ec == std::errc{} && res.ptr == t.data() + t.size(), "ConfigError",
            "\"" + t + "\" is not a number");
    return out;
}

/// Splits on `sep` at bracket depth zero, honoring both () and [].
inline std::vector<std::string> split_descriptor(const std::string& inner, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : inner) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            parts.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(strip(cur));
    return parts;
}

/// Matches name(args) and returns args; empty optional when the head differs.
inline std::optional<std::string> descriptor_args(const std::string& text,
                                                  const std::string& head) {
    if (text.rfind(head + "(", 0) != 0) return std::nullopt;
    require(!text.empty() && text.back() == ')', "ConfigError",
            "descriptor \"" + text + "\": missing closing parenthesis");
    return text.substr(head.size() + 1, text.size() - head.size() - 2);
}

}  // namespace detail

/// Parses a measure descriptor: uniform(a,b) | triangle | invsqrt |
/// grid(path) | ifs(lambda=L,digits=[d1,d2,...]).
inline Measure1D parse_measure_descriptor(const std::string& raw, int grid_n) {
    std::string text = detail::strip(raw);
    if (text == "triangle") {
        DensityFn fn = triangle_density();
        return make_density_measure(fn, fn.natural_hull(), grid_n);
    }
    if (text == "invsqrt") {
        DensityFn fn = invsqrt_density();
        return make_density_measure(fn, fn.natural_hull(), grid_n);
    }
    if (auto args = detail::descriptor_args(text, "uniform")) {
        auto parts = detail::split_descriptor(*args, ',');
        require(parts.size() == 2, "ConfigError", "uniform(a,b) takes two numbers");
        DensityFn fn = uniform_density(detail::descriptor_number(parts[0]),
                                       detail::descriptor_number(parts[1]));
        return make_density_measure(fn, fn.natural_hull(), grid_n);
    }
    if (auto args = detail::descriptor_args(text, "grid")) {
        CsvTable table = read_csv(detail::strip(*args));
        std::vector<double> xs, ys;
        for (const auto& row : table.rows) {
            require(row.size() >= 2, "ConfigError",
                    "grid density CSV needs rows of (x, phi(x))");
            xs.push_back(row[0]);
            ys.push_back(row[1]);
        }
        DensityFn fn = grid_density(std::move(xs), std::move(ys), text);
        return make_density_measure(fn, fn.natural_hull(), grid_n);
    }
    if (auto args = detail::descriptor_args(text, "ifs")) {
        auto parts = detail::split_descriptor(*args, ',');
        std::optional<double> lambda;
        std::vector<double> digits;
        for (const std::string& part : parts) {
            std::size_t eq = part.find('=');
            require(eq != std::string::npos, "ConfigError",
                    "ifs() arguments must be lambda=... and digits=[...]");
            std::string key = detail::strip(part.substr(0, eq));
            std::string value = detail::strip(part.substr(eq + 1));
            if (key == "lambda") {
                lambda = detail::descriptor_number(value);
            } else if (key == "digits") {
                require(value.size() >= 2 && value.front() == '[' && value.back() == ']',
                        "ConfigError", "digits must be a [..] list");
                for (const std::string& d :
                     detail::split_descriptor(value.substr(1, value.size() - 2), ',')) {
                    digits.push_back(detail::descriptor_number(d));
                }
            } else {
                raise("ConfigError", "unknown ifs() argument \"" + key + "\"");
            }
        }
        require(lambda.has_value(), "ConfigError", "ifs() needs lambda=");
        require(!digits.empty(), "ConfigError", "ifs() needs digits=[...]");
        return make_selfsimilar_measure(make_ifs(*lambda, digits));
    }
    raise("ConfigError", "unknown measure descriptor \"" + text + "\"");
}

/// Parses a spectrum descriptor over the given window: lattice(alpha,offset) |
/// jitter(alpha,max_jitter[,seed=N]) | union(desc;desc;...).
inline Spectrum parse_spectrum_descriptor(const std::string& raw, Interval window,
                                          std::uint64_t default_seed) {
    std::string text = detail::strip(raw);
    if (auto args = detail::descriptor_args(text, "lattice")) {
        auto parts = detail::split_descriptor(*args, ',');
        require(parts.size() == 2, "ConfigError", "lattice(alpha,offset) takes two numbers");
        return lattice(detail::descriptor_number(parts[0]), detail::descriptor_number(parts[1]),
                       window);
    }
    if (auto args = detail::descriptor_args(text, "jitter")) {
        auto parts = detail::split_descriptor(*args, ',');
        require(parts.size() == 2 || parts.size() == 3, "ConfigError",
                "jitter(alpha,max_jitter[,seed=N])");
        std::uint64_t seed = default_seed;
        if (parts.size() == 3) {
            std::string s = parts[2];
            if (s.rfind("seed=", 0) == 0) s = s.substr(5);
            seed = static_cast<std::uint64_t>(detail::descriptor_number(s));
        }
        return jittered_lattice(detail::descriptor_number(parts[0]),
                                detail::descriptor_number(parts[1]), seed, window);
    }
    if (auto args = detail::descriptor_args(text, "union")) {
        auto parts = detail::split_descriptor(*args, ';');
        require(!parts.empty(), "ConfigError", "union() needs at least one member");
        Spectrum acc = parse_spectrum_descriptor(parts[0], window, default_seed);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            acc = union_spectrum(acc, parse_spectrum_descriptor(parts[i], window, default_seed));
        }
        return acc;
    }
    raise("ConfigError", "unknown spectrum descriptor \"" + text + "\"");
}

/// Window spelling: "W" means [-W, W); "a,b" means [a, b).
inline Interval parse_window(const std::string& raw) {
    auto parts = detail::split_descriptor(detail::strip(raw), ',');
    if (parts.size() == 1) {
        double w = detail::descriptor_number(parts[0]);
        require(w > 0.0, "ConfigError", "window half-width must be positive");
        return {-w, w};
    }
    require(parts.size() == 2, "ConfigError", "window must be W or a,b");
    Interval iv{detail::descriptor_number(parts[0]), detail::descriptor_number(parts[1])};
    require(!iv.empty(), "ConfigError", "window is empty");
    return iv;
}

}  // namespace framelab
