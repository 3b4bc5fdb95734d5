#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "proxops/errors.hpp"

namespace proxops {

// Flat key/value store behind the scenario files. The format is a plain
// INI dialect:
//
//   # comment                ; also a comment
//   include didymos.cfg      # merged in place, paths relative to this file
//   [dispersion]
//   n_samples = 500
//   wp_azimuth_deg = 32.5, -50, -80, -10.4
//
// Keys flatten to "section.key". Either the [section] header or a literal
// dotted key works; whichever assignment comes later wins, so a scenario
// file can include the shared system model first and override single
// values after. Every value remembers where it was written for error
// messages.
class Config {
public:
    struct Entry {
        std::string text;
        std::string file;
        int line = 0;

        std::string where() const { return file + ":" + std::to_string(line); }
    };

    static Config load(const std::string& path) {
        Config cfg;
        cfg.merge_file(path, 0);
        return cfg;
    }

    // Parse from memory; `label` stands in for the file name in messages.
    static Config parse(const std::string& text, const std::string& label = "<memory>") {
        Config cfg;
        std::istringstream in(text);
        cfg.merge_stream(in, label, "", 0);
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const { return entry(key).text; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second.text;
    }

    double get_double(const std::string& key) const { return to_double(entry(key)); }

    double get_double(const std::string& key, double fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : to_double(it->second);
    }

    long get_long(const std::string& key, long fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        const Entry& e = it->second;
        char* end = nullptr;
        const long v = std::strtol(e.text.c_str(), &end, 10);
        if (end == e.text.c_str() || *end != '\0')
            throw ConfigError(e.where() + ": expected integer for '" + key + "', got '" +
                              e.text + "'");
        return v;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::string t = it->second.text;
        std::transform(t.begin(), t.end(), t.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
        if (t == "false" || t == "no" || t == "off" || t == "0") return false;
        throw ConfigError(it->second.where() + ": expected boolean for '" + key + "', got '" +
                          it->second.text + "'");
    }

    // Comma- or whitespace-separated list of numbers.
    std::vector<double> get_vector(const std::string& key) const {
        const Entry& e = entry(key);
        std::vector<double> out;
        std::string item;
        std::istringstream in(e.text);
        while (std::getline(in, item, ',')) {
            std::istringstream fields(item);
            std::string f;
            while (fields >> f) out.push_back(to_double(Entry{f, e.file, e.line}));
        }
        return out;
    }

    std::vector<double> get_vector(const std::string& key,
                                   const std::vector<double>& fallback) const {
        return has(key) ? get_vector(key) : fallback;
    }

    // All keys under "section." in file order of last assignment.
    std::vector<std::string> keys_in(const std::string& section) const {
        std::vector<std::string> out;
        const std::string prefix = section + ".";
        for (const auto& [k, v] : values_)
            if (k.rfind(prefix, 0) == 0) out.push_back(k);
        return out;
    }

    const std::map<std::string, Entry>& all() const { return values_; }

    // Re-serializable echo of the effective configuration, sorted by key.
    std::string echo() const {
        std::ostringstream out;
        std::string section;
        for (const auto& [k, v] : values_) {
            const auto dot = k.rfind('.');
            const std::string sec = dot == std::string::npos ? "" : k.substr(0, dot);
            if (sec != section) {
                out << "[" << sec << "]\n";
                section = sec;
            }
            out << k.substr(dot + 1) << " = " << v.text << "\n";
        }
        return out.str();
    }

    void set(const std::string& key, const std::string& text,
             const std::string& origin = "<override>") {
        values_[key] = Entry{text, origin, 0};
    }

private:
    std::map<std::string, Entry> values_;

    const Entry& entry(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
        return it->second;
    }

    static double to_double(const Entry& e) {
        char* end = nullptr;
        const double v = std::strtod(e.text.c_str(), &end);
        if (end == e.text.c_str() || *end != '\0')
            throw ConfigError(e.where() + ": expected number, got '" + e.text + "'");
        return v;
    }

    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    void merge_file(const std::string& path, int depth) {
        if (depth > 8) throw ConfigError(path + ": include depth exceeds 8, likely a cycle");
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        const std::string dir = std::filesystem::path(path).parent_path().string();
        merge_stream(in, path, dir, depth);
    }

    void merge_stream(std::istream& in, const std::string& label, const std::string& dir,
                      int depth) {
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto cut = line.find_first_of("#;");
            if (cut != std::string::npos) line = line.substr(0, cut);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(label + ":" + std::to_string(lineno) +
                                      ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            if (line.rfind("include", 0) == 0 &&
                (line.size() == 7 || std::isspace(static_cast<unsigned char>(line[7])))) {
                const std::string target = trim(line.substr(7));
                if (target.empty())
                    throw ConfigError(label + ":" + std::to_string(lineno) +
                                      ": include needs a file name");
                std::filesystem::path p(target);
                if (p.is_relative() && !dir.empty()) p = std::filesystem::path(dir) / p;
                merge_file(p.string(), depth + 1);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(label + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
            std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError(label + ":" + std::to_string(lineno) + ": empty key");
            if (key.find('.') == std::string::npos && !section.empty())
                key = section + "." + key;
            values_[key] = Entry{value, label, lineno};
        }
    }
};

}  // namespace proxops
