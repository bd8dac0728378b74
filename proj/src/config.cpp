#include "netbid/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "netbid/csv.hpp"
#include "netbid/errors.hpp"

namespace netbid {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

const std::vector<std::string> kKnownKeys = {
    "topology", "nodes", "nodes_max", "trials", "seed", "funds",
    "coins_min", "coins_max", "strategy", "c", "epsilon", "max_steps",
    "inject_base", "inject_funds", "inject_points", "inject_points_max", "out",
};

struct RawEntry {
    std::string value;
    int line = 0;
};

long long parse_int(const std::string& key, const RawEntry& e, const std::string& origin) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(e.value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != e.value.size())
        throw ConfigError(origin + ":" + std::to_string(e.line) + ": key '" + key +
                          "' expects an integer, got '" + e.value + "'");
    return v;
}

double parse_real(const std::string& key, const RawEntry& e, const std::string& origin) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(e.value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != e.value.size())
        throw ConfigError(origin + ":" + std::to_string(e.line) + ": key '" + key +
                          "' expects a number, got '" + e.value + "'");
    return v;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    std::map<std::string, RawEntry> entries;
    std::vector<std::string> unknown;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            unknown.push_back(key + " (line " + std::to_string(lineno) + ")");
            continue;
        }
        if (entries.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        entries[key] = RawEntry{value, lineno};
    }
    if (!unknown.empty()) {
        std::string msg = origin + ": unknown keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }

    for (const char* required : {"topology", "nodes", "trials", "seed", "funds",
                                 "coins_min", "coins_max", "epsilon"})
        if (!entries.count(required))
            throw ConfigError(origin + ": missing required key '" + std::string(required) + "'");

    ExperimentConfig cfg;
    {
        std::stringstream fams(entries.at("topology").value);
        std::string fam;
        while (std::getline(fams, fam, ',')) {
            fam = trim(fam);
            if (fam.empty()) continue;
            try {
                cfg.families.push_back(family_from_name(fam));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(origin + ":" + std::to_string(entries.at("topology").line) +
                                  ": " + e.what());
            }
        }
        if (cfg.families.empty())
            throw ConfigError(origin + ": key 'topology' names no families");
    }

    cfg.nodes = static_cast<int>(parse_int("nodes", entries.at("nodes"), origin));
    cfg.trials = static_cast<int>(parse_int("trials", entries.at("trials"), origin));
    cfg.seed = static_cast<std::uint64_t>(parse_int("seed", entries.at("seed"), origin));
    cfg.funds = parse_real("funds", entries.at("funds"), origin);
    cfg.coins_min = static_cast<int>(parse_int("coins_min", entries.at("coins_min"), origin));
    cfg.coins_max = static_cast<int>(parse_int("coins_max", entries.at("coins_max"), origin));
    cfg.epsilon = parse_real("epsilon", entries.at("epsilon"), origin);

    if (entries.count("nodes_max"))
        cfg.nodes_max = static_cast<int>(parse_int("nodes_max", entries.at("nodes_max"), origin));
    if (entries.count("c")) cfg.c = parse_real("c", entries.at("c"), origin);
    if (entries.count("max_steps"))
        cfg.max_steps = parse_int("max_steps", entries.at("max_steps"), origin);
    if (entries.count("out")) cfg.out = entries.at("out").value;

    const std::string strategy_name =
        entries.count("strategy") ? entries.at("strategy").value : "fixed-c";
    cfg.strategy = StrategyKind::from_name(strategy_name, cfg.c);

    const bool any_inject = entries.count("inject_base") || entries.count("inject_funds") ||
                            entries.count("inject_points") || entries.count("inject_points_max");
    if (any_inject) {
        for (const char* required : {"inject_base", "inject_funds"})
            if (!entries.count(required))
                throw ConfigError(origin + ": injection settings present but missing key '" +
                                  std::string(required) + "'");
        cfg.has_injection = true;
        cfg.inject_base = parse_real("inject_base", entries.at("inject_base"), origin);
        cfg.inject_funds = parse_real("inject_funds", entries.at("inject_funds"), origin);
        if (entries.count("inject_points"))
            cfg.inject_points =
                static_cast<int>(parse_int("inject_points", entries.at("inject_points"), origin));
        if (entries.count("inject_points_max"))
            cfg.inject_points_max = static_cast<int>(
                parse_int("inject_points_max", entries.at("inject_points_max"), origin));
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

void ExperimentConfig::validate() const {
    if (families.empty()) throw ConfigError("config field 'topology' is empty");
    if (nodes < 2 || nodes > 1000000)
        throw ConfigError("config field 'nodes' must be in [2, 1000000], got " +
                          std::to_string(nodes));
    if (nodes_max != 0 && nodes_max < nodes)
        throw ConfigError("config field 'nodes_max' must be >= nodes");
    if (nodes_max > 1000000) throw ConfigError("config field 'nodes_max' exceeds 1000000");
    if (trials < 1) throw ConfigError("config field 'trials' must be >= 1");
    if (funds <= 0.0) throw ConfigError("config field 'funds' must be positive");
    if (coins_min <= 0 || coins_min > coins_max)
        throw ConfigError("config fields 'coins_min'/'coins_max' must satisfy 0 < min <= max");
    if (c < 1.0) throw ConfigError("config field 'c' must be >= 1");
    if (epsilon <= 0.0) throw ConfigError("config field 'epsilon' must be positive");
    if (max_steps < 0) throw ConfigError("config field 'max_steps' must be >= 0");
    if (has_injection) {
        if (inject_base <= 0.0 || inject_funds <= 0.0)
            throw ConfigError("config fields 'inject_base'/'inject_funds' must be positive");
        if (inject_points < 1)
            throw ConfigError("config field 'inject_points' must be >= 1");
        if (inject_points_max != 0 && inject_points_max < inject_points)
            throw ConfigError("config field 'inject_points_max' must be >= inject_points");
    }
}

std::vector<int> ExperimentConfig::node_grid() const {
    if (nodes_max == 0 || nodes_max == nodes) return {nodes};
    std::vector<int> grid;
    const int points = 10;
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        const int n = nodes + static_cast<int>(std::llround(f * (nodes_max - nodes)));
        if (grid.empty() || grid.back() != n) grid.push_back(n);
    }
    return grid;
}

std::string config_to_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "topology = ";
    for (std::size_t i = 0; i < cfg.families.size(); ++i)
        out << (i ? "," : "") << family_name(cfg.families[i]);
    out << '\n';
    out << "nodes = " << cfg.nodes << '\n';
    if (cfg.nodes_max != 0) out << "nodes_max = " << cfg.nodes_max << '\n';
    out << "trials = " << cfg.trials << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "funds = " << csv_num(cfg.funds) << '\n';
    out << "coins_min = " << cfg.coins_min << '\n';
    out << "coins_max = " << cfg.coins_max << '\n';
    out << "strategy = " << cfg.strategy.name() << '\n';
    out << "c = " << csv_num(cfg.c) << '\n';
    out << "epsilon = " << csv_num(cfg.epsilon) << '\n';
    out << "max_steps = " << cfg.max_steps << '\n';
    if (cfg.has_injection) {
        out << "inject_base = " << csv_num(cfg.inject_base) << '\n';
        out << "inject_funds = " << csv_num(cfg.inject_funds) << '\n';
        out << "inject_points = " << cfg.inject_points << '\n';
        if (cfg.inject_points_max != 0)
            out << "inject_points_max = " << cfg.inject_points_max << '\n';
    }
    out << "out = " << cfg.out << '\n';
    return out.str();
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file '" + path + "'");
    out << config_to_text(cfg);
}

} // namespace netbid
