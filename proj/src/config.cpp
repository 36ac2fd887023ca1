#include <algorithm>
#include <fstream>
#include <sstream>

#include "opcut/errors.hpp"
#include "opcut/harness.hpp"

namespace opcut {

const std::vector<std::string>& study_kinds() {
    static const std::vector<std::string> kinds = {
        "lemma2_2", "c1c2c3",  "corollary2_3", "lemma59",
        "prop60",   "example_aN", "lemma61",   "prop62",
        "prop49",   "section4_defect", "diagnostics",
    };
    return kinds;
}

void StudyConfig::validate() const {
    const auto& kinds = study_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw ConfigError("unknown study kind '" + kind + "'");
    if (dims.empty()) throw ConfigError("dims must be nonempty");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] < 4) throw ConfigError("dims must be >= 4");
        if (i > 0 && dims[i] <= dims[i - 1])
            throw ConfigError("dims must be strictly ascending");
    }
    if (L_count < 1) throw ConfigError("L.count must be >= 1");
    if (L_rule != "midpoints" && L_rule != "midpoints-log")
        throw ConfigError("L.rule must be midpoints or midpoints-log");
    if (k_max < 0) throw ConfigError("k_max must be >= 0");
    if (f_set.empty()) throw ConfigError("fset must be nonempty");
    if (times.empty()) throw ConfigError("times must be nonempty");
    if (x_source != "B" && x_source != "random" && x_source != "random-flat" &&
        x_source != "H0")
        throw ConfigError("x_source must be B | random | random-flat | H0");
    if (horizon <= 0.0) throw ConfigError("horizon must be positive");
    if (tau_count < 2) throw ConfigError("tau_count must be >= 2");
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double as_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number '" + v + "'");
    }
}

long as_long(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long d = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer '" + v + "'");
    }
}

bool as_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': cannot parse boolean '" + v + "'");
}

void apply_key(StudyConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "kind") cfg.kind = value;
    else if (key == "model") cfg.model = value;
    else if (key == "model.n") cfg.params.n = static_cast<int>(as_long(key, value));
    else if (key == "model.alpha") cfg.params.alpha = as_double(key, value);
    else if (key == "model.c") cfg.params.coupling = as_double(key, value);
    else if (key == "dims") {
        cfg.dims.clear();
        for (const auto& d : split(value, ','))
            cfg.dims.push_back(static_cast<std::size_t>(as_long(key, d)));
    } else if (key == "L.count") cfg.L_count = static_cast<int>(as_long(key, value));
    else if (key == "L.rule") cfg.L_rule = value;
    else if (key == "L.allow_upper") cfg.L_allow_upper = as_bool(key, value);
    else if (key == "fset") {
        cfg.f_set.clear();
        for (const auto& spec : split(value, ';'))
            cfg.f_set.push_back(TestFunction::parse(spec));
    } else if (key == "k_max") cfg.k_max = static_cast<int>(as_long(key, value));
    else if (key == "times") {
        cfg.times.clear();
        for (const auto& t : split(value, ',')) cfg.times.push_back(as_double(key, t));
    } else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_long(key, value));
    else if (key == "x_source") cfg.x_source = value;
    else if (key == "s") cfg.s = static_cast<unsigned>(as_long(key, value));
    else if (key == "ell") cfg.ell = static_cast<unsigned>(as_long(key, value));
    else if (key == "horizon") cfg.horizon = as_double(key, value);
    else if (key == "tau_max") cfg.tau_max = as_double(key, value);
    else if (key == "tau_count") cfg.tau_count = static_cast<int>(as_long(key, value));
    else if (key == "threads") cfg.threads = static_cast<int>(as_long(key, value));
    else if (key == "out.dir") cfg.out_dir = value;
    else if (key == "out.prefix") cfg.out_prefix = value;
    else if (key == "tol.verdict_final") cfg.tol.verdict_final = as_double(key, value);
    else if (key == "tol.verdict_stability")
        cfg.tol.verdict_stability = as_double(key, value);
    else if (key == "tol.prop60_uniformity")
        cfg.tol.prop60_uniformity = as_double(key, value);
    else if (key == "tol.quad_target") cfg.tol.quad_target = as_double(key, value);
    else if (key == "tol.fit_floor") cfg.tol.fit_floor = as_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

} // namespace

StudyConfig parse_config_text(const std::string& text) {
    StudyConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

StudyConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace opcut
