#include "macflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace macflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValues {
    std::map<std::string, std::string> kv; // "section.key" -> value
    std::set<std::string> consumed;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string take(const std::string& key) {
        consumed.insert(key);
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("config: missing required key " + key);
        return it->second;
    }
    std::string take_or(const std::string& key, const std::string& fallback) {
        consumed.insert(key);
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
};

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw std::invalid_argument("config: key " + key + " is not a number: '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long n = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return n;
    } catch (...) {
        throw std::invalid_argument("config: key " + key + " is not an integer: '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return n;
    } catch (...) {
        throw std::invalid_argument("config: key " + key + " is not an unsigned integer: '" +
                                    v + "'");
    }
}

} // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);

    static const std::set<std::string> known_sections = {"model", "grid",    "time",
                                                         "ic",    "rescale", "output"};
    KeyValues vals;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[' && s.back() == ']') {
            section = trim(s.substr(1, s.size() - 2));
            if (!known_sections.count(section))
                throw std::invalid_argument("config: unknown section [" + section + "] at line " +
                                            std::to_string(lineno));
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos || section.empty())
            throw std::invalid_argument("config: expected 'key = value' inside a section at line " +
                                        std::to_string(lineno));
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        vals.kv[section + "." + key] = value;
    }

    RunConfig cfg;
    cfg.model.m1 = static_cast<int>(to_long("model.m1", vals.take("model.m1")));
    cfg.model.m2 = static_cast<int>(to_long("model.m2", vals.take("model.m2")));
    cfg.model.epsilon = to_double("model.epsilon", vals.take("model.epsilon"));
    cfg.model.kappa = vals.has("model.kappa")
                          ? to_double("model.kappa", vals.take("model.kappa"))
                          : ModelParams::default_kappa(cfg.model.m2);
    const std::string lap = vals.take_or("model.laplacian", "fd");
    if (lap == "fd" || lap == "finite_difference")
        cfg.laplacian = LaplacianKind::finite_difference;
    else if (lap == "spectral")
        cfg.laplacian = LaplacianKind::spectral;
    else
        throw std::invalid_argument("config: model.laplacian must be fd or spectral, got '" +
                                    lap + "'");

    cfg.nx = static_cast<int>(to_long("grid.nx", vals.take_or("grid.nx", "128")));
    cfg.ny = static_cast<int>(to_long("grid.ny", vals.take_or("grid.ny", "128")));

    cfg.order = static_cast<int>(to_long("time.order", vals.take("time.order")));
    cfg.tau = to_double("time.tau", vals.take("time.tau"));
    cfg.T = to_double("time.T", vals.take("time.T"));

    const std::string kind = vals.take("ic.kind");
    if (kind == "random_vector")
        cfg.ic.kind = IcKind::random_vector;
    else if (kind == "petal")
        cfg.ic.kind = IcKind::petal;
    else if (kind == "voronoi")
        cfg.ic.kind = IcKind::voronoi;
    else
        throw std::invalid_argument(
            "config: ic.kind must be random_vector, petal or voronoi, got '" + kind + "'");
    cfg.ic.seed = to_u64("ic.seed", vals.take_or("ic.seed", "0"));
    cfg.ic.grains = static_cast<int>(to_long("ic.K", vals.take_or("ic.K", "8")));
    cfg.ic.m1 = cfg.model.m1;
    cfg.ic.m2 = cfg.model.m2;

    const std::string mode = vals.take_or("rescale.mode", "exact");
    if (mode == "exact")
        cfg.rescale_mode = RescaleMode::exact;
    else if (mode == "sampled")
        cfg.rescale_mode = RescaleMode::sampled;
    else
        throw std::invalid_argument("config: rescale.mode must be exact or sampled, got '" +
                                    mode + "'");
    cfg.rescale_samples =
        static_cast<int>(to_long("rescale.samples", vals.take_or("rescale.samples", "65")));

    cfg.output_dir = vals.take_or("output.dir", "");
    const std::string snaps = vals.take_or("output.snapshot_times", "");
    if (!snaps.empty()) {
        std::stringstream ss(snaps);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty())
                cfg.snapshot_times.push_back(to_double("output.snapshot_times", tok));
        }
    }
    cfg.series_stride = to_long("output.series_stride", vals.take_or("output.series_stride", "1"));

    for (const auto& [key, value] : vals.kv)
        if (!vals.consumed.count(key))
            throw std::invalid_argument("config: unknown key " + key);

    cfg.validate();
    return cfg;
}

} // namespace macflow
