#include "chns/config.hpp"

#include "chns/errors.hpp"
#include "chns/motility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace chns {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + v + "'", line);
    }
}

int parse_int(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer, got '" + v + "'", line);
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("expected a boolean, got '" + v + "'", line);
}

struct Key {
    std::function<void(SimConfig&, const std::string&, int)> set;
    std::function<std::string(const SimConfig&)> get;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Declaration order doubles as the canonical serialization order.
const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>>& schema() {
    auto d = [](auto member) {
        return Key{[member](SimConfig& c, const std::string& v, int ln) { c.*member = parse_double(v, ln); },
                   [member](const SimConfig& c) { return fmt(c.*member); }};
    };
    auto i = [](auto member) {
        return Key{[member](SimConfig& c, const std::string& v, int ln) { c.*member = parse_int(v, ln); },
                   [member](const SimConfig& c) { return std::to_string(c.*member); }};
    };
    auto s = [](auto member) {
        return Key{[member](SimConfig& c, const std::string& v, int) { c.*member = v; },
                   [member](const SimConfig& c) { return c.*member; }};
    };
    auto b = [](auto member) {
        return Key{[member](SimConfig& c, const std::string& v, int ln) { c.*member = parse_bool(v, ln); },
                   [member](const SimConfig& c) { return c.*member ? std::string("true") : std::string("false"); }};
    };
    static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>> tbl = {
        {"grid",
         {{"nx", i(&SimConfig::nx)},
          {"ny", i(&SimConfig::ny)},
          {"lx", d(&SimConfig::lx)},
          {"ly", d(&SimConfig::ly)}}},
        {"model",
         {{"motility", s(&SimConfig::motility_family)},
          {"motility_param", d(&SimConfig::motility_param)},
          {"motility_table", s(&SimConfig::motility_table_path)},
          {"mu", d(&SimConfig::mu)},
          {"kappa", i(&SimConfig::kappa)},
          {"gravity", d(&SimConfig::gravity)}}},
        {"initial",
         {{"preset", s(&SimConfig::preset)},
          {"file", s(&SimConfig::initial_file)},
          {"n0", d(&SimConfig::n0)},
          {"v0", d(&SimConfig::v0)},
          {"n0_amplitude", d(&SimConfig::n0_amplitude)},
          {"n0_mass", d(&SimConfig::n0_mass)},
          {"n0_background", d(&SimConfig::n0_background)},
          {"vortex_strength", d(&SimConfig::vortex_strength)}}},
        {"time",
         {{"t_end", d(&SimConfig::t_end)},
          {"cfl", d(&SimConfig::cfl)},
          {"dt", d(&SimConfig::dt_fixed)},
          {"linear_solve_tol", d(&SimConfig::linear_solve_tol)},
          {"poisson_tol", d(&SimConfig::poisson_tol)},
          {"max_solver_iter", i(&SimConfig::max_solver_iter)}}},
        {"output",
         {{"every", d(&SimConfig::output_every)},
          {"snapshot_every", d(&SimConfig::snapshot_every)},
          {"c_f1", d(&SimConfig::c_f1)},
          {"c_f2_multiplier", d(&SimConfig::c_f2_multiplier)},
          {"detect_convergence", b(&SimConfig::detect_convergence)},
          {"converge_l2_n", d(&SimConfig::converge_l2_n)},
          {"converge_w1inf_v", d(&SimConfig::converge_w1inf_v)},
          {"converge_w12_u", d(&SimConfig::converge_w12_u)}}},
        {"smallness",
         {{"delta_n", d(&SimConfig::delta_n)},
          {"delta_v", d(&SimConfig::delta_v)}}},
    };
    return tbl;
}

void validate(const SimConfig& c) {
    try {
        (void)c.grid();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    const std::set<std::string> families = {"linear", "saturating", "exponential", "tabulated"};
    if (!families.count(c.motility_family))
        throw ConfigError("unknown motility family '" + c.motility_family +
                          "' (admissible: linear, saturating, exponential, tabulated)");
    if (c.motility_family != "tabulated" && !(c.motility_param > 0.0))
        throw ConfigError("motility_param must be positive");
    if (c.mu < 0.0)
        throw ConfigError("mu must be >= 0");
    if (c.kappa != 0 && c.kappa != 1)
        throw ConfigError("kappa must be 0 or 1");
    if (c.initial_file.empty()) {
        const std::set<std::string> presets = {"uniform", "perturbed", "bump", "vortex"};
        if (!presets.count(c.preset))
            throw ConfigError("unknown initial preset '" + c.preset + "'");
        if (!(c.v0 > 0.0))
            throw ConfigError("v0 must be strictly positive everywhere");
        if (c.n0 < 0.0)
            throw ConfigError("n0 must be nonnegative");
        if (c.preset == "perturbed" && c.n0 - std::abs(c.n0_amplitude) < 0.0)
            throw ConfigError("perturbed preset needs n0 >= |n0_amplitude| to keep n0 nonnegative");
        if (c.preset == "bump" && (!(c.n0_mass > 0.0) || c.n0_background < 0.0))
            throw ConfigError("bump preset needs n0_mass > 0 and n0_background >= 0");
    }
    if (!(c.t_end > 0.0))
        throw ConfigError("t_end must be positive");
    if (!(c.cfl > 0.0) || c.cfl > 1.0)
        throw ConfigError("cfl must lie in (0, 1]");
    if (c.dt_fixed < 0.0)
        throw ConfigError("dt must be positive when given");
    if (!(c.linear_solve_tol > 0.0) || !(c.poisson_tol > 0.0))
        throw ConfigError("solver tolerances must be positive");
    if (c.max_solver_iter <= 0)
        throw ConfigError("max_solver_iter must be positive");
    if (c.output_every < 0.0 || c.snapshot_every < 0.0)
        throw ConfigError("output intervals must be nonnegative");
    if (!(c.c_f1 > 0.0) || !(c.c_f2_multiplier > 0.0))
        throw ConfigError("energy weights must be positive");
    if (!(c.converge_l2_n > 0.0) || !(c.converge_w1inf_v > 0.0) || !(c.converge_w12_u > 0.0))
        throw ConfigError("convergence thresholds must be positive");
}

} // namespace

SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string section;
    std::set<std::string> seen;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            const auto& tbl = schema();
            const bool known = std::any_of(tbl.begin(), tbl.end(),
                                           [&](const auto& s) { return s.first == section; });
            if (!known)
                throw ConfigError("unknown section [" + section + "]", lineno);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any section", lineno);
        if (key.empty() || value.empty())
            throw ConfigError("expected 'key = value'", lineno);

        const Key* slot = nullptr;
        for (const auto& [sec, keys] : schema())
            if (sec == section)
                for (const auto& [name, k] : keys)
                    if (name == key)
                        slot = &k;
        if (!slot)
            throw ConfigError("unknown key '" + key + "' in section [" + section + "]", lineno);
        const std::string qual = section + "." + key;
        if (!seen.insert(qual).second)
            throw ConfigError("duplicate key '" + qual + "'", lineno);
        slot->set(cfg, value, lineno);
    }

    for (const auto& [sec, keys] : schema())
        for (const auto& [name, k] : keys)
            if (!seen.count(sec + "." + name))
                cfg.defaulted_keys.push_back(sec + "." + name + " = " + k.get(cfg));

    validate(cfg);
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    SimConfig cfg = parse_config(ss.str());

    if (cfg.motility_family == "tabulated") {
        if (cfg.motility_table_path.empty())
            throw ConfigError("tabulated motility needs motility_table");
        std::string table_path = cfg.motility_table_path;
        if (table_path.front() != '/') {
            const auto slash = path.find_last_of('/');
            if (slash != std::string::npos)
                table_path = path.substr(0, slash + 1) + table_path;
        }
        std::ifstream tin(table_path);
        if (!tin)
            throw ConfigError("cannot open motility table: " + table_path);
        std::ostringstream ts;
        ts << tin.rdbuf();
        cfg.motility_table_text = ts.str();
        Motility::tabulated(cfg.motility_table_text); // validates the table
    }
    return cfg;
}

std::string serialize_config(const SimConfig& config) {
    std::string out;
    for (const auto& [sec, keys] : schema()) {
        out += "[" + sec + "]\n";
        for (const auto& [name, k] : keys) {
            const std::string v = k.get(config);
            if (!v.empty())
                out += name + " = " + v + "\n";
        }
        out += "\n";
    }
    return out;
}

} // namespace chns
