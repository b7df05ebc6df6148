#include "choquard/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace choquard {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep))
        parts.push_back(trim(item));
    return parts;
}

double to_real(const std::string& key, const std::string& v)
{
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end || v.empty())
        throw ConfigError("key '" + key + "': not a real number: '" + v + "'");
    return x;
}

long long to_integer(const std::string& key, const std::string& v)
{
    long long x = 0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end || v.empty())
        throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v)
{
    const auto x = to_integer(key, v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ConfigError("key '" + key + "': out of range");
    return static_cast<int>(x);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"N", [](RunConfig& c, auto& k, auto& v) { c.dim = to_int(k, v); }},
        {"alpha", [](RunConfig& c, auto& k, auto& v) { c.alpha = to_real(k, v); }},
        {"p", [](RunConfig& c, auto& k, auto& v) { c.p = to_real(k, v); }},
        {"terms", [](RunConfig& c, auto&, auto& v) { c.terms = parse_terms(v); }},
        {"M", [](RunConfig& c, auto& k, auto& v) { c.points_per_axis = to_int(k, v); }},
        {"L", [](RunConfig& c, auto& k, auto& v) { c.box_length = to_real(k, v); }},
        {"max_iters", [](RunConfig& c, auto& k, auto& v) { c.solver.max_iters = to_int(k, v); }},
        {"tol_residual", [](RunConfig& c, auto& k, auto& v) { c.solver.tol_residual = to_real(k, v); }},
        {"armijo_c", [](RunConfig& c, auto& k, auto& v) { c.solver.armijo_c = to_real(k, v); }},
        {"armijo_shrink", [](RunConfig& c, auto& k, auto& v) { c.solver.armijo_shrink = to_real(k, v); }},
        {"recenter_every", [](RunConfig& c, auto& k, auto& v) { c.solver.recenter_every = to_int(k, v); }},
        {"init_amplitude", [](RunConfig& c, auto& k, auto& v) { c.solver.init_amplitude = to_real(k, v); }},
        {"init_width", [](RunConfig& c, auto& k, auto& v) { c.solver.init_width = to_real(k, v); }},
        {"init_noise", [](RunConfig& c, auto& k, auto& v) { c.solver.init_noise = to_real(k, v); }},
        {"pohozaev_defect", [](RunConfig& c, auto& k, auto& v) { c.solver.pohozaev_defect = to_real(k, v); }},
        {"seed", [](RunConfig& c, auto& k, auto& v) {
             const auto s = to_integer(k, v);
             if (s < 0)
                 throw ConfigError("seed must be nonnegative");
             c.solver.seed = static_cast<std::uint64_t>(s);
         }},
        {"out", [](RunConfig& c, auto&, auto& v) { c.out_dir = v; }},
        {"formats", [](RunConfig& c, auto&, auto& v) {
             c.formats = split(v, ',');
             for (const auto& f : c.formats)
                 if (f != "csv" && f != "jsonl")
                     throw ConfigError("unknown output format '" + f + "'");
         }},
        {"solution", [](RunConfig& c, auto&, auto& v) { c.solution = v; }},
        {"t_min", [](RunConfig& c, auto& k, auto& v) { c.t_min = to_real(k, v); }},
        {"t_max", [](RunConfig& c, auto& k, auto& v) { c.t_max = to_real(k, v); }},
        {"t_count", [](RunConfig& c, auto& k, auto& v) { c.t_count = to_int(k, v); }},
        {"t0", [](RunConfig& c, auto& k, auto& v) { c.t0 = to_real(k, v); }},
        {"points", [](RunConfig& c, auto&, auto& v) { c.sweep_points = parse_points(v); }},
        {"M2", [](RunConfig& c, auto& k, auto& v) { c.sweep_grids[2].points = to_int(k, v); }},
        {"L2", [](RunConfig& c, auto& k, auto& v) { c.sweep_grids[2].length = to_real(k, v); }},
        {"M3", [](RunConfig& c, auto& k, auto& v) { c.sweep_grids[3].points = to_int(k, v); }},
        {"L3", [](RunConfig& c, auto& k, auto& v) { c.sweep_grids[3].length = to_real(k, v); }},
        {"workers", [](RunConfig& c, auto& k, auto& v) {
             const int w = to_int(k, v);
             if (w < 0)
                 throw ConfigError("workers must be nonnegative");
             c.workers = static_cast<unsigned>(w);
         }},
    };
    return table;
}

} // namespace

std::vector<PowerTerm> parse_terms(const std::string& text)
{
    std::vector<PowerTerm> terms;
    for (const auto& item : split(text, ',')) {
        const auto cp = split(item, ':');
        if (cp.size() != 2)
            throw ConfigError("terms: expected c:p, got '" + item + "'");
        terms.push_back({to_real("terms", cp[0]), to_real("terms", cp[1])});
    }
    if (terms.empty())
        throw ConfigError("terms: empty list");
    return terms;
}

std::vector<SweepPoint> parse_points(const std::string& text)
{
    std::vector<SweepPoint> pts;
    for (const auto& item : split(text, ';')) {
        if (item.empty())
            continue;
        const auto f = split(item, ':');
        if (f.size() != 3)
            throw ConfigError("points: expected N:alpha:p, got '" + item + "'");
        pts.push_back({to_int("points", f[0]), to_real("points", f[1]), to_real("points", f[2])});
    }
    return pts;
}

ProblemSpec RunConfig::problem() const
{
    if (!dim || !alpha)
        throw ConfigError("problem needs both N and alpha");
    if (p.has_value() == !terms.empty())
        throw ConfigError("give exactly one of p or terms");
    return make_problem(*dim, *alpha, p ? Nonlinearity::power(*p) : Nonlinearity(terms));
}

GridSpec RunConfig::grid() const
{
    if (!dim)
        throw ConfigError("grid needs N");
    return make_grid(*dim, points_per_axis, box_length);
}

RunConfig parse_config(std::istream& in)
{
    RunConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const auto key = trim(t.substr(0, eq));
        const auto value = trim(t.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        it->second(cfg, key, value);
    }

    // schema validation up front, before anything runs
    validate(cfg.solver);
    if (cfg.has_problem()) {
        cfg.problem();
        cfg.grid();
    }
    for (const auto& [dim, g] : cfg.sweep_grids) {
        if (dim != 2 && dim != 3)
            throw ConfigError("sweep grid for unsupported dimension");
        make_grid(dim, g.points, g.length);
    }
    if (cfg.t0 && !(*cfg.t0 > 0.0 && *cfg.t0 < 1.0))
        throw ConfigError("t0 must lie in (0, 1)");
    if (!(cfg.t_min > 0.0 && cfg.t_max > cfg.t_min) || cfg.t_count < 2)
        throw ConfigError("need 0 < t_min < t_max and t_count >= 2");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

} // namespace choquard
