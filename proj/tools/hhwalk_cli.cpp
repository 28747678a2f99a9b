// Experiment driver for the hhwalk library. Uses only the public C API.
#include "hhwalk/hhwalk.h"
#include "svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_tolerance = 2;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void config_error(const std::string& msg) { throw CliError{exit_validation, "config: " + msg}; }

void check(hh_status s, const char* what)
{
    if (s == HH_OK)
        return;
    std::string msg = std::string(what) + ": " + hh_status_name(s) + ": " + hh_last_error();
    if (s == HH_ERR_RETRIES_EXHAUSTED)
        msg += " (try another seed, raise universe.max_retries, or use a degree sequence with more high-degree nodes)";
    throw CliError{exit_validation, msg};
}

// ---- RAII wrappers -------------------------------------------------------

struct GraphDeleter {
    void operator()(hh_graph* g) const { hh_graph_destroy(g); }
};
struct HouseholdDeleter {
    void operator()(hh_household* h) const { hh_household_destroy(h); }
};
struct MapDeleter {
    void operator()(hh_template_map* m) const { hh_template_map_destroy(m); }
};
using GraphPtr = std::unique_ptr<hh_graph, GraphDeleter>;
using HouseholdPtr = std::unique_ptr<hh_household, HouseholdDeleter>;
using MapPtr = std::unique_ptr<hh_template_map, MapDeleter>;

// ---- formatting ----------------------------------------------------------

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string tag(const hh_params& p)
{
    return "a" + short_num(p.alpha) + "_b" + short_num(p.beta) + "_g" + short_num(p.gamma);
}

std::string describe(const hh_params& p)
{
    return "alpha=" + short_num(p.alpha) + " beta=" + short_num(p.beta) + " gamma=" + short_num(p.gamma);
}

class Csv {
public:
    Csv(const fs::path& path, const std::string& header) : out_(path, std::ios::binary)
    {
        if (!out_)
            throw CliError{exit_validation, "cannot write " + path.string()};
        out_ << header << '\n';
    }

    template <class... Ts>
    void row(const Ts&... cells)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double x) { return std::isfinite(x) ? fmt(x) : std::string(); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
    static std::string cell(T x)
        requires std::is_integral_v<T>
    {
        return std::to_string(x);
    }

    std::ofstream out_;
};

void write_json(const fs::path& path, const json& j)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw CliError{exit_validation, "cannot write " + path.string()};
    f << j.dump(2) << '\n';
}

// ---- numerics ------------------------------------------------------------

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::abs(a[i] - b[i]);
    return s / 2;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Runs f(i) for i in [0, count) on a small thread pool; results go to
// per-index slots so the outcome does not depend on scheduling.
template <class F>
void parallel_for(std::size_t count, F&& f)
{
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        f(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// ---- configuration -------------------------------------------------------

struct TemplateSpec {
    hh_template_kind kind = HH_TEMPLATE_CLIQUE;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

struct Config {
    std::uint64_t seed = 42;
    std::size_t n = 100;
    std::string degree_source = "poisson";
    double lambda = 4.0;
    std::vector<std::uint32_t> degree_list;
    std::string degree_file;
    std::size_t max_retries = 0;
    std::string household_edges;
    std::string household_communities;

    hh_template_kind default_template = HH_TEMPLATE_CLIQUE;
    std::map<std::size_t, TemplateSpec> by_degree;

    std::vector<hh_params> params{{1, 10, 1}, {1, 0.1, 1}, {2, 1, 1}};

    std::uint64_t steps = 1'000'000;
    std::uint64_t trajectory = 0;
    std::optional<std::pair<std::uint32_t, std::uint32_t>> start;

    hh_solve_method method = HH_SOLVE_DIRECT;
    double oracle_tol = 1e-12;
    std::optional<std::array<std::size_t, 3>> asym_triangle;

    std::vector<double> sojourn_alpha{0.5, 1, 10};
    std::vector<double> sojourn_beta{0.1, 1, 10};
    std::vector<double> sojourn_gamma{1};
    std::vector<hh_template_kind> sojourn_templates{HH_TEMPLATE_CLIQUE, HH_TEMPLATE_RING};
    std::vector<std::size_t> sojourn_k{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 13};
    std::size_t mc_samples = 100000;

    std::vector<double> figure_alpha{0.5, 1, 10};
    std::vector<double> figure_beta{0.1, 10};
    double figure_gamma = 1;
    double alpha_inf = 1e6;
    double gamma_inf = 1e6;
    std::vector<double> limit_beta{0.1, 10};

    std::optional<double> tol;
    std::string out_dir = "hhwalk_out";
    bool default_figure_grid = true;
};

using Keys = std::set<std::string>;

void allow_keys(const json& j, const std::string& where, const Keys& allowed)
{
    if (!j.is_object())
        config_error(where + " must be an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            config_error("unknown key '" + key + "' in " + where);
}

double positive_or_zero(const json& j, const std::string& where)
{
    if (!j.is_number())
        config_error(where + " must be a number");
    const double x = j.get<double>();
    if (!(x >= 0) || !std::isfinite(x))
        config_error(where + " must be a finite non-negative number");
    return x;
}

std::uint64_t count(const json& j, const std::string& where)
{
    if (j.is_number_unsigned())
        return j.get<std::uint64_t>();
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (x >= 0 && x == std::floor(x) && x < 1.8e19)
            return static_cast<std::uint64_t>(x);
    }
    config_error(where + " must be a non-negative integer");
}

std::vector<double> number_list(const json& j, const std::string& where)
{
    if (!j.is_array() || j.empty())
        config_error(where + " must be a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(positive_or_zero(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

hh_template_kind template_kind(const json& j, const std::string& where)
{
    if (j == "clique")
        return HH_TEMPLATE_CLIQUE;
    if (j == "ring")
        return HH_TEMPLATE_RING;
    config_error(where + " must be \"clique\" or \"ring\"");
}

hh_params parse_params(const json& j, const std::string& where)
{
    allow_keys(j, where, {"alpha", "beta", "gamma"});
    for (const char* k : {"alpha", "beta", "gamma"})
        if (!j.contains(k))
            config_error(where + " is missing '" + k + "'");
    return {positive_or_zero(j["alpha"], where + ".alpha"), positive_or_zero(j["beta"], where + ".beta"),
            positive_or_zero(j["gamma"], where + ".gamma")};
}

void require_file(const std::string& path, const std::string& where)
{
    if (!fs::is_regular_file(path))
        config_error(where + ": file '" + path + "' does not exist");
}

Config parse_config(const json& j)
{
    Config c;
    allow_keys(j, "config", {"seed", "universe", "household", "templates", "params", "walk", "oracle", "sojourn",
                             "figures", "tol", "out_dir"});
    if (j.contains("seed"))
        c.seed = count(j["seed"], "seed");
    if (j.contains("universe")) {
        const auto& u = j["universe"];
        allow_keys(u, "universe", {"n", "degrees", "max_retries"});
        if (u.contains("n"))
            c.n = count(u["n"], "universe.n");
        if (u.contains("max_retries"))
            c.max_retries = count(u["max_retries"], "universe.max_retries");
        if (u.contains("degrees")) {
            const auto& d = u["degrees"];
            allow_keys(d, "universe.degrees", {"poisson", "list", "file"});
            if (d.size() != 1)
                config_error("universe.degrees needs exactly one of poisson, list, file");
            if (d.contains("poisson")) {
                c.lambda = positive_or_zero(d["poisson"], "universe.degrees.poisson");
                if (c.lambda <= 0)
                    config_error("universe.degrees.poisson must be positive");
            } else if (d.contains("list")) {
                c.degree_source = "list";
                if (!d["list"].is_array() || d["list"].size() < 2)
                    config_error("universe.degrees.list must hold at least two degrees");
                for (const auto& x : d["list"])
                    c.degree_list.push_back(static_cast<std::uint32_t>(count(x, "universe.degrees.list")));
                c.n = c.degree_list.size();
            } else {
                c.degree_source = "file";
                if (!d["file"].is_string())
                    config_error("universe.degrees.file must be a path");
                c.degree_file = d["file"].get<std::string>();
                require_file(c.degree_file, "universe.degrees.file");
            }
        }
    }
    if (c.n < 2)
        config_error("universe.n must be at least 2");
    if (j.contains("household")) {
        const auto& h = j["household"];
        allow_keys(h, "household", {"edges", "communities"});
        if (!h.contains("edges") || !h.contains("communities") || !h["edges"].is_string() ||
            !h["communities"].is_string())
            config_error("household needs 'edges' and 'communities' paths");
        c.household_edges = h["edges"].get<std::string>();
        c.household_communities = h["communities"].get<std::string>();
        require_file(c.household_edges, "household.edges");
        require_file(c.household_communities, "household.communities");
    }
    if (j.contains("templates")) {
        const auto& t = j["templates"];
        allow_keys(t, "templates", {"default", "by_degree"});
        if (t.contains("default"))
            c.default_template = template_kind(t["default"], "templates.default");
        if (t.contains("by_degree") && !t["by_degree"].is_object())
            config_error("templates.by_degree must be an object");
    }
    if (j.contains("templates") && j["templates"].contains("by_degree")) {
        for (const auto& [key, value] : j["templates"]["by_degree"].items()) {
            const std::string where = "templates.by_degree." + key;
            std::size_t degree = 0;
            try {
                std::size_t used = 0;
                degree = std::stoul(key, &used);
                if (used != key.size())
                    throw std::invalid_argument(key);
            } catch (const std::exception&) {
                config_error(where + ": key must be a degree");
            }
            TemplateSpec spec;
            if (value.is_string()) {
                spec.kind = template_kind(value, where);
            } else {
                allow_keys(value, where, {"custom"});
                spec.kind = HH_TEMPLATE_CUSTOM;
                if (!value["custom"].is_array())
                    config_error(where + ".custom must be an array of [u, v] pairs");
                for (const auto& e : value["custom"]) {
                    if (!e.is_array() || e.size() != 2)
                        config_error(where + ".custom must be an array of [u, v] pairs");
                    spec.edges.emplace_back(static_cast<std::uint32_t>(count(e[0], where)),
                                            static_cast<std::uint32_t>(count(e[1], where)));
                }
            }
            c.by_degree[degree] = std::move(spec);
        }
    }
    if (j.contains("params")) {
        const auto& p = j["params"];
        if (!p.is_array() || p.empty())
            config_error("params must be a non-empty array");
        c.params.clear();
        for (std::size_t i = 0; i < p.size(); ++i)
            c.params.push_back(parse_params(p[i], "params[" + std::to_string(i) + "]"));
    }
    if (j.contains("walk")) {
        const auto& w = j["walk"];
        allow_keys(w, "walk", {"steps", "trajectory", "start"});
        if (w.contains("steps"))
            c.steps = count(w["steps"], "walk.steps");
        if (w.contains("trajectory"))
            c.trajectory = count(w["trajectory"], "walk.trajectory");
        if (w.contains("start") && !w["start"].is_null()) {
            if (!w["start"].is_array() || w["start"].size() != 2)
                config_error("walk.start must be [prev, cur] or null");
            c.start = {static_cast<std::uint32_t>(count(w["start"][0], "walk.start")),
                       static_cast<std::uint32_t>(count(w["start"][1], "walk.start"))};
        }
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        allow_keys(o, "oracle", {"method", "tol", "asym_triangle"});
        if (o.contains("method")) {
            if (o["method"] == "direct")
                c.method = HH_SOLVE_DIRECT;
            else if (o["method"] == "power")
                c.method = HH_SOLVE_POWER;
            else
                config_error("oracle.method must be \"direct\" or \"power\"");
        }
        if (o.contains("tol"))
            c.oracle_tol = positive_or_zero(o["tol"], "oracle.tol");
        if (o.contains("asym_triangle")) {
            const auto& a = o["asym_triangle"];
            if (!a.is_array() || a.size() != 3)
                config_error("oracle.asym_triangle must be [n, p, m]");
            c.asym_triangle = std::array<std::size_t, 3>{count(a[0], "oracle.asym_triangle"),
                                                         count(a[1], "oracle.asym_triangle"),
                                                         count(a[2], "oracle.asym_triangle")};
        }
    }
    if (j.contains("sojourn")) {
        const auto& s = j["sojourn"];
        allow_keys(s, "sojourn", {"alpha", "beta", "gamma", "templates", "k", "mc_samples"});
        if (s.contains("alpha"))
            c.sojourn_alpha = number_list(s["alpha"], "sojourn.alpha");
        if (s.contains("beta"))
            c.sojourn_beta = number_list(s["beta"], "sojourn.beta");
        if (s.contains("gamma"))
            c.sojourn_gamma = number_list(s["gamma"], "sojourn.gamma");
        if (s.contains("templates")) {
            if (!s["templates"].is_array() || s["templates"].empty())
                config_error("sojourn.templates must be a non-empty array");
            c.sojourn_templates.clear();
            for (const auto& t : s["templates"])
                c.sojourn_templates.push_back(template_kind(t, "sojourn.templates"));
        }
        if (s.contains("k")) {
            if (!s["k"].is_array() || s["k"].empty())
                config_error("sojourn.k must be a non-empty array");
            c.sojourn_k.clear();
            for (const auto& k : s["k"]) {
                c.sojourn_k.push_back(count(k, "sojourn.k"));
                if (c.sojourn_k.back() == 0)
                    config_error("sojourn.k entries must be positive");
            }
        }
        if (s.contains("mc_samples"))
            c.mc_samples = count(s["mc_samples"], "sojourn.mc_samples");
    }
    if (j.contains("figures")) {
        const auto& f = j["figures"];
        allow_keys(f, "figures", {"alpha", "beta", "gamma", "alpha_inf", "gamma_inf", "limit_beta"});
        if (f.contains("alpha")) {
            c.figure_alpha = number_list(f["alpha"], "figures.alpha");
            c.default_figure_grid = false;
        }
        if (f.contains("beta")) {
            c.figure_beta = number_list(f["beta"], "figures.beta");
            c.default_figure_grid = false;
        }
        if (f.contains("gamma"))
            c.figure_gamma = positive_or_zero(f["gamma"], "figures.gamma");
        if (f.contains("alpha_inf"))
            c.alpha_inf = positive_or_zero(f["alpha_inf"], "figures.alpha_inf");
        if (f.contains("gamma_inf"))
            c.gamma_inf = positive_or_zero(f["gamma_inf"], "figures.gamma_inf");
        if (f.contains("limit_beta"))
            c.limit_beta = number_list(f["limit_beta"], "figures.limit_beta");
    }
    if (j.contains("tol"))
        c.tol = positive_or_zero(j["tol"], "tol");
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string())
            config_error("out_dir must be a path");
        c.out_dir = j["out_dir"].get<std::string>();
    }
    return c;
}

Config load_config(const std::string& path)
{
    if (path.empty())
        return Config{};
    std::ifstream f(path);
    if (!f)
        throw CliError{exit_validation, "config: cannot open " + path};
    json j;
    try {
        j = json::parse(f, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw CliError{exit_validation, "config: " + path + ": " + e.what()};
    }
    // Relative paths inside the config resolve against its directory.
    const fs::path base = fs::path(path).parent_path();
    auto rebase = [&](json& node, const char* key) {
        if (node.is_object() && node.contains(key) && node[key].is_string()) {
            const fs::path p(node[key].get<std::string>());
            if (p.is_relative())
                node[key] = (base / p).string();
        }
    };
    if (j.is_object()) {
        if (j.contains("universe") && j["universe"].is_object() && j["universe"].contains("degrees"))
            rebase(j["universe"]["degrees"], "file");
        if (j.contains("household")) {
            rebase(j["household"], "edges");
            rebase(j["household"], "communities");
        }
    }
    return parse_config(j);
}

// ---- model construction --------------------------------------------------

struct Model {
    HouseholdPtr household;
    const hh_graph* graph = nullptr;
    const hh_graph* universe = nullptr;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t communities = 0;
    std::vector<std::uint32_t> community_of;
    std::vector<std::string> template_names; // per community
    std::vector<std::uint32_t> degree;       // household degree per node
    std::vector<std::uint32_t> universe_degree;
};

std::vector<std::uint32_t> read_degree_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw CliError{exit_validation, "cannot open degree file " + path};
    std::vector<std::uint32_t> out;
    std::string token;
    while (f >> token) {
        if (token.front() == '#') {
            std::getline(f, token);
            continue;
        }
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(token, &used);
            if (used != token.size())
                throw std::invalid_argument(token);
            out.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::exception&) {
            throw CliError{exit_validation, "degree file " + path + ": bad entry '" + token + "'"};
        }
    }
    if (out.size() < 2)
        throw CliError{exit_validation, "degree file " + path + " holds fewer than two degrees"};
    return out;
}

std::vector<std::uint32_t> universe_degrees(const Config& c)
{
    if (c.degree_source == "list")
        return c.degree_list;
    if (c.degree_source == "file")
        return read_degree_file(c.degree_file);
    std::vector<std::uint32_t> d(c.n);
    check(hh_sample_poisson_degrees(c.n, c.lambda, c.seed, 0, d.data()), "sampling degrees");
    return d;
}

MapPtr make_template_map(const Config& c)
{
    hh_template_map* raw = nullptr;
    check(hh_template_map_create(c.default_template, &raw), "template map");
    MapPtr map(raw);
    for (const auto& [degree, spec] : c.by_degree) {
        if (spec.kind != HH_TEMPLATE_CUSTOM) {
            check(hh_template_map_set(map.get(), degree, spec.kind), "template map");
            continue;
        }
        std::vector<std::uint32_t> u, v;
        for (const auto& [a, b] : spec.edges) {
            u.push_back(a);
            v.push_back(b);
        }
        check(hh_template_map_set_custom(map.get(), degree, u.data(), v.data(), u.size()),
              ("custom template for degree " + std::to_string(degree)).c_str());
    }
    return map;
}

Model finish(HouseholdPtr h)
{
    Model m;
    m.household = std::move(h);
    check(hh_household_graph(m.household.get(), &m.graph), "household graph");
    check(hh_household_universe(m.household.get(), &m.universe), "universe graph");
    check(hh_graph_node_count(m.graph, &m.nodes), "node count");
    check(hh_graph_edge_count(m.graph, &m.edges), "edge count");
    check(hh_household_community_count(m.household.get(), &m.communities), "community count");
    m.community_of.resize(m.nodes);
    check(hh_household_community_of(m.household.get(), m.community_of.data(), m.nodes), "community map");
    for (std::uint32_t c = 0; c < m.communities; ++c) {
        std::vector<char> name(64);
        hh_status s = hh_household_community_template(m.household.get(), c, name.data(), name.size());
        if (s == HH_ERR_BUFFER_TOO_SMALL) {
            name.resize(4096);
            s = hh_household_community_template(m.household.get(), c, name.data(), name.size());
        }
        check(s, "community template");
        m.template_names.emplace_back(name.data());
    }
    for (std::uint32_t v = 0; v < m.nodes; ++v) {
        std::size_t d = 0;
        check(hh_graph_degree(m.graph, v, &d), "degree");
        m.degree.push_back(static_cast<std::uint32_t>(d));
    }
    for (std::uint32_t c = 0; c < m.communities; ++c) {
        std::size_t d = 0;
        check(hh_graph_degree(m.universe, c, &d), "degree");
        m.universe_degree.push_back(static_cast<std::uint32_t>(d));
    }
    return m;
}

Model build_model(const Config& c)
{
    if (!c.household_edges.empty()) {
        hh_household* raw = nullptr;
        check(hh_household_load(c.household_edges.c_str(), c.household_communities.c_str(), &raw),
              "loading household");
        return finish(HouseholdPtr(raw));
    }
    const auto degrees = universe_degrees(c);
    hh_graph* raw_u = nullptr;
    check(hh_configuration_model(degrees.data(), degrees.size(), c.seed, 1, c.max_retries, &raw_u),
          "configuration model");
    GraphPtr universe(raw_u);
    auto map = make_template_map(c);
    hh_household* raw = nullptr;
    check(hh_household_expand(universe.get(), map.get(), &raw), "household expansion");
    return finish(HouseholdPtr(raw));
}

std::vector<std::string> violations(const Model& m)
{
    std::size_t n = 0;
    check(hh_household_validate(m.household.get(), &n, nullptr, 0), "validation");
    if (n == 0)
        return {};
    std::vector<char> buf(1 << 16);
    hh_status s;
    while ((s = hh_household_validate(m.household.get(), &n, buf.data(), buf.size())) == HH_ERR_BUFFER_TOO_SMALL)
        buf.resize(buf.size() * 4);
    check(s, "validation");
    std::vector<std::string> out;
    std::istringstream in(buf.data());
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

const std::string& template_of(const Model& m, std::uint32_t v) { return m.template_names[m.community_of[v]]; }

std::vector<double> analytic(const Model& m, const hh_params& p)
{
    std::vector<double> pi(m.nodes);
    check(hh_stationary_household(m.household.get(), p, pi.data()), ("analytic stationary at " + describe(p)).c_str());
    return pi;
}

std::vector<double> srw(const Model& m)
{
    std::vector<double> pi(m.nodes);
    check(hh_stationary_srw(m.graph, pi.data()), "simple random walk");
    return pi;
}

double default_lambda(const Config& c, const Model& m)
{
    if (c.degree_source == "poisson" && c.household_edges.empty())
        return c.lambda;
    return static_cast<double>(m.nodes) / static_cast<double>(m.communities);
}

// ---- shared option state -------------------------------------------------

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<double> tol;
    std::optional<std::uint64_t> steps;
};

Config resolve(const Options& o)
{
    Config c = load_config(o.config);
    if (const char* env = std::getenv("HHWALK_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            c.seed = std::stoull(env, &used);
            if (used != std::string(env).size())
                throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw CliError{exit_validation, std::string("HHWALK_SEED is not an integer: ") + env};
        }
    }
    if (o.seed)
        c.seed = *o.seed;
    if (o.out_dir)
        c.out_dir = *o.out_dir;
    if (o.tol)
        c.tol = *o.tol;
    if (o.steps)
        c.steps = *o.steps;
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec)
        throw CliError{exit_validation, "cannot create output directory " + c.out_dir + ": " + ec.message()};
    return c;
}

// ---- verbs ---------------------------------------------------------------

int cmd_generate(const Config& c)
{
    const Model m = build_model(c);
    const fs::path out(c.out_dir);
    check(hh_graph_save(m.universe, (out / "universe.edges").string().c_str()), "writing universe");
    check(hh_household_save(m.household.get(), (out / "household.edges").string().c_str(),
                            (out / "communities.txt").string().c_str()),
          "writing household");

    const auto& d = m.universe_degree;
    const std::uint64_t degree_sum = std::accumulate(d.begin(), d.end(), std::uint64_t{0});
    std::map<std::string, std::uint32_t> histogram;
    for (std::uint32_t x : d)
        ++histogram[std::to_string(x)];
    std::map<std::string, std::size_t> templates;
    for (const auto& name : m.template_names)
        ++templates[name];
    int u_connected = 0, h_connected = 0, triangle = 0;
    check(hh_graph_is_connected(m.universe, &u_connected), "connectivity");
    check(hh_graph_is_connected(m.graph, &h_connected), "connectivity");
    check(hh_graph_has_triangle(m.graph, &triangle), "triangle check");
    std::size_t universe_edges = 0;
    check(hh_graph_edge_count(m.universe, &universe_edges), "edge count");
    const auto problems = violations(m);

    json meta;
    meta["seed"] = c.seed;
    meta["rng"] = hh_rng_algorithm();
    meta["library_version"] = hh_version();
    meta["degree_source"] = c.household_edges.empty() ? c.degree_source : "household file";
    if (c.degree_source == "poisson" && c.household_edges.empty())
        meta["lambda"] = c.lambda;
    meta["degrees"] = {{"n", d.size()},
                       {"min", *std::min_element(d.begin(), d.end())},
                       {"max", *std::max_element(d.begin(), d.end())},
                       {"mean", static_cast<double>(degree_sum) / static_cast<double>(d.size())},
                       {"sum", degree_sum},
                       {"sum_even", degree_sum % 2 == 0},
                       {"histogram", histogram}};
    meta["universe"] = {{"nodes", m.communities}, {"edges", universe_edges}, {"connected", u_connected == 1}};
    meta["household"] = {{"nodes", m.nodes},
                         {"edges", m.edges},
                         {"connected", h_connected == 1},
                         {"has_triangle", triangle == 1},
                         {"templates", templates}};
    meta["violations"] = problems;
    meta["files"] = {"universe.edges", "household.edges", "communities.txt"};
    write_json(out / "metadata.json", meta);

    std::cout << "generated household: " << m.nodes << " nodes, " << m.edges << " edges, " << m.communities
              << " communities (universe " << universe_edges << " edges), seed " << c.seed << "\n";
    for (const auto& p : problems)
        std::cerr << "violation: " << p << "\n";
    return problems.empty() ? exit_ok : exit_validation;
}

int cmd_walk(const Config& c)
{
    const Model m = build_model(c);
    const hh_params p = c.params.front();
    std::uint32_t prev = HH_RANDOM_START, cur = HH_RANDOM_START;
    if (c.start) {
        prev = c.start->first;
        cur = c.start->second;
    }
    std::vector<std::uint64_t> visits(m.nodes), community(m.communities);
    check(hh_walk_run(m.household.get(), p, c.steps, c.seed, 0, prev, cur, visits.data(), community.data()), "walk");

    const fs::path out(c.out_dir);
    std::vector<double> freq(m.nodes);
    {
        Csv csv(out / "walk_occupancy.csv", "node,community,visits,frequency");
        for (std::uint32_t v = 0; v < m.nodes; ++v) {
            freq[v] = static_cast<double>(visits[v]) / static_cast<double>(c.steps);
            csv.row(v, m.community_of[v], visits[v], freq[v]);
        }
    }
    if (c.trajectory > 0) {
        const std::uint64_t len = std::min<std::uint64_t>(c.trajectory, c.steps);
        std::vector<std::uint32_t> tp(len), tc(len);
        check(hh_walk_trajectory(m.graph, p, len, c.seed, 0, prev, cur, tp.data(), tc.data()), "trajectory");
        Csv csv(out / "walk_trajectory.csv", "step,prev,cur");
        for (std::uint64_t i = 0; i < len; ++i)
            csv.row(i + 1, tp[i], tc[i]);
    }
    double tv = std::nan("");
    if (p.alpha > 0 && p.beta > 0 && p.gamma > 0)
        tv = total_variation(freq, analytic(m, p));
    std::cout << describe(p) << " steps=" << c.steps << " tv_vs_analytic=" << short_num(tv) << "\n";
    return exit_ok;
}

int cmd_oracle(const Config& c)
{
    const Model m = build_model(c);
    const double tol = c.tol.value_or(1e-10);
    const fs::path out(c.out_dir);
    std::vector<std::uint32_t> src(2 * m.edges), dst(2 * m.edges);
    check(hh_graph_directed_edges(m.graph, src.data(), dst.data(), src.size()), "directed edges");

    struct Cell {
        std::vector<double> edges, nodes;
        double residual = 0;
    };
    std::vector<Cell> cells(c.params.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        Cell& cell = cells[i];
        cell.edges.resize(2 * m.edges);
        cell.nodes.resize(m.nodes);
        check(hh_oracle_solve(m.graph, c.params[i], c.method, c.oracle_tol, cell.edges.data(), cell.nodes.data(),
                              nullptr),
              ("oracle solve at " + describe(c.params[i])).c_str());
        check(hh_balance_residual(m.graph, c.params[i], cell.edges.data(), &cell.residual), "balance residual");
    });

    int status = exit_ok;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& p = c.params[i];
        {
            Csv csv(out / ("oracle_edges_" + tag(p) + ".csv"), "src,dst,pi_edge");
            for (std::size_t e = 0; e < src.size(); ++e)
                csv.row(src[e], dst[e], cells[i].edges[e]);
        }
        {
            Csv csv(out / ("oracle_nodes_" + tag(p) + ".csv"), "node,degree,community_template,pi_oracle");
            for (std::uint32_t v = 0; v < m.nodes; ++v)
                csv.row(v, m.degree[v], template_of(m, v), cells[i].nodes[v]);
        }
        const bool ok = cells[i].residual <= std::max(tol, 1e-9);
        std::cout << describe(p) << " residual=" << short_num(cells[i].residual) << (ok ? " ok" : " FAIL") << "\n";
        if (!ok)
            status = exit_tolerance;
    }

    if (c.asym_triangle) {
        const auto [n, pp, mm] = *c.asym_triangle;
        hh_graph* raw = nullptr;
        check(hh_asym_triangle_graph(n, pp, mm, &raw), "asymmetric triangle");
        GraphPtr g(raw);
        std::size_t edges = 0;
        check(hh_graph_edge_count(g.get(), &edges), "edge count");
        std::vector<std::uint32_t> s(2 * edges), t(2 * edges);
        check(hh_graph_directed_edges(g.get(), s.data(), t.data(), s.size()), "directed edges");
        for (const auto& p : c.params) {
            std::vector<double> closed(2 * edges), solved(2 * edges);
            check(hh_asym_triangle_closed_form(n, pp, mm, p, closed.data()), "closed form");
            check(hh_oracle_solve(g.get(), p, c.method, c.oracle_tol, solved.data(), nullptr, nullptr),
                  "oracle solve");
            Csv csv(out / ("asym_triangle_" + tag(p) + ".csv"), "src,dst,pi_edge,pi_closed_form");
            for (std::size_t e = 0; e < s.size(); ++e)
                csv.row(s[e], t[e], solved[e], closed[e]);
            const double diff = max_abs_diff(closed, solved);
            const bool ok = diff <= tol;
            std::cout << "asym triangle (" << n << "," << pp << "," << mm << ") " << describe(p)
                      << " max_abs_diff=" << short_num(diff) << (ok ? " ok" : " FAIL") << "\n";
            if (!ok)
                status = exit_tolerance;
        }
    }
    return status;
}

int cmd_compare(const Config& c)
{
    const Model m = build_model(c);
    const double tol = c.tol.value_or(1e-8);
    const fs::path out(c.out_dir);
    const auto pi_srw = srw(m);

    struct Cell {
        std::vector<double> analytic, oracle, empirical;
    };
    std::vector<Cell> cells(c.params.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto& p = c.params[i];
        Cell& cell = cells[i];
        cell.analytic = analytic(m, p);
        cell.oracle.resize(m.nodes);
        check(hh_oracle_solve(m.graph, p, c.method, c.oracle_tol, nullptr, cell.oracle.data(), nullptr),
              ("oracle solve at " + describe(p)).c_str());
        std::vector<std::uint64_t> visits(m.nodes);
        check(hh_walk_run(m.household.get(), p, c.steps, c.seed, 1000 + i, HH_RANDOM_START, HH_RANDOM_START,
                          visits.data(), nullptr),
              "walk");
        for (std::uint32_t v = 0; v < m.nodes; ++v)
            cell.empirical.push_back(static_cast<double>(visits[v]) / static_cast<double>(c.steps));
    });

    int status = exit_ok;
    json summary = json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& p = c.params[i];
        const Cell& cell = cells[i];
        {
            Csv csv(out / ("compare_" + tag(p) + ".csv"),
                    "node,degree,template,pi_analytic,pi_oracle,pi_empirical,pi_srw");
            for (std::uint32_t v = 0; v < m.nodes; ++v)
                csv.row(v, m.degree[v], template_of(m, v), cell.analytic[v], cell.oracle[v], cell.empirical[v],
                        pi_srw[v]);
        }
        {
            Csv csv(out / ("analytic_" + tag(p) + ".csv"), "node,degree,community_template,pi_analytic");
            for (std::uint32_t v = 0; v < m.nodes; ++v)
                csv.row(v, m.degree[v], template_of(m, v), cell.analytic[v]);
        }
        const double diff = max_abs_diff(cell.analytic, cell.oracle);
        const double tv = total_variation(cell.empirical, cell.oracle);
        const bool sums_ok = std::abs(sum(cell.analytic) - 1) <= 1e-9 && std::abs(sum(cell.oracle) - 1) <= 1e-9 &&
                             std::abs(sum(pi_srw) - 1) <= 1e-9 && std::abs(sum(cell.empirical) - 1) <= 1e-2;
        const bool ok = diff <= tol && sums_ok;
        if (!ok)
            status = exit_tolerance;
        std::cout << describe(p) << " max_abs_diff_analytic_oracle=" << short_num(diff)
                  << " tv_empirical_oracle=" << short_num(tv) << " steps=" << c.steps << (ok ? " ok" : " FAIL")
                  << "\n";
        summary.push_back({{"alpha", p.alpha},
                           {"beta", p.beta},
                           {"gamma", p.gamma},
                           {"max_abs_diff_analytic_oracle", diff},
                           {"tv_empirical_oracle", tv},
                           {"column_sums_ok", sums_ok},
                           {"ok", ok}});
    }
    write_json(out / "compare_summary.json",
               {{"seed", c.seed}, {"steps", c.steps}, {"tolerance", tol}, {"cells", summary}});
    return status;
}

std::string template_label(hh_template_kind kind, std::size_t k)
{
    return (kind == HH_TEMPLATE_RING && k >= 6 ? "R" : "C") + std::to_string(k);
}

double closed_form(hh_template_kind kind, std::size_t k, const hh_params& p)
{
    double e = 0;
    if (kind == HH_TEMPLATE_CLIQUE || k <= 5)
        check(hh_expected_sojourn_clique(k, p, &e), "clique closed form");
    else if (k == 6)
        check(hh_expected_sojourn_ring6(p, &e), "ring closed form");
    else
        check(hh_expected_sojourn_ring(k, p, &e), "ring closed form");
    return e;
}

int cmd_sojourn(const Config& c)
{
    struct Row {
        hh_params p;
        hh_template_kind kind;
        std::size_t k;
        double closed = 0, generic = 0, mc = std::nan(""), se = std::nan("");
    };
    std::vector<Row> rows;
    for (double a : c.sojourn_alpha)
        for (double b : c.sojourn_beta)
            for (double g : c.sojourn_gamma)
                for (auto kind : c.sojourn_templates)
                    for (std::size_t k : c.sojourn_k)
                        rows.push_back({{a, b, g}, kind, k});
    const double tol = c.tol.value_or(1e-10);

    parallel_for(rows.size(), [&](std::size_t i) {
        Row& r = rows[i];
        r.closed = closed_form(r.kind, r.k, r.p);
        check(hh_expected_sojourn_generic(r.kind, r.k, r.p, &r.generic), "generic sojourn solve");
        if (c.mc_samples > 0 && r.p.alpha > 0 && r.p.beta > 0 && r.p.gamma > 0)
            check(hh_sojourn_sample(r.kind, r.k, r.p, c.mc_samples, c.seed, i, &r.mc, &r.se), "sojourn sampling");
    });

    int status = exit_ok;
    double worst = 0;
    std::size_t outside = 0;
    Csv csv(fs::path(c.out_dir) / "sojourn_sweep.csv",
            "alpha,beta,gamma,template,k,expected_tau,E_closed_form,E_generic,E_montecarlo,mc_stderr");
    for (const Row& r : rows) {
        csv.row(r.p.alpha, r.p.beta, r.p.gamma, template_label(r.kind, r.k), r.k, r.closed, r.closed, r.generic, r.mc,
                r.se);
        const double diff = std::abs(r.closed - r.generic);
        worst = std::max(worst, diff);
        if (diff > tol * std::max(1.0, std::abs(r.closed)))
            status = exit_tolerance;
        if (std::isfinite(r.mc) && std::abs(r.mc - r.closed) > 4 * r.se)
            ++outside;
    }
    std::cout << rows.size() << " rows, max |closed - generic| = " << short_num(worst) << ", " << outside
              << " Monte Carlo means outside 4 standard errors" << (status == exit_ok ? " ok" : " FAIL") << "\n";
    return status;
}

// Per-template group of nodes for figure panels.
struct Group {
    std::string name;
    std::size_t size = 0;
    std::uint32_t degree = 0;
    std::vector<std::uint32_t> nodes;
};

std::vector<Group> group_nodes(const Model& m)
{
    std::map<std::pair<std::size_t, std::string>, Group> by;
    for (std::uint32_t v = 0; v < m.nodes; ++v) {
        const auto& name = template_of(m, v);
        const std::size_t size = m.universe_degree[m.community_of[v]];
        Group& g = by[{size, name}];
        g.name = name;
        g.size = size;
        g.degree = m.degree[v];
        g.nodes.push_back(v);
    }
    std::vector<Group> out;
    for (auto& [key, g] : by)
        out.push_back(std::move(g));
    return out;
}

double group_mean(const Group& g, const std::vector<double>& pi)
{
    double s = 0;
    for (auto v : g.nodes)
        s += pi[v];
    return s / static_cast<double>(g.nodes.size());
}

struct Panel {
    std::string name;
    std::string title;
    std::string kind; // grid, alpha_inf, gamma_inf, alpha0
    hh_params p{};
    std::vector<double> pi;
    std::vector<double> limit; // per node, Poisson-limit formula (limit panels only)
};

// Stationary law at alpha = 0, gamma = 1 from the sojourn formulas; only
// clique and ring templates have them.
std::vector<double> alpha_zero_assembly(const Model& m, double beta)
{
    std::vector<double> tau(m.communities);
    double norm = 0;
    for (std::uint32_t c = 0; c < m.communities; ++c) {
        const std::string& name = m.template_names[c];
        const std::size_t k = m.universe_degree[c];
        if (name.front() != 'C' && name.front() != 'R')
            return std::vector<double>(m.nodes, std::nan(""));
        tau[c] = k == 1 ? 1.0 : closed_form(name.front() == 'R' ? HH_TEMPLATE_RING : HH_TEMPLATE_CLIQUE, k,
                                            {0, beta, 1});
        norm += static_cast<double>(k) * tau[c];
    }
    std::vector<double> pi(m.nodes);
    for (std::uint32_t v = 0; v < m.nodes; ++v)
        pi[v] = tau[m.community_of[v]] / norm;
    return pi;
}

std::vector<double> poisson_limit(const Model& m, hh_limit_case which, double lambda, double beta)
{
    std::vector<double> out(m.nodes);
    for (std::uint32_t v = 0; v < m.nodes; ++v) {
        const std::size_t l = m.universe_degree[m.community_of[v]];
        // The alpha = 0 expression assumes (l - 2) beta + 2 sojourn steps, which fails for l = 1.
        if (which == HH_LIMIT_ALPHA0_GAMMA1 && l < 2) {
            out[v] = std::nan("");
            continue;
        }
        check(hh_poisson_limit(which, lambda, m.communities, l, beta, &out[v]), "Poisson limit");
    }
    return out;
}

int cmd_figures(const Config& c)
{
    const Model m = build_model(c);
    const fs::path out(c.out_dir);
    const auto pi_srw = srw(m);
    const double lambda = default_lambda(c, m);
    const double uniform = 1.0 / static_cast<double>(m.nodes);
    const auto groups = group_nodes(m);

    std::vector<Panel> panels;
    for (double a : c.figure_alpha)
        for (double b : c.figure_beta) {
            const hh_params p{a, b, c.figure_gamma};
            panels.push_back({"figure_" + tag(p), describe(p), "grid", p, {}, {}});
        }
    panels.push_back({"limit_alpha_inf", "alpha -> inf (alpha = " + short_num(c.alpha_inf) + ", beta = 10)", "alpha_inf",
                      {c.alpha_inf, 10, c.figure_gamma}, {}, {}});
    panels.push_back({"limit_gamma_inf", "gamma -> inf (gamma = " + short_num(c.gamma_inf) + ")", "gamma_inf",
                      {1, 1, c.gamma_inf}, {}, {}});
    for (double b : c.limit_beta)
        panels.push_back({"limit_alpha0_b" + short_num(b), "alpha = 0, gamma = 1, beta = " + short_num(b), "alpha0",
                          {0, b, 1}, {}, {}});

    parallel_for(panels.size(), [&](std::size_t i) {
        Panel& panel = panels[i];
        if (panel.kind == "alpha0") {
            panel.pi = alpha_zero_assembly(m, panel.p.beta);
            panel.limit = poisson_limit(m, HH_LIMIT_ALPHA0_GAMMA1, lambda, panel.p.beta);
            return;
        }
        panel.pi = analytic(m, panel.p);
        if (panel.kind == "alpha_inf")
            panel.limit = poisson_limit(m, HH_LIMIT_ALPHA_INF, lambda, 1);
        else if (panel.kind == "gamma_inf")
            panel.limit = poisson_limit(m, HH_LIMIT_GAMMA_INF, lambda, 1);
    });

    json checks = json::array();
    int status = exit_ok;
    for (const Panel& panel : panels) {
        Csv csv(out / (panel.name + ".csv"),
                "template,community_size,degree,nodes,pi_node2vec,pi_srw,pi_uniform,pi_poisson_limit,mass_node2vec,"
                "mass_srw");
        svg::BarChart chart;
        chart.title = panel.title;
        chart.x_label = "community template (household degree)";
        chart.y_label = "stationary probability per node";
        chart.series = {{"node2vec", "#1f77b4", {}}, {"simple random walk", "#aaaaaa", {}}};
        if (!panel.limit.empty())
            chart.series.push_back({"Poisson limit formula", "#d62728", {}});
        for (const Group& g : groups) {
            const double pi = group_mean(g, panel.pi);
            const double s = group_mean(g, pi_srw);
            const double lim = panel.limit.empty() ? std::nan("") : group_mean(g, panel.limit);
            const double k = static_cast<double>(g.nodes.size());
            csv.row(g.name, g.size, g.degree, g.nodes.size(), pi, s, uniform, lim, pi * k, s * k);
            chart.categories.push_back(g.name + " (" + std::to_string(g.degree) + ")");
            chart.series[0].values.push_back(pi);
            chart.series[1].values.push_back(s);
            if (!panel.limit.empty())
                chart.series[2].values.push_back(lim);
        }
        svg::write((out / (panel.name + ".svg")).string(), chart);

        json entry{{"panel", panel.name}, {"alpha", panel.p.alpha}, {"beta", panel.p.beta}, {"gamma", panel.p.gamma}};
        if (panel.kind != "alpha0")
            entry["column_sum"] = sum(panel.pi);
        if (panel.kind == "grid" && panel.p.beta == panel.p.gamma) {
            const double diff = max_abs_diff(panel.pi, pi_srw);
            entry["max_abs_diff_srw"] = diff;
            entry["ok"] = diff < 1e-10;
            if (diff >= 1e-10)
                status = exit_tolerance;
        }
        if (panel.kind == "alpha_inf") {
            const double diff = max_abs_diff(panel.pi, pi_srw);
            entry["max_abs_diff_srw"] = diff;
            entry["ok"] = diff <= 1e-3;
            if (diff > 1e-3)
                status = exit_tolerance;
        }
        if (panel.kind == "gamma_inf") {
            double diff = 0;
            // Clique communities only.
            for (std::uint32_t v = 0; v < m.nodes; ++v)
                if (m.universe_degree[m.community_of[v]] >= 2 && template_of(m, v).front() == 'C')
                    diff = std::max(diff, std::abs(panel.pi[v] - uniform));
            entry["max_abs_diff_uniform_cliques_size_ge_2"] = diff;
            entry["ok"] = diff <= 1e-3;
            if (diff > 1e-3)
                status = exit_tolerance;
        }
        checks.push_back(entry);
    }
    write_json(out / "figures_metadata.json",
               {{"seed", c.seed},
                {"lambda", lambda},
                {"universe_nodes", m.communities},
                {"household_nodes", m.nodes},
                {"grid_alpha", c.figure_alpha},
                {"grid_beta", c.figure_beta},
                {"grid_gamma", c.figure_gamma},
                {"grid_is_default_choice", c.default_figure_grid},
                {"note", "default alpha grid {0.5, 1, 10} is a representative choice; beta grid {0.1, 10}"},
                {"panels", checks}});
    std::cout << panels.size() << " panels written to " << c.out_dir << (status == exit_ok ? " ok" : " FAIL")
              << "\n";
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Household-model node2vec experiments"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&opts](CLI::App* sub) {
        sub->add_option("--config", opts.config, "JSON experiment config")->check(CLI::ExistingFile);
        sub->add_option_function<std::uint64_t>("--seed", [&opts](std::uint64_t s) { opts.seed = s; },
                                                "RNG seed (overrides HHWALK_SEED and the config)");
        sub->add_option_function<std::string>("--out-dir", [&opts](const std::string& d) { opts.out_dir = d; },
                                               "output directory");
        sub->add_option_function<double>("--tol", [&opts](double t) { opts.tol = t; }, "tolerance for checks");
        sub->add_option_function<std::uint64_t>("--steps", [&opts](std::uint64_t s) { opts.steps = s; },
                                                "walk length");
    };

    struct Verb {
        const char* name;
        const char* help;
        int (*run)(const Config&);
    };
    const Verb verbs[] = {
        {"generate", "sample a universe graph and expand it into a household model", cmd_generate},
        {"compare", "analytic, oracle, empirical and simple-walk stationary distributions", cmd_compare},
        {"sojourn", "expected sojourn times over a parameter grid", cmd_sojourn},
        {"figures", "per-panel CSV and SVG for the parameter sweep and limit cases", cmd_figures},
        {"oracle", "exact directed-edge stationary distribution", cmd_oracle},
        {"walk", "run one walk and dump occupancy", cmd_walk},
    };
    std::map<CLI::App*, const Verb*> dispatch;
    for (const Verb& v : verbs) {
        CLI::App* sub = app.add_subcommand(v.name, v.help);
        add_common(sub);
        dispatch[sub] = &v;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }

    try {
        for (auto* sub : app.get_subcommands())
            return dispatch.at(sub)->run(resolve(opts));
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
    return exit_validation;
}
