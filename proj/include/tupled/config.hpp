/**
 * @file config.hpp
 * @brief Problem configuration files: loading, validation, echo, and
 *        assembly into solver problems.
 *
 * Configs are sectioned key/value files (INI). The JSON echo written into
 * run reports uses the same section/key layout and loads back through the
 * same path, so a report's "config" block can be re-run directly.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "tupled/dsl.hpp"
#include "tupled/finite.hpp"
#include "tupled/hypotheses.hpp"
#include "tupled/solver.hpp"
#include "tupled/spaces.hpp"
#include "tupled/star_op.hpp"

namespace tupled::config {

namespace fs = std::filesystem;

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A referenced file does not exist.
class MissingFile : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// section -> key -> raw value
using Entries = std::map<std::string, std::map<std::string, std::string>>;

namespace detail {

inline std::string strip_quotes(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

inline Entries from_ptree(boost::property_tree::ptree const& root) {
    Entries out;
    for (auto const& [section, body] : root) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("key '" + section + "' outside any section");
        auto& sec = out[section];
        for (auto const& [key, node] : body)
            sec[key] = strip_quotes(node.data());
    }
    return out;
}

inline Entries from_json(nlohmann::json const& root) {
    if (!root.is_object())
        throw ConfigError("JSON config must be an object of sections");
    Entries out;
    for (auto const& [section, body] : root.items()) {
        if (section == "schema_version")
            continue;
        if (!body.is_object())
            throw ConfigError("JSON config section '" + section + "' must be an object");
        auto& sec = out[section];
        for (auto const& [key, value] : body.items())
            sec[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return out;
}

inline std::string read_file(fs::path const& p) {
    if (!fs::exists(p))
        throw MissingFile("file not found: " + p.string());
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw MissingFile("cannot open: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

/// Reads INI, or JSON when the first non-blank character is '{'.
inline Entries parse_entries(std::string const& text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            return detail::from_json(nlohmann::json::parse(text));
        } catch (nlohmann::json::exception const& e) {
            throw ConfigError(std::string("JSON config: ") + e.what());
        }
    }
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (boost::property_tree::ini_parser_error const& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }
    return detail::from_ptree(tree);
}

/// Normalized contents of a problem config.
struct RunConfig {
    fs::path base_dir;

    std::string space_kind = "vector";
    int k = 1;
    MetricKind metric = MetricKind::euclidean;
    fs::path space_file;

    std::string star_preset;
    int n = 0;
    fs::path star_file;

    std::string F;          ///< canonical mapping text (vector spaces)
    std::string g;          ///< empty: identity
    std::string g_inverse;  ///< empty: none (or identity when g is)
    std::string phi;        ///< number: linear alpha; otherwise expression in t
    PhiClass phi_class = PhiClass::omega;
    bool phi_increasing = false;
    fs::path F_table, g_table, g_inverse_table;

    SolveConfig solve;
    Direction direction = Direction::up;

    std::optional<nlohmann::json> u0;

    std::optional<ContractionVariant> variant;
    std::vector<double> weights;
    SamplerConfig sampler;
    std::size_t pair_bound = default_pair_bound;
    std::size_t enumeration_bound = default_enumeration_bound;
    std::size_t trials = 0; ///< uniqueness probe starts

    std::map<std::string, bool> flags;

    bool finite() const { return space_kind == "finite"; }
};

namespace detail {

class Reader {
  public:
    explicit Reader(Entries e) : entries_(std::move(e)) {}

    std::optional<std::string> get(std::string const& section, std::string const& key) {
        auto s = entries_.find(section);
        if (s == entries_.end())
            return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end())
            return std::nullopt;
        used_[section].insert(key);
        return k->second;
    }

    template <class T>
    std::optional<T> number(std::string const& section, std::string const& key) {
        auto v = get(section, key);
        if (!v)
            return std::nullopt;
        try {
            std::size_t pos = 0;
            T out;
            if constexpr (std::is_floating_point_v<T>)
                out = static_cast<T>(std::stod(*v, &pos));
            else if constexpr (std::is_signed_v<T>)
                out = static_cast<T>(std::stoll(*v, &pos));
            else {
                if (v->find('-') != std::string::npos)
                    throw std::invalid_argument("negative");
                out = static_cast<T>(std::stoull(*v, &pos));
            }
            if (v->find_first_not_of(" \t", pos) != std::string::npos)
                throw std::invalid_argument("trailing characters");
            return out;
        } catch (std::exception const&) {
            throw ConfigError("[" + section + "] " + key + ": not a number: '" + *v + "'");
        }
    }

    std::optional<bool> boolean(std::string const& section, std::string const& key) {
        auto v = get(section, key);
        if (!v)
            return std::nullopt;
        if (*v == "true" || *v == "1" || *v == "yes")
            return true;
        if (*v == "false" || *v == "0" || *v == "no")
            return false;
        throw ConfigError("[" + section + "] " + key + ": expected true/false, got '" + *v + "'");
    }

    Entries const& entries() const { return entries_; }

    /// Keys present in the file that nothing read.
    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (auto const& [section, keys] : entries_) {
            if (section == "flags")
                continue;
            auto u = used_.find(section);
            for (auto const& [key, value] : keys)
                if (u == used_.end() || !u->second.count(key))
                    out.push_back("[" + section + "] " + key);
        }
        return out;
    }

  private:
    Entries entries_;
    std::map<std::string, std::set<std::string>> used_;
};

inline fs::path resolve(fs::path const& base, std::string const& p) {
    fs::path path(p);
    if (path.is_relative())
        path = base / path;
    return path.lexically_normal();
}

/// A bare number is the linear constant alpha; anything else is an expression in t.
inline ComparisonFn phi_from_text(std::string const& text, PhiClass cls, bool increasing) {
    std::size_t pos = 0;
    std::optional<double> a;
    try {
        a = std::stod(text, &pos);
    } catch (std::invalid_argument const&) {
    } catch (std::out_of_range const&) {
    }
    if (a && text.find_first_not_of(" \t", pos) == std::string::npos)
        return ComparisonFn::linear(*a);
    return ComparisonFn::expression(dsl::parse_scalar(text), cls, increasing);
}

inline std::string mapping_text(Reader& r, std::string const& name, int n, int k) {
    auto whole = r.get("mappings", name);
    std::vector<std::string> parts;
    for (int j = 1; j <= k; ++j)
        if (auto c = r.get("mappings", name + ".component[" + std::to_string(j) + "]"))
            parts.push_back(*c);
    if (whole && !parts.empty())
        throw ConfigError("[mappings] " + name + " given both whole and per component");
    if (!whole && parts.empty())
        return {};
    if (!whole && static_cast<int>(parts.size()) != k)
        throw ConfigError("[mappings] " + name + " needs all " + std::to_string(k) + " components");
    dsl::MappingAst ast = whole ? dsl::parse_mapping(*whole, n, k) : dsl::mapping_from_components(parts, n, k);
    return dsl::format_mapping(ast);
}

} // namespace detail

/// Parses and validates everything that does not need the referenced files
/// beyond their existence. `base_dir` anchors relative paths.
inline RunConfig from_entries(Entries entries, fs::path const& base_dir) {
    detail::Reader r(std::move(entries));
    RunConfig c;
    c.base_dir = base_dir;
    try {
        c.space_kind = r.get("space", "kind").value_or("vector");
        if (c.space_kind != "vector" && c.space_kind != "finite")
            throw ConfigError("[space] kind must be 'vector' or 'finite', got '" + c.space_kind + "'");
        c.k = r.number<int>("space", "k").value_or(1);
        if (c.k < 1)
            throw ConfigError("[space] k must be >= 1");
        if (auto m = r.get("space", "metric"))
            c.metric = parse_metric_kind(*m);
        if (auto f = r.get("space", "file"))
            c.space_file = detail::resolve(base_dir, *f);
        if (c.finite() && c.space_file.empty())
            throw ConfigError("[space] finite spaces need a file");

        c.star_preset = r.get("star", "preset").value_or("");
        c.n = r.number<int>("star", "n").value_or(0);
        if (auto f = r.get("star", "file"))
            c.star_file = detail::resolve(base_dir, *f);
        if (c.star_preset.empty() == c.star_file.empty())
            throw ConfigError("[star] needs exactly one of preset or file");
        if (!c.star_preset.empty()) {
            auto names = preset_names();
            if (std::find(names.begin(), names.end(), c.star_preset) == names.end())
                throw ConfigError("[star] unknown preset '" + c.star_preset + "'");
            if (preset_takes_dimension(c.star_preset)) {
                if (c.n < 2)
                    throw ConfigError("[star] preset '" + c.star_preset + "' needs n >= 2");
            } else {
                int fixed = preset(c.star_preset, 0).n();
                if (c.n != 0 && c.n != fixed)
                    throw ConfigError("[star] preset '" + c.star_preset + "' has n = " + std::to_string(fixed));
                c.n = fixed;
            }
        }

        if (auto f = r.get("mappings", "F.table"))
            c.F_table = detail::resolve(base_dir, *f);
        if (auto f = r.get("mappings", "g.table"))
            c.g_table = detail::resolve(base_dir, *f);
        if (auto f = r.get("mappings", "g_inverse.table"))
            c.g_inverse_table = detail::resolve(base_dir, *f);
        if (auto p = r.get("mappings", "phi"))
            c.phi = *p;
        if (auto pc = r.get("mappings", "phi.class")) {
            if (*pc == "Omega")
                c.phi_class = PhiClass::omega;
            else if (*pc == "Phi")
                c.phi_class = PhiClass::phi;
            else if (*pc == "none")
                c.phi_class = PhiClass::none;
            else
                throw ConfigError("[mappings] phi.class must be Omega, Phi or none");
        }
        c.phi_increasing = r.boolean("mappings", "phi.increasing").value_or(false);

        if (auto t = r.number<double>("solver", "tol"))
            c.solve.tol = *t;
        if (auto m = r.number<int>("solver", "max_iter"))
            c.solve.max_iter = *m;
        if (auto m = r.get("solver", "residual_metric"))
            c.solve.residual_metric = parse_residual_metric(*m);
        if (auto d = r.get("solver", "direction"))
            c.direction = parse_direction(*d);
        c.solve.validate();

        if (auto u = r.get("initial", "U0")) {
            try {
                c.u0 = nlohmann::json::parse(*u);
            } catch (nlohmann::json::exception const&) {
                throw ConfigError("[initial] U0 is not a JSON array: '" + *u + "'");
            }
        }

        if (auto v = r.get("check", "variant"))
            c.variant = parse_variant(*v);
        if (auto w = r.get("check", "weights")) {
            try {
                c.weights = nlohmann::json::parse(*w).get<std::vector<double>>();
            } catch (nlohmann::json::exception const&) {
                throw ConfigError("[check] weights must be a JSON array of numbers");
            }
        }
        c.sampler.samples = r.number<std::size_t>("check", "samples").value_or(c.sampler.samples);
        c.sampler.seed = r.number<std::uint64_t>("check", "seed").value_or(c.sampler.seed);
        c.sampler.box.lo = r.number<double>("check", "box_lo").value_or(c.sampler.box.lo);
        c.sampler.box.hi = r.number<double>("check", "box_hi").value_or(c.sampler.box.hi);
        if (!(c.sampler.box.lo <= c.sampler.box.hi))
            throw ConfigError("[check] box_lo must not exceed box_hi");
        c.pair_bound = r.number<std::size_t>("check", "pair_bound").value_or(c.pair_bound);
        c.enumeration_bound = r.number<std::size_t>("check", "enumeration_bound").value_or(c.enumeration_bound);
        c.trials = r.number<std::size_t>("check", "trials").value_or(0);

        if (auto it = r.entries().find("flags"); it != r.entries().end())
            for (auto const& [name, value] : it->second) {
                auto b = r.boolean("flags", name);
                c.flags[name] = *b;
            }

        // Star dimension is needed to parse the mappings.
        int n = c.n;
        if (!c.star_file.empty()) {
            std::istringstream in(detail::read_file(c.star_file));
            n = read_star(in).n();
            if (c.n != 0 && c.n != n)
                throw ConfigError("[star] n = " + std::to_string(c.n) + " but the star file has n = " +
                                  std::to_string(n));
            c.n = n;
        }

        if (c.finite()) {
            if (c.F_table.empty())
                throw ConfigError("[mappings] finite spaces need F.table");
            if (r.get("mappings", "F") || r.get("mappings", "g"))
                throw ConfigError("[mappings] finite spaces take tables, not expressions");
            for (auto const* p : {&c.space_file, &c.F_table, &c.g_table, &c.g_inverse_table})
                if (!p->empty() && !fs::exists(*p))
                    throw MissingFile("file not found: " + p->string());
        } else {
            if (!c.F_table.empty() || !c.g_table.empty() || !c.g_inverse_table.empty())
                throw ConfigError("[mappings] tables need a finite space");
            c.F = detail::mapping_text(r, "F", n, c.k);
            if (c.F.empty())
                throw ConfigError("[mappings] F is required");
            if (auto g = r.get("mappings", "g"); !g || *g != "identity")
                c.g = detail::mapping_text(r, "g", 1, c.k);
            if (c.g == "x1")
                c.g.clear();
            c.g_inverse = detail::mapping_text(r, "g_inverse", 1, c.k);
        }
        if (!c.phi.empty())
            (void)detail::phi_from_text(c.phi, c.phi_class, c.phi_increasing);
        if (c.variant && *c.variant != ContractionVariant::weighted_xi && c.phi.empty())
            throw ConfigError("[check] variant " + std::string(to_string(*c.variant)) + " needs [mappings] phi");

        auto unused = r.unused();
        if (!unused.empty())
            throw ConfigError("unrecognized key " + unused.front());
    } catch (dsl::ParseError const& e) {
        throw ConfigError(std::string("expression: ") + e.what());
    } catch (StarError const& e) {
        throw ConfigError(std::string("star file: ") + e.what());
    } catch (HypothesisError const& e) {
        throw ConfigError(e.what());
    } catch (std::invalid_argument const& e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline RunConfig load(fs::path const& path) {
    std::string text = detail::read_file(path);
    fs::path base = fs::absolute(path).parent_path().lexically_normal();
    return from_entries(parse_entries(text), base);
}

/// The phi of the config as a comparison function, if any.
inline std::optional<ComparisonFn> make_phi(RunConfig const& c) {
    if (c.phi.empty())
        return std::nullopt;
    return detail::phi_from_text(c.phi, c.phi_class, c.phi_increasing);
}

inline std::optional<Contraction> make_contraction(RunConfig const& c) {
    if (!c.variant)
        return std::nullopt;
    Contraction out{*c.variant, make_phi(c).value_or(ComparisonFn::linear(0.0)), c.weights};
    try {
        out.validate(c.n);
    } catch (HypothesisError const& e) {
        throw ConfigError(e.what());
    }
    return out;
}

/// Section/key layout mirroring the input file; reloadable with load().
inline nlohmann::ordered_json echo(RunConfig const& c) {
    using oj = nlohmann::ordered_json;
    oj j;
    j["space"]["kind"] = c.space_kind;
    if (c.finite()) {
        j["space"]["file"] = c.space_file.string();
    } else {
        j["space"]["k"] = c.k;
        j["space"]["metric"] = std::string(to_string(c.metric));
    }
    if (!c.star_preset.empty()) {
        j["star"]["preset"] = c.star_preset;
        j["star"]["n"] = c.n;
    } else {
        j["star"]["file"] = c.star_file.string();
    }
    oj& m = j["mappings"];
    m = oj::object();
    if (c.finite()) {
        m["F.table"] = c.F_table.string();
        if (!c.g_table.empty())
            m["g.table"] = c.g_table.string();
        if (!c.g_inverse_table.empty())
            m["g_inverse.table"] = c.g_inverse_table.string();
    } else {
        m["F"] = c.F;
        m["g"] = c.g.empty() ? std::string("identity") : c.g;
        if (!c.g_inverse.empty())
            m["g_inverse"] = c.g_inverse;
    }
    if (!c.phi.empty()) {
        m["phi"] = c.phi;
        m["phi.class"] = std::string(to_string(c.phi_class));
        m["phi.increasing"] = c.phi_increasing;
    }
    j["solver"]["tol"] = c.solve.tol;
    j["solver"]["max_iter"] = c.solve.max_iter;
    j["solver"]["residual_metric"] = std::string(to_string(c.solve.residual_metric));
    j["solver"]["direction"] = std::string(to_string(c.direction));
    if (c.u0)
        j["initial"]["U0"] = *c.u0;
    oj& chk = j["check"];
    chk = oj::object();
    if (c.variant)
        chk["variant"] = std::string(to_string(*c.variant));
    if (!c.weights.empty())
        chk["weights"] = c.weights;
    chk["samples"] = c.sampler.samples;
    chk["seed"] = c.sampler.seed;
    chk["box_lo"] = c.sampler.box.lo;
    chk["box_hi"] = c.sampler.box.hi;
    chk["pair_bound"] = c.pair_bound;
    chk["enumeration_bound"] = c.enumeration_bound;
    chk["trials"] = c.trials;
    if (!c.flags.empty())
        for (auto const& [name, value] : c.flags)
            j["flags"][name] = value;
    return j;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

inline StarOp make_star(RunConfig const& c) {
    if (!c.star_preset.empty())
        return preset(c.star_preset, c.n);
    std::istringstream in(detail::read_file(c.star_file));
    try {
        return read_star(in);
    } catch (StarError const& e) {
        throw ConfigError(std::string("star file: ") + e.what());
    }
}

struct VectorBundle {
    VectorSpace space;
    StarOp star;
    dsl::MappingAst F;
    std::optional<dsl::MappingAst> g;
    std::optional<dsl::MappingAst> g_inverse;
    Problem<VectorSpace> problem;
};

namespace detail {
inline std::function<VectorSpace::Point(VectorSpace::Point const&)> unary(std::optional<dsl::MappingAst> const& ast) {
    if (!ast)
        return {};
    auto shared = std::make_shared<dsl::MappingAst const>(*ast);
    return [shared](VectorSpace::Point const& x) { return dsl::eval_mapping(*shared, std::span<const VectorSpace::Point>(&x, 1)); };
}

inline Tuple<VectorSpace::Point> vector_u0(RunConfig const& c) {
    Tuple<VectorSpace::Point> u;
    if (!c.u0)
        return Tuple<VectorSpace::Point>(static_cast<std::size_t>(c.n), VectorSpace::Point(c.k, 0.0));
    if (!c.u0->is_array() || c.u0->size() != static_cast<std::size_t>(c.n))
        throw ConfigError("[initial] U0 must list " + std::to_string(c.n) + " points");
    for (auto const& x : *c.u0) {
        if (x.is_number() && c.k == 1) {
            u.push_back({x.get<double>()});
        } else if (x.is_array() && x.size() == static_cast<std::size_t>(c.k) &&
                   std::all_of(x.begin(), x.end(), [](auto const& v) { return v.is_number(); })) {
            u.push_back(x.get<std::vector<double>>());
        } else {
            throw ConfigError("[initial] U0 entry " + x.dump() + " is not a point of R^" + std::to_string(c.k));
        }
    }
    return u;
}
} // namespace detail

inline VectorBundle make_vector_problem(RunConfig const& c) {
    if (c.finite())
        throw ConfigError("config describes a finite space");
    StarOp star = make_star(c);
    auto F = dsl::parse_mapping(c.F, star.n(), c.k);
    std::optional<dsl::MappingAst> g, ginv;
    if (!c.g.empty())
        g = dsl::parse_mapping(c.g, 1, c.k);
    if (!c.g_inverse.empty())
        ginv = dsl::parse_mapping(c.g_inverse, 1, c.k);
    auto shared = std::make_shared<dsl::MappingAst const>(F);
    InducedMaps<VectorSpace::Point> maps{
        [shared](std::span<const VectorSpace::Point> a) { return dsl::eval_mapping(*shared, a); }, detail::unary(g),
        star};
    VectorSpace space(c.k, c.metric);
    Problem<VectorSpace> prob{space, maps, detail::unary(ginv), detail::vector_u0(c), c.direction};
    return VectorBundle{space, star, F, g, ginv, std::move(prob)};
}

struct FiniteBundle {
    FiniteProblem finite;
    StarOp star;
    bool g_identity = true;
    Problem<FiniteSpace> problem;
};

inline FiniteBundle make_finite_problem(RunConfig const& c) {
    if (!c.finite())
        throw ConfigError("config does not describe a finite space");
    StarOp star = make_star(c);
    try {
        std::istringstream sin(detail::read_file(c.space_file));
        FiniteSpace space = read_finite_space(sin);
        auto report = validate_finite_space(space);
        if (!report.ok())
            throw ConfigError("finite space violates " + report.violations.front().axiom);
        int const p = space.size();
        tuple_count(p, star.n(), c.enumeration_bound);
        std::istringstream fin(detail::read_file(c.F_table));
        auto f = read_f_table(fin, p, star.n());
        std::vector<int> g(static_cast<std::size_t>(p));
        bool g_identity = c.g_table.empty();
        if (g_identity) {
            for (int x = 0; x < p; ++x)
                g[static_cast<std::size_t>(x)] = x;
        } else {
            std::istringstream gin(detail::read_file(c.g_table));
            g = read_g_table(gin, p);
        }
        FiniteProblem fp(space, star.n(), std::move(f), std::move(g));
        g_identity = fp.g_is_identity();
        std::function<int(int const&)> ginv;
        if (!c.g_inverse_table.empty()) {
            std::istringstream iin(detail::read_file(c.g_inverse_table));
            auto table = std::make_shared<std::vector<int> const>(read_g_table(iin, p));
            ginv = [table](int const& y) { return (*table)[static_cast<std::size_t>(y)]; };
        } else if (g_identity) {
            ginv = [](int const& y) { return y; };
        }
        Tuple<int> u0(static_cast<std::size_t>(star.n()), 0);
        if (c.u0) {
            if (!c.u0->is_array() || c.u0->size() != static_cast<std::size_t>(star.n()))
                throw ConfigError("[initial] U0 must list " + std::to_string(star.n()) + " points");
            for (std::size_t i = 0; i < u0.size(); ++i) {
                auto const& x = (*c.u0)[i];
                if (!x.is_number_integer() || !space.contains(x.get<int>()))
                    throw ConfigError("[initial] U0 entry " + x.dump() + " is not a point id");
                u0[i] = x.get<int>();
            }
        }
        auto maps = fp.maps(star);
        Problem<FiniteSpace> prob{space, maps, ginv, u0, c.direction};
        return FiniteBundle{std::move(fp), star, g_identity, std::move(prob)};
    } catch (std::invalid_argument const& e) {
        throw ConfigError(e.what());
    }
}

} // namespace tupled::config
