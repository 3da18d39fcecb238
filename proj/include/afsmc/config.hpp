#pragma once

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "afsmc/controllers.hpp"
#include "afsmc/errors.hpp"
#include "afsmc/fuzzy.hpp"
#include "afsmc/plants.hpp"
#include "afsmc/sim.hpp"

namespace afsmc::config {

enum class ControllerKind { afsmc, smc };

inline const char* to_string(ControllerKind k) { return k == ControllerKind::afsmc ? "afsmc" : "smc"; }

/// Grid, bounds and initial parameter value of one approximator.
struct ApproximatorConfig {
    fuzzy::MembershipGrid grid;
    fuzzy::ProjectionBounds bounds;
    double theta0 = 0.0;

    fuzzy::FuzzyApproximator build() const { return fuzzy::FuzzyApproximator::uniform(grid, theta0, bounds); }
};

struct Scenario {
    std::string name;
    plants::PlantSpec plant;
    control::ControllerParams controller;
    ApproximatorConfig f_hat;
    ApproximatorConfig g_hat;
    sim::SimConfig sim;
    sim::MetricOptions metrics;
    std::vector<ControllerKind> controllers{ControllerKind::afsmc, ControllerKind::smc};

    control::ControllerState initial_state() const { return {f_hat.build(), g_hat.build()}; }

    sim::Controller make_controller(ControllerKind kind) const {
        if (kind == ControllerKind::afsmc) return initial_state();
        return sim::DecoupledSmc{};
    }
};

// ---------------------------------------------------------------------------
// Per-plant defaults

inline ApproximatorConfig default_f_hat(plants::PlantKind kind) {
    constexpr double pi = std::numbers::pi;
    ApproximatorConfig a;
    if (kind == plants::PlantKind::pendulum) {
        a.grid = fuzzy::MembershipGrid(
            {fuzzy::evenly_spaced(0, -pi / 6, pi / 6, 5), fuzzy::evenly_spaced(1, -2.0, 2.0, 5)});
    } else {
        a.grid = fuzzy::MembershipGrid({fuzzy::evenly_spaced(0, -1.0, 1.0, 3), fuzzy::evenly_spaced(2, -pi, pi, 5),
                                        fuzzy::evenly_spaced(3, -2.0, 2.0, 3)});
    }
    a.bounds = {50.0, 0.0, 0.0};
    a.theta0 = 0.0;
    return a;
}

inline ApproximatorConfig default_g_hat(plants::PlantKind kind) {
    constexpr double pi = std::numbers::pi;
    ApproximatorConfig a;
    if (kind == plants::PlantKind::pendulum) {
        a.grid = fuzzy::MembershipGrid(
            {fuzzy::evenly_spaced(0, -pi / 6, pi / 6, 5), fuzzy::evenly_spaced(1, -2.0, 2.0, 5)});
        a.theta0 = 1.0;
    } else {
        a.grid = fuzzy::MembershipGrid({fuzzy::evenly_spaced(2, -pi, pi, 5)});
        a.theta0 = 0.35;
    }
    a.bounds = {50.0, 0.05, 0.05};
    return a;
}

// ---------------------------------------------------------------------------
// YAML reading

namespace detail {

/// Tracks the key path of a node for error messages.
struct Cursor {
    YAML::Node node;
    std::string path;

    int line() const { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << path;
        if (line() > 0) os << " (line " << line() << ")";
        os << ": " << msg;
        throw ConfigError(os.str());
    }

    void require(bool ok, const std::string& msg) const {
        if (!ok) fail(msg);
    }

    bool has(const std::string& key) const { return node.IsMap() && node[key]; }

    Cursor at(const std::string& key) const {
        if (!node.IsMap()) fail("expected a mapping");
        const YAML::Node child = node[key];
        if (!child) fail("missing key '" + key + "'");
        return {child, path + "." + key};
    }

    std::optional<Cursor> maybe(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return at(key);
    }

    Cursor item(std::size_t i) const { return {node[i], path + "[" + std::to_string(i) + "]"}; }

    std::size_t size() const {
        if (!node.IsSequence()) fail("expected a sequence");
        return node.size();
    }

    void only_keys(std::initializer_list<const char*> allowed) const {
        if (!node.IsMap()) fail("expected a mapping");
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!ok.count(key)) Cursor{kv.first, path + "." + key}.fail("unknown key");
        }
    }

    std::string text() const {
        if (!node.IsScalar()) fail("expected a scalar");
        return node.Scalar();
    }

    /// Plain number, or a multiple/fraction of pi: "pi/15", "-pi/6", "2*pi".
    double number() const {
        const std::string s = text();
        double v = 0.0;
        if (YAML::convert<double>::decode(node, v)) {
            require(std::isfinite(v), "number must be finite");
            return v;
        }
        static const std::regex pi_expr(R"(^\s*(-)?\s*(?:([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\*\s*)?pi\s*(?:/\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))?\s*$)");
        std::smatch m;
        if (!std::regex_match(s, m, pi_expr)) fail("expected a number, got '" + s + "'");
        v = std::numbers::pi;
        if (m[2].matched) v *= std::stod(m[2].str());
        if (m[3].matched) {
            const double den = std::stod(m[3].str());
            require(den != 0.0, "division by zero");
            v /= den;
        }
        return m[1].matched ? -v : v;
    }

    double number(const std::string& key) const { return at(key).number(); }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? at(key).number() : fallback;
    }

    std::vector<double> numbers() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = item(i).number();
        return out;
    }

    StateVec state() const {
        const auto v = numbers();
        require(v.size() == 4, "expected 4 state components");
        return {v[0], v[1], v[2], v[3]};
    }

    std::size_t count() const {
        const double v = number();
        require(v >= 0 && v == std::floor(v), "expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }
};

/// Runs a validate() and re-reports its message at the cursor.
template <typename F>
void checked(const Cursor& c, F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        c.fail(e.what());
    }
}

inline plants::PlantSpec read_plant(const Cursor& c) {
    plants::PlantSpec spec;
    const std::string kind = c.at("kind").text();
    if (kind == "pendulum") {
        c.only_keys({"kind", "m_p", "m_c", "L", "g", "gravity_term", "input_sign", "schedule", "disturbance"});
        plants::PendulumParams p;
        p.m_p = c.number_or("m_p", p.m_p);
        p.m_c = c.number_or("m_c", p.m_c);
        p.L = c.number_or("L", p.L);
        p.g = c.number_or("g", p.g);
        if (auto gt = c.maybe("gravity_term")) {
            const auto v = gt->text();
            if (v == "total_mass") p.gravity_term = plants::GravityTerm::total_mass;
            else if (v == "pole_mass") p.gravity_term = plants::GravityTerm::pole_mass;
            else gt->fail("expected total_mass or pole_mass");
        }
        if (auto s = c.maybe("schedule")) {
            s->only_keys({"m_p_amplitude", "m_c_amplitude"});
            p.schedule = plants::PendulumSchedule{s->number_or("m_p_amplitude", 0.0), s->number_or("m_c_amplitude", 0.0)};
            checked(*s, [&] { p.validate(); });
        }
        for (const char* k : {"m_p", "m_c", "L", "g"}) {
            if (c.has(k)) c.at(k).require(c.number(k) > 0.0, "must be positive");
        }
        checked(c, [&] { p.validate(); });
        spec.params = p;
        spec.input_sign = 1;
    } else if (kind == "tora") {
        c.only_keys({"kind", "m", "M", "I", "e", "input_sign", "schedule", "disturbance"});
        plants::ToraParams p;
        p.m = c.number_or("m", p.m);
        p.M = c.number_or("M", p.M);
        p.I = c.number_or("I", p.I);
        p.e = c.number_or("e", p.e);
        for (const char* k : {"m", "M", "I", "e"}) {
            if (c.has(k)) c.at(k).require(c.number(k) > 0.0, "must be positive");
        }
        if (auto s = c.maybe("schedule")) {
            s->only_keys({"m_amplitude", "M_amplitude"});
            p.schedule = plants::ToraSchedule{s->number_or("m_amplitude", 0.0), s->number_or("M_amplitude", 0.0)};
            checked(*s, [&] { p.validate(); });
        }
        checked(c, [&] { p.validate(); });
        spec.params = p;
        spec.input_sign = -1;
    } else {
        c.at("kind").fail("expected pendulum or tora");
    }
    if (auto s = c.maybe("input_sign")) {
        const double v = s->number();
        s->require(v == 1.0 || v == -1.0, "must be 1 or -1");
        spec.input_sign = static_cast<int>(v);
    }
    if (auto d = c.maybe("disturbance")) {
        d->only_keys({"amplitude", "frequency", "t_start", "t_end"});
        plants::DisturbanceSpec dist{d->number("amplitude"), d->number("frequency"), d->number("t_start"),
                                     d->number("t_end")};
        checked(*d, [&] { dist.validate(); });
        spec.disturbance = dist;
    }
    return spec;
}

inline control::ControllerParams read_controller(const Cursor& c) {
    c.only_keys({"c1", "c2", "phi1", "phi2", "Kp", "zU", "gamma1", "gamma2", "desired"});
    control::ControllerParams p;
    auto positive = [&](const char* key) {
        const Cursor k = c.at(key);
        const double v = k.number();
        k.require(v > 0.0, std::string(key) + " must be positive");
        return v;
    };
    p.c1 = positive("c1");
    p.c2 = positive("c2");
    p.phi1 = positive("phi1");
    p.phi2 = positive("phi2");
    p.Kp = positive("Kp");
    p.gamma1 = positive("gamma1");
    p.gamma2 = positive("gamma2");
    const Cursor zu = c.at("zU");
    p.zU = zu.number();
    zu.require(p.zU > 0.0 && p.zU < 1.0, "zU must satisfy 0 < zU < 1 (|z| < zU < 1)");
    if (auto d = c.maybe("desired")) p.desired = d->state();
    checked(c, [&] { p.validate(); });
    return p;
}

inline ApproximatorConfig read_approximator(const Cursor& c, ApproximatorConfig fallback) {
    c.only_keys({"inputs", "bounds", "theta0"});
    ApproximatorConfig a = std::move(fallback);
    if (auto in = c.maybe("inputs")) {
        std::vector<fuzzy::GridInput> inputs;
        const std::size_t n = in->size();
        in->require(n > 0, "at least one input is required");
        for (std::size_t i = 0; i < n; ++i) {
            const Cursor e = in->item(i);
            e.only_keys({"index", "centers", "range", "count", "width"});
            const std::size_t index = e.at("index").count();
            e.at("index").require(index <= 3, "index must be in {0,1,2,3}");
            fuzzy::GridInput g;
            if (auto centers = e.maybe("centers")) {
                e.require(!e.has("range") && !e.has("count"), "give either centers or range+count");
                g.index = index;
                g.centers = centers->numbers();
                centers->require(g.centers.size() >= 2, "at least 2 centers are required");
                for (std::size_t k = 1; k < g.centers.size(); ++k) {
                    centers->require(g.centers[k] > g.centers[k - 1], "centers must be strictly increasing");
                }
                g.width = g.centers[1] - g.centers[0];
            } else {
                const auto range = e.at("range").numbers();
                e.at("range").require(range.size() == 2 && range[1] > range[0], "range must be [lo, hi] with lo < hi");
                const std::size_t count = e.at("count").count();
                e.at("count").require(count >= 2, "count must be at least 2");
                g = fuzzy::evenly_spaced(index, range[0], range[1], count);
            }
            if (auto w = e.maybe("width")) {
                g.width = w->number();
                w->require(g.width > 0.0, "width must be positive");
            }
            inputs.push_back(std::move(g));
        }
        checked(*in, [&] { a.grid = fuzzy::MembershipGrid(std::move(inputs)); });
    }
    if (auto b = c.maybe("bounds")) {
        b->only_keys({"norm_max", "norm_min", "value_floor"});
        a.bounds.norm_max = b->number_or("norm_max", a.bounds.norm_max);
        a.bounds.norm_min = b->number_or("norm_min", a.bounds.norm_min);
        a.bounds.value_floor = b->number_or("value_floor", a.bounds.value_floor);
        checked(*b, [&] { a.bounds.validate(); });
    }
    a.theta0 = c.number_or("theta0", a.theta0);
    return a;
}

inline Scenario read_scenario(const Cursor& c) {
    c.only_keys({"name", "controllers", "plant", "controller", "fuzzy", "sim", "metrics"});
    Scenario s;
    s.name = c.at("name").text();
    c.at("name").require(!s.name.empty(), "name must not be empty");
    c.at("name").require(s.name.find_first_of(",/\\ \t") == std::string::npos,
                         "name must not contain commas, slashes or whitespace");

    s.plant = read_plant(c.at("plant"));
    const auto kind = s.plant.kind();
    s.controller = read_controller(c.at("controller"));

    s.f_hat = default_f_hat(kind);
    s.g_hat = default_g_hat(kind);
    if (auto fz = c.maybe("fuzzy")) {
        fz->only_keys({"f_hat", "g_hat"});
        if (auto f = fz->maybe("f_hat")) s.f_hat = read_approximator(*f, s.f_hat);
        if (auto g = fz->maybe("g_hat")) {
            s.g_hat = read_approximator(*g, s.g_hat);
            g->require(s.g_hat.bounds.value_floor > 0.0, "g_hat needs bounds.value_floor > 0");
        }
    }

    s.sim.t_end = kind == plants::PlantKind::pendulum ? 40.0 : 60.0;
    if (auto sc = c.maybe("sim")) {
        sc->only_keys({"dt", "t_end", "x0", "record_every"});
        s.sim.dt = sc->number_or("dt", s.sim.dt);
        s.sim.t_end = sc->number_or("t_end", s.sim.t_end);
        if (auto x0 = sc->maybe("x0")) s.sim.x0 = x0->state();
        if (auto r = sc->maybe("record_every")) {
            s.sim.record_every = r->count();
        }
        checked(*sc, [&] { s.sim.validate(); });
    } else {
        c.fail("missing key 'sim'");
    }

    s.metrics.thresholds = {0.02, 0.05};
    if (s.plant.disturbance) s.metrics.window = {{s.plant.disturbance->t_start, s.plant.disturbance->t_end}};
    if (auto m = c.maybe("metrics")) {
        m->only_keys({"thresholds", "window"});
        if (auto th = m->maybe("thresholds")) {
            const auto v = th->numbers();
            th->require(v.size() == 2 && v[0] > 0 && v[1] > 0, "thresholds must be two positive numbers (x1, x3)");
            s.metrics.thresholds = v;
        }
        if (auto w = m->maybe("window")) {
            const auto v = w->numbers();
            w->require(v.size() == 2 && v[0] < v[1], "window must be [t0, t1] with t0 < t1");
            s.metrics.window = {{v[0], v[1]}};
        }
    }

    if (auto ctl = c.maybe("controllers")) {
        s.controllers.clear();
        for (std::size_t i = 0; i < ctl->size(); ++i) {
            const auto v = ctl->item(i).text();
            ControllerKind k;
            if (v == "afsmc") k = ControllerKind::afsmc;
            else if (v == "smc") k = ControllerKind::smc;
            else ctl->item(i).fail("expected afsmc or smc");
            for (auto existing : s.controllers) ctl->item(i).require(existing != k, "duplicate controller");
            s.controllers.push_back(k);
        }
        ctl->require(!s.controllers.empty(), "at least one controller is required");
    }

    // Construct once so grid/theta mismatches surface at load time.
    checked(c, [&] { (void)s.initial_state(); });
    return s;
}

}  // namespace detail

/// Parses and validates a scenario document.
inline std::vector<Scenario> parse_config(const std::string& text, const std::string& source = "<config>") {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(source + ": parse error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    const detail::Cursor top{root, source};
    top.require(root.IsMap(), "top level must be a mapping with a 'scenarios' list");
    top.only_keys({"scenarios"});
    const detail::Cursor list = top.at("scenarios");
    std::vector<Scenario> out;
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const detail::Cursor item = list.item(i);
        Scenario s = detail::read_scenario(item);
        item.at("name").require(names.insert(s.name).second, "duplicate scenario name '" + s.name + "'");
        out.push_back(std::move(s));
    }
    list.require(!out.empty(), "no scenarios defined");
    return out;
}

inline std::vector<Scenario> load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

}  // namespace afsmc::config
