#include "hgogp/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "hgogp/errors.hpp"

namespace hgogp {

namespace {

using json = nlohmann::json;

class Section {
public:
    Section(const json& node, std::string path, std::initializer_list<const char*> allowed)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError(path_, "expected an object");
        }
        for (const auto& [key, value] : node_.items()) {
            (void)value;
            const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; });
            if (!known) {
                throw ConfigError(field(key), "unknown key");
            }
        }
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const char* key) const { return node_.contains(key) && !node_.at(key).is_null(); }
    const json& at(const char* key) const { return node_.at(key); }

    void read(const char* key, double& out) const {
        if (!has(key)) {
            return;
        }
        const json& v = node_.at(key);
        if (!v.is_number()) {
            throw ConfigError(field(key), "expected a number");
        }
        out = v.get<double>();
    }

    void read(const char* key, std::size_t& out) const {
        if (!has(key)) {
            return;
        }
        const json& v = node_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigError(field(key), "expected a non-negative integer");
        }
        out = v.get<std::size_t>();
    }

    void read(const char* key, std::uint64_t& out, int /*tag*/) const {
        if (!has(key)) {
            return;
        }
        const json& v = node_.at(key);
        if (!v.is_number_unsigned()) {
            throw ConfigError(field(key), "expected a non-negative integer");
        }
        out = v.get<std::uint64_t>();
    }

    void read(const char* key, bool& out) const {
        if (!has(key)) {
            return;
        }
        const json& v = node_.at(key);
        if (!v.is_boolean()) {
            throw ConfigError(field(key), "expected true or false");
        }
        out = v.get<bool>();
    }

    void read(const char* key, std::vector<double>& out) const {
        if (!has(key)) {
            return;
        }
        out = numbers(node_.at(key), field(key));
    }

    void read(const char* key, Eigen::Vector2d& out) const {
        if (!has(key)) {
            return;
        }
        out = vec2(node_.at(key), field(key));
    }

    static std::vector<double> numbers(const json& v, const std::string& where) {
        if (!v.is_array()) {
            throw ConfigError(where, "expected an array of numbers");
        }
        std::vector<double> out;
        for (const json& e : v) {
            if (!e.is_number()) {
                throw ConfigError(where, "expected an array of numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    static Eigen::Vector2d vec2(const json& v, const std::string& where) {
        const auto xs = numbers(v, where);
        if (xs.size() != 2) {
            throw ConfigError(where, "expected two coordinates");
        }
        return {xs[0], xs[1]};
    }

private:
    const json& node_;
    std::string path_;
};

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ConfigError("line " + std::to_string(line), "syntax error: " + std::string(e.what()));
    }
}

nlohmann::ordered_json vec_json(const Eigen::Vector2d& v) { return nlohmann::ordered_json::array({v[0], v[1]}); }

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    const json root = parse_text(text);
    ScenarioConfig c = ScenarioConfig::defaults();
    const Section top(root, "", {"scenario", "observer", "window", "gp", "bounds"});

    if (top.has("scenario")) {
        const Section s(top.at("scenario"), "scenario",
                        {"duration", "dt", "record_every", "transient", "seed", "smoothing", "noise_variance",
                         "controller", "obstacles", "reference", "initial_state"});
        s.read("duration", c.duration);
        s.read("dt", c.dt);
        s.read("record_every", c.record_every);
        s.read("transient", c.transient);
        s.read("seed", c.seed, 0);
        s.read("smoothing", c.smoothing);
        s.read("noise_variance", c.noise_variance);
        if (s.has("controller")) {
            const Section ctl(s.at("controller"), "scenario.controller", {"kp", "kv"});
            ctl.read("kp", c.kp);
            ctl.read("kv", c.kv);
        }
        if (s.has("obstacles")) {
            const json& list = s.at("obstacles");
            if (!list.is_array()) {
                throw ConfigError("scenario.obstacles", "expected an array");
            }
            c.obstacles.clear();
            for (std::size_t i = 0; i < list.size(); ++i) {
                const std::string where = "scenario.obstacles[" + std::to_string(i) + "]";
                const Section o(list[i], where, {"center", "radius"});
                if (!o.has("center") || !o.has("radius")) {
                    throw ConfigError(where, "obstacle needs center and radius");
                }
                Obstacle ob;
                o.read("center", ob.center);
                o.read("radius", ob.radius);
                c.obstacles.push_back(ob);
            }
        }
        if (s.has("reference")) {
            const Section r(s.at("reference"), "scenario.reference", {"waypoints", "segment_duration", "closed"});
            if (r.has("waypoints")) {
                const json& list = r.at("waypoints");
                if (!list.is_array()) {
                    throw ConfigError("scenario.reference.waypoints", "expected an array of [x, y] pairs");
                }
                c.waypoints.clear();
                for (const json& w : list) {
                    c.waypoints.push_back(Section::vec2(w, "scenario.reference.waypoints"));
                }
            }
            r.read("segment_duration", c.segment_duration);
            r.read("closed", c.closed_reference);
        }
        if (s.has("initial_state")) {
            const Section i(s.at("initial_state"), "scenario.initial_state", {"position_offset", "velocity"});
            i.read("position_offset", c.initial_position_offset);
            i.read("velocity", c.initial_velocity);
        }
    }
    if (top.has("observer")) {
        const Section o(top.at("observer"), "observer", {"gains", "scale"});
        o.read("gains", c.observer_gains);
        o.read("scale", c.observer_scale);
    }
    if (top.has("window")) {
        const Section w(top.at("window"), "window", {"capacity", "trigger_distance"});
        w.read("capacity", c.window_capacity);
        w.read("trigger_distance", c.trigger_distance);
    }
    if (top.has("gp")) {
        const Section g(top.at("gp"), "gp",
                        {"amplitude", "length_scales", "noise_variance_output", "noise_variance_derivative",
                         "baseline_source"});
        g.read("amplitude", c.gp.amplitude);
        g.read("length_scales", c.gp.length_scales);
        g.read("noise_variance_output", c.gp.noise_variance_output);
        g.read("noise_variance_derivative", c.gp.noise_variance_derivative);
        if (g.has("baseline_source")) {
            const json& v = g.at("baseline_source");
            if (v == "measurement") {
                c.gp.baseline_source = BaselineSource::Measurement;
            } else if (v == "observer") {
                c.gp.baseline_source = BaselineSource::Observer;
            } else {
                throw ConfigError("gp.baseline_source", "expected \"measurement\" or \"observer\"");
            }
        }
    }
    if (top.has("bounds")) {
        const Section b(top.at("bounds"), "bounds", {"rho", "tube_radius", "eta", "perturbations_per_center"});
        if (b.has("rho")) {
            double rho = 0.0;
            b.read("rho", rho);
            c.bounds.rho = rho;
        }
        b.read("tube_radius", c.bounds.tube_radius);
        b.read("eta", c.bounds.eta);
        b.read("perturbations_per_center", c.bounds.perturbations_per_center);
    }
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

nlohmann::ordered_json config_to_json(const ScenarioConfig& c) {
    using ojson = nlohmann::ordered_json;
    ojson obstacles = ojson::array();
    for (const auto& o : c.obstacles) {
        obstacles.push_back(ojson{{"center", vec_json(o.center)}, {"radius", o.radius}});
    }
    ojson waypoints = ojson::array();
    for (const auto& w : c.waypoints) {
        waypoints.push_back(vec_json(w));
    }
    ojson j;
    j["scenario"] = ojson{
        {"duration", c.duration},
        {"dt", c.dt},
        {"record_every", c.record_every},
        {"transient", c.transient},
        {"seed", c.seed},
        {"smoothing", c.smoothing},
        {"noise_variance", c.noise_variance},
        {"controller", ojson{{"kp", c.kp}, {"kv", c.kv}}},
        {"obstacles", obstacles},
        {"reference", ojson{{"waypoints", waypoints},
                            {"segment_duration", c.segment_duration},
                            {"closed", c.closed_reference}}},
        {"initial_state",
         ojson{{"position_offset", vec_json(c.initial_position_offset)}, {"velocity", vec_json(c.initial_velocity)}}},
    };
    j["observer"] = ojson{{"gains", c.observer_gains}, {"scale", c.observer_scale}};
    j["window"] = ojson{{"capacity", c.window_capacity}, {"trigger_distance", c.trigger_distance}};
    j["gp"] = ojson{
        {"amplitude", c.gp.amplitude},
        {"length_scales", c.gp.length_scales},
        {"noise_variance_output", c.gp.noise_variance_output},
        {"noise_variance_derivative", c.gp.noise_variance_derivative},
        {"baseline_source", c.gp.baseline_source == BaselineSource::Measurement ? "measurement" : "observer"},
    };
    j["bounds"] = ojson{
        {"rho", c.bounds.rho ? ojson(*c.bounds.rho) : ojson(nullptr)},
        {"tube_radius", c.bounds.tube_radius},
        {"eta", c.bounds.eta},
        {"perturbations_per_center", c.bounds.perturbations_per_center},
    };
    return j;
}

std::string dump_config(const ScenarioConfig& config) { return config_to_json(config).dump(2) + "\n"; }

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) { return config_to_json(a) == config_to_json(b); }

}  // namespace hgogp
