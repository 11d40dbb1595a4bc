#include "nonlin_mdp/model_json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nonlin_mdp {

using nlohmann::json;

namespace {

json utility_entry(double u) {
    if (is_neg_inf(u)) return json("-inf");
    return json(u);
}

double parse_utility(const json& j, Mode mode) {
    if (j.is_string()) {
        if (j.get<std::string>() == "-inf") {
            if (mode == Mode::bounded)
                throw BoundError("utility \"-inf\" not allowed in bounded mode");
            return neg_inf;
        }
        throw IoError("unrecognized utility string: " + j.get<std::string>());
    }
    return j.get<double>();
}

} // namespace

std::string model_to_json(const FiniteModel& model) {
    json j;
    json states = json::array();
    for (std::size_t x = 0; x < model.num_states(); ++x) {
        json s;
        s["label"] = model.state_labels[x];
        if (!std::isnan(model.state_coords[x])) s["coord"] = model.state_coords[x];
        states.push_back(s);
    }
    j["states"] = states;
    j["actions"] = model.action_labels;
    j["admissible"] = model.admissible;
    json tr = json::array();
    for (std::size_t x = 0; x < model.num_states(); ++x) {
        json per_a = json::array();
        for (std::size_t a = 0; a < model.num_actions(); ++a) per_a.push_back(model.transition[x][a]);
        tr.push_back(per_a);
    }
    j["transition"] = tr;
    json ut = json::array();
    for (std::size_t x = 0; x < model.num_states(); ++x) {
        json per_a = json::array();
        for (std::size_t a = 0; a < model.num_actions(); ++a)
            per_a.push_back(utility_entry(model.utility[x][a]));
        ut.push_back(per_a);
    }
    j["utility"] = ut;
    j["weight"] = model.weight;
    j["mode"] = model.mode == Mode::bounded ? "bounded" : "unbounded_below";
    return j.dump(2);
}

FiniteModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("model JSON parse failure: ") + e.what());
    }
    FiniteModel m;
    const std::string mode = j.value("mode", "bounded");
    if (mode == "bounded")
        m.mode = Mode::bounded;
    else if (mode == "unbounded_below")
        m.mode = Mode::unbounded_below;
    else
        throw IoError("unrecognized mode: " + mode);

    for (const auto& s : j.at("states")) {
        if (s.is_object()) {
            m.state_labels.push_back(s.value("label", ""));
            m.state_coords.push_back(s.value("coord", std::nan("")));
        } else if (s.is_number()) {
            m.state_labels.push_back(std::to_string(s.get<double>()));
            m.state_coords.push_back(s.get<double>());
        } else {
            m.state_labels.push_back(s.get<std::string>());
            m.state_coords.push_back(std::nan(""));
        }
    }
    for (const auto& a : j.at("actions"))
        m.action_labels.push_back(a.is_string() ? a.get<std::string>()
                                                : std::to_string(a.get<double>()));
    m.admissible = j.at("admissible").get<std::vector<std::vector<int>>>();
    m.transition = j.at("transition").get<std::vector<std::vector<std::vector<double>>>>();
    for (const auto& row : j.at("utility")) {
        std::vector<double> per_a;
        for (const auto& e : row) per_a.push_back(parse_utility(e, m.mode));
        m.utility.push_back(per_a);
    }
    m.weight = j.at("weight").get<std::vector<double>>();
    if (m.state_coords.size() != m.weight.size())
        throw IoError("states/weight length mismatch");
    return m;
}

FiniteModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

void save_model(const FiniteModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write model file: " + path);
    out << model_to_json(model) << "\n";
}

std::string discount_to_json(const DiscountFunction& d) {
    json j;
    j["kind"] = d.kind;
    j["params"] = d.params;
    return j.dump(2);
}

DiscountFunction discount_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("discount JSON parse failure: ") + e.what());
    }
    const std::string kind = j.at("kind").get<std::string>();
    const json p = j.value("params", json::object());
    if (kind == "linear") return make_linear(p.at("beta").get<double>());
    if (kind == "sign_effect")
        return make_sign_effect(p.at("d1").get<double>(), p.at("d2").get<double>());
    if (kind == "log_blend") return make_log_blend(p.at("eps").get<double>(), LogBlendVariant::one);
    if (kind == "log_blend2") return make_log_blend(p.at("eps").get<double>(), LogBlendVariant::two);
    throw IoError("unrecognized discount kind: " + kind);
}

DiscountFunction load_discount(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open discount file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return discount_from_json(ss.str());
}

DiscountFunction parse_discount_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParamError("discount spec must look like kind:params, got " + spec);
    const std::string kind = spec.substr(0, colon);
    std::vector<double> args;
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::stod(tok));
    if (kind == "linear" && args.size() == 1) return make_linear(args[0]);
    if (kind == "sign_effect" && args.size() == 2) return make_sign_effect(args[0], args[1]);
    if (kind == "log_blend" && args.size() == 1)
        return make_log_blend(args[0], LogBlendVariant::one);
    if (kind == "log_blend2" && args.size() == 1)
        return make_log_blend(args[0], LogBlendVariant::two);
    throw ParamError("unrecognized discount spec: " + spec);
}

} // namespace nonlin_mdp
