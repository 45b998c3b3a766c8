#include "gim/space_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gim/errors.hpp"

namespace gim {

using nlohmann::json;

const RandomVariable& SpaceBundle::rv(const std::string& name) const {
    auto it = rvs.find(name);
    if (it == rvs.end()) throw ParseError("unknown random variable '" + name + "'");
    return it->second;
}

const Event& SpaceBundle::event(const std::string& name) const {
    auto it = events.find(name);
    if (it == events.end()) throw ParseError("unknown event '" + name + "'");
    return it->second;
}

namespace {

SpaceBundle parse_space_bundle_checked(const json& doc);

}  // namespace

SpaceBundle parse_space_bundle(const std::string& json_text) {
    try {
        return parse_space_bundle_checked(json::parse(json_text));
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid space file: ") + e.what());
    }
}

namespace {

SpaceBundle parse_space_bundle_checked(const json& doc) {
    if (!doc.is_object() || !doc.contains("outcomes") || !doc.contains("probs"))
        throw ParseError("space file needs 'outcomes' and 'probs'");

    std::vector<std::string> labels;
    for (const auto& o : doc.at("outcomes")) {
        if (!o.is_string()) throw ParseError("outcome labels must be strings");
        labels.push_back(o.get<std::string>());
    }
    std::vector<Rational> probs;
    for (const auto& p : doc.at("probs")) {
        if (!p.is_string()) throw ParseError("probabilities must be rational strings like \"1/2\"");
        probs.push_back(parse_rational(p.get<std::string>()));
    }

    SpaceBundle bundle;
    try {
        bundle.space = FiniteProbSpace::create(std::move(labels), std::move(probs));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid space: ") + e.what());
    }
    const SpacePtr& sp = bundle.space;

    if (doc.contains("rvs")) {
        for (const auto& [name, mapping] : doc.at("rvs").items()) {
            if (!mapping.is_object()) throw ParseError("rv '" + name + "' must map outcomes to values");
            std::vector<int> labeling(sp->size(), -1);
            std::map<std::string, int> value_ids;
            for (const auto& [outcome, value] : mapping.items()) {
                int u = sp->outcome_index(outcome);
                if (u < 0) throw ParseError("rv '" + name + "' labels unknown outcome '" + outcome + "'");
                std::string key = value.dump();  // int or string, only equality matters
                auto [it, inserted] = value_ids.emplace(key, static_cast<int>(value_ids.size()));
                labeling[u] = it->second;
            }
            for (int v : labeling)
                if (v < 0) throw ParseError("rv '" + name + "' must label every outcome");
            bundle.rvs.emplace(name, RandomVariable(sp, std::move(labeling)));
        }
    }

    if (doc.contains("events")) {
        for (const auto& [name, members] : doc.at("events").items()) {
            if (!members.is_array()) throw ParseError("event '" + name + "' must be a list of outcomes");
            std::vector<std::string> outcome_labels;
            for (const auto& m : members) {
                if (!m.is_string()) throw ParseError("event members must be outcome labels");
                outcome_labels.push_back(m.get<std::string>());
            }
            try {
                bundle.events.emplace(name, Event::from_labels(sp, outcome_labels));
            } catch (const std::invalid_argument& e) {
                throw ParseError("event '" + name + "': " + e.what());
            }
        }
    }
    return bundle;
}

}  // namespace

SpaceBundle load_space_bundle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_space_bundle(buf.str());
}

}  // namespace gim
