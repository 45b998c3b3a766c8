#pragma once

#include <map>
#include <string>

#include "gim/prob.hpp"

namespace gim {

/// A concrete space with named random variables and events, as loaded from a
/// definition file:
///
///   {"outcomes": ["a","b"], "probs": ["1/2","1/2"],
///    "rvs": {"X": {"a": 0, "b": 1}}, "events": {"E": ["a"]}}
///
/// Probabilities are rational strings. Random-variable values may be JSON
/// integers or strings; only equality of values matters.
struct SpaceBundle {
    SpacePtr space;
    std::map<std::string, RandomVariable> rvs;
    std::map<std::string, Event> events;

    const RandomVariable& rv(const std::string& name) const;
    const Event& event(const std::string& name) const;
};

SpaceBundle load_space_bundle(const std::string& path);
SpaceBundle parse_space_bundle(const std::string& json_text);

}  // namespace gim
