#pragma once

#include <random>
#include <string>
#include <vector>

#include "gim/prob.hpp"

namespace gimtest {

using namespace gim;

// Randomized fixtures for property tests. Weights stay small so coupon
// collection stays short and rational arithmetic stays cheap.

inline SpacePtr random_space(std::mt19937_64& rng, int min_n = 2, int max_n = 8,
                             bool allow_zero_prob = false) {
    int n = min_n + static_cast<int>(rng() % (max_n - min_n + 1));
    std::vector<std::string> labels;
    std::vector<int> weights(n);
    int total = 0;
    for (int i = 0; i < n; ++i) {
        labels.push_back("w" + std::to_string(i));
        weights[i] = allow_zero_prob && (rng() % 5 == 0) ? 0 : 1 + static_cast<int>(rng() % 9);
        total += weights[i];
    }
    if (total == 0) { weights[0] = 1; total = 1; }
    std::vector<Rational> probs;
    for (int w : weights) probs.emplace_back(w, total);
    return FiniteProbSpace::create(std::move(labels), std::move(probs));
}

inline RandomVariable random_rv(const SpacePtr& sp, std::mt19937_64& rng, int max_values = 3) {
    std::vector<int> labeling(sp->size());
    for (auto& v : labeling) v = static_cast<int>(rng() % max_values);
    return RandomVariable(sp, std::move(labeling));
}

inline Event random_event(const SpacePtr& sp, std::mt19937_64& rng) {
    return Event(sp, static_cast<uint32_t>(rng()) & sp->full_mask());
}

inline Event random_positive_event(const SpacePtr& sp, std::mt19937_64& rng) {
    while (true) {
        Event e = random_event(sp, rng);
        if (e.prob() > 0) return e;
    }
}

}  // namespace gimtest
