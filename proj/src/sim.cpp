#include "gim/sim.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gim/errors.hpp"

namespace gim {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// -sum_{T within D} (-1)^|T| phi(u, T): the inner inclusion-exclusion value
// once the set of seen labels is D. Vanishes at D = support for sets passing
// the finiteness test.
long inner_sum(const CanonicalSet& a, int u, uint32_t seen) {
    long q = 0;
    for (uint32_t t = seen;; t = (t - 1) & seen) {
        if (a.phi(u, t)) q += (std::popcount(t) % 2 == 0) ? -1 : 1;
        if (t == 0) break;
    }
    return q;
}

}  // namespace

std::mt19937_64 trial_rng(uint64_t seed, uint64_t trial) {
    return std::mt19937_64(splitmix64(seed ^ ((trial + 1) * 0x9E3779B97F4A7C15ull)));
}

double uniform_unit(std::mt19937_64& rng) {
    // Low bit forced so the value is never exactly 0 and Exp(1) increments
    // stay strictly positive (arrival times must strictly increase).
    return static_cast<double>((rng() >> 11) | 1u) * 0x1.0p-53;
}

int sample_outcome(const FiniteProbSpace& space, std::mt19937_64& rng) {
    double r = uniform_unit(rng);
    double cum = 0.0;
    int last = -1;
    for (int u = 0; u < space.size(); ++u) {
        if (!((space.support_mask() >> u) & 1u)) continue;
        last = u;
        cum += space.prob_real(u);
        if (r < cum) return u;
    }
    return last;  // guard against rounding at the top of the CDF
}

SamplePath sample_path(const FiniteProbSpace& space, std::mt19937_64& rng) {
    if (space.support_mask() == 0) throw std::invalid_argument("space has empty support");
    SamplePath path;
    uint32_t seen = 0;
    double t = 0.0;
    while (seen != space.support_mask()) {
        t += -std::log1p(-uniform_unit(rng));  // Exp(1) increment
        int label = sample_outcome(space, rng);
        path.points.push_back({label, t});
        seen |= 1u << label;
    }
    path.complete = true;
    return path;
}

double h_rv_sample(const RandomVariable& x, int u, const SamplePath& path) {
    if (path.points.empty()) throw std::invalid_argument("empty path");
    int target = x.value(u);
    for (const auto& pt : path.points)
        if (x.value(pt.label) == target) return std::log(pt.time / path.points.front().time);
    return std::numeric_limits<double>::infinity();
}

double h_general_sample(const CanonicalSet& a, int u, const SamplePath& path) {
    if (path.points.empty()) throw std::invalid_argument("empty path");
    double value = 0.0;
    uint32_t seen = 0;
    long q = 0;
    double segment_start = 0.0;
    for (const auto& pt : path.points) {
        uint32_t bit = 1u << pt.label;
        if (seen & bit) continue;  // inner value unchanged until a new label
        if (q != 0) value += static_cast<double>(q) * (std::log(pt.time) - std::log(segment_start));
        seen |= bit;
        q = inner_sum(a, u, seen);
        segment_start = pt.time;
    }
    if (q != 0)
        throw DivergentMeasure("per-path sum does not terminate; set diverges on this path");
    return value;
}

SamplePath thin(const SamplePath& path, const Event& e) {
    if (e.prob() == 0) throw std::invalid_argument("thinning by a zero-probability event");
    SamplePath out;
    uint32_t seen = 0;
    for (const auto& pt : path.points) {
        if (!e.contains(pt.label)) continue;
        out.points.push_back(pt);
        seen |= 1u << pt.label;
    }
    out.complete = (seen == e.space->support_mask());
    return out;
}

double harmonic_rv_sample(const RandomVariable& x, int u, std::span<const int> labels) {
    int target = x.value(u);
    double sum = 0.0;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (x.value(labels[i]) == target) return sum;
        sum += 1.0 / static_cast<double>(i + 1);
    }
    return std::numeric_limits<double>::infinity();
}

double harmonic_sample(const CanonicalSet& a, int u, std::span<const int> labels) {
    double value = 0.0;
    uint32_t seen = 0;
    long q = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
        uint32_t bit = 1u << labels[i];
        if (!(seen & bit)) {
            seen |= bit;
            q = inner_sum(a, u, seen);
        }
        if (seen == a.space()->support_mask() && q == 0) return value;
        value += static_cast<double>(q) / static_cast<double>(i + 1);
    }
    if (q != 0)
        throw DivergentMeasure("per-path sum does not terminate; set diverges on this sequence");
    return value;
}

Estimate estimate(const CanonicalSet& a, EstimateMode mode, long n_trials, uint64_t seed) {
    if (n_trials < 2) throw std::invalid_argument("estimates need at least 2 trials");
    if (!a.is_measure_finite()) throw DivergentMeasure("set has no finite measure");
    const FiniteProbSpace& sp = *a.space();
    std::vector<double> values;
    values.reserve(n_trials);
    for (long t = 0; t < n_trials; ++t) {
        std::mt19937_64 rng = trial_rng(seed, static_cast<uint64_t>(t));
        int u = sample_outcome(sp, rng);
        SamplePath path = sample_path(sp, rng);
        if (mode == EstimateMode::poisson) {
            values.push_back(h_general_sample(a, u, path));
        } else {
            std::vector<int> labels;
            labels.reserve(path.points.size());
            for (const auto& pt : path.points) labels.push_back(pt.label);
            values.push_back(harmonic_sample(a, u, labels));
        }
    }
    Estimate est;
    est.n_trials = n_trials;
    est.seed = seed;
    for (double v : values) est.mean += v;
    est.mean /= static_cast<double>(n_trials);
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / (static_cast<double>(n_trials) * (n_trials - 1)));
    return est;
}

}  // namespace gim
