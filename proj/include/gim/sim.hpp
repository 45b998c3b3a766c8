#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gim/canonical_set.hpp"
#include "gim/prob.hpp"

namespace gim {

/// One realization of a labeled unit-rate Poisson process, truncated at the
/// first index by which every support outcome has appeared. The truncation
/// point is exactly where the per-path sums of finite-measure sets vanish, so
/// per-path values computed from a complete path are exact, not approximate.
struct SamplePath {
    struct Point {
        int label;    // outcome index, drawn from the support
        double time;  // arrival time, strictly increasing
    };
    std::vector<Point> points;
    bool complete = false;  // every support outcome has appeared
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_trials = 0;
    uint64_t seed = 0;
};

enum class EstimateMode { poisson, harmonic };

/// Deterministic substream derivation: trial t uses an mt19937_64 engine
/// seeded with splitmix64(seed ^ (t + 1) * 0x9E3779B97F4A7C15). Uniform
/// doubles come from the top 53 bits (low bit forced, so never exactly 0);
/// Exp(1) increments are -log1p(-u). Fixed across releases: identical
/// (seed, n_trials) reproduce identical estimates.
std::mt19937_64 trial_rng(uint64_t seed, uint64_t trial);

double uniform_unit(std::mt19937_64& rng);

/// Draws an outcome from the support by inverse CDF walk.
int sample_outcome(const FiniteProbSpace& space, std::mt19937_64& rng);

SamplePath sample_path(const FiniteProbSpace& space, std::mt19937_64& rng);

/// log(first arrival time matching X(u) / first arrival time); +infinity when
/// no point matches.
double h_rv_sample(const RandomVariable& x, int u, const SamplePath& path);

/// The per-path inclusion-exclusion sum for an arbitrary finite-measure set,
/// grouped by arrival index. Throws DivergentMeasure when the tail does not
/// vanish by the end of the path.
double h_general_sample(const CanonicalSet& a, int u, const SamplePath& path);

/// Keeps only points whose label lies in E, preserving arrival times.
SamplePath thin(const SamplePath& path, const Event& e);

/// Harmonic variants driven by a plain i.i.d. label sequence: the weight of
/// index i is 1/i instead of a log time ratio.
double harmonic_rv_sample(const RandomVariable& x, int u, std::span<const int> labels);
double harmonic_sample(const CanonicalSet& a, int u, std::span<const int> labels);

/// Monte-Carlo estimate of the measure of a finite-measure set. Each trial
/// draws u from P and one fresh path (or label sequence); the result is
/// deterministic given (seed, n_trials).
Estimate estimate(const CanonicalSet& a, EstimateMode mode, long n_trials, uint64_t seed);

}  // namespace gim
