#pragma once

#include <cmath>
#include <span>

#include "gim/canonical_set.hpp"

namespace gim {

/// A measure value in nats with a base-2 view.
struct MeasureValue {
    double nats = 0.0;
    double bits() const { return nats / std::log(2.0); }
};

struct MeasureOptions {
    /// Exact evaluation enumerates subset pairs, Theta(|Omega| * 3^|Omega|);
    /// spaces larger than this are rejected unless the guard is raised.
    int max_omega = 12;
};

/// Average measure of the set at one outcome: the expected log arrival-time
/// ratio accumulated by a unit-rate labeled Poisson process, which reduces to
///
///   H_u(A) = sum over nonempty subsets b of the support of
///            (-1)^|b| phi(u, b) * sum over nonempty T within b of
///            (-1)^|T| log P(T).
///
/// Requires the finiteness test to pass; throws DivergentMeasure otherwise.
double pointwise_measure(const CanonicalSet& a, int outcome, const MeasureOptions& opts = {});

/// Probability-weighted average of pointwise_measure over the support.
double measure(const CanonicalSet& a, const MeasureOptions& opts = {});

/// Closed form for the measure of multi(blocks) over disjoint blocks:
/// sum over S of (-1)^(|S|+n) P(S) log P(S), with P(S) the total probability
/// of the blocks indexed by S. Used as an independent cross-check.
double measure_interior(std::span<const Event> blocks);

}  // namespace gim
