#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gim/rational.hpp"

namespace gim {

/// Hard construction limit on |Omega|: canonical-set tables are
/// |Omega| * 2^|Omega| bits.
inline constexpr int kMaxOutcomes = 16;

class FiniteProbSpace;
using SpacePtr = std::shared_ptr<const FiniteProbSpace>;

/// A finite probability space: distinct outcome labels with exact rational
/// probabilities that sum to one. Immutable after construction.
class FiniteProbSpace : public std::enable_shared_from_this<FiniteProbSpace> {
public:
    static SpacePtr create(std::vector<std::string> outcome_labels, std::vector<Rational> probs);

    /// Uniform space over n generated labels ("w0", "w1", ...).
    static SpacePtr uniform(int n);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& outcome_labels() const { return labels_; }
    const std::string& label(int i) const { return labels_[i]; }
    int outcome_index(const std::string& label) const;  // -1 when absent

    const Rational& prob(int i) const { return probs_[i]; }
    const std::vector<Rational>& probs() const { return probs_; }
    double prob_real(int i) const { return probs_real_[i]; }

    /// Bitmask of outcomes with positive probability.
    uint32_t support_mask() const { return support_; }
    int support_size() const;

    Rational event_prob(uint32_t members) const;
    double event_prob_real(uint32_t members) const { return to_double(event_prob(members)); }

    uint32_t full_mask() const { return (1u << size()) - 1; }

private:
    FiniteProbSpace(std::vector<std::string> labels, std::vector<Rational> probs);

    std::vector<std::string> labels_;
    std::vector<Rational> probs_;
    std::vector<double> probs_real_;
    uint32_t support_ = 0;
};

/// A subset of the outcomes of one space, stored as a bitmask.
struct Event {
    SpacePtr space;
    uint32_t members = 0;

    Event() = default;
    Event(SpacePtr sp, uint32_t mask);
    static Event from_labels(const SpacePtr& sp, std::span<const std::string> labels);

    bool contains(int outcome) const { return (members >> outcome) & 1u; }
    Rational prob() const { return space->event_prob(members); }
    double prob_real() const { return to_double(prob()); }
    bool is_empty() const { return members == 0; }

    Event complement() const { return Event(space, ~members & space->full_mask()); }
    Event intersect(const Event& other) const;
    Event unite(const Event& other) const;
    bool subset_of(const Event& other) const;
    bool disjoint_from(const Event& other) const;
};

/// A random variable as a total labeling outcome -> value id. Value ids are
/// dense 0..value_count-1; the induced partition blocks are the preimages.
class RandomVariable {
public:
    RandomVariable() = default;
    RandomVariable(SpacePtr space, std::vector<int> labeling);

    /// Builds the labeling from a partition given as a list of disjoint
    /// covering events; block i gets value id i.
    static RandomVariable from_partition(const SpacePtr& sp, std::span<const Event> blocks);

    /// Constant random variable (single value).
    static RandomVariable constant(const SpacePtr& sp);

    /// Identity labeling: every outcome its own value.
    static RandomVariable identity(const SpacePtr& sp);

    const SpacePtr& space() const { return space_; }
    int value(int outcome) const { return labeling_[outcome]; }
    const std::vector<int>& labeling() const { return labeling_; }
    int value_count() const { return value_count_; }

    /// Preimage of value id v as an event.
    Event preimage(int v) const;
    const std::vector<Event>& induced_partition() const { return partition_; }

    Rational value_prob(int v) const { return partition_[v].prob(); }

private:
    SpacePtr space_;
    std::vector<int> labeling_;
    int value_count_ = 0;
    std::vector<Event> partition_;
};

/// Joint variable (X, Y): values are dense ids of observed value pairs.
RandomVariable joint(const RandomVariable& x, const RandomVariable& y);
RandomVariable joint(std::span<const RandomVariable> xs);

// Classical information quantities, natural log throughout. These serve as
// the independent oracles for the set-measure machinery.

double entropy(const RandomVariable& x);
double self_info(const RandomVariable& x, int outcome);
double cond_entropy(const RandomVariable& y, const RandomVariable& x);
double mutual_info(const RandomVariable& x, const RandomVariable& y);
double cond_mutual_info(const RandomVariable& x, const RandomVariable& y, const RandomVariable& z);
double multivariate_mi(std::span<const RandomVariable> xs);

/// H(X | E) under the conditional distribution, unscaled.
double cond_entropy_event(const RandomVariable& x, const Event& e);

/// Cross entropy H(P_{X|E}, P_{X|F}); +infinity when P_{X|E} is not
/// absolutely continuous w.r.t. P_{X|F}.
double cross_entropy_events(const RandomVariable& x, const Event& e, const Event& f);

/// D_KL(P_{X|E} || P_{X|F}); requires E to be contained in F.
double kl_events(const RandomVariable& x, const Event& e, const Event& f);

/// Order-k Tsallis entropy, k >= 2: (1 - sum_x p^k) / (k - 1).
double tsallis(const RandomVariable& x, int k);

/// Exact pair probability 1 - sum_x p_X(x)^2, i.e. (k-1) S_k for k = 2.
Rational distinct_pair_prob(const RandomVariable& x);

/// Minimum information: sum_x P(X=x) min_i D_KL(P_{Yi|X=x} || P_{Yi}).
double i_min(const RandomVariable& x, std::span<const RandomVariable> ys);

double binary_entropy(double p);

}  // namespace gim
