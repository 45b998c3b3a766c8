#include "gim/prob.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace gim {

namespace {

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
    require(a == b, "operands must live on the same probability space");
}

}  // namespace

FiniteProbSpace::FiniteProbSpace(std::vector<std::string> labels, std::vector<Rational> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
    probs_real_.reserve(probs_.size());
    for (size_t i = 0; i < probs_.size(); ++i) {
        probs_real_.push_back(to_double(probs_[i]));
        if (probs_[i] > 0) support_ |= 1u << i;
    }
}

SpacePtr FiniteProbSpace::create(std::vector<std::string> labels, std::vector<Rational> probs) {
    require(!labels.empty() && labels.size() <= kMaxOutcomes,
            "outcome count must be between 1 and 16");
    require(labels.size() == probs.size(), "outcome labels and probabilities differ in length");
    std::set<std::string> distinct(labels.begin(), labels.end());
    require(distinct.size() == labels.size(), "outcome labels must be unique");
    Rational total = 0;
    for (const auto& p : probs) {
        require(p >= 0, "probabilities must be nonnegative");
        total += p;
    }
    require(total == 1, "probabilities must sum to exactly 1");
    return SpacePtr(new FiniteProbSpace(std::move(labels), std::move(probs)));
}

SpacePtr FiniteProbSpace::uniform(int n) {
    std::vector<std::string> labels;
    std::vector<Rational> probs(n, Rational(1, n));
    for (int i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
    return create(std::move(labels), std::move(probs));
}

int FiniteProbSpace::outcome_index(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

int FiniteProbSpace::support_size() const { return std::popcount(support_); }

Rational FiniteProbSpace::event_prob(uint32_t members) const {
    Rational p = 0;
    for (uint32_t m = members & full_mask(); m; m &= m - 1)
        p += probs_[std::countr_zero(m)];
    return p;
}

Event::Event(SpacePtr sp, uint32_t mask) : space(std::move(sp)), members(mask) {
    require(space != nullptr, "event needs a space");
    require((mask & ~space->full_mask()) == 0, "event members must be outcomes of its space");
}

Event Event::from_labels(const SpacePtr& sp, std::span<const std::string> labels) {
    uint32_t mask = 0;
    for (const auto& l : labels) {
        int i = sp->outcome_index(l);
        require(i >= 0, "event member is not an outcome of the space");
        mask |= 1u << i;
    }
    return Event(sp, mask);
}

Event Event::intersect(const Event& other) const {
    require_same_space(space, other.space);
    return Event(space, members & other.members);
}

Event Event::unite(const Event& other) const {
    require_same_space(space, other.space);
    return Event(space, members | other.members);
}

bool Event::subset_of(const Event& other) const {
    require_same_space(space, other.space);
    return (members & ~other.members) == 0;
}

bool Event::disjoint_from(const Event& other) const {
    require_same_space(space, other.space);
    return (members & other.members) == 0;
}

RandomVariable::RandomVariable(SpacePtr space, std::vector<int> labeling)
    : space_(std::move(space)) {
    require(space_ != nullptr, "random variable needs a space");
    require(static_cast<int>(labeling.size()) == space_->size(),
            "labeling must assign a value to every outcome");
    // Re-index values densely in order of first appearance.
    std::map<int, int> dense;
    labeling_.reserve(labeling.size());
    for (int raw : labeling) {
        auto [it, inserted] = dense.emplace(raw, value_count_);
        if (inserted) ++value_count_;
        labeling_.push_back(it->second);
    }
    std::vector<uint32_t> masks(value_count_, 0);
    for (int u = 0; u < space_->size(); ++u) masks[labeling_[u]] |= 1u << u;
    partition_.reserve(value_count_);
    for (uint32_t m : masks) partition_.emplace_back(space_, m);
}

RandomVariable RandomVariable::from_partition(const SpacePtr& sp, std::span<const Event> blocks) {
    std::vector<int> labeling(sp->size(), -1);
    for (size_t b = 0; b < blocks.size(); ++b) {
        require(blocks[b].space == sp, "partition block on wrong space");
        for (int u = 0; u < sp->size(); ++u) {
            if (!blocks[b].contains(u)) continue;
            require(labeling[u] == -1, "partition blocks must be disjoint");
            labeling[u] = static_cast<int>(b);
        }
    }
    for (int v : labeling) require(v >= 0, "partition blocks must cover the space");
    return RandomVariable(sp, std::move(labeling));
}

RandomVariable RandomVariable::constant(const SpacePtr& sp) {
    return RandomVariable(sp, std::vector<int>(sp->size(), 0));
}

RandomVariable RandomVariable::identity(const SpacePtr& sp) {
    std::vector<int> labeling(sp->size());
    for (int i = 0; i < sp->size(); ++i) labeling[i] = i;
    return RandomVariable(sp, std::move(labeling));
}

Event RandomVariable::preimage(int v) const {
    require(v >= 0 && v < value_count_, "value id out of range");
    return partition_[v];
}

RandomVariable joint(const RandomVariable& x, const RandomVariable& y) {
    require_same_space(x.space(), y.space());
    std::vector<int> labeling(x.space()->size());
    for (int u = 0; u < x.space()->size(); ++u)
        labeling[u] = x.value(u) * y.value_count() + y.value(u);
    return RandomVariable(x.space(), std::move(labeling));
}

RandomVariable joint(std::span<const RandomVariable> xs) {
    require(!xs.empty(), "joint of an empty list");
    RandomVariable acc = xs[0];
    for (size_t i = 1; i < xs.size(); ++i) acc = joint(acc, xs[i]);
    return acc;
}

double entropy(const RandomVariable& x) {
    double h = 0.0;
    for (const Event& block : x.induced_partition()) h -= xlogx(block.prob_real());
    return h;
}

double self_info(const RandomVariable& x, int outcome) {
    require(outcome >= 0 && outcome < x.space()->size(), "outcome out of range");
    Rational p = x.value_prob(x.value(outcome));
    if (p == 0) throw std::invalid_argument("self-information of a zero-probability value");
    return -std::log(to_double(p));
}

double cond_entropy(const RandomVariable& y, const RandomVariable& x) {
    require_same_space(x.space(), y.space());
    return entropy(joint(x, y)) - entropy(x);
}

double mutual_info(const RandomVariable& x, const RandomVariable& y) {
    require_same_space(x.space(), y.space());
    return entropy(x) + entropy(y) - entropy(joint(x, y));
}

double cond_mutual_info(const RandomVariable& x, const RandomVariable& y,
                        const RandomVariable& z) {
    require_same_space(x.space(), y.space());
    require_same_space(x.space(), z.space());
    return entropy(joint(x, z)) + entropy(joint(y, z)) - entropy(joint(joint(x, y), z)) -
           entropy(z);
}

double multivariate_mi(std::span<const RandomVariable> xs) {
    require(!xs.empty(), "multivariate MI of an empty list");
    size_t n = xs.size();
    require(n <= 16, "too many variables");
    // Inclusion-exclusion over joint entropies: sum over nonempty T of
    // (-1)^(|T|+1) H(X_T).
    double total = 0.0;
    for (uint32_t t = 1; t < (1u << n); ++t) {
        std::vector<RandomVariable> part;
        for (size_t i = 0; i < n; ++i)
            if ((t >> i) & 1u) part.push_back(xs[i]);
        double h = entropy(joint(std::span<const RandomVariable>(part)));
        total += (std::popcount(t) % 2 == 1) ? h : -h;
    }
    return total;
}

double cond_entropy_event(const RandomVariable& x, const Event& e) {
    require_same_space(x.space(), e.space);
    Rational pe = e.prob();
    if (pe == 0) throw std::invalid_argument("conditioning on a zero-probability event");
    double h = 0.0;
    for (const Event& block : x.induced_partition())
        h -= xlogx(to_double(block.intersect(e).prob() / pe));
    return h;
}

double cross_entropy_events(const RandomVariable& x, const Event& e, const Event& f) {
    require_same_space(x.space(), e.space);
    require_same_space(x.space(), f.space);
    Rational pe = e.prob(), pf = f.prob();
    if (pe == 0 || pf == 0) throw std::invalid_argument("conditioning on a zero-probability event");
    double h = 0.0;
    for (const Event& block : x.induced_partition()) {
        Rational p = block.intersect(e).prob() / pe;
        if (p == 0) continue;
        Rational q = block.intersect(f).prob() / pf;
        if (q == 0) return std::numeric_limits<double>::infinity();
        h -= to_double(p) * std::log(to_double(q));
    }
    return h;
}

double kl_events(const RandomVariable& x, const Event& e, const Event& f) {
    if (!e.subset_of(f)) throw std::invalid_argument("KL between event conditionals needs E within F");
    return cross_entropy_events(x, e, f) - cond_entropy_event(x, e);
}

double tsallis(const RandomVariable& x, int k) {
    require(k >= 2, "Tsallis order must be at least 2");
    double sum = 0.0;
    for (const Event& block : x.induced_partition()) sum += std::pow(block.prob_real(), k);
    return (1.0 - sum) / (k - 1);
}

Rational distinct_pair_prob(const RandomVariable& x) {
    Rational sum = 0;
    for (const Event& block : x.induced_partition()) {
        Rational p = block.prob();
        sum += p * p;
    }
    return 1 - sum;
}

double i_min(const RandomVariable& x, std::span<const RandomVariable> ys) {
    require(!ys.empty(), "minimum information needs at least one variable");
    Event omega(x.space(), x.space()->full_mask());
    double total = 0.0;
    for (const Event& block : x.induced_partition()) {
        if (block.prob() == 0)
            throw std::invalid_argument("minimum information needs P(X=x) > 0 for every value");
        double best = std::numeric_limits<double>::infinity();
        for (const RandomVariable& y : ys) best = std::min(best, kl_events(y, block, omega));
        total += block.prob_real() * best;
    }
    return total;
}

double binary_entropy(double p) {
    require(p >= 0.0 && p <= 1.0, "binary entropy argument must lie in [0, 1]");
    return -xlogx(p) - xlogx(1.0 - p);
}

}  // namespace gim
