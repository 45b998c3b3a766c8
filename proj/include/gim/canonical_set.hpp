#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gim/prob.hpp"

namespace gim {

/// A set of finite outcome tuples (length >= 1) in canonical form.
///
/// Membership of a tuple (w0, w1, ..., wk) is stored as a Boolean table
/// phi(w0, b) over the first element w0 and the *set* b = {w1, ..., wk} of the
/// remaining elements. Every construction offered here is invariant under
/// permuting or duplicating the non-first entries, so this finite table is a
/// faithful encoding. The table has |Omega| * 2^|Omega| entries.
///
/// Values are immutable; Boolean operations return new tables.
class CanonicalSet {
public:
    // Constructors of the named set families.

    /// Tuples whose entries all lie in E.
    static CanonicalSet from_event(const Event& e);

    /// Tuples whose X-values are not all equal.
    static CanonicalSet from_rv(const RandomVariable& x);

    /// Tuples with first entry in E and all later entries in F.
    static CanonicalSet cross(const Event& e, const Event& f);

    /// cross(E, F) minus from_event(E); requires E within F.
    static CanonicalSet relative(const Event& e, const Event& f);

    /// Tuples that touch every block and stay inside the union of the blocks.
    /// Blocks must be pairwise disjoint.
    static CanonicalSet multi(std::span<const Event> blocks);

    /// Tuples whose set of W-values belongs to the family. Each family member
    /// is a bitmask over W's value ids.
    static CanonicalSet from_labeling_family(const RandomVariable& w,
                                             std::span<const uint32_t> value_sets);

    static CanonicalSet empty_set(const SpacePtr& sp);
    static CanonicalSet full_set(const SpacePtr& sp);

    const SpacePtr& space() const { return space_; }

    bool phi(int first, uint32_t rest) const {
        size_t idx = index(first, rest);
        return (bits_[idx >> 6] >> (idx & 63)) & 1u;
    }

    // Boolean algebra (complement is relative to the full set of tuples).
    CanonicalSet unite(const CanonicalSet& other) const;
    CanonicalSet intersect(const CanonicalSet& other) const;
    CanonicalSet difference(const CanonicalSet& other) const;
    CanonicalSet complement() const;

    bool is_empty() const;
    bool is_subset(const CanonicalSet& other) const;
    bool is_disjoint(const CanonicalSet& other) const;
    bool operator==(const CanonicalSet& other) const;

    /// Membership of an explicit tuple of outcome indices (length >= 1).
    bool contains_tuple(std::span<const int> tuple) const;

    /// True when the measure of this set converges: for every support outcome
    /// w0, the alternating sum of phi(w0, b) over all subsets b of the support
    /// vanishes. All named constructors above satisfy this; arbitrary tables
    /// need not.
    bool is_measure_finite() const;

private:
    explicit CanonicalSet(SpacePtr sp);

    size_t index(int first, uint32_t rest) const {
        return (static_cast<size_t>(first) << space_->size()) | rest;
    }
    void set_phi(int first, uint32_t rest) {
        size_t idx = index(first, rest);
        bits_[idx >> 6] |= uint64_t(1) << (idx & 63);
    }
    void check_same_space(const CanonicalSet& other) const;

    SpacePtr space_;
    std::vector<uint64_t> bits_;  // index = first << n | rest_mask
};

}  // namespace gim
