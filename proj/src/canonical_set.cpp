#include "gim/canonical_set.hpp"

#include <bit>
#include <stdexcept>

namespace gim {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

CanonicalSet::CanonicalSet(SpacePtr sp) : space_(std::move(sp)) {
    size_t entries = static_cast<size_t>(space_->size()) << space_->size();
    bits_.assign((entries + 63) / 64, 0);
}

CanonicalSet CanonicalSet::empty_set(const SpacePtr& sp) { return CanonicalSet(sp); }

CanonicalSet CanonicalSet::full_set(const SpacePtr& sp) {
    CanonicalSet s(sp);
    for (auto& w : s.bits_) w = ~uint64_t(0);
    size_t entries = static_cast<size_t>(sp->size()) << sp->size();
    if (size_t tail = entries & 63) s.bits_.back() = (uint64_t(1) << tail) - 1;
    return s;
}

CanonicalSet CanonicalSet::from_event(const Event& e) {
    CanonicalSet s(e.space);
    int n = e.space->size();
    for (int w0 = 0; w0 < n; ++w0) {
        if (!e.contains(w0)) continue;
        // b must stay inside E: enumerate submasks of E's member mask.
        uint32_t m = e.members;
        for (uint32_t b = m;; b = (b - 1) & m) {
            s.set_phi(w0, b);
            if (b == 0) break;
        }
    }
    return s;
}

CanonicalSet CanonicalSet::from_rv(const RandomVariable& x) {
    CanonicalSet s(x.space());
    int n = x.space()->size();
    uint32_t full = x.space()->full_mask();
    for (int w0 = 0; w0 < n; ++w0) {
        // Values of {w0} u b are not all equal iff b leaves w0's block.
        uint32_t block = x.preimage(x.value(w0)).members;
        for (uint32_t b = 0; b <= full; ++b)
            if (b & ~block) s.set_phi(w0, b);
    }
    return s;
}

CanonicalSet CanonicalSet::cross(const Event& e, const Event& f) {
    require(e.space == f.space, "cross needs events on one space");
    CanonicalSet s(e.space);
    for (int w0 = 0; w0 < e.space->size(); ++w0) {
        if (!e.contains(w0)) continue;
        uint32_t m = f.members;
        for (uint32_t b = m;; b = (b - 1) & m) {
            s.set_phi(w0, b);
            if (b == 0) break;
        }
    }
    return s;
}

CanonicalSet CanonicalSet::relative(const Event& e, const Event& f) {
    require(e.subset_of(f), "relative set needs E within F");
    return cross(e, f).difference(from_event(e));
}

CanonicalSet CanonicalSet::multi(std::span<const Event> blocks) {
    require(!blocks.empty(), "multi needs at least one block");
    const SpacePtr& sp = blocks[0].space;
    uint32_t cover = 0;
    for (const Event& b : blocks) {
        require(b.space == sp, "multi blocks on one space");
        require((cover & b.members) == 0, "multi blocks must be pairwise disjoint");
        cover |= b.members;
    }
    CanonicalSet s(sp);
    for (int w0 = 0; w0 < sp->size(); ++w0) {
        if (!((cover >> w0) & 1u)) continue;
        uint32_t m = cover;
        for (uint32_t b = m;; b = (b - 1) & m) {
            uint32_t tuple = b | (1u << w0);
            bool touches_all = true;
            for (const Event& blk : blocks)
                if (!(tuple & blk.members)) { touches_all = false; break; }
            if (touches_all) s.set_phi(w0, b);
            if (b == 0) break;
        }
    }
    return s;
}

CanonicalSet CanonicalSet::from_labeling_family(const RandomVariable& w,
                                                std::span<const uint32_t> value_sets) {
    CanonicalSet s(w.space());
    int n = w.space()->size();
    uint32_t full = w.space()->full_mask();
    for (int w0 = 0; w0 < n; ++w0) {
        for (uint32_t b = 0; b <= full; ++b) {
            uint32_t values = 1u << w.value(w0);
            for (uint32_t m = b; m; m &= m - 1) values |= 1u << w.value(std::countr_zero(m));
            for (uint32_t member : value_sets)
                if (values == member) { s.set_phi(w0, b); break; }
        }
    }
    return s;
}

void CanonicalSet::check_same_space(const CanonicalSet& other) const {
    require(space_ == other.space_, "set operation across different spaces");
}

CanonicalSet CanonicalSet::unite(const CanonicalSet& other) const {
    check_same_space(other);
    CanonicalSet out(space_);
    for (size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | other.bits_[i];
    return out;
}

CanonicalSet CanonicalSet::intersect(const CanonicalSet& other) const {
    check_same_space(other);
    CanonicalSet out(space_);
    for (size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
    return out;
}

CanonicalSet CanonicalSet::difference(const CanonicalSet& other) const {
    check_same_space(other);
    CanonicalSet out(space_);
    for (size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & ~other.bits_[i];
    return out;
}

CanonicalSet CanonicalSet::complement() const {
    return full_set(space_).difference(*this);
}

bool CanonicalSet::is_empty() const {
    for (uint64_t w : bits_)
        if (w) return false;
    return true;
}

bool CanonicalSet::is_subset(const CanonicalSet& other) const {
    check_same_space(other);
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~other.bits_[i]) return false;
    return true;
}

bool CanonicalSet::is_disjoint(const CanonicalSet& other) const {
    check_same_space(other);
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & other.bits_[i]) return false;
    return true;
}

bool CanonicalSet::operator==(const CanonicalSet& other) const {
    return space_ == other.space_ && bits_ == other.bits_;
}

bool CanonicalSet::contains_tuple(std::span<const int> tuple) const {
    require(!tuple.empty(), "tuples have length >= 1");
    uint32_t rest = 0;
    for (size_t i = 0; i < tuple.size(); ++i) {
        require(tuple[i] >= 0 && tuple[i] < space_->size(), "tuple entry out of range");
        if (i > 0) rest |= 1u << tuple[i];
    }
    return phi(tuple[0], rest);
}

bool CanonicalSet::is_measure_finite() const {
    uint32_t supp = space_->support_mask();
    for (int w0 = 0; w0 < space_->size(); ++w0) {
        if (!((supp >> w0) & 1u)) continue;
        long sum = 0;
        for (uint32_t b = supp;; b = (b - 1) & supp) {
            if (phi(w0, b)) sum += (std::popcount(b) % 2 == 0) ? 1 : -1;
            if (b == 0) break;
        }
        if (sum != 0) return false;
    }
    return true;
}

}  // namespace gim
