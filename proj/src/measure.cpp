#include "gim/measure.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gim/errors.hpp"

namespace gim {

namespace {

int parity(uint32_t mask) { return std::popcount(mask) % 2 == 0 ? 1 : -1; }

// Shared per-space state: the support outcomes in index order and
// log P(T) for every nonempty subset T of the support (compact masks).
struct Evaluator {
    const FiniteProbSpace& space;
    std::vector<int> supp;        // compact position -> outcome index
    std::vector<double> log_p;    // compact mask -> log P(T)

    explicit Evaluator(const FiniteProbSpace& sp) : space(sp) {
        uint32_t mask = sp.support_mask();
        for (int u = 0; u < sp.size(); ++u)
            if ((mask >> u) & 1u) supp.push_back(u);
        size_t count = size_t(1) << supp.size();
        log_p.assign(count, 0.0);
        std::vector<Rational> p(count, Rational(0));
        for (size_t t = 1; t < count; ++t) {
            size_t low = t & (t - 1);
            p[t] = p[low] + sp.prob(supp[std::countr_zero(static_cast<uint32_t>(t))]);
            log_p[t] = std::log(to_double(p[t]));
        }
    }

    uint32_t expand(uint32_t compact) const {
        uint32_t full = 0;
        for (uint32_t m = compact; m; m &= m - 1) full |= 1u << supp[std::countr_zero(m)];
        return full;
    }

    // Net integer coefficients c_T = (-1)^|T| * sum_{b >= T} (-1)^|b| phi(u, b),
    // then H_u = sum_T c_T log P(T). Integer cancellation happens before any
    // floating-point sum, so identities like H(full) = 0 come out exact.
    double pointwise(const CanonicalSet& a, int u) const {
        size_t count = size_t(1) << supp.size();
        std::vector<int64_t> coef(count, 0);
        for (size_t b = 0; b < count; ++b)
            if (a.phi(u, expand(static_cast<uint32_t>(b))))
                coef[b] = parity(static_cast<uint32_t>(b));
        // Superset-sum transform in place: coef[t] <- sum_{b >= t} coef[b].
        for (size_t bit = 0; bit < supp.size(); ++bit)
            for (size_t t = 0; t < count; ++t)
                if (!(t & (size_t(1) << bit))) coef[t] += coef[t | (size_t(1) << bit)];
        double value = 0.0;
        for (size_t t = 1; t < count; ++t) {
            int64_t c = parity(static_cast<uint32_t>(t)) * coef[t];
            if (c != 0) value += static_cast<double>(c) * log_p[t];
        }
        return value;
    }

    // Row-level finiteness: the alternating sum over support subsets must
    // vanish for the truncated process sum to converge at this u.
    bool row_finite(const CanonicalSet& a, int u) const {
        size_t count = size_t(1) << supp.size();
        long sum = 0;
        for (size_t b = 0; b < count; ++b)
            if (a.phi(u, expand(static_cast<uint32_t>(b)))) sum += parity(static_cast<uint32_t>(b));
        return sum == 0;
    }
};

void check_guard(const FiniteProbSpace& sp, const MeasureOptions& opts) {
    if (sp.size() > opts.max_omega)
        throw OmegaGuardExceeded("exact measure evaluation is limited to " +
                                 std::to_string(opts.max_omega) +
                                 " outcomes (raise the guard to override)");
}

}  // namespace

double pointwise_measure(const CanonicalSet& a, int outcome, const MeasureOptions& opts) {
    const FiniteProbSpace& sp = *a.space();
    if (outcome < 0 || outcome >= sp.size()) throw std::invalid_argument("outcome out of range");
    check_guard(sp, opts);
    if (!a.is_measure_finite()) throw DivergentMeasure("set has no finite measure");
    Evaluator ev(sp);
    if (!ev.row_finite(a, outcome))
        throw DivergentMeasure("pointwise measure diverges at this outcome");
    return ev.pointwise(a, outcome);
}

double measure(const CanonicalSet& a, const MeasureOptions& opts) {
    const FiniteProbSpace& sp = *a.space();
    check_guard(sp, opts);
    if (!a.is_measure_finite()) throw DivergentMeasure("set has no finite measure");
    Evaluator ev(sp);
    double total = 0.0;
    for (int u : ev.supp) total += sp.prob_real(u) * ev.pointwise(a, u);
    return total;
}

double measure_interior(std::span<const Event> blocks) {
    if (blocks.empty()) throw std::invalid_argument("interior formula needs at least one block");
    const SpacePtr& sp = blocks[0].space;
    uint32_t seen = 0;
    std::vector<Rational> block_p;
    for (const Event& b : blocks) {
        if (b.space != sp) throw std::invalid_argument("blocks on one space");
        if (seen & b.members) throw std::invalid_argument("blocks must be pairwise disjoint");
        seen |= b.members;
        block_p.push_back(b.prob());
    }
    size_t n = blocks.size();
    int sign_n = (n % 2 == 0) ? 1 : -1;
    double total = 0.0;
    for (uint32_t s = 0; s < (1u << n); ++s) {
        Rational p = 0;
        for (uint32_t m = s; m; m &= m - 1) p += block_p[std::countr_zero(m)];
        if (p == 0) continue;  // 0 log 0 = 0
        double pd = to_double(p);
        total += sign_n * parity(s) * pd * std::log(pd);
    }
    return total;
}

}  // namespace gim
