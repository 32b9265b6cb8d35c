#include "dnc/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dnc/errors.hpp"

namespace dnc {

uint64_t KaryTreeSpec::nodeCount() const {
    if (outdegree == 1) return height + 1;
    uint64_t n = 0, layer = 1;
    for (uint32_t level = 0; level <= height; ++level) {
        n += layer;
        layer *= outdegree;
    }
    return n;
}

Poset karyTreePoset(const KaryTreeSpec& spec) {
    if (spec.outdegree < 1) throw ValidationError("k-ary tree needs outdegree >= 1");
    Poset p;
    p.element_count = static_cast<uint32_t>(spec.nodeCount());
    // node 0 is the sink; children of v are k*v+1 .. k*v+k while in range
    for (uint32_t v = 0; v < p.element_count; ++v) {
        for (uint32_t c = 0; c < spec.outdegree; ++c) {
            uint64_t child = static_cast<uint64_t>(v) * spec.outdegree + 1 + c;
            if (child >= p.element_count) break;
            p.covers.emplace_back(static_cast<uint32_t>(child), v);  // child precedes parent
        }
    }
    return p;
}

namespace {

std::vector<std::vector<uint32_t>> upperAdjacency(const Poset& p) {
    std::vector<std::vector<uint32_t>> up(p.element_count);
    for (const auto& [lo, hi] : p.covers) {
        if (lo >= p.element_count || hi >= p.element_count)
            throw ValidationError("poset cover references unknown element");
        up[lo].push_back(hi);
    }
    return up;
}

std::optional<std::vector<uint32_t>> topoOrder(const Poset& p) {
    auto up = upperAdjacency(p);
    std::vector<uint32_t> indeg(p.element_count, 0);
    for (const auto& [lo, hi] : p.covers) ++indeg[hi];
    std::deque<uint32_t> ready;
    for (uint32_t v = 0; v < p.element_count; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::vector<uint32_t> order;
    while (!ready.empty()) {
        uint32_t v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (uint32_t w : up[v])
            if (--indeg[w] == 0) ready.push_back(w);
    }
    if (order.size() != p.element_count) return std::nullopt;
    return order;
}

}  // namespace

bool isRootedForest(const Poset& p) {
    std::vector<uint32_t> parents(p.element_count, 0);
    for (const auto& [lo, hi] : p.covers) {
        (void)hi;
        if (lo >= p.element_count) return false;
        if (++parents[lo] > 1) return false;
    }
    return topoOrder(p).has_value();
}

BigInt hookLengthCount(const Poset& p) {
    if (!isRootedForest(p)) throw ValidationError("hook-length count needs a rooted forest");
    std::vector<uint32_t> parent(p.element_count, UINT32_MAX);
    for (const auto& [lo, hi] : p.covers) parent[lo] = hi;
    // topo order lists children before parents, so one forward pass suffices
    auto order = *topoOrder(p);
    std::vector<uint64_t> size(p.element_count, 1);
    for (uint32_t v : order)
        if (parent[v] != UINT32_MAX) size[parent[v]] += size[v];
    BigInt denom(1ll);
    for (uint32_t v = 0; v < p.element_count; ++v)
        denom *= BigInt(static_cast<long long>(size[v]));
    return BigInt::factorial(p.element_count) / denom;
}

namespace {

// Varol-Rotem: enumerate all linear extensions by adjacent transpositions.
// Elements are relabeled so the identity is an extension; a swap moving a
// larger label left is allowed unless a cover forbids it.
class VarolRotem {
public:
    VarolRotem(const Poset& p, uint64_t budget) : n_(p.element_count), budget_(budget) {
        auto order = topoOrder(p);
        if (!order) throw ValidationError("poset has a cyclic cover relation");
        std::vector<uint32_t> labelOf(n_);
        for (uint32_t pos = 0; pos < n_; ++pos) labelOf[(*order)[pos]] = pos;
        prec_.assign(n_, std::vector<bool>(n_, false));
        for (const auto& [lo, hi] : p.covers) prec_[labelOf[lo]][labelOf[hi]] = true;
        arr_.resize(n_);
        for (uint32_t i = 0; i < n_; ++i) arr_[i] = i;
    }

    uint64_t count() {
        if (n_ == 0) return 1;
        count_ = 0;
        visit(1);
        return count_;
    }

private:
    uint32_t n_;
    uint64_t budget_;
    uint64_t count_ = 0;
    std::vector<std::vector<bool>> prec_;
    std::vector<uint32_t> arr_;

    void visit(size_t i) {
        if (i >= n_) {
            if (++count_ > budget_) throw TooLarge("linear-extension budget exceeded");
            return;
        }
        visit(i + 1);
        size_t k = i;
        while (k > 0 && !prec_[arr_[k - 1]][arr_[k]]) {
            std::swap(arr_[k - 1], arr_[k]);
            visit(i + 1);
            --k;
        }
        while (k < i) {
            std::swap(arr_[k], arr_[k + 1]);
            ++k;
        }
    }
};

}  // namespace

LinextResult countLinearExtensions(const Poset& p, LinextMethod method,
                                   const LinextOptions& options) {
    if (method == LinextMethod::Auto && isRootedForest(p))
        return {hookLengthCount(p), false};
    if (p.element_count > options.max_elements)
        throw TooLarge("poset too large for enumeration (limit " +
                       std::to_string(options.max_elements) + " elements)");
    // forests admit a budget pre-check through the closed form
    if (isRootedForest(p)) {
        BigInt exact = hookLengthCount(p);
        if (exact > BigInt(static_cast<unsigned long long>(options.budget)))
            throw TooLarge("enumeration budget exceeded (" + exact.toString() + " extensions)");
    }
    VarolRotem vr(p, options.budget);
    return {BigInt(static_cast<unsigned long long>(vr.count())), true};
}

BigInt countDecompositions(uint32_t n) {
    if (n < 1) throw ValidationError("tandem length must be >= 1");
    return BigInt(2ll).pow(n - 1);
}

Rat avgSubtandems(uint32_t h) {
    if (h < 1) throw ValidationError("tandem length must be >= 1");
    return Rat(static_cast<long long>(h) + 1, 2);
}

namespace {

Rat ratPow(const Rat& base, long long e) {
    if (e >= 0) return Rat(base.num().pow(static_cast<uint64_t>(e)), base.den().pow(static_cast<uint64_t>(e)));
    return Rat(base.den().pow(static_cast<uint64_t>(-e)), base.num().pow(static_cast<uint64_t>(-e)));
}

}  // namespace

BigInt foiTandemStructuralOps(uint32_t h) {
    if (h < 1) throw ValidationError("tandem length must be >= 1");
    return BigInt(static_cast<long long>(h)) * BigInt(2ll).pow(h - 1) + BigInt(1ll);
}

OpBoundValue opCountBound(OpBoundKind kind, uint64_t a, uint64_t b) {
    OpBoundValue out;
    switch (kind) {
        case OpBoundKind::SfaTandem: {
            // h*m * sum_{d=0}^{h-1} m^{2-d(d+1)} * sum_{i=d+1}^{h-1} m^{(i-1)i}
            long long h = static_cast<long long>(a), m = static_cast<long long>(b);
            if (h < 1 || m < 1) throw ValidationError("sfa_tandem needs h >= 1 and m >= 1");
            Rat sum(0);
            for (long long d = 0; d < h; ++d) {
                Rat inner(0);
                for (long long i = d + 1; i < h; ++i) inner += ratPow(Rat(m), (i - 1) * i);
                sum += ratPow(Rat(m), 2 - d * (d + 1)) * inner;
            }
            out.exact = Rat(h) * Rat(m) * sum;
            out.approx = out.exact->toDouble();
            return out;
        }
        case OpBoundKind::AlgdncTandem: {
            long long h = static_cast<long long>(a);
            if (h < 1) throw ValidationError("algdnc_tandem needs h >= 1");
            Rat v = Rat(h) * ratPow(Rat(2), h) + Rat(1);
            out.exact = v;
            out.approx = v.toDouble();
            return out;
        }
        case OpBoundKind::SfaSinktree: {
            long long k = static_cast<long long>(a), h = static_cast<long long>(b);
            if (k < 2 || h < 1) throw ValidationError("sfa_sinktree needs k >= 2 and h >= 1");
            // m flows: one per node
            BigInt nodes = (BigInt(k).pow(static_cast<uint64_t>(h) + 1) - BigInt(1ll)) / BigInt(k - 1);
            bool rational = h % 2 == 0;  // 3/2*(-h^2-8h+d^2+3d-2) is integral iff h is even
            Rat exactSum(0);
            double approxSum = 0.0;
            for (long long d = 0; d <= h; ++d) {
                Rat innerSum(0);
                for (long long i = d + 1; i <= h; ++i)
                    innerSum += ratPow(Rat(k), -i * (i - 3) / 2);  // i(i-3) is always even
                long long e3 = -h * h - 8 * h + d * d + 3 * d - 2;
                Rat term = ratPow(Rat(k), -3 * d) * Rat(2) * innerSum;
                if (rational)
                    exactSum += term + ratPow(Rat(k), -3 * d) * ratPow(Rat(k), 3 * e3 / 2);
                else
                    approxSum += term.toDouble() + std::pow(double(k), -3.0 * double(d)) *
                                                       std::pow(double(k), 1.5 * double(e3));
            }
            Rat prefix = Rat(8) * Rat(h + 1) * Rat::fromBig(nodes) * ratPow(Rat(k), 4 * h);
            if (rational) {
                out.exact = prefix * exactSum;
                out.approx = out.exact->toDouble();
            } else {
                out.approx = prefix.toDouble() * approxSum;
            }
            return out;
        }
        case OpBoundKind::AlgdncSinktree: {
            long long n = static_cast<long long>(a);
            if (n < 1) throw ValidationError("algdnc_sinktree needs n >= 1");
            // 2n(1 + 2 log2 n) + 9, exact when n is a power of two
            if ((n & (n - 1)) == 0) {
                long long lg = 0;
                for (long long v = n; v > 1; v >>= 1) ++lg;
                Rat v = Rat(2 * n) * (Rat(1) + Rat(2) * Rat(lg)) + Rat(9);
                out.exact = v;
                out.approx = v.toDouble();
            } else {
                out.approx = 2.0 * double(n) * (1.0 + 2.0 * std::log2(double(n))) + 9.0;
            }
            return out;
        }
    }
    throw ValidationError("unknown op-count bound kind");
}

}  // namespace dnc
