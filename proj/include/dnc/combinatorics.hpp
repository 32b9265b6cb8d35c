#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dnc/bigint.hpp"
#include "dnc/rational.hpp"

namespace dnc {

//! Partial order given by cover pairs (lesser, greater) over 0..n-1.
struct Poset {
    uint32_t element_count = 0;
    std::vector<std::pair<uint32_t, uint32_t>> covers;
};

//! Full k-ary sink tree of the given height (root at height 0).
struct KaryTreeSpec {
    uint32_t outdegree = 2;
    uint32_t height = 1;

    uint64_t nodeCount() const;
};

//! Sink-tree poset: every child is covered by its parent toward the root.
Poset karyTreePoset(const KaryTreeSpec& spec);

//! True when every element has at most one upper cover and no cycles.
bool isRootedForest(const Poset& p);

//! n! / product of subtree sizes; forests only.
BigInt hookLengthCount(const Poset& p);

enum class LinextMethod { VarolRotem, Auto };

struct LinextOptions {
    size_t max_elements = 15;      // enumeration size limit
    uint64_t budget = 100000000;   // abort enumeration beyond this many extensions
};

struct LinextResult {
    BigInt count;
    bool enumerated;  // false = closed form
};

/*!
 * Exact number of linear extensions. VarolRotem enumerates all extensions by
 * adjacent transpositions over a topologically sorted base order; Auto takes
 * the hook-length closed form for rooted forests and enumerates otherwise.
 * Throws TooLarge when the enumeration limit or budget is exceeded.
 */
LinextResult countLinearExtensions(const Poset& p, LinextMethod method,
                                   const LinextOptions& options = {});

//! 2^{n-1} sub-tandem decompositions of an n-tandem.
BigInt countDecompositions(uint32_t n);

//! Average sub-tandem count over all decompositions: (h+1)/2.
Rat avgSubtandems(uint32_t h);

enum class OpBoundKind { SfaTandem, AlgdncTandem, SfaSinktree, AlgdncSinktree };

struct OpBoundValue {
    std::optional<Rat> exact;  // present when the printed formula is rational
    double approx = 0.0;
};

/*!
 * Closed-form operation-count bounds:
 *   SfaTandem(h, m)     h*m * sum_d m^{2-d(d+1)} * sum_i m^{(i-1)i}
 *   AlgdncTandem(h)     h*2^h + 1
 *   SfaSinktree(k, h)   8(h+1)m k^{4h} * sum of the printed double series
 *   AlgdncSinktree(n)   2n(1 + 2 log2 n) + 9
 * The sink-tree formulas involve half-integer powers / logarithms for some
 * parameters; those evaluate in double precision only.
 */
OpBoundValue opCountBound(OpBoundKind kind, uint64_t a, uint64_t b = 0);

//! Exhaustive foi-analysis structural op count on an h-tandem: h*2^{h-1}+1.
BigInt foiTandemStructuralOps(uint32_t h);

}  // namespace dnc
