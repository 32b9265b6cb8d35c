#pragma once

#include <optional>

#include "dnc/curve.hpp"

namespace dnc {

//! Pointwise sum (f+g)(t); closed under wide-sense increasing PWL.
Curve aggregate(const Curve& f, const Curve& g);

//! Pointwise minimum; used to combine alternative arrival bounds.
Curve minimum(const Curve& f, const Curve& g);

/*!
 * (min,+) convolution (f (x) g)(t) = inf_{0<=u<=t} f(t-u) + g(u).
 *
 * Closed forms: rate-latency pairs convolve to beta_{min(R), T1+T2};
 * concave curves through the origin convolve to their pointwise minimum;
 * a burst-delay curve shifts the other operand. Other shape pairs throw
 * UnsupportedShape.
 */
Curve convolve(const Curve& f, const Curve& g);

/*!
 * (min,+) deconvolution (f (/) g)(d) = sup_{u>=0} f(d+u) - g(u) for
 * concave f and convex g; re-anchored to pass through the origin.
 * Throws UnboundedResult when f's long-term rate exceeds g's.
 */
Curve deconvolve(const Curve& f, const Curve& g);

/*!
 * Left-over service: non-decreasing upper closure of (beta - alpha),
 * clipped below at zero. Requires convex beta, concave alpha; throws
 * UnboundedResult when the residual rate is not positive.
 */
Curve subtractAndClose(const Curve& beta, const Curve& alpha);

//! Worst-case delay: sup_d inf{tau >= 0 : alpha(d) <= beta(d+tau)}.
Rat horizontalDeviation(const Curve& alpha, const Curve& beta);

//! Worst-case backlog: sup_d alpha(d) - beta(d).
Rat verticalDeviation(const Curve& alpha, const Curve& beta);

//! Clip the burstiness f(0+) to at most bmax; slopes are kept.
Curve capBurst(const Curve& f, const Rat& bmax);

//! Output bound alpha (/) betaLo, optionally burst-capped.
Curve outputBound(const Curve& alpha, const Curve& betaLo,
                  const std::optional<Rat>& burstCap = std::nullopt);

}  // namespace dnc
