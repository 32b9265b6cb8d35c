#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dnc/rational.hpp"

namespace dnc {

//! Token-bucket arrival parameters: 0 at d=0, burst + rate*d for d>0.
struct TokenBucketParams {
    Rat rate;
    Rat burst;
};

//! Rate-latency service parameters: max{0, rate*(d - latency)}.
struct RateLatencyParams {
    Rat rate;
    Rat latency;
};

/*!
 * Ultimately affine, wide-sense increasing piecewise-linear curve with
 * f(0) = 0.
 *
 * Segment i holds the right-limit value at its start time and the slope on
 * (start_i, start_{i+1}]. Start times are strictly increasing with one
 * exception: a discontinuity at the origin (token-bucket burst) is encoded
 * as a zero-length first segment (0,0,0) followed by a second segment that
 * also starts at 0 and carries the jump value. The last segment extends to
 * +infinity unless the curve has an infinite tail (burst-delay curves),
 * in which case the value is +infinity beyond `infFrom`.
 */
class Curve {
public:
    struct Segment {
        Rat start;
        Rat value;  // right-limit at `start`
        Rat slope;
        bool operator==(const Segment& o) const {
            return start == o.start && value == o.value && slope == o.slope;
        }
    };

    Curve() : segs_{{Rat(0), Rat(0), Rat(0)}} {}
    explicit Curve(std::vector<Segment> segs, std::optional<Rat> inf_from = std::nullopt);

    static Curve zero() { return Curve(); }
    static Curve tokenBucket(const Rat& rate, const Rat& burst);
    static Curve tokenBucket(const TokenBucketParams& p) { return tokenBucket(p.rate, p.burst); }
    static Curve rateLatency(const Rat& rate, const Rat& latency);
    static Curve rateLatency(const RateLatencyParams& p) { return rateLatency(p.rate, p.latency); }
    //! delta_T: 0 up to T, +infinity afterwards; delta_0 is the convolution identity.
    static Curve burstDelay(const Rat& latency);

    const std::vector<Segment>& segments() const { return segs_; }
    bool hasInfiniteTail() const { return inf_from_.has_value(); }
    const Rat& infFrom() const { return *inf_from_; }

    //! f(t); nullopt means +infinity.
    std::optional<Rat> eval(const Rat& t) const;
    //! Value approached from the right; t must lie in the finite region.
    Rat rightLimit(const Rat& t) const;
    //! Slope of the piece immediately to the right of t.
    Rat slopeRightOf(const Rat& t) const;

    //! Jump at the origin: f(0+).
    Rat burstValue() const { return rightLimit(Rat(0)); }
    Rat tailSlope() const { return segs_.back().slope; }
    //! Last piece extended back to t=0.
    Rat tailIntercept() const;

    bool isZero() const;
    bool hasJumpAtOrigin() const;
    //! Concave on (0,inf), possibly with a jump at the origin (arrival shapes).
    bool isConcaveShape() const;
    //! Continuous convex through the origin (service shapes).
    bool isConvexShape() const;
    std::optional<TokenBucketParams> asTokenBucket() const;
    std::optional<RateLatencyParams> asRateLatency() const;

    bool operator==(const Curve& o) const;
    bool operator!=(const Curve& o) const { return !(*this == o); }

    //! Throws ValidationError naming the violated invariant.
    void validate() const;

    //! Debug/CSV text: TB(r,b), RL(R,T), DELTA(T) or PWL[(t,v,s);...].
    std::string toText() const;
    static Curve parseText(std::string_view text);

private:
    std::vector<Segment> segs_;
    std::optional<Rat> inf_from_;

    void canonicalize();
    size_t pieceIndexBefore(const Rat& t) const;  // last segment with start < t
    friend class CurveBuilder;
};

//! Accumulates (start, value, slope) pieces for t > 0 and produces a canonical Curve.
class CurveBuilder {
public:
    void add(Rat start, Rat value, Rat slope);
    Curve finish(std::optional<Rat> inf_from = std::nullopt);

private:
    std::vector<Curve::Segment> segs_;
};

}  // namespace dnc
