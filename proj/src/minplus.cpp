#include "dnc/minplus.hpp"

#include <algorithm>
#include <cassert>

#include "dnc/errors.hpp"

namespace dnc {

namespace {

// A linear piece over (start, end); end absent on the final piece.
struct Piece {
    Rat start;
    Rat value;  // right-limit at start
    Rat slope;
    std::optional<Rat> end;

    Rat at(const Rat& t) const { return value + slope * (t - start); }
};

// All finite pieces of a curve for t > 0 (skips the zero-length jump head).
std::vector<Piece> piecesOf(const Curve& c) {
    const auto& segs = c.segments();
    size_t from = c.hasJumpAtOrigin() ? 1 : 0;
    std::vector<Piece> out;
    for (size_t i = from; i < segs.size(); ++i) {
        Piece p{segs[i].start, segs[i].value, segs[i].slope, std::nullopt};
        if (i + 1 < segs.size()) p.end = segs[i + 1].start;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Rat> mergedBreakpoints(const Curve& f, const Curve& g) {
    std::vector<Rat> pts;
    for (const auto& s : f.segments()) pts.push_back(s.start);
    for (const auto& s : g.segments()) pts.push_back(s.start);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

void requireFinite(const Curve& c, const char* op) {
    if (c.hasInfiniteTail())
        throw UnsupportedShape(std::string(op) + ": infinite-tail operand not supported");
}

}  // namespace

Curve aggregate(const Curve& f, const Curve& g) {
    requireFinite(f, "aggregate");
    requireFinite(g, "aggregate");
    if (f.isZero()) return g;
    if (g.isZero()) return f;
    CurveBuilder b;
    for (const auto& t : mergedBreakpoints(f, g))
        b.add(t, f.rightLimit(t) + g.rightLimit(t), f.slopeRightOf(t) + g.slopeRightOf(t));
    return b.finish();
}

Curve minimum(const Curve& f, const Curve& g) {
    requireFinite(f, "minimum");
    requireFinite(g, "minimum");
    std::vector<Rat> pts = mergedBreakpoints(f, g);
    // pointwise min needs the crossing points inside shared intervals
    std::vector<Rat> refined = pts;
    for (size_t i = 0; i < pts.size(); ++i) {
        Rat a = pts[i];
        std::optional<Rat> bEnd;
        if (i + 1 < pts.size()) bEnd = pts[i + 1];
        Rat fv = f.rightLimit(a), fs = f.slopeRightOf(a);
        Rat gv = g.rightLimit(a), gs = g.slopeRightOf(a);
        if (fs == gs) continue;
        // f(a)+fs*x == g(a)+gs*x
        Rat x = (gv - fv) / (fs - gs);
        if (x.sign() <= 0) continue;
        Rat cross = a + x;
        if (!bEnd || cross < *bEnd) refined.push_back(cross);
    }
    std::sort(refined.begin(), refined.end());
    refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
    CurveBuilder b;
    for (const auto& t : refined) {
        Rat fv = f.rightLimit(t), gv = g.rightLimit(t);
        Rat fs = f.slopeRightOf(t), gs = g.slopeRightOf(t);
        bool takeF = fv < gv || (fv == gv && fs <= gs);
        b.add(t, takeF ? fv : gv, takeF ? fs : gs);
    }
    return b.finish();
}

namespace {

Curve shiftRight(const Curve& c, const Rat& by) {
    if (by.isZero()) return c;
    std::vector<Curve::Segment> segs;
    segs.push_back({Rat(0), Rat(0), Rat(0)});
    size_t from = c.hasJumpAtOrigin() ? 1 : 0;
    for (size_t i = from; i < c.segments().size(); ++i) {
        const auto& s = c.segments()[i];
        segs.push_back({s.start + by, s.value, s.slope});
    }
    std::optional<Rat> inf;
    if (c.hasInfiniteTail()) inf = c.infFrom() + by;
    return Curve(std::move(segs), std::move(inf));
}

// Min-plus convolution of convex curves through the origin: concatenate
// all pieces in ascending slope order until an unbounded piece is placed.
Curve convexConvolve(const Curve& f, const Curve& g) {
    struct Run {
        Rat slope;
        std::optional<Rat> extent;
    };
    std::vector<Run> runs;
    for (const Curve* c : {&f, &g}) {
        auto ps = piecesOf(*c);
        for (const auto& p : ps) {
            std::optional<Rat> ext;
            if (p.end) ext = *p.end - p.start;
            runs.push_back({p.slope, std::move(ext)});
        }
    }
    std::stable_sort(runs.begin(), runs.end(),
                     [](const Run& a, const Run& b) { return a.slope < b.slope; });
    CurveBuilder b;
    Rat t(0), v(0);
    for (const auto& r : runs) {
        b.add(t, v, r.slope);
        if (!r.extent) break;  // this slope continues forever
        v += r.slope * *r.extent;
        t += *r.extent;
    }
    return b.finish();
}

}  // namespace

Curve convolve(const Curve& f, const Curve& g) {
    // burst-delay curves act by time shift; delta_0 is the identity
    if (f.hasInfiniteTail() || g.hasInfiniteTail()) {
        const Curve& d = f.hasInfiniteTail() ? f : g;
        const Curve& other = f.hasInfiniteTail() ? g : f;
        if (!(d.segments().size() == 1 && d.segments()[0].value.isZero() &&
              d.segments()[0].slope.isZero()))
            throw UnsupportedShape("convolve: only pure burst-delay infinite curves supported");
        if (other.hasInfiniteTail()) {
            // delta_a (x) delta_b = delta_{a+b}
            return Curve::burstDelay(d.infFrom() + other.infFrom());
        }
        return shiftRight(other, d.infFrom());
    }
    if (f.isConcaveShape() && g.isConcaveShape()) return minimum(f, g);
    if (f.isConvexShape() && g.isConvexShape()) return convexConvolve(f, g);
    throw UnsupportedShape("convolve: operands must be both concave or both convex");
}

namespace {

// Upper envelope of partial linear functions over (0, inf).
// Each function is a list of contiguous pieces; domains may end early.
Curve upperEnvelope(const std::vector<std::vector<Piece>>& fns) {
    std::vector<Rat> crit;
    crit.push_back(Rat(0));
    for (const auto& fn : fns)
        for (const auto& p : fn) {
            crit.push_back(p.start);
            if (p.end) crit.push_back(*p.end);
        }
    // pairwise intersections of overlapping pieces
    std::vector<const Piece*> all;
    for (const auto& fn : fns)
        for (const auto& p : fn) all.push_back(&p);
    for (size_t i = 0; i < all.size(); ++i) {
        for (size_t j = i + 1; j < all.size(); ++j) {
            const Piece& a = *all[i];
            const Piece& b = *all[j];
            if (a.slope == b.slope) continue;
            Rat x = (b.value - b.slope * b.start - (a.value - a.slope * a.start)) / (a.slope - b.slope);
            Rat lo = Rat::max(a.start, b.start);
            if (x <= lo) continue;
            if (a.end && x >= *a.end) continue;
            if (b.end && x >= *b.end) continue;
            crit.push_back(std::move(x));
        }
    }
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

    auto winnerAt = [&](const Rat& probe, const Piece*& win) {
        win = nullptr;
        Rat best(0);
        for (const auto* p : all) {
            if (probe < p->start) continue;
            if (p->end && probe >= *p->end) continue;
            Rat v = p->at(probe);
            if (!win || v > best) { win = p; best = std::move(v); }
        }
    };

    CurveBuilder b;
    for (size_t i = 0; i < crit.size(); ++i) {
        Rat probe = i + 1 < crit.size() ? (crit[i] + crit[i + 1]) / Rat(2) : crit[i] + Rat(1);
        const Piece* win = nullptr;
        winnerAt(probe, win);
        if (!win) continue;  // can only happen before any domain starts
        b.add(crit[i], win->at(crit[i]), win->slope);
    }
    return b.finish();
}

}  // namespace

Curve deconvolve(const Curve& f, const Curve& g) {
    requireFinite(f, "deconvolve");
    requireFinite(g, "deconvolve");
    if (!f.isConcaveShape() || !g.isConvexShape())
        throw UnsupportedShape("deconvolve: needs concave arrival and convex service");
    if (f.tailSlope() > g.tailSlope())
        throw UnboundedResult("deconvolve: arrival rate exceeds service rate");
    if (auto tb = f.asTokenBucket()) {
        if (auto rl = g.asRateLatency()) {
            // gamma_{r,b} (/) beta_{R,T} = gamma_{r, b + r T}
            return Curve::tokenBucket(tb->rate, tb->burst + tb->rate * rl->latency);
        }
    }
    // sup over u of f(d+u) - g(u); the maximizer sits at a breakpoint of
    // u -> f(d+u) - g(u), so an upper envelope over both breakpoint
    // families (plus the equal-rate limit) is exact.
    std::vector<std::vector<Piece>> cands;
    auto fp = piecesOf(f);
    auto gp = piecesOf(g);
    // u fixed at a service breakpoint
    for (const auto& q : gp) {
        const Rat& u = q.start;
        Rat gu = q.value;  // g continuous: value at u equals right limit
        std::vector<Piece> fn;
        for (const auto& p : fp) {
            Rat s = p.start - u;
            std::optional<Rat> e;
            if (p.end) e = *p.end - u;
            if (e && e->sign() <= 0) continue;
            Rat start = Rat::max(s, Rat(0));
            fn.push_back({start, p.at(start + u) - gu, p.slope, std::move(e)});
        }
        if (!fn.empty()) cands.push_back(std::move(fn));
    }
    // d+u pinned to an arrival breakpoint w: value f(w) - g(w - d), d in (0, w]
    for (const auto& p : fp) {
        if (p.start.sign() <= 0) continue;
        const Rat& w = p.start;
        Rat fw = f.rightLimit(w);
        std::vector<Piece> fn;
        for (const auto& q : gp) {
            if (q.start >= w) break;
            // u in (q.start, min(q.end, w)] maps to d in [w - min(..), w - q.start)
            Rat uHi = q.end ? Rat::min(*q.end, w) : w;
            Rat dLo = w - uHi;
            Rat dHi = w - q.start;
            fn.push_back({dLo, fw - g.rightLimit(uHi), q.slope, dHi});
        }
        if (!fn.empty()) cands.push_back(std::move(fn));
    }
    // equal long-term rates: the supremum can live at u -> infinity
    if (f.tailSlope() == g.tailSlope()) {
        Rat a = f.tailIntercept() - g.tailIntercept();
        cands.push_back({Piece{Rat(0), a, f.tailSlope(), std::nullopt}});
    }
    Curve out = upperEnvelope(cands);
    assert(out.isConcaveShape());
    return out;
}

Curve subtractAndClose(const Curve& beta, const Curve& alpha) {
    requireFinite(beta, "subtractAndClose");
    requireFinite(alpha, "subtractAndClose");
    if (!beta.isConvexShape() || !alpha.isConcaveShape())
        throw UnsupportedShape("subtractAndClose: needs convex service and concave arrival");
    if (beta.tailSlope() <= alpha.tailSlope())
        throw UnboundedResult("subtractAndClose: residual rate is not positive");
    if (auto rl = beta.asRateLatency()) {
        if (auto tb = alpha.asTokenBucket()) {
            // beta_{R,T} (-) gamma_{r,b} = beta_{R-r, (b + R T)/(R - r)}
            Rat rr = rl->rate - tb->rate;
            return Curve::rateLatency(rr, (tb->burst + rl->rate * rl->latency) / rr);
        }
    }
    // difference is convex on (0, inf), so its running sup is max(0, diff)
    std::vector<Rat> pts = mergedBreakpoints(beta, alpha);
    CurveBuilder b;
    bool started = false;
    for (size_t i = 0; i < pts.size(); ++i) {
        Rat v = beta.rightLimit(pts[i]) - alpha.rightLimit(pts[i]);
        Rat s = beta.slopeRightOf(pts[i]) - alpha.slopeRightOf(pts[i]);
        std::optional<Rat> end;
        if (i + 1 < pts.size()) end = pts[i + 1];
        if (!started) {
            Rat endV = end ? v + s * (*end - pts[i]) : Rat(1);
            if (v.sign() >= 0 && (v.sign() > 0 || s.sign() > 0)) {
                // positive from this breakpoint on
                if (pts[i].sign() > 0) b.add(Rat(0), Rat(0), Rat(0));
                b.add(pts[i], v, s);
                started = true;
            } else if (end ? endV.sign() > 0 : s.sign() > 0) {
                // crosses zero inside this piece
                Rat x0 = pts[i] + (-v) / s;
                b.add(Rat(0), Rat(0), Rat(0));
                b.add(x0, Rat(0), s);
                started = true;
            }
        } else {
            b.add(pts[i], v, s);
        }
    }
    if (!started) throw UnboundedResult("subtractAndClose: difference never becomes positive");
    return b.finish();
}

namespace {

// Earliest time at which beta reaches level y; nullopt when it never does.
std::optional<Rat> riseTime(const Curve& beta, const Rat& y) {
    if (y.sign() <= 0) return Rat(0);
    auto ps = piecesOf(beta);
    for (const auto& p : ps) {
        Rat startVal = p.value;
        if (startVal >= y) return p.start;
        if (!p.end) {
            if (p.slope.sign() <= 0) return std::nullopt;
            return p.start + (y - p.value) / p.slope;
        }
        Rat endVal = p.at(*p.end);
        if (endVal >= y) return p.start + (y - p.value) / p.slope;
    }
    return std::nullopt;
}

}  // namespace

Rat horizontalDeviation(const Curve& alpha, const Curve& beta) {
    requireFinite(alpha, "horizontalDeviation");
    requireFinite(beta, "horizontalDeviation");
    if (!alpha.isConcaveShape() || !beta.isConvexShape())
        throw UnsupportedShape("horizontalDeviation: needs concave arrival and convex service");
    if (alpha.isZero()) return Rat(0);
    if (alpha.tailSlope() > beta.tailSlope())
        throw UnboundedResult("horizontalDeviation: arrival rate exceeds service rate");
    if (auto tb = alpha.asTokenBucket()) {
        if (auto rl = beta.asRateLatency()) {
            if (rl->rate.sign() <= 0) throw UnboundedResult("horizontalDeviation: zero-rate service");
            return rl->latency + tb->burst / rl->rate;  // T + b/R
        }
    }
    // sup over d of riseTime(alpha(d)) - d is attained at an alpha breakpoint
    // or at a preimage of a beta breakpoint (the objective is concave in d)
    std::vector<Rat> cands;
    cands.push_back(Rat(0));
    for (const auto& s : alpha.segments()) cands.push_back(s.start);
    for (const auto& s : beta.segments()) {
        // d with alpha(d) = beta value at this breakpoint
        Rat y = s.value;
        if (y <= alpha.burstValue()) { cands.push_back(Rat(0)); continue; }
        auto ps = piecesOf(alpha);
        for (const auto& p : ps) {
            if (p.slope.sign() <= 0) continue;
            Rat d = p.start + (y - p.value) / p.slope;
            if (d < p.start) continue;
            if (p.end && d > *p.end) continue;
            cands.push_back(std::move(d));
            break;
        }
    }
    Rat big(0);
    for (const auto& c : cands) big = Rat::max(big, c);
    cands.push_back(big + Rat(1));
    Rat best(0);
    for (const auto& d : cands) {
        Rat y = alpha.rightLimit(d);
        auto t = riseTime(beta, y);
        if (!t) throw UnboundedResult("horizontalDeviation: service never reaches arrival level");
        Rat cand = *t - d;
        if (cand > best) best = std::move(cand);
    }
    return best;
}

Rat verticalDeviation(const Curve& alpha, const Curve& beta) {
    requireFinite(alpha, "verticalDeviation");
    requireFinite(beta, "verticalDeviation");
    if (!alpha.isConcaveShape() || !beta.isConvexShape())
        throw UnsupportedShape("verticalDeviation: needs concave arrival and convex service");
    if (alpha.tailSlope() > beta.tailSlope())
        throw UnboundedResult("verticalDeviation: arrival rate exceeds service rate");
    std::vector<Rat> cands = mergedBreakpoints(alpha, beta);
    Rat big(0);
    for (const auto& c : cands) big = Rat::max(big, c);
    cands.push_back(big + Rat(1));
    Rat best(0);  // d = 0 contributes 0
    for (const auto& d : cands) {
        Rat v = alpha.rightLimit(d) - beta.rightLimit(d);
        if (v > best) best = std::move(v);
    }
    return best;
}

Curve capBurst(const Curve& f, const Rat& bmax) {
    if (bmax.sign() < 0) throw std::domain_error("negative burst cap");
    requireFinite(f, "capBurst");
    Rat delta = f.burstValue() - bmax;
    if (delta.sign() <= 0) return f;
    if (!f.isConcaveShape())
        throw UnsupportedShape("capBurst: only concave arrival bounds can be capped");
    std::vector<Curve::Segment> segs;
    size_t from = f.hasJumpAtOrigin() ? 1 : 0;
    for (size_t i = from; i < f.segments().size(); ++i) {
        const auto& s = f.segments()[i];
        segs.push_back({s.start, s.value - delta, s.slope});
    }
    CurveBuilder b;
    for (auto& s : segs) b.add(s.start, s.value, s.slope);
    return b.finish();
}

Curve outputBound(const Curve& alpha, const Curve& betaLo, const std::optional<Rat>& burstCap) {
    Curve out = deconvolve(alpha, betaLo);
    if (burstCap) out = capBurst(out, *burstCap);
    return out;
}

}  // namespace dnc
