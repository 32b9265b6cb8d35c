#include "dnc/curve.hpp"

#include <cassert>
#include <sstream>

#include "dnc/errors.hpp"

namespace dnc {

Curve::Curve(std::vector<Segment> segs, std::optional<Rat> inf_from)
    : segs_(std::move(segs)), inf_from_(std::move(inf_from)) {
    if (segs_.empty()) segs_.push_back({Rat(0), Rat(0), Rat(0)});
    canonicalize();
}

Curve Curve::tokenBucket(const Rat& rate, const Rat& burst) {
    if (burst.isZero()) return Curve({{Rat(0), Rat(0), rate}});
    return Curve({{Rat(0), Rat(0), Rat(0)}, {Rat(0), burst, rate}});
}

Curve Curve::rateLatency(const Rat& rate, const Rat& latency) {
    if (latency.isZero()) return Curve({{Rat(0), Rat(0), rate}});
    return Curve({{Rat(0), Rat(0), Rat(0)}, {latency, Rat(0), rate}});
}

Curve Curve::burstDelay(const Rat& latency) {
    return Curve({{Rat(0), Rat(0), Rat(0)}}, latency);
}

void Curve::canonicalize() {
    // merge collinear / redundant segments; keep the jump head only when needed
    std::vector<Segment> out;
    for (auto& s : segs_) {
        if (!out.empty()) {
            Segment& p = out.back();
            if (s.start == p.start) {
                // duplicated start: meaningful only as the jump encoding at 0
                if (s.value == p.value && s.slope == p.slope) continue;
                if (s.value == p.value) { p.slope = s.slope; continue; }
                out.push_back(s);
                continue;
            }
            Rat reach = p.value + p.slope * (s.start - p.start);
            if (reach == s.value && p.slope == s.slope) continue;  // collinear
        }
        out.push_back(s);
    }
    // drop a zero-length head that carries no jump
    if (out.size() >= 2 && out[0].start == out[1].start && out[0].value == out[1].value)
        out.erase(out.begin());
    segs_ = std::move(out);
}

size_t Curve::pieceIndexBefore(const Rat& t) const {
    size_t i = segs_.size();
    while (i > 1 && segs_[i - 1].start >= t) --i;
    return i - 1;
}

std::optional<Rat> Curve::eval(const Rat& t) const {
    if (t.sign() < 0) throw std::domain_error("curve evaluated at negative time");
    if (inf_from_ && t > *inf_from_) return std::nullopt;
    if (t.isZero()) return Rat(0);
    const Segment& s = segs_[pieceIndexBefore(t)];
    return s.value + s.slope * (t - s.start);
}

Rat Curve::rightLimit(const Rat& t) const {
    size_t i = segs_.size();
    while (i > 1 && segs_[i - 1].start > t) --i;
    const Segment& s = segs_[i - 1];
    return s.value + s.slope * (t - s.start);
}

Rat Curve::slopeRightOf(const Rat& t) const {
    size_t i = segs_.size();
    while (i > 1 && segs_[i - 1].start > t) --i;
    return segs_[i - 1].slope;
}

Rat Curve::tailIntercept() const {
    const Segment& s = segs_.back();
    return s.value - s.slope * s.start;
}

bool Curve::isZero() const {
    return !inf_from_ && segs_.size() == 1 && segs_[0].value.isZero() && segs_[0].slope.isZero();
}

bool Curve::hasJumpAtOrigin() const {
    return segs_.size() >= 2 && segs_[1].start.isZero() && segs_[1].value.sign() > 0;
}

bool Curve::isConcaveShape() const {
    if (inf_from_) return false;
    size_t body = hasJumpAtOrigin() ? 1 : 0;
    for (size_t i = body; i + 1 < segs_.size(); ++i) {
        const Segment& a = segs_[i];
        const Segment& b = segs_[i + 1];
        if (a.value + a.slope * (b.start - a.start) != b.value) return false;  // interior jump
        if (b.slope > a.slope) return false;
    }
    return true;
}

bool Curve::isConvexShape() const {
    if (inf_from_) return false;
    if (hasJumpAtOrigin()) return false;
    if (!segs_[0].value.isZero()) return false;
    for (size_t i = 0; i + 1 < segs_.size(); ++i) {
        const Segment& a = segs_[i];
        const Segment& b = segs_[i + 1];
        if (a.value + a.slope * (b.start - a.start) != b.value) return false;
        if (b.slope < a.slope) return false;
    }
    return true;
}

std::optional<TokenBucketParams> Curve::asTokenBucket() const {
    if (inf_from_) return std::nullopt;
    if (segs_.size() == 1 && segs_[0].value.isZero())
        return TokenBucketParams{segs_[0].slope, Rat(0)};
    if (segs_.size() == 2 && hasJumpAtOrigin())
        return TokenBucketParams{segs_[1].slope, segs_[1].value};
    return std::nullopt;
}

std::optional<RateLatencyParams> Curve::asRateLatency() const {
    if (inf_from_) return std::nullopt;
    if (segs_.size() == 1 && segs_[0].value.isZero())
        return RateLatencyParams{segs_[0].slope, Rat(0)};
    if (segs_.size() == 2 && segs_[0].value.isZero() && segs_[0].slope.isZero() &&
        segs_[1].value.isZero() && segs_[1].start.sign() > 0)
        return RateLatencyParams{segs_[1].slope, segs_[1].start};
    return std::nullopt;
}

bool Curve::operator==(const Curve& o) const {
    if (inf_from_.has_value() != o.inf_from_.has_value()) return false;
    if (inf_from_ && *inf_from_ != *o.inf_from_) return false;
    return segs_ == o.segs_;
}

void Curve::validate() const {
    if (segs_.empty()) throw ValidationError("curve has no segments");
    if (!segs_[0].start.isZero()) throw ValidationError("first segment must start at 0");
    for (size_t i = 0; i < segs_.size(); ++i) {
        if (segs_[i].start.sign() < 0) throw ValidationError("segment start before 0");
        if (segs_[i].slope.sign() < 0) throw ValidationError("negative slope breaks wide-sense increase");
        if (segs_[i].value.sign() < 0) throw ValidationError("negative value breaks f >= 0");
    }
    for (size_t i = 0; i + 1 < segs_.size(); ++i) {
        const Segment& a = segs_[i];
        const Segment& b = segs_[i + 1];
        if (b.start < a.start) throw ValidationError("segment starts not increasing");
        if (b.start == a.start && !(i == 0 && a.start.isZero()))
            throw ValidationError("duplicate start only allowed as the jump at 0");
        Rat reach = a.value + a.slope * (b.start - a.start);
        if (b.value < reach) throw ValidationError("value drops: not wide-sense increasing");
    }
    if (inf_from_ && *inf_from_ < segs_.back().start)
        throw ValidationError("infinite tail starts inside the segment list");
}

std::string Curve::toText() const {
    if (inf_from_) {
        if (segs_.size() == 1 && segs_[0].value.isZero() && segs_[0].slope.isZero())
            return "DELTA(" + inf_from_->toExactText() + ")";
        throw UnsupportedShape("no text form for general infinite-tail curves");
    }
    if (auto tb = asTokenBucket())
        return "TB(" + tb->rate.toExactText() + "," + tb->burst.toExactText() + ")";
    if (auto rl = asRateLatency())
        return "RL(" + rl->rate.toExactText() + "," + rl->latency.toExactText() + ")";
    std::ostringstream os;
    os << "PWL[";
    for (size_t i = 0; i < segs_.size(); ++i) {
        if (i) os << ";";
        os << "(" << segs_[i].start.toExactText() << "," << segs_[i].value.toExactText() << ","
           << segs_[i].slope.toExactText() << ")";
    }
    os << "]";
    return os.str();
}

namespace {

std::vector<std::string> splitArgs(std::string_view body, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : body) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else if (c != ' ') cur += c;
    }
    out.push_back(cur);
    return out;
}

}  // namespace

Curve Curve::parseText(std::string_view text) {
    auto fail = [&]() -> Curve { throw ParseError("invalid curve literal: " + std::string(text)); };
    if (text.starts_with("TB(") && text.ends_with(")")) {
        auto args = splitArgs(text.substr(3, text.size() - 4), ',');
        if (args.size() != 2) return fail();
        return tokenBucket(Rat::parse(args[0]), Rat::parse(args[1]));
    }
    if (text.starts_with("RL(") && text.ends_with(")")) {
        auto args = splitArgs(text.substr(3, text.size() - 4), ',');
        if (args.size() != 2) return fail();
        return rateLatency(Rat::parse(args[0]), Rat::parse(args[1]));
    }
    if (text.starts_with("DELTA(") && text.ends_with(")")) {
        return burstDelay(Rat::parse(text.substr(6, text.size() - 7)));
    }
    if (text.starts_with("PWL[") && text.ends_with("]")) {
        std::vector<Segment> segs;
        for (const auto& part : splitArgs(text.substr(4, text.size() - 5), ';')) {
            if (part.size() < 2 || part.front() != '(' || part.back() != ')')
                return fail();
            auto nums = splitArgs(std::string_view(part).substr(1, part.size() - 2), ',');
            if (nums.size() != 3) return fail();
            segs.push_back({Rat::parse(nums[0]), Rat::parse(nums[1]), Rat::parse(nums[2])});
        }
        Curve c(std::move(segs));
        c.validate();
        return c;
    }
    return fail();
}

void CurveBuilder::add(Rat start, Rat value, Rat slope) {
    segs_.push_back({std::move(start), std::move(value), std::move(slope)});
}

Curve CurveBuilder::finish(std::optional<Rat> inf_from) {
    if (segs_.empty()) return Curve();
    assert(segs_[0].start.isZero());
    std::vector<Curve::Segment> full;
    // re-anchor to the origin: pieces describe t > 0, f(0) stays 0
    if (segs_[0].value.sign() > 0) full.push_back({Rat(0), Rat(0), Rat(0)});
    for (auto& s : segs_) full.push_back(std::move(s));
    segs_.clear();
    return Curve(std::move(full), std::move(inf_from));
}

}  // namespace dnc
