#include "dnc/analysis.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <set>
#include <tuple>

#include "dnc/errors.hpp"

namespace dnc {

OpCounts& OpCounts::operator+=(const OpCounts& o) {
    aggregate += o.aggregate;
    convolve += o.convolve;
    deconvolve += o.deconvolve;
    subtract_close += o.subtract_close;
    hdev += o.hdev;
    vdev += o.vdev;
    return *this;
}

std::vector<std::vector<std::pair<size_t, size_t>>> getDecompositions(size_t n) {
    if (n < 1) throw ValidationError("tandem length must be >= 1");
    if (n > 24) throw TooLarge("decomposition enumeration beyond n=24");
    std::vector<std::vector<std::pair<size_t, size_t>>> out;
    uint64_t masks = 1ull << (n - 1);
    for (uint64_t mask = 0; mask < masks; ++mask) {
        std::vector<std::pair<size_t, size_t>> decomp;
        size_t lo = 0;
        for (size_t cut = 0; cut + 1 < n; ++cut) {
            if (mask & (1ull << cut)) {
                decomp.emplace_back(lo, cut);
                lo = cut + 1;
            }
        }
        decomp.emplace_back(lo, n - 1);
        out.push_back(std::move(decomp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-traffic segregation
// ---------------------------------------------------------------------------

namespace {

// flow lookup tables shared across one analysis run
struct NetIndex {
    explicit NetIndex(const Network& net) {
        for (const auto& f : net.flows) {
            byId[f.id] = &f;
            for (ServerId s : f.path) atServer[s].push_back(f.id);
        }
    }
    const Flow& flow(FlowId id) const { return *byId.at(id); }
    std::map<FlowId, const Flow*> byId;
    std::map<ServerId, std::vector<FlowId>> atServer;
};

struct Run {
    FlowId flow;
    size_t lo, hi;       // inclusive interval on the tandem
    size_t entry_pos;    // path index of tandem[lo] in the flow's path
};

// Maximal coincident runs of every cross flow over the tandem.
std::vector<Run> runsOnTandem(const NetIndex& net, const std::vector<ServerId>& tandem,
                              const std::vector<FlowId>& excluded) {
    auto posInTandem = [&](ServerId s) -> size_t {
        for (size_t i = 0; i < tandem.size(); ++i)
            if (tandem[i] == s) return i;
        return SIZE_MAX;
    };
    std::vector<FlowId> touching;
    for (ServerId s : tandem) {
        auto it = net.atServer.find(s);
        if (it == net.atServer.end()) continue;
        touching.insert(touching.end(), it->second.begin(), it->second.end());
    }
    std::sort(touching.begin(), touching.end());
    touching.erase(std::unique(touching.begin(), touching.end()), touching.end());
    std::vector<Run> runs;
    for (FlowId fid : touching) {
        if (std::find(excluded.begin(), excluded.end(), fid) != excluded.end()) continue;
        const Flow& f = net.flow(fid);
        bool active = false;
        size_t runLo = 0, runEntry = 0, prev = 0;
        for (size_t k = 0; k < f.path.size(); ++k) {
            size_t pos = posInTandem(f.path[k]);
            if (pos != SIZE_MAX && active && pos == prev + 1) {
                prev = pos;
                continue;
            }
            if (active) {
                runs.push_back({f.id, runLo, prev, runEntry});
                active = false;
            }
            if (pos != SIZE_MAX) {
                active = true;
                runLo = prev = pos;
                runEntry = k;
            }
        }
        if (active) runs.push_back({f.id, runLo, prev, runEntry});
    }
    return runs;
}

// Longest common suffix of the members' paths before their entry positions.
std::vector<ServerId> backtrackTandem(const NetIndex& net, const std::vector<FlowId>& members,
                                      const std::vector<size_t>& entry_pos) {
    std::vector<ServerId> shared;
    for (size_t d = 1;; ++d) {
        std::optional<ServerId> common;
        for (size_t i = 0; i < members.size(); ++i) {
            if (entry_pos[i] < d) { common.reset(); break; }
            ServerId s = net.flow(members[i]).path[entry_pos[i] - d];
            if (!common) common = s;
            else if (*common != s) { common.reset(); break; }
            if (i + 1 == members.size()) break;
        }
        if (!common) break;
        shared.push_back(*common);
    }
    std::reverse(shared.begin(), shared.end());
    return shared;
}

std::vector<FlowAggregate> groupRuns(const NetIndex& net, const std::vector<Run>& runs,
                                     size_t lo, size_t hi, const std::vector<ServerId>& tandem) {
    // key: (lo', hi', source?, inlink) -> member list
    struct Key {
        size_t lo, hi;
        bool source;
        ServerId inlink;
        bool operator<(const Key& o) const {
            return std::tie(lo, hi, source, inlink) < std::tie(o.lo, o.hi, o.source, o.inlink);
        }
    };
    std::map<Key, std::vector<std::pair<FlowId, size_t>>> groups;
    for (const auto& r : runs) {
        size_t rlo = std::max(r.lo, lo), rhi = std::min(r.hi, hi);
        if (rlo > rhi) continue;
        size_t entry = r.entry_pos + (rlo - r.lo);
        const auto& path = net.flow(r.flow).path;
        bool source = rlo == r.lo && entry == 0;
        ServerId inlink = 0;
        if (!source) inlink = rlo == r.lo ? path[entry - 1] : tandem[rlo - 1];
        groups[{rlo, rhi, source, inlink}].emplace_back(r.flow, entry);
    }
    std::vector<FlowAggregate> out;
    for (auto& [key, mem] : groups) {
        std::sort(mem.begin(), mem.end());
        FlowAggregate agg;
        agg.lo = key.lo;
        agg.hi = key.hi;
        agg.source_entry = key.source;
        agg.entry_inlink = key.inlink;
        for (auto& [f, pos] : mem) {
            agg.members.push_back(f);
            agg.entry_pos.push_back(pos);
        }
        if (!agg.source_entry) agg.backtrack = backtrackTandem(net, agg.members, agg.entry_pos);
        out.push_back(std::move(agg));
    }
    return out;
}

}  // namespace

std::vector<FlowAggregate> xtxSegregation(const Network& net, const std::vector<ServerId>& tandem,
                                          const std::vector<FlowId>& aggregate_of_interest) {
    NetIndex index(net);
    auto runs = runsOnTandem(index, tandem, aggregate_of_interest);
    return groupRuns(index, runs, 0, tandem.size() - 1, tandem);
}

// ---------------------------------------------------------------------------
// PMOO left-over closed form
// ---------------------------------------------------------------------------

Curve pmooLeftOver(const std::vector<RateLatencyParams>& tandem, const std::vector<PmooEntry>& entries) {
    if (tandem.empty()) throw ValidationError("pmooLeftOver on empty tandem");
    if (tandem.size() == 1) {
        // single-server reduction: beta (-) sum of arrivals, exact for any concave shape
        Curve beta = Curve::rateLatency(tandem[0]);
        if (entries.empty()) return beta;
        Curve sum = entries[0].arrival;
        for (size_t i = 1; i < entries.size(); ++i) sum = aggregate(sum, entries[i].arrival);
        return subtractAndClose(beta, sum);
    }
    // multi-server closed form over token-bucket dominations:
    //   R = min_s (R_s - sum of crossing rates)
    //   T = sum T_s + (sum bursts + sum r * latency along each sub-path) / R
    Rat residual;
    bool first = true;
    for (size_t s = 0; s < tandem.size(); ++s) {
        Rat r = tandem[s].rate;
        for (const auto& e : entries)
            if (e.lo <= s && s <= e.hi) r -= e.arrival.tailSlope();
        if (first || r < residual) { residual = r; first = false; }
    }
    if (residual.sign() <= 0) throw UnboundedResult("pmooLeftOver: residual rate not positive");
    Rat latency(0);
    for (const auto& s : tandem) latency += s.latency;
    Rat weighted(0);
    for (const auto& e : entries) {
        // dominate the concave bound by its long-term tangent bucket
        Rat burst = e.arrival.tailIntercept();
        Rat span(0);
        for (size_t s = e.lo; s <= e.hi; ++s) span += tandem[s].latency;
        weighted += burst + e.arrival.tailSlope() * span;
    }
    return Curve::rateLatency(residual, latency + weighted / residual);
}

// ---------------------------------------------------------------------------
// TFA backlog bounds (burst caps)
// ---------------------------------------------------------------------------

TfaBacklogMemo::TfaBacklogMemo(const Network& net) : net_(&net) {
    for (const auto& f : net.flows) {
        sources_[f.path.front()].push_back(f.id);
        for (size_t i = 0; i + 1 < f.path.size(); ++i)
            linkUsed_[{f.path[i], f.path[i + 1]}] = true;
    }
}

const std::optional<Curve>& TfaBacklogMemo::arrivalAtLocked(ServerId s) {
    auto it = arrival_.find(s);
    if (it != arrival_.end()) return it->second;
    std::optional<Curve> total = Curve::zero();
    auto srcIt = sources_.find(s);
    if (srcIt != sources_.end())
        for (FlowId f : srcIt->second)
            total = aggregate(*total, Curve::tokenBucket(net_->flow(f).arrival));
    for (ServerId u : net_->graph.inLinks(s)) {
        if (!linkUsed_.count({u, s})) continue;
        const auto& upstream = arrivalAtLocked(u);
        if (!upstream) { total.reset(); break; }
        try {
            Curve out = deconvolve(*upstream, Curve::rateLatency(net_->graph.server(u).service));
            total = aggregate(*total, out);
        } catch (const UnboundedResult&) {
            total.reset();
            break;
        }
    }
    return arrival_.emplace(s, std::move(total)).first->second;
}

std::optional<Rat> TfaBacklogMemo::backlogBound(ServerId s) {
    std::scoped_lock lock(mu_);
    auto it = backlog_.find(s);
    if (it != backlog_.end()) return it->second;
    std::optional<Rat> out;
    const auto& arr = arrivalAtLocked(s);
    if (arr) {
        try {
            out = verticalDeviation(*arr, Curve::rateLatency(net_->graph.server(s).service));
        } catch (const UnboundedResult&) {
        }
    }
    backlog_[s] = out;
    return out;
}

Rat tfaBacklogBound(const Network& net, ServerId server) {
    TfaBacklogMemo memo(net);
    auto b = memo.backlogBound(server);
    if (!b) throw UnboundedResult("backlog bound: server unstable under aggregate arrivals");
    return *b;
}

// ---------------------------------------------------------------------------
// The exhaustive decomposition engine (also runs PMOO as its no-cut slice)
// ---------------------------------------------------------------------------

namespace {

using AltSet = std::vector<Curve>;

constexpr size_t kMaxAlternatives = 4096;

class Engine {
public:
    Engine(const Network& net, FlowId foi, const AnalysisOptions& opts, TfaBacklogMemo* tfa)
        : net_(net), index_(net), foi_(foi), opts_(opts), tfa_(tfa) {}

    OpCounts ops;
    uint64_t structural_leftover = 0;
    uint64_t structural_convolve = 0;

    std::vector<Curve> leftOverSet(const std::vector<ServerId>& tandem,
                                   const std::vector<FlowId>& aoi, bool top) {
        auto runs = runsOnTandem(index_, tandem, aoi);
        size_t n = tandem.size();
        if (n < 1) throw ValidationError("empty tandem");
        if (opts_.kind != AnalysisKind::PMOO && n > 24)
            throw TooLarge("tandem too long for exhaustive decomposition");
        uint64_t maskCount = opts_.kind == AnalysisKind::PMOO ? 1 : (1ull << (n - 1));
        std::vector<Curve> out;
        for (uint64_t mask = 0; mask < maskCount; ++mask) {
            std::vector<std::pair<size_t, size_t>> intervals;
            size_t lo = 0;
            for (size_t cut = 0; cut + 1 < n; ++cut)
                if (mask & (1ull << cut)) {
                    intervals.emplace_back(lo, cut);
                    lo = cut + 1;
                }
            intervals.emplace_back(lo, n - 1);

            // per decomposition: left-over alternatives of each sub-tandem;
            // the structural count follows the decomposition, not the number
            // of alternative combinations flowing through it
            AltSet folded;
            bool dead = false;
            bool first = true;
            for (const auto& [a, b] : intervals) {
                if (top) ++structural_leftover;
                AltSet subCurves = subTandemLeftOvers(tandem, runs, a, b);
                if (subCurves.empty()) { dead = true; break; }
                if (first) {
                    folded = std::move(subCurves);
                    first = false;
                } else {
                    if (top) ++structural_convolve;
                    AltSet joined;
                    for (const auto& acc : folded)
                        for (const auto& cur : subCurves) {
                            joined.push_back(convolveC(acc, cur));
                            if (joined.size() > kMaxAlternatives)
                                throw TooLarge("alternative explosion; enable convolution of alternatives");
                        }
                    folded = std::move(joined);
                }
            }
            if (dead) continue;
            for (auto& c : folded) out.push_back(std::move(c));
        }
        // exact-duplicate alternatives collapse (first occurrence kept)
        std::vector<Curve> dedup;
        for (auto& c : out) {
            bool seen = false;
            for (const auto& d : dedup)
                if (d == c) { seen = true; break; }
            if (!seen) dedup.push_back(std::move(c));
        }
        return dedup;
    }

    std::optional<AltSet> arrivalAlternatives(const FlowAggregate& agg) {
        if (agg.source_entry) {
            Curve sum = Curve::tokenBucket(index_.flow(agg.members[0]).arrival);
            for (size_t i = 1; i < agg.members.size(); ++i)
                sum = aggregateC(sum, Curve::tokenBucket(index_.flow(agg.members[i]).arrival));
            return AltSet{std::move(sum)};
        }
        if (opts_.use_cache) {
            CacheKey key{agg.backtrack, agg.members};
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
            std::optional<AltSet> result = computeArrival(agg);
            cache_.emplace(std::move(key), result);
            return result;
        }
        return computeArrival(agg);
    }

private:
    using CacheKey = std::pair<std::vector<ServerId>, std::vector<FlowId>>;

    const Network& net_;
    NetIndex index_;
    FlowId foi_;
    AnalysisOptions opts_;
    TfaBacklogMemo* tfa_;
    std::map<CacheKey, std::optional<AltSet>> cache_;

    Curve aggregateC(const Curve& f, const Curve& g) {
        ++ops.aggregate;
        return aggregate(f, g);
    }
    Curve convolveC(const Curve& f, const Curve& g) {
        ++ops.convolve;
        return convolve(f, g);
    }
    Curve deconvolveC(const Curve& f, const Curve& g) {
        ++ops.deconvolve;
        return deconvolve(f, g);
    }

    AltSet subTandemLeftOvers(const std::vector<ServerId>& tandem, const std::vector<Run>& runs,
                              size_t a, size_t b) {
        auto aggs = groupRuns(index_, runs, a, b, tandem);
        // collect alternative arrivals per aggregate (size 1 with convolution on)
        std::vector<AltSet> arrivals;
        for (const auto& agg : aggs) {
            auto alts = arrivalAlternatives(agg);
            if (!alts || alts->empty()) return {};
            arrivals.push_back(std::move(*alts));
        }
        std::vector<RateLatencyParams> services;
        for (size_t s = a; s <= b; ++s) services.push_back(net_.graph.server(tandem[s]).service);
        AltSet out;
        std::vector<size_t> pick(aggs.size(), 0);
        while (true) {
            std::vector<PmooEntry> entries;
            for (size_t i = 0; i < aggs.size(); ++i)
                entries.push_back({arrivals[i][pick[i]], aggs[i].lo - a, aggs[i].hi - a});
            ++ops.subtract_close;
            try {
                out.push_back(pmooLeftOver(services, entries));
            } catch (const UnboundedResult&) {
            }
            if (out.size() > kMaxAlternatives)
                throw TooLarge("alternative explosion; enable convolution of alternatives");
            // next combination
            size_t i = 0;
            for (; i < pick.size(); ++i) {
                if (++pick[i] < arrivals[i].size()) break;
                pick[i] = 0;
            }
            if (i == pick.size()) break;
            if (pick.empty()) break;
        }
        return out;
    }

    std::optional<AltSet> computeArrival(const FlowAggregate& agg) {
        AltSet betas = leftOverSet(agg.backtrack, agg.members, false);
        if (betas.empty()) return std::nullopt;

        // arrivals of the aggregate at the backtrack tandem's source,
        // split per inlink of that source
        std::map<std::pair<bool, ServerId>, FlowAggregate> split;
        for (size_t i = 0; i < agg.members.size(); ++i) {
            size_t spos = agg.entry_pos[i] - agg.backtrack.size();
            const auto& path = index_.flow(agg.members[i]).path;
            bool source = spos == 0;
            ServerId pred = source ? 0 : path[spos - 1];
            FlowAggregate& sub = split[{source, pred}];
            sub.members.push_back(agg.members[i]);
            sub.entry_pos.push_back(spos);
            sub.source_entry = source;
            sub.entry_inlink = pred;
        }
        AltSet srcAlts;
        bool firstGroup = true;
        for (auto& [key, sub] : split) {
            sub.lo = sub.hi = 0;
            if (!sub.source_entry) sub.backtrack = backtrackTandem(index_, sub.members, sub.entry_pos);
            auto alts = arrivalAlternatives(sub);
            if (!alts || alts->empty()) return std::nullopt;
            if (firstGroup) {
                srcAlts = std::move(*alts);
                firstGroup = false;
            } else {
                AltSet summed;
                for (const auto& acc : srcAlts)
                    for (const auto& add : *alts) {
                        summed.push_back(aggregateC(acc, add));
                        if (summed.size() > kMaxAlternatives)
                            throw TooLarge("alternative explosion; enable convolution of alternatives");
                    }
                srcAlts = std::move(summed);
            }
        }

        // outputs from the backtrack tandem: one alternative per left-over
        AltSet alts;
        for (const auto& a : srcAlts)
            for (const auto& beta : betas) {
                try {
                    alts.push_back(deconvolveC(a, beta));
                } catch (const UnboundedResult&) {
                }
                if (alts.size() > kMaxAlternatives)
                    throw TooLarge("alternative explosion; enable convolution of alternatives");
            }
        if (alts.empty()) return std::nullopt;

        if (opts_.use_convolution_of_alternatives && alts.size() > 1) {
            Curve combined = alts[0];
            for (size_t i = 1; i < alts.size(); ++i) combined = convolveC(combined, alts[i]);
            alts = {std::move(combined)};
        }
        if (opts_.use_burst_cap && opts_.kind == AnalysisKind::EXHAUSTIVE && tfa_) {
            auto bmax = tfa_->backlogBound(agg.backtrack.back());
            if (bmax)
                for (auto& a : alts) a = capBurst(a, *bmax);
        }
        return alts;
    }
};

// ---------------------------------------------------------------------------
// SFA: fully segregated per-flow backtracking with per-server left-overs.
// Bounds are foi-independent, so the recursion can be memoized per network.
// ---------------------------------------------------------------------------

class SfaCore {
public:
    SfaCore(const Network& net, bool memoize) : net_(net), index_(net), memoize_(memoize) {}

    OpCounts ops;

    // arrival bound of flow f entering its k-th path server (PBOO: one
    // deconvolution against the convolved upstream left-overs)
    std::optional<Curve> boundAt(FlowId f, size_t k) {
        if (k == 0) return Curve::tokenBucket(index_.flow(f).arrival);
        auto key = std::make_pair(f, k);
        if (memoize_) {
            auto it = boundMemo_.find(key);
            if (it != boundMemo_.end()) return it->second;
        }
        std::optional<Curve> out;
        std::optional<Curve> e2e = endToEnd(f, k);
        if (e2e) {
            ++ops.deconvolve;
            try {
                out = deconvolve(Curve::tokenBucket(index_.flow(f).arrival), *e2e);
            } catch (const UnboundedResult&) {
            }
        }
        if (memoize_) boundMemo_[key] = out;
        return out;
    }

    // convolution of f's left-overs over its first k servers
    std::optional<Curve> endToEnd(FlowId f, size_t k) {
        if (k == 0) return std::nullopt;
        auto key = std::make_pair(f, k);
        if (memoize_) {
            auto it = e2eMemo_.find(key);
            if (it != e2eMemo_.end()) return it->second;
        }
        std::optional<Curve> acc;
        if (k == 1) {
            acc = leftOverAt(f, 0);
        } else {
            acc = endToEnd(f, k - 1);
            if (acc) {
                auto lo = leftOverAt(f, k - 1);
                if (!lo) {
                    acc.reset();
                } else {
                    ++ops.convolve;
                    acc = convolve(*acc, *lo);
                }
            }
        }
        if (memoize_) e2eMemo_[key] = acc;
        return acc;
    }

    std::optional<Curve> leftOverAt(FlowId f, size_t j) {
        auto key = std::make_pair(f, j);
        if (memoize_) {
            auto it = loMemo_.find(key);
            if (it != loMemo_.end()) return it->second;
        }
        ServerId sid = index_.flow(f).path[j];
        std::optional<Curve> sum;
        bool unbounded = false;
        auto atIt = index_.atServer.find(sid);
        static const std::vector<FlowId> none;
        for (FlowId gid : atIt == index_.atServer.end() ? none : atIt->second) {
            if (gid == f) continue;
            const Flow& g = index_.flow(gid);
            auto pos = std::find(g.path.begin(), g.path.end(), sid);
            auto b = boundAt(g.id, static_cast<size_t>(pos - g.path.begin()));
            if (!b) { unbounded = true; break; }
            if (!sum) {
                sum = std::move(b);
            } else {
                ++ops.aggregate;
                sum = aggregate(*sum, *b);
            }
        }
        std::optional<Curve> out;
        if (!unbounded) {
            ++ops.subtract_close;
            try {
                Curve beta = Curve::rateLatency(net_.graph.server(sid).service);
                out = sum ? subtractAndClose(beta, *sum) : beta;
            } catch (const UnboundedResult&) {
            }
        }
        if (memoize_) loMemo_[key] = out;
        return out;
    }

private:
    const Network& net_;
    NetIndex index_;
    bool memoize_;
    std::map<std::pair<FlowId, size_t>, std::optional<Curve>> boundMemo_;
    std::map<std::pair<FlowId, size_t>, std::optional<Curve>> loMemo_;
    std::map<std::pair<FlowId, size_t>, std::optional<Curve>> e2eMemo_;
};

}  // namespace

struct SfaBoundsMemo::Impl {
    explicit Impl(const Network& net) : core(net, true) {}
    std::mutex mu;
    SfaCore core;
};

SfaBoundsMemo::SfaBoundsMemo(const Network& net) : impl_(std::make_unique<Impl>(net)) {}
SfaBoundsMemo::~SfaBoundsMemo() = default;

std::optional<Curve> SfaBoundsMemo::endToEnd(FlowId f, size_t k, OpCounts& ops) {
    std::scoped_lock lock(impl_->mu);
    OpCounts before = impl_->core.ops;
    auto out = impl_->core.endToEnd(f, k);
    OpCounts after = impl_->core.ops;
    ops.aggregate += after.aggregate - before.aggregate;
    ops.convolve += after.convolve - before.convolve;
    ops.deconvolve += after.deconvolve - before.deconvolve;
    ops.subtract_close += after.subtract_close - before.subtract_close;
    return out;
}

std::vector<Curve> exhaustiveLeftOverSet(const Network& net, const std::vector<ServerId>& tandem,
                                         FlowId foi, const AnalysisOptions& opts, OpCounts* ops) {
    TfaBacklogMemo tfa(net);
    Engine eng(net, foi, opts, &tfa);
    auto out = eng.leftOverSet(tandem, {foi}, true);
    if (ops) *ops += eng.ops;
    return out;
}

AnalysisResult analyzeFlow(const Network& net, FlowId foi, const AnalysisOptions& opts,
                           TfaBacklogMemo* shared_tfa, SfaBoundsMemo* shared_sfa) {
    auto t0 = std::chrono::steady_clock::now();
    AnalysisResult res;
    const Flow& f = net.flow(foi);
    if (opts.kind == AnalysisKind::SFA) {
        std::optional<Curve> lo;
        if (shared_sfa) {
            lo = shared_sfa->endToEnd(foi, f.path.size(), res.ops);
        } else {
            SfaCore core(net, opts.use_cache);
            lo = core.endToEnd(foi, f.path.size());
            res.ops = core.ops;
        }
        res.structural_leftover = f.path.size();
        res.structural_convolve = f.path.size() - 1;
        if (lo) {
            ++res.ops.hdev;
            try {
                res.delay = horizontalDeviation(Curve::tokenBucket(f.arrival), *lo);
            } catch (const UnboundedResult&) {
            }
        }
    } else {
        std::optional<TfaBacklogMemo> local;
        TfaBacklogMemo* tfa = shared_tfa;
        if (!tfa && opts.use_burst_cap && opts.kind == AnalysisKind::EXHAUSTIVE) {
            local.emplace(net);
            tfa = &*local;
        }
        Engine eng(net, foi, opts, tfa);
        auto set = eng.leftOverSet(f.path, {foi}, true);
        std::optional<Rat> best;
        Curve alpha = Curve::tokenBucket(f.arrival);
        for (const auto& beta : set) {
            ++eng.ops.hdev;
            try {
                Rat d = horizontalDeviation(alpha, beta);
                if (!best || d < *best) best = std::move(d);
            } catch (const UnboundedResult&) {
            }
        }
        res.delay = best;
        res.ops = eng.ops;
        res.structural_leftover = eng.structural_leftover;
        res.structural_convolve = eng.structural_convolve;
    }
    res.wall_ns = static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    return res;
}

AnalysisResult sfaDelayBound(const Network& net, FlowId foi, AnalysisOptions opts) {
    opts.kind = AnalysisKind::SFA;
    return analyzeFlow(net, foi, opts);
}

AnalysisResult pmooDelayBound(const Network& net, FlowId foi, AnalysisOptions opts) {
    opts.kind = AnalysisKind::PMOO;
    return analyzeFlow(net, foi, opts);
}

AnalysisResult exhaustiveDelayBound(const Network& net, FlowId foi, AnalysisOptions opts) {
    opts.kind = AnalysisKind::EXHAUSTIVE;
    return analyzeFlow(net, foi, opts);
}

// ---------------------------------------------------------------------------
// Search-tree leaf counting, no curve evaluation
// ---------------------------------------------------------------------------

namespace {

class EquationCounter {
public:
    explicit EquationCounter(const Network& net) : net_(net), index_(net) {}

    BigInt countTandem(const std::vector<ServerId>& tandem, const std::vector<FlowId>& aoi) {
        auto runs = runsOnTandem(index_, tandem, aoi);
        size_t n = tandem.size();
        if (n < 1 || n > 24) throw TooLarge("tandem too long to count decompositions");
        BigInt total(0ll);
        for (uint64_t mask = 0; mask < (1ull << (n - 1)); ++mask) {
            BigInt product(1ll);
            size_t lo = 0;
            std::vector<std::pair<size_t, size_t>> intervals;
            for (size_t cut = 0; cut + 1 < n; ++cut)
                if (mask & (1ull << cut)) {
                    intervals.emplace_back(lo, cut);
                    lo = cut + 1;
                }
            intervals.emplace_back(lo, n - 1);
            for (const auto& [a, b] : intervals)
                for (const auto& agg : groupRuns(index_, runs, a, b, tandem))
                    product *= alternatives(agg);
            total += product;
        }
        return total;
    }

private:
    const Network& net_;
    NetIndex index_;
    std::map<std::pair<std::vector<ServerId>, std::vector<FlowId>>, BigInt> memo_;

    BigInt alternatives(const FlowAggregate& agg) {
        if (agg.source_entry) return BigInt(1ll);
        auto key = std::make_pair(agg.backtrack, agg.members);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        BigInt branches = countTandem(agg.backtrack, agg.members);
        // arrivals at the backtrack source, split per inlink
        std::map<std::pair<bool, ServerId>, FlowAggregate> split;
        for (size_t i = 0; i < agg.members.size(); ++i) {
            size_t spos = agg.entry_pos[i] - agg.backtrack.size();
            const auto& path = index_.flow(agg.members[i]).path;
            bool source = spos == 0;
            ServerId pred = source ? 0 : path[spos - 1];
            FlowAggregate& sub = split[{source, pred}];
            sub.members.push_back(agg.members[i]);
            sub.entry_pos.push_back(spos);
            sub.source_entry = source;
            sub.entry_inlink = pred;
        }
        BigInt srcAlts(1ll);
        for (auto& [key2, sub] : split) {
            if (!sub.source_entry) sub.backtrack = backtrackTandem(index_, sub.members, sub.entry_pos);
            srcAlts *= alternatives(sub);
        }
        BigInt out = srcAlts * branches;
        memo_.emplace(std::move(key), out);
        return out;
    }
};

}  // namespace

BigInt countPermissibleEquations(const Network& net, FlowId foi) {
    if (!net.graph.isAcyclic()) throw ValidationError("network must be feed-forward");
    EquationCounter counter(net);
    return counter.countTandem(net.flow(foi).path, {foi});
}

}  // namespace dnc
