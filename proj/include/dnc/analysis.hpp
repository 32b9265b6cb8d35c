#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "dnc/bigint.hpp"
#include "dnc/minplus.hpp"
#include "dnc/network.hpp"

namespace dnc {

//! Counts of curve-level operations issued by an analysis run.
struct OpCounts {
    uint64_t aggregate = 0;
    uint64_t convolve = 0;
    uint64_t deconvolve = 0;
    uint64_t subtract_close = 0;  // left-over derivations
    uint64_t hdev = 0;
    uint64_t vdev = 0;

    uint64_t total() const {
        return aggregate + convolve + deconvolve + subtract_close + hdev + vdev;
    }
    OpCounts& operator+=(const OpCounts& o);
};

enum class AnalysisKind { SFA, PMOO, EXHAUSTIVE };

struct AnalysisOptions {
    AnalysisKind kind = AnalysisKind::EXHAUSTIVE;
    bool use_cache = true;
    bool use_convolution_of_alternatives = true;
    bool use_burst_cap = true;
};

struct AnalysisResult {
    std::optional<Rat> delay;  // nullopt = unbounded
    OpCounts ops;
    // foi-level structure: one left-over per sub-tandem, one convolution per
    // sub-tandem join, plus a single delay-bounding step
    uint64_t structural_leftover = 0;
    uint64_t structural_convolve = 0;
    uint64_t wall_ns = 0;

    uint64_t structuralTotal() const { return structural_leftover + structural_convolve + 1; }
};

/*!
 * Network-wide TFA backlog bounds used as burst caps. Per-server aggregate
 * arrivals are propagated in topological order: sources contribute their
 * alpha, every used inlink contributes the predecessor's full output bound.
 * Entries are memoized once per network; the fill is idempotent, so lookups
 * are safe from any thread.
 */
class TfaBacklogMemo {
public:
    explicit TfaBacklogMemo(const Network& net);

    //! Backlog bound B^max at a server; nullopt when unbounded.
    std::optional<Rat> backlogBound(ServerId s);

private:
    const Network* net_;
    std::mutex mu_;
    std::map<ServerId, std::vector<FlowId>> sources_;
    std::map<std::pair<ServerId, ServerId>, bool> linkUsed_;
    std::map<ServerId, std::optional<Curve>> arrival_;
    std::map<ServerId, std::optional<Rat>> backlog_;

    const std::optional<Curve>& arrivalAtLocked(ServerId s);
};

//! Worst-case queue length at a server; throws UnboundedResult on instability.
Rat tfaBacklogBound(const Network& net, ServerId server);

/*!
 * SFA bounds do not depend on which flow is analyzed, so the per-(flow,
 * server) recursion can be filled once per network and reused by every foi.
 * Thread-safe; the fill is idempotent.
 */
class SfaBoundsMemo {
public:
    explicit SfaBoundsMemo(const Network& net);
    ~SfaBoundsMemo();

    //! Convolved left-over service of flow f across its first k servers.
    std::optional<Curve> endToEnd(FlowId f, size_t k, OpCounts& ops);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

AnalysisResult analyzeFlow(const Network& net, FlowId foi, const AnalysisOptions& opts,
                           TfaBacklogMemo* shared_tfa = nullptr, SfaBoundsMemo* shared_sfa = nullptr);

AnalysisResult sfaDelayBound(const Network& net, FlowId foi, AnalysisOptions opts = {});
AnalysisResult pmooDelayBound(const Network& net, FlowId foi, AnalysisOptions opts = {});
AnalysisResult exhaustiveDelayBound(const Network& net, FlowId foi, AnalysisOptions opts = {});

// ---- building blocks exposed for direct use and tests ----

//! One cross-traffic aggregate interfering on a tandem.
struct FlowAggregate {
    std::vector<FlowId> members;        // sorted by id
    size_t lo = 0, hi = 0;              // inclusive sub-path within the tandem
    bool source_entry = false;          // members originate at tandem[lo]
    ServerId entry_inlink = 0;          // predecessor server (when not source)
    std::vector<ServerId> backtrack;    // maximal jointly traversed tandem before entry
    std::vector<size_t> entry_pos;      // per member: path index of tandem[lo]
};

/*!
 * Partition the cross traffic on a tandem into aggregates keyed by entry
 * inlink and sub-path; flows sharing the inlink but diverging on the tandem
 * are segregated. `aggregate_of_interest` members are excluded.
 */
std::vector<FlowAggregate> xtxSegregation(const Network& net, const std::vector<ServerId>& tandem,
                                          const std::vector<FlowId>& aggregate_of_interest);

//! Sub-path of one aggregate inside a tandem, with its bounded arrival.
struct PmooEntry {
    Curve arrival;
    size_t lo = 0, hi = 0;  // inclusive server indices within the tandem
};

/*!
 * PMOO left-over service curve of a tandem. Single-server tandems reduce
 * exactly to beta (-) sum(alpha). Longer tandems use the rate-latency
 * closed form; non-token-bucket arrivals are dominated by their long-term
 * tangent bucket first.
 */
Curve pmooLeftOver(const std::vector<RateLatencyParams>& tandem, const std::vector<PmooEntry>& entries);

//! All 2^{n-1} cut decompositions of an n-tandem as [lo,hi] interval lists.
std::vector<std::vector<std::pair<size_t, size_t>>> getDecompositions(size_t n);

//! Alternative end-to-end left-over curves of the foi's path (deduplicated).
std::vector<Curve> exhaustiveLeftOverSet(const Network& net, const std::vector<ServerId>& tandem,
                                         FlowId foi, const AnalysisOptions& opts,
                                         OpCounts* ops = nullptr);

//! Leaves of the exhaustive search tree for one foi (no curve evaluation).
BigInt countPermissibleEquations(const Network& net, FlowId foi);

}  // namespace dnc
