#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "dnc/errors.hpp"
#include "dnc/network.hpp"

namespace dnc {

namespace {

// Seeded RNG with hand-rolled bounded sampling so runs reproduce across
// standard libraries (distribution classes are implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    //! Uniform in [0, n).
    uint64_t below(uint64_t n) {
        if (n == 0) throw std::domain_error("empty range");
        uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
        uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    //! True with probability num/den.
    bool chance(uint64_t num, uint64_t den) { return below(den) < num; }

private:
    std::mt19937_64 eng_;
};

// Preferential endpoint choice with weight (degree - beta), scaled to integers.
DeviceId pickPreferential(Rng& rng, const std::vector<uint32_t>& degree,
                          int64_t beta_scaled, int64_t scale) {
    int64_t total = 0;
    for (uint32_t d : degree) total += std::max<int64_t>(1, scale * static_cast<int64_t>(d) - beta_scaled);
    int64_t r = static_cast<int64_t>(rng.below(static_cast<uint64_t>(total)));
    for (DeviceId i = 0; i < degree.size(); ++i) {
        r -= std::max<int64_t>(1, scale * static_cast<int64_t>(degree[i]) - beta_scaled);
        if (r < 0) return i;
    }
    return static_cast<DeviceId>(degree.size() - 1);
}

}  // namespace

DeviceGraph glpGenerate(const GlpParams& params) {
    if (params.m < 1) throw ValidationError("glp: m must be >= 1");
    if (params.m0 < params.m) throw ValidationError("glp: m0 must be >= m");
    if (params.p.sign() < 0 || params.p > Rat(1)) throw ValidationError("glp: p must be in [0,1]");
    if (params.beta >= Rat(1)) throw ValidationError("glp: beta must be < 1");
    if (params.target_devices < 1) throw ValidationError("glp: target device count must be >= 1");

    Rng rng(params.seed);
    uint32_t m0 = std::min(params.m0, params.target_devices);
    DeviceGraph g;
    g.device_count = m0;
    std::vector<uint32_t> degree(m0, 0);
    // seed: spanning tree over the first m0 devices
    for (DeviceId i = 1; i < m0; ++i) {
        DeviceId parent = static_cast<DeviceId>(rng.below(i));
        g.edges.emplace_back(std::min(parent, i), std::max(parent, i));
        ++degree[parent];
        ++degree[i];
    }

    // probability and preference offset scaled to integer arithmetic
    const int64_t scale = 1000000;
    int64_t p_num = (params.p * Rat(scale)).num().toLL();
    int64_t beta_scaled = (params.beta * Rat(scale)).num().toLL();

    auto addEdge = [&](DeviceId a, DeviceId b) {
        g.edges.emplace_back(std::min(a, b), std::max(a, b));
        ++degree[a];
        ++degree[b];
    };

    while (g.device_count < params.target_devices) {
        if (rng.chance(static_cast<uint64_t>(p_num), scale)) {
            // add m links between existing devices
            for (uint32_t e = 0; e < params.m; ++e) {
                for (int attempt = 0; attempt < 64; ++attempt) {
                    DeviceId a = pickPreferential(rng, degree, beta_scaled, scale);
                    DeviceId b = pickPreferential(rng, degree, beta_scaled, scale);
                    if (a == b || g.hasEdge(a, b)) continue;
                    addEdge(a, b);
                    break;
                }
            }
        } else {
            // add one device with m links
            DeviceId fresh = g.device_count++;
            degree.push_back(0);
            std::set<DeviceId> targets;
            while (targets.size() < std::min<uint32_t>(params.m, fresh)) {
                DeviceId t = pickPreferential(rng, degree, beta_scaled, scale);
                if (t != fresh) targets.insert(t);
            }
            for (DeviceId t : targets) addEdge(fresh, t);
        }
    }
    return g;
}

ServerGraph deviceToServerGraph(const DeviceGraph& g, const RateLatencyParams& service) {
    ServerGraph out;
    std::map<std::pair<DeviceId, DeviceId>, ServerId> byOrientation;
    for (const auto& [a, b] : g.edges) {
        byOrientation[{a, b}] = out.addServer(service, std::make_pair(a, b));
        byOrientation[{b, a}] = out.addServer(service, std::make_pair(b, a));
    }
    auto adj = g.adjacency();
    for (const auto& [edge, sid] : byOrientation) {
        auto [u, v] = edge;
        for (DeviceId w : adj[v]) {
            if (w == u) continue;  // no U-turns: output-port semantics
            out.addLink(sid, byOrientation.at({v, w}));
        }
    }
    return out;
}

namespace {

// BFS order from a highest-degree root; parents precede children.
std::vector<uint32_t> bfsOrder(const DeviceGraph& g) {
    auto adj = g.adjacency();
    DeviceId root = 0;
    for (DeviceId d = 1; d < g.device_count; ++d)
        if (adj[d].size() > adj[root].size()) root = d;
    std::vector<uint32_t> ord(g.device_count, UINT32_MAX);
    std::deque<DeviceId> work{root};
    ord[root] = 0;
    uint32_t next = 1;
    while (!work.empty()) {
        DeviceId d = work.front();
        work.pop_front();
        for (DeviceId n : adj[d])
            if (ord[n] == UINT32_MAX) {
                ord[n] = next++;
                work.push_back(n);
            }
    }
    return ord;
}

DeviceGraph deviceGraphOf(const ServerGraph& g) {
    DeviceGraph d;
    std::set<std::pair<DeviceId, DeviceId>> edges;
    DeviceId maxDev = 0;
    for (const auto& s : g.servers()) {
        if (!s.origin) throw ValidationError("feed-forwardize needs server origins (generated graphs)");
        auto [a, b] = *s.origin;
        edges.insert({std::min(a, b), std::max(a, b)});
        maxDev = std::max({maxDev, a, b});
    }
    d.device_count = maxDev + 1;
    d.edges.assign(edges.begin(), edges.end());
    return d;
}

// Which devices can reach which through server paths.
std::vector<std::vector<bool>> deviceReachability(const ServerGraph& g, uint32_t devices) {
    std::vector<std::vector<bool>> reach(devices, std::vector<bool>(devices, false));
    for (DeviceId src = 0; src < devices; ++src) {
        std::deque<ServerId> work;
        std::set<ServerId> seen;
        for (const auto& s : g.servers())
            if (s.origin && s.origin->first == src) {
                work.push_back(s.id);
                seen.insert(s.id);
            }
        while (!work.empty()) {
            ServerId id = work.front();
            work.pop_front();
            const auto& sv = g.server(id);
            if (sv.origin) reach[src][sv.origin->second] = true;
            for (ServerId n : g.outLinks(id))
                if (seen.insert(n).second) work.push_back(n);
        }
    }
    return reach;
}

}  // namespace

ServerGraph feedForwardize(const ServerGraph& g) {
    if (g.isAcyclic()) return g;
    DeviceGraph dev = deviceGraphOf(g);
    std::vector<uint32_t> ord = bfsOrder(dev);
    auto before = deviceReachability(g, dev.device_count);

    ServerGraph out;
    std::map<ServerId, ServerId> remap;
    for (const auto& s : g.servers()) remap[s.id] = out.addServer(s.service, s.origin);
    for (const auto& [from, to] : g.links()) {
        auto [u, v] = *g.server(from).origin;
        DeviceId w = g.server(to).origin->second;
        // prohibit the down-then-up turn at a local maximum of the BFS order
        if (ord[v] > ord[u] && ord[v] > ord[w]) continue;
        out.addLink(remap[from], remap[to]);
    }
    if (!out.isAcyclic())
        throw ConnectivityLost("turn prohibition left a cycle");  // bug signal
    auto after = deviceReachability(out, dev.device_count);
    for (DeviceId a = 0; a < dev.device_count; ++a)
        for (DeviceId b = 0; b < dev.device_count; ++b)
            if (a != b && before[a][b] && !after[a][b])
                throw ConnectivityLost("device pair " + std::to_string(a) + " -> " +
                                       std::to_string(b) + " lost by turn prohibition");
    return out;
}

namespace {

// Lexicographically smallest shortest server path src-device -> dst-device.
std::optional<std::vector<ServerId>> shortestServerPath(const ServerGraph& g, DeviceId from,
                                                        DeviceId to) {
    // distance-to-target over reversed links
    std::map<ServerId, uint32_t> dist;
    std::deque<ServerId> work;
    for (const auto& s : g.servers())
        if (s.origin && s.origin->second == to) {
            dist[s.id] = 1;
            work.push_back(s.id);
        }
    while (!work.empty()) {
        ServerId id = work.front();
        work.pop_front();
        for (ServerId p : g.inLinks(id))
            if (!dist.count(p)) {
                dist[p] = dist[id] + 1;
                work.push_back(p);
            }
    }
    std::optional<ServerId> start;
    uint32_t best = UINT32_MAX;
    for (const auto& s : g.servers()) {
        if (!s.origin || s.origin->first != from) continue;
        auto it = dist.find(s.id);
        if (it == dist.end()) continue;
        if (it->second < best || (it->second == best && (!start || s.id < *start))) {
            best = it->second;
            start = s.id;
        }
    }
    if (!start) return std::nullopt;
    std::vector<ServerId> path{*start};
    ServerId cur = *start;
    while (dist[cur] > 1) {
        std::optional<ServerId> next;
        for (ServerId n : g.outLinks(cur)) {
            auto it = dist.find(n);
            if (it == dist.end() || it->second != dist[cur] - 1) continue;
            if (!next || n < *next) next = n;
        }
        path.push_back(*next);
        cur = *next;
    }
    return path;
}

}  // namespace

std::vector<Flow> routeFlows(const ServerGraph& g, uint32_t count,
                             const TokenBucketParams& arrival, uint64_t seed) {
    if (!g.isAcyclic()) throw ValidationError("routeFlows requires a feed-forward server graph");
    std::set<DeviceId> devSet;
    for (const auto& s : g.servers())
        if (s.origin) {
            devSet.insert(s.origin->first);
            devSet.insert(s.origin->second);
        }
    std::vector<DeviceId> devices(devSet.begin(), devSet.end());
    uint32_t devCount = devices.empty() ? 0 : *std::max_element(devices.begin(), devices.end()) + 1;
    auto reach = deviceReachability(g, devCount);
    bool any = false;
    for (DeviceId a = 0; a < devCount && !any; ++a)
        for (DeviceId b = 0; b < devCount && !any; ++b)
            if (a != b && reach[a][b]) any = true;
    if (count > 0 && !any) throw NoRoutableFlows("no device pair is reachable through servers");

    Rng rng(seed);
    std::vector<Flow> flows;
    std::map<std::pair<DeviceId, DeviceId>, std::vector<ServerId>> pathCache;
    for (FlowId id = 0; id < count; ++id) {
        DeviceId a, b;
        do {
            a = devices[rng.below(devices.size())];
            b = devices[rng.below(devices.size())];
        } while (a == b || !reach[a][b]);
        auto key = std::make_pair(a, b);
        auto it = pathCache.find(key);
        if (it == pathCache.end()) {
            auto p = shortestServerPath(g, a, b);
            it = pathCache.emplace(key, std::move(*p)).first;
        }
        flows.push_back({id, arrival, it->second});
    }
    return flows;
}

Network afdxGenerate(const AfdxParams& params) {
    if (params.core_switches == 0 || params.end_systems == 0 || params.flow_count == 0)
        throw ValidationError("afdx: counts must be positive");
    if (params.core_density.sign() <= 0 || params.core_density > Rat(1))
        throw ValidationError("afdx: core density must be in (0,1]");
    Rng rng(params.seed);

    DeviceGraph dev;
    uint32_t cores = params.core_switches;
    dev.device_count = cores + params.end_systems;
    std::vector<uint32_t> degree(dev.device_count, 0);
    auto addEdge = [&](DeviceId a, DeviceId b) {
        dev.edges.emplace_back(std::min(a, b), std::max(a, b));
        ++degree[a];
        ++degree[b];
    };
    // spanning tree over the core, then Erdos-Renyi extras for density
    for (DeviceId i = 1; i < cores; ++i) addEdge(static_cast<DeviceId>(rng.below(i)), i);
    const int64_t scale = 1000000;
    uint64_t dens = static_cast<uint64_t>((params.core_density * Rat(scale)).num().toLL());
    for (DeviceId i = 0; i < cores; ++i)
        for (DeviceId j = i + 1; j < cores; ++j)
            if (!dev.hasEdge(i, j) && rng.chance(dens, scale)) addEdge(i, j);
    // end systems: round-robin over core switches with random jitter
    for (uint32_t e = 0; e < params.end_systems; ++e) {
        DeviceId es = cores + e;
        DeviceId sw = static_cast<DeviceId>((e + rng.below(4)) % cores);
        addEdge(es, sw);
    }

    ServerGraph sg = deviceToServerGraph(dev, {params.server_rate, Rat(0)});
    sg = feedForwardize(sg);
    Network net;
    net.flows = routeFlows(sg, params.flow_count, params.flow_arrival, rng.next());
    net.graph = std::move(sg);
    return net;
}

}  // namespace dnc
