#include "dnc/network.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dnc/errors.hpp"

namespace dnc {

bool DeviceGraph::hasEdge(DeviceId a, DeviceId b) const {
    if (a > b) std::swap(a, b);
    return std::find(edges.begin(), edges.end(), std::make_pair(a, b)) != edges.end();
}

std::vector<std::vector<DeviceId>> DeviceGraph::adjacency() const {
    std::vector<std::vector<DeviceId>> adj(device_count);
    for (const auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

bool DeviceGraph::isConnected() const {
    if (device_count == 0) return true;
    auto adj = adjacency();
    std::vector<bool> seen(device_count, false);
    std::deque<DeviceId> work{0};
    seen[0] = true;
    uint32_t visited = 0;
    while (!work.empty()) {
        DeviceId d = work.front();
        work.pop_front();
        ++visited;
        for (DeviceId n : adj[d])
            if (!seen[n]) { seen[n] = true; work.push_back(n); }
    }
    return visited == device_count;
}

ServerId ServerGraph::addServer(RateLatencyParams service,
                                std::optional<std::pair<DeviceId, DeviceId>> origin) {
    ServerId id = servers_.empty() ? 0 : servers_.back().id + 1;
    while (hasServer(id)) ++id;
    index_[id] = servers_.size();
    servers_.push_back({id, std::move(service), std::move(origin)});
    out_[id];
    in_[id];
    return id;
}

void ServerGraph::addServerWithId(ServerId id, RateLatencyParams service) {
    if (hasServer(id)) throw ValidationError("duplicate server id " + std::to_string(id));
    index_[id] = servers_.size();
    servers_.push_back({id, std::move(service), std::nullopt});
    out_[id];
    in_[id];
}

bool ServerGraph::hasServer(ServerId id) const { return index_.count(id) != 0; }

const Server& ServerGraph::server(ServerId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("unknown server id " + std::to_string(id));
    return servers_[it->second];
}

bool ServerGraph::hasLink(ServerId from, ServerId to) const {
    auto it = out_.find(from);
    if (it == out_.end()) return false;
    return std::find(it->second.begin(), it->second.end(), to) != it->second.end();
}

void ServerGraph::addLink(ServerId from, ServerId to) {
    if (from == to) throw ValidationError("link connects a server to itself");
    if (!hasServer(from) || !hasServer(to)) throw ValidationError("link references unknown server");
    if (hasLink(from, to)) throw ValidationError("duplicate link");
    links_.emplace_back(from, to);
    out_[from].push_back(to);
    in_[to].push_back(from);
}

const std::vector<ServerId>& ServerGraph::outLinks(ServerId id) const {
    static const std::vector<ServerId> none;
    auto it = out_.find(id);
    return it == out_.end() ? none : it->second;
}

const std::vector<ServerId>& ServerGraph::inLinks(ServerId id) const {
    static const std::vector<ServerId> none;
    auto it = in_.find(id);
    return it == in_.end() ? none : it->second;
}

std::optional<std::vector<ServerId>> ServerGraph::topologicalOrder() const {
    std::map<ServerId, uint32_t> indeg;
    for (const auto& s : servers_) indeg[s.id] = 0;
    for (const auto& [a, b] : links_) ++indeg[b];
    std::deque<ServerId> ready;
    for (const auto& s : servers_)
        if (indeg[s.id] == 0) ready.push_back(s.id);
    std::vector<ServerId> order;
    while (!ready.empty()) {
        ServerId id = ready.front();
        ready.pop_front();
        order.push_back(id);
        for (ServerId n : outLinks(id))
            if (--indeg[n] == 0) ready.push_back(n);
    }
    if (order.size() != servers_.size()) return std::nullopt;
    return order;
}

uint32_t ServerGraph::deviceCount() const {
    std::set<DeviceId> devs;
    for (const auto& s : servers_)
        if (s.origin) {
            devs.insert(s.origin->first);
            devs.insert(s.origin->second);
        }
    return static_cast<uint32_t>(devs.size());
}

const Flow& Network::flow(FlowId id) const {
    for (const auto& f : flows)
        if (f.id == id) return f;
    throw ValidationError("unknown flow id " + std::to_string(id));
}

void Network::validate() const {
    for (const auto& s : graph.servers()) {
        if (s.service.rate.sign() < 0) throw ValidationError("server rate must be >= 0");
        if (s.service.latency.sign() < 0) throw ValidationError("server latency must be >= 0");
    }
    if (!graph.isAcyclic()) throw ValidationError("server graph must be feed-forward (acyclic)");
    std::set<FlowId> ids;
    for (const auto& f : flows) {
        if (!ids.insert(f.id).second) throw ValidationError("duplicate flow id " + std::to_string(f.id));
        if (f.path.empty()) throw ValidationError("flow path must be non-empty");
        if (f.arrival.rate.sign() < 0 || f.arrival.burst.sign() < 0)
            throw ValidationError("flow arrival parameters must be >= 0");
        std::set<ServerId> seen;
        for (ServerId s : f.path) {
            if (!graph.hasServer(s))
                throw ValidationError("flow path references unknown server " + std::to_string(s));
            if (!seen.insert(s).second) throw ValidationError("flow path repeats a server");
        }
        for (size_t i = 0; i + 1 < f.path.size(); ++i)
            if (!graph.hasLink(f.path[i], f.path[i + 1]))
                throw ValidationError("flow path uses a missing link " + std::to_string(f.path[i]) +
                                      " -> " + std::to_string(f.path[i + 1]));
    }
}

}  // namespace dnc
