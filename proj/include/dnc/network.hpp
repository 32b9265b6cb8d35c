#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dnc/curve.hpp"

namespace dnc {

using DeviceId = uint32_t;
using ServerId = uint32_t;
using FlowId = uint32_t;

//! Undirected simple graph of devices (routers/switches).
struct DeviceGraph {
    uint32_t device_count = 0;
    std::vector<std::pair<DeviceId, DeviceId>> edges;  // normalized a < b

    bool hasEdge(DeviceId a, DeviceId b) const;
    std::vector<std::vector<DeviceId>> adjacency() const;
    bool isConnected() const;
};

//! One server models one directed orientation of a device edge.
struct Server {
    ServerId id;
    RateLatencyParams service;
    // device edge this server models (tail -> head); absent for loaded files
    std::optional<std::pair<DeviceId, DeviceId>> origin;
};

struct Flow {
    FlowId id;
    TokenBucketParams arrival;
    std::vector<ServerId> path;  // consecutive servers joined by links
};

class ServerGraph {
public:
    const std::vector<Server>& servers() const { return servers_; }
    const std::vector<std::pair<ServerId, ServerId>>& links() const { return links_; }

    ServerId addServer(RateLatencyParams service,
                       std::optional<std::pair<DeviceId, DeviceId>> origin = std::nullopt);
    void addServerWithId(ServerId id, RateLatencyParams service);
    void addLink(ServerId from, ServerId to);  // ValidationError on self/dup/unknown

    bool hasServer(ServerId id) const;
    const Server& server(ServerId id) const;
    bool hasLink(ServerId from, ServerId to) const;
    const std::vector<ServerId>& outLinks(ServerId id) const;
    const std::vector<ServerId>& inLinks(ServerId id) const;

    //! Topological order of server ids; nullopt when the graph has a cycle.
    std::optional<std::vector<ServerId>> topologicalOrder() const;
    bool isAcyclic() const { return topologicalOrder().has_value(); }

    //! Devices touched by server origins (generated graphs only).
    uint32_t deviceCount() const;

private:
    std::vector<Server> servers_;
    std::vector<std::pair<ServerId, ServerId>> links_;
    std::map<ServerId, size_t> index_;
    std::map<ServerId, std::vector<ServerId>> out_, in_;
};

//! A server graph together with the flows crossing it.
struct Network {
    ServerGraph graph;
    std::vector<Flow> flows;

    const Flow& flow(FlowId id) const;
    //! Throws ValidationError naming the violated invariant.
    void validate() const;
};

// ---- generation parameters (defaults track the evaluation setup) ----

struct GlpParams {
    uint32_t target_devices = 20;
    uint32_t m0 = 20;           // seed graph size
    uint32_t m = 1;             // links added per step
    Rat p = Rat(4695, 10000);   // probability of a link-addition step
    Rat beta = Rat(6447, 10000);  // preference offset, must stay below 1
    uint64_t seed = 1;
};

struct AfdxParams {
    uint32_t core_switches = 16;
    uint32_t end_systems = 125;
    Rat server_rate = Rat(100000000);  // 100 Mbps
    uint32_t flow_count = 500;
    TokenBucketParams flow_arrival{Rat(1000000), Rat(1000000)};  // 1 Mbps / 1 Mb
    Rat core_density = Rat(1, 2);
    uint64_t seed = 1;
};

DeviceGraph glpGenerate(const GlpParams& params);

//! Two servers per undirected edge; onward links skip U-turns.
ServerGraph deviceToServerGraph(const DeviceGraph& g, const RateLatencyParams& service);

/*!
 * Break cycles by prohibiting down-then-up turns against a BFS order rooted
 * at a highest-degree device. Keeps every ordered device pair reachable.
 */
ServerGraph feedForwardize(const ServerGraph& g);

std::vector<Flow> routeFlows(const ServerGraph& g, uint32_t count,
                             const TokenBucketParams& arrival, uint64_t seed);

Network afdxGenerate(const AfdxParams& params);

// ---- text format ----

void saveNetwork(const Network& net, std::ostream& os);
void saveNetworkFile(const Network& net, const std::string& path);
Network loadNetwork(std::istream& is);    // ParseError / ValidationError
Network loadNetworkFile(const std::string& path);

}  // namespace dnc
