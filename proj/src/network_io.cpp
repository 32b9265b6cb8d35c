#include <fstream>
#include <sstream>

#include "dnc/errors.hpp"
#include "dnc/network.hpp"

namespace dnc {

void saveNetwork(const Network& net, std::ostream& os) {
    os << "dnc-network v1\n";
    for (const auto& s : net.graph.servers())
        os << "server " << s.id << " " << s.service.rate.toExactText() << " "
           << s.service.latency.toExactText() << "\n";
    for (const auto& [a, b] : net.graph.links()) os << "link " << a << " " << b << "\n";
    for (const auto& f : net.flows) {
        os << "flow " << f.id << " " << f.arrival.rate.toExactText() << " "
           << f.arrival.burst.toExactText();
        for (ServerId s : f.path) os << " " << s;
        os << "\n";
    }
}

void saveNetworkFile(const Network& net, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open " + path + " for writing");
    saveNetwork(net, os);
}

namespace {

uint32_t parseId(const std::string& tok, int line) {
    for (char c : tok)
        if (c < '0' || c > '9') throw ParseError("expected unsigned integer id, got '" + tok + "'", line);
    try {
        unsigned long v = std::stoul(tok);
        return static_cast<uint32_t>(v);
    } catch (const std::exception&) {
        throw ParseError("id out of range: " + tok, line);
    }
}

Rat parseNumber(const std::string& tok, int line) {
    try {
        return Rat::parse(tok);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad number '") + tok + "': " + e.what(), line);
    }
}

}  // namespace

Network loadNetwork(std::istream& is) {
    Network net;
    std::string line;
    int lineNo = 0;
    bool sawHeader = false;
    while (std::getline(is, line)) {
        ++lineNo;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (toks.empty()) continue;
        if (!sawHeader) {
            if (toks.size() != 2 || toks[0] != "dnc-network" || toks[1] != "v1")
                throw ParseError("expected header 'dnc-network v1'", lineNo);
            sawHeader = true;
            continue;
        }
        if (toks[0] == "server") {
            if (toks.size() != 4) throw ParseError("server takes <id> <rate> <latency>", lineNo);
            ServerId id = parseId(toks[1], lineNo);
            try {
                net.graph.addServerWithId(id, {parseNumber(toks[2], lineNo), parseNumber(toks[3], lineNo)});
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), lineNo);
            }
        } else if (toks[0] == "link") {
            if (toks.size() != 3) throw ParseError("link takes <src> <dst>", lineNo);
            try {
                net.graph.addLink(parseId(toks[1], lineNo), parseId(toks[2], lineNo));
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), lineNo);
            }
        } else if (toks[0] == "flow") {
            if (toks.size() < 5) throw ParseError("flow takes <id> <rate> <burst> <server>...", lineNo);
            Flow f;
            f.id = parseId(toks[1], lineNo);
            f.arrival.rate = parseNumber(toks[2], lineNo);
            f.arrival.burst = parseNumber(toks[3], lineNo);
            for (size_t i = 4; i < toks.size(); ++i) f.path.push_back(parseId(toks[i], lineNo));
            net.flows.push_back(std::move(f));
        } else {
            throw ParseError("unknown declaration '" + toks[0] + "'", lineNo);
        }
    }
    if (!sawHeader) throw ParseError("missing header 'dnc-network v1'", 1);
    net.validate();
    return net;
}

Network loadNetworkFile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path);
    return loadNetwork(is);
}

}  // namespace dnc
