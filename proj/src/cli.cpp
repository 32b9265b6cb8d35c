#include "dnc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dnc/analysis.hpp"
#include "dnc/combinatorics.hpp"
#include "dnc/errors.hpp"
#include "dnc/network.hpp"

namespace dnc {

namespace {

constexpr const char* kCsvHeader =
    "network,flow,analysis,cache,convolution,burst_cap,delay_s,ops_total,wall_ns,delay_exact";

std::string baseName(const std::string& path) {
    size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string kindName(AnalysisKind k) {
    switch (k) {
        case AnalysisKind::SFA: return "sfa";
        case AnalysisKind::PMOO: return "pmoo";
        case AnalysisKind::EXHAUSTIVE: return "exhaustive";
    }
    return "?";
}

AnalysisKind parseKind(const std::string& s) {
    if (s == "sfa") return AnalysisKind::SFA;
    if (s == "pmoo") return AnalysisKind::PMOO;
    if (s == "exhaustive") return AnalysisKind::EXHAUSTIVE;
    throw CLI::ValidationError("--analysis", "must be sfa, pmoo or exhaustive");
}

uint64_t effectiveSeed(uint64_t cli_seed) {
    if (const char* env = std::getenv("DNC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError("DNC_SEED must be an unsigned integer");
        }
    }
    return cli_seed;
}

//! Write to <path>.tmp first so a failure never leaves a partial file.
void writeFileAtomically(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw ValidationError("cannot open " + tmp + " for writing");
        os << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ValidationError("cannot rename " + tmp + " to " + path);
}

void emit(const std::string& content, const std::string& outPath, std::ostream& stdoutLike) {
    if (outPath.empty()) stdoutLike << content;
    else writeFileAtomically(outPath, content);
}

struct AnalyzeRow {
    FlowId flow;
    AnalysisResult res;
};

std::vector<AnalyzeRow> runAnalyses(const Network& net, const std::vector<FlowId>& flowIds,
                                    const AnalysisOptions& opts, unsigned threads) {
    std::vector<AnalyzeRow> rows(flowIds.size());
    TfaBacklogMemo tfa(net);
    std::optional<SfaBoundsMemo> sfa;
    if (opts.kind == AnalysisKind::SFA && opts.use_cache) sfa.emplace(net);
    auto work = [&](unsigned t) {
        for (size_t i = t; i < flowIds.size(); i += threads) {
            rows[i].flow = flowIds[i];
            rows[i].res = analyzeFlow(net, flowIds[i], opts, &tfa, sfa ? &*sfa : nullptr);
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string analyzeCsv(const std::string& netName, const std::vector<AnalyzeRow>& rows,
                       const AnalysisOptions& opts) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    for (const auto& r : rows) {
        os << netName << "," << r.flow << "," << kindName(opts.kind) << "," << (opts.use_cache ? 1 : 0)
           << "," << (opts.use_convolution_of_alternatives ? 1 : 0) << ","
           << (opts.use_burst_cap ? 1 : 0) << ",";
        if (r.res.delay)
            os << r.res.delay->toDecimal(12);
        else
            os << "unbounded";
        os << "," << r.res.ops.total() << "," << r.res.wall_ns << ",";
        if (r.res.delay)
            os << r.res.delay->toFraction();
        else
            os << "unbounded";
        os << "\n";
    }
    return os.str();
}

std::vector<FlowId> selectFlows(const Network& net, const std::string& spec) {
    std::vector<FlowId> ids;
    if (spec.empty()) {
        for (const auto& f : net.flows) ids.push_back(f.id);
    } else {
        std::istringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            FlowId id = static_cast<FlowId>(std::stoul(tok));
            net.flow(id);  // throws on unknown ids
            ids.push_back(id);
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

// ---- compare ----

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

CsvTable readCsv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') { cells.push_back(cur); cur.clear(); }
            else cur += c;
        }
        cells.push_back(cur);
        if (first) { t.header = std::move(cells); first = false; }
        else t.rows.push_back(std::move(cells));
    }
    if (first) throw ParseError("empty CSV " + path);
    return t;
}

struct DelayEntry {
    std::string decimal;
    std::string exact;  // "p/q", "unbounded" or empty
};

std::map<FlowId, DelayEntry> delayByFlow(const CsvTable& t, const std::string& path) {
    int fcol = t.col("flow"), dcol = t.col("delay_s"), ecol = t.col("delay_exact");
    if (fcol < 0 || dcol < 0) throw ParseError(path + ": missing flow/delay_s columns");
    std::map<FlowId, DelayEntry> out;
    for (const auto& r : t.rows) {
        if (static_cast<int>(r.size()) <= std::max(fcol, dcol)) continue;
        FlowId id = static_cast<FlowId>(std::stoul(r[fcol]));
        DelayEntry e;
        e.decimal = r[dcol];
        if (ecol >= 0 && static_cast<int>(r.size()) > ecol) e.exact = r[ecol];
        out[id] = std::move(e);
    }
    return out;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Worst-case delay bounds for feed-forward networks"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a network file");
    std::string genModel = "glp", genOut;
    uint32_t genDevices = 20, genFlowsPerServer = 4;
    uint64_t genSeed = 1;
    gen->add_option("--model", genModel)->check(CLI::IsMember({"glp", "afdx"}));
    gen->add_option("--devices", genDevices);
    gen->add_option("--seed", genSeed);
    gen->add_option("--flows-per-server", genFlowsPerServer);
    gen->add_option("-o,--output", genOut)->required();

    // ---- analyze ----
    auto* an = app.add_subcommand("analyze", "per-flow delay bounds as CSV");
    std::string anFile, anKind = "exhaustive", anFlows, anOut;
    bool noCache = false, noConv = false, noCap = false;
    unsigned anThreads = 1;
    an->add_option("file", anFile)->required();
    an->add_option("--analysis", anKind);
    an->add_flag("--no-cache", noCache);
    an->add_flag("--no-convolution", noConv);
    an->add_flag("--no-burst-cap", noCap);
    an->add_option("--flows", anFlows);
    an->add_option("--threads", anThreads)->check(CLI::PositiveNumber);
    an->add_option("-o,--output", anOut);

    // ---- compare ----
    auto* cmp = app.add_subcommand("compare", "relative deviation between two analyze CSVs");
    std::string cmpA, cmpB, cmpOut;
    cmp->add_option("a", cmpA)->required();
    cmp->add_option("b", cmpB)->required();
    cmp->add_option("-o,--output", cmpOut);

    // ---- count ----
    auto* cnt = app.add_subcommand("count", "combinatorial counts and op-count bounds");
    std::vector<uint64_t> cntLinext, cntBoundArgs;
    std::string cntBoundKind, cntEquationsFile;
    int64_t cntDecomp = -1, cntFoi = -1;
    cnt->add_option("--linext", cntLinext)->expected(2);
    cnt->add_option("--decompositions", cntDecomp);
    cnt->add_option("--equations", cntEquationsFile);
    cnt->add_option("--foi", cntFoi);
    cnt->add_option("--bound", cntBoundKind);
    cnt->add_option("args", cntBoundArgs);

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "timing runs (median of repeats)");
    std::string benchFile, benchKind = "exhaustive", benchOut;
    unsigned benchRepeat = 1;
    bool bNoCache = false, bNoConv = false, bNoCap = false;
    bench->add_option("file", benchFile)->required();
    bench->add_option("--analysis", benchKind);
    bench->add_option("--repeat", benchRepeat);
    bench->add_flag("--no-cache", bNoCache);
    bench->add_flag("--no-convolution", bNoConv);
    bench->add_flag("--no-burst-cap", bNoCap);
    bench->add_option("-o,--output", benchOut);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) {
            if (genDevices == 0) { err << "gen: --devices must be positive\n"; return 2; }
            uint64_t seed = effectiveSeed(genSeed);
            Network net;
            try {
                if (genModel == "glp") {
                    GlpParams gp;
                    gp.target_devices = genDevices;
                    gp.seed = seed;
                    DeviceGraph dev = glpGenerate(gp);
                    // 10 Gbps zero-latency servers, 5 Mbps / 5 Mb token buckets
                    ServerGraph sg = feedForwardize(
                        deviceToServerGraph(dev, {Rat(10000000000ll), Rat(0)}));
                    uint32_t flows = genFlowsPerServer * static_cast<uint32_t>(sg.servers().size());
                    net.flows = routeFlows(sg, flows, {Rat(5000000), Rat(5000000)}, seed + 1);
                    net.graph = std::move(sg);
                } else {
                    AfdxParams ap;
                    ap.seed = seed;
                    net = afdxGenerate(ap);
                }
                net.validate();
            } catch (const std::exception& e) {
                err << "generation failed: " << e.what() << "\n";
                return 3;
            }
            std::ostringstream os;
            saveNetwork(net, os);
            writeFileAtomically(genOut, os.str());
            out << "devices=" << net.graph.deviceCount() << " servers=" << net.graph.servers().size()
                << " flows=" << net.flows.size() << "\n";
            return 0;
        }

        if (an->parsed()) {
            Network net;
            try {
                net = loadNetworkFile(anFile);
            } catch (const std::exception& e) {
                err << "cannot load network: " << e.what() << "\n";
                return 4;
            }
            AnalysisOptions opts;
            opts.kind = parseKind(anKind);
            opts.use_cache = !noCache;
            opts.use_convolution_of_alternatives = !noConv;
            opts.use_burst_cap = !noCap;
            std::vector<FlowId> ids;
            try {
                ids = selectFlows(net, anFlows);
            } catch (const std::exception& e) {
                err << "bad --flows: " << e.what() << "\n";
                return 2;
            }
            auto rows = runAnalyses(net, ids, opts, anThreads);
            emit(analyzeCsv(baseName(anFile), rows, opts), anOut, out);
            return 0;
        }

        if (cmp->parsed()) {
            std::map<FlowId, DelayEntry> a, b;
            try {
                a = delayByFlow(readCsv(cmpA), cmpA);
                b = delayByFlow(readCsv(cmpB), cmpB);
            } catch (const std::exception& e) {
                err << e.what() << "\n";
                return 4;
            }
            if (a.empty() || b.empty()) { err << "compare: no rows\n"; return 2; }
            for (const auto& [id, e] : a)
                if (!b.count(id)) { err << "compare: flow ids do not match\n"; return 2; }
            for (const auto& [id, e] : b)
                if (!a.count(id)) { err << "compare: flow ids do not match\n"; return 2; }
            std::ostringstream os;
            os << "flow,delay_a_s,delay_b_s,deviation\n";
            std::vector<double> devs;
            std::vector<Rat> exactDevs;
            for (const auto& [id, ea] : a) {
                const auto& eb = b.at(id);
                os << id << "," << ea.decimal << "," << eb.decimal << ",";
                if (ea.decimal == "unbounded" || eb.decimal == "unbounded") {
                    if (ea.decimal == eb.decimal) {
                        os << "0\n";
                        devs.push_back(0.0);
                    } else {
                        os << "unbounded\n";
                    }
                    continue;
                }
                Rat da = !ea.exact.empty() ? Rat::parse(ea.exact) : Rat::parse(ea.decimal);
                Rat db = !eb.exact.empty() ? Rat::parse(eb.exact) : Rat::parse(eb.decimal);
                if (db.isZero()) { os << (da.isZero() ? "0" : "inf") << "\n"; continue; }
                Rat dev = (da - db) / db;
                os << dev.toDecimal(12) << "\n";
                devs.push_back(dev.toDouble());
            }
            if (!devs.empty()) {
                std::sort(devs.begin(), devs.end());
                double mean = 0;
                for (double d : devs) mean += d;
                mean /= double(devs.size());
                size_t p99 = (devs.size() * 99 + 99) / 100;  // ceil(0.99 n), 1-based
                p99 = std::min(devs.size(), std::max<size_t>(1, p99)) - 1;
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.12g", mean);
                os << "mean,,," << buf << "\n";
                std::snprintf(buf, sizeof buf, "%.12g", devs.back());
                os << "max,,," << buf << "\n";
                std::snprintf(buf, sizeof buf, "%.12g", devs[p99]);
                os << "p99,,," << buf << "\n";
            }
            emit(os.str(), cmpOut, out);
            return 0;
        }

        if (cnt->parsed()) {
            if (!cntLinext.empty()) {
                KaryTreeSpec spec{static_cast<uint32_t>(cntLinext[0]),
                                  static_cast<uint32_t>(cntLinext[1])};
                Poset p = karyTreePoset(spec);
                LinextOptions lo;
                try {
                    auto res = countLinearExtensions(p, LinextMethod::VarolRotem, lo);
                    out << res.count.toString() << " enumerated\n";
                } catch (const TooLarge&) {
                    auto res = countLinearExtensions(p, LinextMethod::Auto, lo);
                    out << res.count.toString() << " closed_form\n";
                }
                return 0;
            }
            if (cntDecomp >= 0) {
                if (cntDecomp < 1) { err << "count: --decompositions needs n >= 1\n"; return 2; }
                out << countDecompositions(static_cast<uint32_t>(cntDecomp)).toString() << "\n";
                return 0;
            }
            if (!cntEquationsFile.empty()) {
                Network net;
                try {
                    net = loadNetworkFile(cntEquationsFile);
                } catch (const std::exception& e) {
                    err << "cannot load network: " << e.what() << "\n";
                    return 4;
                }
                out << "flow,permissible_equations\n";
                for (const auto& f : net.flows) {
                    if (cntFoi >= 0 && f.id != static_cast<FlowId>(cntFoi)) continue;
                    try {
                        out << f.id << "," << countPermissibleEquations(net, f.id).toString() << "\n";
                    } catch (const TooLarge&) {
                        out << f.id << ",too_large\n";
                    }
                }
                return 0;
            }
            if (!cntBoundKind.empty()) {
                OpBoundKind kind;
                size_t need = 1;
                if (cntBoundKind == "sfa_tandem") { kind = OpBoundKind::SfaTandem; need = 2; }
                else if (cntBoundKind == "algdnc_tandem") kind = OpBoundKind::AlgdncTandem;
                else if (cntBoundKind == "sfa_sinktree") { kind = OpBoundKind::SfaSinktree; need = 2; }
                else if (cntBoundKind == "algdnc_sinktree") kind = OpBoundKind::AlgdncSinktree;
                else { err << "count: unknown bound kind\n"; return 2; }
                if (cntBoundArgs.size() != need) {
                    err << "count: --bound " << cntBoundKind << " takes " << need << " argument(s)\n";
                    return 2;
                }
                auto v = opCountBound(kind, cntBoundArgs[0], need == 2 ? cntBoundArgs[1] : 0);
                if (v.exact) out << v.exact->toExactText() << " exact\n";
                else {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.12g", v.approx);
                    out << buf << " approx\n";
                }
                return 0;
            }
            err << "count: nothing to count\n";
            return 2;
        }

        if (bench->parsed()) {
            if (benchRepeat < 1) { err << "bench: --repeat must be positive\n"; return 2; }
            Network net;
            try {
                net = loadNetworkFile(benchFile);
            } catch (const std::exception& e) {
                err << "cannot load network: " << e.what() << "\n";
                return 4;
            }
            AnalysisOptions opts;
            opts.kind = parseKind(benchKind);
            opts.use_cache = !bNoCache;
            opts.use_convolution_of_alternatives = !bNoConv;
            opts.use_burst_cap = !bNoCap;
            std::vector<FlowId> ids = selectFlows(net, "");
            std::vector<std::vector<AnalyzeRow>> passes;
            std::vector<uint64_t> totals;
            for (unsigned r = 0; r < benchRepeat; ++r) {
                auto rows = runAnalyses(net, ids, opts, 1);
                uint64_t total = 0;
                for (const auto& row : rows) total += row.res.wall_ns;
                totals.push_back(total);
                passes.push_back(std::move(rows));
            }
            auto median = [](std::vector<uint64_t> v) {
                std::sort(v.begin(), v.end());
                return v[v.size() / 2];
            };
            std::ostringstream os;
            os << "network,flow,analysis,repeats,delay_s,ops_total,wall_ns_median\n";
            std::string name = baseName(benchFile);
            for (size_t i = 0; i < ids.size(); ++i) {
                std::vector<uint64_t> walls;
                for (const auto& p : passes) walls.push_back(p[i].res.wall_ns);
                const auto& res = passes[0][i].res;
                os << name << "," << ids[i] << "," << kindName(opts.kind) << "," << benchRepeat << ",";
                os << (res.delay ? res.delay->toDecimal(12) : "unbounded");
                os << "," << res.ops.total() << "," << median(walls) << "\n";
            }
            uint64_t opsTotal = 0;
            for (const auto& row : passes[0]) opsTotal += row.res.ops.total();
            os << name << ",total," << kindName(opts.kind) << "," << benchRepeat << ",,"
               << opsTotal << "," << median(totals) << "\n";
            emit(os.str(), benchOut, out);
            return 0;
        }
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace dnc
