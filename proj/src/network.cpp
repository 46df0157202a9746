#include "propnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "propnet/rng.hpp"

namespace propnet {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double draw_rate(const RateDistribution& d, Substream& rng) {
    if (d.lo == d.hi) return d.lo;
    return d.lo + (d.hi - d.lo) * rng.next_unit();
}

} // namespace

PropagationNetwork PropagationNetwork::build(int node_count, std::vector<Edge> edges,
                                             std::vector<double> recovery) {
    if (node_count <= 0) fail("network: node count must be positive");
    const auto n = static_cast<std::size_t>(node_count);
    for (const Edge& e : edges) {
        if (e.source < 0 || e.source >= node_count || e.target < 0 || e.target >= node_count)
            fail("network: edge index out of range");
        if (e.source == e.target) fail("network: self-loop forbidden");
        if (!(e.rate > 0.0)) fail("network: activation rate must be positive");
    }
    if (recovery.empty()) recovery.assign(n, 0.0);
    if (recovery.size() != n) fail("network: recovery vector length mismatch");
    for (double g : recovery)
        if (!(g >= 0.0)) fail("network: recovery rate must be nonnegative");

    // Canonical order: per-target blocks, parents ascending within a block.
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.target != b.target) return a.target < b.target;
        return a.source < b.source;
    });
    for (std::size_t e = 1; e < edges.size(); ++e)
        if (edges[e].source == edges[e - 1].source && edges[e].target == edges[e - 1].target)
            fail("network: duplicate directed edge");

    PropagationNetwork net;
    net.n_ = node_count;
    net.edges_ = std::move(edges);
    net.recovery_ = std::move(recovery);

    net.parent_off_.assign(n + 1, 0);
    net.child_off_.assign(n + 1, 0);
    for (const Edge& e : net.edges_) {
        ++net.parent_off_[static_cast<std::size_t>(e.target) + 1];
        ++net.child_off_[static_cast<std::size_t>(e.source) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        net.parent_off_[i + 1] += net.parent_off_[i];
        net.child_off_[i + 1] += net.child_off_[i];
    }
    net.parent_flat_.resize(net.edges_.size());
    net.child_flat_.resize(net.edges_.size());
    std::vector<int> ppos(net.parent_off_.begin(), net.parent_off_.end() - 1);
    std::vector<int> cpos(net.child_off_.begin(), net.child_off_.end() - 1);
    for (int e = 0; e < net.edge_count(); ++e) {
        const Edge& ed = net.edges_[static_cast<std::size_t>(e)];
        net.parent_flat_[static_cast<std::size_t>(ppos[static_cast<std::size_t>(ed.target)]++)] =
            Link{ed.source, e};
        net.child_flat_[static_cast<std::size_t>(cpos[static_cast<std::size_t>(ed.source)]++)] =
            Link{ed.target, e};
    }

    double total = 0.0;
    for (const Edge& e : net.edges_) total += e.rate;
    for (double g : net.recovery_) {
        total += g;
        if (g > 0.0) net.has_recovery_ = true;
    }
    net.total_rate_ = total;
    return net;
}

void check_adjacency_consistency(const PropagationNetwork& net) {
    const int n = net.node_count();
    int seen = 0;
    for (int j = 0; j < n; ++j) {
        int prev = -1;
        for (const auto& link : net.parents(j)) {
            const Edge& e = net.edge(link.edge);
            if (e.source != link.node || e.target != j)
                throw std::logic_error("adjacency: parent entry does not match edge list");
            if (link.node <= prev)
                throw std::logic_error("adjacency: parents not in increasing order");
            prev = link.node;
            ++seen;
        }
    }
    if (seen != net.edge_count())
        throw std::logic_error("adjacency: parent list does not cover edge list");
    seen = 0;
    for (int i = 0; i < n; ++i) {
        for (const auto& link : net.children(i)) {
            const Edge& e = net.edge(link.edge);
            if (e.source != i || e.target != link.node)
                throw std::logic_error("adjacency: child entry does not match edge list");
            ++seen;
        }
    }
    if (seen != net.edge_count())
        throw std::logic_error("adjacency: child list does not cover edge list");
}

SourceSet make_source_set(const PropagationNetwork& net, std::vector<int> nodes) {
    if (nodes.empty()) fail("source set: must be nonempty");
    std::vector<int> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] < 0 || sorted[i] >= net.node_count()) fail("source set: index out of range");
        if (i > 0 && sorted[i] == sorted[i - 1]) fail("source set: duplicate node");
    }
    return SourceSet{std::move(nodes)};
}

SourceSet random_source_set(const PropagationNetwork& net, int count, std::uint64_t seed) {
    if (count <= 0 || count > net.node_count()) fail("source set: bad size");
    Substream rng(stream_key(seed, 0x50524353ULL)); // "PRCS"
    std::unordered_set<int> chosen;
    std::vector<int> nodes;
    while (static_cast<int>(nodes.size()) < count) {
        int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(net.node_count())));
        if (chosen.insert(v).second) nodes.push_back(v);
    }
    return SourceSet{std::move(nodes)};
}

std::string family_name(NetworkFamily f) {
    switch (f) {
    case NetworkFamily::ErdosRenyi: return "er";
    case NetworkFamily::SmallWorld: return "sw";
    case NetworkFamily::ScaleFree: return "sf";
    }
    return "?";
}

NetworkFamily parse_family(const std::string& name) {
    if (name == "er" || name == "erdos-renyi") return NetworkFamily::ErdosRenyi;
    if (name == "sw" || name == "small-world") return NetworkFamily::SmallWorld;
    if (name == "sf" || name == "scale-free") return NetworkFamily::ScaleFree;
    fail("unknown network family: " + name);
}

long erdos_renyi_edge_count(int n, int kappa) {
    return std::llround(n * std::log(static_cast<double>(kappa) * n) / 2.0);
}

namespace {

std::vector<double> draw_recovery(const GeneratorConfig& cfg, Substream& rng) {
    std::vector<double> gamma(static_cast<std::size_t>(cfg.n), 0.0);
    if (!cfg.recovery.zero())
        for (double& g : gamma) g = draw_rate(cfg.recovery, rng);
    return gamma;
}

void check_generator_common(const GeneratorConfig& cfg) {
    if (cfg.n < 2) fail("generator: n must be >= 2");
    if (cfg.kappa < 1) fail("generator: kappa must be >= 1");
    if (cfg.shortcut_prob < 0.0 || cfg.shortcut_prob > 1.0)
        fail("generator: shortcut probability must be in [0,1]");
}

} // namespace

PropagationNetwork generate_erdos_renyi(const GeneratorConfig& cfg) {
    check_generator_common(cfg);
    const long m = erdos_renyi_edge_count(cfg.n, cfg.kappa);
    const long max_pairs = static_cast<long>(cfg.n) * (cfg.n - 1);
    if (m > max_pairs) fail("generator: requested edge count exceeds n(n-1)");

    Substream rng(stream_key(cfg.seed, 0x4552ULL)); // "ER"
    std::unordered_set<long> used;
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    while (static_cast<long>(edges.size()) < m) {
        int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.n)));
        int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.n - 1)));
        if (j >= i) ++j; // uniform over ordered pairs without self-loops
        long code = static_cast<long>(i) * cfg.n + j;
        if (!used.insert(code).second) continue;
        edges.push_back(Edge{i, j, draw_rate(cfg.activation, rng)});
    }
    return PropagationNetwork::build(cfg.n, std::move(edges), draw_recovery(cfg, rng));
}

PropagationNetwork generate_small_world(const GeneratorConfig& cfg) {
    check_generator_common(cfg);
    if (2 * cfg.kappa >= cfg.n) fail("generator: ring degenerate, kappa must be < n/2");

    Substream rng(stream_key(cfg.seed, 0x5357ULL)); // "SW"
    std::vector<Edge> edges;
    std::vector<std::unordered_set<int>> neighbors(static_cast<std::size_t>(cfg.n));
    auto add_link = [&](int a, int b) {
        edges.push_back(Edge{a, b, draw_rate(cfg.activation, rng)});
        edges.push_back(Edge{b, a, draw_rate(cfg.activation, rng)});
        neighbors[static_cast<std::size_t>(a)].insert(b);
        neighbors[static_cast<std::size_t>(b)].insert(a);
    };
    for (int i = 0; i < cfg.n; ++i)
        for (int d = 1; d <= cfg.kappa; ++d) add_link(i, (i + d) % cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
        if (rng.next_unit() >= cfg.shortcut_prob) continue;
        const auto& nb = neighbors[static_cast<std::size_t>(i)];
        if (static_cast<int>(nb.size()) >= cfg.n - 1) continue; // no candidate left
        for (;;) {
            int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cfg.n)));
            if (v == i || nb.count(v)) continue;
            add_link(i, v);
            break;
        }
    }
    return PropagationNetwork::build(cfg.n, std::move(edges), draw_recovery(cfg, rng));
}

PropagationNetwork generate_scale_free(const GeneratorConfig& cfg) {
    check_generator_common(cfg);
    if (cfg.kappa >= cfg.n) fail("generator: kappa must be < n");

    Substream rng(stream_key(cfg.seed, 0x5346ULL)); // "SF"
    std::vector<Edge> edges;
    // Degree multiset: node v appears deg(v) times; uniform picks from it are
    // degree-proportional.
    std::vector<int> degree_bag;
    auto add_link = [&](int a, int b) {
        edges.push_back(Edge{a, b, draw_rate(cfg.activation, rng)});
        edges.push_back(Edge{b, a, draw_rate(cfg.activation, rng)});
        degree_bag.push_back(a);
        degree_bag.push_back(b);
    };
    for (int i = 0; i < cfg.kappa; ++i)
        for (int j = i + 1; j < cfg.kappa; ++j) add_link(i, j);
    std::vector<int> targets;
    for (int v = cfg.kappa; v < cfg.n; ++v) {
        targets.clear();
        const std::size_t bag_snapshot = degree_bag.size();
        while (static_cast<int>(targets.size()) < cfg.kappa) {
            int t;
            if (bag_snapshot == 0) {
                // kappa = 1 seed has no links yet: uniform over existing nodes
                t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v)));
            } else {
                t = degree_bag[static_cast<std::size_t>(rng.next_below(bag_snapshot))];
            }
            if (std::find(targets.begin(), targets.end(), t) != targets.end()) continue;
            targets.push_back(t);
        }
        for (int t : targets) add_link(v, t);
    }
    return PropagationNetwork::build(cfg.n, std::move(edges), draw_recovery(cfg, rng));
}

PropagationNetwork generate_network(const GeneratorConfig& cfg) {
    switch (cfg.family) {
    case NetworkFamily::ErdosRenyi: return generate_erdos_renyi(cfg);
    case NetworkFamily::SmallWorld: return generate_small_world(cfg);
    case NetworkFamily::ScaleFree: return generate_scale_free(cfg);
    }
    fail("generator: unknown family");
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

} // namespace

NetworkFile read_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    int lineno = 0;
    auto next_line = [&](bool required) -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            return true;
        }
        if (required) parse_fail(path, lineno, "unexpected end of file");
        return false;
    };

    next_line(true);
    std::istringstream header(line);
    long n = 0, m = 0;
    if (!(header >> n >> m) || n <= 0 || m < 0)
        parse_fail(path, lineno, "expected header 'n m'");

    std::vector<Edge> edges;
    std::vector<double> shapes;
    bool any_shape = false;
    for (long e = 0; e < m; ++e) {
        if (!next_line(false)) parse_fail(path, lineno, "header promises more edge lines");
        std::istringstream row(line);
        Edge ed;
        if (!(row >> ed.source >> ed.target >> ed.rate))
            parse_fail(path, lineno, "expected 'i j alpha'");
        double shape = 1.0;
        if (row >> shape) any_shape = true;
        edges.push_back(ed);
        shapes.push_back(shape);
    }

    std::vector<double> gamma(static_cast<std::size_t>(n), 0.0);
    std::vector<double> caps;
    bool any_cap = false;
    bool any_gamma_line = false;
    while (next_line(false)) {
        any_gamma_line = true;
        std::istringstream row(line);
        long i = 0;
        double g = 0.0;
        if (!(row >> i >> g)) parse_fail(path, lineno, "expected 'i gamma [cap]'");
        if (i < 0 || i >= n) parse_fail(path, lineno, "node index out of range");
        if (!(g >= 0.0)) parse_fail(path, lineno, "recovery rate must be nonnegative");
        gamma[static_cast<std::size_t>(i)] = g;
        double cap = 0.0;
        if (row >> cap) {
            if (caps.empty()) caps.assign(static_cast<std::size_t>(n), 0.0);
            caps[static_cast<std::size_t>(i)] = cap;
            any_cap = true;
        }
    }
    (void)any_gamma_line;

    // Map shapes through the canonical edge reordering done by build().
    std::vector<std::size_t> order(edges.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (edges[a].target != edges[b].target) return edges[a].target < edges[b].target;
        return edges[a].source < edges[b].source;
    });
    std::vector<double> shapes_sorted;
    if (any_shape) {
        shapes_sorted.resize(shapes.size());
        for (std::size_t k = 0; k < order.size(); ++k) shapes_sorted[k] = shapes[order[k]];
    }

    NetworkFile out;
    try {
        out.network =
            PropagationNetwork::build(static_cast<int>(n), std::move(edges), std::move(gamma));
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(path + ": " + err.what());
    }
    out.edge_shape = std::move(shapes_sorted);
    if (any_cap) out.node_cap = std::move(caps);
    return out;
}

PropagationNetwork read_network(const std::string& path) {
    return read_network_file(path).network;
}

void write_network_file(const NetworkFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    const PropagationNetwork& net = file.network;
    out.precision(17);
    out << net.node_count() << ' ' << net.edge_count() << '\n';
    for (int e = 0; e < net.edge_count(); ++e) {
        const Edge& ed = net.edge(e);
        out << ed.source << ' ' << ed.target << ' ' << ed.rate;
        if (!file.edge_shape.empty()) out << ' ' << file.edge_shape[static_cast<std::size_t>(e)];
        out << '\n';
    }
    const bool want_gamma = net.has_recovery() || !file.node_cap.empty();
    if (want_gamma) {
        for (int i = 0; i < net.node_count(); ++i) {
            out << i << ' ' << net.recovery_rate(i);
            if (!file.node_cap.empty()) out << ' ' << file.node_cap[static_cast<std::size_t>(i)];
            out << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_network(const PropagationNetwork& net, const std::string& path) {
    NetworkFile file;
    file.network = net;
    write_network_file(file, path);
}

SourceSet read_source_set(const PropagationNetwork& net, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<int> nodes;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream row(line);
        int v = 0;
        if (!(row >> v)) parse_fail(path, lineno, "expected a node index");
        nodes.push_back(v);
    }
    try {
        return make_source_set(net, std::move(nodes));
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(path + ": " + err.what());
    }
}

void write_source_set(const SourceSet& sources, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int v : sources.nodes) out << v << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace propnet
