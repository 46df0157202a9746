#ifndef PROPNET_NETWORK_HPP
#define PROPNET_NETWORK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace propnet {

struct Edge {
    int source = 0;
    int target = 0;
    double rate = 0.0; // activation rate alpha of source on target, > 0
};

// Directed propagation network with per-edge activation rates and per-node
// recovery rates. Immutable after construction; safe to share across threads.
//
// Edges are stored in canonical order: sorted by (target, source). This
// fixes the layout of the length-m activation jump vector as the
// concatenation of per-target blocks, each block listing the target's
// parents in increasing node order. Jump-process ids are:
//   [0, n)      recovery of node i
//   [n, n + m)  activation along edge (index - n)
class PropagationNetwork {
public:
    struct Link {
        int node = 0; // neighbor
        int edge = 0; // canonical edge index
    };

    // Validates and canonicalizes. Throws std::invalid_argument on
    // self-loops, duplicate edges, nonpositive alpha, negative gamma, or
    // out-of-range indices. An empty recovery vector means all zeros.
    static PropagationNetwork build(int node_count, std::vector<Edge> edges,
                                    std::vector<double> recovery = {});

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int process_count() const { return n_ + edge_count(); }

    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    std::span<const Edge> edges() const { return edges_; }

    // Parents of j (edges i -> j), in increasing parent order.
    std::span<const Link> parents(int j) const {
        return {parent_flat_.data() + parent_off_[static_cast<std::size_t>(j)],
                parent_flat_.data() + parent_off_[static_cast<std::size_t>(j) + 1]};
    }
    // Children of i (edges i -> j).
    std::span<const Link> children(int i) const {
        return {child_flat_.data() + child_off_[static_cast<std::size_t>(i)],
                child_flat_.data() + child_off_[static_cast<std::size_t>(i) + 1]};
    }

    double recovery_rate(int i) const { return recovery_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& recovery_rates() const { return recovery_; }
    bool has_recovery() const { return has_recovery_; }

    // Sum of all activation and recovery rates; the expected number of
    // sampled jump points per unit time across all processes.
    double total_rate() const { return total_rate_; }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<Link> parent_flat_, child_flat_;
    std::vector<int> parent_off_, child_off_;
    std::vector<double> recovery_;
    bool has_recovery_ = false;
    double total_rate_ = 0.0;
};

// Verifies that parent/child adjacency are exact transposes of the edge
// list and that parent lists are sorted. O(m). Throws std::logic_error.
void check_adjacency_consistency(const PropagationNetwork& net);

struct SourceSet {
    std::vector<int> nodes;
};

// Validated source set: nonempty, indices in range, duplicates forbidden.
SourceSet make_source_set(const PropagationNetwork& net, std::vector<int> nodes);
SourceSet random_source_set(const PropagationNetwork& net, int count, std::uint64_t seed);

enum class NetworkFamily { ErdosRenyi, SmallWorld, ScaleFree };

std::string family_name(NetworkFamily f);
NetworkFamily parse_family(const std::string& name);

// Uniform(lo, hi); lo == hi means the constant lo, and (0, 0) disables
// recovery assignment.
struct RateDistribution {
    double lo = 0.1;
    double hi = 1.0;
    bool zero() const { return lo == 0.0 && hi == 0.0; }
};

struct GeneratorConfig {
    NetworkFamily family = NetworkFamily::ErdosRenyi;
    int n = 0;
    int kappa = 1;              // density parameter
    double shortcut_prob = 0.2; // small-world only
    RateDistribution activation{0.1, 1.0};
    RateDistribution recovery{0.0, 0.0};
    std::uint64_t seed = 0;
};

// Number of directed Erdos-Renyi edges: n*ln(kappa*n)/2 rounded half away
// from zero.
long erdos_renyi_edge_count(int n, int kappa);

// Directed G(n, m): m distinct ordered pairs sampled uniformly without
// replacement.
PropagationNetwork generate_erdos_renyi(const GeneratorConfig& cfg);

// Ring where every node links to its kappa nearest successors (each link
// added in both directions), plus per node one shortcut with probability
// shortcut_prob to a uniformly random non-neighbor (also both directions).
PropagationNetwork generate_small_world(const GeneratorConfig& cfg);

// Preferential attachment seeded with a kappa-clique; every new node
// attaches kappa links to distinct existing nodes with probability
// proportional to total degree. Links added in both directions.
PropagationNetwork generate_scale_free(const GeneratorConfig& cfg);

PropagationNetwork generate_network(const GeneratorConfig& cfg);

// Edge-list file:
//   line 1:         n m
//   next m lines:   i j alpha [beta_w]
//   next n lines:   i gamma [cap]        (optional block)
// Indices 0-based. A missing gamma block means all-zero recovery.
struct NetworkFile {
    PropagationNetwork network;
    std::vector<double> edge_shape; // empty unless a beta_w column was present
    std::vector<double> node_cap;   // empty unless a cap column was present
};

NetworkFile read_network_file(const std::string& path);
PropagationNetwork read_network(const std::string& path);
void write_network_file(const NetworkFile& file, const std::string& path);
void write_network(const PropagationNetwork& net, const std::string& path);

// Source-set file: one node index per line.
SourceSet read_source_set(const PropagationNetwork& net, const std::string& path);
void write_source_set(const SourceSet& sources, const std::string& path);

} // namespace propnet

#endif
