#ifndef PROPNET_DETAIL_CURVE_ACCUM_HPP
#define PROPNET_DETAIL_CURVE_ACCUM_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace propnet::detail {

// One state flip of one trajectory, mapped onto the reporting grid: the
// node is in the new state at all grid indices >= idx.
struct Flip {
    std::int32_t idx = 0;
    std::int32_t node = 0;
    std::int8_t up = 0;
};

// Accumulates piecewise-constant trajectory curves as difference arrays so
// that per-trajectory cost is O(flips), not O(grid x nodes). A sampling
// unit is either a single trajectory or an antithetic pair; the v-arrays
// track the unit-averaged active count, whose across-unit variance is the
// reported sampling variance.
struct CurveBlock {
    long units = 0;
    long members = 0;
    std::vector<double> mu_delta;   // K+1: summed member active-count deltas
    std::vector<double> v_delta;    // K+1: summed unit-average deltas
    std::vector<double> v2_delta;   // K+1: same for squared unit averages
    std::vector<double> node_delta; // n*(K+1) when marginals are tracked
    std::vector<double> fun_sum;    // per functional: unit-averaged terminal g
    std::vector<double> fun_sumsq;

    void init(int nodes, int grid, bool marginals, int functionals) {
        units = members = 0;
        mu_delta.assign(static_cast<std::size_t>(grid) + 1, 0.0);
        v_delta.assign(static_cast<std::size_t>(grid) + 1, 0.0);
        v2_delta.assign(static_cast<std::size_t>(grid) + 1, 0.0);
        if (marginals)
            node_delta.assign(static_cast<std::size_t>(nodes) * (static_cast<std::size_t>(grid) + 1),
                              0.0);
        fun_sum.assign(static_cast<std::size_t>(functionals), 0.0);
        fun_sumsq.assign(static_cast<std::size_t>(functionals), 0.0);
    }

    // Adds one unit. Member flip lists must be sorted by grid index; every
    // member starts from the same initial state (the source indicator).
    void add_unit(int grid, int init_count, std::span<const int> init_active,
                  std::span<const Flip> member0, std::span<const Flip> member1, bool paired,
                  std::span<const double> f0, std::span<const double> f1) {
        const std::size_t K1 = static_cast<std::size_t>(grid) + 1;
        const int nmembers = paired ? 2 : 1;
        const double w = 1.0 / nmembers;

        auto add_member = [&](std::span<const Flip> flips) {
            mu_delta[0] += init_count;
            for (const Flip& f : flips)
                mu_delta[static_cast<std::size_t>(f.idx)] += f.up ? 1.0 : -1.0;
            if (!node_delta.empty()) {
                for (int v : init_active) node_delta[static_cast<std::size_t>(v) * K1] += 1.0;
                for (const Flip& f : flips)
                    node_delta[static_cast<std::size_t>(f.node) * K1 +
                               static_cast<std::size_t>(f.idx)] += f.up ? 1.0 : -1.0;
            }
        };
        add_member(member0);
        if (paired) add_member(member1);

        // Unit-average curve walk; same-index contributions telescope, so
        // only the merge order by index matters.
        double v = init_count;
        v_delta[0] += v;
        v2_delta[0] += v * v;
        std::size_t a = 0, b = 0;
        while (a < member0.size() || b < member1.size()) {
            const Flip* f = nullptr;
            if (b >= member1.size() || (a < member0.size() && member0[a].idx <= member1[b].idx))
                f = &member0[a++];
            else
                f = &member1[b++];
            const double vn = v + (f->up ? w : -w);
            v_delta[static_cast<std::size_t>(f->idx)] += vn - v;
            v2_delta[static_cast<std::size_t>(f->idx)] += vn * vn - v * v;
            v = vn;
        }

        for (std::size_t k = 0; k < fun_sum.size(); ++k) {
            const double fu = paired ? w * (f0[k] + f1[k]) : f0[k];
            fun_sum[k] += fu;
            fun_sumsq[k] += fu * fu;
        }
        units += 1;
        members += nmembers;
    }

    void merge_from(const CurveBlock& other) {
        units += other.units;
        members += other.members;
        for (std::size_t k = 0; k < mu_delta.size(); ++k) {
            mu_delta[k] += other.mu_delta[k];
            v_delta[k] += other.v_delta[k];
            v2_delta[k] += other.v2_delta[k];
        }
        for (std::size_t k = 0; k < node_delta.size(); ++k) node_delta[k] += other.node_delta[k];
        for (std::size_t k = 0; k < fun_sum.size(); ++k) {
            fun_sum[k] += other.fun_sum[k];
            fun_sumsq[k] += other.fun_sumsq[k];
        }
    }
};

struct CurveResult {
    long units = 0;
    long members = 0;
    std::vector<double> mean;               // K+1
    std::vector<double> variance;           // across units, K+1
    std::vector<double> se;                 // sqrt(variance/units)
    std::vector<std::vector<double>> marginals; // [node][K+1]
    std::vector<double> fun_mean, fun_variance, fun_se;
};

inline CurveResult finalize_curves(const CurveBlock& g, int nodes, int grid) {
    const std::size_t K1 = static_cast<std::size_t>(grid) + 1;
    CurveResult r;
    r.units = g.units;
    r.members = g.members;
    r.mean.resize(K1);
    r.variance.resize(K1);
    r.se.resize(K1);
    double smu = 0.0, sv = 0.0, sv2 = 0.0;
    for (std::size_t k = 0; k < K1; ++k) {
        smu += g.mu_delta[k];
        sv += g.v_delta[k];
        sv2 += g.v2_delta[k];
        r.mean[k] = g.members > 0 ? smu / static_cast<double>(g.members) : 0.0;
        double var = 0.0;
        if (g.units > 1) {
            var = (sv2 - sv * sv / static_cast<double>(g.units)) /
                  static_cast<double>(g.units - 1);
            if (var < 0.0) var = 0.0;
        }
        r.variance[k] = var;
        r.se[k] = g.units > 0 ? std::sqrt(var / static_cast<double>(g.units)) : 0.0;
    }
    if (!g.node_delta.empty()) {
        r.marginals.assign(static_cast<std::size_t>(nodes), std::vector<double>(K1, 0.0));
        for (std::size_t i = 0; i < static_cast<std::size_t>(nodes); ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < K1; ++k) {
                s += g.node_delta[i * K1 + k];
                r.marginals[i][k] = g.members > 0 ? s / static_cast<double>(g.members) : 0.0;
            }
        }
    }
    r.fun_mean.resize(g.fun_sum.size());
    r.fun_variance.resize(g.fun_sum.size());
    r.fun_se.resize(g.fun_sum.size());
    for (std::size_t k = 0; k < g.fun_sum.size(); ++k) {
        r.fun_mean[k] = g.units > 0 ? g.fun_sum[k] / static_cast<double>(g.units) : 0.0;
        double var = 0.0;
        if (g.units > 1) {
            var = (g.fun_sumsq[k] - g.fun_sum[k] * g.fun_sum[k] / static_cast<double>(g.units)) /
                  static_cast<double>(g.units - 1);
            if (var < 0.0) var = 0.0;
        }
        r.fun_variance[k] = var;
        r.fun_se[k] = g.units > 0 ? std::sqrt(var / static_cast<double>(g.units)) : 0.0;
    }
    return r;
}

// First reporting-grid index at or after time t (right-continuous curves).
inline std::int32_t grid_index_after(double t, double inv_step, int grid) {
    auto idx = static_cast<std::int32_t>(std::ceil(t * inv_step));
    if (idx < 0) idx = 0;
    if (idx > grid) idx = grid;
    return idx;
}

} // namespace propnet::detail

#endif
