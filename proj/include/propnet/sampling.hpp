#ifndef PROPNET_SAMPLING_HPP
#define PROPNET_SAMPLING_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "propnet/network.hpp"
#include "propnet/rng.hpp"
#include "propnet/sde.hpp"

namespace propnet {

// Smallest k with P(Poisson(mean) <= k) >= u, by compensated summation of
// the Poisson mass. Requires 0 <= u < 1 (the quantile at 1 is unbounded)
// and mean <= 700 (exp(-mean) must not underflow).
int poisson_inverse_cdf(double mean, double u);

struct PoissonPair {
    int plus = 0;  // F^{-1}(1 - u)
    int minus = 0; // F^{-1}(u)
};

// Antithetic count pair; each side is marginally Poisson(mean) for uniform
// u, and the two sides are negatively coupled.
PoissonPair antithetic_poisson_pair(double mean, double u);

struct ScatterResult {
    std::vector<double> times;        // sorted, inside (0, T)
    std::vector<std::uint32_t> bins;  // K counts, conserving the total
};

// Scatters `count` i.i.d. Uniform(0,T) points and bins them on the grid
// t_k = [kh, (k+1)h).
ScatterResult scatter_and_bin(int count, double horizon, double step, Substream& rng);

// Event times of every driving process (n recoveries then m edges) for one
// trajectory.
struct JumpSchedule {
    double horizon = 0.0;
    std::vector<std::vector<double>> times; // per process id, sorted

    long total_count() const;
    std::vector<JumpIncrements> to_increments(const PropagationNetwork& net, double step) const;
    EventList to_events() const;
};

struct SamplePlan {
    double horizon = 1.0;
    double step = 0.01;
    long trajectories = 1000; // L
    std::uint64_t seed = 0;
    Stepper stepper = Stepper::Euler;
    bool antithetic = true;
    int threads = 1; // 0 = all hardware threads

    int grid_size() const; // K = horizon/step, validated integer
    void validate() const;
};

// Antithetic schedule pair for one trajectory pair, or an independent
// schedule, keyed only by (seed, index): the estimator consumes exactly
// these draws, so its work decomposition cannot change the result.
std::pair<JumpSchedule, JumpSchedule> sample_schedule_pair(const PropagationNetwork& net,
                                                           double horizon, std::uint64_t seed,
                                                           long pair_index);
JumpSchedule sample_schedule_independent(const PropagationNetwork& net, double horizon,
                                         std::uint64_t seed, long trajectory_index);

// Influence evaluation map g on the binary cube; every option is bounded,
// so the moment conditions of the error analysis hold automatically.
struct EvaluationFunctional {
    enum class Kind { TotalInfluence, NodeMarginal, Custom };
    Kind kind = Kind::TotalInfluence;
    int node = 0;
    std::function<double(std::span<const std::uint8_t>)> fn;

    double operator()(std::span<const std::uint8_t> x) const;
    static EvaluationFunctional total_influence();
    static EvaluationFunctional node_marginal(int node);
    static EvaluationFunctional custom(std::function<double(std::span<const std::uint8_t>)> f);
};

struct InfluenceEstimate {
    std::vector<double> times;     // grid t_0..t_K
    std::vector<double> influence; // mu-hat per grid point
    // Sample variance of the unit-averaged active count across independent
    // sampling units (antithetic pairs, or single trajectories without
    // variance reduction), and the resulting standard error of influence.
    std::vector<double> influence_variance;
    std::vector<double> influence_se;
    std::vector<std::vector<double>> marginals; // [node][grid]

    // Terminal statistics of user-supplied functionals, unit-averaged.
    std::vector<double> functional_mean, functional_variance, functional_se;

    long trajectories = 0;
    long units = 0;
    double step = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    Stepper stepper = Stepper::Euler;
    bool antithetic = true;

    double terminal_influence() const { return influence.back(); }
    double terminal_se() const { return influence_se.back(); }
};

// Algorithm: for each unit, draw one uniform per Poisson process, form the
// antithetic count pair, scatter the points on [0,T], and run both paired
// trajectories through the chosen stepper (or replay the exact event times
// when the stepper is jump-adapted), accumulating g over the whole grid.
// Fixed-order reduction makes the result bit-identical for any thread
// count at a fixed seed.
InfluenceEstimate run_estimator(const PropagationNetwork& net, const SourceSet& sources,
                                const SamplePlan& plan,
                                std::span<const EvaluationFunctional> functionals = {});

// Constants of the RMSE bound (sigma^2/L + C^2 h^(2 beta))^(1/2) for a
// fixed g and T.
struct ComplexityConstants {
    int weak_order = 1;      // beta, the scheme's nominal order
    double sigma_sq = 1.0;   // variance proxy
    double bias_const = 1.0; // C
    double fitted_beta = 0.0; // diagnostic slope from the pilot regression
    bool degenerate = false;  // pilot draws had zero variance

    // Reported split coefficients: h = T*delta*B^(-1/(2beta+1)) and
    // e <= D*B^(-beta/(2beta+1)) along the optimal-budget path.
    double step_scale_coeff() const;   // delta
    double error_budget_coeff() const; // D
};

struct SamplingPlanReport {
    double epsilon = 0.0;
    double h_raw = 0.0; // optimal split before grid rounding
    double L_raw = 0.0;
    double h = 0.0;     // T/K with K = ceil(T/h_raw)
    long grid = 0;      // K
    long trajectories = 0; // L_raw rounded up to even
    double budget = 0.0;   // L*T/h, total stepper steps
    bool attainable = true; // false when h_raw >= 1
    double delta = 0.0;     // reported split coefficients
    double big_d = 0.0;
    double expected_sample_points = 0.0; // (sum of rates)*T*L when rates given
};

// Budget-optimal (h, L) for a target RMSE: the bound sigma^2/L + C^2 h^(2b)
// is split as ( 2b/(2b+1), 1/(2b+1) ) of epsilon^2, which minimizes the
// cost L*T/h on the constraint surface.
SamplingPlanReport plan_h_L(double epsilon, const ComplexityConstants& constants, double horizon,
                            double total_rate = 0.0);

// Pilot estimation: sigma^2 from the sample variance of jump-adapted
// terminal draws; C and the diagnostic beta from a log-log fit of the
// per-step-size bias against a jump-adapted reference run.
ComplexityConstants estimate_constants(const PropagationNetwork& net, const SourceSet& sources,
                                       double horizon, long pilot_trajectories,
                                       std::span<const double> pilot_steps,
                                       Stepper stepper = Stepper::Euler, std::uint64_t seed = 1,
                                       int threads = 1);

} // namespace propnet

#endif
