#pragma once

#include <cstdint>
#include <vector>

#include "ppc/errors.hpp"
#include "ppc/rng.hpp"

namespace ppc {

// Shifted-exponential worker delay: Pr(T <= t) = 1 - exp(-mu (t - gamma))
// for t >= gamma.
struct DelayModel {
    double gamma = 0.0; // shift
    double mu = 1.0;    // straggling rate

    void validate() const;
};

// How the expected k-th order statistic is evaluated. HarmonicExact uses
// exact harmonic numbers and is finite for k = N; LogApprox substitutes
// H_N ~ log2(N) (the base the reproduced figures were computed with) and
// diverges at k = N.
enum class Convention { HarmonicExact, LogApprox };

double harmonic_number(unsigned k);

// gamma + (H_N - H_{N-k})/mu, or gamma + log2(N/(N-k))/mu under LogApprox.
// Throws SpecError("divergent") for k = N under LogApprox.
double expected_order_stat(unsigned N, unsigned k, const DelayModel& model,
                           Convention conv = Convention::HarmonicExact);

// Coded computation without privacy: the K-th fastest worker finishes 1/K of
// the job.
double t_conv(unsigned N, unsigned K, const DelayModel& model,
              Convention conv = Convention::HarmonicExact);

// RPIR baseline: (1/K + ... + 1/K^M) times the K-th order statistic.
double t_rpir(unsigned N, unsigned K, unsigned M, const DelayModel& model,
              Convention conv = Convention::HarmonicExact);

// A partition of the speed-ranked workers [1..N] (rank 1 fastest) into n
// equal groups.
struct GroupingPlan {
    std::vector<std::vector<unsigned>> groups;
};

// One-shot completion: the slowest group waits for its m-th fastest member,
// each sub-computation being 1/(m(n-1)) of the whole job. Throws
// SpecError("infeasible") if m exceeds the group size (one result per
// worker). Returns +inf when that member's expected time diverges under
// LogApprox.
double t_one_for_grouping(const GroupingPlan& plan, unsigned m,
                          const DelayModel& model,
                          Convention conv = Convention::HarmonicExact);

// Asynchronous completion, fluid limit: every worker of the slowest group
// keeps contributing, so the group's 1/(n-1) of the job finishes at
// (1/(n-1)) / sum_i 1/E[T_{s_i}]. Independent of m. A diverging member
// contributes zero rate.
double t_async_for_grouping(const GroupingPlan& plan, const DelayModel& model,
                            Convention conv = Convention::HarmonicExact);

// Number of unordered partitions of N ranks into n equal groups,
// N!/((N/n)!)^n/n!. Throws SpecError on n not dividing N; saturates at
// UINT64_MAX on overflow.
std::uint64_t grouping_count(unsigned N, unsigned n);

inline constexpr std::size_t kDefaultGroupingCap = 1000000;

// All partitions (each exactly once) when the count fits under `cap`,
// otherwise `cap` plans sampled i.i.d. uniform with the seed.
std::vector<GroupingPlan> enumerate_groupings(
    unsigned N, unsigned n, std::size_t cap = kDefaultGroupingCap,
    std::uint64_t seed = 0);

enum class Metric { OneShot, Async };

// Mean of the per-grouping metric over enumerate_groupings(N, n, cap, seed):
// t_{a,one} or t_{a,async}.
double average_over_groupings(Metric metric, unsigned N, unsigned n,
                              unsigned m, const DelayModel& model,
                              Convention conv,
                              std::size_t cap = kDefaultGroupingCap,
                              std::uint64_t seed = 0);

// Monte-Carlo estimate of the same mean from `samples` i.i.d. uniform
// groupings, regardless of the exhaustive count.
double sampled_average_over_groupings(Metric metric, unsigned N, unsigned n,
                                      unsigned m, const DelayModel& model,
                                      Convention conv, std::size_t samples,
                                      std::uint64_t seed);

enum class Scheme { Rpir, OneShot, Async };

// Master-to-worker load in multiples of |A|: N, N/m, N*L/m.
double comm_load(Scheme scheme, unsigned N, unsigned m, unsigned L);

// One comparison point of the timing study: closed-form times for all three
// schemes at K = mn, the per-grouping samples behind the averages, and the
// communication loads.
struct TimingReport {
    unsigned N = 0, n = 0, m = 0, M = 0, L = 0, K = 0;
    Convention convention = Convention::HarmonicExact;
    double t_conv = 0.0;
    double t_rpir = 0.0;
    double t_a_one = 0.0;
    double t_a_async = 0.0;
    std::vector<double> one_shot_samples; // per grouping
    std::vector<double> async_samples;    // per grouping
    double load_rpir = 0.0;
    double load_one_shot = 0.0;
    double load_async = 0.0;
};

TimingReport make_timing_report(unsigned N, unsigned n, unsigned m,
                                unsigned M, unsigned L,
                                const DelayModel& model, Convention conv,
                                std::size_t cap = kDefaultGroupingCap,
                                std::uint64_t seed = 0);

// One sampled session: draws worker delays, groups uniformly at random, and
// reports three completion times. one_shot: m-th smallest single-block time
// of the slowest group. async_discrete: m-th smallest of the blockwise
// finish times {j T_i/(m(n-1)) : j in [L]} (contains the one-shot set, so it
// never exceeds one_shot). async_fluid: the closed form's own expression on
// the sampled delays, (1/(n-1))/sum_i 1/T_i.
struct TrialTimes {
    double one_shot = 0.0;
    double async_discrete = 0.0;
    double async_fluid = 0.0;
};

TrialTimes event_sim_trial(unsigned N, unsigned n, unsigned m, unsigned L,
                           const DelayModel& model, Rng& rng);

struct EventSimResult {
    double one_shot_mean = 0.0;
    double async_discrete_mean = 0.0;
    double async_fluid_mean = 0.0;
    std::size_t trials = 0;
};

// Empirical means over `trials` independent sessions; trial t uses the
// derived stream (seed, t), so the result is identical however the trials
// are scheduled.
EventSimResult event_sim(unsigned N, unsigned n, unsigned m, unsigned L,
                         const DelayModel& model, std::size_t trials,
                         std::uint64_t seed);

} // namespace ppc
