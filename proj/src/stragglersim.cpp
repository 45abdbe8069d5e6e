#include "ppc/stragglersim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ppc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Like expected_order_stat but reports divergence as +inf instead of
// throwing; the grouping metrics handle infinite members themselves.
double order_stat_or_inf(unsigned N, unsigned k, const DelayModel& model,
                         Convention conv) {
    if (k < 1 || k > N)
        throw SpecError("order statistic index must be in [1, N]");
    if (conv == Convention::HarmonicExact)
        return model.gamma +
               (harmonic_number(N) - harmonic_number(N - k)) / model.mu;
    if (k == N)
        return kInf;
    return model.gamma + std::log2(static_cast<double>(N) / (N - k)) /
                             model.mu;
}

void validate_grouping(const GroupingPlan& plan) {
    if (plan.groups.empty())
        throw SpecError("grouping has no groups");
    const std::size_t size = plan.groups.front().size();
    std::vector<char> seen;
    for (const auto& g : plan.groups) {
        if (g.size() != size || size == 0)
            throw SpecError("grouping is not equal-sized");
        for (unsigned rank : g) {
            if (rank == 0)
                throw SpecError("worker ranks are 1-based");
            if (rank > seen.size())
                seen.resize(rank, 0);
            if (seen[rank - 1]++)
                throw SpecError("worker rank repeated in grouping");
        }
    }
    const std::size_t N = plan.groups.size() * size;
    if (seen.size() != N ||
        !std::all_of(seen.begin(), seen.end(), [](char c) { return c == 1; }))
        throw SpecError("grouping is not a partition of [1, N]");
}

GroupingPlan random_grouping(unsigned N, unsigned n, Rng& rng) {
    std::vector<unsigned> ranks(N);
    std::iota(ranks.begin(), ranks.end(), 1u);
    rng.shuffle(ranks);
    GroupingPlan plan;
    const unsigned size = N / n;
    plan.groups.resize(n);
    for (unsigned t = 0; t < n; ++t)
        plan.groups[t].assign(ranks.begin() + t * size,
                              ranks.begin() + (t + 1) * size);
    return plan;
}

double metric_for_grouping(Metric metric, const GroupingPlan& plan,
                           unsigned m, const DelayModel& model,
                           Convention conv) {
    return metric == Metric::OneShot
               ? t_one_for_grouping(plan, m, model, conv)
               : t_async_for_grouping(plan, model, conv);
}

} // namespace

void DelayModel::validate() const {
    if (gamma < 0.0)
        throw SpecError("delay model: gamma >= 0 required");
    if (!(mu > 0.0))
        throw SpecError("delay model: mu > 0 required");
}

double harmonic_number(unsigned k) {
    double h = 0.0;
    for (unsigned i = 1; i <= k; ++i)
        h += 1.0 / i;
    return h;
}

double expected_order_stat(unsigned N, unsigned k, const DelayModel& model,
                           Convention conv) {
    model.validate();
    const double v = order_stat_or_inf(N, k, model, conv);
    if (std::isinf(v))
        throw SpecError("divergent: k = N has no finite value under the "
                        "log-approximate convention");
    return v;
}

double t_conv(unsigned N, unsigned K, const DelayModel& model,
              Convention conv) {
    return expected_order_stat(N, K, model, conv) / K;
}

double t_rpir(unsigned N, unsigned K, unsigned M, const DelayModel& model,
              Convention conv) {
    if (M == 0)
        throw SpecError("library size M >= 1 required");
    // (1/K + ... + 1/K^M) E[T_(K)] = t_conv * (1 + 1/K + ... + 1/K^(M-1));
    // the factor is exactly 1 for M = 1, so t_rpir(M=1) == t_conv bitwise.
    double factor = 0.0;
    double term = 1.0;
    for (unsigned j = 0; j < M; ++j) {
        factor += term;
        term /= K;
    }
    return factor * t_conv(N, K, model, conv);
}

double t_one_for_grouping(const GroupingPlan& plan, unsigned m,
                          const DelayModel& model, Convention conv) {
    model.validate();
    validate_grouping(plan);
    const unsigned n = static_cast<unsigned>(plan.groups.size());
    const unsigned N = n * static_cast<unsigned>(plan.groups.front().size());
    if (m == 0)
        throw SpecError("m >= 1 required");
    if (m > plan.groups.front().size())
        throw SpecError("infeasible: m = " + std::to_string(m) +
                        " exceeds group size " +
                        std::to_string(plan.groups.front().size()));
    double worst = 0.0;
    for (const auto& g : plan.groups) {
        std::vector<unsigned> sorted(g);
        std::sort(sorted.begin(), sorted.end());
        const double stat =
            order_stat_or_inf(N, sorted[m - 1], model, conv);
        worst = std::max(worst, stat / (m * (n - 1)));
    }
    return worst;
}

double t_async_for_grouping(const GroupingPlan& plan, const DelayModel& model,
                            Convention conv) {
    model.validate();
    validate_grouping(plan);
    const unsigned n = static_cast<unsigned>(plan.groups.size());
    const unsigned N = n * static_cast<unsigned>(plan.groups.front().size());
    double worst = 0.0;
    for (const auto& g : plan.groups) {
        double rate = 0.0;
        double last_finite = kInf;
        unsigned finite_members = 0;
        for (unsigned rank : g) {
            const double stat = order_stat_or_inf(N, rank, model, conv);
            if (std::isinf(stat))
                continue;
            rate += 1.0 / stat;
            last_finite = stat;
            ++finite_members;
        }
        // A lone contributor does 1/(n-1) of the job by itself; computing
        // that without the reciprocal round trip keeps the one-shot
        // dominance inequality exact in the boundary case.
        const double group_time =
            finite_members == 1 ? last_finite / (n - 1)
                                : (1.0 / (n - 1)) / rate;
        worst = std::max(worst, group_time);
    }
    return worst;
}

std::uint64_t grouping_count(unsigned N, unsigned n) {
    if (n == 0 || N == 0 || N % n != 0)
        throw SpecError("grouping count: n must divide N");
    const unsigned size = N / n;
    // Anchor the smallest unplaced rank and choose its group-mates:
    // count = prod_i C(N - i*size - 1, size - 1).
    unsigned __int128 total = 1;
    for (unsigned i = 0; i < n; ++i) {
        const unsigned remaining = N - i * size - 1;
        unsigned __int128 choose = 1;
        for (unsigned j = 1; j < size; ++j) {
            choose = choose * (remaining - j + 1) / j;
        }
        total *= choose;
        if (total > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(total);
}

namespace {

void enumerate_rec(const std::vector<unsigned>& remaining,
                   std::vector<std::vector<unsigned>>& current,
                   unsigned group_size, std::vector<GroupingPlan>& out) {
    if (remaining.empty()) {
        out.push_back(GroupingPlan{current});
        return;
    }
    // The smallest remaining rank anchors the next group, which makes every
    // unordered partition appear exactly once.
    const unsigned anchor = remaining.front();
    const std::vector<unsigned> rest(remaining.begin() + 1, remaining.end());
    std::vector<char> mask(rest.size(), 0);
    std::fill(mask.begin(), mask.begin() + (group_size - 1), 1);
    do {
        std::vector<unsigned> group{anchor};
        std::vector<unsigned> next;
        next.reserve(rest.size() - (group_size - 1));
        for (std::size_t i = 0; i < rest.size(); ++i)
            (mask[i] ? group : next).push_back(rest[i]);
        current.push_back(std::move(group));
        enumerate_rec(next, current, group_size, out);
        current.pop_back();
    } while (std::prev_permutation(mask.begin(), mask.end()));
}

} // namespace

std::vector<GroupingPlan> enumerate_groupings(unsigned N, unsigned n,
                                              std::size_t cap,
                                              std::uint64_t seed) {
    const std::uint64_t count = grouping_count(N, n);
    std::vector<GroupingPlan> out;
    if (count <= cap) {
        out.reserve(static_cast<std::size_t>(count));
        std::vector<unsigned> ranks(N);
        std::iota(ranks.begin(), ranks.end(), 1u);
        std::vector<std::vector<unsigned>> current;
        enumerate_rec(ranks, current, N / n, out);
        return out;
    }
    out.reserve(cap);
    Rng rng = Rng::derive(seed, 0x67726f75ull); // stream tag
    for (std::size_t i = 0; i < cap; ++i)
        out.push_back(random_grouping(N, n, rng));
    return out;
}

double average_over_groupings(Metric metric, unsigned N, unsigned n,
                              unsigned m, const DelayModel& model,
                              Convention conv, std::size_t cap,
                              std::uint64_t seed) {
    const auto plans = enumerate_groupings(N, n, cap, seed);
    double acc = 0.0;
    for (const auto& plan : plans)
        acc += metric_for_grouping(metric, plan, m, model, conv);
    return acc / static_cast<double>(plans.size());
}

double sampled_average_over_groupings(Metric metric, unsigned N, unsigned n,
                                      unsigned m, const DelayModel& model,
                                      Convention conv, std::size_t samples,
                                      std::uint64_t seed) {
    if (samples == 0)
        throw SpecError("samples >= 1 required");
    if (N == 0 || n == 0 || N % n != 0)
        throw SpecError("grouping count: n must divide N");
    Rng rng = Rng::derive(seed, 0x67726f75ull);
    double acc = 0.0;
    for (std::size_t i = 0; i < samples; ++i)
        acc += metric_for_grouping(metric, random_grouping(N, n, rng), m,
                                   model, conv);
    return acc / static_cast<double>(samples);
}

double comm_load(Scheme scheme, unsigned N, unsigned m, unsigned L) {
    if (m == 0 || L == 0)
        throw SpecError("m >= 1 and L >= 1 required");
    if (L > m)
        throw SpecError("invalid spec: L <= m violated (L=" +
                        std::to_string(L) + ", m=" + std::to_string(m) + ")");
    switch (scheme) {
    case Scheme::Rpir:
        return static_cast<double>(N);
    case Scheme::OneShot:
        return static_cast<double>(N) / m;
    case Scheme::Async:
        return static_cast<double>(N) * L / m;
    }
    throw SpecError("unknown scheme");
}

TimingReport make_timing_report(unsigned N, unsigned n, unsigned m,
                                unsigned M, unsigned L,
                                const DelayModel& model, Convention conv,
                                std::size_t cap, std::uint64_t seed) {
    TimingReport report;
    report.N = N;
    report.n = n;
    report.m = m;
    report.M = M;
    report.L = L;
    report.K = m * n;
    report.convention = conv;
    report.t_conv = t_conv(N, report.K, model, conv);
    report.t_rpir = t_rpir(N, report.K, M, model, conv);
    const auto plans = enumerate_groupings(N, n, cap, seed);
    report.one_shot_samples.reserve(plans.size());
    report.async_samples.reserve(plans.size());
    double one_acc = 0.0, async_acc = 0.0;
    for (const auto& plan : plans) {
        const double one = t_one_for_grouping(plan, m, model, conv);
        const double async_t = t_async_for_grouping(plan, model, conv);
        report.one_shot_samples.push_back(one);
        report.async_samples.push_back(async_t);
        one_acc += one;
        async_acc += async_t;
    }
    report.t_a_one = one_acc / static_cast<double>(plans.size());
    report.t_a_async = async_acc / static_cast<double>(plans.size());
    report.load_rpir = comm_load(Scheme::Rpir, N, m, L);
    report.load_one_shot = comm_load(Scheme::OneShot, N, m, L);
    report.load_async = comm_load(Scheme::Async, N, m, L);
    return report;
}

TrialTimes event_sim_trial(unsigned N, unsigned n, unsigned m, unsigned L,
                           const DelayModel& model, Rng& rng) {
    model.validate();
    if (n < 2 || N == 0 || N % n != 0)
        throw SpecError("invalid spec: n >= 2 and n | N required");
    const unsigned group_size = N / n;
    if (m > group_size)
        throw SpecError("infeasible: m = " + std::to_string(m) +
                        " exceeds group size " + std::to_string(group_size));
    if (L == 0 || L > m)
        throw SpecError("invalid spec: 1 <= L <= m required");

    std::vector<double> delay(N);
    for (auto& t : delay)
        t = model.gamma + rng.exponential(model.mu);
    std::vector<unsigned> order(N);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);

    const double block = 1.0 / (m * static_cast<double>(n - 1));
    TrialTimes times;
    for (unsigned t = 0; t < n; ++t) {
        std::vector<double> single;
        single.reserve(group_size);
        double rate = 0.0;
        for (unsigned i = 0; i < group_size; ++i) {
            const double d = delay[order[t * group_size + i]];
            single.push_back(d * block);
            rate += 1.0 / d;
        }
        std::sort(single.begin(), single.end());
        times.one_shot = std::max(times.one_shot, single[m - 1]);

        std::vector<double> multiset;
        multiset.reserve(group_size * L);
        for (double s : single)
            for (unsigned j = 1; j <= L; ++j)
                multiset.push_back(s * j);
        std::nth_element(multiset.begin(), multiset.begin() + (m - 1),
                         multiset.end());
        times.async_discrete =
            std::max(times.async_discrete, multiset[m - 1]);

        // A singleton group's fluid time is its one worker's block time;
        // reusing that value keeps the dominance inequality exact.
        const double fluid = group_size == 1 ? single[0]
                                             : (1.0 / (n - 1)) / rate;
        times.async_fluid = std::max(times.async_fluid, fluid);
    }
    return times;
}

EventSimResult event_sim(unsigned N, unsigned n, unsigned m, unsigned L,
                         const DelayModel& model, std::size_t trials,
                         std::uint64_t seed) {
    if (trials == 0)
        throw SpecError("trials >= 1 required");
    EventSimResult result;
    result.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::derive(seed, t);
        const TrialTimes times = event_sim_trial(N, n, m, L, model, rng);
        result.one_shot_mean += times.one_shot;
        result.async_discrete_mean += times.async_discrete;
        result.async_fluid_mean += times.async_fluid;
    }
    result.one_shot_mean /= static_cast<double>(trials);
    result.async_discrete_mean /= static_cast<double>(trials);
    result.async_fluid_mean /= static_cast<double>(trials);
    return result;
}

} // namespace ppc
