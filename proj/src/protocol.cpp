#include "ppc/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ppc {

namespace {

void append_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

// Critical value of chi-square with 15 degrees of freedom at the 0.01
// significance level (16 bins).
constexpr double kChiSquareCrit15 = 30.5779;
constexpr std::size_t kBins = 16;

std::size_t residue_bin(FieldElement v, std::uint64_t p) {
    return static_cast<std::size_t>(
        static_cast<unsigned __int128>(v) * kBins / p);
}

} // namespace

std::vector<std::uint8_t> Query::serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 1 + 8 * (3 + per_matrix_point.size()) + 1);
    for (char c : {'P', 'P', 'C', 'Q'})
        out.push_back(static_cast<std::uint8_t>(c));
    out.push_back(version);
    append_u64le(out, n);
    append_u64le(out, sub_count);
    append_u64le(out, per_matrix_point.size());
    for (FieldElement pt : per_matrix_point)
        append_u64le(out, pt);
    out.push_back(compute_opcode);
    return out;
}

std::size_t SessionPlan::group_of(int worker_rank) const {
    for (std::size_t t = 0; t < grouping.size(); ++t) {
        for (int rank : grouping[t]) {
            if (rank == worker_rank)
                return t + 1;
        }
    }
    throw SpecError("worker rank out of range: " +
                    std::to_string(worker_rank));
}

SessionPlan plan_session(const Field& field, const PartitionSpec& spec,
                         std::size_t desired, std::uint64_t seed) {
    spec.validate();
    if (desired == 0 || desired > spec.M)
        throw SpecError("invalid spec: desired index must be in [1, M]");

    // Sampling order is fixed and independent of `desired`, so the grouping,
    // the evaluation points and the x-points are identical across D for the
    // same seed.
    Rng rng = Rng::derive(seed, 0);

    SessionPlan plan{field, spec, desired, {}, {}, {}, seed};

    std::vector<int> ranks(spec.N);
    std::iota(ranks.begin(), ranks.end(), 1);
    rng.shuffle(ranks);
    const std::size_t group_size = spec.group_size();
    plan.grouping.resize(spec.n);
    for (std::size_t t = 0; t < spec.n; ++t)
        plan.grouping[t].assign(ranks.begin() + t * group_size,
                                ranks.begin() + (t + 1) * group_size);

    auto y_points =
        sample_distinct_points(field, spec.n + spec.M - 1, {}, rng);
    plan.assignment.group_points.assign(y_points.begin(),
                                        y_points.begin() + spec.n);
    plan.assignment.shared_points.assign(y_points.begin() + spec.n,
                                         y_points.end());

    auto xs = sample_distinct_points(field, spec.N * spec.L, {}, rng);
    plan.x_points.resize(spec.N);
    for (std::size_t i = 0; i < spec.N; ++i)
        plan.x_points[i].assign(xs.begin() + i * spec.L,
                                xs.begin() + (i + 1) * spec.L);
    return plan;
}

Query build_query(const SessionPlan& plan, int worker_rank) {
    Query q;
    q.n = plan.spec.n;
    q.sub_count = plan.spec.L;
    q.per_matrix_point = plan.assignment.per_matrix_points(
        plan.group_of(worker_rank), plan.desired, plan.spec.M);
    return q;
}

EncodedShareA make_share(const SessionPlan& plan, const BlockMatrix& a,
                         int worker_rank) {
    if (worker_rank < 1 || static_cast<std::size_t>(worker_rank) > plan.spec.N)
        throw SpecError("worker rank out of range: " +
                        std::to_string(worker_rank));
    const auto& xs = plan.x_points[worker_rank - 1];
    return EncodedShareA{worker_rank, xs, encode_a(a, plan.spec.m, xs)};
}

std::vector<WorkerResult> run_worker(const WorkerView& view,
                                     const std::vector<BlockMatrix>& library) {
    if (view.encoded_a.evaluations.size() != view.query.sub_count)
        throw SpecError("share and query disagree on sub-computation count");
    const BlockMatrix encoded_b = encode_library(
        library, view.query.n, view.query.per_matrix_point);
    std::vector<WorkerResult> results;
    results.reserve(view.query.sub_count);
    for (std::size_t p = 0; p < view.query.sub_count; ++p) {
        results.push_back(WorkerResult{
            view.encoded_a.worker_rank, p,
            worker_subcompute(view.encoded_a.evaluations[p], encoded_b)});
    }
    return results;
}

std::string Transcript::to_string() const {
    std::ostringstream os;
    os << "K=" << recovery_threshold << " produced=" << produced
       << " read=" << read_count << " consumed=";
    for (std::size_t i = 0; i < consumed.size(); ++i) {
        if (i != 0)
            os << ',';
        os << "W" << consumed[i].worker_rank << "#" << consumed[i].seq_index;
    }
    return os.str();
}

SessionOutcome orchestrate(const SessionPlan& plan, const BlockMatrix& a,
                           const std::vector<BlockMatrix>& library,
                           const std::vector<ArrivalEvent>& arrival_order) {
    const PartitionSpec& spec = plan.spec;
    spec.validate();
    if (library.size() != spec.M)
        throw SpecError("library size does not match spec M");

    // arrival_order must be a permutation of all (worker, index) pairs.
    if (arrival_order.size() != spec.N * spec.L)
        throw SpecError("arrival order must cover all produced results");
    std::vector<char> seen(spec.N * spec.L, 0);
    for (const ArrivalEvent& ev : arrival_order) {
        if (ev.worker_rank < 1 ||
            static_cast<std::size_t>(ev.worker_rank) > spec.N ||
            ev.seq_index >= spec.L)
            throw SpecError("arrival event out of range");
        char& flag = seen[(ev.worker_rank - 1) * spec.L + ev.seq_index];
        if (flag)
            throw SpecError("duplicate arrival event");
        flag = 1;
    }

    std::vector<std::vector<WorkerResult>> produced(spec.N);
    for (std::size_t rank = 1; rank <= spec.N; ++rank) {
        const WorkerView view{build_query(plan, static_cast<int>(rank)),
                              make_share(plan, a, static_cast<int>(rank))};
        produced[rank - 1] = run_worker(view, library);
    }

    std::vector<SubResult> stream;
    stream.reserve(arrival_order.size());
    for (const ArrivalEvent& ev : arrival_order) {
        stream.push_back(SubResult{
            plan.group_of(ev.worker_rank),
            plan.x_points[ev.worker_rank - 1][ev.seq_index],
            produced[ev.worker_rank - 1][ev.seq_index].value});
    }

    RecoveredProduct rec =
        recover_product(stream, spec, plan.assignment.group_points);

    Transcript transcript;
    transcript.recovery_threshold = spec.recovery_threshold();
    transcript.produced = spec.N * spec.L;
    transcript.read_count = rec.read_count;
    transcript.consumed.reserve(rec.consumed.size());
    for (std::size_t pos : rec.consumed)
        transcript.consumed.push_back(arrival_order[pos]);
    return SessionOutcome{std::move(rec.product), std::move(transcript)};
}

std::vector<std::uint8_t> canonical_query_bytes(
    const SessionPlan& plan, int worker_rank,
    const std::vector<FieldElement>& points_override) {
    Query q = build_query(plan, worker_rank);
    q.per_matrix_point = points_override;
    return q.serialize();
}

std::vector<std::uint8_t> leaky_query_bytes(
    const SessionPlan& plan, int worker_rank,
    const std::vector<FieldElement>& points_override) {
    // Deliberately broken: tags the desired index onto the wire format.
    auto bytes = canonical_query_bytes(plan, worker_rank, points_override);
    bytes.push_back(static_cast<std::uint8_t>(plan.desired));
    return bytes;
}

std::string AuditReport::to_string() const {
    std::ostringstream os;
    os << "query-invariance audit: " << (passed ? "PASS" : "FAIL") << '\n';
    os << "  coupling checks: " << coupling_checks << '\n';
    os << "  marginal cells: " << marginal_cells
       << " (chi-square max " << max_chi_square << ", threshold "
       << chi_square_threshold << ")\n";
    for (const auto& f : failures)
        os << "  failure: " << f << '\n';
    return os.str();
}

AuditReport audit_query_invariance(const Field& field,
                                   const PartitionSpec& spec,
                                   std::size_t coupling_seeds,
                                   std::size_t marginal_seeds,
                                   std::uint64_t seed,
                                   const QuerySerializer& serializer) {
    spec.validate();
    if (spec.M < 2)
        throw SpecError("audit requires M >= 2");

    AuditReport report;
    report.chi_square_threshold = kChiSquareCrit15;

    // (a) Coupling: queries are a function of the point list alone.
    for (std::size_t s = 0; s < coupling_seeds; ++s) {
        const std::uint64_t trial_seed = seed + s;
        std::vector<SessionPlan> plans;
        plans.reserve(spec.M);
        for (std::size_t d = 1; d <= spec.M; ++d)
            plans.push_back(plan_session(field, spec, d, trial_seed));
        for (std::size_t d1 = 1; d1 <= spec.M && report.failures.empty();
             ++d1) {
            for (std::size_t d2 = 1; d2 <= spec.M; ++d2) {
                for (std::size_t rank = 1; rank <= spec.N; ++rank) {
                    const auto points =
                        build_query(plans[d1 - 1], static_cast<int>(rank))
                            .per_matrix_point;
                    const auto b1 = serializer(plans[d1 - 1],
                                               static_cast<int>(rank), points);
                    const auto b2 = serializer(plans[d2 - 1],
                                               static_cast<int>(rank), points);
                    ++report.coupling_checks;
                    if (b1 == b2)
                        continue;
                    std::size_t off = 0;
                    const std::size_t lim = std::min(b1.size(), b2.size());
                    while (off < lim && b1[off] == b2[off])
                        ++off;
                    report.failures.push_back(
                        "coupling: seed " + std::to_string(trial_seed) +
                        " worker " + std::to_string(rank) + " D=" +
                        std::to_string(d1) + " vs D'=" + std::to_string(d2) +
                        " differ at byte offset " + std::to_string(off));
                    break;
                }
                if (!report.failures.empty())
                    break;
            }
        }
        if (!report.failures.empty())
            break;
    }

    // (b) Marginals: each point slot is uniform across residue bins,
    // identically tested for every slot and every D.
    const std::uint64_t p = field.prime();
    for (std::size_t d = 1; d <= spec.M; ++d) {
        std::vector<std::vector<std::size_t>> counts(
            spec.M, std::vector<std::size_t>(kBins, 0));
        for (std::size_t s = 0; s < marginal_seeds; ++s) {
            const SessionPlan plan =
                plan_session(field, spec, d, Rng::derive(seed, s + 1).next());
            const Query q = build_query(plan, 1);
            for (std::size_t k = 0; k < spec.M; ++k)
                ++counts[k][residue_bin(q.per_matrix_point[k], p)];
        }
        const double expected =
            static_cast<double>(marginal_seeds) / kBins;
        for (std::size_t k = 0; k < spec.M; ++k) {
            double chi = 0.0;
            std::size_t worst_bin = 0;
            double worst_dev = -1.0;
            for (std::size_t b = 0; b < kBins; ++b) {
                const double dev =
                    static_cast<double>(counts[k][b]) - expected;
                chi += dev * dev / expected;
                if (dev * dev > worst_dev) {
                    worst_dev = dev * dev;
                    worst_bin = b;
                }
            }
            ++report.marginal_cells;
            report.max_chi_square = std::max(report.max_chi_square, chi);
            if (chi > kChiSquareCrit15) {
                report.failures.push_back(
                    "marginal: D=" + std::to_string(d) + " slot " +
                    std::to_string(k + 1) + " chi-square " +
                    std::to_string(chi) + " exceeds " +
                    std::to_string(kChiSquareCrit15) + " (worst bucket " +
                    std::to_string(worst_bin) + ")");
            }
        }
    }

    report.passed = report.failures.empty();
    return report;
}

std::string check_share_invariance(const Field& field,
                                   const PartitionSpec& spec,
                                   const BlockMatrix& a, std::uint64_t seed) {
    std::vector<std::vector<std::uint8_t>> baseline;
    for (std::size_t d = 1; d <= spec.M; ++d) {
        const SessionPlan plan = plan_session(field, spec, d, seed);
        std::vector<std::vector<std::uint8_t>> shares;
        shares.reserve(spec.N);
        for (std::size_t rank = 1; rank <= spec.N; ++rank) {
            const EncodedShareA share =
                make_share(plan, a, static_cast<int>(rank));
            std::vector<std::uint8_t> bytes;
            for (FieldElement x : share.x_points)
                append_u64le(bytes, x);
            for (const BlockMatrix& ev : share.evaluations)
                for (FieldElement e : ev.entries())
                    append_u64le(bytes, e);
            shares.push_back(std::move(bytes));
        }
        if (d == 1) {
            baseline = std::move(shares);
            continue;
        }
        for (std::size_t rank = 1; rank <= spec.N; ++rank) {
            if (shares[rank - 1] != baseline[rank - 1])
                return "encoded share of worker " + std::to_string(rank) +
                       " differs between D=1 and D=" + std::to_string(d);
        }
    }
    return {};
}

} // namespace ppc
