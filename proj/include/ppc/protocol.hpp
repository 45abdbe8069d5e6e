#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppc/codec.hpp"

namespace ppc {

// The per-worker instruction record. Deliberately contains nothing derived
// from the desired index except the point list itself, whose entries are
// individually uniform; the audit below checks exactly that.
struct Query {
    std::uint8_t version = 1;
    std::uint64_t n = 2;
    std::uint64_t sub_count = 1; // L
    std::vector<FieldElement> per_matrix_point;
    std::uint8_t compute_opcode = 1;

    // Canonical layout, byte equality is meaningful:
    //   "PPCQ", version u8, n u64le, L u64le, M u64le,
    //   M point residues u64le, opcode u8. No padding.
    std::vector<std::uint8_t> serialize() const;
};

// Everything the master fixes up front for one session.
struct SessionPlan {
    Field field;
    PartitionSpec spec;
    std::size_t desired = 1; // D, 1-based
    std::vector<std::vector<int>> grouping; // n lists of N/n worker ranks
    PointAssignment assignment;
    std::vector<std::vector<FieldElement>> x_points; // per worker, L each
    std::uint64_t seed = 0;

    // 1-based group of a 1-based worker rank.
    std::size_t group_of(int worker_rank) const;
};

// Samples grouping, evaluation points and globally distinct x-points.
// Deterministic per seed, and the sampling never looks at `desired`, so
// everything except the query point layout is identical across D.
SessionPlan plan_session(const Field& field, const PartitionSpec& spec,
                         std::size_t desired, std::uint64_t seed);

Query build_query(const SessionPlan& plan, int worker_rank);

// The master-side encoding of A for one worker (the C_i of the session).
EncodedShareA make_share(const SessionPlan& plan, const BlockMatrix& a,
                         int worker_rank);

// Exactly what one worker sees: its query and its encoded share. The library
// is public. No grouping, no other worker's points, no desired index.
struct WorkerView {
    Query query;
    EncodedShareA encoded_a;
};

// A worker result is addressed by (rank, sequence index); the master, who
// knows the plan, maps it to (group, x-point).
struct WorkerResult {
    int worker_rank = 0;
    std::size_t seq_index = 0;
    BlockMatrix value;
};

// Encode the library per the query, then emit the L products in index order.
std::vector<WorkerResult> run_worker(const WorkerView& view,
                                     const std::vector<BlockMatrix>& library);

struct ArrivalEvent {
    int worker_rank = 0;
    std::size_t seq_index = 0;
    bool operator==(const ArrivalEvent&) const = default;
};

struct Transcript {
    std::size_t recovery_threshold = 0;  // K = mn
    std::size_t produced = 0;            // N*L results available
    std::size_t read_count = 0;          // stream position when decoding fired
    std::vector<ArrivalEvent> consumed;  // the K results actually decoded
    std::string to_string() const;
};

struct SessionOutcome {
    BlockMatrix product;
    Transcript transcript;
};

// Full master/worker exchange: encode shares, build queries, run every
// worker, then feed results to the decoder in the given arrival order (a
// permutation of all (worker, index) pairs).
SessionOutcome orchestrate(const SessionPlan& plan, const BlockMatrix& a,
                           const std::vector<BlockMatrix>& library,
                           const std::vector<ArrivalEvent>& arrival_order);

// Serializer hook for the audit: produces the query bytes for `worker_rank`
// under `plan`, with the point list replaced by `points_override`. The
// canonical serializer ignores the plan's desired index entirely; the leaky
// one embeds it, to prove the audit catches dependence.
using QuerySerializer = std::function<std::vector<std::uint8_t>(
    const SessionPlan& plan, int worker_rank,
    const std::vector<FieldElement>& points_override)>;

std::vector<std::uint8_t> canonical_query_bytes(
    const SessionPlan& plan, int worker_rank,
    const std::vector<FieldElement>& points_override);

std::vector<std::uint8_t> leaky_query_bytes(
    const SessionPlan& plan, int worker_rank,
    const std::vector<FieldElement>& points_override);

struct AuditReport {
    bool passed = false;
    std::vector<std::string> failures;
    std::size_t coupling_checks = 0;
    std::size_t marginal_cells = 0;
    double max_chi_square = 0.0;
    double chi_square_threshold = 0.0;
    std::string to_string() const;
};

// Executable stand-in for the zero-mutual-information claim, two checks:
// (a) coupling: for every (D, D') pair and every worker, queries built from
//     an identical point list serialize to identical bytes, over
//     `coupling_seeds` seeds (exact; reports the first differing offset);
// (b) marginal: over `marginal_seeds` fresh seeds, each query point slot is
//     chi-square-uniform across 16 residue bins at significance 0.01,
//     identically parameterized for every slot and every D.
AuditReport audit_query_invariance(const Field& field,
                                   const PartitionSpec& spec,
                                   std::size_t coupling_seeds,
                                   std::size_t marginal_seeds,
                                   std::uint64_t seed,
                                   const QuerySerializer& serializer =
                                       canonical_query_bytes);

// Byte-compares every worker's encoded share of `a` across all desired
// indices for the same seed; returns the offending description or empty.
std::string check_share_invariance(const Field& field,
                                   const PartitionSpec& spec,
                                   const BlockMatrix& a, std::uint64_t seed);

} // namespace ppc
