// Command-line front end: end-to-end protocol demos, figure CSVs and the
// privacy audit.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ppc/protocol.hpp"
#include "ppc/stragglersim.hpp"

namespace {

using namespace ppc;

struct RunConfig {
    std::uint64_t prime = kDefaultPrime;
    std::string dims = "4x4x4";
    std::size_t r = 4, s = 4, t = 4;
    // 0 = not set on the command line; resolved per subcommand
    std::size_t m = 0, n = 0, big_m = 0, workers = 0, l = 0;
    std::size_t desired = 1;
    std::uint64_t seed = 1;
    std::size_t trials = 10000;
    std::string convention = "harmonic";
    int fig = 2;
    std::string out;
    bool mutant = false;

    Convention conv() const {
        return convention == "log" ? Convention::LogApprox
                                   : Convention::HarmonicExact;
    }
};

void parse_dims(RunConfig& cfg) {
    std::size_t vals[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t next = i < 2 ? cfg.dims.find('x', pos) : cfg.dims.size();
        if (next == std::string::npos)
            throw ParseError("dims must look like RxSxT: " + cfg.dims);
        const std::string part = cfg.dims.substr(pos, next - pos);
        try {
            vals[i] = std::stoull(part);
        } catch (const std::exception&) {
            throw ParseError("dims must look like RxSxT: " + cfg.dims);
        }
        if (vals[i] == 0)
            throw ParseError("dims must be positive: " + cfg.dims);
        pos = next + 1;
    }
    cfg.r = vals[0];
    cfg.s = vals[1];
    cfg.t = vals[2];
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

BlockMatrix pad_rows(const BlockMatrix& a, std::size_t multiple) {
    const std::size_t target =
        (a.rows() + multiple - 1) / multiple * multiple;
    if (target == a.rows())
        return a;
    BlockMatrix out(a.field(), target, a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out.set(r, c, a.at(r, c));
    return out;
}

BlockMatrix pad_cols(const BlockMatrix& b, std::size_t multiple) {
    const std::size_t target =
        (b.cols() + multiple - 1) / multiple * multiple;
    if (target == b.cols())
        return b;
    BlockMatrix out(b.field(), b.rows(), target);
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c)
            out.set(r, c, b.at(r, c));
    return out;
}

BlockMatrix crop(const BlockMatrix& m, std::size_t rows, std::size_t cols) {
    if (m.rows() == rows && m.cols() == cols)
        return m;
    BlockMatrix out(m.field(), rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            out.set(r, c, m.at(r, c));
    return out;
}

// Arrival order driven by the straggler model: worker i's j-th result lands
// at (j+1) * T_i, workers drawing i.i.d. shifted-exponential delays.
std::vector<ArrivalEvent> sample_arrivals(const PartitionSpec& spec,
                                          const DelayModel& model, Rng& rng) {
    std::vector<double> delay(spec.N);
    for (auto& d : delay)
        d = model.gamma + rng.exponential(model.mu);
    std::vector<std::pair<double, ArrivalEvent>> timed;
    timed.reserve(spec.N * spec.L);
    for (std::size_t w = 1; w <= spec.N; ++w)
        for (std::size_t j = 0; j < spec.L; ++j)
            timed.push_back({static_cast<double>(j + 1) * delay[w - 1],
                             ArrivalEvent{static_cast<int>(w), j}});
    std::sort(timed.begin(), timed.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first)
                      return a.first < b.first;
                  if (a.second.worker_rank != b.second.worker_rank)
                      return a.second.worker_rank < b.second.worker_rank;
                  return a.second.seq_index < b.second.seq_index;
              });
    std::vector<ArrivalEvent> order;
    order.reserve(timed.size());
    for (const auto& [_, ev] : timed)
        order.push_back(ev);
    return order;
}

int cmd_demo(RunConfig cfg) {
    if (cfg.m == 0) cfg.m = 2;
    if (cfg.n == 0) cfg.n = 3;
    if (cfg.big_m == 0) cfg.big_m = 2;
    if (cfg.workers == 0) cfg.workers = 12;
    if (cfg.l == 0) cfg.l = 1;

    const Field field(cfg.prime);
    const PartitionSpec spec{cfg.m, cfg.n, cfg.big_m, cfg.workers, cfg.l};
    spec.validate();
    if (cfg.desired == 0 || cfg.desired > spec.M)
        throw SpecError("invalid spec: desired index must be in [1, M]");

    Rng data_rng = Rng::derive(cfg.seed, 1);
    const BlockMatrix a = BlockMatrix::random(field, cfg.r, cfg.s, data_rng);
    std::vector<BlockMatrix> library;
    for (std::size_t k = 0; k < spec.M; ++k)
        library.push_back(
            BlockMatrix::random(field, cfg.s, cfg.t, data_rng));

    // Library math needs m | rows(A) and n-1 | cols(B); pad, decode, crop.
    const BlockMatrix a_padded = pad_rows(a, spec.m);
    std::vector<BlockMatrix> lib_padded;
    for (const auto& b : library)
        lib_padded.push_back(pad_cols(b, spec.n - 1));

    const SessionPlan plan = plan_session(field, spec, cfg.desired, cfg.seed);
    const DelayModel model{0.1, 0.1};
    Rng arrival_rng = Rng::derive(cfg.seed, 2);
    const auto arrivals = sample_arrivals(spec, model, arrival_rng);
    const SessionOutcome outcome =
        orchestrate(plan, a_padded, lib_padded, arrivals);

    const BlockMatrix decoded =
        crop(outcome.product, cfg.r, cfg.t);
    const BlockMatrix oracle = matmul(a, library[cfg.desired - 1]);
    const bool ok = decoded == oracle;

    std::cout << "private polynomial code demo\n";
    std::cout << "  prime p = " << field.prime() << "\n";
    std::cout << "  A: " << cfg.r << "x" << cfg.s << ", library: " << spec.M
              << " matrices " << cfg.s << "x" << cfg.t << ", desired D = "
              << cfg.desired << "\n";
    std::cout << "  geometry: m=" << spec.m << " n=" << spec.n
              << " M=" << spec.M << " N=" << spec.N << " L=" << spec.L
              << "\n";
    std::cout << "  seed = " << cfg.seed << "\n";
    std::cout << "  recovery threshold K = " << spec.recovery_threshold()
              << "\n";
    std::cout << "  transcript: " << outcome.transcript.to_string() << "\n";
    std::cout << "  comm loads (multiples of |A|): rpir="
              << fmt(comm_load(Scheme::Rpir, spec.N, spec.m, spec.L))
              << " one_shot="
              << fmt(comm_load(Scheme::OneShot, spec.N, spec.m, spec.L))
              << " async="
              << fmt(comm_load(Scheme::Async, spec.N, spec.m, spec.L))
              << "\n";
    std::cout << "  decoded product equals direct matmul: "
              << (ok ? "yes" : "NO") << "\n";
    return ok ? 0 : 1;
}

int cmd_simulate(RunConfig cfg) {
    if (cfg.workers == 0) cfg.workers = 12;
    if (cfg.big_m == 0) cfg.big_m = 4;
    const unsigned N = static_cast<unsigned>(cfg.workers);
    const unsigned M = static_cast<unsigned>(cfg.big_m);
    const unsigned n = 2;
    const Convention conv = cfg.conv();
    const std::size_t cap = 1000000;

    std::string path = cfg.out.empty()
                           ? "fig" + std::to_string(cfg.fig) + ".csv"
                           : cfg.out;
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ParseError("cannot open output file: " + path);

    if (cfg.fig == 2) {
        const DelayModel model{0.1, 0.1};
        os << "K,t_rpir,t_a_one,t_a_async\n";
        for (unsigned K = 2; K <= 10; K += 2) {
            const unsigned m = K / n;
            const TimingReport row = make_timing_report(
                N, n, m, M, m, model, conv, cap, cfg.seed);
            os << K << ',' << fmt(row.t_rpir) << ',' << fmt(row.t_a_one)
               << ',' << fmt(row.t_a_async) << "\n";
        }
    } else if (cfg.fig == 3) {
        const unsigned K = 4;
        const unsigned m = K / n;
        os << "mu,t_rpir,t_a_one,t_a_async\n";
        for (int j = 0; j < 20; ++j) {
            const double mu = std::pow(10.0, -1.0 + 2.0 * j / 19.0);
            const DelayModel model{1.0, mu};
            const TimingReport row = make_timing_report(
                N, n, m, M, m, model, conv, cap, cfg.seed);
            os << fmt(mu) << ',' << fmt(row.t_rpir) << ','
               << fmt(row.t_a_one) << ',' << fmt(row.t_a_async) << "\n";
        }
    } else {
        throw ParseError("fig must be 2 or 3");
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_audit(RunConfig cfg) {
    if (cfg.m == 0) cfg.m = 2;
    if (cfg.n == 0) cfg.n = 2;
    if (cfg.big_m == 0) cfg.big_m = 4;
    if (cfg.workers == 0) cfg.workers = 12;
    if (cfg.l == 0) cfg.l = 1;

    const Field field(cfg.prime);
    const PartitionSpec spec{cfg.m, cfg.n, cfg.big_m, cfg.workers, cfg.l};
    spec.validate();
    if (spec.M < 2)
        throw SpecError("audit requires M >= 2");

    const QuerySerializer serializer =
        cfg.mutant ? QuerySerializer(leaky_query_bytes)
                   : QuerySerializer(canonical_query_bytes);
    const AuditReport report = audit_query_invariance(
        field, spec, 100, cfg.trials, cfg.seed, serializer);
    std::cout << report.to_string();

    Rng data_rng = Rng::derive(cfg.seed, 1);
    const BlockMatrix a = BlockMatrix::random(
        field, (cfg.r + spec.m - 1) / spec.m * spec.m, cfg.s, data_rng);
    const std::string share_failure =
        check_share_invariance(field, spec, a, cfg.seed);
    std::cout << "encoded-share invariance across D: "
              << (share_failure.empty() ? "PASS" : "FAIL " + share_failure)
              << "\n";

    return (report.passed && share_failure.empty()) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"private polynomial codes for distributed matrix "
                 "multiplication"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.set_config("--config")->configurable(false);
    app.add_option("--seed", cfg.seed, "RNG seed");
    app.add_option("--prime", cfg.prime, "field modulus (prime)");
    app.add_option("--dims", cfg.dims, "matrix dims RxSxT");
    app.add_option("--m", cfg.m, "row blocks of A");
    app.add_option("--n", cfg.n, "worker groups (B splits into n-1 blocks)");
    app.add_option("--big-m", cfg.big_m, "library size M");
    app.add_option("--workers", cfg.workers, "worker count N");
    app.add_option("--l", cfg.l, "sub-computations per worker L");
    app.add_option("--desired", cfg.desired, "desired library index D");
    app.add_option("--trials", cfg.trials, "trial/seed count");
    app.add_option("--convention", cfg.convention,
                   "order-statistic convention")
        ->check(CLI::IsMember({"harmonic", "log"}));
    app.add_option("--fig", cfg.fig, "figure to reproduce")
        ->check(CLI::IsMember({2, 3}));
    app.add_option("--out", cfg.out, "output CSV path");

    auto* demo = app.add_subcommand(
        "demo", "run one private session end to end and verify it");
    auto* simulate = app.add_subcommand(
        "simulate", "write the timing-comparison CSV for a figure");
    auto* audit = app.add_subcommand(
        "audit", "check that queries and shares betray nothing about D");
    audit->add_flag("--mutant", cfg.mutant,
                    "use a deliberately leaky query serializer");
    for (auto* sub : {demo, simulate, audit})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        parse_dims(cfg);
        if (demo->parsed())
            return cmd_demo(cfg);
        if (simulate->parsed())
            return cmd_simulate(cfg);
        return cmd_audit(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
