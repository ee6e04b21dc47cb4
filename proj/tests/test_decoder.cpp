#include <gtest/gtest.h>

#include <random>

#include "qcsim/decoder.hpp"
#include "qcsim/oracles/pauli_frame.hpp"
#include "qcsim/surface_code.hpp"

using namespace qcsim;

namespace {

NoiseModel idle_noise(double rate) {
    NoiseModel m;
    m.rate = rate;
    m.mode = DephasingMode::Twirled;
    return m;
}

/// True when decoding the fault set leaves a logical error.
bool decodes_wrong(const MemoryExperiment& ex, const SurfaceDecoder& dec, const std::vector<oracle::FaultLocation>& f) {
    const auto fs = oracle::propagate_faults(ex.circuit, f);
    const auto flips = logical_flips(dec.decode_record(fs.flips), ex.patch);
    const std::size_t n = ex.circuit.num_qubits();
    const bool x_err = !fs.frame.commutes_with(ex.patch.logical('X', n));
    const bool z_err = !fs.frame.commutes_with(ex.patch.logical('Z', n));
    return (x_err != flips.x) || (z_err != flips.z);
}

}  // namespace

TEST(Graph, Counts) {
    const auto p = build_patch(3);
    const auto g = build_graph(p, StabType::Z, 4);
    EXPECT_EQ(g.num_detectors(), 16u);
    EXPECT_EQ(g.edges().size(), 9u * 4 + 4u * 3);
    std::size_t to_boundary = 0;
    for (const auto& e : g.edges()) to_boundary += (e.b == g.boundary());
    EXPECT_EQ(to_boundary, 6u * 4);  // left and right columns of each round
    EXPECT_EQ(g.distance(g.node(0, 0), g.node(0, 3)), 3u);
    EXPECT_EQ(g.boundary_distance(g.node(0, 2)), 1u);
    EXPECT_EQ(g.path_correction(g.node(0, 0), g.node(0, 3)).popcount(), 0u);
    EXPECT_FALSE(g.dump().empty());
    EXPECT_THROW(build_graph(p, StabType::X, 0), std::invalid_argument);
}

TEST(Graph, CorrectionsReproduceSyndrome) {
    const auto p = build_patch(5);
    for (StabType t : {StabType::X, StabType::Z}) {
        const auto g = build_graph(p, t, 1);
        const auto H = p.parity_check(t);
        for (std::size_t u = 0; u < g.num_detectors(); ++u) {
            const BitVec& c = g.boundary_correction(u);
            for (std::size_t k = 0; k < H.rows(); ++k) {
                bool par = false;
                c.for_each_set([&](std::size_t q) { par ^= H.get(k, q); });
                EXPECT_EQ(par, k == u);
            }
            EXPECT_EQ(c.popcount(), g.boundary_distance(u));
        }
    }
}

TEST(Detectors, MeasurementFlipFiresTwoRounds) {
    const auto ex = build_memory_experiment(3, LogicalState::Zero, idle_noise(0), 3);
    const SurfaceDecoder dec(ex.patch, ex.layout);
    BitVec rec(ex.circuit.num_slots());
    EXPECT_TRUE(detectors_from_record(rec, ex.layout, dec.z_graph()).none());
    const std::size_t s = dec.z_graph().stabilizers()[1];
    rec.set(ex.layout.slot(1, s), true);
    const auto syn = detectors_from_record(rec, ex.layout, dec.z_graph());
    EXPECT_EQ(syn.popcount(), 2u);
    EXPECT_TRUE(syn[dec.z_graph().node(1, 1)]);
    EXPECT_TRUE(syn[dec.z_graph().node(1, 2)]);
    const auto c = dec.decode_record(rec);
    EXPECT_TRUE(c.x.none());
    EXPECT_TRUE(c.z.none());
}

TEST(Decode, EmptyAndSizeMismatch) {
    const auto g = build_graph(build_patch(3), StabType::X, 2);
    EXPECT_TRUE(decode(g, BitVec(g.num_detectors())).none());
    EXPECT_THROW(decode(g, BitVec(3)), std::invalid_argument);
}

TEST(LogicalFlips, Algebra) {
    const auto p = build_patch(3);
    Correction c{BitVec(9), BitVec(9)};
    auto f = logical_flips(c, p);
    EXPECT_FALSE(f.x || f.y || f.z);
    c.x.set(p.z_logical_support()[1], true);  // flips Z_L
    f = logical_flips(c, p);
    EXPECT_TRUE(f.z);
    EXPECT_FALSE(f.x);
    EXPECT_TRUE(f.y);
    c.z.set(p.x_logical_support()[2], true);
    f = logical_flips(c, p);
    EXPECT_TRUE(f['X']);
    EXPECT_TRUE(f['Z']);
    EXPECT_FALSE(f['Y']);
}

TEST(Matching, DynamicProgramMatchesBruteForce) {
    std::mt19937_64 rng(23);
    const auto g = build_graph(build_patch(5), StabType::Z, 4);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::size_t> defects;
        for (std::size_t u = 0; u < g.num_detectors(); ++u)
            if (rng() % 8 == 0) defects.push_back(u);
        if (defects.size() > 10) defects.resize(10);
        const auto m = match_defects(g, defects);
        EXPECT_EQ(m.cost, brute_force_matching_cost(g, defects));
        // every defect appears exactly once
        std::vector<int> seen(g.num_detectors() + 1, 0);
        for (const auto& mt : m.matches) {
            ++seen[mt.u];
            if (mt.partner != g.boundary()) ++seen[mt.partner];
        }
        for (auto u : defects) EXPECT_EQ(seen[u], 1);
        std::vector<bool> used(defects.size(), false);
        std::vector<Match> cur;
        Matching bb;
        detail::branch_and_bound(g, defects, used, cur, {}, bb);
        EXPECT_EQ(bb.cost, m.cost);
    }
}

TEST(Matching, LargeDefectCountUsesBranchAndBound) {
    const auto g = build_graph(build_patch(7), StabType::X, 8);
    std::vector<std::size_t> defects;
    for (std::size_t u = 0; u < g.num_detectors() && defects.size() < 22; u += 9) defects.push_back(u);
    const auto m = match_defects(g, defects);
    std::size_t covered = 0;
    for (const auto& mt : m.matches) covered += (mt.partner == g.boundary()) ? 1 : 2;
    EXPECT_EQ(covered, defects.size());
}

TEST(Decode, EverySingleFaultAtDistance3) {
    for (auto st : {LogicalState::Zero, LogicalState::Plus}) {
        const auto ex = build_memory_experiment(3, st, idle_noise(0.043));
        const SurfaceDecoder dec(ex.patch, ex.layout);
        const auto faults = oracle::enumerate_faults(ex.circuit);
        ASSERT_GT(faults.size(), 1000u);
        std::size_t bad = 0;
        for (const auto& f : faults) bad += decodes_wrong(ex, dec, {f});
        EXPECT_EQ(bad, 0u);
    }
}

TEST(Decode, SampledSingleFaultsAtDistance5) {
    const auto ex = build_memory_experiment(5, LogicalState::Zero, idle_noise(0.043));
    const SurfaceDecoder dec(ex.patch, ex.layout);
    const auto faults = oracle::enumerate_faults(ex.circuit);
    std::mt19937_64 rng(29);
    std::size_t bad = 0;
    for (int k = 0; k < 10000; ++k) bad += decodes_wrong(ex, dec, {faults[rng() % faults.size()]});
    EXPECT_EQ(bad, 0u);
}

TEST(Decode, Deterministic) {
    const auto ex = build_memory_experiment(3, LogicalState::Zero, idle_noise(0.043));
    const SurfaceDecoder dec(ex.patch, ex.layout);
    Rng rng = make_stream({3});
    for (int k = 0; k < 50; ++k) {
        const auto s = oracle::pauli_frame_sample(ex.circuit, rng);
        const auto a = dec.decode_record(s.flips), b = dec.decode_record(s.flips);
        EXPECT_EQ(a.x, b.x);
        EXPECT_EQ(a.z, b.z);
    }
}
