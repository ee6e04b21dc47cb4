#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qcsim/decoder.hpp"
#include "qcsim/oracles/pauli_frame.hpp"
#include "qcsim/shot_engine.hpp"
#include "qcsim/surface_code.hpp"

using namespace qcsim;

namespace {

NoiseModel noiseless() {
    NoiseModel m;
    m.p_init = m.p_1q = m.p_2q = m.p_meas = 0.0;
    m.rate = 0.0;
    return m;
}

double mean_gap(const std::map<std::int64_t, std::size_t>& h) {
    double s = 0, c = 0;
    for (auto [g, n] : h) {
        s += double(g) * n;
        c += n;
    }
    return s / c;
}

double frac_above_1ms(const std::map<std::int64_t, std::size_t>& h) {
    double a = 0, c = 0;
    for (auto [g, n] : h) {
        c += n;
        if (g > 1'000'000) a += n;
    }
    return a / c;
}

}  // namespace

TEST(Patch, CountsAndAlgebra) {
    for (int d : {3, 5, 7}) {
        const auto p = build_patch(d);
        EXPECT_EQ(p.num_data(), std::size_t(d * d));
        EXPECT_EQ(p.num_stabilizers(), std::size_t(d * d - 1));
        EXPECT_EQ(p.stabilizers_of(StabType::X).size(), std::size_t(d * d - 1) / 2);
        const std::size_t n = p.num_data();
        const auto X = p.logical('X', n), Z = p.logical('Z', n), Y = p.logical('Y', n);
        EXPECT_EQ(X.weight(), std::size_t(d));
        EXPECT_EQ(Z.weight(), std::size_t(d));
        EXPECT_TRUE(Y.hermitian());
        EXPECT_FALSE(X.commutes_with(Z));
        for (std::size_t a = 0; a < p.num_stabilizers(); ++a) {
            const auto Sa = p.stabilizer_pauli(a, n);
            EXPECT_TRUE(Sa.commutes_with(X));
            EXPECT_TRUE(Sa.commutes_with(Z));
            for (std::size_t b = 0; b < p.num_stabilizers(); ++b) EXPECT_TRUE(Sa.commutes_with(p.stabilizer_pauli(b, n)));
        }
    }
    EXPECT_THROW(build_patch(4), std::invalid_argument);
    EXPECT_THROW(build_patch(1), std::invalid_argument);
}

TEST(Patch, ParityCheckColumnWeights) {
    const auto p = build_patch(5);
    for (StabType t : {StabType::X, StabType::Z}) {
        const auto H = p.parity_check(t);
        for (std::size_t q = 0; q < p.num_data(); ++q) {
            int w = 0;
            for (std::size_t r = 0; r < H.rows(); ++r) w += H.get(r, q);
            EXPECT_GE(w, 1);
            EXPECT_LE(w, 2);
        }
    }
}

TEST(Idle, StructureAndRecordCount) {
    const auto p = build_patch(3);
    const auto tc = generate_idle(p, 1);
    EXPECT_EQ(tc.num_measurements(), 16u);
    EXPECT_NO_THROW(tc.validate());
    std::size_t perfect_meas = 0;
    for (const auto& i : tc.instructions) perfect_meas += (i.op == OpCode::MEAS && i.perfect);
    EXPECT_EQ(perfect_meas, 8u);
    EXPECT_THROW(generate_idle(p, 0), std::invalid_argument);
    // one interaction per data qubit per slot
    for (const auto& ins : tc.instructions) {
        if (ins.op == OpCode::INIT) EXPECT_EQ(ins.duration_ns, 10'000);
        if (ins.op == OpCode::MEAS) EXPECT_EQ(ins.duration_ns, 120'000);
        if (ins.op == OpCode::CX) EXPECT_EQ(ins.duration_ns, 2'000'000);
    }
}

TEST(Idle, HistogramProperties) {
    std::vector<double> means, fracs;
    for (int d : {3, 5, 7}) {
        const auto h = idle_histogram(generate_idle(build_patch(d), d));
        EXPECT_LE(h.size(), 12u);  // d-independent set of gap lengths
        means.push_back(mean_gap(h));
        fracs.push_back(frac_above_1ms(h));
    }
    EXPECT_GT(fracs[0], 0.0);
    EXPECT_GT(fracs[0], fracs[1]);
    EXPECT_GT(fracs[1], fracs[2]);
    EXPECT_GT(means[0], means[1]);
    EXPECT_GT(means[1], means[2]);
}

TEST(Idle, BoundaryDataQubitsIdleLong) {
    const auto p = build_patch(3);
    const auto tc = generate_idle(p, 3);
    // corner data qubit 0 sits in two plaquettes only
    std::int64_t last = -1, longest = 0;
    for (const auto& ins : tc.instructions) {
        for (auto q : ins.qubits) {
            if (q != 0) continue;
            if (last >= 0 && !ins.perfect) longest = std::max(longest, ins.start_ns - last);
            last = ins.end_ns();
        }
    }
    EXPECT_GT(longest, 1'000'000);
    EXPECT_TRUE(idle_histogram(TimedCircuit{1, {{OpCode::INIT, {0}, 0, 10'000, false}, {OpCode::MEAS, {0}, 10'000, 120'000, false}}}).empty());
}

TEST(Idle, TextRoundTrip) {
    const auto tc = generate_idle(build_patch(3), 1);
    std::stringstream ss;
    write_timed_circuit(ss, tc);
    const auto back = read_timed_circuit(ss);
    ASSERT_EQ(back.instructions.size(), tc.instructions.size());
    EXPECT_EQ(back.num_qubits, tc.num_qubits);
    for (std::size_t k = 0; k < tc.instructions.size(); ++k) {
        EXPECT_EQ(back.instructions[k].start_ns, tc.instructions[k].start_ns);
        EXPECT_EQ(back.instructions[k].duration_ns, tc.instructions[k].duration_ns);
        EXPECT_EQ(back.instructions[k].qubits, tc.instructions[k].qubits);
        EXPECT_EQ(back.instructions[k].op, tc.instructions[k].op);
    }
    std::stringstream bad("0 10 FOO 1\n");
    EXPECT_THROW(read_timed_circuit(bad), std::invalid_argument);
    std::stringstream overlap("0 10 INIT 0\n5 10 INIT 0\n");
    EXPECT_THROW(read_timed_circuit(overlap), std::logic_error);
    EXPECT_EQ(format_us(5'250), "5.25");
}

TEST(BindNoise, DephasingEvents) {
    const auto tc = generate_idle(build_patch(3), 1);
    NoiseModel m;
    m.rate = 0.0;
    const auto nc = bind_noise(tc, m);
    for (const auto& ev : nc.events())
        if (const auto* u = std::get_if<NoisyUnitary>(&ev)) EXPECT_EQ(u->channel->label().find("dephasing"), std::string::npos);

    TimedCircuit two{1, {{OpCode::INIT, {0}, 0, 10'000, false}, {OpCode::MEAS, {0}, 2'010'000, 120'000, false}}};
    m = noiseless();
    m.rate = 0.043;
    m.mode = DephasingMode::Coherent;
    const auto c2 = bind_noise(two, m);
    int deph = 0;
    for (const auto& ev : c2.events()) {
        if (const auto* u = std::get_if<NoisyUnitary>(&ev)) {
            ++deph;
            const auto& k = u->channel->kraus()[0];
            ASSERT_EQ(k.terms.size(), 2u);
            // S coefficient magnitude sqrt(2) sin(theta/2) with theta = 8.6e-5
            EXPECT_NEAR(std::abs(k.terms[1].coeff), std::sqrt(2.0) * std::sin(8.6e-5 / 2), 1e-15);
        }
    }
    EXPECT_EQ(deph, 1);
    m.mode = DephasingMode::Twirled;
    const auto c3 = bind_noise(two, m);
    for (const auto& ev : c3.events())
        if (const auto* u = std::get_if<NoisyUnitary>(&ev)) EXPECT_NEAR(u->channel->kraus()[1].probability, 1.849e-9, 1e-12);
}

TEST(BindNoise, PerfectRoundIsNoiseFree) {
    const auto p = build_patch(3);
    auto tc = generate_idle(p, 1);
    for (auto& i : tc.instructions) i.perfect = true;
    NoiseModel m;
    m.rate = 5.0;
    const auto nc = bind_noise(tc, m);
    EXPECT_DOUBLE_EQ(nc.extent_product(), 1.0);
    for (const auto& ev : nc.events())
        if (const auto* u = std::get_if<NoisyUnitary>(&ev)) EXPECT_EQ(u->channel->label(), "clifford");
}

TEST(Experiment, NoiselessRoundTrip) {
    for (auto st : {LogicalState::Zero, LogicalState::One, LogicalState::Plus, LogicalState::Minus}) {
        const auto ex = build_memory_experiment(3, st, noiseless(), 2);
        const SurfaceDecoder dec(ex.patch, ex.layout);
        const std::vector<PauliOperator> obs = {ex.patch.logical('X'), ex.patch.logical('Y'), ex.patch.logical('Z')};
        double want[3] = {0, 0, 0};
        if (st == LogicalState::Zero) want[2] = 1;
        if (st == LogicalState::One) want[2] = -1;
        if (st == LogicalState::Plus) want[0] = 1;
        if (st == LogicalState::Minus) want[1] = 1;
        Rng rng = make_stream({1, std::uint64_t(st)});
        for (int shot = 0; shot < 20; ++shot) {
            const auto r = run_shot(ex.circuit, obs, rng);
            ASSERT_FALSE(r.aborted);
            EXPECT_EQ(r.weight, cplx(1.0, 0.0));
            for (int k = 0; k < 3; ++k) EXPECT_NEAR(r.values[k].real(), want[k], 1e-12);
            EXPECT_TRUE(detectors_from_record(r.record, ex.layout, dec.z_graph()).none());
            EXPECT_TRUE(detectors_from_record(r.record, ex.layout, dec.x_graph()).none());
            // repeated measurement of each stabilizer agrees across rounds
            for (std::size_t s = 0; s < ex.layout.num_stabilizers; ++s)
                for (std::size_t rr = 0; rr < ex.layout.rounds; ++rr)
                    EXPECT_EQ(r.record[ex.layout.slot(rr, s)], r.record[ex.layout.reference_offset + s]);
        }
    }
}

TEST(Experiment, QuiescentStateIsRandom) {
    const auto ex = build_memory_experiment(3, LogicalState::Zero, noiseless(), 1);
    Rng rng = make_stream({9});
    std::set<std::string> seen;
    for (int shot = 0; shot < 50; ++shot) {
        const auto r = run_shot(ex.circuit, {ex.patch.logical('Z')}, rng);
        std::string ref;
        for (std::size_t s = 0; s < ex.layout.num_stabilizers; ++s) ref += r.record[s] ? '1' : '0';
        seen.insert(ref);
    }
    EXPECT_GT(seen.size(), 4u);
}

// Minimum weight of E times any element of the stabilizer group of one type (d = 3 only).
static std::size_t coset_min_weight(const BitVec& e, const std::vector<BitVec>& gens) {
    std::size_t best = e.size();
    for (std::size_t m = 0; m < (std::size_t{1} << gens.size()); ++m) {
        BitVec v = e;
        for (std::size_t g = 0; g < gens.size(); ++g)
            if ((m >> g) & 1) v ^= gens[g];
        best = std::min(best, v.popcount());
    }
    return best;
}

TEST(Idle, HookSafeScheduleAtD3) {
    const auto p = build_patch(3);
    NoiseModel m = noiseless();
    m.p_2q = 0.01;
    const auto ex = build_memory_experiment(3, LogicalState::Zero, m, 1);
    const std::size_t nd = p.num_data();
    std::vector<BitVec> xg, zg;
    for (std::size_t s = 0; s < p.num_stabilizers(); ++s) {
        BitVec v(nd);
        for (auto q : p.stabilizers()[s].support) v.set(q, true);
        (p.stabilizers()[s].type == StabType::X ? xg : zg).push_back(v);
    }
    BitVec xl(nd), zl(nd);
    for (auto q : p.x_logical_support()) xl.set(q, true);
    for (auto q : p.z_logical_support()) zl.set(q, true);
    const auto faults = oracle::enumerate_faults(ex.circuit);
    ASSERT_GT(faults.size(), 100u);
    for (const auto& f : faults) {
        const auto fs = oracle::propagate_faults(ex.circuit, {f});
        BitVec ex_x(nd), ex_z(nd);
        for (std::size_t q = 0; q < nd; ++q) {
            ex_x.set(q, fs.frame.x[q]);
            ex_z.set(q, fs.frame.z[q]);
        }
        EXPECT_LT(coset_min_weight(ex_x, xg), coset_min_weight(ex_x ^ xl, xg));
        EXPECT_LT(coset_min_weight(ex_z, zg), coset_min_weight(ex_z ^ zl, zg));
    }
}
