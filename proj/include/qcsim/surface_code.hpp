// Copyright 2026 The qcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Rotated surface code memory experiments with a timed trapped-ion style schedule.
//
// Data qubit (r, c) has index r*d + c. A plaquette is named by its top-left corner (i, j) with
// i, j in [-1, d-1] and covers the in-range qubits among (i,j), (i,j+1), (i+1,j), (i+1,j+1).
// (i + j) even gives an X plaquette, odd a Z plaquette. Weight-2 plaquettes on the top and
// bottom edges are X type, those on the left and right edges are Z type. Measure qubit of
// stabilizer s is d*d + s.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsim/channel.hpp"
#include "qcsim/circuit.hpp"
#include "qcsim/pauli.hpp"

namespace qcsim {

enum class StabType : std::uint8_t { X, Z };

struct Stabilizer {
    StabType type;
    int i, j;
    std::vector<std::uint32_t> support;
    /// Data qubit touched in each of the four interaction slots, -1 when idle.
    std::array<std::int32_t, 4> order;
};

class SurfaceCodePatch {
   public:
    explicit SurfaceCodePatch(int d) : d_(d) {
        if (d < 3 || d % 2 == 0) throw std::invalid_argument("code distance must be odd and >= 3");
        for (int i = -1; i < d; ++i) {
            for (int j = -1; j < d; ++j) {
                const bool top_bottom = (i == -1 || i == d - 1);
                const bool left_right = (j == -1 || j == d - 1);
                if (top_bottom && left_right) continue;
                const StabType t = ((i + j) % 2 == 0) ? StabType::X : StabType::Z;
                if (top_bottom && t != StabType::X) continue;
                if (left_right && t != StabType::Z) continue;
                add_plaquette(t, i, j);
            }
        }
        for (int k = 0; k < d; ++k) {
            x_logical_.push_back(data_index(k, 0));
            z_logical_.push_back(data_index(0, k));
        }
    }

    int distance() const { return d_; }
    std::size_t num_data() const { return std::size_t(d_) * d_; }
    std::size_t num_stabilizers() const { return stabs_.size(); }
    std::size_t num_qubits() const { return num_data() + num_stabilizers(); }
    std::uint32_t data_index(int r, int c) const { return static_cast<std::uint32_t>(r * d_ + c); }
    std::uint32_t measure_qubit(std::size_t s) const { return static_cast<std::uint32_t>(num_data() + s); }
    const std::vector<Stabilizer>& stabilizers() const { return stabs_; }
    const std::vector<std::uint32_t>& x_logical_support() const { return x_logical_; }
    const std::vector<std::uint32_t>& z_logical_support() const { return z_logical_; }

    /// Stabilizer indices of the given type, in index order.
    std::vector<std::size_t> stabilizers_of(StabType t) const {
        std::vector<std::size_t> out;
        for (std::size_t s = 0; s < stabs_.size(); ++s)
            if (stabs_[s].type == t) out.push_back(s);
        return out;
    }

    /// Parity check matrix of one type: rows follow stabilizers_of(t), columns are data qubits.
    BitMatrix parity_check(StabType t) const {
        const auto rows = stabilizers_of(t);
        BitMatrix m(rows.size(), num_data());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (auto q : stabs_[rows[r]].support) m.set(r, q, true);
        return m;
    }

    /// Stabilizer as an operator on n qubits (n defaults to the full patch).
    PauliOperator stabilizer_pauli(std::size_t s, std::size_t n = 0) const {
        PauliOperator p(n ? n : num_qubits());
        for (auto q : stabs_.at(s).support) p.set(q, stabs_[s].type == StabType::X ? 'X' : 'Z');
        return p;
    }

    /// Logical X, Y or Z, with Y_L = i X_L Z_L.
    PauliOperator logical(char which, std::size_t n = 0) const {
        PauliOperator x(n ? n : num_qubits()), z(n ? n : num_qubits());
        for (auto q : x_logical_) x.set(q, 'X');
        for (auto q : z_logical_) z.set(q, 'Z');
        switch (which) {
            case 'X': return x;
            case 'Z': return z;
            case 'Y': {
                PauliOperator y = x * z;
                y.phase = (y.phase + 1) % 4;
                return y;
            }
        }
        throw std::invalid_argument("logical must be X, Y or Z");
    }

   private:
    void add_plaquette(StabType t, int i, int j) {
        Stabilizer s{t, i, j, {}, {-1, -1, -1, -1}};
        auto at = [&](int r, int c) -> std::int32_t {
            if (r < 0 || r >= d_ || c < 0 || c >= d_) return -1;
            return static_cast<std::int32_t>(data_index(r, c));
        };
        const std::int32_t nw = at(i, j), ne = at(i, j + 1), sw = at(i + 1, j), se = at(i + 1, j + 1);
        // X plaquettes use the Z pattern, Z plaquettes the N pattern; both keep hook errors
        // perpendicular to the logical of the same type.
        if (t == StabType::X) {
            s.order = {nw, ne, sw, se};
        } else {
            s.order = {nw, sw, ne, se};
        }
        for (auto q : {nw, ne, sw, se})
            if (q >= 0) s.support.push_back(static_cast<std::uint32_t>(q));
        std::sort(s.support.begin(), s.support.end());
        stabs_.push_back(std::move(s));
    }

    int d_;
    std::vector<Stabilizer> stabs_;
    std::vector<std::uint32_t> x_logical_, z_logical_;
};

inline SurfaceCodePatch build_patch(int d) { return SurfaceCodePatch(d); }

// ---- timed circuits ----

enum class OpCode : std::uint8_t { INIT, MEAS, H, CX };

inline const char* opcode_name(OpCode op) {
    switch (op) {
        case OpCode::INIT: return "INIT";
        case OpCode::MEAS: return "MEAS";
        case OpCode::H: return "H";
        case OpCode::CX: return "CX";
    }
    return "?";
}

struct TimedInstruction {
    OpCode op;
    std::vector<std::uint32_t> qubits;  // CX: control, target
    std::int64_t start_ns = 0;
    std::int64_t duration_ns = 0;
    bool perfect = false;

    std::int64_t end_ns() const { return start_ns + duration_ns; }
};

/// Instruction durations in nanoseconds.
struct Timings {
    std::int64_t init = 10'000;
    std::int64_t meas = 120'000;
    std::int64_t h = 13'000;  // R_Y(pi/2) then R_Z(pi)
    std::int64_t cx = 2'000'000;
    std::int64_t zone_move = 5'250;
};

struct TimedCircuit {
    std::size_t num_qubits = 0;
    std::vector<TimedInstruction> instructions;

    /// Orders by start time, then first qubit.
    void sort() {
        std::stable_sort(instructions.begin(), instructions.end(), [](const auto& a, const auto& b) {
            if (a.start_ns != b.start_ns) return a.start_ns < b.start_ns;
            return a.qubits.front() < b.qubits.front();
        });
    }

    /// Throws if two instructions on one qubit overlap in time or the order is not by start.
    void validate() const {
        std::vector<std::int64_t> last_end(num_qubits, INT64_MIN);
        std::int64_t prev_start = INT64_MIN;
        for (const auto& ins : instructions) {
            if (ins.start_ns < prev_start) throw std::logic_error("instructions not sorted by start time");
            prev_start = ins.start_ns;
            if (ins.qubits.empty() || ins.qubits.size() != (ins.op == OpCode::CX ? 2u : 1u))
                throw std::logic_error("instruction has the wrong number of qubits");
            for (auto q : ins.qubits) {
                if (q >= num_qubits) throw std::out_of_range("instruction qubit out of range");
                if (ins.start_ns < last_end[q]) throw std::logic_error("overlapping instructions on a qubit");
                last_end[q] = ins.end_ns();
            }
        }
    }

    std::size_t num_measurements() const {
        return static_cast<std::size_t>(std::count_if(instructions.begin(), instructions.end(),
                                                      [](const auto& i) { return i.op == OpCode::MEAS; }));
    }
};

/// Where detector inputs live in a measurement record.
struct DetectorLayout {
    std::size_t num_stabilizers = 0;
    std::size_t rounds = 0;            // measured rounds, the last one perfect
    std::size_t reference_offset = 0;  // slots of the preparation projections
    std::size_t rounds_offset = 0;     // slot of (round 0, stabilizer 0)

    std::size_t slot(std::size_t round, std::size_t stab) const {
        return rounds_offset + round * num_stabilizers + stab;
    }
};

/// Syndrome extraction rounds; the last of noisy_rounds + 1 rounds is flagged perfect.
inline TimedCircuit generate_idle(const SurfaceCodePatch& patch, std::size_t noisy_rounds, const Timings& tm = {}) {
    if (noisy_rounds < 1) throw std::invalid_argument("need at least one noisy round");
    TimedCircuit tc;
    tc.num_qubits = patch.num_qubits();
    const auto& stabs = patch.stabilizers();
    const std::int64_t slot_len = tm.zone_move + tm.cx;
    const std::int64_t round_len = tm.init + tm.h + 4 * slot_len + tm.h + tm.meas;
    for (std::size_t r = 0; r <= noisy_rounds; ++r) {
        const bool perfect = (r == noisy_rounds);
        const std::int64_t t0 = static_cast<std::int64_t>(r) * round_len;
        const std::int64_t t_h1 = t0 + tm.init;
        const std::int64_t t_cx = t_h1 + tm.h;
        const std::int64_t t_h2 = t_cx + 4 * slot_len;
        const std::int64_t t_m = t_h2 + tm.h;
        for (std::size_t s = 0; s < stabs.size(); ++s) {
            const std::uint32_t m = patch.measure_qubit(s);
            const bool xs = stabs[s].type == StabType::X;
            tc.instructions.push_back({OpCode::INIT, {m}, t0, tm.init, perfect});
            if (xs) tc.instructions.push_back({OpCode::H, {m}, t_h1, tm.h, perfect});
            for (int k = 0; k < 4; ++k) {
                const std::int32_t q = stabs[s].order[k];
                if (q < 0) continue;
                const std::int64_t start = t_cx + k * slot_len + tm.zone_move;
                const auto dq = static_cast<std::uint32_t>(q);
                if (xs) {
                    tc.instructions.push_back({OpCode::CX, {m, dq}, start, tm.cx, perfect});
                } else {
                    tc.instructions.push_back({OpCode::CX, {dq, m}, start, tm.cx, perfect});
                }
            }
            if (xs) tc.instructions.push_back({OpCode::H, {m}, t_h2, tm.h, perfect});
            tc.instructions.push_back({OpCode::MEAS, {m}, t_m, tm.meas, perfect});
        }
    }
    tc.sort();
    tc.validate();
    return tc;
}

/// Positive idle gaps (ns) before every non-perfect instruction, per qubit.
inline std::map<std::int64_t, std::size_t> idle_histogram(const TimedCircuit& tc) {
    std::map<std::int64_t, std::size_t> h;
    std::vector<std::int64_t> last_end(tc.num_qubits, -1);
    std::vector<bool> seen(tc.num_qubits, false);
    for (const auto& ins : tc.instructions) {
        for (auto q : ins.qubits) {
            if (seen[q] && !ins.perfect) {
                const std::int64_t gap = ins.start_ns - last_end[q];
                if (gap > 0) ++h[gap];
            }
            seen[q] = true;
            last_end[q] = ins.end_ns();
        }
    }
    return h;
}

// ---- text interchange ----

inline std::string format_us(std::int64_t ns) {
    std::string s = std::to_string(ns / 1000);
    std::int64_t frac = ns % 1000;
    if (frac) {
        std::string f = std::to_string(1000 + frac).substr(1);
        while (!f.empty() && f.back() == '0') f.pop_back();
        s += "." + f;
    }
    return s;
}

inline void write_timed_circuit(std::ostream& os, const TimedCircuit& tc) {
    os << "# qubits " << tc.num_qubits << "\n";
    for (const auto& ins : tc.instructions) {
        os << format_us(ins.start_ns) << ' ' << format_us(ins.duration_ns) << ' ' << opcode_name(ins.op);
        for (auto q : ins.qubits) os << ' ' << q;
        os << '\n';
    }
}

/// Reads the text format. Perfect-round flags are not part of it; all instructions load as
/// noisy. The qubit count is taken from a "# qubits N" header or the largest index seen.
inline TimedCircuit read_timed_circuit(std::istream& is) {
    TimedCircuit tc;
    std::string line;
    std::size_t max_q = 0;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            std::istringstream hs(line.substr(hash + 1));
            std::string key;
            std::size_t n;
            if (hs >> key && key == "qubits" && hs >> n) tc.num_qubits = n;
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string start, dur, op;
        if (!(ls >> start)) continue;
        if (!(ls >> dur >> op)) throw std::invalid_argument("malformed instruction on line " + std::to_string(lineno));
        TimedInstruction ins;
        if (op == "INIT") ins.op = OpCode::INIT;
        else if (op == "MEAS") ins.op = OpCode::MEAS;
        else if (op == "H") ins.op = OpCode::H;
        else if (op == "CX") ins.op = OpCode::CX;
        else throw std::invalid_argument("unknown opcode '" + op + "' on line " + std::to_string(lineno));
        ins.start_ns = std::llround(std::stod(start) * 1000.0);
        ins.duration_ns = std::llround(std::stod(dur) * 1000.0);
        std::uint32_t q;
        while (ls >> q) {
            ins.qubits.push_back(q);
            max_q = std::max<std::size_t>(max_q, q + 1);
        }
        tc.instructions.push_back(std::move(ins));
    }
    tc.num_qubits = std::max(tc.num_qubits, max_q);
    tc.validate();
    return tc;
}

// ---- noise ----

enum class DephasingMode { Coherent, Twirled };

struct NoiseModel {
    double p_init = 4.0e-5;
    double p_1q = 2.9e-5;
    double p_2q = 1.28e-3;
    double p_meas = 1.0e-3;
    double rate = 0.0;  // rad/s
    DephasingMode mode = DephasingMode::Twirled;

    void validate() const {
        for (double p : {p_init, p_1q, p_2q, p_meas})
            if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probability outside [0,1]");
        if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("dephasing rate must be >= 0");
    }
};

/// Appends the timed circuit to `out` with noise: dephasing for each idle gap before an
/// instruction, depolarizing after gates, bit flips after INIT and before MEAS. Perfect
/// instructions get no noise. One shared channel object per distinct angle.
inline void bind_noise_into(const TimedCircuit& tc, const NoiseModel& model, NoisyCircuit& out) {
    model.validate();
    if (out.num_qubits() != tc.num_qubits) throw std::invalid_argument("circuit sizes differ");
    std::map<std::int64_t, std::shared_ptr<const ChannelDecomposition>> deph;
    auto shared = [](ChannelDecomposition c) { return std::make_shared<const ChannelDecomposition>(std::move(c)); };
    const auto dep1 = shared(depolarizing(model.p_1q, 1));
    const auto dep2 = shared(depolarizing(model.p_2q, 2));
    const auto flip_init = shared(bitflip(model.p_init));
    const auto flip_meas = shared(bitflip(model.p_meas));
    const auto h_gate = shared(clifford_channel(1, {gate1(GateKind::H, 0)}));
    const auto cx_gate = shared(clifford_channel(2, {gate2(GateKind::CX, 0, 1)}));
    const std::size_t n = tc.num_qubits;

    std::vector<std::int64_t> last_end(n, 0);
    std::vector<bool> seen(n, false);
    for (const auto& ins : tc.instructions) {
        const bool noisy = !ins.perfect;
        for (auto q : ins.qubits) {
            if (seen[q]) {
                const std::int64_t gap = ins.start_ns - last_end[q];
                if (gap < 0) throw std::logic_error("negative idle gap in timed circuit");
                if (noisy && gap > 0 && model.rate > 0.0) {
                    auto& ch = deph[gap];
                    if (!ch) {
                        const double theta = model.rate * static_cast<double>(gap) * 1e-9;
                        ch = shared(model.mode == DephasingMode::Coherent ? dephasing_channel(theta)
                                                                          : twirled_dephasing(theta));
                    }
                    out.add_channel(ch, {q});
                }
            }
            seen[q] = true;
            last_end[q] = ins.end_ns();
        }
        switch (ins.op) {
            case OpCode::INIT: {
                const auto q = ins.qubits[0];
                out.add_reset(PauliOperator::single(n, q, 'Z'), PauliOperator::single(n, q, 'X'));
                if (noisy && model.p_init > 0) out.add_channel(flip_init, {q});
                break;
            }
            case OpCode::H:
                out.add_channel(h_gate, {ins.qubits[0]});
                if (noisy && model.p_1q > 0) out.add_channel(dep1, {ins.qubits[0]});
                break;
            case OpCode::CX:
                out.add_channel(cx_gate, {ins.qubits[0], ins.qubits[1]});
                if (noisy && model.p_2q > 0) out.add_channel(dep2, {ins.qubits[0], ins.qubits[1]});
                break;
            case OpCode::MEAS: {
                const auto q = ins.qubits[0];
                if (noisy && model.p_meas > 0) out.add_channel(flip_meas, {q});
                out.add_measure(PauliOperator::single(n, q, 'Z'));
                break;
            }
        }
    }
}

inline NoisyCircuit bind_noise(const TimedCircuit& tc, const NoiseModel& model) {
    NoisyCircuit out(tc.num_qubits);
    bind_noise_into(tc, model, out);
    return out;
}

// ---- logical preparation ----

enum class LogicalState : std::uint8_t { Zero, One, Plus, Minus };

inline const char* logical_state_name(LogicalState s) {
    switch (s) {
        case LogicalState::Zero: return "0";
        case LogicalState::One: return "1";
        case LogicalState::Plus: return "+";
        case LogicalState::Minus: return "-";
    }
    return "?";
}

/// Noiseless preparation: product state, one projection of every stabilizer (recorded as the
/// detector reference), then X_L for 1_L or a post-selection on Y_L = +1 for the Y eigenstate.
/// Returns the slot of the first reference measurement.
inline std::size_t prepare_logical(const SurfaceCodePatch& patch, LogicalState state, NoisyCircuit& out) {
    const std::size_t n = out.num_qubits();
    if (n < patch.num_qubits()) throw std::invalid_argument("circuit too small for patch");
    if (state == LogicalState::Plus) {
        const auto h = std::make_shared<const ChannelDecomposition>(clifford_channel(1, {gate1(GateKind::H, 0)}));
        for (std::uint32_t q = 0; q < patch.num_data(); ++q) out.add_channel(h, {q});
    }
    const std::size_t first = out.num_slots();
    for (std::size_t s = 0; s < patch.num_stabilizers(); ++s) out.add_measure(patch.stabilizer_pauli(s, n));
    if (state == LogicalState::One) {
        const auto x = std::make_shared<const ChannelDecomposition>(clifford_channel(1, {gate1(GateKind::X, 0)}));
        for (auto q : patch.x_logical_support()) out.add_channel(x, {q});
    } else if (state == LogicalState::Minus) {
        out.add_postselect(patch.logical('Y', n));
    }
    return first;
}

/// A complete idle experiment: preparation, d noisy rounds and a perfect round, with noise.
struct MemoryExperiment {
    SurfaceCodePatch patch;
    TimedCircuit timed;
    NoisyCircuit circuit;
    DetectorLayout layout;
};

inline MemoryExperiment build_memory_experiment(int d, LogicalState state, const NoiseModel& model,
                                                std::size_t noisy_rounds = 0) {
    SurfaceCodePatch patch(d);
    if (noisy_rounds == 0) noisy_rounds = static_cast<std::size_t>(d);
    TimedCircuit tc = generate_idle(patch, noisy_rounds);
    NoisyCircuit nc(patch.num_qubits());
    DetectorLayout lay;
    lay.num_stabilizers = patch.num_stabilizers();
    lay.rounds = noisy_rounds + 1;
    lay.reference_offset = prepare_logical(patch, state, nc);
    lay.rounds_offset = nc.num_slots();
    bind_noise_into(tc, model, nc);
    return {std::move(patch), std::move(tc), std::move(nc), lay};
}

}  // namespace qcsim
