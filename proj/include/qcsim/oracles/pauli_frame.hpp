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

// Pauli-frame sampling for circuits whose channels are all single-term Clifford mixtures.
// Tracks the Pauli difference between a noisy trajectory and a noiseless reference; measurement
// records are reported as flips relative to that reference.

#pragma once

#include <stdexcept>
#include <variant>

#include "qcsim/circuit.hpp"
#include "qcsim/pauli.hpp"
#include "qcsim/rng.hpp"

namespace qcsim::oracle {

struct FrameSample {
    BitVec flips;        // per record slot
    PauliOperator frame; // residual Pauli error at the end (phase ignored)
};

namespace detail {

inline void conjugate_frame(PauliOperator& f, const CliffordGate& g) {
    auto swap_bits = [&](std::size_t a, std::size_t b) {
        const bool xa = f.x[a], za = f.z[a];
        f.x.set(a, f.x[b]);
        f.z.set(a, f.z[b]);
        f.x.set(b, xa);
        f.z.set(b, za);
    };
    switch (g.kind) {
        case GateKind::X:
        case GateKind::Y:
        case GateKind::Z:
            break;
        case GateKind::H: {
            const bool x = f.x[g.q0];
            f.x.set(g.q0, f.z[g.q0]);
            f.z.set(g.q0, x);
            break;
        }
        case GateKind::S:
        case GateKind::Sdg:
            if (f.x[g.q0]) f.z.flip(g.q0);
            break;
        case GateKind::CX:
            if (f.x[g.q0]) f.x.flip(g.q1);
            if (f.z[g.q1]) f.z.flip(g.q0);
            break;
        case GateKind::CZ:
            if (f.x[g.q0]) f.z.flip(g.q1);
            if (f.x[g.q1]) f.z.flip(g.q0);
            break;
        case GateKind::SWAP: swap_bits(g.q0, g.q1); break;
    }
}

/// Multiplies the frame by the Pauli gates of a term.
inline void add_pauli(PauliOperator& f, const CliffordTerm& t, const std::vector<std::uint32_t>& qubits) {
    for (const auto& g : t.gates) {
        const auto q = qubits.at(g.q0);
        if (g.kind == GateKind::X || g.kind == GateKind::Y) f.x.flip(q);
        if (g.kind == GateKind::Z || g.kind == GateKind::Y) f.z.flip(q);
    }
}

/// Effect of taking Kraus branch r instead of the reference branch 0.
inline void apply_branch(PauliOperator& f, const NoisyUnitary& u, std::size_t r) {
    const auto& ch = *u.channel;
    if (ch.is_pauli_mixture()) {
        add_pauli(f, ch.kraus()[r].terms[0], u.qubits);
        add_pauli(f, ch.kraus()[0].terms[0], u.qubits);
        return;
    }
    if (ch.kraus().size() != 1 || ch.kraus()[0].terms.size() != 1)
        throw std::invalid_argument("Pauli-frame sampling needs Pauli mixtures or single Cliffords");
    for (const auto& g : ch.kraus()[0].terms[0].gates) conjugate_frame(f, g.remapped(u.qubits));
}

}  // namespace detail

/// One trajectory. A Pauli-mixture branch other than branch 0 is a fault that enters the frame;
/// Clifford gates conjugate it. After each measurement the frame absorbs the measured Pauli with
/// probability 1/2, modelling the random reference outcome.
inline FrameSample pauli_frame_sample(const NoisyCircuit& circuit, Rng& rng) {
    const std::size_t n = circuit.num_qubits();
    FrameSample out{BitVec(circuit.num_slots()), PauliOperator(n)};
    PauliOperator& f = out.frame;
    auto gauge = [&](const PauliOperator& P) {
        if (uniform01(rng) < 0.5) {
            f.x ^= P.x;
            f.z ^= P.z;
        }
    };
    for (const auto& ev : circuit.events()) {
        if (const auto* u = std::get_if<NoisyUnitary>(&ev)) {
            detail::apply_branch(f, *u, u->channel->sample(rng).r);
        } else if (const auto* m = std::get_if<MeasureEvent>(&ev)) {
            out.flips.set(m->slot, !f.commutes_with(m->P));
            gauge(m->P);
        } else if (const auto* r = std::get_if<ResetEvent>(&ev)) {
            if (r->P.weight() != 1) throw std::invalid_argument("Pauli-frame reset must act on one qubit");
            const std::size_t q = (r->P.x | r->P.z).first_set();
            f.x.set(q, false);
            f.z.set(q, false);
            gauge(r->P);
        } else if (const auto* p = std::get_if<PostSelectEvent>(&ev)) {
            if (!f.commutes_with(p->P)) throw std::domain_error("frame anticommutes with a post-selected Pauli");
            gauge(p->P);
        }
    }
    f.phase = 0;
    return out;
}

/// A specific Kraus branch of a specific circuit event.
struct FaultLocation {
    std::size_t event;
    std::size_t kraus;
};

/// Every non-identity branch of every Pauli-mixture channel in the circuit.
inline std::vector<FaultLocation> enumerate_faults(const NoisyCircuit& circuit) {
    std::vector<FaultLocation> out;
    const auto& evs = circuit.events();
    for (std::size_t e = 0; e < evs.size(); ++e) {
        const auto* u = std::get_if<NoisyUnitary>(&evs[e]);
        if (!u || !u->channel->is_pauli_mixture()) continue;
        for (std::size_t r = 1; r < u->channel->kraus().size(); ++r) out.push_back({e, r});
    }
    return out;
}

/// Deterministic propagation: every channel takes Kraus branch 0 except at the listed
/// locations, and no gauge randomisation is applied.
inline FrameSample propagate_faults(const NoisyCircuit& circuit, const std::vector<FaultLocation>& faults) {
    const std::size_t n = circuit.num_qubits();
    FrameSample out{BitVec(circuit.num_slots()), PauliOperator(n)};
    PauliOperator& f = out.frame;
    const auto& evs = circuit.events();
    for (std::size_t e = 0; e < evs.size(); ++e) {
        if (const auto* u = std::get_if<NoisyUnitary>(&evs[e])) {
            std::size_t r = 0;
            for (const auto& fl : faults)
                if (fl.event == e) r = fl.kraus;
            detail::apply_branch(f, *u, r);
        } else if (const auto* m = std::get_if<MeasureEvent>(&evs[e])) {
            out.flips.set(m->slot, !f.commutes_with(m->P));
        } else if (const auto* rs = std::get_if<ResetEvent>(&evs[e])) {
            const std::size_t q = (rs->P.x | rs->P.z).first_set();
            f.x.set(q, false);
            f.z.set(q, false);
        }
    }
    f.phase = 0;
    return out;
}

}  // namespace qcsim::oracle
