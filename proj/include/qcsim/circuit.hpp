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

#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qcsim/channel.hpp"
#include "qcsim/pauli.hpp"

namespace qcsim {

struct NoisyUnitary {
    std::shared_ptr<const ChannelDecomposition> channel;
    std::vector<std::uint32_t> qubits;
};

/// Perfect measurement of P; outcome bit 1 means eigenvalue -1.
struct MeasureEvent {
    PauliOperator P;
    std::uint32_t slot;
};

/// Sets the P eigenvalue to +1, applying Q after a -1 outcome.
struct ResetEvent {
    PauliOperator P;
    PauliOperator Q;
};

/// Normalised projection onto the +1 eigenspace of P with unit weight. Only meaningful for
/// noiseless state preparation, where ket and bra agree.
struct PostSelectEvent {
    PauliOperator P;
};

using Event = std::variant<NoisyUnitary, MeasureEvent, ResetEvent, PostSelectEvent>;

class NoisyCircuit {
   public:
    explicit NoisyCircuit(std::size_t n) : n_(n) {
        if (n == 0) throw std::invalid_argument("circuit needs at least one qubit");
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t num_slots() const { return slots_; }
    const std::vector<Event>& events() const { return events_; }

    void add_channel(std::shared_ptr<const ChannelDecomposition> ch, std::vector<std::uint32_t> qubits) {
        if (!ch) throw std::invalid_argument("null channel");
        if (qubits.size() != ch->arity()) throw std::invalid_argument("channel arity does not match qubit list");
        for (std::size_t a = 0; a < qubits.size(); ++a) {
            if (qubits[a] >= n_) throw std::out_of_range("channel qubit out of range");
            for (std::size_t b = 0; b < a; ++b) {
                if (qubits[a] == qubits[b]) throw std::invalid_argument("repeated channel qubit");
            }
        }
        events_.push_back(NoisyUnitary{std::move(ch), std::move(qubits)});
    }
    void add_channel(const ChannelDecomposition& ch, std::vector<std::uint32_t> qubits) {
        add_channel(std::make_shared<const ChannelDecomposition>(ch), std::move(qubits));
    }
    void add_gate(const CliffordGate& g) {
        if (g.arity() == 1) {
            add_channel(clifford_channel(1, {gate1(g.kind, 0)}), {g.q0});
        } else {
            add_channel(clifford_channel(2, {gate2(g.kind, 0, 1)}), {g.q0, g.q1});
        }
    }

    /// Returns the record slot assigned to the measurement.
    std::uint32_t add_measure(PauliOperator P) {
        check(P);
        const auto slot = static_cast<std::uint32_t>(slots_++);
        events_.push_back(MeasureEvent{std::move(P), slot});
        return slot;
    }
    void add_reset(PauliOperator P, PauliOperator Q) {
        check(P);
        check(Q);
        if (P.commutes_with(Q)) throw std::invalid_argument("reset flip operator must anticommute with P");
        events_.push_back(ResetEvent{std::move(P), std::move(Q)});
    }
    void add_postselect(PauliOperator P) {
        check(P);
        events_.push_back(PostSelectEvent{std::move(P)});
    }

    /// Product of per-gate extents, the shot-count factor of the estimator.
    double extent_product() const {
        double e = 1.0;
        for (const auto& ev : events_) {
            if (const auto* u = std::get_if<NoisyUnitary>(&ev)) e *= u->channel->extent_sq4();
        }
        return e;
    }

   private:
    void check(const PauliOperator& P) const {
        if (P.num_qubits() != n_) throw std::invalid_argument("Pauli size does not match circuit");
        if (!P.hermitian()) throw std::invalid_argument("circuit Pauli must be Hermitian");
    }

    std::size_t n_;
    std::size_t slots_ = 0;
    std::vector<Event> events_;
};

}  // namespace qcsim
