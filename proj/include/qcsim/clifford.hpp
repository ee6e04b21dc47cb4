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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcsim {

enum class GateKind : std::uint8_t { H, S, Sdg, X, Y, Z, CX, CZ, SWAP };

inline constexpr bool is_two_qubit(GateKind k) {
    return k == GateKind::CX || k == GateKind::CZ || k == GateKind::SWAP;
}

inline std::string_view gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::S: return "S";
        case GateKind::Sdg: return "S_DAG";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::CX: return "CX";
        case GateKind::CZ: return "CZ";
        case GateKind::SWAP: return "SWAP";
    }
    return "?";
}

/// A Clifford gate on one or two qubits. For CX, q0 is the control.
struct CliffordGate {
    GateKind kind;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;

    std::size_t arity() const { return is_two_qubit(kind) ? 2 : 1; }

    void validate(std::size_t n) const {
        if (q0 >= n || (arity() == 2 && q1 >= n)) throw std::out_of_range("gate qubit index out of range");
        if (arity() == 2 && q0 == q1) throw std::invalid_argument("two-qubit gate indices must differ");
    }

    /// Re-indexes a gate written on local qubits 0..k-1 onto the given global qubits.
    CliffordGate remapped(const std::vector<std::uint32_t>& targets) const {
        CliffordGate g = *this;
        g.q0 = targets.at(q0);
        if (arity() == 2) g.q1 = targets.at(q1);
        return g;
    }

    bool operator==(const CliffordGate&) const = default;
};

inline CliffordGate gate1(GateKind k, std::uint32_t q) { return {k, q, 0}; }
inline CliffordGate gate2(GateKind k, std::uint32_t a, std::uint32_t b) { return {k, a, b}; }

}  // namespace qcsim
