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

#include <stdexcept>
#include <string>
#include <string_view>

#include "qcsim/bits.hpp"

namespace qcsim {

/// Multi-qubit Pauli operator i^phase * (sigma_0 (x) sigma_1 (x) ...), where qubit k carries
/// I, X, Z or Y according to (x_k, z_k) = (0,0), (1,0), (0,1), (1,1).
///
/// With this convention the operator is Hermitian exactly when phase is even.
class PauliOperator {
   public:
    PauliOperator() = default;
    explicit PauliOperator(std::size_t n) : x(n), z(n) {}

    /// Parses strings such as "+XZZX", "-iY_Z" or "XIZ". '_' and 'I' both mean identity.
    static PauliOperator parse(std::string_view text) {
        unsigned ph = 0;
        std::size_t pos = 0;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') ph = 2;
            ++pos;
        }
        if (pos < text.size() && text[pos] == 'i') {
            ph += 1;
            ++pos;
        }
        PauliOperator p(text.size() - pos);
        for (std::size_t k = 0; pos + k < text.size(); ++k) {
            switch (text[pos + k]) {
                case 'I':
                case '_':
                    break;
                case 'X':
                    p.x.set(k, true);
                    break;
                case 'Z':
                    p.z.set(k, true);
                    break;
                case 'Y':
                    p.x.set(k, true);
                    p.z.set(k, true);
                    break;
                default:
                    throw std::invalid_argument("bad Pauli character in '" + std::string(text) + "'");
            }
        }
        p.phase = ph % 4;
        return p;
    }

    static PauliOperator single(std::size_t n, std::size_t q, char kind) {
        PauliOperator p(n);
        p.set(q, kind);
        return p;
    }

    std::size_t num_qubits() const { return x.size(); }

    void set(std::size_t q, char kind) {
        if (q >= num_qubits()) throw std::out_of_range("Pauli qubit index out of range");
        x.set(q, kind == 'X' || kind == 'Y');
        z.set(q, kind == 'Z' || kind == 'Y');
    }

    char at(std::size_t q) const {
        static constexpr char kTable[4] = {'I', 'X', 'Z', 'Y'};
        return kTable[int(x[q]) | (int(z[q]) << 1)];
    }

    bool hermitian() const { return (phase & 1) == 0; }

    std::size_t weight() const { return (x | z).popcount(); }

    bool commutes_with(const PauliOperator& o) const {
        check_same(o);
        return bitops::and_parity(x.words(), o.z.words()) == bitops::and_parity(z.words(), o.x.words());
    }

    /// Power of i in the X^x Z^z factorisation: P = i^xz_phase() X^x Z^z.
    unsigned xz_phase() const { return (phase + (x & z).popcount()) % 4; }

    PauliOperator& operator*=(const PauliOperator& o) {
        check_same(o);
        unsigned e = xz_phase() + o.xz_phase();
        if (bitops::and_parity(z.words(), o.x.words())) e += 2;
        x ^= o.x;
        z ^= o.z;
        phase = (e + 4 - (x & z).popcount() % 4) % 4;
        return *this;
    }
    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) { return a *= b; }

    PauliOperator& negate() {
        phase = (phase + 2) % 4;
        return *this;
    }

    bool operator==(const PauliOperator& o) const { return phase == o.phase && x == o.x && z == o.z; }

    std::string str() const {
        static constexpr const char* kSign[4] = {"+", "+i", "-", "-i"};
        std::string s = kSign[phase];
        for (std::size_t q = 0; q < num_qubits(); ++q) s += at(q);
        return s;
    }

    BitVec x, z;
    unsigned phase = 0;

   private:
    void check_same(const PauliOperator& o) const {
        if (o.num_qubits() != num_qubits()) throw std::invalid_argument("Pauli size mismatch");
    }
};

}  // namespace qcsim
