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

// Stabilizer states with exact global phase in the C-H canonical form
//
//     |phi> = omega * U_C * U_H * |s>
//
// U_C is a Clifford that fixes |0..0> (generated by S, CZ and CX), U_H is a layer of
// Hadamards on the qubits flagged in v, and s is a computational basis string. U_C is stored
// through its stabilizer tableau:
//
//     U_C^-1 Z_p U_C = prod_j Z_j^G[p][j]
//     U_C^-1 X_p U_C = i^gamma[p] prod_j X_j^F[p][j] Z_j^M[p][j]
//
// Gates on the left of U_C are row operations on (F, G, M); gates absorbed on the right are
// column operations. omega is kept as an exact scalar (a multiple of pi/4 in phase times a
// power of sqrt(2) in magnitude), which is closed under every operation below.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qcsim/bits.hpp"
#include "qcsim/clifford.hpp"
#include "qcsim/pauli.hpp"

namespace qcsim {

/// A complex number of the form 0 or exp(i*pi*eighths/4) * sqrt(2)^sqrt2_power.
struct ExactScalar {
    bool zero = false;
    int eighths = 0;
    int sqrt2_power = 0;

    static ExactScalar one() { return {}; }
    static ExactScalar null() { return {true, 0, 0}; }

    ExactScalar& mul_phase8(int e) {
        eighths = ((eighths + e) % 8 + 8) % 8;
        return *this;
    }
    /// Multiplies by i^k.
    ExactScalar& mul_i(int k) { return mul_phase8(2 * k); }

    ExactScalar conj() const { return {zero, (8 - eighths) % 8, sqrt2_power}; }

    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        if (a.zero || b.zero) return null();
        return {false, (a.eighths + b.eighths) % 8, a.sqrt2_power + b.sqrt2_power};
    }

    double magnitude() const {
        if (zero) return 0.0;
        const int half = sqrt2_power >= 0 ? sqrt2_power / 2 : -((-sqrt2_power + 1) / 2);
        const double base = (sqrt2_power - 2 * half) ? std::sqrt(2.0) : 1.0;
        return std::ldexp(base, half);
    }

    std::complex<double> value() const {
        if (zero) return {0.0, 0.0};
        constexpr double r = 0.70710678118654752440;
        static constexpr std::array<std::complex<double>, 8> kPhase = {
            std::complex<double>{1, 0},  {r, r},  {0, 1},  {-r, r},
            std::complex<double>{-1, 0}, {-r, -r}, {0, -1}, {r, -r}};
        return kPhase[eighths] * magnitude();
    }
};

/// Pauli written as i^e X^x Z^z.
struct XZPauli {
    BitVec x, z;
    unsigned e = 0;
};

/// Tableau of the C-layer. Row p of F/G/M describes the conjugated X_p / Z_p.
struct CLayer {
    explicit CLayer(std::size_t n)
        : F(BitMatrix::identity(n)), G(BitMatrix::identity(n)), M(n, n), gamma(n, 0) {}

    std::size_t size() const { return gamma.size(); }

    // Left multiplication U_C <- V U_C.

    void left_s(std::size_t q) {
        M.xor_row(q, G.row(q));
        gamma[q] = (gamma[q] + 3) & 3;
    }
    void left_sdg(std::size_t q) {
        M.xor_row(q, G.row(q));
        gamma[q] = (gamma[q] + 1) & 3;
    }
    void left_z(std::size_t q) { gamma[q] = (gamma[q] + 2) & 3; }
    void left_cx(std::size_t c, std::size_t t) {
        const bool b = bitops::and_parity(M.row(c), F.row(t));
        G.xor_row(t, G.row(c));
        F.xor_row(c, F.row(t));
        M.xor_row(c, M.row(t));
        gamma[c] = (gamma[c] + gamma[t] + (b ? 2 : 0)) & 3;
    }
    void left_cz(std::size_t a, std::size_t b) {
        M.xor_row(a, G.row(b));
        M.xor_row(b, G.row(a));
    }

    // Right multiplication U_C <- U_C V, batched over a mask of partner qubits. Gates in each
    // batch commute (shared control, shared target, or all CZ), so order is irrelevant.

    /// prod_{r in mask} CX(q -> r) on the right.
    void right_cx_from(std::size_t q, const BitVec& mask) {
        const auto m = mask.words();
        for (std::size_t p = 0; p < size(); ++p) {
            if (bitops::and_parity(G.row(p), m)) G.flip(p, q);
            if (bitops::and_parity(M.row(p), m)) M.flip(p, q);
            if (F.get(p, q)) F.xor_row(p, m);
        }
    }
    /// prod_{c in mask} CX(c -> q) on the right.
    void right_cx_into(std::size_t q, const BitVec& mask) {
        const auto m = mask.words();
        for (std::size_t p = 0; p < size(); ++p) {
            if (G.get(p, q)) G.xor_row(p, m);
            if (M.get(p, q)) M.xor_row(p, m);
            if (bitops::and_parity(F.row(p), m)) F.flip(p, q);
        }
    }
    /// prod_{r in mask} CZ(q, r) on the right.
    void right_cz(std::size_t q, const BitVec& mask) {
        const auto m = mask.words();
        for (std::size_t p = 0; p < size(); ++p) {
            const bool par = bitops::and_parity(F.row(p), m);
            if (par) M.flip(p, q);
            if (F.get(p, q)) {
                M.xor_row(p, m);
                if (par) gamma[p] = (gamma[p] + 2) & 3;
            }
        }
    }
    void right_s(std::size_t q) {
        for (std::size_t p = 0; p < size(); ++p) {
            if (F.get(p, q)) {
                M.flip(p, q);
                gamma[p] = (gamma[p] + 3) & 3;
            }
        }
    }

    BitMatrix F, G, M;
    std::vector<std::uint8_t> gamma;
};

/// n-qubit stabilizer state with exact global phase.
class StabilizerStateCH {
   public:
    /// Prepares |0...0> with omega = 1.
    explicit StabilizerStateCH(std::size_t n) : n_(n), c_(n), v_(n), s_(n) {
        if (n == 0) throw std::invalid_argument("stabilizer state needs at least one qubit");
    }

    std::size_t num_qubits() const { return n_; }
    const ExactScalar& omega() const { return omega_; }
    double norm() const { return omega_.magnitude(); }

    // ---- Clifford gates (left multiplication) ----

    void s(std::size_t q) { c_.left_s(check(q)); }
    void sdg(std::size_t q) { c_.left_sdg(check(q)); }
    void z(std::size_t q) { c_.left_z(check(q)); }
    void cx(std::size_t c, std::size_t t) {
        check_pair(c, t);
        c_.left_cx(c, t);
    }
    void cz(std::size_t a, std::size_t b) {
        check_pair(a, b);
        c_.left_cz(a, b);
    }
    void swap(std::size_t a, std::size_t b) {
        cx(a, b);
        cx(b, a);
        cx(a, b);
    }

    void x(std::size_t q) {
        check(q);
        const auto F = c_.F.row(q);
        const auto M = c_.M.row(q);
        const auto v = v_.words();
        auto s = s_.words();
        // U_H (X^F Z^M) U_H acting on |s>; the Z^M factor acts first.
        unsigned e = c_.gamma[q];
        word_t sign = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            sign ^= M[k] & ~v[k] & s[k];
            s[k] ^= M[k] & v[k];
            sign ^= F[k] & v[k] & s[k];
            s[k] ^= F[k] & ~v[k];
        }
        if (std::popcount(sign) & 1) e += 2;
        omega_.mul_i(static_cast<int>(e));
    }
    void y(std::size_t q) {
        // Y = i X Z
        z(q);
        x(q);
        omega_.mul_i(1);
    }

    void h(std::size_t q) {
        check(q);
        const auto F = c_.F.row(q);
        const auto G = c_.G.row(q);
        const auto M = c_.M.row(q);
        const auto v = v_.words();
        const auto s = s_.words();
        BitVec t(n_), u(n_);
        auto tw = t.words();
        auto uw = u.words();
        word_t alpha = 0, beta = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            tw[k] = s[k] ^ (G[k] & v[k]);
            uw[k] = s[k] ^ (F[k] & ~v[k]) ^ (M[k] & v[k]);
            alpha ^= G[k] & ~v[k] & s[k];
            beta ^= (M[k] & ~v[k] & s[k]) ^ (F[k] & v[k] & (M[k] ^ s[k]));
        }
        const unsigned a = std::popcount(alpha) & 1;
        const unsigned bb = std::popcount(beta) & 1;
        if (a) omega_.mul_i(2);
        const unsigned b = (c_.gamma[q] + 2 * a + 2 * bb) & 3;
        if (t == u) {
            // (1 + i^b)/sqrt(2) with b odd for a unitary update.
            if (b == 1) {
                omega_.mul_phase8(1);
            } else if (b == 3) {
                omega_.mul_phase8(7);
            } else {
                throw std::logic_error("Hadamard update produced an unnormalised state");
            }
            s_ = t;
        } else {
            update_basis(t, u, b);
        }
    }

    void apply(const CliffordGate& g) {
        g.validate(n_);
        switch (g.kind) {
            case GateKind::H: h(g.q0); break;
            case GateKind::S: s(g.q0); break;
            case GateKind::Sdg: sdg(g.q0); break;
            case GateKind::X: x(g.q0); break;
            case GateKind::Y: y(g.q0); break;
            case GateKind::Z: z(g.q0); break;
            case GateKind::CX: cx(g.q0, g.q1); break;
            case GateKind::CZ: cz(g.q0, g.q1); break;
            case GateKind::SWAP: swap(g.q0, g.q1); break;
        }
    }

    // ---- Pauli operations ----

    /// |phi> <- P |phi>, phase of P included.
    void apply_pauli(const PauliOperator& p) {
        check_size(p);
        p.z.for_each_set([&](std::size_t j) { c_.left_z(j); });
        p.x.for_each_set([&](std::size_t j) { x(j); });
        omega_.mul_i(static_cast<int>(p.xz_phase()));
    }

    /// <phi|P|phi> for Hermitian P (exactly -|omega|^2, 0 or +|omega|^2).
    double expectation(const PauliOperator& p) const {
        const auto [a, e] = reduce(p);
        if (a.any()) return 0.0;
        if (e & 1) throw std::logic_error("expectation of a Hermitian Pauli is imaginary");
        const double n2 = omega_.magnitude() * omega_.magnitude();
        return e == 0 ? n2 : -n2;
    }

    /// <phi| (I + sign P)/2 |phi>.
    double projector_overlap(const PauliOperator& p, int sign) const {
        require_hermitian(p);
        const double n2 = omega_.magnitude() * omega_.magnitude();
        return 0.5 * (n2 + (sign >= 0 ? 1.0 : -1.0) * expectation(p));
    }

    /// |phi> <- (I + sign P)/2 |phi> / sqrt(q); throws if q = 0.
    void project(const PauliOperator& p, int sign) {
        require_hermitian(p);
        const auto [a, e] = reduce(p);
        const unsigned b = (e + (sign >= 0 ? 0u : 2u)) & 3;
        if (a.none()) {
            if (b != 0) throw std::domain_error("projection onto a zero-probability branch");
            return;
        }
        // (|s> + i^b |s^a>)/2 renormalised by sqrt(2).
        BitVec u = s_ ^ a;
        BitVec t = s_;
        update_basis(t, u, b);
    }

    // ---- amplitudes and overlaps ----

    /// <x|phi>.
    ExactScalar amplitude(const BitVec& xs) const {
        if (omega_.zero) return ExactScalar::null();
        BitVec px(n_), pz(n_);
        unsigned e = 0;
        xs.for_each_set([&](std::size_t j) {
            if (bitops::and_parity(pz.words(), c_.F.row(j))) e += 2;
            bitops::xor_into(px.words(), c_.F.row(j));
            bitops::xor_into(pz.words(), c_.M.row(j));
            e += c_.gamma[j];
        });
        const auto v = v_.words();
        const auto s = s_.words();
        const auto pw = px.words();
        word_t sign = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if ((pw[k] ^ s[k]) & ~v[k]) return ExactScalar::null();
            sign ^= pw[k] & s[k] & v[k];
        }
        ExactScalar amp = omega_;
        amp.mul_i(-static_cast<int>(e % 4));
        if (std::popcount(sign) & 1) amp.mul_i(2);
        amp.sqrt2_power -= static_cast<int>(v_.popcount());
        return amp;
    }

    /// Dense amplitude vector; qubit k is bit k of the index.
    std::vector<std::complex<double>> to_dense(std::size_t cap = 12) const {
        if (n_ > cap) throw std::length_error("to_dense: qubit count above cap");
        std::vector<std::complex<double>> out(std::size_t{1} << n_);
        BitVec xs(n_);
        for (std::size_t idx = 0; idx < out.size(); ++idx) {
            for (std::size_t k = 0; k < n_; ++k) xs.set(k, (idx >> k) & 1);
            out[idx] = amplitude(xs).value();
        }
        return out;
    }

    /// <this|ket> computed exactly by undoing this state's C and H layers on a copy of ket.
    ExactScalar inner_product_exact(const StabilizerStateCH& ket) const {
        if (ket.n_ != n_) throw std::invalid_argument("inner product of states with different sizes");
        if (omega_.zero || ket.omega_.zero) return ExactScalar::null();
        StabilizerStateCH work = ket;
        CLayer tab = c_;
        // Reduce tab to the identity with C-type gates g_1..g_m applied on the left; the same
        // sequence applied to work realises U_C^-1.
        for (std::size_t j = 0; j < n_; ++j) {
            if (!tab.G.get(j, j)) {
                std::size_t i = j + 1;
                while (i < n_ && !tab.G.get(i, j)) ++i;
                if (i == n_) throw std::logic_error("singular C-layer tableau");
                tab.left_cx(i, j);
                work.c_.left_cx(i, j);
            }
            for (std::size_t k = 0; k < n_; ++k) {
                if (k != j && tab.G.get(k, j)) {
                    tab.left_cx(j, k);
                    work.c_.left_cx(j, k);
                }
            }
        }
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t b = a + 1; b < n_; ++b) {
                if (tab.M.get(a, b)) {
                    tab.left_cz(a, b);
                    work.c_.left_cz(a, b);
                }
            }
            if (tab.M.get(a, a)) {
                tab.left_s(a);
                work.c_.left_s(a);
            }
        }
        for (std::size_t q = 0; q < n_; ++q) {
            if (tab.gamma[q] == 2) {
                work.c_.left_z(q);
            } else if (tab.gamma[q] != 0) {
                throw std::logic_error("C-layer reduction left an odd phase");
            }
        }
        v_.for_each_set([&](std::size_t q) { work.h(q); });
        return omega_.conj() * work.amplitude(s_);
    }

    const CLayer& c_layer() const { return c_; }
    const BitVec& h_layer() const { return v_; }
    const BitVec& basis() const { return s_; }

   private:
    std::size_t check(std::size_t q) const {
        if (q >= n_) throw std::out_of_range("qubit index out of range");
        return q;
    }
    void check_pair(std::size_t a, std::size_t b) const {
        check(a);
        check(b);
        if (a == b) throw std::invalid_argument("two-qubit gate indices must differ");
    }
    void check_size(const PauliOperator& p) const {
        if (p.num_qubits() != n_) throw std::invalid_argument("Pauli size does not match state");
    }
    void require_hermitian(const PauliOperator& p) const {
        check_size(p);
        if (!p.hermitian()) throw std::invalid_argument("Pauli operator is not Hermitian");
    }

    /// Pulls P through U_C and U_H. Returns (a, e) with U_H U_C^-1 P U_C U_H |s> = i^e |s ^ a>.
    std::pair<BitVec, unsigned> reduce(const PauliOperator& p) const {
        check_size(p);
        BitVec rx(n_), rz(n_);
        unsigned e = p.xz_phase();
        p.x.for_each_set([&](std::size_t j) {
            if (bitops::and_parity(rz.words(), c_.F.row(j))) e += 2;
            bitops::xor_into(rx.words(), c_.F.row(j));
            bitops::xor_into(rz.words(), c_.M.row(j));
            e += c_.gamma[j];
        });
        p.z.for_each_set([&](std::size_t j) { bitops::xor_into(rz.words(), c_.G.row(j)); });
        // Hadamard layer: X <-> Z on v, with a sign for every Y.
        BitVec a(n_), bz(n_);
        auto aw = a.words();
        auto bw = bz.words();
        const auto v = v_.words();
        const auto xw = rx.words();
        const auto zw = rz.words();
        const auto s = s_.words();
        word_t ys = 0, zs = 0;
        for (std::size_t k = 0; k < aw.size(); ++k) {
            aw[k] = (xw[k] & ~v[k]) | (zw[k] & v[k]);
            bw[k] = (zw[k] & ~v[k]) | (xw[k] & v[k]);
            ys ^= v[k] & xw[k] & zw[k];
            zs ^= bw[k] & s[k];
        }
        if (std::popcount(ys) & 1) e += 2;
        if (std::popcount(zs) & 1) e += 2;
        return {std::move(a), e & 3};
    }

    /// Replaces U_H|s> by U_H (|t> + i^b |u>)/sqrt(2), t != u, restoring canonical form.
    void update_basis(const BitVec& t_in, const BitVec& u_in, unsigned b) {
        BitVec t = t_in, u = u_in;
        b &= 3;
        BitVec diff = t ^ u;
        BitVec nu0 = diff & ~v_;
        BitVec nu1 = diff & v_;
        std::size_t q;
        if (nu0.any()) {
            q = nu0.first_set();
            nu0.flip(q);
            if (nu0.any()) c_.right_cx_from(q, nu0);
            if (nu1.any()) c_.right_cz(q, nu1);
        } else {
            q = nu1.first_set();
            nu1.flip(q);
            if (nu1.any()) c_.right_cx_into(q, nu1);
        }
        if (t[q]) {
            s_ = u;
            omega_.mul_i(static_cast<int>(b));
            b = (4 - b) & 3;
        } else {
            s_ = t;
        }
        // H^a S^b |+> = eta^e1 S^e2 H^e3 |e4>, eta = exp(i pi/4).
        const bool a = v_[q];
        const bool bodd = b & 1;
        const int e1 = (a && bodd) ? (b == 1 ? 1 : 7) : 0;
        const bool e3 = a ? bodd : true;
        const bool e4 = a ? (b == 1 || b == 2) : (b >= 2);
        s_.set(q, e4);
        v_.set(q, e3);
        omega_.mul_phase8(e1);
        if (bodd) c_.right_s(q);
    }

    std::size_t n_;
    CLayer c_;
    BitVec v_, s_;
    ExactScalar omega_;
};

// ---- value-style entry points ----

inline StabilizerStateCH init_zero(std::size_t n) { return StabilizerStateCH(n); }

inline StabilizerStateCH apply_clifford(StabilizerStateCH state, const CliffordGate& g) {
    state.apply(g);
    return state;
}

inline StabilizerStateCH apply_pauli(StabilizerStateCH state, const PauliOperator& p) {
    state.apply_pauli(p);
    return state;
}

inline StabilizerStateCH project(StabilizerStateCH state, const PauliOperator& p, int sign) {
    state.project(p, sign);
    return state;
}

inline double projector_overlap(const StabilizerStateCH& state, const PauliOperator& p, int sign) {
    return state.projector_overlap(p, sign);
}

/// <bra|ket>.
inline std::complex<double> inner_product(const StabilizerStateCH& bra, const StabilizerStateCH& ket) {
    return bra.inner_product_exact(ket).value();
}

}  // namespace qcsim
