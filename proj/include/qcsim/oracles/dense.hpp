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

// Brute-force reference simulators for tests. Qubit k is bit k of a basis index.

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qcsim/channel.hpp"
#include "qcsim/circuit.hpp"
#include "qcsim/clifford.hpp"
#include "qcsim/pauli.hpp"

namespace qcsim::oracle {

/// Square matrix, row-major.
struct Matrix {
    std::size_t dim = 0;
    std::vector<cplx> a;

    explicit Matrix(std::size_t d = 0) : dim(d), a(d * d) {}
    static Matrix identity(std::size_t d) {
        Matrix m(d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }
    cplx& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    cplx operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix m(x.dim);
        for (std::size_t i = 0; i < x.dim; ++i)
            for (std::size_t k = 0; k < x.dim; ++k) {
                const cplx v = x(i, k);
                if (v == cplx{}) continue;
                for (std::size_t j = 0; j < x.dim; ++j) m(i, j) += v * y(k, j);
            }
        return m;
    }
    Matrix adjoint() const {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
};

/// Matrix of a Clifford gate on local qubits 0 (and 1).
inline Matrix gate_matrix(GateKind k) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx I{0.0, 1.0};
    Matrix m(is_two_qubit(k) ? 4 : 2);
    switch (k) {
        case GateKind::H: m(0, 0) = r; m(0, 1) = r; m(1, 0) = r; m(1, 1) = -r; break;
        case GateKind::S: m(0, 0) = 1; m(1, 1) = I; break;
        case GateKind::Sdg: m(0, 0) = 1; m(1, 1) = -I; break;
        case GateKind::X: m(0, 1) = 1; m(1, 0) = 1; break;
        case GateKind::Y: m(0, 1) = -I; m(1, 0) = I; break;
        case GateKind::Z: m(0, 0) = 1; m(1, 1) = -1; break;
        case GateKind::CX:
            // control = local qubit 0 (bit 0), target = bit 1
            for (std::size_t b = 0; b < 4; ++b) m((b & 1) ? (b ^ 2) : b, b) = 1;
            break;
        case GateKind::CZ:
            for (std::size_t b = 0; b < 4; ++b) m(b, b) = (b == 3) ? -1.0 : 1.0;
            break;
        case GateKind::SWAP:
            for (std::size_t b = 0; b < 4; ++b) m(((b & 1) << 1) | (b >> 1), b) = 1;
            break;
    }
    return m;
}

/// Applies a 2^k x 2^k operator on the listed qubits to the n-qubit vector stored at
/// data[i * stride]. If conj_op is set the complex conjugate of the operator is used.
inline void apply_local(cplx* data, std::size_t stride, std::size_t n, const Matrix& op,
                        const std::vector<std::uint32_t>& qubits, bool conj_op = false) {
    const std::size_t k = qubits.size();
    const std::size_t sub = std::size_t{1} << k;
    if (op.dim != sub) throw std::invalid_argument("operator dimension does not match qubit list");
    std::size_t mask = 0;
    for (auto q : qubits) mask |= std::size_t{1} << q;
    std::vector<std::size_t> offs(sub);
    for (std::size_t l = 0; l < sub; ++l) {
        std::size_t o = 0;
        for (std::size_t b = 0; b < k; ++b)
            if ((l >> b) & 1) o |= std::size_t{1} << qubits[b];
        offs[l] = o;
    }
    std::vector<cplx> in(sub), out(sub);
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & mask) continue;
        for (std::size_t l = 0; l < sub; ++l) in[l] = data[(base | offs[l]) * stride];
        for (std::size_t r = 0; r < sub; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < sub; ++c) acc += (conj_op ? std::conj(op(r, c)) : op(r, c)) * in[c];
            out[r] = acc;
        }
        for (std::size_t l = 0; l < sub; ++l) data[(base | offs[l]) * stride] = out[l];
    }
}

inline std::size_t to_mask(const BitVec& b) {
    std::size_t m = 0;
    b.for_each_set([&](std::size_t q) { m |= std::size_t{1} << q; });
    return m;
}

/// Applies P (or conj(P)) to the strided vector: P|b> = i^e (-1)^{z.b} |b ^ x>.
inline void apply_pauli_strided(cplx* data, std::size_t stride, std::size_t n, const PauliOperator& P,
                                bool conj_op = false) {
    const std::size_t xm = to_mask(P.x), zm = to_mask(P.z);
    static const cplx kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    cplx ph = kI[P.xz_phase()];
    if (conj_op) ph = std::conj(ph);
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> out(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        const cplx v = data[b * stride];
        out[b ^ xm] = (std::popcount(zm & b) & 1) ? -ph * v : ph * v;
    }
    for (std::size_t b = 0; b < dim; ++b) data[b * stride] = out[b];
}

/// Dense operator sum_i alpha_i C_i on the channel's k local qubits.
inline Matrix kraus_matrix(const KrausTerm& kt, std::size_t k) {
    const std::size_t d = std::size_t{1} << k;
    Matrix K(d);
    for (const auto& t : kt.terms) {
        Matrix U = Matrix::identity(d);
        for (const auto& g : t.gates) {
            std::vector<std::uint32_t> q = {g.q0};
            if (g.arity() == 2) q.push_back(g.q1);
            for (std::size_t c = 0; c < d; ++c) apply_local(&U(0, c), d, k, gate_matrix(g.kind), q);
        }
        for (std::size_t i = 0; i < K.a.size(); ++i) K.a[i] += t.coeff * U.a[i];
    }
    return K;
}

class DenseStatevector {
   public:
    explicit DenseStatevector(std::size_t n) : n_(n), amp_(std::size_t{1} << n) {
        if (n == 0 || n > 20) throw std::invalid_argument("dense statevector size out of range");
        amp_[0] = 1.0;
    }
    std::size_t num_qubits() const { return n_; }
    const std::vector<cplx>& amplitudes() const { return amp_; }

    void apply(const CliffordGate& g) {
        g.validate(n_);
        std::vector<std::uint32_t> q = {g.q0};
        if (g.arity() == 2) q.push_back(g.q1);
        apply_local(amp_.data(), 1, n_, gate_matrix(g.kind), q);
    }
    void apply_pauli(const PauliOperator& P) { apply_pauli_strided(amp_.data(), 1, n_, P); }

    cplx inner(const DenseStatevector& ket) const {
        cplx s = 0.0;
        for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * ket.amp_[i];
        return s;
    }
    double expectation(const PauliOperator& P) const {
        DenseStatevector t = *this;
        t.apply_pauli(P);
        return inner(t).real();
    }

   private:
    std::size_t n_;
    std::vector<cplx> amp_;
};

/// Density matrix; rho(r, c) stored row-major.
class DenseState {
   public:
    explicit DenseState(std::size_t n) : n_(n), dim_(std::size_t{1} << n), rho_(dim_) {
        if (n == 0 || n > 10) throw std::invalid_argument("dense density matrix limited to 1..10 qubits");
        rho_(0, 0) = 1.0;
    }
    static DenseState from_statevector(const std::vector<cplx>& psi) {
        const std::size_t n = std::countr_zero(psi.size());
        DenseState s(n);
        for (std::size_t r = 0; r < s.dim_; ++r)
            for (std::size_t c = 0; c < s.dim_; ++c) s.rho_(r, c) = psi[r] * std::conj(psi[c]);
        return s;
    }

    std::size_t num_qubits() const { return n_; }
    const Matrix& matrix() const { return rho_; }

    /// rho <- K rho K^dag for K on the listed qubits.
    void conjugate(const Matrix& K, const std::vector<std::uint32_t>& qubits) {
        for (std::size_t c = 0; c < dim_; ++c) apply_local(&rho_(0, c), dim_, n_, K, qubits);
        for (std::size_t r = 0; r < dim_; ++r) apply_local(&rho_(r, 0), 1, n_, K, qubits, true);
    }

    void apply_channel(const ChannelDecomposition& ch, const std::vector<std::uint32_t>& qubits) {
        Matrix acc(dim_);
        for (const auto& k : ch.kraus()) {
            if (k.probability == 0.0) continue;
            DenseState t = *this;
            t.conjugate(kraus_matrix(k, ch.arity()), qubits);
            for (std::size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += k.probability * t.rho_.a[i];
        }
        rho_ = std::move(acc);
    }

    /// Outcome-averaged measurement: (rho + P rho P) / 2.
    void measure_average(const PauliOperator& P) {
        Matrix prp = sandwich(P, rho_);
        for (std::size_t i = 0; i < rho_.a.size(); ++i) rho_.a[i] = 0.5 * (rho_.a[i] + prp.a[i]);
    }

    /// Pi+ rho Pi+ + Q Pi- rho Pi- Q.
    void reset(const PauliOperator& P, const PauliOperator& Q) {
        Matrix plus = projected(P, +1), minus = projected(P, -1);
        minus = sandwich(Q, minus);
        for (std::size_t i = 0; i < rho_.a.size(); ++i) rho_.a[i] = plus.a[i] + minus.a[i];
    }

    /// Pi+ rho Pi+ / Tr(...).
    void postselect(const PauliOperator& P) {
        rho_ = projected(P, +1);
        const double t = trace();
        if (!(t > 0.0)) throw std::domain_error("post-selection on a zero-probability branch");
        for (auto& v : rho_.a) v /= t;
    }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += rho_(i, i).real();
        return t;
    }

    /// Tr(P rho), P Hermitian.
    double expectation(const PauliOperator& P) const {
        Matrix t = rho_;
        for (std::size_t c = 0; c < dim_; ++c) apply_pauli_strided(&t(0, c), dim_, n_, P);
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += t(i, i).real();
        return s;
    }

   private:
    Matrix sandwich(const PauliOperator& P, Matrix m) const {
        for (std::size_t c = 0; c < dim_; ++c) apply_pauli_strided(&m(0, c), dim_, n_, P);
        for (std::size_t r = 0; r < dim_; ++r) apply_pauli_strided(&m(r, 0), 1, n_, P, true);
        return m;
    }
    Matrix projected(const PauliOperator& P, int sign) const {
        Matrix left = rho_, right = rho_;
        for (std::size_t c = 0; c < dim_; ++c) apply_pauli_strided(&left(0, c), dim_, n_, P);
        for (std::size_t r = 0; r < dim_; ++r) apply_pauli_strided(&right(r, 0), 1, n_, P, true);
        Matrix both = sandwich(P, rho_);
        Matrix out(dim_);
        const double s = sign >= 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < out.a.size(); ++i)
            out.a[i] = 0.25 * (rho_.a[i] + s * left.a[i] + s * right.a[i] + both.a[i]);
        return out;
    }

    std::size_t n_;
    std::size_t dim_;
    Matrix rho_;
};

/// Exact evolution of a noisy circuit; measurements are averaged over outcomes.
inline DenseState dense_evolve(const NoisyCircuit& circuit) {
    DenseState st(circuit.num_qubits());
    for (const auto& ev : circuit.events()) {
        if (const auto* u = std::get_if<NoisyUnitary>(&ev)) {
            st.apply_channel(*u->channel, u->qubits);
        } else if (const auto* m = std::get_if<MeasureEvent>(&ev)) {
            st.measure_average(m->P);
        } else if (const auto* r = std::get_if<ResetEvent>(&ev)) {
            st.reset(r->P, r->Q);
        } else if (const auto* p = std::get_if<PostSelectEvent>(&ev)) {
            st.postselect(p->P);
        }
    }
    return st;
}

}  // namespace qcsim::oracle
