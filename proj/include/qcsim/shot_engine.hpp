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

// Monte Carlo over pairs of sampled Clifford circuits. Each shot draws (r, i, j) for every noisy
// gate, evolves a ket with the i-branch and a bra with the j-branch, and returns the complex
// weight together with <bra|P|ket> for each observable. The mean of weight * <bra|P|ket> is an
// unbiased estimate of Tr(P G(rho)).

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qcsim/ch_state.hpp"
#include "qcsim/circuit.hpp"
#include "qcsim/rng.hpp"

namespace qcsim {

struct MeasureOutcome {
    bool bit = false;  // true for the -1 eigenvalue
    double w = 1.0;    // zero means the shot must be aborted
};

/// Joint measurement of P on ket and bra: one shared outcome, both states renormalised.
inline MeasureOutcome measure_pauli(StabilizerStateCH& ket, StabilizerStateCH& bra, const PauliOperator& P, Rng& rng) {
    const double qip = ket.projector_overlap(P, +1), qim = ket.projector_overlap(P, -1);
    const double qjp = bra.projector_overlap(P, +1), qjm = bra.projector_overlap(P, -1);
    const double a = std::sqrt(qip * qjp), b = std::sqrt(qim * qjm);
    MeasureOutcome out;
    out.w = a + b;
    const double u = uniform01(rng);
    if (out.w == 0.0) return out;
    out.bit = !(u < a / out.w);
    const int sign = out.bit ? -1 : +1;
    ket.project(P, sign);
    bra.project(P, sign);
    return out;
}

/// Measurement followed by Q on both states after a -1 outcome. Returns the weight factor.
inline double reset_pauli(StabilizerStateCH& ket, StabilizerStateCH& bra, const PauliOperator& P,
                          const PauliOperator& Q, Rng& rng) {
    const MeasureOutcome m = measure_pauli(ket, bra, P, rng);
    if (m.w != 0.0 && m.bit) {
        ket.apply_pauli(Q);
        bra.apply_pauli(Q);
    }
    return m.w;
}

struct ShotResult {
    cplx weight{1.0, 0.0};
    BitVec record;
    std::vector<cplx> values;  // <bra|P_k|ket>, without the weight
    bool aborted = false;
    double norm_product = 1.0;         // product of ||alpha||_1^2 over sampled Kraus terms
    double measurement_factor = 1.0;   // product of measurement weight factors
};

namespace detail {

inline void apply_term(StabilizerStateCH& st, const CliffordTerm& t, const std::vector<std::uint32_t>& qubits) {
    for (const auto& g : t.gates) st.apply(g.remapped(qubits));
}

}  // namespace detail

/// Runs one shot. While every sampled term has i == j the ket and bra coincide and only one
/// state is evolved; the bra is split off at the first divergence.
inline ShotResult run_shot(const NoisyCircuit& circuit, const std::vector<PauliOperator>& observables, Rng& rng) {
    const std::size_t n = circuit.num_qubits();
    for (const auto& P : observables) {
        if (P.num_qubits() != n) throw std::invalid_argument("observable size does not match circuit");
        if (!P.hermitian()) throw std::invalid_argument("observable must be Hermitian");
    }
    ShotResult res;
    res.record = BitVec(circuit.num_slots());
    StabilizerStateCH ket(n);
    StabilizerStateCH bra(1);
    bool same = true;

    auto abort = [&] {
        res.aborted = true;
        res.weight = 0.0;
        res.values.clear();
        return res;
    };

    for (const auto& ev : circuit.events()) {
        if (const auto* u = std::get_if<NoisyUnitary>(&ev)) {
            const SampledGateTerm s = u->channel->sample(rng);
            const auto& k = u->channel->kraus()[s.r];
            res.weight *= s.w;
            res.norm_product *= k.one_norm * k.one_norm;
            if (same && s.i != s.j) {
                bra = ket;
                same = false;
            }
            detail::apply_term(ket, k.terms[s.i], u->qubits);
            if (!same) detail::apply_term(bra, k.terms[s.j], u->qubits);
        } else if (const auto* m = std::get_if<MeasureEvent>(&ev)) {
            if (same) {
                const double qp = ket.projector_overlap(m->P, +1);
                const bool bit = !(uniform01(rng) < qp);
                ket.project(m->P, bit ? -1 : +1);
                res.record.set(m->slot, bit);
            } else {
                const MeasureOutcome o = measure_pauli(ket, bra, m->P, rng);
                if (o.w == 0.0) return abort();
                res.weight *= o.w;
                res.measurement_factor *= o.w;
                res.record.set(m->slot, o.bit);
            }
        } else if (const auto* r = std::get_if<ResetEvent>(&ev)) {
            if (same) {
                const double qp = ket.projector_overlap(r->P, +1);
                const bool bit = !(uniform01(rng) < qp);
                ket.project(r->P, bit ? -1 : +1);
                if (bit) ket.apply_pauli(r->Q);
            } else {
                const double w = reset_pauli(ket, bra, r->P, r->Q, rng);
                if (w == 0.0) return abort();
                res.weight *= w;
                res.measurement_factor *= w;
            }
        } else if (const auto* p = std::get_if<PostSelectEvent>(&ev)) {
            ket.project(p->P, +1);
            if (!same) bra.project(p->P, +1);
        }
    }

    res.values.reserve(observables.size());
    if (same) {
        for (const auto& P : observables) res.values.emplace_back(ket.expectation(P), 0.0);
    } else {
        for (const auto& P : observables) {
            StabilizerStateCH pk = ket;
            pk.apply_pauli(P);
            res.values.push_back(bra.inner_product_exact(pk).value());
        }
    }
    return res;
}

struct Estimate {
    cplx mean;
    double stddev = 0.0;     // from the complex-modulus second moment
    double stddev_re = 0.0;  // from the real part only
    std::uint64_t shots = 0;
};

/// Streaming sums per observable. Merging adds the sums, so merge order only matters at the
/// level of floating-point rounding.
class EstimateAccumulator {
   public:
    EstimateAccumulator() = default;
    explicit EstimateAccumulator(std::size_t k) : sum_(k), sum_abs2_(k, 0.0), sum_re2_(k, 0.0) {}

    std::size_t size() const { return sum_.size(); }
    std::uint64_t shots() const { return n_; }

    void add(std::span<const cplx> c) {
        if (c.size() != size()) throw std::invalid_argument("contribution count mismatch");
        for (std::size_t k = 0; k < c.size(); ++k) {
            sum_[k] += c[k];
            sum_abs2_[k] += std::norm(c[k]);
            sum_re2_[k] += c[k].real() * c[k].real();
        }
        ++n_;
    }

    /// A zero-valued sample, e.g. an aborted shot.
    void add_zero() { ++n_; }

    void merge(const EstimateAccumulator& o) {
        if (o.size() != size()) throw std::invalid_argument("accumulator size mismatch");
        for (std::size_t k = 0; k < size(); ++k) {
            sum_[k] += o.sum_[k];
            sum_abs2_[k] += o.sum_abs2_[k];
            sum_re2_[k] += o.sum_re2_[k];
        }
        n_ += o.n_;
    }

    Estimate estimate(std::size_t id) const {
        if (id >= size()) throw std::out_of_range("observable id out of range");
        if (n_ < 2) throw std::domain_error("estimate needs at least two shots");
        const double N = static_cast<double>(n_);
        Estimate e;
        e.shots = n_;
        e.mean = sum_[id] / N;
        e.stddev = std::sqrt(std::max(0.0, sum_abs2_[id] / N - std::norm(e.mean)) / N);
        e.stddev_re = std::sqrt(std::max(0.0, sum_re2_[id] / N - e.mean.real() * e.mean.real()) / N);
        return e;
    }

   private:
    std::vector<cplx> sum_;
    std::vector<double> sum_abs2_, sum_re2_;
    std::uint64_t n_ = 0;
};

inline Estimate estimate(const EstimateAccumulator& acc, std::size_t id) { return acc.estimate(id); }

/// Shots for a target standard error: ceil(prod_l extent_l / eps^2).
inline std::uint64_t shots_needed(double target_epsilon, const NoisyCircuit& circuit) {
    if (!(target_epsilon > 0.0)) throw std::invalid_argument("target epsilon must be positive");
    const double x = circuit.extent_product() / (target_epsilon * target_epsilon);
    return static_cast<std::uint64_t>(std::ceil(x * (1.0 - 1e-12)));
}

struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t point = 0;
    std::uint64_t input = 0;
};

inline constexpr std::uint64_t kShotBlock = 4096;

/// Runs `shots` shots split into fixed blocks. Each block has its own stream keyed by the block
/// index and its own accumulator; blocks are merged in index order, so the result does not
/// depend on the number of workers. shot_fn(rng, out) fills one shot's contributions and returns
/// false for a zero-valued (aborted) shot.
template <typename ShotFn>
EstimateAccumulator run_blocks(std::size_t num_outputs, std::uint64_t shots, const StreamKey& key,
                               unsigned workers, ShotFn&& shot_fn) {
    const std::uint64_t nblocks = (shots + kShotBlock - 1) / kShotBlock;
    std::vector<EstimateAccumulator> blocks(nblocks, EstimateAccumulator(num_outputs));
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        std::vector<cplx> out(num_outputs);
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= nblocks) break;
            Rng rng = make_stream({key.seed, key.point, key.input, b});
            const std::uint64_t count = std::min(kShotBlock, shots - b * kShotBlock);
            for (std::uint64_t s = 0; s < count; ++s) {
                if (shot_fn(rng, std::span<cplx>(out))) {
                    blocks[b].add(out);
                } else {
                    blocks[b].add_zero();
                }
            }
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(nblocks, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    EstimateAccumulator total(num_outputs);
    for (const auto& b : blocks) total.merge(b);
    return total;
}

/// Estimates <P_k> for a circuit without decoding.
inline EstimateAccumulator estimate_observables(const NoisyCircuit& circuit, const std::vector<PauliOperator>& obs,
                                                std::uint64_t shots, const StreamKey& key, unsigned workers = 1) {
    return run_blocks(obs.size(), shots, key, workers, [&](Rng& rng, std::span<cplx> out) {
        const ShotResult r = run_shot(circuit, obs, rng);
        if (r.aborted) return false;
        for (std::size_t k = 0; k < obs.size(); ++k) out[k] = r.weight * r.values[k];
        return true;
    });
}

}  // namespace qcsim
