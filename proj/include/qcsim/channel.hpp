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

// Noisy gates as probability mixtures of Kraus operators, each Kraus operator a weighted sum of
// Clifford circuits on the channel's local qubits 0..k-1:
//
//     G(rho) = sum_r p_r K_r rho K_r^dag,   K_r = sum_i alpha_ri C_ri,   Tr(K_r^dag K_r) = 2^k.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcsim/clifford.hpp"
#include "qcsim/rng.hpp"

namespace qcsim {

using cplx = std::complex<double>;

struct CliffordTerm {
    cplx coeff;
    std::vector<CliffordGate> gates;
};

struct KrausTerm {
    double probability = 0.0;
    std::vector<CliffordTerm> terms;
    double one_norm = 0.0;
};

enum class ChannelKind { UnitaryMixture, Coherent };

struct SampledGateTerm {
    std::size_t r = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    cplx w{1.0, 0.0};
};

class ChannelDecomposition {
   public:
    ChannelDecomposition(std::size_t arity, ChannelKind kind, std::vector<KrausTerm> kraus, std::string label = {})
        : arity_(arity), kind_(kind), kraus_(std::move(kraus)), label_(std::move(label)) {
        if (arity_ == 0) throw std::invalid_argument("channel arity must be positive");
        if (kraus_.empty()) throw std::invalid_argument("channel needs at least one Kraus term");
        double total = 0.0;
        pauli_mixture_ = true;
        for (auto& k : kraus_) {
            if (k.probability < 0.0 || k.probability > 1.0 + 1e-12)
                throw std::invalid_argument("Kraus probability outside [0,1]");
            if (k.terms.empty()) throw std::invalid_argument("Kraus term without Clifford terms");
            k.one_norm = 0.0;
            for (const auto& t : k.terms) {
                for (const auto& g : t.gates) g.validate(arity_);
                k.one_norm += std::abs(t.coeff);
            }
            if (!(k.one_norm > 0.0)) throw std::invalid_argument("Kraus term with zero one-norm");
            total += k.probability;
            cdf_.push_back(total);
            std::vector<double> c;
            double acc = 0.0;
            for (const auto& t : k.terms) {
                acc += std::abs(t.coeff) / k.one_norm;
                c.push_back(acc);
            }
            term_cdf_.push_back(std::move(c));
            if (k.terms.size() != 1) {
                pauli_mixture_ = false;
            } else {
                for (const auto& g : k.terms[0].gates) {
                    if (g.kind != GateKind::X && g.kind != GateKind::Y && g.kind != GateKind::Z)
                        pauli_mixture_ = false;
                }
            }
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("Kraus probabilities do not sum to 1");
    }

    std::size_t arity() const { return arity_; }
    ChannelKind kind() const { return kind_; }
    const std::vector<KrausTerm>& kraus() const { return kraus_; }
    const std::string& label() const { return label_; }

    /// True when every Kraus operator is a single Pauli (so sampling is a plain stochastic choice).
    bool is_pauli_mixture() const { return pauli_mixture_; }

    /// <||alpha||_1^4> over the Kraus distribution.
    double extent_sq4() const {
        double e = 0.0;
        for (const auto& k : kraus_) e += k.probability * std::pow(k.one_norm, 4);
        return e;
    }

    SampledGateTerm sample(Rng& rng) const {
        SampledGateTerm out;
        out.r = pick(cdf_, uniform01(rng));
        const auto& k = kraus_[out.r];
        if (k.terms.size() == 1) {
            const double a = std::abs(k.terms[0].coeff);
            out.w = {a * a, 0.0};
            return out;
        }
        out.i = pick(term_cdf_[out.r], uniform01(rng));
        out.j = pick(term_cdf_[out.r], uniform01(rng));
        const cplx prod = k.terms[out.i].coeff * std::conj(k.terms[out.j].coeff);
        out.w = k.one_norm * k.one_norm * prod / std::abs(prod);
        return out;
    }

   private:
    static std::size_t pick(const std::vector<double>& cdf, double u) {
        for (std::size_t k = 0; k + 1 < cdf.size(); ++k) {
            if (u < cdf[k]) return k;
        }
        return cdf.size() - 1;
    }

    std::size_t arity_;
    ChannelKind kind_;
    std::vector<KrausTerm> kraus_;
    std::string label_;
    std::vector<double> cdf_;
    std::vector<std::vector<double>> term_cdf_;
    bool pauli_mixture_ = false;
};

namespace detail {

/// Diagonal Clifford S^m on local qubit 0 as a gate list.
inline std::vector<CliffordGate> s_power(int m) {
    switch (((m % 4) + 4) % 4) {
        case 1: return {gate1(GateKind::S, 0)};
        case 2: return {gate1(GateKind::Z, 0)};
        case 3: return {gate1(GateKind::Sdg, 0)};
        default: return {};
    }
}

inline KrausTerm pauli_kraus(double p, std::vector<CliffordGate> gates) {
    return {p, {CliffordTerm{{1.0, 0.0}, std::move(gates)}}, 1.0};
}

inline void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
}

}  // namespace detail

/// Coherent rotation exp(-i theta Z / 2), decomposed with minimal Clifford one-norm.
inline ChannelDecomposition dephasing_channel(double theta) {
    using std::numbers::pi;
    if (!std::isfinite(theta)) throw std::invalid_argument("dephasing angle must be finite");
    // period 4 pi: reducing mod 2 pi alone would lose a global sign
    double t = std::fmod(theta, 4 * pi);
    if (t < 0) t += 4 * pi;
    int k = static_cast<int>(std::floor(t / (pi / 2)));
    double rest = t - k * (pi / 2);
    if (k > 7) {
        k = 7;
        rest = t - 7 * (pi / 2);
    }
    // exp(-i k pi/4 Z) = exp(-i k pi/4) S^k
    cplx global = std::polar(1.0, -k * pi / 4);
    const double r2 = std::numbers::sqrt2;
    std::vector<CliffordTerm> terms;
    if (rest <= pi / 4) {
        // (c - s) I + sqrt(2) e^{-i pi/4} s S
        const double c = std::cos(rest / 2), s = std::sin(rest / 2);
        if (c - s != 0.0) terms.push_back({global * (c - s), detail::s_power(k)});
        if (s != 0.0) terms.push_back({global * std::polar(r2 * s, -pi / 4), detail::s_power(k + 1)});
    } else {
        // exp(-i rest Z/2) = e^{-i pi/4} S exp(+i phi Z/2), phi = pi/2 - rest,
        // exp(+i phi Z/2) = (c - s) I + sqrt(2) e^{i pi/4} s S^dag
        const double phi = pi / 2 - rest;
        const double c = std::cos(phi / 2), s = std::sin(phi / 2);
        global *= std::polar(1.0, -pi / 4);
        if (c - s != 0.0) terms.push_back({global * (c - s), detail::s_power(k + 1)});
        if (s != 0.0) terms.push_back({global * std::polar(r2 * s, pi / 4), detail::s_power(k)});
    }
    return ChannelDecomposition(1, ChannelKind::Coherent, {KrausTerm{1.0, std::move(terms), 0.0}},
                                "dephasing(" + std::to_string(theta) + ")");
}

/// one_norm of the dephasing decomposition for angle theta.
inline double dephasing_one_norm(double theta) { return dephasing_channel(theta).kraus()[0].one_norm; }

/// Pauli twirl of the rotation: Z with probability sin^2(theta/2).
inline ChannelDecomposition twirled_dephasing(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("dephasing angle must be finite");
    const double s = std::sin(theta / 2);
    const double pz = s * s;
    return ChannelDecomposition(1, ChannelKind::UnitaryMixture,
                                {detail::pauli_kraus(1.0 - pz, {}), detail::pauli_kraus(pz, {gate1(GateKind::Z, 0)})},
                                "twirled_dephasing(" + std::to_string(theta) + ")");
}

/// Uniform depolarizing noise on 1 or 2 qubits with total error probability p.
inline ChannelDecomposition depolarizing(double p, std::size_t arity) {
    detail::check_probability(p);
    if (arity != 1 && arity != 2) throw std::invalid_argument("depolarizing arity must be 1 or 2");
    static constexpr GateKind kPaulis[3] = {GateKind::X, GateKind::Y, GateKind::Z};
    std::vector<KrausTerm> kraus;
    kraus.push_back(detail::pauli_kraus(1.0 - p, {}));
    if (arity == 1) {
        for (GateKind g : kPaulis) kraus.push_back(detail::pauli_kraus(p / 3, {gate1(g, 0)}));
    } else {
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                if (a == 0 && b == 0) continue;
                std::vector<CliffordGate> gates;
                if (a) gates.push_back(gate1(kPaulis[a - 1], 0));
                if (b) gates.push_back(gate1(kPaulis[b - 1], 1));
                kraus.push_back(detail::pauli_kraus(p / 15, std::move(gates)));
            }
        }
    }
    return ChannelDecomposition(arity, ChannelKind::UnitaryMixture, std::move(kraus),
                                "depolarizing" + std::to_string(arity) + "(" + std::to_string(p) + ")");
}

inline ChannelDecomposition bitflip(double p) {
    detail::check_probability(p);
    return ChannelDecomposition(1, ChannelKind::UnitaryMixture,
                                {detail::pauli_kraus(1.0 - p, {}), detail::pauli_kraus(p, {gate1(GateKind::X, 0)})},
                                "bitflip(" + std::to_string(p) + ")");
}

/// A noiseless Clifford as a channel with one term.
inline ChannelDecomposition clifford_channel(std::size_t arity, std::vector<CliffordGate> gates) {
    return ChannelDecomposition(arity, ChannelKind::UnitaryMixture, {detail::pauli_kraus(1.0, std::move(gates))},
                                "clifford");
}

inline double clifford_extent_sq4(const ChannelDecomposition& ch) { return ch.extent_sq4(); }

inline SampledGateTerm sample_term(const ChannelDecomposition& ch, Rng& rng) { return ch.sample(rng); }

}  // namespace qcsim
