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

// Single-qubit logical process tomography: Pauli transfer matrices from the logical
// expectation values of four input states, and the diamond distance to the identity.
//
// Input states are indexed 0_L, 1_L, +_L, -_L, where -_L is the +1 eigenstate of Y_L.
// Observables are indexed X_L, Y_L, Z_L.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace qcsim {

struct ExpectationEntry {
    double mean = 0.0;
    double stddev = 0.0;
    std::uint64_t shots = 0;
};

struct ExpectationTable {
    /// entries[input][observable]; empty slots make the table incomplete.
    std::array<std::array<std::optional<ExpectationEntry>, 3>, 4> entries{};

    void set(std::size_t input, std::size_t obs, ExpectationEntry e) { entries.at(input).at(obs) = e; }
    const ExpectationEntry& at(std::size_t input, std::size_t obs) const {
        const auto& e = entries.at(input).at(obs);
        if (!e) throw std::invalid_argument("expectation table entry missing");
        return *e;
    }
    bool complete() const {
        for (const auto& row : entries)
            for (const auto& e : row)
                if (!e) return false;
        return true;
    }
    /// Entries with |mean| > 1 + 5 stddev, which can only come from high-variance estimates.
    std::size_t out_of_range_count() const {
        std::size_t c = 0;
        for (const auto& row : entries)
            for (const auto& e : row)
                if (e && std::abs(e->mean) > 1.0 + 5.0 * e->stddev) ++c;
        return c;
    }
};

using Mat4 = std::array<std::array<double, 4>, 4>;

struct LogicalChannel {
    Mat4 ptm{};
    Mat4 stddev{};
    int distance = 0;
    double rate = 0.0;
    std::string mode;
    std::uint64_t shots = 0;
};

inline Mat4 identity_ptm() {
    Mat4 m{};
    for (int a = 0; a < 4; ++a) m[a][a] = 1.0;
    return m;
}

inline Mat4 ptm_product(const Mat4& x, const Mat4& y) {
    Mat4 m{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) m[a][b] += x[a][c] * y[c][b];
    return m;
}

/// PTM columns from the input states: the 0_L/1_L pair gives the identity and Z columns, +_L
/// and -_L give the X and Y columns after removing the identity part. Stddevs add linearly.
inline LogicalChannel ptm_from_expectations(const ExpectationTable& t) {
    if (!t.complete()) throw std::invalid_argument("expectation table incomplete");
    LogicalChannel ch;
    ch.ptm[0][0] = 1.0;
    std::uint64_t shots = 0;
    for (std::size_t a = 0; a < 3; ++a) {
        const auto &z0 = t.at(0, a), &z1 = t.at(1, a), &xp = t.at(2, a), &ym = t.at(3, a);
        const double e01 = 0.5 * (z0.stddev + z1.stddev);
        const double id = 0.5 * (z0.mean + z1.mean);
        ch.ptm[a + 1][0] = id;
        ch.ptm[a + 1][1] = xp.mean - id;
        ch.ptm[a + 1][2] = ym.mean - id;
        ch.ptm[a + 1][3] = 0.5 * (z0.mean - z1.mean);
        ch.stddev[a + 1][0] = e01;
        ch.stddev[a + 1][1] = xp.stddev + e01;
        ch.stddev[a + 1][2] = ym.stddev + e01;
        ch.stddev[a + 1][3] = e01;
        shots += z0.shots + z1.shots + xp.shots + ym.shots;
    }
    ch.shots = shots / 3;
    return ch;
}

/// Symmetrises the 0_L/1_L pair so the channel is unital.
inline ExpectationTable force_unital(const ExpectationTable& t) {
    ExpectationTable out = t;
    for (std::size_t a = 0; a < 3; ++a) {
        const auto &z0 = t.at(0, a), &z1 = t.at(1, a);
        const double m = 0.5 * (z0.mean - z1.mean);
        const double e = 0.5 * (z0.stddev + z1.stddev);
        out.entries[0][a] = ExpectationEntry{m, e, z0.shots};
        out.entries[1][a] = ExpectationEntry{-m, e, z1.shots};
    }
    return out;
}

inline LogicalChannel force_unital(const LogicalChannel& c) {
    LogicalChannel out = c;
    for (int a = 1; a < 4; ++a) {
        out.ptm[a][0] = 0.0;
        out.stddev[a][0] = 0.0;
    }
    return out;
}

struct Acceptance {
    bool accepted = true;
    std::array<std::array<bool, 4>, 4> element{};
};

inline constexpr double kAcceptErrorMagnitude = 1e-5;

/// An element passes when it is resolved (2 stddev <= |value|) or indistinguishable from the
/// identity (|value - delta| <= 1e-5).
inline Acceptance acceptability(const LogicalChannel& c) {
    Acceptance a;
    for (int r = 0; r < 4; ++r) {
        for (int s = 0; s < 4; ++s) {
            const double v = c.ptm[r][s];
            const bool ok = 2.0 * c.stddev[r][s] <= std::abs(v) || std::abs(v - (r == s ? 1.0 : 0.0)) <= kAcceptErrorMagnitude;
            a.element[r][s] = ok;
            a.accepted = a.accepted && ok;
        }
    }
    return a;
}

// ---- Choi matrix and diamond distance ----

namespace detail {

inline std::array<Eigen::Matrix2cd, 4> pauli_matrices() {
    using C = std::complex<double>;
    std::array<Eigen::Matrix2cd, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, C(0, -1), C(0, 1), 0;
    p[3] << 1, 0, 0, -1;
    return p;
}

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
}

/// sqrt of the qubit state (I + r.sigma)/2, |r| <= 1.
inline Eigen::Matrix2cd sqrt_state(const std::array<double, 3>& r) {
    const auto P = pauli_matrices();
    const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    const double lp = std::sqrt(std::max(0.0, 0.5 * (1 + n))), lm = std::sqrt(std::max(0.0, 0.5 * (1 - n)));
    Eigen::Matrix2cd s = 0.5 * (lp + lm) * P[0];
    if (n > 0) {
        const double b = 0.5 * (lp - lm) / n;
        for (int k = 0; k < 3; ++k) s += b * r[k] * P[k + 1];
    }
    return s;
}

inline double trace_norm_hermitian(const Eigen::Matrix4cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace detail

/// Choi matrix (output tensor input) of the map with the given PTM, normalised so the identity
/// channel maps to twice the maximally entangled projector.
inline Eigen::Matrix4cd choi_matrix(const Mat4& ptm) {
    const auto P = detail::pauli_matrices();
    Eigen::Matrix4cd J = Eigen::Matrix4cd::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (ptm[a][b] != 0.0) J += 0.5 * ptm[a][b] * detail::kron(P[a], P[b].transpose());
    return J;
}

/// ||(I (x) sqrt(rho)) J (I (x) sqrt(rho))||_1 for the input state with Bloch vector r.
inline double diamond_objective(const Eigen::Matrix4cd& J, const std::array<double, 3>& r) {
    const Eigen::Matrix4cd S = detail::kron(Eigen::Matrix2cd::Identity(), detail::sqrt_state(r));
    const Eigen::Matrix4cd M = S * J * S;
    return detail::trace_norm_hermitian(0.5 * (M + M.adjoint()));
}

/// Diamond norm of (channel - identity), maximised over input states on a grid of the Bloch
/// ball and then refined by a shrinking pattern search.
inline double diamond_error(const Mat4& ptm) {
    for (const auto& row : ptm)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("PTM has non-finite entries");
    Mat4 delta = ptm;
    for (int a = 0; a < 4; ++a) delta[a][a] -= 1.0;
    const Eigen::Matrix4cd J = choi_matrix(delta);

    auto clamp_ball = [](std::array<double, 3> r) {
        const double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        if (n > 1.0)
            for (auto& v : r) v /= n;
        return r;
    };
    std::array<double, 3> best_r{0, 0, 0};
    double best = diamond_objective(J, best_r);
    constexpr int kGrid = 9;
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j)
            for (int k = 0; k < kGrid; ++k) {
                std::array<double, 3> r{-1.0 + 2.0 * i / (kGrid - 1), -1.0 + 2.0 * j / (kGrid - 1),
                                        -1.0 + 2.0 * k / (kGrid - 1)};
                r = clamp_ball(r);
                const double v = diamond_objective(J, r);
                if (v > best) {
                    best = v;
                    best_r = r;
                }
            }
    for (double h = 0.125; h > 1e-9; h *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (int axis = 0; axis < 3; ++axis) {
                for (double sgn : {1.0, -1.0}) {
                    auto r = best_r;
                    r[axis] += sgn * h;
                    r = clamp_ball(r);
                    const double v = diamond_objective(J, r);
                    if (v > best + 1e-15) {
                        best = v;
                        best_r = r;
                        improved = true;
                    }
                }
            }
        }
    }
    return std::min(best, 2.0);
}

struct DiamondEstimate {
    double value = 0.0;
    double stddev = 0.0;  // first-order propagation of the element stddevs
};

/// Diamond error with an error bar from central differences: sum over elements of
/// |dD/dN| * stddev.
inline DiamondEstimate diamond_error_with_uncertainty(const LogicalChannel& c, double step = 1e-4) {
    DiamondEstimate out;
    out.value = diamond_error(c.ptm);
    for (int a = 1; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            if (c.stddev[a][b] == 0.0) continue;
            Mat4 hi = c.ptm, lo = c.ptm;
            hi[a][b] += step;
            lo[a][b] -= step;
            const double g = (diamond_error(hi) - diamond_error(lo)) / (2 * step);
            out.stddev += std::abs(g) * c.stddev[a][b];
        }
    }
    return out;
}

}  // namespace qcsim
