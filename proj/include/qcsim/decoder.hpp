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

// Unit-weight matching decoder on the detector graph implied by the parity check matrix.
// Each stabilizer type has its own graph: nodes (k, r) for the k-th stabilizer of that type in
// round r, plus one boundary node. Space edges are data qubits (weight-2 PCM columns join two
// detectors, weight-1 columns join the boundary); time edges join (k, r) and (k, r+1).

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <stdexcept>
#include <vector>

#include "qcsim/bits.hpp"
#include "qcsim/surface_code.hpp"

namespace qcsim {

struct GraphEdge {
    std::uint32_t a, b;
    std::int32_t data;  // data qubit label, -1 for a time edge
};

/// Matching cost: total hop weight, then number of boundary matches. Comparing the pair
/// lexicographically prefers defect pairs over two boundary matches of equal weight.
struct MatchCost {
    std::uint32_t weight = 0;
    std::uint32_t boundary = 0;

    friend bool operator<(const MatchCost& x, const MatchCost& y) {
        return x.weight != y.weight ? x.weight < y.weight : x.boundary < y.boundary;
    }
    friend MatchCost operator+(MatchCost x, const MatchCost& y) { return {x.weight + y.weight, x.boundary + y.boundary}; }
    bool operator==(const MatchCost&) const = default;
};

class DecodingGraph {
   public:
    DecodingGraph(const SurfaceCodePatch& patch, StabType type, std::size_t rounds)
        : type_(type), stabs_(patch.stabilizers_of(type)), rounds_(rounds), num_data_(patch.num_data()) {
        if (rounds < 1) throw std::invalid_argument("decoding graph needs at least one round");
        const std::size_t S = stabs_.size();
        const std::uint32_t B = static_cast<std::uint32_t>(num_detectors());
        std::vector<std::vector<std::size_t>> touching(num_data_);
        for (std::size_t k = 0; k < S; ++k)
            for (auto q : patch.stabilizers()[stabs_[k]].support) touching[q].push_back(k);
        for (std::size_t r = 0; r < rounds_; ++r) {
            for (std::size_t q = 0; q < num_data_; ++q) {
                const auto& t = touching[q];
                if (t.empty() || t.size() > 2) throw std::logic_error("data qubit with unexpected check weight");
                const std::uint32_t a = node(t[0], r);
                const std::uint32_t b = t.size() == 2 ? node(t[1], r) : B;
                edges_.push_back({a, b, static_cast<std::int32_t>(q)});
            }
        }
        for (std::size_t r = 0; r + 1 < rounds_; ++r)
            for (std::size_t k = 0; k < S; ++k) edges_.push_back({node(k, r), node(k, r + 1), -1});
        precompute();
    }

    StabType type() const { return type_; }
    std::size_t rounds() const { return rounds_; }
    std::size_t num_stabilizers() const { return stabs_.size(); }
    const std::vector<std::size_t>& stabilizers() const { return stabs_; }
    std::size_t num_detectors() const { return stabs_.size() * rounds_; }
    std::size_t boundary() const { return num_detectors(); }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    std::size_t num_data() const { return num_data_; }

    std::uint32_t node(std::size_t k, std::size_t r) const { return static_cast<std::uint32_t>(r * stabs_.size() + k); }

    /// Hop distance between detectors along paths that avoid the boundary node.
    std::uint32_t distance(std::size_t u, std::size_t v) const { return dist_[u * num_detectors() + v]; }
    std::uint32_t boundary_distance(std::size_t u) const { return bdist_[u]; }
    /// Data-qubit labels along the canonical shortest path.
    const BitVec& path_correction(std::size_t u, std::size_t v) const { return pcorr_[u * num_detectors() + v]; }
    const BitVec& boundary_correction(std::size_t u) const { return bcorr_[u]; }

    /// Edge list dump, one "a b label" line per edge; the boundary node is written as B.
    std::string dump() const {
        std::string s;
        for (const auto& e : edges_) {
            s += std::to_string(e.a) + ' ' + (e.b == boundary() ? std::string("B") : std::to_string(e.b)) + ' ' +
                 (e.data < 0 ? std::string("M") : "D" + std::to_string(e.data)) + '\n';
        }
        return s;
    }

   private:
    void precompute() {
        const std::size_t N = num_detectors();
        const std::size_t B = boundary();
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(N + 1);
        for (std::uint32_t e = 0; e < edges_.size(); ++e) {
            adj[edges_[e].a].push_back({edges_[e].b, e});
            adj[edges_[e].b].push_back({edges_[e].a, e});
        }
        constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
        dist_.assign(N * N, kInf);
        pcorr_.assign(N * N, BitVec(num_data_));
        bdist_.assign(N, kInf);
        bcorr_.assign(N, BitVec(num_data_));
        std::vector<std::uint32_t> d(N + 1), parent(N + 1);
        for (std::size_t src = 0; src <= N; ++src) {
            const bool from_boundary = (src == B);
            std::fill(d.begin(), d.end(), kInf);
            std::fill(parent.begin(), parent.end(), kInf);
            std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(src)};
            d[src] = 0;
            while (!queue.empty()) {
                const auto u = queue.front();
                queue.pop_front();
                for (const auto& [v, e] : adj[u]) {
                    if (!from_boundary && v == B) continue;
                    if (d[v] != kInf) continue;
                    d[v] = d[u] + 1;
                    parent[v] = e;
                    queue.push_back(v);
                }
            }
            for (std::size_t t = 0; t < N; ++t) {
                if (d[t] == kInf) throw std::logic_error("disconnected decoding graph");
                BitVec corr(num_data_);
                std::size_t cur = t;
                while (cur != src) {
                    const auto& e = edges_[parent[cur]];
                    if (e.data >= 0) corr.flip(static_cast<std::size_t>(e.data));
                    cur = (e.a == cur) ? e.b : e.a;
                }
                if (from_boundary) {
                    bdist_[t] = d[t];
                    bcorr_[t] = std::move(corr);
                } else {
                    dist_[src * N + t] = d[t];
                    pcorr_[src * N + t] = std::move(corr);
                }
            }
        }
    }

    StabType type_;
    std::vector<std::size_t> stabs_;
    std::size_t rounds_;
    std::size_t num_data_;
    std::vector<GraphEdge> edges_;
    std::vector<std::uint32_t> dist_, bdist_;
    std::vector<BitVec> pcorr_, bcorr_;
};

inline DecodingGraph build_graph(const SurfaceCodePatch& patch, StabType type, std::size_t rounds) {
    return DecodingGraph(patch, type, rounds);
}

/// Detector bits of one graph: outcome of (s, r) XOR outcome of (s, r-1), with the preparation
/// projection standing in for round -1.
inline BitVec detectors_from_record(const BitVec& record, const DetectorLayout& lay, const DecodingGraph& g) {
    if (g.rounds() != lay.rounds) throw std::invalid_argument("graph and layout round counts differ");
    BitVec syn(g.num_detectors());
    for (std::size_t k = 0; k < g.num_stabilizers(); ++k) {
        const std::size_t s = g.stabilizers()[k];
        bool prev = record[lay.reference_offset + s];
        for (std::size_t r = 0; r < lay.rounds; ++r) {
            const bool cur = record[lay.slot(r, s)];
            if (cur != prev) syn.set(g.node(k, r), true);
            prev = cur;
        }
    }
    return syn;
}

/// One matched pair; partner == boundary for a boundary match.
struct Match {
    std::size_t u, partner;
};

struct Matching {
    std::vector<Match> matches;
    MatchCost cost;
};

namespace detail {

inline MatchCost pair_cost(const DecodingGraph& g, std::size_t u, std::size_t v) { return {g.distance(u, v), 0}; }
inline MatchCost boundary_cost(const DecodingGraph& g, std::size_t u) { return {g.boundary_distance(u), 1}; }

inline void branch_and_bound(const DecodingGraph& g, const std::vector<std::size_t>& defects, std::vector<bool>& used,
                             std::vector<Match>& cur, MatchCost cost, Matching& best) {
    std::size_t i = 0;
    while (i < defects.size() && used[i]) ++i;
    if (i == defects.size()) {
        if (best.matches.empty() || cost < best.cost) {
            best.cost = cost;
            best.matches = cur;
        }
        return;
    }
    // Lower bound: every open defect pays at least half its cheapest pairing or its boundary hop.
    double lb = cost.weight;
    for (std::size_t k = i; k < defects.size(); ++k) {
        if (used[k]) continue;
        double m = g.boundary_distance(defects[k]);
        for (std::size_t l = 0; l < defects.size(); ++l)
            if (l != k && !used[l]) m = std::min(m, 0.5 * g.distance(defects[k], defects[l]));
        lb += m;
    }
    if (!best.matches.empty() && lb > best.cost.weight) return;
    used[i] = true;
    cur.push_back({defects[i], g.boundary()});
    branch_and_bound(g, defects, used, cur, cost + boundary_cost(g, defects[i]), best);
    cur.pop_back();
    for (std::size_t j = i + 1; j < defects.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        cur.push_back({defects[i], defects[j]});
        branch_and_bound(g, defects, used, cur, cost + pair_cost(g, defects[i], defects[j]), best);
        cur.pop_back();
        used[j] = false;
    }
    used[i] = false;
}

}  // namespace detail

inline constexpr std::size_t kMaxDpDefects = 20;

/// Exact minimum-cost matching of fired detectors to each other or to the boundary. Bitmask
/// dynamic programming up to kMaxDpDefects defects, branch and bound beyond. Ties go to the
/// option found first: boundary before pairs, partners in ascending detector order.
inline Matching match_defects(const DecodingGraph& g, const std::vector<std::size_t>& defects) {
    Matching out;
    const std::size_t m = defects.size();
    if (m == 0) return out;
    if (m > kMaxDpDefects) {
        std::vector<bool> used(m, false);
        std::vector<Match> cur;
        detail::branch_and_bound(g, defects, used, cur, {}, out);
        return out;
    }
    const std::size_t full = (std::size_t{1} << m) - 1;
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
    std::vector<MatchCost> best(full + 1, MatchCost{kUnset, 0});
    std::vector<std::uint8_t> choice(full + 1, 0);  // partner index, or m for boundary
    best[0] = {0, 0};
    for (std::size_t mask = 1; mask <= full; ++mask) {
        const std::size_t i = std::countr_zero(mask);
        const std::size_t rest = mask & ~(std::size_t{1} << i);
        MatchCost bc = best[rest] + detail::boundary_cost(g, defects[i]);
        std::uint8_t ch = static_cast<std::uint8_t>(m);
        for (std::size_t r = rest; r; r &= r - 1) {
            const std::size_t j = std::countr_zero(r);
            const MatchCost c = best[rest & ~(std::size_t{1} << j)] + detail::pair_cost(g, defects[i], defects[j]);
            if (c < bc) {
                bc = c;
                ch = static_cast<std::uint8_t>(j);
            }
        }
        best[mask] = bc;
        choice[mask] = ch;
    }
    out.cost = best[full];
    for (std::size_t mask = full; mask;) {
        const std::size_t i = std::countr_zero(mask);
        const std::size_t j = choice[mask];
        mask &= ~(std::size_t{1} << i);
        if (j == m) {
            out.matches.push_back({defects[i], g.boundary()});
        } else {
            out.matches.push_back({defects[i], defects[j]});
            mask &= ~(std::size_t{1} << j);
        }
    }
    return out;
}

/// Brute-force minimum matching cost over all matchings (test oracle).
inline MatchCost brute_force_matching_cost(const DecodingGraph& g, const std::vector<std::size_t>& defects) {
    MatchCost best{std::numeric_limits<std::uint32_t>::max(), 0};
    std::vector<bool> used(defects.size(), false);
    auto rec = [&](auto&& self, MatchCost cost) -> void {
        std::size_t i = 0;
        while (i < defects.size() && used[i]) ++i;
        if (i == defects.size()) {
            if (cost < best) best = cost;
            return;
        }
        used[i] = true;
        self(self, cost + detail::boundary_cost(g, defects[i]));
        for (std::size_t j = i + 1; j < defects.size(); ++j) {
            if (used[j]) continue;
            used[j] = true;
            self(self, cost + detail::pair_cost(g, defects[i], defects[j]));
            used[j] = false;
        }
        used[i] = false;
    };
    rec(rec, MatchCost{});
    return best;
}

/// Data-qubit Pauli correction: x bits fix X errors (found by Z checks), z bits fix Z errors.
struct Correction {
    BitVec x, z;
};

/// Correction bits inferred by one graph from its syndrome.
inline BitVec decode(const DecodingGraph& g, const BitVec& syndrome) {
    if (syndrome.size() != g.num_detectors()) throw std::invalid_argument("syndrome size mismatch");
    std::vector<std::size_t> defects;
    syndrome.for_each_set([&](std::size_t u) { defects.push_back(u); });
    BitVec corr(g.num_data());
    for (const auto& mt : match_defects(g, defects).matches) {
        if (mt.partner == g.boundary()) {
            corr ^= g.boundary_correction(mt.u);
        } else {
            corr ^= g.path_correction(mt.u, mt.partner);
        }
    }
    return corr;
}

/// Both graphs of a memory experiment.
class SurfaceDecoder {
   public:
    SurfaceDecoder(const SurfaceCodePatch& patch, const DetectorLayout& layout)
        : layout_(layout), gx_(patch, StabType::X, layout.rounds), gz_(patch, StabType::Z, layout.rounds) {}

    const DecodingGraph& x_graph() const { return gx_; }
    const DecodingGraph& z_graph() const { return gz_; }
    const DetectorLayout& layout() const { return layout_; }

    Correction decode_record(const BitVec& record) const {
        return {decode(gz_, detectors_from_record(record, layout_, gz_)),
                decode(gx_, detectors_from_record(record, layout_, gx_))};
    }

   private:
    DetectorLayout layout_;
    DecodingGraph gx_, gz_;
};

struct LogicalFlips {
    bool x = false, y = false, z = false;

    bool operator[](char which) const { return which == 'X' ? x : which == 'Y' ? y : z; }
};

/// Sign flips of X_L, Y_L, Z_L implied by applying the correction.
inline LogicalFlips logical_flips(const Correction& c, const SurfaceCodePatch& patch) {
    LogicalFlips f;
    for (auto q : patch.x_logical_support()) f.x ^= c.z[q];
    for (auto q : patch.z_logical_support()) f.z ^= c.x[q];
    f.y = f.x ^ f.z;
    return f;
}

}  // namespace qcsim
