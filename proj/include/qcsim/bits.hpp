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

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qcsim {

using word_t = std::uint64_t;

inline constexpr std::size_t words_for(std::size_t nbits) { return (nbits + 63) / 64; }

// Word-span kernels shared by BitVec and BitMatrix rows.
namespace bitops {

inline void xor_into(std::span<word_t> dst, std::span<const word_t> src) {
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
}

inline bool and_parity(std::span<const word_t> a, std::span<const word_t> b) {
    word_t acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) acc ^= a[k] & b[k];
    return std::popcount(acc) & 1;
}

inline bool and3_parity(std::span<const word_t> a, std::span<const word_t> b, std::span<const word_t> c) {
    word_t acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) acc ^= a[k] & b[k] & c[k];
    return std::popcount(acc) & 1;
}

inline bool get(std::span<const word_t> w, std::size_t i) { return (w[i >> 6] >> (i & 63)) & 1; }
inline void flip(std::span<word_t> w, std::size_t i) { w[i >> 6] ^= word_t{1} << (i & 63); }
inline void set(std::span<word_t> w, std::size_t i, bool b) {
    const word_t m = word_t{1} << (i & 63);
    if (b) {
        w[i >> 6] |= m;
    } else {
        w[i >> 6] &= ~m;
    }
}

}  // namespace bitops

/// Fixed-length bit vector backed by 64-bit words. Bits past size() are kept zero.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_(words_for(n), 0) {}

    std::size_t size() const { return n_; }
    std::size_t num_words() const { return w_.size(); }
    std::span<word_t> words() { return w_; }
    std::span<const word_t> words() const { return w_; }

    bool operator[](std::size_t i) const { return bitops::get(w_, i); }
    void set(std::size_t i, bool b) { bitops::set(w_, i, b); }
    void flip(std::size_t i) { bitops::flip(w_, i); }
    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    BitVec& operator^=(const BitVec& o) {
        bitops::xor_into(w_, o.w_);
        return *this;
    }
    BitVec& operator&=(const BitVec& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }
    BitVec& operator|=(const BitVec& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
    friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }

    /// Bitwise complement restricted to the first size() bits.
    BitVec operator~() const {
        BitVec r(n_);
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = ~w_[k];
        r.trim();
        return r;
    }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (word_t w : w_) c += std::popcount(w);
        return c;
    }
    bool parity() const {
        word_t acc = 0;
        for (word_t w : w_) acc ^= w;
        return std::popcount(acc) & 1;
    }
    bool any() const {
        return std::any_of(w_.begin(), w_.end(), [](word_t w) { return w != 0; });
    }
    bool none() const { return !any(); }

    /// Index of the lowest set bit, or size() if empty.
    std::size_t first_set() const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            if (w_[k]) return k * 64 + std::countr_zero(w_[k]);
        }
        return n_;
    }

    template <typename F>
    void for_each_set(F&& f) const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            word_t w = w_[k];
            while (w) {
                f(k * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }

    std::string str() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i) s[i] = (*this)[i] ? '1' : '0';
        return s;
    }

   private:
    void trim() {
        if (n_ % 64 && !w_.empty()) w_.back() &= (word_t{1} << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<word_t> w_;
};

/// Dense GF(2) matrix stored row-major in one contiguous buffer.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), nw_(words_for(cols)), data_(rows * nw_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<word_t> row(std::size_t i) { return {data_.data() + i * nw_, nw_}; }
    std::span<const word_t> row(std::size_t i) const { return {data_.data() + i * nw_, nw_}; }

    bool get(std::size_t i, std::size_t j) const { return bitops::get(row(i), j); }
    void set(std::size_t i, std::size_t j, bool b) { bitops::set(row(i), j, b); }
    void flip(std::size_t i, std::size_t j) { bitops::flip(row(i), j); }

    void xor_row(std::size_t dst, std::size_t src) { bitops::xor_into(row(dst), row(src)); }
    void xor_row(std::size_t dst, std::span<const word_t> src) { bitops::xor_into(row(dst), src); }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

   private:
    std::size_t rows_ = 0, cols_ = 0, nw_ = 0;
    std::vector<word_t> data_;
};

}  // namespace qcsim
