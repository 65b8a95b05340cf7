#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>

#include "phasewave/errors.hpp"

namespace phasewave {

/// Maximum supported phase count. Mode coordinates are packed 16 bits each
/// into a 64-bit key, which bounds nu by 4; convolution supports stay well
/// inside the +-32767 coordinate range.
inline constexpr int kMaxNu = 4;

/// Lattice site m in Z^nu. Immutable value type; |m| is the max norm.
class ModeIndex {
  public:
    ModeIndex() : nu_(1) { c_.fill(0); }

    explicit ModeIndex(int nu) : nu_(nu) {
        check_nu(nu);
        c_.fill(0);
    }

    ModeIndex(std::initializer_list<int> coords) : nu_(static_cast<int>(coords.size())) {
        check_nu(nu_);
        c_.fill(0);
        int i = 0;
        for (int v : coords) c_[static_cast<std::size_t>(i++)] = static_cast<std::int16_t>(v);
    }

    /// Unit vector e_j (j is zero-based).
    static ModeIndex unit(int nu, int j) {
        ModeIndex m(nu);
        m.c_[static_cast<std::size_t>(j)] = 1;
        return m;
    }

    static ModeIndex from_key(int nu, std::uint64_t key) {
        ModeIndex m(nu);
        for (int i = 0; i < nu; ++i) {
            auto raw = static_cast<std::uint16_t>((key >> (16 * i)) & 0xffffu);
            m.c_[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(static_cast<int>(raw) - 32768);
        }
        return m;
    }

    int nu() const { return nu_; }
    int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

    void set(int i, int v) { c_[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(v); }

    /// Packed key; lexicographic in the (offset) coordinates, so std::map
    /// iteration over keys is a deterministic mode order.
    std::uint64_t key() const {
        std::uint64_t k = 0;
        for (int i = 0; i < nu_; ++i) {
            auto raw = static_cast<std::uint16_t>(static_cast<int>(c_[static_cast<std::size_t>(i)]) + 32768);
            k |= static_cast<std::uint64_t>(raw) << (16 * i);
        }
        return k;
    }

    ModeIndex negated() const {
        ModeIndex m(nu_);
        for (int i = 0; i < nu_; ++i) m.c_[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(-c_[static_cast<std::size_t>(i)]);
        return m;
    }

    /// Canonical representative of the +-pair: first nonzero component positive.
    bool is_canonical() const {
        for (int i = 0; i < nu_; ++i) {
            if (c_[static_cast<std::size_t>(i)] > 0) return true;
            if (c_[static_cast<std::size_t>(i)] < 0) return false;
        }
        return true;  // zero mode
    }

    ModeIndex canonical() const { return is_canonical() ? *this : negated(); }

    bool is_zero() const {
        for (int i = 0; i < nu_; ++i)
            if (c_[static_cast<std::size_t>(i)] != 0) return false;
        return true;
    }

    int max_norm() const {
        int n = 0;
        for (int i = 0; i < nu_; ++i) n = std::max(n, std::abs(static_cast<int>(c_[static_cast<std::size_t>(i)])));
        return n;
    }

    int l1_norm() const {
        int n = 0;
        for (int i = 0; i < nu_; ++i) n += std::abs(static_cast<int>(c_[static_cast<std::size_t>(i)]));
        return n;
    }

    ModeIndex operator+(const ModeIndex& o) const {
        ModeIndex m(nu_);
        for (int i = 0; i < nu_; ++i) m.c_[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(c_[static_cast<std::size_t>(i)] + o.c_[static_cast<std::size_t>(i)]);
        return m;
    }

    ModeIndex operator-(const ModeIndex& o) const {
        ModeIndex m(nu_);
        for (int i = 0; i < nu_; ++i) m.c_[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(c_[static_cast<std::size_t>(i)] - o.c_[static_cast<std::size_t>(i)]);
        return m;
    }

    bool operator==(const ModeIndex& o) const { return nu_ == o.nu_ && c_ == o.c_; }
    bool operator!=(const ModeIndex& o) const { return !(*this == o); }
    bool operator<(const ModeIndex& o) const { return key() < o.key(); }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < nu_; ++i) {
            if (i) s += ",";
            s += std::to_string(static_cast<int>(c_[static_cast<std::size_t>(i)]));
        }
        s += ")";
        return s;
    }

  private:
    static void check_nu(int nu) {
        if (nu < 1 || nu > kMaxNu)
            throw PwError(ErrorCode::dimension_mismatch,
                          "phase count must be between 1 and " + std::to_string(kMaxNu) +
                              ", got " + std::to_string(nu));
    }

    std::array<std::int16_t, kMaxNu> c_;
    int nu_;
};

inline std::ostream& operator<<(std::ostream& os, const ModeIndex& m) { return os << m.to_string(); }

}  // namespace phasewave
