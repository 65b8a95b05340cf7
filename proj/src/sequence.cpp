#include "phasewave/sequence.hpp"

#include <cstdint>

namespace phasewave {

namespace {

struct FlatEntry {
    std::array<int, kMaxNu> c;
    double value;
};

std::vector<FlatEntry> flatten(const FourierSequence& u) {
    std::vector<FlatEntry> out;
    auto full = u.full_support();
    out.reserve(full.size());
    for (const auto& [m, v] : full) {
        FlatEntry e;
        e.c.fill(0);
        for (int i = 0; i < u.nu(); ++i) e.c[static_cast<std::size_t>(i)] = m[i];
        e.value = v;
        out.push_back(e);
    }
    return out;
}

}  // namespace

FourierSequence delta_sequence(int nu) {
    FourierSequence d(nu);
    d.set(ModeIndex(nu), 1.0);
    return d;
}

FourierSequence convolve(const FourierSequence& u, const FourierSequence& v) {
    if (u.nu() != v.nu())
        throw PwError(ErrorCode::dimension_mismatch,
                      "convolution of sequences with phase counts " + std::to_string(u.nu()) +
                          " and " + std::to_string(v.nu()));
    const int nu = u.nu();
    FourierSequence out(nu);
    if (u.empty() || v.empty()) return out;

    auto a = flatten(u);
    auto b = flatten(v);

    // Bounding box of the Minkowski sum of the supports.
    std::array<int, kMaxNu> lo{}, hi{};
    for (int i = 0; i < nu; ++i) {
        int alo = a[0].c[static_cast<std::size_t>(i)], ahi = alo;
        int blo = b[0].c[static_cast<std::size_t>(i)], bhi = blo;
        for (const auto& e : a) {
            alo = std::min(alo, e.c[static_cast<std::size_t>(i)]);
            ahi = std::max(ahi, e.c[static_cast<std::size_t>(i)]);
        }
        for (const auto& e : b) {
            blo = std::min(blo, e.c[static_cast<std::size_t>(i)]);
            bhi = std::max(bhi, e.c[static_cast<std::size_t>(i)]);
        }
        lo[static_cast<std::size_t>(i)] = alo + blo;
        hi[static_cast<std::size_t>(i)] = ahi + bhi;
    }

    std::array<std::int64_t, kMaxNu> stride{};
    std::int64_t volume = 1;
    for (int i = 0; i < nu; ++i) {
        stride[static_cast<std::size_t>(i)] = volume;
        volume *= hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] + 1;
    }

    constexpr std::int64_t kDenseLimit = 1 << 26;
    if (volume <= kDenseLimit) {
        std::vector<double> buf(static_cast<std::size_t>(volume), 0.0);
        std::int64_t offset = 0;
        for (int i = 0; i < nu; ++i) offset += stride[static_cast<std::size_t>(i)] * lo[static_cast<std::size_t>(i)];

        std::vector<std::int64_t> ib(b.size());
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::int64_t idx = 0;
            for (int i = 0; i < nu; ++i) idx += stride[static_cast<std::size_t>(i)] * b[j].c[static_cast<std::size_t>(i)];
            ib[j] = idx;
        }
        for (const auto& ea : a) {
            std::int64_t ia = -offset;
            for (int i = 0; i < nu; ++i) ia += stride[static_cast<std::size_t>(i)] * ea.c[static_cast<std::size_t>(i)];
            const double va = ea.value;
            for (std::size_t j = 0; j < b.size(); ++j) buf[static_cast<std::size_t>(ia + ib[j])] += va * b[j].value;
        }

        // Write canonical representatives only; the -m accumulation is the
        // same multiset of products and is dropped.
        std::array<int, kMaxNu> c{};
        for (int i = 0; i < nu; ++i) c[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
        for (std::int64_t idx = 0; idx < volume; ++idx) {
            double val = buf[static_cast<std::size_t>(idx)];
            if (val != 0.0) {
                ModeIndex m(nu);
                for (int i = 0; i < nu; ++i) m.set(i, c[static_cast<std::size_t>(i)]);
                if (m.is_canonical()) out.set(m, val);
            }
            for (int i = 0; i < nu; ++i) {
                if (++c[static_cast<std::size_t>(i)] <= hi[static_cast<std::size_t>(i)]) break;
                c[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
            }
        }
        return out;
    }

    // Fallback for supports whose bounding box exceeds the dense limit.
    std::map<std::uint64_t, double> acc;
    for (const auto& ea : a) {
        ModeIndex ma(nu);
        for (int i = 0; i < nu; ++i) ma.set(i, ea.c[static_cast<std::size_t>(i)]);
        for (const auto& eb : b) {
            ModeIndex m(nu);
            for (int i = 0; i < nu; ++i) m.set(i, ea.c[static_cast<std::size_t>(i)] + eb.c[static_cast<std::size_t>(i)]);
            if (m.is_canonical()) acc[m.key()] += ea.value * eb.value;
        }
    }
    for (const auto& [k, v] : acc)
        if (v != 0.0) out.set(ModeIndex::from_key(nu, k), v);
    return out;
}

FourierSequence convolution_power(const FourierSequence& u, int k) {
    if (k < 1) throw PwError(ErrorCode::domain_error, "convolution power requires k >= 1");
    FourierSequence p = u;
    for (int i = 1; i < k; ++i) p = convolve(p, u);
    return p;
}

}  // namespace phasewave
