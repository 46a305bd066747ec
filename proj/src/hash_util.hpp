#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <vector>

#include "eml/errors.hpp"
#include "eml/field.hpp"
#include "eml/rng.hpp"

// Internal hashing helpers. All protocol hashes are domain-separated
// blake2b; domains: 0x01 coin commitment, 0x02 joint coin, 0x03 check-share
// commitment, 0x10 base-OT key derivation, 0x11 extension key derivation,
// 0x12 column expansion, 0x13 field-element pads.
namespace eml::detail {

inline void ensure_sodium() {
    static const bool ok = [] {
        if (sodium_init() < 0) throw ConfigError("libsodium initialization failed");
        return true;
    }();
    (void)ok;
}

inline std::array<uint8_t, 32> blake32(uint8_t domain, const std::vector<uint8_t>& a,
                                       const std::vector<uint8_t>& b = {}) {
    std::array<uint8_t, 32> out{};
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, out.size());
    crypto_generichash_update(&st, &domain, 1);
    crypto_generichash_update(&st, a.data(), a.size());
    crypto_generichash_update(&st, b.data(), b.size());
    crypto_generichash_final(&st, out.data(), out.size());
    return out;
}

inline std::vector<uint8_t> random_bytes(Rng& rng, size_t n) {
    std::vector<uint8_t> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = static_cast<uint8_t>(rng.next_u64());
    return v;
}

// 16-byte key from domain + index + body (base-OT and extension keys)
inline std::array<uint8_t, 16> blake16(uint8_t domain, uint64_t index, const uint8_t* body,
                                       size_t body_len) {
    std::array<uint8_t, 16> out{};
    uint8_t pre[9];
    pre[0] = domain;
    for (int i = 0; i < 8; ++i) pre[1 + i] = static_cast<uint8_t>(index >> (8 * i));
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, out.size());
    crypto_generichash_update(&st, pre, sizeof pre);
    crypto_generichash_update(&st, body, body_len);
    crypto_generichash_final(&st, out.data(), out.size());
    return out;
}

// Keyed pseudorandom field element: rejection-sample blake2b(key; tweak,
// attempt) masked to the field width. Deterministic, so both holders of the
// key derive the same element.
inline Elem prf_elem(const Field& F, const std::array<uint8_t, 16>& key, uint64_t tweak) {
    const int l = F.bits();
    const size_t nb = F.elem_bytes();
    uint8_t msg[12];
    for (int i = 0; i < 8; ++i) msg[i] = static_cast<uint8_t>(tweak >> (8 * i));
    for (uint32_t attempt = 0;; ++attempt) {
        for (int i = 0; i < 4; ++i) msg[8 + i] = static_cast<uint8_t>(attempt >> (8 * i));
        uint8_t buf[32];
        crypto_generichash(buf, sizeof buf, msg, sizeof msg, key.data(), key.size());
        Elem e{};
        for (size_t i = 0; i < nb; ++i)
            e.w[i / 4] |= static_cast<uint32_t>(buf[i]) << (8 * (i % 4));
        if (l % 32 != 0) {
            // clear bits above the field width so the candidate is < 2^l
            e.w[(l - 1) / 32] &= (1u << (l % 32)) - 1;
        }
        for (int i = (l + 31) / 32; i < 8; ++i) e.w[i] = 0;
        if (F.cmp(e, F.prime()) < 0) return e;
    }
}

}  // namespace eml::detail
