#include "eml/otbase.hpp"

#include <sodium.h>

#include "eml/errors.hpp"
#include "hash_util.hpp"

namespace eml {
namespace {

constexpr size_t kPt = crypto_core_ristretto255_BYTES;         // 32
constexpr size_t kSc = crypto_core_ristretto255_SCALARBYTES;   // 32

// key = H(0x10, index, point): both sides derive transfer keys this way
OtKey point_key(uint64_t index, const uint8_t* pt) {
    return detail::blake16(0x10, index, pt, kPt);
}

}  // namespace

std::vector<std::pair<OtKey, OtKey>> base_ot_send(Channel& ch, size_t n) {
    detail::ensure_sodium();
    // announce S = y*B; later derive per-instance keys from y*R_i and
    // y*R_i - y*S (the receiver can compute exactly one of the two)
    uint8_t y[kSc], S[kPt], yS[kPt];
    crypto_core_ristretto255_scalar_random(y);
    crypto_scalarmult_ristretto255_base(S, y);
    if (crypto_scalarmult_ristretto255(yS, y, S) != 0)
        throw HandshakeFailure("degenerate base-ot setup point");
    ch.send(MsgType::Ot, std::vector<uint8_t>(S, S + kPt));

    auto [t, payload] = ch.recv();
    if (t != MsgType::Ot || payload.size() != n * kPt)
        throw HandshakeFailure("bad base-ot response frame");
    std::vector<std::pair<OtKey, OtKey>> out(n);
    for (size_t i = 0; i < n; ++i) {
        const uint8_t* R = payload.data() + i * kPt;
        if (!crypto_core_ristretto255_is_valid_point(R))
            throw HandshakeFailure("malformed base-ot group element");
        uint8_t p0[kPt], p1[kPt];
        if (crypto_scalarmult_ristretto255(p0, y, R) != 0)
            throw HandshakeFailure("malformed base-ot group element");
        if (crypto_core_ristretto255_sub(p1, p0, yS) != 0)
            throw HandshakeFailure("malformed base-ot group element");
        out[i] = {point_key(i, p0), point_key(i, p1)};
    }
    return out;
}

std::vector<OtKey> base_ot_recv(Channel& ch, const std::vector<uint8_t>& choice_bits) {
    detail::ensure_sodium();
    auto [t, payload] = ch.recv();
    if (t != MsgType::Ot || payload.size() != kPt)
        throw HandshakeFailure("bad base-ot setup frame");
    const uint8_t* S = payload.data();
    if (!crypto_core_ristretto255_is_valid_point(S))
        throw HandshakeFailure("malformed base-ot group element");

    const size_t n = choice_bits.size();
    std::vector<uint8_t> response(n * kPt);
    std::vector<OtKey> keys(n);
    for (size_t i = 0; i < n; ++i) {
        // R_i = x_i*B + c_i*S ; received key is H(x_i*S) = H(y*R_i - c_i*y*S)
        uint8_t x[kSc], R[kPt], xS[kPt];
        crypto_core_ristretto255_scalar_random(x);
        crypto_scalarmult_ristretto255_base(R, x);
        if (choice_bits[i]) {
            if (crypto_core_ristretto255_add(R, R, S) != 0)
                throw HandshakeFailure("malformed base-ot group element");
        }
        if (crypto_scalarmult_ristretto255(xS, x, S) != 0)
            throw HandshakeFailure("malformed base-ot group element");
        std::copy(R, R + kPt, response.begin() + static_cast<ptrdiff_t>(i * kPt));
        keys[i] = point_key(i, xS);
    }
    ch.send(MsgType::Ot, response);
    return keys;
}

}  // namespace eml
