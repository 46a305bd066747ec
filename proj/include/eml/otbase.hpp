#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "eml/channel.hpp"

namespace eml {

inline constexpr size_t kOtKeyBytes = 16;    // extension seed / derived key size
inline constexpr size_t kBaseOtCount = 128;  // extension security parameter

using OtKey = std::array<uint8_t, kOtKeyBytes>;

// Diffie-Hellman base oblivious transfer over ristretto255, batched. The
// sender ends with n key pairs (k0, k1); the receiver ends with k_{c_i} for
// its choice bit c_i and learns nothing about the other key, while the
// sender cannot tell which key was received. One frame each way.
//
// Throws HandshakeFailure if the peer delivers a malformed group element.
std::vector<std::pair<OtKey, OtKey>> base_ot_send(Channel& ch, size_t n);
std::vector<OtKey> base_ot_recv(Channel& ch, const std::vector<uint8_t>& choice_bits);

}  // namespace eml
