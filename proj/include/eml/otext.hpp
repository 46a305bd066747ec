#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eml/otbase.hpp"
#include "eml/rng.hpp"

namespace eml {

// Passive-secure OT extension: 128 base transfers bootstrap any number of
// derived transfers. Role flip: the extension sender acts as base-OT
// receiver (random choice vector s) and the extension receiver as base-OT
// sender. Each extend() is one frame, receiver to sender; derived keys are
// indexed by a running global counter so pads never repeat across batches.
//
// The receiver of an extended transfer picks its choice bit freely per
// instance; the sender ends with a key pair (K0, K1) of which the receiver
// knows exactly K_{choice}.
class OtExtSender {
  public:
    OtExtSender(Channel& ch, Rng& rng);  // runs the base OTs as receiver

    // keys for m fresh transfers; call must pair with the peer's extend(m)
    std::vector<std::pair<OtKey, OtKey>> extend(Channel& ch, size_t m);

  private:
    std::array<uint8_t, kBaseOtCount / 8> s_bytes_{};  // packed choice bits
    std::vector<OtKey> base_;                          // k^{s_i} per column
    uint64_t counter_ = 0;
};

class OtExtReceiver {
  public:
    OtExtReceiver(Channel& ch);  // runs the base OTs as sender

    // one key per choice bit (entries 0/1)
    std::vector<OtKey> extend(Channel& ch, const std::vector<uint8_t>& choice_bits);

  private:
    std::vector<std::pair<OtKey, OtKey>> base_;
    uint64_t counter_ = 0;
};

}  // namespace eml
