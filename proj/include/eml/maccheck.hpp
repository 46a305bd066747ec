#pragma once

#include <vector>

#include "eml/channel.hpp"
#include "eml/field.hpp"
#include "eml/rng.hpp"

namespace eml {

// One logged public opening awaiting batch verification.
struct OpenRecord {
    Elem value;      // reconstructed public value
    Elem mac_share;  // this party's MAC share for it
};

// Commit-reveal joint coin: both parties contribute 32-byte seeds under
// hash commitments, then reveal; the returned generator is seeded from the
// ordered pair, so neither party can bias it after seeing the other's seed.
// Throws CommitmentMismatch if a reveal does not match its commitment.
Rng coin_flip(Channel& ch, Rng& rng, int party);

// Batched verification of a deferred open log. Protocol: commit-reveal coin
// flip establishes a joint seed; both parties draw the same random weights
// r_i and compute sigma_P = sum r_i * m_i - delta_P * sum r_i * v_i; the
// check shares are themselves committed before reveal, and sigma_A + sigma_B
// must be zero. Clears the log on success or failure (the session aborts on
// failure, so nothing is re-checked). sigma_tamper, when non-null, is added
// to this party's check share (fault-injection test hook).
//
// Throws CommitmentMismatch on a broken commitment, MacCheckFailed on a
// nonzero check sum; both send a best-effort abort frame first.
void run_mac_check(const Field& F, Channel& ch, Rng& rng, int party, const Elem& delta_share,
                   std::vector<OpenRecord>& log, const Elem* sigma_tamper = nullptr);

}  // namespace eml
