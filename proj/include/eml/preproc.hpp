#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "eml/field.hpp"
#include "eml/fixedpt.hpp"
#include "eml/rng.hpp"

namespace eml {

// Additive share with an information-theoretic MAC share. Invariant across
// the two parties: v_A + v_B = x and m_A + m_B = (delta_A + delta_B) * x,
// where delta_P is each party's share of the never-reconstructed MAC key.
struct AuthShare {
    Elem v{};
    Elem m{};
};

struct Triple {
    AuthShare a, b, c;  // c = a*b
};

struct TruncPair {
    AuthShare r, rt;  // rt = floor(r / 2^shift), r uniform below 2^(2M-1+s)
};

struct InputMask {
    AuthShare share;
    Elem plain{};      // valid only on the owning party
    bool known = false;
};

// Correlated-randomness supplier for one party. Every correlation is
// consumed exactly once, FIFO; exhaustion raises PreprocessingExhausted.
class PreprocSource {
  public:
    virtual ~PreprocSource() = default;
    virtual Elem mac_key_share() = 0;
    virtual Triple next_triple() = 0;
    virtual TruncPair next_trunc_pair(int shift) = 0;
    virtual InputMask next_mask(int owner) = 0;
};

// Deterministic per-seed streams for the *values* of dealt correlations
// (truncation masks, input masks). Kept apart from the share-splitting
// streams so another provider can reproduce the same consumed values from
// the same seed without reproducing the splits — the online result of a
// fixed-seed run depends only on these values, never on the splits.
struct ValueStreams {
    Rng pair_vals;
    Rng mask_vals;
    explicit ValueStreams(uint64_t seed)
        : pair_vals(Rng(seed).fork(10)), mask_vals(Rng(seed).fork(11)) {}
};

// Trusted-dealer source for benchmarks: both parties construct it with the
// same seed, derive the same correlations, and keep their own halves. No
// preprocessing traffic flows (the dealer is "out of band"); this mode
// exists to measure the online protocol, not to provide security against
// the other party.
class DealerSource final : public PreprocSource {
  public:
    DealerSource(const Field& F, FixedParams fx, uint64_t seed, int party,
                 uint64_t max_triples = UINT64_MAX, uint64_t max_pairs = UINT64_MAX,
                 uint64_t max_masks = UINT64_MAX);

    Elem mac_key_share() override { return my_delta_; }
    Triple next_triple() override;
    TruncPair next_trunc_pair(int shift) override;
    InputMask next_mask(int owner) override;

  private:
    const Field& F_;
    FixedParams fx_;
    int party_;
    Elem my_delta_, delta_;  // own key share and full key (dealer knows both)
    ValueStreams vals_;
    Rng rng_triples_, rng_pairs_, rng_masks_;
    uint64_t left_triples_, left_pairs_, left_masks_;

    AuthShare take_half(const Elem& x, Rng& rng) const;
};

// --- on-disk store: length-prefixed binary records ---
// record := u32 LE body length, then body; body := type byte + payload
// types: 1 mac key share, 2 triple (6 elems), 3 trunc pair (shift byte + 4
//        elems), 4/5 mask owned by party 0/1 (2 elems + plain for the owner)
void dealer_write_files(const Field& F, FixedParams fx, uint64_t seed, uint64_t n_triples,
                        uint64_t n_pairs, uint64_t n_masks_each, const std::string& path_a,
                        const std::string& path_b);

class FileSource final : public PreprocSource {
  public:
    FileSource(const Field& F, const std::string& path, int party);
    Elem mac_key_share() override;
    Triple next_triple() override;
    TruncPair next_trunc_pair(int shift) override;
    InputMask next_mask(int owner) override;

  private:
    const Field& F_;
    int party_;
    bool have_key_ = false;
    Elem delta_{};
    std::deque<Triple> triples_;
    std::map<int, std::deque<TruncPair>> pairs_;
    std::deque<InputMask> masks_[2];
};

}  // namespace eml
