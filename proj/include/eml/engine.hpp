#pragma once

#include <optional>
#include <vector>

#include "eml/channel.hpp"
#include "eml/config.hpp"
#include "eml/maccheck.hpp"
#include "eml/preproc.hpp"
#include "eml/rng.hpp"

namespace eml {

// Two-party online evaluator over authenticated additive shares.
//
// Every opened value is appended to a deferred log; check_macs() runs the
// batched random-linear-combination MAC verification (commit-reveal coin
// flip, then commit-reveal of the check shares) and must pass before any
// decoded result is released to anyone. reveal_to() enforces that order.
//
// Round/batching contract: every vector operation spends exactly one
// communication round per masked opening layer — multiplications open
// (epsilon, rho) for the whole batch in a single frame pair, truncations
// open all masked sums in one frame pair. Per prediction with N training
// rows, representation length L, and exp parameters (d, k), the opened
// element count is N*(2L + 3(d+k) + 3) + 2.
class Engine {
  public:
    Engine(int party, const SessionConfig& cfg, Channel& ch, PreprocSource& pp, uint64_t seed);

    int party() const { return party_; }
    const Field& field() const { return F_; }
    const FixedCodec& codec() const { return codec_; }
    const SessionConfig& config() const { return cfg_; }
    Channel& channel() { return ch_; }

    // ----- session binding (one training split per session) -----
    void bind_model_fingerprint(const std::array<uint8_t, 32>& fp);

    // ----- input sharing -----
    std::vector<AuthShare> give_input(const std::vector<Elem>& xs);
    std::vector<AuthShare> take_input(int owner, size_t n);

    // ----- linear (local) layer -----
    AuthShare add(const AuthShare& a, const AuthShare& b) const;
    AuthShare sub(const AuthShare& a, const AuthShare& b) const;
    AuthShare neg(const AuthShare& a) const;
    AuthShare add_public(const AuthShare& a, const Elem& c) const;
    AuthShare mul_public(const AuthShare& a, const Elem& c) const;
    AuthShare public_share(const Elem& c) const;  // share of a public constant

    // ----- interactive layer (each call = fixed number of rounds) -----
    std::vector<Elem> open(const std::vector<AuthShare>& xs);
    std::vector<AuthShare> mul(const std::vector<AuthShare>& xs, const std::vector<AuthShare>& ys);
    // drop `shift` fractional bits (default: one fixed-point rescale by f)
    std::vector<AuthShare> trunc(const std::vector<AuthShare>& xs, int shift = -1);
    std::vector<AuthShare> fixed_mul(const std::vector<AuthShare>& xs,
                                     const std::vector<AuthShare>& ys);
    // rows: n vectors of length L; q: length L. Result: n shares of
    // sum_j (rows[i][j] - q[j])^2, consuming n*L triples + n trunc pairs.
    std::vector<AuthShare> sq_distance(const std::vector<std::vector<AuthShare>>& rows,
                                       const std::vector<AuthShare>& q);
    // exp(-t * 2^k) for already-reduced arguments t in [0, u_max / 2^k]
    std::vector<AuthShare> exp_neg_reduced(const std::vector<AuthShare>& ts);
    // exp(-u) for u in [0, u_max]: internal 2^-k reduction, Taylor, squarings
    std::vector<AuthShare> exp_neg(const std::vector<AuthShare>& us);
    AuthShare inner_product(const std::vector<AuthShare>& as, const std::vector<AuthShare>& bs);

    // masked reveal to one party; runs check_macs() first. Returns the
    // field value on the receiver, nullopt on the other party.
    std::optional<Elem> reveal_to(int receiver, const AuthShare& y);

    // batched MAC verification of everything opened since the last check
    void check_macs();

    // ----- accounting / audit / fault injection (test surface) -----
    uint64_t opened_count() const { return total_opened_; }
    uint64_t round_count() const { return open_rounds_; }
    const std::vector<Elem>& audit_opened() const { return audit_open_values_; }
    void set_audit(bool on) { audit_ = on; }
    // add delta to outgoing value share `elem_idx` of open round `round_idx`
    void tamper_open(uint64_t round_idx, size_t elem_idx, const Elem& delta);
    // add delta to this party's check share in the next check_macs()
    void tamper_sigma(const Elem& delta);

  private:
    std::vector<Elem> open_raw(std::vector<Elem> my_shares, const std::vector<AuthShare>& xs);

    int party_;
    SessionConfig cfg_;
    Field F_;
    FixedCodec codec_;
    Channel& ch_;
    PreprocSource& pp_;
    Rng rng_;
    Elem delta_;         // MAC key share
    Elem k_off_;         // 2^(2M-2), the signed-value lift before truncation
    std::vector<OpenRecord> log_;
    std::vector<Elem> audit_open_values_;
    bool audit_ = false;
    uint64_t total_opened_ = 0;
    uint64_t open_rounds_ = 0;
    bool tamper_armed_ = false;
    uint64_t tamper_round_ = 0;
    size_t tamper_elem_ = 0;
    Elem tamper_delta_{};
    bool sigma_tamper_armed_ = false;
    Elem sigma_tamper_delta_{};
    bool fingerprint_bound_ = false;
    std::array<uint8_t, 32> fingerprint_{};
};

}  // namespace eml
