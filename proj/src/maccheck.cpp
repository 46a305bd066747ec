#include "eml/maccheck.hpp"

#include "eml/errors.hpp"
#include "eml/serial.hpp"
#include "hash_util.hpp"

namespace eml {

using detail::blake32;
using detail::random_bytes;

void run_mac_check(const Field& F, Channel& ch, Rng& rng, int party, const Elem& delta_share,
                   std::vector<OpenRecord>& log, const Elem* sigma_tamper) {
    detail::ensure_sodium();

    // commit-reveal coin flip for the random linear combination
    std::vector<uint8_t> my_seed = random_bytes(rng, 32);
    std::vector<uint8_t> my_nonce = random_bytes(rng, 16);
    auto my_commit = blake32(0x01, my_nonce, my_seed);
    std::vector<uint8_t> commit_payload(my_commit.begin(), my_commit.end());
    std::vector<uint8_t> peer_commit = ch.exchange(MsgType::Reveal, commit_payload);
    if (peer_commit.size() != 32) throw ProtocolAbort("bad coin commitment size");

    std::vector<uint8_t> reveal = my_nonce;
    reveal.insert(reveal.end(), my_seed.begin(), my_seed.end());
    std::vector<uint8_t> peer_reveal = ch.exchange(MsgType::Reveal, reveal);
    if (peer_reveal.size() != 48) throw ProtocolAbort("bad coin reveal size");
    std::vector<uint8_t> peer_nonce(peer_reveal.begin(), peer_reveal.begin() + 16);
    std::vector<uint8_t> peer_seed(peer_reveal.begin() + 16, peer_reveal.end());
    auto check = blake32(0x01, peer_nonce, peer_seed);
    if (!std::equal(check.begin(), check.end(), peer_commit.begin())) {
        ch.send_abort("coin commitment mismatch");
        throw CommitmentMismatch();
    }
    const std::vector<uint8_t>& seed0 = party == 0 ? my_seed : peer_seed;
    const std::vector<uint8_t>& seed1 = party == 0 ? peer_seed : my_seed;
    auto joint = blake32(0x02, seed0, seed1);
    uint64_t coin_seed = 0;
    for (int i = 0; i < 8; ++i) coin_seed |= static_cast<uint64_t>(joint[i]) << (8 * i);
    Rng coin(coin_seed);

    // sigma_P = sum r_i * m_i - delta_P * sum r_i * v_i ; sums to zero iff
    // every logged opening carried its true MAC
    Elem mac_acc = F.zero(), val_acc = F.zero();
    for (const OpenRecord& rec : log) {
        Elem r = F.random(coin);
        mac_acc = F.add(mac_acc, F.mul(r, rec.mac_share));
        val_acc = F.add(val_acc, F.mul(r, rec.value));
    }
    Elem sigma = F.sub(mac_acc, F.mul(delta_share, val_acc));
    if (sigma_tamper) sigma = F.add(sigma, *sigma_tamper);

    // commit-reveal sigma so neither side can adapt
    std::vector<uint8_t> sig_bytes(F.elem_bytes());
    F.to_bytes(sigma, sig_bytes.data());
    std::vector<uint8_t> sig_nonce = random_bytes(rng, 16);
    auto sig_commit = blake32(0x03, sig_nonce, sig_bytes);
    std::vector<uint8_t> sig_commit_payload(sig_commit.begin(), sig_commit.end());
    std::vector<uint8_t> peer_sig_commit = ch.exchange(MsgType::Reveal, sig_commit_payload);
    if (peer_sig_commit.size() != 32) throw ProtocolAbort("bad check commitment size");

    std::vector<uint8_t> sig_reveal = sig_nonce;
    sig_reveal.insert(sig_reveal.end(), sig_bytes.begin(), sig_bytes.end());
    std::vector<uint8_t> peer_sig_reveal = ch.exchange(MsgType::Reveal, sig_reveal);
    if (peer_sig_reveal.size() != 16 + F.elem_bytes()) throw ProtocolAbort("bad check reveal size");
    std::vector<uint8_t> psn(peer_sig_reveal.begin(), peer_sig_reveal.begin() + 16);
    std::vector<uint8_t> psb(peer_sig_reveal.begin() + 16, peer_sig_reveal.end());
    auto sig_check = blake32(0x03, psn, psb);
    if (!std::equal(sig_check.begin(), sig_check.end(), peer_sig_commit.begin())) {
        ch.send_abort("check commitment mismatch");
        throw CommitmentMismatch();
    }
    Elem peer_sigma = F.from_bytes(psb.data());
    log.clear();
    if (!F.is_zero(F.add(sigma, peer_sigma))) {
        ch.send_abort("mac check failed");
        throw MacCheckFailed();
    }
}

}  // namespace eml
