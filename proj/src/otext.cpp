#include "eml/otext.hpp"

#include <sodium.h>

#include <cstring>

#include "eml/errors.hpp"
#include "hash_util.hpp"

namespace eml {
namespace {

// chunk size per u-frame: 2^19 transfers -> 128 columns x 64 KiB = 8 MiB
constexpr size_t kExtChunk = size_t{1} << 19;

// column expansion: pseudorandom bit column of `bytes` bytes from a seed;
// salt keeps distinct batches (and the two pads of one column) disjoint
std::vector<uint8_t> expand_column(const OtKey& seed, uint64_t salt, size_t bytes) {
    std::vector<uint8_t> out(bytes);
    uint8_t msg[16];
    for (int i = 0; i < 8; ++i) msg[i] = static_cast<uint8_t>(salt >> (8 * i));
    size_t off = 0;
    uint64_t block = 0;
    while (off < bytes) {
        for (int i = 0; i < 8; ++i) msg[8 + i] = static_cast<uint8_t>(block >> (8 * i));
        uint8_t buf[64];
        crypto_generichash(buf, sizeof buf, msg, sizeof msg, seed.data(), seed.size());
        size_t take = std::min(sizeof buf, bytes - off);
        std::memcpy(out.data() + off, buf, take);
        off += take;
        ++block;
    }
    return out;
}

// rows[j] = bit j of each of the 128 columns, packed to 16 bytes
std::vector<OtKey> transpose_columns(const std::vector<std::vector<uint8_t>>& cols, size_t m) {
    std::vector<OtKey> rows(m);
    for (size_t j = 0; j < m; ++j) {
        const size_t byte = j >> 3;
        const int bit = static_cast<int>(j & 7);
        OtKey& row = rows[j];
        for (size_t g = 0; g < kOtKeyBytes; ++g) {
            uint8_t acc = 0;
            for (int k = 0; k < 8; ++k) acc |= ((cols[g * 8 + k][byte] >> bit) & 1u) << k;
            row[g] = acc;
        }
    }
    return rows;
}

}  // namespace

OtExtSender::OtExtSender(Channel& ch, Rng& rng) {
    std::vector<uint8_t> s(kBaseOtCount);
    for (auto& b : s) b = static_cast<uint8_t>(rng.next_u64() & 1);
    for (size_t i = 0; i < kBaseOtCount; ++i) s_bytes_[i / 8] |= s[i] << (i % 8);
    base_ = base_ot_recv(ch, s);
}

OtExtReceiver::OtExtReceiver(Channel& ch) { base_ = base_ot_send(ch, kBaseOtCount); }

std::vector<OtKey> OtExtReceiver::extend(Channel& ch, const std::vector<uint8_t>& choice_bits) {
    std::vector<OtKey> out;
    out.reserve(choice_bits.size());
    for (size_t done = 0; done < choice_bits.size(); done += kExtChunk) {
        const size_t m = std::min(kExtChunk, choice_bits.size() - done);
        const size_t mb = (m + 7) / 8;
        std::vector<uint8_t> packed(mb, 0);
        for (size_t j = 0; j < m; ++j) packed[j / 8] |= (choice_bits[done + j] & 1u) << (j % 8);

        // u_i = G(k0_i) ^ G(k1_i) ^ c  (one column per base instance)
        std::vector<std::vector<uint8_t>> t_cols(kBaseOtCount);
        std::vector<uint8_t> frame(kBaseOtCount * mb);
        for (size_t i = 0; i < kBaseOtCount; ++i) {
            t_cols[i] = expand_column(base_[i].first, counter_, mb);
            std::vector<uint8_t> g1 = expand_column(base_[i].second, counter_, mb);
            uint8_t* u = frame.data() + i * mb;
            for (size_t b = 0; b < mb; ++b) u[b] = t_cols[i][b] ^ g1[b] ^ packed[b];
        }
        ch.send(MsgType::Ot, frame);

        std::vector<OtKey> rows = transpose_columns(t_cols, m);
        for (size_t j = 0; j < m; ++j)
            out.push_back(detail::blake16(0x11, counter_ + j, rows[j].data(), rows[j].size()));
        counter_ += m;
    }
    return out;
}

std::vector<std::pair<OtKey, OtKey>> OtExtSender::extend(Channel& ch, size_t m_total) {
    std::vector<std::pair<OtKey, OtKey>> out;
    out.reserve(m_total);
    for (size_t done = 0; done < m_total; done += kExtChunk) {
        const size_t m = std::min(kExtChunk, m_total - done);
        const size_t mb = (m + 7) / 8;
        auto [t, frame] = ch.recv();
        if (t != MsgType::Ot || frame.size() != kBaseOtCount * mb)
            throw ProtocolAbort("bad extension frame");

        // q_i = G(k^{s_i}) ^ s_i * u_i ; rows give q_j = t_j ^ c_j * s
        std::vector<std::vector<uint8_t>> q_cols(kBaseOtCount);
        for (size_t i = 0; i < kBaseOtCount; ++i) {
            q_cols[i] = expand_column(base_[i], counter_, mb);
            if ((s_bytes_[i / 8] >> (i % 8)) & 1u) {
                const uint8_t* u = frame.data() + i * mb;
                for (size_t b = 0; b < mb; ++b) q_cols[i][b] ^= u[b];
            }
        }
        std::vector<OtKey> rows = transpose_columns(q_cols, m);
        for (size_t j = 0; j < m; ++j) {
            OtKey q = rows[j];
            OtKey q1;
            for (size_t b = 0; b < kOtKeyBytes; ++b) q1[b] = q[b] ^ s_bytes_[b];
            out.emplace_back(detail::blake16(0x11, counter_ + j, q.data(), q.size()),
                             detail::blake16(0x11, counter_ + j, q1.data(), q1.size()));
        }
        counter_ += m;
    }
    return out;
}

}  // namespace eml
