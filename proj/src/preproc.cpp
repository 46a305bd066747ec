#include "eml/preproc.hpp"

#include <fstream>

#include "eml/errors.hpp"
#include "eml/serial.hpp"

namespace eml {

DealerSource::DealerSource(const Field& F, FixedParams fx, uint64_t seed, int party,
                           uint64_t max_triples, uint64_t max_pairs, uint64_t max_masks)
    : F_(F),
      fx_(fx),
      party_(party),
      vals_(seed),
      rng_triples_(0),
      rng_pairs_(0),
      rng_masks_(0),
      left_triples_(max_triples),
      left_pairs_(max_pairs),
      left_masks_(max_masks) {
    Rng root(seed);
    Rng rng_keys = root.fork(0);
    rng_triples_ = root.fork(1);
    rng_pairs_ = root.fork(2);
    rng_masks_ = root.fork(3);
    Elem delta_a = F_.random(rng_keys);
    Elem delta_b = F_.random(rng_keys);
    delta_ = F_.add(delta_a, delta_b);
    my_delta_ = party_ == 0 ? delta_a : delta_b;
}

// split x (and its MAC) additively; keep this party's half
AuthShare DealerSource::take_half(const Elem& x, Rng& rng) const {
    Elem va = F_.random(rng);
    Elem vb = F_.sub(x, va);
    Elem mac = F_.mul(delta_, x);
    Elem ma = F_.random(rng);
    Elem mb = F_.sub(mac, ma);
    return party_ == 0 ? AuthShare{va, ma} : AuthShare{vb, mb};
}

Triple DealerSource::next_triple() {
    if (left_triples_ == 0) throw PreprocessingExhausted("multiplication triples");
    --left_triples_;
    Elem a = F_.random(rng_triples_);
    Elem b = F_.random(rng_triples_);
    Elem c = F_.mul(a, b);
    Triple t;
    t.a = take_half(a, rng_triples_);
    t.b = take_half(b, rng_triples_);
    t.c = take_half(c, rng_triples_);
    return t;
}

TruncPair DealerSource::next_trunc_pair(int shift) {
    if (left_pairs_ == 0) throw PreprocessingExhausted("truncation pairs");
    --left_pairs_;
    if (shift < 1 || shift >= 2 * fx_.M - 1) throw ConfigError("bad truncation shift");
    const int bits = 2 * fx_.M - 1 + fx_.s;
    Elem r = F_.random_bits(vals_.pair_vals, bits);
    Elem rt = F_.shift_right(r, shift);
    TruncPair p;
    p.r = take_half(r, rng_pairs_);
    p.rt = take_half(rt, rng_pairs_);
    return p;
}

InputMask DealerSource::next_mask(int owner) {
    if (left_masks_ == 0) throw PreprocessingExhausted("input masks");
    --left_masks_;
    Elem r = F_.random(vals_.mask_vals);
    InputMask m;
    m.share = take_half(r, rng_masks_);
    m.known = owner == party_;
    if (m.known) m.plain = r;
    return m;
}

// ---------- file store ----------

namespace {
void put_record(std::ofstream& out, const std::vector<uint8_t>& body) {
    uint32_t len = static_cast<uint32_t>(body.size());
    uint8_t hdr[4];
    for (int i = 0; i < 4; ++i) hdr[i] = static_cast<uint8_t>(len >> (8 * i));
    out.write(reinterpret_cast<char*>(hdr), 4);
    out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
}
}  // namespace

void dealer_write_files(const Field& F, FixedParams fx, uint64_t seed, uint64_t n_triples,
                        uint64_t n_pairs, uint64_t n_masks_each, const std::string& path_a,
                        const std::string& path_b) {
    std::ofstream fa(path_a, std::ios::binary), fb(path_b, std::ios::binary);
    if (!fa || !fb) throw IoError("cannot open preprocessing output files");
    DealerSource da(F, fx, seed, 0);
    DealerSource db(F, fx, seed, 1);
    auto emit = [&](std::ofstream& out, uint8_t type, const std::vector<AuthShare>& shares,
                    const Elem* plain) {
        ByteWriter w;
        w.u8(type);
        for (const auto& s : shares) {
            w.elem(F, s.v);
            w.elem(F, s.m);
        }
        if (plain) w.elem(F, *plain);
        put_record(out, w.buf);
    };
    {
        ByteWriter wa, wb;
        wa.u8(1);
        wa.elem(F, da.mac_key_share());
        put_record(fa, wa.buf);
        wb.u8(1);
        wb.elem(F, db.mac_key_share());
        put_record(fb, wb.buf);
    }
    for (uint64_t i = 0; i < n_triples; ++i) {
        Triple ta = da.next_triple(), tb = db.next_triple();
        emit(fa, 2, {ta.a, ta.b, ta.c}, nullptr);
        emit(fb, 2, {tb.a, tb.b, tb.c}, nullptr);
    }
    for (uint64_t i = 0; i < n_pairs; ++i) {
        TruncPair pa = da.next_trunc_pair(fx.f), pb = db.next_trunc_pair(fx.f);
        ByteWriter wa, wb;
        wa.u8(3);
        wa.u8(static_cast<uint8_t>(fx.f));
        wa.elem(F, pa.r.v); wa.elem(F, pa.r.m); wa.elem(F, pa.rt.v); wa.elem(F, pa.rt.m);
        put_record(fa, wa.buf);
        wb.u8(3);
        wb.u8(static_cast<uint8_t>(fx.f));
        wb.elem(F, pb.r.v); wb.elem(F, pb.r.m); wb.elem(F, pb.rt.v); wb.elem(F, pb.rt.m);
        put_record(fb, wb.buf);
    }
    for (int owner = 0; owner < 2; ++owner) {
        for (uint64_t i = 0; i < n_masks_each; ++i) {
            InputMask ma = da.next_mask(owner), mb = db.next_mask(owner);
            emit(fa, static_cast<uint8_t>(4 + owner), {ma.share}, ma.known ? &ma.plain : nullptr);
            emit(fb, static_cast<uint8_t>(4 + owner), {mb.share}, mb.known ? &mb.plain : nullptr);
        }
    }
    if (!fa.good() || !fb.good()) throw IoError("short write on preprocessing files");
}

FileSource::FileSource(const Field& F, const std::string& path, int party) : F_(F), party_(party) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open preprocessing file: " + path);
    std::vector<uint8_t> body;
    for (;;) {
        uint8_t hdr[4];
        in.read(reinterpret_cast<char*>(hdr), 4);
        if (in.gcount() == 0) break;
        if (in.gcount() != 4) throw ParseError("truncated record header in " + path);
        uint32_t len = 0;
        for (int i = 0; i < 4; ++i) len |= static_cast<uint32_t>(hdr[i]) << (8 * i);
        body.resize(len);
        in.read(reinterpret_cast<char*>(body.data()), len);
        if (static_cast<uint32_t>(in.gcount()) != len) throw ParseError("truncated record in " + path);
        ByteReader r(body);
        uint8_t type = r.u8();
        auto share = [&] {
            AuthShare s;
            s.v = r.elem(F_);
            s.m = r.elem(F_);
            return s;
        };
        switch (type) {
            case 1:
                delta_ = r.elem(F_);
                have_key_ = true;
                break;
            case 2: {
                Triple t;
                t.a = share();
                t.b = share();
                t.c = share();
                triples_.push_back(t);
                break;
            }
            case 3: {
                int shift = r.u8();
                TruncPair p;
                p.r = share();
                p.rt = share();
                pairs_[shift].push_back(p);
                break;
            }
            case 4:
            case 5: {
                InputMask m;
                m.share = share();
                int owner = type - 4;
                m.known = owner == party_;
                if (m.known) m.plain = r.elem(F_);
                masks_[owner].push_back(m);
                break;
            }
            default:
                throw ParseError("unknown preprocessing record type " + std::to_string(type));
        }
    }
    if (!have_key_) throw ParseError("preprocessing file has no MAC key record: " + path);
}

Elem FileSource::mac_key_share() { return delta_; }

Triple FileSource::next_triple() {
    if (triples_.empty()) throw PreprocessingExhausted("multiplication triples");
    Triple t = triples_.front();
    triples_.pop_front();
    return t;
}

TruncPair FileSource::next_trunc_pair(int shift) {
    auto it = pairs_.find(shift);
    if (it == pairs_.end() || it->second.empty())
        throw PreprocessingExhausted("truncation pairs (shift " + std::to_string(shift) + ")");
    TruncPair p = it->second.front();
    it->second.pop_front();
    return p;
}

InputMask FileSource::next_mask(int owner) {
    if (masks_[owner].empty()) throw PreprocessingExhausted("input masks");
    InputMask m = masks_[owner].front();
    masks_[owner].pop_front();
    return m;
}

}  // namespace eml
