#include "eml/engine.hpp"

#include <cstring>

#include "eml/exp.hpp"
#include "eml/serial.hpp"
#include "hash_util.hpp"

namespace eml {

Engine::Engine(int party, const SessionConfig& cfg, Channel& ch, PreprocSource& pp, uint64_t seed)
    : party_(party),
      cfg_(cfg),
      F_(cfg.field_bits, cfg.field_c),
      codec_(F_, cfg.fx),
      ch_(ch),
      pp_(pp),
      rng_(seed) {
    detail::ensure_sodium();
    cfg_.exp.validate(cfg_.fx.f);
    delta_ = pp_.mac_key_share();
    k_off_ = F_.pow2(2 * cfg_.fx.M - 2);
}

void Engine::bind_model_fingerprint(const std::array<uint8_t, 32>& fp) {
    if (fingerprint_bound_ && fp != fingerprint_)
        throw SessionMismatch(
            "session is already bound to a different training split; open a new session");
    fingerprint_ = fp;
    fingerprint_bound_ = true;
}

// ----- input sharing -----

std::vector<AuthShare> Engine::give_input(const std::vector<Elem>& xs) {
    ByteWriter w;
    std::vector<AuthShare> out(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        InputMask mk = pp_.next_mask(party_);
        if (!mk.known) throw ConfigError("preprocessing returned a foreign mask to the owner");
        Elem eps = F_.sub(xs[i], mk.plain);
        w.elem(F_, eps);
        out[i] = add_public(mk.share, eps);
    }
    ch_.send(MsgType::Share, w.buf);
    return out;
}

std::vector<AuthShare> Engine::take_input(int owner, size_t n) {
    if (owner == party_) throw ConfigError("take_input called by the owner");
    std::vector<InputMask> masks(n);
    for (size_t i = 0; i < n; ++i) masks[i] = pp_.next_mask(owner);
    auto [t, payload] = ch_.recv();
    if (t != MsgType::Share) throw ProtocolAbort("expected an input-share frame");
    if (payload.size() != n * F_.elem_bytes())
        throw ProtocolAbort("input-share frame has the wrong element count");
    ByteReader r(payload);
    std::vector<AuthShare> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = add_public(masks[i].share, r.elem(F_));
    return out;
}

// ----- local linear layer -----

AuthShare Engine::add(const AuthShare& a, const AuthShare& b) const {
    return {F_.add(a.v, b.v), F_.add(a.m, b.m)};
}
AuthShare Engine::sub(const AuthShare& a, const AuthShare& b) const {
    return {F_.sub(a.v, b.v), F_.sub(a.m, b.m)};
}
AuthShare Engine::neg(const AuthShare& a) const { return {F_.neg(a.v), F_.neg(a.m)}; }

AuthShare Engine::add_public(const AuthShare& a, const Elem& c) const {
    AuthShare r = a;
    if (party_ == 0) r.v = F_.add(r.v, c);
    r.m = F_.add(r.m, F_.mul(delta_, c));
    return r;
}

AuthShare Engine::mul_public(const AuthShare& a, const Elem& c) const {
    return {F_.mul(a.v, c), F_.mul(a.m, c)};
}

AuthShare Engine::public_share(const Elem& c) const { return add_public(AuthShare{}, c); }

// ----- opening and the deferred MAC log -----

std::vector<Elem> Engine::open_raw(std::vector<Elem> mine, const std::vector<AuthShare>& xs) {
    ++open_rounds_;
    if (tamper_armed_ && open_rounds_ == tamper_round_ && tamper_elem_ < mine.size()) {
        mine[tamper_elem_] = F_.add(mine[tamper_elem_], tamper_delta_);
        tamper_armed_ = false;
    }
    ByteWriter w;
    for (const Elem& e : mine) w.elem(F_, e);
    std::vector<uint8_t> peer = ch_.exchange(MsgType::Open, w.buf);
    if (peer.size() != mine.size() * F_.elem_bytes())
        throw ProtocolAbort("open round carries the wrong element count");
    ByteReader r(peer);
    std::vector<Elem> values(mine.size());
    for (size_t i = 0; i < mine.size(); ++i) {
        values[i] = F_.add(xs[i].v, r.elem(F_));
        log_.push_back({values[i], xs[i].m});
        if (audit_) audit_open_values_.push_back(values[i]);
    }
    total_opened_ += mine.size();
    return values;
}

std::vector<Elem> Engine::open(const std::vector<AuthShare>& xs) {
    std::vector<Elem> mine(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) mine[i] = xs[i].v;
    return open_raw(std::move(mine), xs);
}

void Engine::check_macs() {
    if (log_.empty() && !sigma_tamper_armed_) return;
    const Elem* tamper = sigma_tamper_armed_ ? &sigma_tamper_delta_ : nullptr;
    sigma_tamper_armed_ = false;
    run_mac_check(F_, ch_, rng_, party_, delta_, log_, tamper);
}

// ----- interactive fixed-point layer -----

std::vector<AuthShare> Engine::mul(const std::vector<AuthShare>& xs,
                                   const std::vector<AuthShare>& ys) {
    if (xs.size() != ys.size()) throw ConfigError("mul: length mismatch");
    const size_t n = xs.size();
    std::vector<Triple> ts(n);
    std::vector<AuthShare> masked(2 * n);
    for (size_t i = 0; i < n; ++i) {
        ts[i] = pp_.next_triple();
        masked[i] = sub(xs[i], ts[i].a);          // epsilon = x - a
        masked[n + i] = sub(ys[i], ts[i].b);       // rho     = y - b
    }
    std::vector<Elem> opened = open(masked);  // exactly two masked openings per product
    std::vector<AuthShare> zs(n);
    for (size_t i = 0; i < n; ++i) {
        const Elem& eps = opened[i];
        const Elem& rho = opened[n + i];
        AuthShare z = ts[i].c;
        z = add(z, mul_public(ts[i].b, eps));
        z = add(z, mul_public(ts[i].a, rho));
        z = add_public(z, F_.mul(eps, rho));
        zs[i] = z;
    }
    return zs;
}

std::vector<AuthShare> Engine::trunc(const std::vector<AuthShare>& xs, int shift) {
    if (shift < 0) shift = cfg_.fx.f;
    const size_t n = xs.size();
    // lift the signed value into [0, 2^(2M-1)), add the statistical mask
    const Elem lift_back = F_.pow2(2 * cfg_.fx.M - 2 - shift);
    std::vector<TruncPair> ps(n);
    std::vector<AuthShare> masked(n);
    for (size_t i = 0; i < n; ++i) {
        ps[i] = pp_.next_trunc_pair(shift);
        masked[i] = add_public(add(xs[i], ps[i].r), k_off_);
    }
    std::vector<Elem> opened = open(masked);
    std::vector<AuthShare> out(n);
    for (size_t i = 0; i < n; ++i) {
        Elem q = F_.shift_right(opened[i], shift);
        out[i] = add_public(neg(ps[i].rt), F_.sub(q, lift_back));
    }
    return out;
}

std::vector<AuthShare> Engine::fixed_mul(const std::vector<AuthShare>& xs,
                                         const std::vector<AuthShare>& ys) {
    return trunc(mul(xs, ys));
}

std::vector<AuthShare> Engine::sq_distance(const std::vector<std::vector<AuthShare>>& rows,
                                           const std::vector<AuthShare>& q) {
    const size_t n = rows.size();
    const size_t L = q.size();
    std::vector<AuthShare> diffs;
    diffs.reserve(n * L);
    for (size_t i = 0; i < n; ++i) {
        if (rows[i].size() != L) throw ConfigError("sq_distance: row length mismatch");
        for (size_t j = 0; j < L; ++j) diffs.push_back(sub(rows[i][j], q[j]));
    }
    std::vector<AuthShare> sq = mul(diffs, diffs);  // n*L triples, one round
    std::vector<AuthShare> sums(n);
    for (size_t i = 0; i < n; ++i) {
        AuthShare acc{};
        for (size_t j = 0; j < L; ++j) acc = add(acc, sq[i * L + j]);
        sums[i] = acc;
    }
    return trunc(sums);  // n truncation pairs, one round
}

std::vector<AuthShare> Engine::exp_neg_reduced(const std::vector<AuthShare>& ts) {
    const size_t n = ts.size();
    const auto coef = taylor_coefficients(cfg_.exp.d);
    std::vector<Elem> coef_enc(coef.size());
    for (size_t j = 0; j < coef.size(); ++j) coef_enc[j] = codec_.encode(coef[j]);
    std::vector<AuthShare> t_neg(n);
    for (size_t i = 0; i < n; ++i) t_neg[i] = neg(ts[i]);
    std::vector<AuthShare> b(n, public_share(coef_enc[cfg_.exp.d]));
    for (int j = cfg_.exp.d - 1; j >= 0; --j) {
        b = fixed_mul(b, t_neg);
        for (size_t i = 0; i < n; ++i) b[i] = add_public(b[i], coef_enc[j]);
    }
    for (int i = 0; i < cfg_.exp.k; ++i) b = fixed_mul(b, b);
    return b;
}

std::vector<AuthShare> Engine::exp_neg(const std::vector<AuthShare>& us) {
    return exp_neg_reduced(trunc(us, cfg_.exp.k));
}

AuthShare Engine::inner_product(const std::vector<AuthShare>& as,
                                const std::vector<AuthShare>& bs) {
    if (as.size() != bs.size()) throw ConfigError("inner_product: length mismatch");
    const size_t n = as.size();
    std::vector<Triple> ts(n);
    std::vector<AuthShare> masked(2 * n);
    for (size_t i = 0; i < n; ++i) {
        ts[i] = pp_.next_triple();
        masked[i] = sub(as[i], ts[i].a);
        masked[n + i] = sub(bs[i], ts[i].b);
    }
    std::vector<Elem> opened = open(masked);
    AuthShare acc{};
    for (size_t i = 0; i < n; ++i) {
        const Elem& eps = opened[i];
        const Elem& rho = opened[n + i];
        AuthShare z = ts[i].c;
        z = add(z, mul_public(ts[i].b, eps));
        z = add(z, mul_public(ts[i].a, rho));
        z = add_public(z, F_.mul(eps, rho));
        acc = add(acc, z);  // sum before the single rescale
    }
    return trunc({acc})[0];
}

std::optional<Elem> Engine::reveal_to(int receiver, const AuthShare& y) {
    InputMask mk = pp_.next_mask(receiver);
    AuthShare masked = add(y, mk.share);
    Elem c = open({masked})[0];
    check_macs();  // nothing is released unless every opening verifies
    if (receiver == party_) {
        if (!mk.known) throw ConfigError("receiver mask is not known to the receiver");
        return F_.sub(c, mk.plain);
    }
    return std::nullopt;
}

void Engine::tamper_open(uint64_t round_idx, size_t elem_idx, const Elem& delta) {
    tamper_armed_ = true;
    tamper_round_ = round_idx;
    tamper_elem_ = elem_idx;
    tamper_delta_ = delta;
}

void Engine::tamper_sigma(const Elem& delta) {
    sigma_tamper_armed_ = true;
    sigma_tamper_delta_ = delta;
}

}  // namespace eml
