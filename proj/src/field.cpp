#include "eml/field.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace eml {
namespace {

// Verified minimal c per bit length: p = 2^l - c is prime. Primality is
// re-checked once per process per (l, c) pair at Field construction.
struct LadderEntry {
    int l;
    uint32_t c;
};
constexpr LadderEntry kLadder[] = {
    {104, 17},  {114, 11},  {124, 59},  {128, 159}, {136, 113}, {148, 167},
    {168, 257}, {192, 237}, {200, 75},  {232, 567}, {256, 189},
};

constexpr int kMaxLimbs = 8;

// ---- raw little-endian multi-limb helpers (value semantics, size n) ----

inline uint32_t raw_add(uint32_t* out, const uint32_t* a, const uint32_t* b, int n) {
    uint64_t carry = 0;
    for (int i = 0; i < n; ++i) {
        uint64_t cur = static_cast<uint64_t>(a[i]) + b[i] + carry;
        out[i] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
    }
    return static_cast<uint32_t>(carry);
}

inline uint32_t raw_sub(uint32_t* out, const uint32_t* a, const uint32_t* b, int n) {
    uint64_t borrow = 0;
    for (int i = 0; i < n; ++i) {
        uint64_t cur = static_cast<uint64_t>(a[i]) - b[i] - borrow;
        out[i] = static_cast<uint32_t>(cur);
        borrow = (cur >> 32) & 1;
    }
    return static_cast<uint32_t>(borrow);
}

inline int raw_cmp(const uint32_t* a, const uint32_t* b, int n) {
    for (int i = n - 1; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

inline bool raw_is_zero(const uint32_t* a, int n) {
    for (int i = 0; i < n; ++i)
        if (a[i]) return false;
    return true;
}

// out[0..2n) = a * b (schoolbook; cost n^2 limb products)
inline void raw_mul(uint32_t* out, const uint32_t* a, const uint32_t* b, int n) {
    std::memset(out, 0, sizeof(uint32_t) * 2 * n);
    for (int i = 0; i < n; ++i) {
        uint64_t carry = 0;
        uint64_t ai = a[i];
        for (int j = 0; j < n; ++j) {
            uint64_t cur = ai * b[j] + out[i + j] + carry;
            out[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        out[i + n] = static_cast<uint32_t>(carry);
    }
}

// out[0..n+1) = a[0..n) * c
inline void raw_mul_small(uint32_t* out, const uint32_t* a, uint32_t c, int n) {
    uint64_t carry = 0;
    for (int i = 0; i < n; ++i) {
        uint64_t cur = static_cast<uint64_t>(a[i]) * c + carry;
        out[i] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
    }
    out[n] = static_cast<uint32_t>(carry);
}

// out[0..n) = in[0..m) >> k bits (k arbitrary), n >= needed
inline void raw_shr(uint32_t* out, int n, const uint32_t* in, int m, int k) {
    const int limb_off = k / 32;
    const int bit_off = k % 32;
    for (int i = 0; i < n; ++i) {
        uint64_t lo = (i + limb_off < m) ? in[i + limb_off] : 0;
        uint64_t hi = (i + limb_off + 1 < m) ? in[i + limb_off + 1] : 0;
        out[i] = static_cast<uint32_t>(((lo | (hi << 32)) >> bit_off));
    }
}

std::mutex g_verified_mu;
std::map<std::pair<int, uint32_t>, bool> g_verified;

}  // namespace

Field::Field(int l_bits, uint32_t c) : l_(l_bits), c_(c) {
    if (l_bits < 64 || l_bits > 32 * kMaxLimbs) throw ConfigError("field bit length out of range");
    nl_ = (l_bits + 31) / 32;
    esz_ = static_cast<size_t>((l_bits + 7) / 8);
    // p = 2^l - c
    uint32_t two_l[kMaxLimbs + 1] = {};
    two_l[l_bits / 32] = (l_bits % 32) ? (1u << (l_bits % 32)) : 0;
    int pn = nl_ + ((l_bits % 32) ? 0 : 1);
    if (l_bits % 32 == 0) two_l[nl_] = 1;
    uint32_t cc[kMaxLimbs + 1] = {c};
    uint32_t pw[kMaxLimbs + 1] = {};
    raw_sub(pw, two_l, cc, pn);
    for (int i = 0; i < nl_; ++i) p_.w[i] = pw[i];
    verify_prime();
}

Field Field::minimal_for(int min_bits) {
    for (const auto& e : kLadder)
        if (e.l >= min_bits) return Field(e.l, e.c);
    throw ConfigError("no field in the ladder is wide enough (need " + std::to_string(min_bits) +
                      " bits, max is 256)");
}

Field Field::from_bits(int l_bits) {
    for (const auto& e : kLadder)
        if (e.l == l_bits) return Field(e.l, e.c);
    throw ConfigError("no ladder prime with bit length " + std::to_string(l_bits));
}

Elem Field::from_u64(uint64_t v) const {
    Elem r;
    r.w[0] = static_cast<uint32_t>(v);
    r.w[1] = static_cast<uint32_t>(v >> 32);
    return r;
}

Elem Field::add(const Elem& a, const Elem& b) const {
    Elem r;
    uint32_t carry = raw_add(r.w.data(), a.w.data(), b.w.data(), nl_);
    if (carry || raw_cmp(r.w.data(), p_.w.data(), nl_) >= 0) raw_sub(r.w.data(), r.w.data(), p_.w.data(), nl_);
    return r;
}

Elem Field::sub(const Elem& a, const Elem& b) const {
    Elem r;
    uint32_t borrow = raw_sub(r.w.data(), a.w.data(), b.w.data(), nl_);
    if (borrow) raw_add(r.w.data(), r.w.data(), p_.w.data(), nl_);
    return r;
}

Elem Field::neg(const Elem& a) const {
    if (is_zero(a)) return a;
    Elem r;
    raw_sub(r.w.data(), p_.w.data(), a.w.data(), nl_);
    return r;
}

Elem Field::mul(const Elem& a, const Elem& b) const {
    uint32_t prod[2 * kMaxLimbs];
    raw_mul(prod, a.w.data(), b.w.data(), nl_);
    // fold hi*2^l -> hi*c until no bits remain above l (at most 4 rounds,
    // since each round shrinks the excess by ~(l - 10) bits)
    uint32_t hi[kMaxLimbs + 1];
    uint32_t hic[kMaxLimbs + 2];
    const int lb = l_ / 32, bb = l_ % 32;
    for (;;) {
        raw_shr(hi, nl_ + 1, prod, 2 * nl_, l_);
        if (raw_is_zero(hi, nl_ + 1)) break;
        for (int i = lb + (bb ? 1 : 0); i < 2 * nl_; ++i) prod[i] = 0;
        if (bb) prod[lb] &= (1u << bb) - 1;
        raw_mul_small(hic, hi, c_, nl_ + 1);
        raw_add(prod, prod, hic, nl_ + 2);
    }
    Elem r;
    for (int i = 0; i < nl_; ++i) r.w[i] = prod[i];
    while (raw_cmp(r.w.data(), p_.w.data(), nl_) >= 0) raw_sub(r.w.data(), r.w.data(), p_.w.data(), nl_);
    return r;
}

Elem Field::mul_u32(const Elem& a, uint32_t b) const {
    Elem bb = from_u64(b);
    return mul(a, bb);
}

Elem Field::pow(const Elem& a, const Elem& e) const {
    Elem result = one();
    Elem base = a;
    for (int i = 0; i < nl_; ++i) {
        uint32_t word = e.w[i];
        for (int bit = 0; bit < 32; ++bit) {
            if (word & 1u) result = mul(result, base);
            word >>= 1;
            base = mul(base, base);
        }
    }
    return result;
}

Elem Field::inv(const Elem& a) const {
    if (is_zero(a)) throw DivisionByZero("inverse of zero");
    Elem e;
    uint32_t two[kMaxLimbs] = {2};
    raw_sub(e.w.data(), p_.w.data(), two, nl_);
    return pow(a, e);
}

bool Field::is_zero(const Elem& a) const { return raw_is_zero(a.w.data(), nl_); }

int Field::cmp(const Elem& a, const Elem& b) const { return raw_cmp(a.w.data(), b.w.data(), nl_); }

void Field::to_bytes(const Elem& a, uint8_t* out) const {
    for (size_t i = 0; i < esz_; ++i) out[i] = static_cast<uint8_t>(a.w[i / 4] >> (8 * (i % 4)));
}

Elem Field::from_bytes(const uint8_t* in) const {
    Elem r;
    for (size_t i = 0; i < esz_; ++i) r.w[i / 4] |= static_cast<uint32_t>(in[i]) << (8 * (i % 4));
    if (raw_cmp(r.w.data(), p_.w.data(), nl_) >= 0)
        throw RangeError("non-canonical field element on the wire");
    return r;
}

Elem Field::random(Rng& rng) const {
    // rejection sampling; acceptance probability 1 - c/2^l
    for (;;) {
        Elem r = random_bits(rng, l_);
        if (raw_cmp(r.w.data(), p_.w.data(), nl_) < 0) return r;
    }
}

Elem Field::random_bits(Rng& rng, int bits) const {
    Elem r;
    int full = bits / 32, rem = bits % 32;
    for (int i = 0; i < full; ++i) r.w[i] = rng.next_u32();
    if (rem) r.w[full] = rng.next_u32() & ((1u << rem) - 1);
    return r;
}

Elem Field::pow2(int k) const {
    if (k < 0 || k >= l_) throw ConfigError("pow2 exponent outside field width");
    Elem r;
    r.w[k / 32] = 1u << (k % 32);
    return r;
}

Elem Field::shift_right(const Elem& a, int k) const {
    Elem r;
    raw_shr(r.w.data(), nl_, a.w.data(), nl_, k);
    return r;
}

void Field::verify_prime() const {
    {
        std::lock_guard<std::mutex> lk(g_verified_mu);
        auto it = g_verified.find({l_, c_});
        if (it != g_verified.end()) {
            if (!it->second) throw ConfigError("modulus is composite");
            return;
        }
    }
    // Miller-Rabin, 40 pseudo-random bases; deterministic seed so the check
    // itself is reproducible.
    bool prime = true;
    Elem n_minus_1 = sub(zero(), one());  // p - 1
    int s = 0;
    Elem d = n_minus_1;
    while ((d.w[0] & 1u) == 0) {
        d = shift_right(d, 1);
        ++s;
    }
    Rng rng(0x6d72626173657321ULL ^ (static_cast<uint64_t>(l_) << 32) ^ c_);
    for (int iter = 0; iter < 40 && prime; ++iter) {
        Elem a = random(rng);
        if (is_zero(a) || cmp(a, one()) == 0) continue;
        Elem x = pow(a, d);
        if (cmp(x, one()) == 0 || cmp(x, n_minus_1) == 0) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul(x, x);
            if (cmp(x, n_minus_1) == 0) {
                witness = false;
                break;
            }
        }
        if (witness) prime = false;
    }
    {
        std::lock_guard<std::mutex> lk(g_verified_mu);
        g_verified[{l_, c_}] = prime;
    }
    if (!prime) throw ConfigError("modulus is composite");
}

}  // namespace eml
