#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

#include "eml/errors.hpp"
#include "eml/rng.hpp"

namespace eml {

// One field element, little-endian 32-bit limbs. Fixed POD footprint so
// vectors of shares are contiguous; only the first `Field::limbs()` limbs
// are active, the rest stay zero. Arithmetic cost scales with the active
// limb count (quadratic per multiplication), not with the array size.
struct Elem {
    std::array<uint32_t, 8> w{};
    bool operator==(const Elem& o) const { return w == o.w; }
    bool operator!=(const Elem& o) const { return w != o.w; }
};

// Prime field p = 2^l - c (pseudo-Mersenne). Reduction folds the high part
// back with a multiply by the small constant c.
class Field {
  public:
    Field(int l_bits, uint32_t c);

    // smallest table prime with bit length >= min_bits
    static Field minimal_for(int min_bits);
    // table prime with exactly this bit length (throws ConfigError if absent)
    static Field from_bits(int l_bits);

    int bits() const { return l_; }
    uint32_t fold_c() const { return c_; }
    int limbs() const { return nl_; }
    size_t elem_bytes() const { return esz_; }
    const Elem& prime() const { return p_; }

    Elem zero() const { return Elem{}; }
    Elem one() const { return from_u64(1); }
    Elem from_u64(uint64_t v) const;

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem mul_u32(const Elem& a, uint32_t b) const;
    Elem pow(const Elem& a, const Elem& e) const;
    Elem inv(const Elem& a) const;  // Fermat; DivisionByZero on zero

    bool is_zero(const Elem& a) const;
    // compare canonical representatives as integers
    int cmp(const Elem& a, const Elem& b) const;

    // canonical little-endian encoding, exactly elem_bytes() bytes
    void to_bytes(const Elem& a, uint8_t* out) const;
    Elem from_bytes(const uint8_t* in) const;  // RangeError if >= p

    Elem random(Rng& rng) const;               // uniform on [0, p)
    Elem random_bits(Rng& rng, int bits) const;  // uniform on [0, 2^bits), bits < l

    // integer helpers on canonical representatives (inputs < p, results < p)
    Elem pow2(int k) const;                       // 2^k, requires k < l
    Elem shift_right(const Elem& a, int k) const; // floor(a / 2^k)

  private:
    void verify_prime() const;
    int l_;
    uint32_t c_;
    int nl_;
    size_t esz_;
    Elem p_;
};

}  // namespace eml
