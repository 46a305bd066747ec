#pragma once

#include <cmath>

#include "eml/field.hpp"

namespace eml {

// Fixed-point layout inside the field:
//   f    fractional bits (one "ulp" is 2^-f)
//   M    magnitude bits; encodable values satisfy |x| < 2^(M-f-1)
//   s    statistical masking slack in bits
// Negative values map to p - |x|*2^f. Signed intermediates before
// truncation reach 2^(2M-2) and masks add 2^(2M-1+s), so the field must
// satisfy bits(p) >= 2M + s + 2 or nothing downstream is sound.
struct FixedParams {
    int f = 42;
    int M = 63;
    int s = 40;
};

inline FixedParams fixed_for_precision(int P) { return FixedParams{P, P + 21, 40}; }

class FixedCodec {
  public:
    FixedCodec(const Field& field, FixedParams prm) : F_(field), prm_(prm) {
        if (prm.f < 1 || prm.M <= prm.f || prm.s < 0) throw ConfigError("bad fixed-point parameters");
        if (2 * prm.M + prm.s + 2 > F_.bits())
            throw ConfigError("field too narrow: need bits(p) >= 2M+s+2 = " +
                              std::to_string(2 * prm.M + prm.s + 2) + ", have " +
                              std::to_string(F_.bits()));
        pos_limit_ = F_.pow2(prm.M + prm.s);
        neg_limit_ = F_.sub(F_.prime(), pos_limit_);
    }

    const FixedParams& params() const { return prm_; }
    const Field& field() const { return F_; }

    // round(x * 2^f) half away from zero, negatives as p - |.|
    Elem encode(double x) const {
        if (!std::isfinite(x)) throw RangeError("cannot encode non-finite value");
        const double bound = std::ldexp(1.0, prm_.M - prm_.f - 1);
        if (std::fabs(x) >= bound) throw RangeError("value exceeds fixed-point magnitude");
        const bool negative = x < 0;
        double ax = std::fabs(x);
        if (ax == 0.0) return F_.zero();
        // exact route: ax = m * 2^(e-53) with integer m, then shift by f
        int e;
        double mantissa = std::frexp(ax, &e);  // ax = mantissa * 2^e, mantissa in [0.5, 1)
        auto m = static_cast<uint64_t>(std::ldexp(mantissa, 53));  // 53-bit integer
        const int shift = e - 53 + prm_.f;
        Elem mag;
        if (shift >= 0) {
            mag = F_.mul(F_.from_u64(m), F_.pow2(shift));
        } else if (-shift >= 64) {
            mag = F_.zero();
        } else {
            const int sh = -shift;
            uint64_t rounded = (m + (1ULL << (sh - 1))) >> sh;
            mag = F_.from_u64(rounded);
        }
        return negative ? F_.neg(mag) : mag;
    }

    // representative bands: [0, 2^(M+s)) positive, (p - 2^(M+s), p] negative;
    // anything between is not a valid fixed-point value
    double decode(const Elem& v) const {
        if (F_.cmp(v, pos_limit_) < 0) return to_double(v);
        if (F_.cmp(v, neg_limit_) > 0) return -to_double(F_.sub(F_.prime(), v));
        throw RangeError("field element outside both fixed-point bands");
    }

    double ulp() const { return std::ldexp(1.0, -prm_.f); }

  private:
    double to_double(const Elem& v) const {
        double acc = 0.0;
        for (int i = F_.limbs() - 1; i >= 0; --i) acc = acc * 4294967296.0 + v.w[i];
        return std::ldexp(acc, -prm_.f);
    }
    const Field& F_;
    FixedParams prm_;
    Elem pos_limit_, neg_limit_;
};

}  // namespace eml
