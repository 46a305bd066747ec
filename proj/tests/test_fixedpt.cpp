#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eml/fixedpt.hpp"
#include "eml/rng.hpp"

using namespace eml;

namespace {
// f=15 layout in a 128-bit field: M = 36, s = 40, 2M+s+2 = 114 <= 128
FixedCodec codec15(const Field& F) { return FixedCodec(F, FixedParams{15, 36, 40}); }
}  // namespace

TEST_CASE("encode: pinned values at f=15") {
    Field F = Field::from_bits(128);
    FixedCodec cx = codec15(F);
    CHECK(cx.encode(0.0) == F.zero());
    CHECK(cx.encode(1.5) == F.from_u64(49152));
    CHECK(cx.encode(-1.0) == F.sub(F.prime(), F.from_u64(32768)));
    // pi * 2^15 = 102943.708..., rounds half-away to 102944
    CHECK(cx.encode(3.14159265358979323846) == F.from_u64(102944));
    // exact half rounds away from zero
    CHECK(cx.encode(std::ldexp(3.0, -16)) == F.from_u64(2));   // 1.5 ulp -> 2
    CHECK(cx.encode(-std::ldexp(3.0, -16)) == F.neg(F.from_u64(2)));
}

TEST_CASE("encode range guard") {
    Field F = Field::from_bits(128);
    FixedCodec cx = codec15(F);  // M-f-1 = 20 -> |x| < 2^20
    CHECK_NOTHROW(cx.encode(1048575.0));
    CHECK_THROWS_AS(cx.encode(1048576.0), RangeError);
    CHECK_THROWS_AS(cx.encode(-1048576.0), RangeError);
    CHECK_THROWS_AS(cx.encode(std::nan("")), RangeError);
}

TEST_CASE("decode bands and dead zone") {
    Field F = Field::from_bits(128);
    FixedCodec cx = codec15(F);
    CHECK(cx.decode(F.zero()) == 0.0);
    CHECK(cx.decode(F.from_u64(49152)) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(cx.decode(F.sub(F.prime(), F.from_u64(32768))) == doctest::Approx(-1.0).epsilon(1e-12));
    // middle of the field is in neither band
    Elem dead = F.pow2(100);
    CHECK_THROWS_AS(cx.decode(dead), RangeError);
}

TEST_CASE("roundtrip within 2^-16 at f=15") {
    Field F = Field::from_bits(128);
    FixedCodec cx = codec15(F);
    Rng rng(17);
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        double mag = std::exp(rng.uniform(-10.0, 12.0));
        double x = (rng.uniform() < 0.5 ? -1 : 1) * mag;
        if (std::fabs(x) >= std::ldexp(1.0, 20)) continue;
        double back = cx.decode(cx.encode(x));
        worst = std::max(worst, std::fabs(back - x));
    }
    CHECK(worst <= std::ldexp(1.0, -16) * (1 + 1e-9));
}

TEST_CASE("roundtrip is exact on representable grid points") {
    Field F = Field::from_bits(168);
    FixedCodec cx(F, fixed_for_precision(42));
    Rng rng(23);
    for (int i = 0; i < 2000; ++i) {
        // q * 2^-20 with |q| <= 2^30: encoded value q*2^22 fits 53 bits exactly
        int64_t q = static_cast<int64_t>(rng.below(1ULL << 31)) - (1LL << 30);
        double x = std::ldexp(static_cast<double>(q), -20);
        if (x == 0) continue;
        CHECK(cx.decode(cx.encode(x)) == x);
    }
}

TEST_CASE("narrow field is rejected") {
    Field F = Field::from_bits(104);
    // 2M+s+2 = 2*36+40+2 = 114 > 104
    CHECK_THROWS_AS(FixedCodec(F, FixedParams{15, 36, 40}), ConfigError);
    CHECK_NOTHROW(FixedCodec(F, FixedParams{10, 31, 40}));  // 104 exactly
}

TEST_CASE("high-precision encode is exact beyond double range of 2^f") {
    // f=74 pushes x*2^f far past 2^63; the mantissa/shift route must stay exact
    Field F = Field::from_bits(232);
    FixedCodec cx(F, fixed_for_precision(74));
    // 1.0 -> 2^74 exactly
    CHECK(cx.encode(1.0) == F.pow2(74));
    CHECK(cx.decode(F.pow2(74)) == 1.0);
    // 2^-74 is one ulp
    CHECK(cx.encode(std::ldexp(1.0, -74)) == F.one());
    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        double x = rng.uniform(-1000.0, 1000.0);
        double back = cx.decode(cx.encode(x));
        CHECK(std::fabs(back - x) <= std::ldexp(1.0, -74) + std::fabs(x) * 1e-15);
    }
}
