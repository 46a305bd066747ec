#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "eml/channel.hpp"
#include "eml/fixedpt.hpp"
#include "eml/serial.hpp"

namespace eml {

constexpr uint32_t kProtocolVersion = 1;

// Parameters of the shared-exponential evaluation exp(-u) for u in
// [0, u_max]: scale down by 2^k, degree-d Taylor, square k times.
// Validity needs (a) reduced argument u_max/2^k <= 1, i.e. k >= log2(u_max),
// and (b) the clamp guarantee exp(-u_max) < 2^-f, i.e. u_max > f*ln2,
// otherwise "saturated" inputs would not decode to 0 within one ulp.
struct ExpConfig {
    int u_max = 32;
    int k = 6;
    int d = 8;

    void validate(int f) const {
        if (u_max < 1 || k < 0 || d < 1) throw ConfigError("bad exp configuration");
        int need_k = 0;
        while ((1 << need_k) < u_max) ++need_k;
        if (k < need_k)
            throw ConfigError("exp config: k must satisfy 2^k >= u_max (need k >= " +
                              std::to_string(need_k) + ")");
        if (static_cast<double>(u_max) <= f * 0.6931471805599453)
            throw ConfigError("exp config: u_max too small for f=" + std::to_string(f) +
                              " (need u_max > f*ln2); raise u_max");
    }

    // analytic worst-case error of the plaintext reference scheme
    // (Taylor tail amplified by the k squarings), mask noise excluded
    double analytic_bound() const {
        double r = static_cast<double>(u_max) / std::ldexp(1.0, k);
        double tail = 1.0;
        for (int j = 1; j <= d + 1; ++j) tail *= r / j;
        return std::ldexp(tail, k);
    }

    static ExpConfig for_precision(int f) {
        ExpConfig e;
        if (e.u_max <= f * 0.6931471805599453) {
            // scale the clamp point up in powers of two, one extra squaring each
            while (e.u_max <= f * 0.6931471805599453) {
                e.u_max *= 2;
                e.k += 1;
            }
        }
        return e;
    }
};

// Everything both parties must agree on before any share moves.
struct SessionConfig {
    uint32_t version = kProtocolVersion;
    int field_bits = 128;
    uint32_t field_c = 159;
    FixedParams fx{};
    uint32_t L = 0;       // representation length
    double sigma = 0.0;   // kernel width (public, folded into inputs)
    ExpConfig exp{};
    uint32_t preproc_mode = 0;  // 0 = dealer, 1 = OT

    void serialize(ByteWriter& w) const {
        w.u32_le(version);
        w.u32_le(static_cast<uint32_t>(field_bits));
        w.u32_le(field_c);
        w.u32_le(static_cast<uint32_t>(fx.f));
        w.u32_le(static_cast<uint32_t>(fx.M));
        w.u32_le(static_cast<uint32_t>(fx.s));
        w.u32_le(L);
        w.f64_le(sigma);
        w.u32_le(static_cast<uint32_t>(exp.u_max));
        w.u32_le(static_cast<uint32_t>(exp.k));
        w.u32_le(static_cast<uint32_t>(exp.d));
        w.u32_le(preproc_mode);
    }

    static SessionConfig deserialize(ByteReader& r) {
        SessionConfig c;
        c.version = r.u32_le();
        c.field_bits = static_cast<int>(r.u32_le());
        c.field_c = r.u32_le();
        c.fx.f = static_cast<int>(r.u32_le());
        c.fx.M = static_cast<int>(r.u32_le());
        c.fx.s = static_cast<int>(r.u32_le());
        c.L = r.u32_le();
        c.sigma = r.f64_le();
        c.exp.u_max = static_cast<int>(r.u32_le());
        c.exp.k = static_cast<int>(r.u32_le());
        c.exp.d = static_cast<int>(r.u32_le());
        c.preproc_mode = r.u32_le();
        return c;
    }
};

// derive the standard configuration for a precision P: f = P, M = P + 21,
// minimal ladder field with bits >= 2M + s + 2
SessionConfig standard_config(int P, uint32_t L, double sigma, uint32_t preproc_mode = 0);

// Exchange configs; throws AgreementMismatch naming the first disagreeing
// field. Both sides throw symmetrically.
void run_handshake(Channel& ch, const SessionConfig& mine);

}  // namespace eml
