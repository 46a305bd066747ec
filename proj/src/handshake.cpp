#include "eml/config.hpp"

namespace eml {

SessionConfig standard_config(int P, uint32_t L, double sigma, uint32_t preproc_mode) {
    if (P < 2) throw ConfigError("precision must be at least 2 fractional bits");
    SessionConfig c;
    c.fx = fixed_for_precision(P);
    Field F = Field::minimal_for(2 * c.fx.M + c.fx.s + 2);
    c.field_bits = F.bits();
    c.field_c = F.fold_c();
    c.L = L;
    c.sigma = sigma;
    c.exp = ExpConfig::for_precision(P);
    c.exp.validate(P);
    c.preproc_mode = preproc_mode;
    return c;
}

void run_handshake(Channel& ch, const SessionConfig& mine) {
    ch.set_phase(Phase::Handshake);
    ByteWriter w;
    mine.serialize(w);
    std::vector<uint8_t> peer_bytes = ch.exchange(MsgType::Handshake, w.buf);
    ByteReader r(peer_bytes);
    SessionConfig theirs = SessionConfig::deserialize(r);

    auto fail = [&](const char* field) {
        ch.send_abort(std::string("handshake mismatch: ") + field);
        throw AgreementMismatch(field);
    };
    if (theirs.version != mine.version) fail("version");
    if (theirs.field_bits != mine.field_bits) fail("field_bits");
    if (theirs.field_c != mine.field_c) fail("field_c");
    if (theirs.fx.f != mine.fx.f) fail("f");
    if (theirs.fx.M != mine.fx.M) fail("M");
    if (theirs.fx.s != mine.fx.s) fail("s");
    if (theirs.L != mine.L) fail("L");
    if (theirs.sigma != mine.sigma) fail("sigma");
    if (theirs.exp.u_max != mine.exp.u_max) fail("exp.u_max");
    if (theirs.exp.k != mine.exp.k) fail("exp.k");
    if (theirs.exp.d != mine.exp.d) fail("exp.d");
    if (theirs.preproc_mode != mine.preproc_mode) fail("preproc_mode");
}

}  // namespace eml
