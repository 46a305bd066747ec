#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eml/engine.hpp"
#include "eml/exp.hpp"
#include "mpc_test_util.hpp"

using namespace eml;
using eml::test::run_engines;
using eml::test::run_pair;

namespace {
SessionConfig cfg42() { return standard_config(42, 8, 32.0); }

// both parties execute the same program; party 0 gives inputs
template <typename Fn>
void symmetric(const SessionConfig& cfg, uint64_t seed, Fn body) {
    run_engines(cfg, seed, [&](Engine& e) { body(e); }, [&](Engine& e) { body(e); });
}
}  // namespace

TEST_CASE("share and open roundtrip; linear ops are traffic-free") {
    SessionConfig cfg = cfg42();
    symmetric(cfg, 11, [&](Engine& e) {
        const FixedCodec& cx = e.codec();
        std::vector<Elem> vals = {cx.encode(1.25), cx.encode(-3.5), cx.encode(0.0)};
        auto xs = e.party() == 0 ? e.give_input(vals) : e.take_input(0, 3);

        uint64_t sent_before = e.channel().stats().total_sent();
        AuthShare s = e.add(xs[0], xs[1]);
        s = e.sub(s, xs[2]);
        s = e.add_public(s, cx.encode(2.0));
        CHECK(e.channel().stats().total_sent() == sent_before);  // purely local

        auto opened = e.open({xs[0], xs[1], s});
        e.check_macs();
        CHECK(cx.decode(opened[0]) == doctest::Approx(1.25).epsilon(1e-10));
        CHECK(cx.decode(opened[1]) == doctest::Approx(-3.5).epsilon(1e-10));
        CHECK(cx.decode(opened[2]) == doctest::Approx(-0.25).epsilon(1e-10));
    });
}

TEST_CASE("masked input wires shift exactly with the input") {
    // with the dealer seed fixed, the same mask r serves both runs, so the
    // two wires differ by exactly x1 - x2: the wire alone carries no more
    // information than that difference
    SessionConfig cfg = cfg42();
    Field F(cfg.field_bits, cfg.field_c);
    std::vector<Elem> wire1, wire2;
    for (int run = 0; run < 2; ++run) {
        run_pair(
            [&](Channel& ch) {
                DealerSource pp(F, cfg.fx, 77, 0);
                Engine e(0, cfg, ch, pp, 1);
                ch.set_phase(Phase::Online);
                ch.enable_capture(true);
                FixedCodec cx(F, cfg.fx);
                e.give_input({cx.encode(run == 0 ? 5.0 : 7.5)});
                auto& cap = ch.captured();
                ByteReader r(cap.at(0).payload);
                (run == 0 ? wire1 : wire2).push_back(r.elem(F));
            },
            [&](Channel& ch) {
                DealerSource pp(F, cfg.fx, 77, 1);
                Engine e(1, cfg, ch, pp, 2);
                ch.set_phase(Phase::Online);
                e.take_input(0, 1);
            });
    }
    FixedCodec cx(F, cfg.fx);
    CHECK(F.sub(wire2[0], wire1[0]) == cx.encode(2.5));
}

TEST_CASE("beaver multiplication: exact product, exactly two openings each") {
    SessionConfig cfg = cfg42();
    symmetric(cfg, 23, [&](Engine& e) {
        const FixedCodec& cx = e.codec();
        std::vector<double> a = {1.5, -2.25, 0.125, 700.0};
        std::vector<double> b = {2.0, 3.0, -8.0, -0.5};
        std::vector<Elem> ea, eb;
        for (double v : a) ea.push_back(cx.encode(v));
        for (double v : b) eb.push_back(cx.encode(v));
        auto xs = e.party() == 0 ? e.give_input(ea) : e.take_input(0, 4);
        auto ys = e.party() == 1 ? e.give_input(eb) : e.take_input(1, 4);

        uint64_t opens_before = e.opened_count();
        uint64_t rounds_before = e.round_count();
        auto zs = e.mul(xs, ys);
        CHECK(e.opened_count() - opens_before == 8);   // two masked openings per product
        CHECK(e.round_count() - rounds_before == 1);   // one batched round

        auto rescaled = e.trunc(zs);
        auto opened = e.open(rescaled);
        e.check_macs();
        for (size_t i = 0; i < a.size(); ++i) {
            double got = cx.decode(opened[i]);
            CHECK(std::fabs(got - a[i] * b[i]) <= std::ldexp(1.0, -cfg.fx.f + 1));
        }
    });
}

TEST_CASE("fixed_mul error bound holds over random inputs") {
    // inputs on a coarse dyadic grid so they encode exactly: any deviation
    // beyond 2^(1-f) is then protocol error, not input quantization
    SessionConfig cfg = cfg42();
    symmetric(cfg, 31, [&](Engine& e) {
        const FixedCodec& cx = e.codec();
        Rng vals(99);
        const int n = 64;
        std::vector<Elem> ea, eb;
        std::vector<double> a, b;
        for (int i = 0; i < n; ++i) {
            a.push_back((static_cast<double>(vals.below(61441)) - 30720.0) / 1024.0);
            b.push_back((static_cast<double>(vals.below(61441)) - 30720.0) / 1024.0);
            ea.push_back(cx.encode(a.back()));
            eb.push_back(cx.encode(b.back()));
        }
        auto xs = e.party() == 0 ? e.give_input(ea) : e.take_input(0, n);
        auto ys = e.party() == 1 ? e.give_input(eb) : e.take_input(1, n);
        auto zs = e.fixed_mul(xs, ys);
        auto opened = e.open(zs);
        e.check_macs();
        const double bound = std::ldexp(1.0, -cfg.fx.f + 1);
        for (int i = 0; i < n; ++i)
            CHECK(std::fabs(cx.decode(opened[i]) - a[i] * b[i]) <= bound);
    });
}

TEST_CASE("sq_distance: oracle match, L triples + 1 pair per row") {
    SessionConfig cfg = standard_config(42, 16, 32.0);
    symmetric(cfg, 41, [&](Engine& e) {
        const FixedCodec& cx = e.codec();
        const size_t L = 16, n = 3;
        Rng vals(7);
        std::vector<std::vector<double>> rows(n, std::vector<double>(L));
        std::vector<double> q(L);
        std::vector<Elem> flat_rows, eq;
        for (auto& row : rows)
            for (auto& v : row) {
                v = (static_cast<double>(vals.below(4097)) - 2048.0) / 1024.0;
                flat_rows.push_back(cx.encode(v));
            }
        for (auto& v : q) {
            v = (static_cast<double>(vals.below(4097)) - 2048.0) / 1024.0;
            eq.push_back(cx.encode(v));
        }
        auto xflat = e.party() == 0 ? e.give_input(flat_rows) : e.take_input(0, n * L);
        auto qs = e.party() == 1 ? e.give_input(eq) : e.take_input(1, L);
        std::vector<std::vector<AuthShare>> xrows(n);
        for (size_t i = 0; i < n; ++i)
            xrows[i] = std::vector<AuthShare>(xflat.begin() + i * L, xflat.begin() + (i + 1) * L);

        uint64_t opens_before = e.opened_count();
        auto d2 = e.sq_distance(xrows, qs);
        CHECK(e.opened_count() - opens_before == 2 * n * L + n);
        auto opened = e.open(d2);
        e.check_macs();
        for (size_t i = 0; i < n; ++i) {
            double want = 0;
            for (size_t j = 0; j < L; ++j) want += (rows[i][j] - q[j]) * (rows[i][j] - q[j]);
            CHECK(std::fabs(cx.decode(opened[i]) - want) <= L * std::ldexp(1.0, -cfg.fx.f));
        }
    });
}

TEST_CASE("shared exponential tracks the plaintext reference") {
    SessionConfig cfg = cfg42();
    symmetric(cfg, 53, [&](Engine& e) {
        const FixedCodec& cx = e.codec();
        std::vector<double> us = {0.0, 0.6931471805599453, 1.0, 4.0, 17.3, 32.0, 33.0};
        std::vector<Elem> eu;
        for (double u : us) eu.push_back(cx.encode(u));
        auto xs = e.party() == 0 ? e.give_input(eu) : e.take_input(0, us.size());
        auto ys = e.exp_neg(xs);
        auto opened = e.open(ys);
        e.check_macs();
        for (size_t i = 0; i < us.size(); ++i) {
            double got = cx.decode(opened[i]);
            CHECK(std::fabs(got - std::exp(-us[i])) <= 1e-6);
            CHECK(std::fabs(got - exp_neg_reference(us[i], cfg.exp)) <= 1e-9);
        }
        // saturated input decodes to 0 within one ulp
        CHECK(std::fabs(cx.decode(opened.back())) <= 2 * cx.ulp());
    });
}

TEST_CASE("inner product: n triples, one rescale") {
    SessionConfig cfg = cfg42();
    symmetric(cfg, 67, [&](Engine& e) {
        const FixedCodec& cx = e.codec();
        const int n = 32;
        Rng vals(5);
        std::vector<double> a(n), b(n);
        std::vector<Elem> ea, eb;
        double want = 0;
        for (int i = 0; i < n; ++i) {
            a[i] = (static_cast<double>(vals.below(10241)) - 5120.0) / 1024.0;
            b[i] = (static_cast<double>(vals.below(2049)) - 1024.0) / 1024.0;
            want += a[i] * b[i];
            ea.push_back(cx.encode(a[i]));
            eb.push_back(cx.encode(b[i]));
        }
        auto xs = e.party() == 0 ? e.give_input(ea) : e.take_input(0, n);
        auto ys = e.party() == 1 ? e.give_input(eb) : e.take_input(1, n);
        uint64_t opens_before = e.opened_count();
        AuthShare ip = e.inner_product(xs, ys);
        CHECK(e.opened_count() - opens_before == 2 * n + 1);
        auto opened = e.open({ip});
        e.check_macs();
        // products are exact at full width; the single rescale costs <= 2 ulp
        CHECK(std::fabs(cx.decode(opened[0]) - want) <= 2 * cx.ulp());
    });
}

TEST_CASE("reveal_to delivers only to the receiver, after the MAC check") {
    SessionConfig cfg = cfg42();
    run_engines(
        cfg, 71,
        [&](Engine& e) {
            auto xs = e.give_input({e.codec().encode(9.75)});
            auto r = e.reveal_to(1, xs[0]);
            CHECK(!r.has_value());
        },
        [&](Engine& e) {
            auto xs = e.take_input(0, 1);
            auto r = e.reveal_to(1, xs[0]);
            REQUIRE(r.has_value());
            CHECK(e.codec().decode(*r) == doctest::Approx(9.75).epsilon(1e-12));
        });
}

TEST_CASE("tampered opening fails the MAC check on both sides") {
    SessionConfig cfg = cfg42();
    int failures = 0;
    try {
        run_engines(
            cfg, 83,
            [&](Engine& e) {
                e.tamper_open(1, 0, e.field().from_u64(1));  // forge the first open
                auto xs = e.give_input({e.codec().encode(1.0)});
                e.open(xs);
                e.check_macs();
            },
            [&](Engine& e) {
                auto xs = e.take_input(0, 1);
                e.open(xs);
                e.check_macs();
            });
    } catch (const MacCheckFailed&) {
        ++failures;
    }
    CHECK(failures == 1);
}

TEST_CASE("tampered check share also fails") {
    SessionConfig cfg = cfg42();
    CHECK_THROWS_AS(run_engines(
                        cfg, 89,
                        [&](Engine& e) {
                            e.tamper_sigma(e.field().one());
                            auto xs = e.give_input({e.codec().encode(2.0)});
                            e.open(xs);
                            e.check_macs();
                        },
                        [&](Engine& e) {
                            auto xs = e.take_input(0, 1);
                            e.open(xs);
                            e.check_macs();
                        }),
                    MacCheckFailed);
}

TEST_CASE("dealer budget exhaustion") {
    SessionConfig cfg = cfg42();
    Field F(cfg.field_bits, cfg.field_c);
    CHECK_THROWS_AS(run_pair(
                        [&](Channel& ch) {
                            DealerSource pp(F, cfg.fx, 3, 0, /*triples=*/2);
                            Engine e(0, cfg, ch, pp, 1);
                            ch.set_phase(Phase::Online);
                            auto xs = e.give_input({e.codec().encode(1.0), e.codec().encode(2.0),
                                                    e.codec().encode(3.0)});
                            e.mul(xs, xs);  // needs 3 triples, budget is 2
                        },
                        [&](Channel& ch) {
                            DealerSource pp(F, cfg.fx, 3, 1, /*triples=*/2);
                            Engine e(1, cfg, ch, pp, 2);
                            ch.set_phase(Phase::Online);
                            auto xs = e.take_input(0, 3);
                            e.mul(xs, xs);
                        }),
                    PreprocessingExhausted);
}

TEST_CASE("file store roundtrip and exhaustion") {
    SessionConfig cfg = cfg42();
    Field F(cfg.field_bits, cfg.field_c);
    std::string pa = "/tmp/eml_test_preproc_a.bin", pb = "/tmp/eml_test_preproc_b.bin";
    dealer_write_files(F, cfg.fx, 12345, /*triples=*/4, /*pairs=*/2, /*masks=*/3, pa, pb);
    run_pair(
        [&](Channel& ch) {
            FileSource pp(F, pa, 0);
            Engine e(0, cfg, ch, pp, 1);
            ch.set_phase(Phase::Online);
            auto xs = e.give_input({e.codec().encode(2.5), e.codec().encode(-4.0)});
            auto zs = e.fixed_mul({xs[0]}, {xs[1]});
            auto opened = e.open(zs);
            e.check_macs();
            CHECK(e.codec().decode(opened[0]) == doctest::Approx(-10.0).epsilon(1e-9));
            // 3 triples left... none: 4 - 1 used = 3 remain; drain them
            auto more = e.mul({xs[0], xs[0], xs[0]}, {xs[1], xs[1], xs[1]});
            CHECK_THROWS_AS(e.mul({xs[0]}, {xs[1]}), PreprocessingExhausted);
            (void)more;
        },
        [&](Channel& ch) {
            FileSource pp(F, pb, 1);
            Engine e(1, cfg, ch, pp, 2);
            ch.set_phase(Phase::Online);
            auto xs = e.take_input(0, 2);
            auto zs = e.fixed_mul({xs[0]}, {xs[1]});
            e.open(zs);
            e.check_macs();
            auto more = e.mul({xs[0], xs[0], xs[0]}, {xs[1], xs[1], xs[1]});
            (void)more;
            // this side's file is equally drained
            CHECK_THROWS_AS(e.mul({xs[0]}, {xs[1]}), PreprocessingExhausted);
        });
}

TEST_CASE("one training split per session") {
    SessionConfig cfg = cfg42();
    symmetric(cfg, 97, [&](Engine& e) {
        std::array<uint8_t, 32> fp1{}, fp2{};
        fp1[0] = 1;
        fp2[0] = 2;
        e.bind_model_fingerprint(fp1);
        e.bind_model_fingerprint(fp1);  // same split again is fine
        CHECK_THROWS_AS(e.bind_model_fingerprint(fp2), SessionMismatch);
    });
}
