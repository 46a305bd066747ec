#pragma once

#include <exception>
#include <functional>
#include <thread>

#include "eml/channel.hpp"
#include "eml/config.hpp"
#include "eml/engine.hpp"
#include "eml/preproc.hpp"

namespace eml::test {

// Run a two-party program over an in-process channel pair. Exceptions on
// either side hang up the channel (unblocking the peer) and the first
// party's exception is rethrown in the caller.
inline void run_pair(const std::function<void(Channel&)>& f0,
                     const std::function<void(Channel&)>& f1) {
    auto [c0, c1] = LocalChannel::make_pair();
    std::exception_ptr e0, e1;
    Channel* ch1 = c1.get();
    std::thread t1([&, ch1] {
        try {
            f1(*ch1);
        } catch (...) {
            e1 = std::current_exception();
            ch1->hang_up();
        }
    });
    try {
        f0(*c0);
    } catch (...) {
        e0 = std::current_exception();
        c0->hang_up();
    }
    t1.join();
    if (e0) std::rethrow_exception(e0);
    if (e1) std::rethrow_exception(e1);
}

// Same, with a dealer-sourced engine per party already constructed.
inline void run_engines(const SessionConfig& cfg, uint64_t seed,
                        const std::function<void(Engine&)>& f0,
                        const std::function<void(Engine&)>& f1) {
    Field F(cfg.field_bits, cfg.field_c);
    run_pair(
        [&](Channel& ch) {
            DealerSource pp(F, cfg.fx, seed, 0);
            Engine e(0, cfg, ch, pp, seed * 2 + 1000);
            ch.set_phase(Phase::Online);
            f0(e);
        },
        [&](Channel& ch) {
            DealerSource pp(F, cfg.fx, seed, 1);
            Engine e(1, cfg, ch, pp, seed * 2 + 2000);
            ch.set_phase(Phase::Online);
            f1(e);
        });
}

}  // namespace eml::test
