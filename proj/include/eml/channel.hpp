#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "eml/errors.hpp"

namespace eml {

// Wire frame: u32 big-endian length (type byte + payload), 1-byte message
// type, payload. An empty payload therefore costs exactly 5 bytes.
enum class MsgType : uint8_t {
    Handshake = 1,
    Share = 2,
    Open = 3,
    Ot = 4,
    Abort = 5,
    Reveal = 6,
};

enum class Phase : int { Handshake = 0, Preprocessing = 1, Online = 2 };

constexpr uint32_t kMaxFramePayload = 64u << 20;  // 64 MiB
constexpr size_t kFrameOverhead = 5;              // 4 length + 1 type

struct PhaseStats {
    uint64_t bytes_sent = 0;
    uint64_t bytes_recv = 0;
    uint64_t frames_sent = 0;
    uint64_t frames_recv = 0;
    double wall_s = 0.0;
};

struct TrafficStats {
    PhaseStats phase[3];
    PhaseStats& operator[](Phase p) { return phase[static_cast<int>(p)]; }
    const PhaseStats& operator[](Phase p) const { return phase[static_cast<int>(p)]; }
    uint64_t total_sent() const {
        return phase[0].bytes_sent + phase[1].bytes_sent + phase[2].bytes_sent;
    }
    uint64_t total_recv() const {
        return phase[0].bytes_recv + phase[1].bytes_recv + phase[2].bytes_recv;
    }
};

struct CapturedFrame {
    bool outbound;
    Phase phase;
    MsgType type;
    std::vector<uint8_t> payload;
};

// Point-to-point ordered reliable channel with per-phase accounting.
// After an abort frame travels in either direction the channel is dead:
// sending anything further is a programming error.
class Channel {
  public:
    virtual ~Channel() = default;

    void set_phase(Phase p) {
        flush_wall();
        phase_ = p;
    }
    Phase phase() const { return phase_; }
    TrafficStats& stats() { return stats_; }
    const TrafficStats& stats() const { return stats_; }

    void enable_capture(bool on) { capture_on_ = on; }
    const std::vector<CapturedFrame>& captured() const { return captured_; }

    void send(MsgType t, const std::vector<uint8_t>& payload);
    std::pair<MsgType, std::vector<uint8_t>> recv();

    // symmetric round: both parties call this; implementations interleave
    // reads and writes so large frames cannot deadlock the pair
    std::vector<uint8_t> exchange(MsgType t, const std::vector<uint8_t>& payload);

    // send an abort frame with a reason and seal the channel
    void send_abort(const std::string& reason);

    bool aborted() const { return aborted_; }

    // unblock the peer after a local failure: further reads on either side
    // fail with IoError instead of hanging
    virtual void hang_up() {}

  protected:
    virtual void write_frame(const std::vector<uint8_t>& frame) = 0;
    virtual std::vector<uint8_t> read_frame() = 0;  // returns type byte + payload
    // duplex send+recv of one frame each way; default = write then read
    virtual std::vector<uint8_t> duplex(const std::vector<uint8_t>& frame) {
        write_frame(frame);
        return read_frame();
    }

  private:
    std::vector<uint8_t> pack(MsgType t, const std::vector<uint8_t>& payload) const;
    std::pair<MsgType, std::vector<uint8_t>> unpack(std::vector<uint8_t> body);
    void account_sent(size_t payload);
    void account_recv(size_t payload);
    void flush_wall();

    Phase phase_ = Phase::Handshake;
    TrafficStats stats_;
    std::chrono::steady_clock::time_point phase_start_ = std::chrono::steady_clock::now();
    bool aborted_ = false;
    bool capture_on_ = false;
    std::vector<CapturedFrame> captured_;
};

// In-process channel pair over two queues; used by tests and the
// single-process benchmark harness.
class LocalChannel final : public Channel {
  public:
    struct Shared {
        std::mutex mu;
        std::condition_variable cv;
        std::deque<std::vector<uint8_t>> q[2];
        bool closed = false;
    };

    static std::pair<std::unique_ptr<LocalChannel>, std::unique_ptr<LocalChannel>> make_pair();

    ~LocalChannel() override;
    void hang_up() override;

  protected:
    void write_frame(const std::vector<uint8_t>& frame) override;
    std::vector<uint8_t> read_frame() override;

  private:
    LocalChannel(std::shared_ptr<Shared> sh, int side) : sh_(std::move(sh)), side_(side) {}
    std::shared_ptr<Shared> sh_;
    int side_;
};

// Loopback/LAN TCP channel. One side listens, the other connects.
class TcpChannel final : public Channel {
  public:
    static std::unique_ptr<TcpChannel> listen_accept(const std::string& bind_addr, uint16_t port);
    static std::unique_ptr<TcpChannel> connect(const std::string& host, uint16_t port);
    ~TcpChannel() override;
    void hang_up() override;

  protected:
    void write_frame(const std::vector<uint8_t>& frame) override;
    std::vector<uint8_t> read_frame() override;
    std::vector<uint8_t> duplex(const std::vector<uint8_t>& frame) override;

  private:
    explicit TcpChannel(int fd) : fd_(fd) {}
    int fd_;
};

}  // namespace eml
