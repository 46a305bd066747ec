#include "eml/channel.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace eml {

// ---------- framing, accounting ----------

std::vector<uint8_t> Channel::pack(MsgType t, const std::vector<uint8_t>& payload) const {
    if (payload.size() > kMaxFramePayload)
        throw FrameTooLarge("refusing to send frame with payload of " + std::to_string(payload.size()) +
                            " bytes");
    const uint32_t len = static_cast<uint32_t>(payload.size()) + 1;
    std::vector<uint8_t> frame;
    frame.reserve(5 + payload.size());
    frame.push_back(static_cast<uint8_t>(len >> 24));
    frame.push_back(static_cast<uint8_t>(len >> 16));
    frame.push_back(static_cast<uint8_t>(len >> 8));
    frame.push_back(static_cast<uint8_t>(len));
    frame.push_back(static_cast<uint8_t>(t));
    frame.insert(frame.end(), payload.begin(), payload.end());
    return frame;
}

std::pair<MsgType, std::vector<uint8_t>> Channel::unpack(std::vector<uint8_t> body) {
    if (body.empty()) throw ParseError("empty frame body");
    MsgType t = static_cast<MsgType>(body[0]);
    std::vector<uint8_t> payload(body.begin() + 1, body.end());
    account_recv(payload.size());
    if (capture_on_) captured_.push_back({false, phase_, t, payload});
    if (t == MsgType::Abort) {
        aborted_ = true;
        throw PeerAbort("peer aborted: " + std::string(payload.begin(), payload.end()));
    }
    return {t, std::move(payload)};
}

void Channel::account_sent(size_t payload) {
    auto& ph = stats_[phase_];
    ph.bytes_sent += kFrameOverhead + payload;
    ph.frames_sent += 1;
}

void Channel::account_recv(size_t payload) {
    auto& ph = stats_[phase_];
    ph.bytes_recv += kFrameOverhead + payload;
    ph.frames_recv += 1;
}

void Channel::flush_wall() {
    auto now = std::chrono::steady_clock::now();
    stats_[phase_].wall_s += std::chrono::duration<double>(now - phase_start_).count();
    phase_start_ = now;
}

void Channel::send(MsgType t, const std::vector<uint8_t>& payload) {
    if (aborted_) throw ProtocolAbort("attempted to send a frame on an aborted channel");
    if (capture_on_) captured_.push_back({true, phase_, t, payload});
    write_frame(pack(t, payload));
    account_sent(payload.size());
}

std::pair<MsgType, std::vector<uint8_t>> Channel::recv() {
    if (aborted_) throw ProtocolAbort("attempted to receive on an aborted channel");
    return unpack(read_frame());
}

std::vector<uint8_t> Channel::exchange(MsgType t, const std::vector<uint8_t>& payload) {
    if (aborted_) throw ProtocolAbort("attempted to exchange on an aborted channel");
    if (capture_on_) captured_.push_back({true, phase_, t, payload});
    std::vector<uint8_t> body = duplex(pack(t, payload));
    account_sent(payload.size());
    auto [rt, rp] = unpack(std::move(body));
    if (rt != t)
        throw ProtocolAbort("message type mismatch in round: expected " +
                            std::to_string(static_cast<int>(t)) + ", got " +
                            std::to_string(static_cast<int>(rt)));
    return std::move(rp);
}

void Channel::send_abort(const std::string& reason) {
    if (aborted_) return;
    aborted_ = true;  // seal locally even if the peer is already gone
    std::vector<uint8_t> payload(reason.begin(), reason.end());
    if (capture_on_) captured_.push_back({true, phase_, MsgType::Abort, payload});
    try {
        write_frame(pack(MsgType::Abort, payload));
        account_sent(payload.size());
    } catch (const IoError&) {
        // best effort: the abort that matters is the local exception in flight
    }
}

// ---------- in-process pair ----------

std::pair<std::unique_ptr<LocalChannel>, std::unique_ptr<LocalChannel>> LocalChannel::make_pair() {
    auto sh = std::make_shared<Shared>();
    std::unique_ptr<LocalChannel> a(new LocalChannel(sh, 0));
    std::unique_ptr<LocalChannel> b(new LocalChannel(sh, 1));
    return {std::move(a), std::move(b)};
}

LocalChannel::~LocalChannel() { hang_up(); }

void LocalChannel::hang_up() {
    std::lock_guard<std::mutex> lk(sh_->mu);
    sh_->closed = true;
    sh_->cv.notify_all();
}

void LocalChannel::write_frame(const std::vector<uint8_t>& frame) {
    std::lock_guard<std::mutex> lk(sh_->mu);
    if (sh_->closed) throw IoError("channel closed by peer");
    // strip the 4-byte length: queue entries carry type byte + payload
    sh_->q[1 - side_].emplace_back(frame.begin() + 4, frame.end());
    sh_->cv.notify_all();
}

std::vector<uint8_t> LocalChannel::read_frame() {
    std::unique_lock<std::mutex> lk(sh_->mu);
    sh_->cv.wait(lk, [&] { return !sh_->q[side_].empty() || sh_->closed; });
    if (sh_->q[side_].empty()) throw IoError("channel closed by peer");
    std::vector<uint8_t> body = std::move(sh_->q[side_].front());
    sh_->q[side_].pop_front();
    return body;
}

// ---------- TCP ----------

namespace {
void set_nodelay(int fd) {
    int one = 1;
    setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

void write_all(int fd, const uint8_t* p, size_t n) {
    while (n > 0) {
        ssize_t k = ::write(fd, p, n);
        if (k < 0) {
            if (errno == EINTR) continue;
            throw IoError(std::string("socket write failed: ") + std::strerror(errno));
        }
        p += k;
        n -= static_cast<size_t>(k);
    }
}

void read_all(int fd, uint8_t* p, size_t n) {
    while (n > 0) {
        ssize_t k = ::read(fd, p, n);
        if (k == 0) throw IoError("peer closed the connection");
        if (k < 0) {
            if (errno == EINTR) continue;
            throw IoError(std::string("socket read failed: ") + std::strerror(errno));
        }
        p += k;
        n -= static_cast<size_t>(k);
    }
}

uint32_t parse_len(const uint8_t* hdr) {
    uint32_t len = (static_cast<uint32_t>(hdr[0]) << 24) | (static_cast<uint32_t>(hdr[1]) << 16) |
                   (static_cast<uint32_t>(hdr[2]) << 8) | hdr[3];
    if (len == 0) throw ParseError("zero-length frame");
    if (len > kMaxFramePayload + 1)
        throw FrameTooLarge("incoming frame of " + std::to_string(len) + " bytes exceeds the limit");
    return len;
}
}  // namespace

std::unique_ptr<TcpChannel> TcpChannel::listen_accept(const std::string& bind_addr, uint16_t port) {
    int lfd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (lfd < 0) throw IoError("cannot create socket");
    int one = 1;
    setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
        ::close(lfd);
        throw IoError("bad bind address: " + bind_addr);
    }
    if (::bind(lfd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(lfd, 1) < 0) {
        int e = errno;
        ::close(lfd);
        throw IoError(std::string("bind/listen failed: ") + std::strerror(e));
    }
    int fd = ::accept(lfd, nullptr, nullptr);
    ::close(lfd);
    if (fd < 0) throw IoError("accept failed");
    set_nodelay(fd);
    return std::unique_ptr<TcpChannel>(new TcpChannel(fd));
}

std::unique_ptr<TcpChannel> TcpChannel::connect(const std::string& host, uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw IoError("cannot create socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw IoError("bad host address: " + host);
    }
    // retry briefly so "start alice, then bob" does not race
    for (int attempt = 0;; ++attempt) {
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) break;
        if (attempt > 200) {
            ::close(fd);
            throw IoError("connect failed: " + host + ":" + std::to_string(port));
        }
        struct timespec ts = {0, 25 * 1000 * 1000};
        nanosleep(&ts, nullptr);
    }
    set_nodelay(fd);
    return std::unique_ptr<TcpChannel>(new TcpChannel(fd));
}

TcpChannel::~TcpChannel() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpChannel::hang_up() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void TcpChannel::write_frame(const std::vector<uint8_t>& frame) {
    write_all(fd_, frame.data(), frame.size());
}

std::vector<uint8_t> TcpChannel::read_frame() {
    uint8_t hdr[4];
    read_all(fd_, hdr, 4);
    uint32_t len = parse_len(hdr);
    std::vector<uint8_t> body(len);
    read_all(fd_, body.data(), len);
    return body;
}

// Interleaved duplex so two parties sending large symmetric rounds cannot
// fill both kernel buffers and deadlock.
std::vector<uint8_t> TcpChannel::duplex(const std::vector<uint8_t>& frame) {
    size_t sent = 0;
    std::vector<uint8_t> in;
    size_t want_hdr = 4;
    uint8_t hdr[4];
    size_t got_hdr = 0;
    size_t got_body = 0;
    bool have_len = false;
    while (sent < frame.size() || !have_len || got_body < in.size()) {
        pollfd pfd{fd_, 0, 0};
        if (sent < frame.size()) pfd.events |= POLLOUT;
        if (!have_len || got_body < in.size()) pfd.events |= POLLIN;
        if (::poll(&pfd, 1, 30000) <= 0) throw IoError("socket poll timed out or failed");
        if (pfd.revents & POLLOUT) {
            ssize_t k = ::write(fd_, frame.data() + sent, frame.size() - sent);
            if (k < 0 && errno != EINTR && errno != EAGAIN)
                throw IoError(std::string("socket write failed: ") + std::strerror(errno));
            if (k > 0) sent += static_cast<size_t>(k);
        }
        if (pfd.revents & (POLLIN | POLLHUP)) {
            if (!have_len) {
                ssize_t k = ::read(fd_, hdr + got_hdr, want_hdr - got_hdr);
                if (k == 0) throw IoError("peer closed the connection");
                if (k < 0 && errno != EINTR && errno != EAGAIN)
                    throw IoError(std::string("socket read failed: ") + std::strerror(errno));
                if (k > 0) got_hdr += static_cast<size_t>(k);
                if (got_hdr == 4) {
                    in.resize(parse_len(hdr));
                    have_len = true;
                }
            } else if (got_body < in.size()) {
                ssize_t k = ::read(fd_, in.data() + got_body, in.size() - got_body);
                if (k == 0) throw IoError("peer closed the connection");
                if (k < 0 && errno != EINTR && errno != EAGAIN)
                    throw IoError(std::string("socket read failed: ") + std::strerror(errno));
                if (k > 0) got_body += static_cast<size_t>(k);
            }
        }
    }
    return in;
}

}  // namespace eml
