#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "eml/errors.hpp"
#include "eml/field.hpp"

namespace eml {

class ByteWriter {
  public:
    std::vector<uint8_t> buf;
    void u8(uint8_t v) { buf.push_back(v); }
    void u32_be(uint32_t v) {
        buf.push_back(static_cast<uint8_t>(v >> 24));
        buf.push_back(static_cast<uint8_t>(v >> 16));
        buf.push_back(static_cast<uint8_t>(v >> 8));
        buf.push_back(static_cast<uint8_t>(v));
    }
    void u32_le(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64_le(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void f64_le(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64_le(bits);
    }
    void bytes(const uint8_t* p, size_t n) { buf.insert(buf.end(), p, p + n); }
    void elem(const Field& F, const Elem& e) {
        size_t off = buf.size();
        buf.resize(off + F.elem_bytes());
        F.to_bytes(e, buf.data() + off);
    }
    void str(const std::string& s) {
        u32_le(static_cast<uint32_t>(s.size()));
        bytes(reinterpret_cast<const uint8_t*>(s.data()), s.size());
    }
};

class ByteReader {
  public:
    ByteReader(const uint8_t* p, size_t n) : p_(p), n_(n) {}
    explicit ByteReader(const std::vector<uint8_t>& v) : p_(v.data()), n_(v.size()) {}

    size_t remaining() const { return n_ - off_; }
    bool done() const { return off_ == n_; }

    uint8_t u8() {
        need(1);
        return p_[off_++];
    }
    uint32_t u32_be() {
        need(4);
        uint32_t v = (static_cast<uint32_t>(p_[off_]) << 24) | (static_cast<uint32_t>(p_[off_ + 1]) << 16) |
                     (static_cast<uint32_t>(p_[off_ + 2]) << 8) | p_[off_ + 3];
        off_ += 4;
        return v;
    }
    uint32_t u32_le() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p_[off_ + i]) << (8 * i);
        off_ += 4;
        return v;
    }
    uint64_t u64_le() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p_[off_ + i]) << (8 * i);
        off_ += 8;
        return v;
    }
    double f64_le() {
        uint64_t bits = u64_le();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    void bytes(uint8_t* out, size_t n) {
        need(n);
        std::memcpy(out, p_ + off_, n);
        off_ += n;
    }
    Elem elem(const Field& F) {
        need(F.elem_bytes());
        Elem e = F.from_bytes(p_ + off_);
        off_ += F.elem_bytes();
        return e;
    }
    std::string str() {
        uint32_t n = u32_le();
        need(n);
        std::string s(reinterpret_cast<const char*>(p_ + off_), n);
        off_ += n;
        return s;
    }

  private:
    void need(size_t n) const {
        if (off_ + n > n_) throw ParseError("truncated message payload");
    }
    const uint8_t* p_;
    size_t n_;
    size_t off_ = 0;
};

}  // namespace eml
