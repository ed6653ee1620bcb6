#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace conleyifs {

// Error taxonomy: configuration (bad input files / parameters), domain
// (points or sets outside an operation's domain), capability (operation
// needs a property the inputs lack, e.g. invertibility), contract
// (violated precondition between modules).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};
struct CapabilityError : std::runtime_error {
    explicit CapabilityError(const std::string& m) : std::runtime_error(m) {}
};
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& m) : std::runtime_error(m) {}
};

// splitmix64: stateless mixing used for all seeded sampling so results are
// identical across platforms (std:: distributions are not).
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    uint64_t index(uint64_t n) { return n ? next() % n : 0; }
    // uniform in [0, 1)
    double real() { return double(next() >> 11) * (1.0 / 9007199254740992.0); }

private:
    uint64_t state_;
};

inline uint64_t fnv1a(const void* data, size_t n, uint64_t h = 1469598103934665603ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline uint64_t fnv1a_u64(uint64_t v, uint64_t h = 1469598103934665603ULL) {
    return fnv1a(&v, sizeof v, h);
}

// Shortest round-trippable decimal rendering; used everywhere a double is
// written to a report or CSV so outputs are byte-stable.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// LEB128 unsigned varints for the relation cache format.
inline void put_varint(std::vector<unsigned char>& out, uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<unsigned char>(v) | 0x80);
        v >>= 7;
    }
    out.push_back(static_cast<unsigned char>(v));
}

inline uint64_t get_varint(const unsigned char* data, size_t size, size_t& pos) {
    uint64_t v = 0;
    int shift = 0;
    while (pos < size) {
        unsigned char byte = data[pos++];
        v |= uint64_t(byte & 0x7F) << shift;
        if (!(byte & 0x80)) return v;
        shift += 7;
        if (shift > 63) break;
    }
    throw ConfigError("corrupt varint in relation file");
}

// Deterministic parallel loop: the work is partitioned by index range, so
// the result of filling pre-allocated slots never depends on thread count.
inline void parallel_for(int n, int threads, const std::function<void(int, int)>& body) {
    if (threads <= 1 || n < 64) {
        body(0, n);
        return;
    }
    int nt = std::min<int>(threads, std::max(1, n / 16));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    int chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        int lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace conleyifs
