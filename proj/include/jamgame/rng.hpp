#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace jamgame {

// All randomness in an experiment flows from one master seed through named
// sub-streams ("env", "agent-r", "agent-j", "shadow"), so that e.g. changing
// the receiver's exploration draws cannot perturb the shadowing sequence.

inline uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t stream_seed(uint64_t master, std::string_view name) {
    uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the stream name
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return splitmix64(master ^ splitmix64(h));
}

inline std::mt19937_64 make_stream(uint64_t master, std::string_view name) {
    return std::mt19937_64(stream_seed(master, name));
}

}  // namespace jamgame
