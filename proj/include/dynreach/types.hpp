#ifndef DYNREACH_TYPES_HPP
#define DYNREACH_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace dynreach {

// Vertices are numbered 1..n; 0 is never a valid id.
using VertexId = std::uint32_t;

// Index into the graph sequence G_0, G_1, ..., G_t.
using Version = std::uint32_t;

struct Edge {
    VertexId src = 0;
    VertexId dst = 0;

    [[nodiscard]] constexpr Edge reversed() const noexcept { return {dst, src}; }

    friend constexpr bool operator==(const Edge&, const Edge&) = default;
    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Direction { Out, In };

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An inserted edge does not touch the insertion center.
class CenterViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Internal bookkeeping went wrong (e.g. a witness count would go negative).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require_vertex(VertexId v, std::size_t n, const char* what) {
    if (v < 1 || v > n) {
        throw InvalidArgument(std::string(what) + ": vertex " + std::to_string(v) +
                              " outside [1, " + std::to_string(n) + "]");
    }
}

}  // namespace dynreach

template <>
struct std::hash<dynreach::Edge> {
    std::size_t operator()(const dynreach::Edge& e) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{e.src} << 32) | e.dst);
    }
};

#endif  // DYNREACH_TYPES_HPP
