#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace dynconn {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using SuperId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();
inline constexpr SuperId kNoSuper = std::numeric_limits<SuperId>::max();

// Domain-rule violations (bad caller input) throw this; internal broken
// invariants use assert.
struct DomainError : std::logic_error {
  using std::logic_error::logic_error;
};

// Raised by the sparsifier / hierarchy when the paper-style failure paths
// trigger (disconnected expander part at rebuild, sampling cap exceeded).
// The hierarchy catches it and re-initializes from scratch.
struct RestartSignal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dynconn
