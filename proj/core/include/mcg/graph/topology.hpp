#pragma once

#include <cstddef>
#include <string_view>

#include "mcg/numerics/matrix.hpp"

namespace mcg {

enum class TopologyKind { kFull, kCycle, kLine, kStar, kIdentity };

// Accepts full|cycle|line|star|identity.
TopologyKind parse_topology(std::string_view name);
std::string_view to_string(TopologyKind kind);

// Binary n×n adjacency. A(i, j) = 1 means an edge from agent j to agent i.
// Every kind except Identity has a zero diagonal; Cycle, Line and Star are
// stored in both directions.
Matrix make_topology(TopologyKind kind, std::size_t n);

}  // namespace mcg
