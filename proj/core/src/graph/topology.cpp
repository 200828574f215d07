#include "mcg/graph/topology.hpp"

#include <string>

#include "mcg/errors.hpp"

namespace mcg {

TopologyKind parse_topology(std::string_view name) {
  if (name == "full") return TopologyKind::kFull;
  if (name == "cycle") return TopologyKind::kCycle;
  if (name == "line") return TopologyKind::kLine;
  if (name == "star") return TopologyKind::kStar;
  if (name == "identity") return TopologyKind::kIdentity;
  throw ArgumentError("unknown topology '" + std::string(name) + "'");
}

std::string_view to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kFull: return "full";
    case TopologyKind::kCycle: return "cycle";
    case TopologyKind::kLine: return "line";
    case TopologyKind::kStar: return "star";
    case TopologyKind::kIdentity: return "identity";
  }
  return "?";
}

Matrix make_topology(TopologyKind kind, std::size_t n) {
  if (n == 0) throw ArgumentError("make_topology: n must be at least 1");
  if ((kind == TopologyKind::kCycle || kind == TopologyKind::kStar) && n < 2) {
    throw ArgumentError("make_topology: " + std::string(to_string(kind)) +
                        " requires at least 2 agents");
  }
  Matrix a(n, n);
  auto link = [&a](std::size_t i, std::size_t j) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  };
  switch (kind) {
    case TopologyKind::kFull:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) a(i, j) = 1.0;
      break;
    case TopologyKind::kCycle:
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t next = (i + 1) % n;
        if (next != i) link(i, next);
      }
      break;
    case TopologyKind::kLine:
      for (std::size_t i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case TopologyKind::kStar:
      for (std::size_t i = 1; i < n; ++i) link(0, i);
      break;
    case TopologyKind::kIdentity:
      a = Matrix::identity(n);
      break;
  }
  return a;
}

}  // namespace mcg
