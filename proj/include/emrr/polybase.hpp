#pragma once

// Three-sided reporting on up to poly(b) points: a shallow priority search
// tree whose internal nodes each carry a node structure over the head points
// of their children (catalog or micro backend).
//
// A query walks the root-to-leaf paths for x1 and x2, scanning path nodes
// and descending only past nodes whose own points all lie below y. Off-path
// children between the paths are answered by node structures; a child is
// entered only when its marked (max-y head) point was reported, so every
// such visit is paid for by B reported points.
//
// Storage: one word extent holding every node record back to back.
//   record: [leaf | count << 1, splitter root, node structure root,
//            count points of 4 words sorted by (y, x), f child offsets]
//   header: [records base, root offset, n, f, backend, height]
// Node-structure hits carry aux = child * 2 + marked.

#include <cstdint>
#include <vector>

#include "emrr/emsim.hpp"
#include "emrr/microbase.hpp"
#include "emrr/point.hpp"
#include "emrr/pstlayout.hpp"

namespace emrr {

enum class PolyBackend : std::uint8_t { automatic = 0, catalog = 1, micro = 2 };

struct PolyConfig {
  PolyBackend backend = PolyBackend::automatic;
  std::size_t fanout = 0;      // 0 = backend default
  std::size_t leaf_param = 0;  // 0 = backend default
  std::size_t height_max = 40;
  std::uint64_t n_total = 0;   // input size deciding the backend; 0 = this set
};

struct PolyInfo {
  BlockId root{};
  PolyBackend backend = PolyBackend::catalog;
  std::size_t fanout = 0;
  std::size_t leaf_param = 0;
  unsigned height = 0;
  std::size_t nodes = 0;
  std::size_t node_structures = 0;
};

/// One entry per off-path child entered during a query.
struct PolyVisit {
  Word node = 0;  // record offset
  std::size_t head_points = 0;
  std::size_t reported = 0;  // head points reported by the parent's node structure
};

struct PolyTrace {
  std::vector<Word> path_nodes;
  std::vector<PolyVisit> visits;
};

/// Backend chosen by the size rule: catalog when B >= ceil(lg^(1/16) n).
PolyBackend choose_backend(const SimConfig& cfg, std::uint64_t n_total);

class PolyBase {
 public:
  static PolyInfo build(Session& session, TabRegistry& registry, const std::vector<Point>& points,
                        const PolyConfig& config = {});
  static std::vector<Point> query(Session& session, BlockId root, Word x1, Word x2, Word y,
                                  PolyTrace* trace = nullptr);
};

}  // namespace emrr
