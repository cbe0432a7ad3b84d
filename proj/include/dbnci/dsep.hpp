#pragma once

#include <vector>

#include "dbnci/model.hpp"

namespace dbnci {

struct DSepQuery {
    std::vector<int> x, y, z;  // node indices into the BNTemplate
};

// Whether Z d-separates X from Y: no path X..Y whose interior non-colliders
// all avoid Z and whose colliders each have a descendant in Z (a node counts
// as its own descendant). Linear-time reachability, no path enumeration.
bool d_separated(const BNTemplate& bn, const DSepQuery& query);

// Whether some node reaches both a and b by directed paths whose union avoids
// `forbidden` strictly between the endpoints; equivalently, an a..b path with
// no collider. Preconditions: a != b, neither in forbidden.
bool has_collision_free_path(const BNTemplate& bn, int a, int b,
                             const std::vector<int>& forbidden);

}  // namespace dbnci
