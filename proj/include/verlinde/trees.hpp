#pragma once

#include <vector>

#include "verlinde/root_system.hpp"

namespace verlinde {

// An ordered basis whose underlying undirected edges span K_r.
using OrderedTree = OrderedBasis;

bool is_spanning_tree(const OrderedTree& t);

// Sequence of r nested partitions of {1..r}; partitions[s][v-1] = smallest
// vertex of the block containing v after the first s edges.
struct PartitionSequence {
    std::vector<std::vector<int>> partitions;

    bool operator==(const PartitionSequence& o) const { return partitions == o.partitions; }
};

// Partition sequence induced by adding the edges in the given position order.
PartitionSequence partition_sequence(const OrderedTree& t, const std::vector<int>& ordering);

// Diagonality criterion equivalent to the residue pairing
// iRes_B(omega_{B'}) = delta_{BB'}: for every ordered pair of distinct
// members, the map (edge m of B') -> (minimum B-edge index on the Tree(B)
// path joining B'.edges[m]'s endpoints) must not be a bijection.
bool is_diagonal(const std::vector<OrderedTree>& candidate);

// Deterministic lexicographic backtracking over ordered signed trees;
// result has (r-1)! members and passes is_diagonal.
std::vector<OrderedTree> enumerate_diagonal(int r);

// Closed-form diagonal family: for each permutation (v_1..v_{r-1}) of
// {2..r}, the path tree 1 - v_1 - ... - v_{r-1} with edges ordered from the
// far end toward vertex 1.
std::vector<OrderedTree> canonical_diagonal(int r);

struct WallTree {
    OrderedTree tree;
    int link = -1;  // position of the unique edge crossing (Pi', Pi'')
};

// Members of D decomposing as tree on Pi' + tree on Pi'' + one link edge.
std::vector<WallTree> restrict_to_wall(const std::vector<OrderedTree>& D, const WallSpec& wall);

}  // namespace verlinde
