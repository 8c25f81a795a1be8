#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "verlinde/trees.hpp"

using namespace verlinde;

namespace {

PartitionSequence seq(std::initializer_list<std::vector<int>> parts) {
    PartitionSequence s;
    s.partitions.assign(parts);
    return s;
}

}  // namespace

TEST_CASE("partition sequences of ordered trees") {
    OrderedTree t{3, {Root(2, 3), Root(1, 2)}};
    // blocks recorded by smallest member per vertex
    CHECK(partition_sequence(t, {0, 1}) == seq({{1, 2, 3}, {1, 2, 2}, {1, 1, 1}}));
    CHECK(partition_sequence(t, {1, 0}) == seq({{1, 2, 3}, {1, 1, 3}, {1, 1, 1}}));

    OrderedTree t2{2, {Root(1, 2)}};
    CHECK(partition_sequence(t2, {0}) == seq({{1, 2}, {1, 1}}));
}

TEST_CASE("spanning tree recognition") {
    CHECK(is_spanning_tree(OrderedTree{3, {Root(2, 3), Root(1, 2)}}));
    CHECK(is_spanning_tree(OrderedTree{3, {Root(3, 2), Root(1, 3)}}));
    CHECK_FALSE(is_spanning_tree(OrderedTree{3, {Root(1, 2), Root(2, 1)}}));
}

TEST_CASE("diagonality criterion") {
    std::vector<OrderedTree> good = {{3, {Root(2, 3), Root(1, 2)}}, {3, {Root(3, 2), Root(1, 3)}}};
    CHECK(is_diagonal(good));

    std::vector<OrderedTree> dup = {{3, {Root(2, 3), Root(1, 2)}}, {3, {Root(2, 3), Root(1, 2)}}};
    CHECK_FALSE(is_diagonal(dup));

    std::vector<OrderedTree> single = {{2, {Root(1, 2)}}};
    CHECK(is_diagonal(single));
}

TEST_CASE("diagonal family enumeration") {
    for (int r : {2, 3, 4}) {
        std::vector<OrderedTree> D = enumerate_diagonal(r);
        std::size_t fact = 1;
        for (int i = 2; i < r; ++i) fact *= i;
        CHECK(D.size() == fact);
        CHECK(is_diagonal(D));

        std::vector<OrderedTree> C = canonical_diagonal(r);
        CHECK(C.size() == fact);
        CHECK(is_diagonal(C));
    }

    std::vector<OrderedTree> C3 = canonical_diagonal(3);
    std::vector<OrderedTree> expected = {{3, {Root(2, 3), Root(1, 2)}},
                                         {3, {Root(3, 2), Root(1, 3)}}};
    CHECK(C3.size() == 2);
    CHECK(std::is_permutation(C3.begin(), C3.end(), expected.begin()));
}

TEST_CASE("wall restriction picks the linked trees") {
    WallSpec wall{3, {2}, 0};
    std::vector<OrderedTree> D = {{3, {Root(2, 3), Root(1, 2)}}, {3, {Root(3, 2), Root(1, 3)}}};

    std::vector<WallTree> cut = restrict_to_wall(D, wall);
    REQUIRE(cut.size() == 1);
    CHECK(cut[0].tree == D[1]);
    CHECK(cut[0].tree.roots[cut[0].link] == Root(3, 2));

    WallSpec w2{2, {1}, 0};
    std::vector<OrderedTree> D2 = {{2, {Root(1, 2)}}};
    std::vector<WallTree> cut2 = restrict_to_wall(D2, w2);
    REQUIRE(cut2.size() == 1);
    CHECK(cut2[0].link == 0);

    // a member with every edge crossing the cut is excluded
    std::vector<OrderedTree> path132 = {{3, {Root(1, 3), Root(3, 2)}}};
    WallSpec w12{3, {1, 2}, 0};
    CHECK(restrict_to_wall(path132, w12).empty());
}

TEST_CASE("every member of a cut family crosses exactly once") {
    WallSpec wall{4, {1, 3}, 0};  // {1,3} vs {2,4}
    std::vector<OrderedTree> D = enumerate_diagonal(4);
    auto crosses = [&](const Root& e) {
        bool i_in = e.i == 1 || e.i == 3;
        bool j_in = e.j == 1 || e.j == 3;
        return i_in != j_in;
    };
    for (const WallTree& wt : restrict_to_wall(D, wall)) {
        int n = 0;
        for (const Root& e : wt.tree.roots) n += crosses(e) ? 1 : 0;
        CHECK(n == 1);
        CHECK(crosses(wt.tree.roots[wt.link]));
    }
}
