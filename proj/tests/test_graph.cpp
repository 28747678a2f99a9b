#include <doctest.h>

#include "hhwalk/error.hpp"
#include "hhwalk/graph.hpp"

#include <sstream>

using namespace hhwalk;

TEST_SUITE("graph")
{
    TEST_CASE("csr layout and directed edge indices")
    {
        const std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}, {2, 3}};
        const Graph g(4, edges);
        CHECK(g.node_count() == 4);
        CHECK(g.edge_count() == 4);
        CHECK(g.directed_edge_count() == 8);
        CHECK(g.degree(2) == 3);
        CHECK(std::vector<NodeId>(g.neighbors(2).begin(), g.neighbors(2).end()) == std::vector<NodeId>{0, 1, 3});

        for (EdgeIndex e = 0; e < g.directed_edge_count(); ++e)
            CHECK(g.edge_index(g.edge_source(e), g.edge_target(e)) == e);
        CHECK_THROWS_AS(g.edge_index(0, 3), Error);
        CHECK(g.has_edge(3, 2));
        CHECK_FALSE(g.has_edge(1, 3));
    }

    TEST_CASE("rejects self-loops and multi-edges")
    {
        const std::vector<Edge> loop{{1, 1}};
        CHECK_THROWS_AS(Graph(2, loop), Error);
        const std::vector<Edge> multi{{0, 1}, {0, 1}};
        CHECK_THROWS_AS(Graph(2, multi), Error);
        const std::vector<Edge> range{{0, 5}};
        CHECK_THROWS_AS(Graph(2, range), Error);
    }

    TEST_CASE("connectivity and triangles")
    {
        const std::vector<Edge> path{{0, 1}, {1, 2}};
        CHECK(Graph(3, path).is_connected());
        CHECK_FALSE(Graph(3, path).has_triangle());
        CHECK_FALSE(Graph(4, path).is_connected());
        const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
        CHECK(Graph(3, tri).has_triangle());
    }

    TEST_CASE("common neighbors via sorted intersection")
    {
        const std::vector<Edge> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        const Graph g(4, k4);
        CHECK(g.common_neighbors(0, 1) == std::vector<NodeId>{2, 3});
    }

    TEST_CASE("edge list text round trip")
    {
        const std::vector<Edge> edges{{2, 3}, {0, 1}, {1, 3}};
        const Graph g(5, edges);
        std::ostringstream out;
        write_edge_list(out, g);
        CHECK(out.str() == "0 1\n1 3\n2 3\n");
        std::istringstream in("# comment\n0 1\n\n3 1\n2 3\n");
        CHECK(read_edge_list(in, 5) == g);

        std::istringstream bad("0 x\n");
        CHECK_THROWS_AS(read_edge_list(bad), Error);
    }
}
