#include <doctest.h>

#include "hhwalk/error.hpp"
#include "hhwalk/household.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

using namespace hhwalk;

namespace {

Graph make_graph(std::size_t n, std::vector<Edge> edges) { return Graph(n, edges); }

Graph k4() { return make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
Graph c3() { return make_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

bool has_error(const std::vector<std::string>& v, const std::string& needle)
{
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

} // namespace

TEST_SUITE("household")
{
    TEST_CASE("poisson draws follow the Poisson pmf")
    {
        // Chi-square goodness of fit against the exact pmf, cells 0..11 and a tail cell.
        Pcg32 rng(7, 1);
        constexpr int draws = 200000;
        const double lambda = 4.0;
        std::vector<double> counts(13, 0.0);
        for (int i = 0; i < draws; ++i)
            counts[std::min<std::uint32_t>(sample_poisson(lambda, rng), 12)] += 1;
        double chi2 = 0;
        double cdf = 0;
        for (int x = 0; x <= 12; ++x) {
            double p = x < 12 ? std::exp(-lambda + x * std::log(lambda) - std::lgamma(x + 1.0)) : 1 - cdf;
            cdf += p;
            chi2 += (counts[x] - draws * p) * (counts[x] - draws * p) / (draws * p);
        }
        // 12 degrees of freedom; 99.9% quantile is 32.9.
        CHECK(chi2 < 32.9);
    }

    TEST_CASE("poisson draws above the chunk size keep mean and variance")
    {
        Pcg32 rng(3, 9);
        const double lambda = 75.0;
        double s = 0, ss = 0;
        constexpr int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const double x = sample_poisson(lambda, rng);
            s += x;
            ss += x * x;
        }
        const double mean = s / draws;
        const double var = ss / draws - mean * mean;
        CHECK(std::abs(mean - lambda) < 5 * std::sqrt(lambda / draws));
        CHECK(std::abs(var / lambda - 1) < 0.03);
    }

    TEST_CASE("poisson degrees: positive, even sum, mean near lambda over 50 seeds")
    {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Pcg32 rng(seed);
            const auto seq = sample_poisson_degrees(100, 4.0, rng);
            REQUIRE(seq.values.size() == 100);
            CHECK(std::all_of(seq.values.begin(), seq.values.end(), [](auto d) { return d >= 1; }));
            CHECK(seq.sum() % 2 == 0);
            const double mean = static_cast<double>(seq.sum()) / 100.0;
            CHECK(std::abs(mean - 4.0) <= 0.8);
        }
    }

    TEST_CASE("poisson degrees: tiny lambda forces ones")
    {
        Pcg32 rng(11);
        const auto seq = sample_poisson_degrees(2, 0.0001, rng);
        CHECK(seq.values == std::vector<std::uint32_t>{1, 1});
    }

    TEST_CASE("poisson degrees: deterministic per seed")
    {
        Pcg32 a(42), b(42), c(43);
        const auto x = sample_poisson_degrees(100, 4.0, a);
        CHECK(x.values == sample_poisson_degrees(100, 4.0, b).values);
        CHECK(x.values != sample_poisson_degrees(100, 4.0, c).values);
    }

    TEST_CASE("poisson degrees: preconditions")
    {
        Pcg32 rng(1);
        CHECK_THROWS_AS(sample_poisson_degrees(1, 4.0, rng), Error);
        CHECK_THROWS_AS(sample_poisson_degrees(10, 0.0, rng), Error);
        try {
            sample_poisson_degrees(10, 1e-12, rng, 5);
            FAIL("expected retries_exhausted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::retries_exhausted);
        }
    }

    TEST_CASE("configuration model: unique realizations")
    {
        Pcg32 rng(5);
        CHECK(sample_configuration_model({{3, 3, 3, 3}}, rng) == k4());
        CHECK(sample_configuration_model({{2, 2, 2}}, rng) == c3());
    }

    TEST_CASE("configuration model: impossible sequences")
    {
        Pcg32 rng(5);
        try {
            sample_configuration_model({{1, 1, 1, 1}}, rng, 200);
            FAIL("expected retries_exhausted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::retries_exhausted);
        }
        CHECK_THROWS_AS(sample_configuration_model({{1, 2}}, rng), Error);
        CHECK_THROWS_AS(sample_configuration_model({{0, 2, 2}}, rng), Error);
    }

    TEST_CASE("configuration model: exact degrees, simple and connected")
    {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Pcg32 rng(seed, 17);
            const auto degrees = sample_poisson_degrees(30, 4.0, rng);
            const Graph g = sample_configuration_model(degrees, rng);
            CHECK(g.is_connected());
            for (NodeId v = 0; v < g.node_count(); ++v)
                CHECK(g.degree(v) == degrees.values[v]);
        }
    }

    TEST_CASE("templates")
    {
        CHECK(CommunityTemplate::ring(5) == CommunityTemplate::clique(5));
        CHECK(CommunityTemplate::ring(4).kind() == TemplateKind::clique);
        const auto r6 = CommunityTemplate::ring(6);
        CHECK(r6.kind() == TemplateKind::ring);
        CHECK(r6.edges().size() == 12);
        CHECK(CommunityTemplate::ring(9).edges().size() == 18);
        CHECK(CommunityTemplate::clique(5).edges().size() == 10);
        CHECK(CommunityTemplate::clique(3).name() == "C3");
        CHECK(r6.name() == "R6");
    }

    TEST_CASE("automorphism check by brute force")
    {
        std::vector<Edge> cycle5{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}};
        CHECK(is_automorphic_community(5, cycle5));
        CHECK(CommunityTemplate::custom(5, cycle5).kind() == TemplateKind::custom);

        // Cube graph Q3: vertex-transitive on 8 nodes.
        std::vector<Edge> cube;
        for (NodeId a = 0; a < 8; ++a)
            for (NodeId bit : {1u, 2u, 4u})
                if ((a ^ bit) > a)
                    cube.push_back({a, a ^ bit});
        CHECK(is_automorphic_community(8, cube));

        std::vector<Edge> path{{0, 1}, {1, 2}};
        CHECK_FALSE(is_automorphic_community(3, path));
        try {
            CommunityTemplate::custom(3, path);
            FAIL("expected not_automorphic");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::not_automorphic);
        }

        // Two disjoint edges: transitive but disconnected.
        std::vector<Edge> matching{{0, 1}, {2, 3}};
        CHECK_FALSE(is_automorphic_community(4, matching));

        std::vector<Edge> cycle9;
        for (NodeId i = 0; i < 9; ++i)
            cycle9.push_back({i, (i + 1) % 9});
        CHECK_THROWS_AS(CommunityTemplate::custom(9, cycle9), Error);
    }

    TEST_CASE("expand: triangle universe gives three linked pairs")
    {
        const auto h = HouseholdGraph::expand(c3(), clique_policy());
        CHECK(h.node_count() == 6);
        CHECK(h.graph().edge_count() == 3 + 3);
        for (NodeId v = 0; v < 6; ++v)
            CHECK(h.graph().degree(v) == 2);
    }

    TEST_CASE("expand: K4 universe gives four linked 3-cliques")
    {
        const auto h = HouseholdGraph::expand(k4(), clique_policy());
        CHECK(h.node_count() == 12);
        CHECK(h.graph().edge_count() == 4 * 3 + 6);
        for (NodeId v = 0; v < 12; ++v) {
            CHECK(h.graph().degree(v) == 3);
            CHECK(h.community_of(v) == v / 3);
            REQUIRE(h.arm_of(v) != no_arm);
            CHECK(h.community_of(h.arm_of(v)) != h.community_of(v));
        }
        CHECK(h.violations().empty());
    }

    TEST_CASE("expand: arm matching follows sorted universe neighbors")
    {
        const auto h = HouseholdGraph::expand(k4(), clique_policy());
        // Member j of community c attaches to the j-th neighbor of c.
        for (NodeId c = 0; c < 4; ++c) {
            auto nb = h.universe().neighbors(c);
            for (std::size_t j = 0; j < nb.size(); ++j)
                CHECK(h.community_of(h.arm_of(h.community(c).first + j)) == nb[j]);
        }
    }

    TEST_CASE("expand: degree-one universe node becomes a single node")
    {
        // Star with a triangle: 0-1-2 triangle, 3 hanging off 0.
        const Graph u = make_graph(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}});
        const auto h = HouseholdGraph::expand(u, clique_policy());
        const Community& leaf = h.community(3);
        CHECK(leaf.size() == 1);
        CHECK(h.graph().degree(leaf.first) == 1);
        CHECK(h.violations().empty());
    }

    TEST_CASE("expand: K4 edge count identity")
    {
        const auto h = HouseholdGraph::expand(k4(), clique_policy());
        CHECK(h.node_count() == 12);
        CHECK(h.graph().edge_count() == 18);
        for (NodeId v = 0; v < 12; ++v)
            CHECK(h.graph().degree(v) == 3);
    }

    TEST_CASE("expand: template size mismatch and custom policies")
    {
        try {
            HouseholdGraph::expand(k4(), [](std::size_t) { return CommunityTemplate::clique(2); });
            FAIL("expected template_size_mismatch");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::template_size_mismatch);
        }

        // Every node of the cube Q3 universe has degree 3; a custom triangle
        // template is accepted.
        std::vector<Edge> cube;
        for (NodeId a = 0; a < 8; ++a)
            for (NodeId bit : {1u, 2u, 4u})
                if ((a ^ bit) > a)
                    cube.push_back({a, a ^ bit});
        const auto tri = CommunityTemplate::custom(3, {{0, 1}, {1, 2}, {0, 2}});
        const auto h = HouseholdGraph::expand(Graph(8, cube), [&](std::size_t) { return tri; });
        CHECK(h.violations().empty());
    }

    TEST_CASE("common neighbors on household models")
    {
        const auto h = HouseholdGraph::expand(k4(), clique_policy());
        // Nodes 0,1,2 form community 0.
        CHECK(common_neighbors(h, 0, 1) == std::vector<NodeId>{2});
        CHECK(common_neighbors(h, 0, h.arm_of(0)).empty());
        CHECK_THROWS_AS(common_neighbors(h, 1, 1), Error);

        // K6 universe -> 5-cliques: k - 2 = 3 common members.
        std::vector<Edge> k6;
        for (NodeId a = 0; a < 6; ++a)
            for (NodeId b = a + 1; b < 6; ++b)
                k6.push_back({a, b});
        const auto h6 = HouseholdGraph::expand(Graph(6, k6), clique_policy());
        CHECK(common_neighbors(h6, 0, 1).size() == 3);
    }

    TEST_CASE("validation reports hand-built defects")
    {
        // Start from the K4 household and give node 0 a second arm to node 7.
        const auto good = HouseholdGraph::expand(k4(), clique_policy());
        auto edges = good.graph().edges();
        REQUIRE_FALSE(good.graph().has_edge(0, 7));
        edges.push_back({0, 7});
        HouseholdGraph bad(Graph(12, edges), good.universe(),
                           std::vector<std::uint32_t>(good.community_map().begin(), good.community_map().end()),
                           std::vector<Community>(good.communities().begin(), good.communities().end()));
        const auto v = bad.violations();
        CHECK(has_error(v, "node 0 has 2 arm edges"));
        CHECK(bad.arm_of(0) == no_arm);
    }

    TEST_CASE("validation reports a triangle-free household")
    {
        // Cycle universe: every community is C2.
        const Graph cycle = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
        const auto h = HouseholdGraph::expand(cycle, clique_policy());
        CHECK(has_error(h.violations(), "no triangle"));
        CHECK(has_error(universe_violations(cycle), "degree >= 3"));
    }

    TEST_CASE("property: contraction recovers the universe")
    {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            Pcg32 rng(seed, 3);
            const Graph u = sample_configuration_model(sample_poisson_degrees(25, 4.0, rng), rng);
            for (const auto& policy : {clique_policy(), ring_policy()}) {
                const auto h = HouseholdGraph::expand(u, policy);
                CHECK(h.contract() == u);
                CHECK(h.violations().empty());
            }
        }
    }

    TEST_CASE("degree law and edge count identity")
    {
        Pcg32 rng(99, 4);
        const Graph u = sample_configuration_model(sample_poisson_degrees(40, 4.0, rng), rng);
        const auto cliques = HouseholdGraph::expand(u, clique_policy());
        std::uint64_t sum_sq = 0;
        for (NodeId c = 0; c < u.node_count(); ++c)
            sum_sq += u.degree(c) * u.degree(c);
        CHECK(2 * cliques.graph().edge_count() == sum_sq);
        for (NodeId v = 0; v < cliques.node_count(); ++v)
            CHECK(cliques.graph().degree(v) == cliques.community(cliques.community_of(v)).size());

        const auto rings = HouseholdGraph::expand(u, ring_policy());
        for (NodeId v = 0; v < rings.node_count(); ++v) {
            const std::size_t k = rings.community(rings.community_of(v)).size();
            CHECK(rings.graph().degree(v) == (k >= 6 ? 5 : k));
        }
    }

    TEST_CASE("determinism of the generation pipeline")
    {
        auto build = [](std::uint64_t seed) {
            Pcg32 rng(seed);
            return HouseholdGraph::expand(sample_configuration_model(sample_poisson_degrees(50, 4.0, rng), rng),
                                          clique_policy());
        };
        CHECK(build(42).graph() == build(42).graph());
    }

    TEST_CASE("community map files round trip through from_membership")
    {
        Pcg32 rng(8);
        const Graph u = sample_configuration_model(sample_poisson_degrees(20, 5.0, rng), rng);
        const auto h = HouseholdGraph::expand(u, ring_policy());
        const auto dir = std::filesystem::temp_directory_path() / "hhwalk_household_test";
        std::filesystem::create_directories(dir);
        write_edge_list((dir / "g.txt").string(), h.graph());
        write_community_map((dir / "c.txt").string(), h);

        const auto map = read_community_map((dir / "c.txt").string());
        const auto back = HouseholdGraph::from_membership(read_edge_list((dir / "g.txt").string(), map.size()), map);
        CHECK(back.graph() == h.graph());
        CHECK(back.universe() == h.universe());
        for (std::uint32_t c = 0; c < h.community_count(); ++c)
            CHECK(back.community(c).shape == h.community(c).shape);
        CHECK(back.violations().empty());
        std::filesystem::remove_all(dir);
    }
}
