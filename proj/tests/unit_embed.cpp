#include <doctest.h>

#include "secvne/embed.hpp"
#include "helpers.hpp"

using namespace secvne;

namespace {

RequestVariant plain_variant() {
    VirtualNetworkRequest vnr;
    vnr.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(3), Fixed::from_int(1), Avail::None}};
    vnr.links = {};
    VirtualNode b{"b", Fixed::from_int(5), Fixed::from_int(1), Fixed::from_int(1), Avail::None};
    vnr.nodes.push_back(b);
    vnr.links.push_back({"a", "b", Fixed::from_int(20), Fixed::from_int(2)});
    return variant_from_vnr(vnr);
}

}  // namespace

TEST_CASE("revenue pricing") {
    CHECK(embedder::revenue(RequestVariant{}, {}) == 0.0);

    VirtualNetworkRequest vnr;
    vnr.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(3), Fixed::from_int(1), Avail::None}};
    SUBCASE("node and link demands weighted by their levels") {
        vnr.links = {};
        CHECK(embedder::revenue(variant_from_vnr(vnr), {}) == doctest::Approx(30.0));  // 10*3
        vnr.nodes.push_back(
            {"b", Fixed::from_int(1), Fixed::from_int(1), Fixed::from_int(1), Avail::None});
        vnr.links = {{"a", "b", Fixed::from_int(20), Fixed::from_int(2)}};
        // 10*3 + 1*1 + 20*2
        CHECK(embedder::revenue(variant_from_vnr(vnr), {}) == doctest::Approx(71.0));
    }
    SUBCASE("availability doubles the flagged resources") {
        vnr.nodes[0].avail = Avail::DifferentCloud;
        vnr.nodes.push_back(
            {"b", Fixed::from_int(1), Fixed::from_int(1), Fixed::from_int(1), Avail::None});
        vnr.links = {{"a", "b", Fixed::from_int(20), Fixed::from_int(2)}};
        // node a doubled (60), its incident link doubled (80), b plain (1)
        CHECK(embedder::revenue(variant_from_vnr(vnr), {}) == doctest::Approx(141.0));
    }
    SUBCASE("lambda weights scale the two components") {
        vnr.nodes.push_back(
            {"b", Fixed::from_int(1), Fixed::from_int(1), Fixed::from_int(1), Avail::None});
        vnr.links = {{"a", "b", Fixed::from_int(20), Fixed::from_int(2)}};
        CHECK(embedder::revenue(variant_from_vnr(vnr), {2.0, 0.5}) ==
              doctest::Approx(2 * 31 + 0.5 * 40));
    }
}

TEST_CASE("embed, cost, commit, release on the reference instance") {
    SubstrateState state(testutil::reference_substrate());
    auto variant = variant_from_vnr(testutil::reference_vnr());
    auto res = embedder::embed(state, {variant}, "r1", {}, {}, {});
    REQUIRE(std::holds_alternative<embedder::EmbeddingRecord>(res));
    auto rec = std::get<embedder::EmbeddingRecord>(res);

    SUBCASE("decision matches the hand-checked optimum") {
        CHECK(rec.decision.objective == doctest::Approx(654.0).epsilon(1e-9));
        CHECK(embedder::check_embedding(state, variant, rec.decision, rec.allocation).empty());
        // working and backup replicas of b live in different clouds
        const auto& net = state.network();
        CHECK(net.nodes[rec.decision.working_node[1]].cloud_id !=
              net.nodes[rec.decision.backup_node[1]].cloud_id);
    }

    SUBCASE("cost equals the objective under matching weights") {
        // provider cost = beta(lambda1, lambda2, 0) objective of the decision
        auto res2 = embedder::embed(state, {variant}, "r1", {1, 1, 0}, {}, {});
        auto rec2 = std::get<embedder::EmbeddingRecord>(res2);
        CHECK(embedder::cost(rec2.decision, variant, state.network(), {}) ==
              doctest::Approx(rec2.decision.objective).epsilon(1e-9));
        CHECK(rec2.cost == doctest::Approx(rec2.decision.objective).epsilon(1e-9));
    }

    SUBCASE("commit deducts, release restores exactly") {
        auto before = to_json(state.network());
        std::vector<Fixed> rn, rl;
        for (std::size_t p = 0; p < state.network().nodes.size(); ++p)
            rn.push_back(state.residual_node(p));
        REQUIRE(embedder::commit(state, rec));
        // both replicas of b deduct cpu
        double deducted = 0;
        for (std::size_t p = 0; p < state.network().nodes.size(); ++p)
            deducted += (rn[p] - state.residual_node(p)).to_double();
        CHECK(deducted == doctest::Approx(10 + 20 + 20));
        embedder::release(state, "r1");
        for (std::size_t p = 0; p < state.network().nodes.size(); ++p)
            CHECK(state.residual_node(p) == rn[p]);
        CHECK_THROWS(embedder::release(state, "r1"));
        CHECK(to_json(state.network()) == before);
    }

    SUBCASE("stale revision is refused") {
        Allocation other;
        other.node_cpu = {{0, Fixed::from_int(1)}};
        REQUIRE(state.commit("other", other));
        CHECK_FALSE(embedder::commit(state, rec));  // state moved under the record
    }
}

TEST_CASE("rejections carry a reason") {
    SubstrateState state(testutil::reference_substrate());
    SUBCASE("no eligible node") {
        VirtualNetworkRequest vnr;
        vnr.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(9), Fixed::from_int(1), Avail::None}};
        auto res = embedder::embed(state, {variant_from_vnr(vnr)}, "r", {}, {}, {});
        REQUIRE(std::holds_alternative<embedder::Rejection>(res));
        CHECK(std::get<embedder::Rejection>(res).reason == embedder::RejectReason::NoEligibleNode);
    }
    SUBCASE("cpu demand beyond any host") {
        VirtualNetworkRequest vnr;
        vnr.nodes = {{"a", Fixed::from_int(500), Fixed::from_int(1), Fixed::from_int(1), Avail::None}};
        auto res = embedder::embed(state, {variant_from_vnr(vnr)}, "r", {}, {}, {});
        REQUIRE(std::holds_alternative<embedder::Rejection>(res));
    }
    SUBCASE("drained hosts leave no eligible node") {
        Allocation hog;  // drain every node
        for (std::size_t p = 0; p < state.network().nodes.size(); ++p)
            hog.node_cpu.push_back({p, Fixed::from_int(75)});
        REQUIRE(state.commit("hog", hog));
        VirtualNetworkRequest vnr;
        vnr.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(1), Fixed::from_int(1), Avail::None}};
        auto res = embedder::embed(state, {variant_from_vnr(vnr)}, "r", {}, {}, {});
        REQUIRE(std::holds_alternative<embedder::Rejection>(res));
        CHECK(std::get<embedder::Rejection>(res).reason ==
              embedder::RejectReason::NoEligibleNode);
    }
    SUBCASE("jointly infeasible placement on a loaded substrate reports capacity") {
        // leave only A with room: each virtual node alone is placeable there,
        // but host exclusivity makes the pair infeasible
        Allocation hog;
        for (std::size_t p = 1; p < state.network().nodes.size(); ++p)
            hog.node_cpu.push_back({p, Fixed::from_int(75)});
        REQUIRE(state.commit("hog", hog));
        VirtualNetworkRequest vnr;
        vnr.nodes = {{"x", Fixed::from_int(10), Fixed::from_int(1), Fixed::from_int(1), Avail::None},
                     {"y", Fixed::from_int(10), Fixed::from_int(1), Fixed::from_int(1), Avail::None}};
        auto res = embedder::embed(state, {variant_from_vnr(vnr)}, "r", {}, {}, {});
        REQUIRE(std::holds_alternative<embedder::Rejection>(res));
        CHECK(std::get<embedder::Rejection>(res).reason == embedder::RejectReason::Capacity);
    }
}

TEST_CASE("variant selection keeps the cheapest optimum") {
    SubstrateState state(testutil::reference_substrate());
    // variant 0 demands sec >= 4 (cost >= 4x), variant 1 sec >= 1 (cheap)
    VirtualNetworkRequest hi, lo;
    hi.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(4), Fixed::from_int(1), Avail::None}};
    lo.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(1), Fixed::from_int(1), Avail::None}};
    auto res =
        embedder::embed(state, {variant_from_vnr(hi), variant_from_vnr(lo)}, "r", {}, {}, {});
    REQUIRE(std::holds_alternative<embedder::EmbeddingRecord>(res));
    auto rec = std::get<embedder::EmbeddingRecord>(res);
    CHECK(rec.variant_index == 1);
    CHECK(rec.decision.objective == doctest::Approx(10.0));  // A or F: 10*1*1

    SUBCASE("a variant becomes preferable once the cheap hosts are exhausted") {
        // occupy every sec-1 node; only the high-security variant stays feasible
        Allocation hog;
        const auto& net = state.network();
        for (std::size_t p = 0; p < net.nodes.size(); ++p)
            if (net.nodes[p].sec == Fixed::from_int(1)) hog.node_cpu.push_back({p, Fixed::from_int(80)});
        REQUIRE(state.commit("hog", hog));
        VirtualNetworkRequest mid;  // sec >= 2 demand: hosts B, C, E remain
        mid.nodes = {{"a", Fixed::from_int(10), Fixed::from_int(2), Fixed::from_int(1), Avail::None}};
        auto res2 = embedder::embed(
            state, {variant_from_vnr(lo), variant_from_vnr(mid)}, "r", {}, {}, {});
        REQUIRE(std::holds_alternative<embedder::EmbeddingRecord>(res2));
        // both variants remain satisfiable (B has sec 3 >= 1), same optimal host set;
        // ties resolve to the first variant in expansion order
        CHECK(std::get<embedder::EmbeddingRecord>(res2).variant_index == 0);
        CHECK(std::get<embedder::EmbeddingRecord>(res2).decision.objective ==
              doctest::Approx(30.0));  // B: 10*3*1
    }
}

TEST_CASE("embed agrees with the brute-force oracle on tiny instances") {
    std::mt19937_64 rng(31);
    int accepted = 0;
    for (int t = 0; t < 20; ++t) {
        SubstrateNetwork net;
        RequestVariant variant;
        testutil::random_tiny_instance(rng, net, variant);
        SubstrateState state(net);
        auto oracle = testutil::brute_force_embed(state, variant, {});
        auto res = embedder::embed(state, {variant}, "r", {}, {}, {});
        CAPTURE(t);
        if (oracle.feasible) {
            // single-path oracle cost is an upper bound on the splittable optimum
            REQUIRE(std::holds_alternative<embedder::EmbeddingRecord>(res));
            auto& rec = std::get<embedder::EmbeddingRecord>(res);
            CHECK(rec.decision.objective <= oracle.cost + 1e-6);
            CHECK(embedder::check_embedding(state, variant, rec.decision, rec.allocation).empty());
            ++accepted;
        }
    }
    CHECK(accepted > 5);
}
