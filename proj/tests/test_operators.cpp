#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <map>
#include <set>

#include "fsmsp/operators.hpp"
#include "fsmsp/sbmo.hpp"
#include "support.hpp"

using namespace fsmsp;
using fsmsp::testing::unit_instance;

namespace {

const Assignment kFive{{1, 2, 3, 4, 5}};

std::vector<int> sorted_labels(const Assignment& a) {
    auto v = a.stage_of;
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("crossover") {
    Rng rng(1);
    const Assignment same{{3, 1, 2, 2}};
    CHECK(crossover(same, same, rng) == same);

    const std::array<bool, 4> coins{true, false, true, false};
    CHECK(crossover_with_mask(Assignment{{1, 2, 3, 4}}, Assignment{{4, 3, 2, 1}}, coins) == Assignment{{1, 3, 3, 1}});

    CHECK_THROWS_AS(crossover(Assignment{{1, 2}}, Assignment{{1}}, rng), MalformedAssignment);

    SUBCASE("each position is a fair coin") {
        // 1e4 Bernoulli(1/2) trials: 0.02 is four standard deviations.
        int from_father = 0;
        constexpr int kTrials = 10000;
        for (int i = 0; i < kTrials; ++i) {
            from_father += crossover(Assignment{{1, 1}}, Assignment{{2, 2}}, rng)[0] == 1;
        }
        CHECK(static_cast<double>(from_father) / kTrials == doctest::Approx(0.5).epsilon(0.04));
        CHECK(std::abs(static_cast<double>(from_father) / kTrials - 0.5) <= 0.02);
    }
}

TEST_CASE("M1 inversion") {
    CHECK(invert_segment(kFive, 1, 3) == Assignment{{1, 4, 3, 2, 5}});
    CHECK(invert_segment(kFive, 2, 2) == kFive);
    Rng rng(2);
    for (int i = 0; i < 200; ++i) CHECK(sorted_labels(mutate_inversion(kFive, rng)) == sorted_labels(kFive));
}

TEST_CASE("M2 insertion") {
    CHECK(move_entry(kFive, 1, 4) == Assignment{{1, 3, 4, 5, 2}});
    CHECK(move_entry(kFive, 4, 0) == Assignment{{5, 1, 2, 3, 4}});
    CHECK(move_entry(Assignment{{1, 2}}, 0, 1) == Assignment{{2, 1}});
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto child = mutate_insertion(kFive, rng);
        CHECK(child != kFive);  // distinct labels: any real move changes the vector
        CHECK(sorted_labels(child) == sorted_labels(kFive));
    }
}

TEST_CASE("M3 double-segment swap") {
    CHECK(swap_segments(kFive, 3) == Assignment{{4, 5, 1, 2, 3}});
    CHECK(swap_segments(swap_segments(kFive, 2), 3) == kFive);
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const auto child = mutate_double_segment_swap(kFive, rng);
        CHECK(child != kFive);  // split in [1, R-1] never yields the identity
        CHECK(sorted_labels(child) == sorted_labels(kFive));
    }
}

TEST_CASE("M5 reciprocal exchange") {
    CHECK(swap_entries(kFive, 0, 3) == Assignment{{4, 2, 3, 1, 5}});
    CHECK(swap_entries(Assignment{{2, 1, 2}}, 0, 2) == Assignment{{2, 1, 2}});
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto child = mutate_reciprocal_exchange(kFive, rng);
        CHECK(hamming_distance(child, kFive) == 2);
    }
}

TEST_CASE("M6 triplet") {
    CHECK(rotate_triplet(kFive, 0, 1, 2) == Assignment{{2, 3, 1, 4, 5}});
    CHECK(rotate_triplet(Assignment{{4, 4, 4, 1}}, 0, 1, 2) == Assignment{{4, 4, 4, 1}});
    CHECK(rotate_triplet(rotate_triplet(rotate_triplet(kFive, 0, 2, 4), 0, 2, 4), 0, 2, 4) == kFive);
    Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        const auto child = mutate_triplet(kFive, rng);
        CHECK(hamming_distance(child, kFive) == 3);
    }
    // Two workers: falls back to the exchange.
    CHECK(mutate_triplet(Assignment{{1, 2}}, rng) == Assignment{{2, 1}});
}

TEST_CASE("M4 balance") {
    // t = [4, 3], unit proficiency: stage 1 has one worker (p = 4), stage 2 three (p = 1).
    const auto inst = unit_instance({4, 3}, 4, 10);
    const Assignment a{{1, 2, 2, 2}};
    const auto plan = plan_balance(inst, a);
    CHECK(plan.weakest == 0);
    REQUIRE(plan.donor.has_value());
    CHECK(*plan.donor == 1);

    Rng rng(7);
    std::set<std::size_t> moved;
    for (int i = 0; i < 200; ++i) {
        const auto child = mutate_balance(inst, a, rng);
        CHECK(occupancy(2, child) == std::vector<int>{2, 2});
        CHECK(child[0] == 1);
        for (std::size_t w = 1; w < 4; ++w)
            if (child[w] == 1) moved.insert(w);
    }
    CHECK(moved == std::set<std::size_t>{1, 2, 3});

    SUBCASE("no movable worker when every stage has one") {
        const auto square = unit_instance({4, 3, 1}, 3, 10);
        CHECK(mutate_balance(square, Assignment{{3, 1, 2}}, rng) == Assignment{{3, 1, 2}});
    }
    SUBCASE("uniform processing times leave the vector alone") {
        const auto flat = unit_instance({2, 2}, 4, 10);
        CHECK(mutate_balance(flat, Assignment{{1, 1, 2, 2}}, rng) == Assignment{{1, 1, 2, 2}});
    }
    SUBCASE("falls back past a singleton fastest stage") {
        // p = [1, 10, 4/2 = 2]: fastest stage 1 has one worker, next fastest is stage 3.
        const auto inst3 = unit_instance({1, 10, 4}, 4, 10);
        const Assignment b{{1, 2, 3, 3}};
        const auto p = plan_balance(inst3, b);
        CHECK(p.weakest == 1);
        REQUIRE(p.donor.has_value());
        CHECK(*p.donor == 2);
        const auto child = mutate_balance(inst3, b, rng);
        CHECK(occupancy(3, child) == std::vector<int>{1, 2, 1});
    }
    SUBCASE("weakest stage capacity strictly grows") {
        Rng gen(8);
        for (int trial = 0; trial < 300; ++trial) {
            const int n = std::uniform_int_distribution<int>(2, 6)(gen);
            const int r = std::uniform_int_distribution<int>(n, 14)(gen);
            std::uniform_real_distribution<double> k(1e-6, 1.0);
            std::vector<std::vector<double>> prof(static_cast<std::size_t>(r),
                                                  std::vector<double>(static_cast<std::size_t>(n)));
            for (auto& row : prof)
                for (auto& v : row) v = k(gen);
            const Instance inst_r(n, r, 50, std::vector<double>(static_cast<std::size_t>(n), 3.0), prof);
            const auto parent = random_legal_assignment(n, r, gen);
            const auto move = plan_balance(inst_r, parent);
            const auto child = mutate_balance(inst_r, parent, gen);
            CHECK(is_legal(inst_r, child));
            if (!move.donor) {
                CHECK(child == parent);
                continue;
            }
            const auto before = stage_profile(inst_r, parent).capacities;
            const auto after = stage_profile(inst_r, child).capacities;
            CHECK(after[static_cast<std::size_t>(move.weakest)] > before[static_cast<std::size_t>(move.weakest)]);
        }
    }
    CHECK_THROWS_AS(mutate_balance(inst, Assignment{{2, 2, 2, 2}}, rng), IllegalAssignment);
}

TEST_CASE("legality preserved by every mutation") {
    Rng rng(9);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        const int r = std::uniform_int_distribution<int>(std::max(n, 1), 20)(rng);
        std::vector<double> t(static_cast<std::size_t>(n));
        std::uniform_real_distribution<double> tt(1.0, 10.0);
        for (auto& v : t) v = tt(rng);
        const auto inst = unit_instance(t, r, 30);
        const auto a = random_legal_assignment(n, r, rng);
        for (OperatorId op : {OperatorId::M1Inversion, OperatorId::M2Insertion, OperatorId::M3DoubleSegmentSwap,
                              OperatorId::M4Balance, OperatorId::M5ReciprocalExchange, OperatorId::M6Triplet}) {
            const auto child = apply_mutation(op, inst, a, rng);
            REQUIRE(child.size() == a.size());
            REQUIRE(is_legal(inst, child));
            if (op != OperatorId::M4Balance) REQUIRE(occupancy(n, child) == occupancy(n, a));
        }
    }
    const auto inst = unit_instance({1, 1}, 2, 3);
    CHECK_THROWS_AS(apply_mutation(OperatorId::Crossover, inst, Assignment{{1, 2}}, rng), Error);
}

TEST_CASE("randomized operators replay their deterministic forms") {
    // Same seed, same draws: the mutation equals the explicit form with the drawn positions.
    Rng a(10);
    Rng b(10);
    const auto child = mutate_inversion(kFive, a);
    std::uniform_int_distribution<std::size_t> pos(0, 4);
    const std::size_t u = pos(b);
    const std::size_t v = pos(b);
    CHECK(child == invert_segment(kFive, std::min(u, v), std::max(u, v)));
}
