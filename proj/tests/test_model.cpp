#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fsmsp/model.hpp"
#include "fsmsp/oracles.hpp"
#include "fsmsp/sbmo.hpp"
#include "support.hpp"

using namespace fsmsp;
using fsmsp::testing::tiny_instance;
using fsmsp::testing::unit_instance;

namespace {

Instance random_instance(Rng& rng, int n, int r, int d) {
    std::uniform_real_distribution<double> t(1.0, 10.0);
    std::uniform_real_distribution<double> k(1e-6, 1.0);
    std::vector<double> times(static_cast<std::size_t>(n));
    for (auto& v : times) v = t(rng);
    std::vector<std::vector<double>> prof(static_cast<std::size_t>(r), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : prof)
        for (auto& v : row) v = k(rng);
    return Instance(n, r, d, times, prof);
}

}  // namespace

TEST_CASE("instance validation") {
    CHECK_THROWS_AS(Instance(0, 1, 1, {}, {}), InvalidInstance);
    CHECK_THROWS_AS(Instance(3, 2, 5, {1, 1, 1}, {{1, 1, 1}, {1, 1, 1}}), InvalidInstance);
    CHECK_THROWS_AS(Instance(2, 2, 1, {1, 1}, {{1, 1}, {1, 1}}), InvalidInstance);
    CHECK_THROWS_AS(Instance(2, 2, 2, {1, 0}, {{1, 1}, {1, 1}}), InvalidInstance);
    CHECK_THROWS_AS(Instance(2, 2, 2, {1, 1}, {{1, 0}, {1, 1}}), InvalidInstance);
    CHECK_THROWS_AS(Instance(2, 2, 2, {1, 1}, {{1, 1.5}, {1, 1}}), InvalidInstance);
    CHECK_THROWS_AS(Instance(2, 2, 2, {1, 1}, {{1, 1}}), InvalidInstance);
    CHECK_NOTHROW(Instance(2, 2, 2, {1, 1}, {{1, 1}, {1, 1}}));
}

TEST_CASE("is_legal") {
    const auto n2 = unit_instance({1, 1}, 3, 5);
    CHECK(is_legal(n2, Assignment{{1, 2, 1}}));

    const auto n3 = unit_instance({1, 1, 1}, 3, 5);
    CHECK_FALSE(is_legal(n3, Assignment{{1, 1, 2}}));

    const auto n4 = unit_instance({1, 1, 1, 1}, 4, 5);
    const Assignment a{{1, 3, 3, 1}};
    CHECK(occupancy(4, a) == std::vector<int>{2, 0, 2, 0});
    CHECK_FALSE(is_legal(n4, a));

    SUBCASE("malformed input is an error, not an illegal answer") {
        CHECK_THROWS_AS(is_legal(n2, Assignment{{1, 2}}), MalformedAssignment);
        CHECK_THROWS_AS(is_legal(n2, Assignment{{1, 2, 3}}), MalformedAssignment);
        CHECK_THROWS_AS(is_legal(n2, Assignment{{0, 2, 1}}), MalformedAssignment);
    }
}

TEST_CASE("stage_profile") {
    const auto inst = tiny_instance();
    const auto profile = stage_profile(inst, Assignment{{1, 2, 1}});
    CHECK(profile.capacities[0] == doctest::Approx(1.5));
    CHECK(profile.capacities[1] == doctest::Approx(1.0));
    CHECK(profile.proc_times[0] == doctest::Approx(4.0 / 3.0));
    CHECK(profile.proc_times[1] == doctest::Approx(1.0));

    const auto ones = unit_instance({5, 5}, 2, 10);
    CHECK(stage_profile(ones, Assignment{{1, 2}}).proc_times == std::vector<double>{5.0, 5.0});

    const Instance halves(1, 2, 3, {1.0}, {{0.5}, {0.5}});
    const auto h = stage_profile(halves, Assignment{{1, 1}});
    CHECK(h.capacities[0] == 1.0);
    CHECK(h.proc_times[0] == 1.0);

    CHECK_THROWS_AS(stage_profile(inst, Assignment{{1, 1, 1}}), IllegalAssignment);
}

TEST_CASE("ramp profile shape") {
    const std::vector<double> p{2, 3, 1, 2.5};
    const auto ramp = ramp_profile(p);
    CHECK(ramp.ramp_up == std::vector<double>{2, 3, 3, 3});
    CHECK(ramp.ramp_down == std::vector<double>{3, 2.5, 2.5});
    CHECK(ramp.ramp_up.back() == 3.0);
}

TEST_CASE("completion_time examples") {
    // Uniform line: D + N - 1 cycles of length 1.
    CHECK(completion_time(unit_instance({1, 1}, 2, 3), Assignment{{1, 2}}) == doctest::Approx(4.0));

    // p = [2, 3, 1], D = 5: 2 + 3 + 3*3 + 3 + 1.
    const auto line = unit_instance({2, 3, 1}, 3, 5);
    const Assignment one_each{{1, 2, 3}};
    CHECK(completion_time(line, one_each) == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(simulate_state_waves(line, one_each) == doctest::Approx(18.0).epsilon(1e-12));

    CHECK(completion_time(tiny_instance(), Assignment{{1, 2, 1}}) == doctest::Approx(19.0 / 3.0).epsilon(1e-12));

    // Single stage: D cycles of p_1.
    const Instance single(1, 3, 7, {3.0}, {{0.5}, {0.25}, {0.25}});
    CHECK(completion_time(single, Assignment{{1, 1, 1}}) == doctest::Approx(21.0));

    CHECK_THROWS_AS(completion_time(tiny_instance(), Assignment{{2, 2, 2}}), IllegalAssignment);
}

TEST_CASE("19/3 is the optimum of the tiny instance by brute force") {
    const auto inst = tiny_instance();
    double best = 1e300;
    Assignment arg;
    int legal = 0;
    fsmsp::testing::for_each_assignment(2, 3, [&](const Assignment& a) {
        if (!is_legal(inst, a)) return;
        ++legal;
        const double t = completion_time(inst, a);
        if (t < best) {
            best = t;
            arg = a;
        }
    });
    CHECK(legal == 6);
    CHECK(best == doctest::Approx(19.0 / 3.0).epsilon(1e-12));
    CHECK(arg == Assignment{{1, 2, 1}});
}

TEST_CASE("encode and decode") {
    const auto inst2 = unit_instance({1, 1}, 2, 5);
    CHECK(encode(inst2, {{1, 0}, {0, 1}}) == Assignment{{1, 2}});
    CHECK(decode(inst2, Assignment{{1, 2}}) == ZeroOneMatrix{{1, 0}, {0, 1}});

    const auto inst3 = unit_instance({1, 1}, 3, 5);
    CHECK(decode(inst3, Assignment{{2, 2, 1}}) == ZeroOneMatrix{{0, 1}, {0, 1}, {1, 0}});

    const auto single = unit_instance({1}, 4, 5);
    CHECK(encode(single, {{1}, {1}, {1}, {1}}) == Assignment{{1, 1, 1, 1}});

    SUBCASE("twelve workers on five stages, third worker on third stage") {
        const auto inst = unit_instance({1, 1, 1, 1, 1}, 12, 20);
        ZeroOneMatrix x(12, std::vector<int>(5, 0));
        const std::vector<int> columns{1, 5, 3, 2, 4, 1, 2, 5, 3, 4, 2, 1};
        for (std::size_t i = 0; i < 12; ++i) x[i][static_cast<std::size_t>(columns[i] - 1)] = 1;
        const auto row = encode(inst, x);
        CHECK(row[2] == 3);
        CHECK(row.stage_of == columns);
    }

    SUBCASE("malformed matrices") {
        CHECK_THROWS_AS(encode(inst2, {{1, 1}, {0, 1}}), MalformedMatrix);
        CHECK_THROWS_AS(encode(inst2, {{0, 0}, {0, 1}}), MalformedMatrix);
        CHECK_THROWS_AS(encode(inst2, {{1, 0}}), MalformedMatrix);
        CHECK_THROWS_AS(decode(inst2, Assignment{{1, 3}}), MalformedAssignment);
    }

    SUBCASE("round trip on random assignments") {
        Rng rng(11);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = std::uniform_int_distribution<int>(1, 8)(rng);
            const int r = std::uniform_int_distribution<int>(n, 20)(rng);
            const auto inst = unit_instance(std::vector<double>(static_cast<std::size_t>(n), 1.0), r, n);
            Assignment a;
            std::uniform_int_distribution<int> label(1, n);
            for (int i = 0; i < r; ++i) a.stage_of.push_back(label(rng));
            const auto x = decode(inst, a);
            REQUIRE(encode(inst, x) == a);
            REQUIRE(decode(inst, encode(inst, x)) == x);
        }
    }
}

TEST_CASE("solution_space_size follows C(R-1, N-1) * N!") {
    // Pascal's triangle as the independent binomial.
    auto binomial = [](int n, int k) {
        std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            c[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1);
            for (int j = 1; j < i; ++j)
                c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    c[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] +
                    c[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)];
        }
        return c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    };
    CHECK(binomial(11, 4) * 120 == 39600);

    CHECK(solution_space_size(1, 5).value == 1);
    CHECK(solution_space_size(2, 3).value == 4);
    CHECK(solution_space_size(5, 12).value == 39600);
    for (int n = 1; n <= 8; ++n) {
        for (int r = n; r <= 20; ++r) {
            std::uint64_t factorial = 1;
            for (int f = 2; f <= n; ++f) factorial *= static_cast<std::uint64_t>(f);
            CHECK(solution_space_size(n, r).value == binomial(r - 1, n - 1) * factorial);
        }
    }
    const auto huge = solution_space_size(30, 64);
    CHECK(huge.saturated);
    CHECK(huge.value == UINT64_MAX);
    CHECK_THROWS_AS(solution_space_size(4, 3), DomainError);
}

TEST_CASE("objective properties") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        const int r = std::uniform_int_distribution<int>(n, 16)(rng);
        const int d = std::uniform_int_distribution<int>(n, 150)(rng);
        const auto inst = random_instance(rng, n, r, d);
        const auto a = random_legal_assignment(n, r, rng);
        const double t = completion_time(inst, a);

        // Matches the term-by-term expansion.
        const auto p = stage_profile(inst, a).proc_times;
        CHECK(nearly_equal(t, fsmsp::testing::reference_completion_time(p, d), 1e-12));

        // Prefix maxima never fall, suffix maxima never rise.
        const auto ramp = ramp_profile(p);
        CHECK(std::is_sorted(ramp.ramp_up.begin(), ramp.ramp_up.end()));
        CHECK(std::is_sorted(ramp.ramp_down.rbegin(), ramp.ramp_down.rend()));
        CHECK(ramp.ramp_up.back() == *std::max_element(p.begin(), p.end()));

        // Scaling all unit times scales T; scaling proficiencies divides it.
        const double c = 0.5;
        auto times = inst.unit_times();
        for (auto& v : times) v *= 3.0;
        const Instance slower(n, r, d, times, inst.proficiency_matrix());
        CHECK(nearly_equal(completion_time(slower, a), 3.0 * t, 1e-12));
        auto prof = inst.proficiency_matrix();
        for (auto& row : prof)
            for (auto& v : row) v *= c;
        const Instance weaker(n, r, d, inst.unit_times(), prof);
        CHECK(nearly_equal(completion_time(weaker, a), t / c, 1e-12));

        // One more worker never slows the line.
        auto more = inst.proficiency_matrix();
        more.push_back(std::vector<double>(static_cast<std::size_t>(n), 0.3));
        const Instance bigger(n, r + 1, d, inst.unit_times(), more);
        for (int stage = 1; stage <= n; ++stage) {
            Assignment extended = a;
            extended.stage_of.push_back(stage);
            CHECK(completion_time(bigger, extended) <= t * (1 + 1e-12));
        }
    }
}

TEST_CASE("two-stage closed form and uniform lines") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int r = std::uniform_int_distribution<int>(2, 12)(rng);
        const int d = std::uniform_int_distribution<int>(2, 200)(rng);
        const auto inst = random_instance(rng, 2, r, d);
        const auto a = random_legal_assignment(2, r, rng);
        const auto p = stage_profile(inst, a).proc_times;
        const double expected = p[0] + (d - 1) * std::max(p[0], p[1]) + p[1];
        CHECK(nearly_equal(completion_time(inst, a), expected, 1e-12));
    }
    for (int n = 1; n <= 6; ++n) {
        const auto inst = unit_instance(std::vector<double>(static_cast<std::size_t>(n), 2.5), n, 40);
        Assignment a;
        for (int j = 1; j <= n; ++j) a.stage_of.push_back(j);
        CHECK(completion_time(inst, a) == doctest::Approx((40 + n - 1) * 2.5).epsilon(1e-12));
    }
}
