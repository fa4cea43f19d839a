#pragma once

#include <algorithm>
#include <vector>

#include "fsmsp/model.hpp"

namespace fsmsp::testing {

/// The two-stage, three-worker instance used throughout the unit tests.
/// With D = 4 the optimum is 19/3 at [1,2,1].
inline Instance tiny_instance(int num_products = 4) {
    return Instance(2, 3, num_products, {2.0, 1.0}, {{1.0, 0.5}, {0.5, 1.0}, {0.5, 0.5}});
}

/// Instance with every proficiency equal to one.
inline Instance unit_instance(std::vector<double> unit_times, int num_workers, int num_products) {
    const int n = static_cast<int>(unit_times.size());
    return Instance(n, num_workers, num_products, std::move(unit_times),
                    std::vector<std::vector<double>>(static_cast<std::size_t>(num_workers),
                                                     std::vector<double>(static_cast<std::size_t>(n), 1.0)));
}

/// Textbook evaluation from stage processing times, written out term by term.
inline double reference_completion_time(const std::vector<double>& p, int d) {
    const int n = static_cast<int>(p.size());
    auto max_range = [&](int lo, int hi) {  // 1-based inclusive
        double m = 0.0;
        for (int j = lo; j <= hi; ++j) m = std::max(m, p[static_cast<std::size_t>(j - 1)]);
        return m;
    };
    double t = 0.0;
    for (int j = 1; j <= n - 1; ++j) t += max_range(1, j);
    t += (d - n + 1) * max_range(1, n);
    for (int j = 2; j <= n; ++j) t += max_range(j, n);
    return t;
}

/// Every assignment vector in lexicographic order, legal or not.
template <typename Visit>
void for_each_assignment(int num_stages, int num_workers, Visit&& visit) {
    Assignment a{std::vector<int>(static_cast<std::size_t>(num_workers), 1)};
    while (true) {
        visit(a);
        int i = num_workers - 1;
        while (i >= 0 && a.stage_of[static_cast<std::size_t>(i)] == num_stages) {
            a.stage_of[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) return;
        ++a.stage_of[static_cast<std::size_t>(i)];
    }
}

}  // namespace fsmsp::testing
