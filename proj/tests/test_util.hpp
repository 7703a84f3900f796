#pragma once

#include <vector>

#include "smlab/core.hpp"

namespace smlab::test {

// rows written 1-based, like the text format
inline PreferenceProfile profile1(std::vector<std::vector<int>> men,
                                  std::vector<std::vector<int>> women) {
    const int n = static_cast<int>(men.size());
    for (auto* rows : {&men, &women}) {
        for (auto& row : *rows) {
            for (auto& v : row) --v;
        }
    }
    return PreferenceProfile::validated(n, std::move(men), std::move(women));
}

// every agent i tops partner i, rest ascending
inline PreferenceProfile aligned_diagonal(int n) {
    std::vector<std::vector<int>> men, women;
    for (int i = 0; i < n; ++i) {
        std::vector<int> row;
        row.push_back(i);
        for (int k = 0; k < n; ++k) {
            if (k != i) row.push_back(k);
        }
        men.push_back(row);
        women.push_back(row);
    }
    return PreferenceProfile::validated(n, std::move(men), std::move(women));
}

// every man ranks w1 > w2 > ..., every woman m1 > m2 > ...
inline PreferenceProfile all_aligned(int n) {
    std::vector<int> asc;
    for (int k = 0; k < n; ++k) asc.push_back(k);
    std::vector<std::vector<int>> men(static_cast<std::size_t>(n), asc);
    std::vector<std::vector<int>> women(static_cast<std::size_t>(n), asc);
    return PreferenceProfile::validated(n, std::move(men), std::move(women));
}

}  // namespace smlab::test
