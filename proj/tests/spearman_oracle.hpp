#pragma once

// Brute-force midrank Spearman, written against the textbook definition and
// independent of the production code: O(n^2) counting ranks, sum-formula
// Pearson on the rank vectors.

#include <cmath>
#include <vector>

inline std::vector<double> brute_ranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        int smaller = 0, equal = 0;
        for (size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++smaller;
            if (v[j] == v[i]) ++equal;
        }
        ranks[i] = 1.0 + smaller + (equal - 1) * 0.5;
    }
    return ranks;
}

inline double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> rx = brute_ranks(x);
    std::vector<double> ry = brute_ranks(y);
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += rx[i];
        sy += ry[i];
        sxy += rx[i] * ry[i];
        sxx += rx[i] * rx[i];
        syy += ry[i] * ry[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// no-tie closed form 1 - 6*sum(d^2) / (n(n^2-1))
inline double spearman_no_ties(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> rx = brute_ranks(x);
    std::vector<double> ry = brute_ranks(y);
    double d2 = 0;
    for (size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    const double n = static_cast<double>(x.size());
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}
