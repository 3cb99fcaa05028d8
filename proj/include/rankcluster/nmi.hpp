#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rankcluster/partition.hpp"

namespace rankcluster {

// NMI(A, B) = 2 I(A, B) / (H(A) + H(B)), natural logarithms (the base
// cancels in the ratio). Two single-community partitions are identical,
// hence defined as 1; if exactly one side has zero entropy the mutual
// information is 0 and so is the score.
struct NmiScore {
    double value = 0.0;
    double mutual_information = 0.0;
    double entropy_a = 0.0;
    double entropy_b = 0.0;
};

namespace detail {

// Summing in sorted order makes the result a function of the term multiset
// alone, so nmi(a, b) == nmi(b, a) holds bit for bit and relabeling either
// side cannot move the value.
inline double stable_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (double term : terms) total += term;
    return total;
}

}  // namespace detail

inline NmiScore nmi(const Partition& a, const Partition& b) {
    if (a.size() != b.size()) throw std::invalid_argument("partition sizes differ");
    const std::size_t n = a.community.size();
    if (n == 0) throw std::invalid_argument("empty partitions");

    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> count_a;
    std::map<int, double> count_b;
    for (std::size_t i = 0; i < n; ++i) {
        joint[{a.community[i], b.community[i]}] += 1.0;
        count_a[a.community[i]] += 1.0;
        count_b[b.community[i]] += 1.0;
    }

    NmiScore score;
    const double total = static_cast<double>(n);
    std::vector<double> terms;
    terms.reserve(joint.size());
    for (const auto& [label, c] : count_a) terms.push_back(-c / total * std::log(c / total));
    score.entropy_a = detail::stable_sum(terms);
    terms.clear();
    for (const auto& [label, c] : count_b) terms.push_back(-c / total * std::log(c / total));
    score.entropy_b = detail::stable_sum(terms);
    terms.clear();
    for (const auto& [labels, c] : joint) {
        const double p = c / total;
        const double pa = count_a[labels.first] / total;
        const double pb = count_b[labels.second] / total;
        terms.push_back(p * std::log(p / (pa * pb)));
    }
    score.mutual_information = detail::stable_sum(terms);

    const double denom = score.entropy_a + score.entropy_b;
    score.value = denom > 0.0 ? 2.0 * score.mutual_information / denom : 1.0;
    return score;
}

}  // namespace rankcluster
