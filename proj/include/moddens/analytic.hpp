#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "moddens/generators.hpp"
#include "moddens/metrics.hpp"

namespace moddens {

/// Closed-form quantities for the synthetic families.  For p = 1 instances
/// the values are exact; for p < 1 they are expectations over the ensemble.
using AnalyticTable = std::vector<std::pair<std::string, double>>;

namespace analytic {

inline double er_single_value(int m, double p) { return p * (m - 1); }

inline double two_communities_single(int m, int n, double p_m, double p_n) {
    return (p_m * m * (m - 1) + p_n * n * (n - 1) + 2.0) / (m + n);
}

inline double two_communities_sep(int m, int n, double p_m, double p_n) {
    return p_m * (m - 1) + p_n * (n - 1) - 2.0 / std::sqrt(static_cast<double>(m) * n);
}

inline double ring_sep(const std::vector<int>& sizes, const std::vector<double>& probs) {
    const std::size_t k = sizes.size();
    double value = 0.0;
    for (std::size_t i = 0; i < k; ++i) value += probs[i] * (sizes[i] - 1);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = (i + 1) % k;
        value -= 2.0 / std::sqrt(static_cast<double>(sizes[i]) * sizes[j]);
    }
    return value;
}

/// M when communities 0..k of the ring are merged into one cluster and the
/// rest stay separate; k = community_count - 1 merges the whole ring.
inline double ring_merge_k(const std::vector<int>& sizes, const std::vector<double>& probs,
                           int k) {
    const int last = static_cast<int>(sizes.size()) - 1;  // ring of last+1 communities
    if (k < 1 || k > last) throw std::invalid_argument("merge depth out of range");
    double merged_nodes = 0.0;
    // Merging 0..k swallows the k bridges between them; the full merge also
    // swallows the bridge that closes the ring.
    double merged_internal = 2.0 * (k == last ? k + 1 : k);
    for (int i = 0; i <= k; ++i) {
        merged_nodes += sizes[static_cast<std::size_t>(i)];
        merged_internal += probs[static_cast<std::size_t>(i)] *
                           sizes[static_cast<std::size_t>(i)] *
                           (sizes[static_cast<std::size_t>(i)] - 1);
    }
    double value = merged_internal / merged_nodes;
    if (k == last) return value;
    for (int i = k + 1; i <= last; ++i) {
        value += probs[static_cast<std::size_t>(i)] * (sizes[static_cast<std::size_t>(i)] - 1);
    }
    for (int i = k + 1; i < last; ++i) {
        value -= 2.0 / std::sqrt(static_cast<double>(sizes[static_cast<std::size_t>(i)]) *
                                 sizes[static_cast<std::size_t>(i + 1)]);
    }
    value -= (2.0 / std::sqrt(merged_nodes)) *
             (1.0 / std::sqrt(static_cast<double>(sizes[static_cast<std::size_t>(k + 1)])) +
              1.0 / std::sqrt(static_cast<double>(sizes[static_cast<std::size_t>(last)])));
    return value;
}

inline double two_cliques_merge(int m, int n, int w) {
    return (static_cast<double>(m) * (m - 1) + static_cast<double>(n) * (n - 1) + 2.0 * w) /
           (m + n);
}

inline double two_cliques_sep(int m, int n, int w) {
    return (m - 1.0) + (n - 1.0) - 2.0 * w / std::sqrt(static_cast<double>(m) * n);
}

inline double two_cliques_sep_li(int m, int n, int w) {
    return (m - 1.0) + (n - 1.0) - static_cast<double>(w) / m - static_cast<double>(w) / n;
}

}  // namespace analytic

inline AnalyticTable analytic_suite(const GeneratorSpec& spec) {
    for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
        if (spec.sizes[i] < 3) throw std::invalid_argument("community size must be >= 3");
        if (spec.family != Family::two_cliques_w_bridge) {
            const double p = spec.probs.at(i);
            if (p < min_edge_probability(spec.sizes[i]) - 1e-12 || p > 1.0 + 1e-12) {
                throw std::invalid_argument("edge probability outside [2/(m-1), 1]");
            }
        }
    }
    AnalyticTable table;
    switch (spec.family) {
        case Family::er_single: {
            const int m = spec.sizes.at(0);
            const double p = spec.probs.at(0);
            table.emplace_back("p_min", min_edge_probability(m));
            table.emplace_back("M_single", analytic::er_single_value(m, p));
            break;
        }
        case Family::two_communities_bridged: {
            const int m = spec.sizes.at(0), n = spec.sizes.at(1);
            const double pm = spec.probs.at(0), pn = spec.probs.at(1);
            const double single = analytic::two_communities_single(m, n, pm, pn);
            const double sep = analytic::two_communities_sep(m, n, pm, pn);
            table.emplace_back("M_single", single);
            table.emplace_back("M_sep", sep);
            table.emplace_back("delta_M", sep - single);
            break;
        }
        case Family::ring_of_communities: {
            table.emplace_back("M_sep", analytic::ring_sep(spec.sizes, spec.probs));
            for (int k = 1; k < static_cast<int>(spec.sizes.size()); ++k) {
                table.emplace_back("M_merge_" + std::to_string(k),
                                   analytic::ring_merge_k(spec.sizes, spec.probs, k));
            }
            break;
        }
        case Family::two_cliques_w_bridge: {
            const int m = spec.sizes.at(0), n = spec.sizes.at(1), w = spec.bridge_count;
            if (w < 0 || w > m * n) throw std::invalid_argument("bridge count outside [0, m*n]");
            table.emplace_back("M_merge", analytic::two_cliques_merge(m, n, w));
            table.emplace_back("M_sep", analytic::two_cliques_sep(m, n, w));
            table.emplace_back("delta_M", analytic::two_cliques_sep(m, n, w) -
                                              analytic::two_cliques_merge(m, n, w));
            table.emplace_back("D_merge", analytic::two_cliques_merge(m, n, w));
            table.emplace_back("D_sep", analytic::two_cliques_sep_li(m, n, w));
            table.emplace_back("w_M", w_threshold_M(m, n));
            table.emplace_back("w_D", w_threshold_D(m, n));
            break;
        }
    }
    return table;
}

}  // namespace moddens
