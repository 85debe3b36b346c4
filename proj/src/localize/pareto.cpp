#include <algorithm>
#include <limits>
#include <numeric>

#include "fairfix/error.hpp"
#include "fairfix/localize.hpp"

namespace fairfix {

std::vector<WeightCoord> pareto_front(std::span<const WeightScore> scores,
                                      std::optional<std::size_t> top_k) {
    if (scores.empty()) throw PreconditionError("Pareto front of an empty score list");
    if (top_k && *top_k == 0) throw InputError("top_k must be positive");

    // Sweep in decreasing grad_score. Within a run of equal grad_score only the
    // largest fwd_score survives, and only if it beats every fwd_score seen at a
    // strictly larger grad_score.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a].grad_score != scores[b].grad_score) return scores[a].grad_score > scores[b].grad_score;
        return scores[a].fwd_score > scores[b].fwd_score;
    });

    std::vector<std::size_t> front;
    double best_fwd_above = -std::numeric_limits<double>::infinity();
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start;
        const double g = scores[order[start]].grad_score;
        while (end < order.size() && scores[order[end]].grad_score == g) ++end;
        const double run_max = scores[order[start]].fwd_score;
        if (run_max > best_fwd_above) {
            for (std::size_t k = start; k < end && scores[order[k]].fwd_score == run_max; ++k) {
                front.push_back(order[k]);
            }
            best_fwd_above = run_max;
        }
        start = end;
    }

    if (top_k && front.size() > *top_k) {
        std::sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
            const double sa = scores[a].grad_score + scores[a].fwd_score;
            const double sb = scores[b].grad_score + scores[b].fwd_score;
            if (sa != sb) return sa > sb;
            return scores[a].coord < scores[b].coord;
        });
        front.resize(*top_k);
    }

    std::vector<WeightCoord> coords;
    coords.reserve(front.size());
    for (std::size_t i : front) coords.push_back(scores[i].coord);
    std::sort(coords.begin(), coords.end());
    return coords;
}

}  // namespace fairfix
