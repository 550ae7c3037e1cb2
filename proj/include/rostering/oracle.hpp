#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rostering/model.hpp"

namespace rostering {

enum class OracleStatus { Optimal, Infeasible };

struct OracleResult {
    OracleStatus status = OracleStatus::Infeasible;
    int best_cost = 0;           // defined when Optimal
    std::vector<int> best_genes; // defined when Optimal
    long nodes_explored = 0;
};

struct BudgetExceeded : std::runtime_error {
    long nodes;
    explicit BudgetExceeded(long n)
        : std::runtime_error("oracle node budget exhausted after " + std::to_string(n) + " nodes"), nodes(n) {}
};

// Exhaustive depth-first search over nurse-by-nurse assignments with an
// admissible cost bound (sum of remaining per-nurse minimum costs) and a
// remaining-cover bound. Exact: returns a proven optimum or a proof of
// infeasibility. Desk scale only.
OracleResult exact_solve(const Instance& inst, long node_budget = 50'000'000);

// Canonical micro instances. MICRO-A is 5 nurses in grade blocks (1,2,2)
// with seeded low-biased costs and demand that is feasible but tight on at
// least four shifts; MICRO-B inflates every demand entry by 2, which no
// assignment can cover.
Instance micro_a();
Instance micro_b();

// Seeded family of MICRO-A-like instances (n = 5 or 6, 4..8 patterns per
// nurse). Feasible by construction unless stress is set, which inflates
// demand the same way MICRO-B does.
Instance micro_variant(std::uint64_t seed, bool stress = false);

std::vector<std::pair<std::string, Instance>> micro_suite(int count, std::uint64_t base_seed,
                                                          int infeasible_every = 0);

} // namespace rostering
