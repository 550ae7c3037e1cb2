#include "rostering/model.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace rostering {

int ShiftPattern::shifts_on() const {
    return std::popcount(mask);
}

std::string ShiftPattern::cover_string() const {
    std::string s(kShiftCount, '0');
    for (int k = 0; k < kShiftCount; ++k) {
        if (covers(k)) s[k] = '1';
    }
    return s;
}

ShiftPattern ShiftPattern::from_cover_string(int id, const std::string& cover) {
    if (cover.size() != kShiftCount) {
        throw std::invalid_argument("pattern " + std::to_string(id) + ": cover string must have 14 characters");
    }
    ShiftPattern p;
    p.id = id;
    for (int k = 0; k < kShiftCount; ++k) {
        if (cover[k] == '1') {
            p.mask |= static_cast<std::uint16_t>(1u << k);
        } else if (cover[k] != '0') {
            throw std::invalid_argument("pattern " + std::to_string(id) + ": cover string must be 0/1");
        }
    }
    if (p.mask == 0) {
        throw std::invalid_argument("pattern " + std::to_string(id) + ": cover is empty");
    }
    const bool any_day = (p.mask & 0x007fu) != 0;
    const bool any_night = (p.mask & 0x3f80u) != 0;
    if (any_day && any_night) {
        throw std::invalid_argument("pattern " + std::to_string(id) + ": mixes day and night shifts");
    }
    p.kind = any_day ? PatternKind::Day : PatternKind::Night;
    return p;
}

std::vector<ShiftPattern> enumerate_patterns(int days_on, int nights_on) {
    if (days_on < 0 || days_on > 7 || nights_on < 0 || nights_on > 7 || (days_on == 0 && nights_on == 0)) {
        throw std::invalid_argument("enumerate_patterns: counts must be in 0..7 and not both zero");
    }
    std::vector<ShiftPattern> out;
    int next_id = 0;
    if (days_on > 0) {
        for (std::uint16_t m = 0; m < 128; ++m) {
            if (std::popcount(m) == days_on) {
                out.push_back(ShiftPattern{next_id++, m, PatternKind::Day});
            }
        }
    }
    if (nights_on > 0) {
        for (std::uint16_t m = 0; m < 128; ++m) {
            if (std::popcount(m) == nights_on) {
                out.push_back(ShiftPattern{next_id++, static_cast<std::uint16_t>(m << kDaysPerWeek), PatternKind::Night});
            }
        }
    }
    return out;
}

DemandSplit compute_split(const DemandMatrix& demand) {
    DemandSplit split;
    for (int k = 0; k < kShiftCount; ++k) {
        split.s[k][0] = demand[k][0];
        for (int s = 1; s < kGradeCount; ++s) {
            split.s[k][s] = demand[k][s] - demand[k][s - 1];
        }
    }
    return split;
}

Instance Instance::validate(const RawInstance& raw) {
    Instance inst;
    inst.patterns_ = raw.patterns;

    // Pattern invariants and external-id -> position map.
    std::vector<std::pair<int, int>> id_to_pos;
    id_to_pos.reserve(inst.patterns_.size());
    for (std::size_t j = 0; j < inst.patterns_.size(); ++j) {
        const ShiftPattern& p = inst.patterns_[j];
        if (p.mask == 0) {
            throw std::invalid_argument("pattern " + std::to_string(p.id) + ": cover is empty");
        }
        const bool any_day = (p.mask & 0x007fu) != 0;
        const bool any_night = (p.mask & 0x3f80u) != 0;
        if (any_day && any_night) {
            throw std::invalid_argument("pattern " + std::to_string(p.id) + ": mixes day and night shifts");
        }
        if ((p.kind == PatternKind::Day) != any_day) {
            throw std::invalid_argument("pattern " + std::to_string(p.id) + ": kind does not match cover");
        }
        id_to_pos.emplace_back(p.id, static_cast<int>(j));
    }
    std::sort(id_to_pos.begin(), id_to_pos.end());
    for (std::size_t j = 1; j < id_to_pos.size(); ++j) {
        if (id_to_pos[j].first == id_to_pos[j - 1].first) {
            throw std::invalid_argument("duplicate pattern id " + std::to_string(id_to_pos[j].first));
        }
    }
    auto lookup = [&](int id) -> int {
        auto it = std::lower_bound(id_to_pos.begin(), id_to_pos.end(), std::pair<int, int>{id, -1});
        if (it == id_to_pos.end() || it->first != id) return -1;
        return it->second;
    };

    // Demand must be non-decreasing in grade: R[k][s] counts grade s *or above*.
    inst.demand_ = raw.demand;
    for (int k = 0; k < kShiftCount; ++k) {
        if (inst.demand_[k][0] < 0) {
            throw ValidationError(ValidationError::Code::NonMonotoneDemand,
                                  "demand row " + std::to_string(k + 1) + " is negative", k + 1);
        }
        for (int s = 1; s < kGradeCount; ++s) {
            if (inst.demand_[k][s] < inst.demand_[k][s - 1]) {
                throw ValidationError(ValidationError::Code::NonMonotoneDemand,
                                      "demand row " + std::to_string(k + 1) + " decreases at grade " + std::to_string(s + 1),
                                      k + 1);
            }
        }
    }
    inst.split_ = compute_split(inst.demand_);

    // Stable sort into grade blocks, remap feasible sets, check costs.
    inst.nurses_ = raw.nurses;
    std::stable_sort(inst.nurses_.begin(), inst.nurses_.end(),
                     [](const Nurse& a, const Nurse& b) { return a.grade < b.grade; });
    const int n = static_cast<int>(inst.nurses_.size());
    const int m = static_cast<int>(inst.patterns_.size());
    inst.cost_table_.assign(static_cast<std::size_t>(n) * m, -1);
    for (int i = 0; i < n; ++i) {
        Nurse& nu = inst.nurses_[i];
        if (nu.grade < 1 || nu.grade > kGradeCount) {
            throw std::invalid_argument("nurse " + std::to_string(nu.id) + ": grade out of range");
        }
        if (nu.feasible.empty()) {
            throw ValidationError(ValidationError::Code::EmptyFeasibleSet,
                                  "nurse " + std::to_string(nu.id) + " has an empty feasible set", nu.id);
        }
        if (nu.cost.size() != nu.feasible.size()) {
            throw ValidationError(ValidationError::Code::BadCost,
                                  "nurse " + std::to_string(nu.id) + ": costs not aligned with feasible set", nu.id);
        }
        for (std::size_t t = 0; t < nu.feasible.size(); ++t) {
            const int pos = lookup(nu.feasible[t]);
            if (pos < 0) {
                throw ValidationError(ValidationError::Code::DanglingPattern,
                                      "nurse " + std::to_string(nu.id) + " references unknown pattern " +
                                          std::to_string(nu.feasible[t]),
                                      nu.id, nu.feasible[t]);
            }
            const int c = nu.cost[t];
            if (c < 0 || c > 100) {
                throw ValidationError(ValidationError::Code::BadCost,
                                      "nurse " + std::to_string(nu.id) + ", pattern " + std::to_string(nu.feasible[t]) +
                                          ": cost " + std::to_string(c) + " outside [0,100]",
                                      nu.id, nu.feasible[t]);
            }
            if (inst.cost_table_[static_cast<std::size_t>(i) * m + pos] >= 0) {
                throw std::invalid_argument("nurse " + std::to_string(nu.id) + ": duplicate feasible pattern " +
                                            std::to_string(nu.feasible[t]));
            }
            nu.feasible[t] = pos;
            inst.cost_table_[static_cast<std::size_t>(i) * m + pos] = c;
        }
    }

    int i = 0;
    for (int g = 1; g <= kGradeCount; ++g) {
        while (i < n && inst.nurses_[i].grade == g) ++i;
        inst.block_end_[g - 1] = i;
    }
    return inst;
}

Individual::Individual(const Instance& inst, std::vector<int> genes) : genes_(std::move(genes)) {
    cover_ = cover_counts(inst, *this);
    for (int i = 0; i < size(); ++i) {
        cost_by_grade_[inst.grade_of(i) - 1] += inst.cost_of(i, genes_[i]);
    }
}

Individual Individual::random(const Instance& inst, Rng& rng) {
    std::vector<int> genes(inst.nurse_count());
    for (int i = 0; i < inst.nurse_count(); ++i) {
        const auto& feas = inst.nurse(i).feasible;
        genes[i] = feas[rng.uniform_int(static_cast<int>(feas.size()))];
    }
    return Individual(inst, std::move(genes));
}

void Individual::set_gene(const Instance& inst, int i, int pattern_pos) {
    const int old = genes_[i];
    if (old == pattern_pos) return;
    const int grade_row = inst.grade_of(i) - 1;
    std::uint16_t off = inst.pattern(old).mask;
    std::uint16_t on = inst.pattern(pattern_pos).mask;
    while (off) {
        const int k = std::countr_zero(off);
        --cover_[k][grade_row];
        off &= static_cast<std::uint16_t>(off - 1);
    }
    while (on) {
        const int k = std::countr_zero(on);
        ++cover_[k][grade_row];
        on &= static_cast<std::uint16_t>(on - 1);
    }
    cost_by_grade_[grade_row] += inst.cost_of(i, pattern_pos) - inst.cost_of(i, old);
    genes_[i] = pattern_pos;
}

long raw_cost(const Instance& inst, const Individual& ind) {
    long total = 0;
    for (int i = 0; i < ind.size(); ++i) {
        total += inst.cost_of(i, ind.gene(i));
    }
    return total;
}

CoverMatrix cover_counts(const Instance& inst, const Individual& ind) {
    CoverMatrix cover{};
    for (int i = 0; i < ind.size(); ++i) {
        const int grade_row = inst.grade_of(i) - 1;
        std::uint16_t m = inst.pattern(ind.gene(i)).mask;
        while (m) {
            const int k = std::countr_zero(m);
            ++cover[k][grade_row];
            m &= static_cast<std::uint16_t>(m - 1);
        }
    }
    return cover;
}

Deficit deficit_from_cover(const Instance& inst, const CoverMatrix& cover) {
    Deficit d;
    const DemandMatrix& demand = inst.demand();
    for (int k = 0; k < kShiftCount; ++k) {
        int cumulative = 0;
        for (int s = 0; s < kGradeCount; ++s) {
            cumulative += cover[k][s];
            const int shortfall = demand[k][s] - cumulative;
            if (shortfall > 0) {
                d.total_under += shortfall;
                ++d.violated_constraints;
            }
        }
    }
    return d;
}

Deficit deficit(const Instance& inst, const Individual& ind) {
    return deficit_from_cover(inst, ind.cover());
}

} // namespace rostering
