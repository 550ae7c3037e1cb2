#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rostering/rng.hpp"

namespace rostering {

constexpr int kDaysPerWeek = 7;
constexpr int kShiftCount = 14; // shifts 0..6 are days Sun-Sat, 7..13 the nights
constexpr int kGradeCount = 3;  // grade 1 is the most senior

// R[k][s-1] = demand on shift k for nurses of grade s or above (cumulative).
using DemandMatrix = std::array<std::array<int, kGradeCount>, kShiftCount>;
// C[k][s-1] = number of assigned nurses of grade exactly s covering shift k.
using CoverMatrix = std::array<std::array<int, kGradeCount>, kShiftCount>;

enum class PatternKind { Day, Night };

// One weekly shift pattern: a 14-bit cover vector. A pattern is pure day or
// pure night; nurses normally work one or the other in a given week.
struct ShiftPattern {
    int id = 0;            // external identifier, preserved through files
    std::uint16_t mask = 0; // bit k set <=> pattern covers shift k
    PatternKind kind = PatternKind::Day;

    bool covers(int shift) const { return (mask >> shift) & 1u; }
    int shifts_on() const;

    std::string cover_string() const;
    static ShiftPattern from_cover_string(int id, const std::string& cover);
};

struct Nurse {
    int id = 0;    // external identifier
    int grade = 1; // 1 (highest) .. 3
    std::vector<int> feasible; // positions into Instance::patterns()
    std::vector<int> cost;     // aligned with feasible, each in [0, 100]
};

// Grade-exclusive demand: S[k][s] = demand at grade s not already required
// at a higher grade.
struct DemandSplit {
    DemandMatrix s{};
};

struct ValidationError : std::runtime_error {
    enum class Code { EmptyFeasibleSet, NonMonotoneDemand, BadCost, DanglingPattern };
    Code code;
    int index_a = -1; // nurse or shift, depending on code
    int index_b = -1;

    ValidationError(Code c, std::string msg, int a = -1, int b = -1)
        : std::runtime_error(std::move(msg)), code(c), index_a(a), index_b(b) {}
};

// Pre-validation instance description, as parsed from a file or built by a
// generator. Nurse::feasible holds external pattern ids here; validation
// remaps them to positions.
struct RawInstance {
    std::vector<ShiftPattern> patterns;
    std::vector<Nurse> nurses;
    DemandMatrix demand{};
};

// A validated stage-2 problem. Immutable after construction and safe to
// share across threads. Nurses are stored in contiguous grade blocks,
// grade 1 first, stable within a grade.
class Instance {
public:
    static Instance validate(const RawInstance& raw);

    int nurse_count() const { return static_cast<int>(nurses_.size()); }
    int pattern_count() const { return static_cast<int>(patterns_.size()); }
    const std::vector<Nurse>& nurses() const { return nurses_; }
    const Nurse& nurse(int i) const { return nurses_[i]; }
    const std::vector<ShiftPattern>& patterns() const { return patterns_; }
    const ShiftPattern& pattern(int j) const { return patterns_[j]; }
    const DemandMatrix& demand() const { return demand_; }
    const DemandSplit& split() const { return split_; }

    // (end of the grade-1 block, end of the grade-1+2 block)
    std::array<int, 2> grade_boundaries() const { return {block_end_[0], block_end_[1]}; }
    int grade_begin(int grade) const { return grade == 1 ? 0 : block_end_[grade - 2]; }
    int grade_end(int grade) const { return block_end_[grade - 1]; }
    int grade_of(int i) const { return nurses_[i].grade; }

    // Preference penalty of nurse i working pattern j; -1 if j not in F(i).
    int cost_of(int i, int j) const { return cost_table_[static_cast<std::size_t>(i) * patterns_.size() + j]; }
    bool feasible_for(int i, int j) const { return cost_of(i, j) >= 0; }

private:
    std::vector<ShiftPattern> patterns_;
    std::vector<Nurse> nurses_;
    DemandMatrix demand_{};
    DemandSplit split_{};
    std::array<int, kGradeCount> block_end_{};
    std::vector<int> cost_table_; // nurse-major dense lookup, -1 = infeasible
};

// One candidate schedule: pattern position per nurse, with cover and raw
// preference cost maintained incrementally. Constraint (one pattern from
// F(i) per nurse) holds by construction for anything built through this
// type and the operators.
class Individual {
public:
    Individual() = default;
    Individual(const Instance& inst, std::vector<int> genes);

    static Individual random(const Instance& inst, Rng& rng);

    int gene(int i) const { return genes_[i]; }
    std::span<const int> genes() const { return genes_; }
    int size() const { return static_cast<int>(genes_.size()); }

    void set_gene(const Instance& inst, int i, int pattern_pos);

    const CoverMatrix& cover() const { return cover_; }
    int raw_cost() const { return cost_by_grade_[0] + cost_by_grade_[1] + cost_by_grade_[2]; }
    int raw_cost_of_grade(int grade) const { return cost_by_grade_[grade - 1]; }

    double score() const { return score_; }
    void set_score(double s) { score_ = s; }

    bool operator==(const Individual& other) const { return genes_ == other.genes_; }

private:
    std::vector<int> genes_;
    CoverMatrix cover_{};
    std::array<int, kGradeCount> cost_by_grade_{};
    double score_ = 0.0;
};

struct Deficit {
    int total_under = 0;          // sum of positive shortfalls over all (k, s)
    int violated_constraints = 0; // count of (k, s) pairs with a shortfall
};

// All day patterns with days_on working days (ascending 7-bit mask order),
// followed by all night patterns with nights_on working nights.
std::vector<ShiftPattern> enumerate_patterns(int days_on, int nights_on);

// Recomputed from genes, independent of the caches.
long raw_cost(const Instance& inst, const Individual& ind);
CoverMatrix cover_counts(const Instance& inst, const Individual& ind);

Deficit deficit_from_cover(const Instance& inst, const CoverMatrix& cover);
Deficit deficit(const Instance& inst, const Individual& ind);

DemandSplit compute_split(const DemandMatrix& demand);

} // namespace rostering
