#pragma once

#include <string>
#include <vector>

#include "conleyifs/dynamics.hpp"
#include "conleyifs/geometry.hpp"

namespace conleyifs {

constexpr uint64_t kCodingDefaultSeed = 0xC0FFEE;

// Element of code space: a finite prefix over the alphabet {1..N} plus an
// extension rule producing letters at every later position.
struct Address {
    enum class Extension { RepeatLast, Random };

    int alphabet = 2;
    std::vector<int> prefix;  // letters in 1..N
    Extension extension = Extension::RepeatLast;
    uint64_t seed = 0;

    static Address repeating(int alphabet, std::vector<int> prefix);
    static Address random(int alphabet, uint64_t seed);
    static Address random_with_prefix(int alphabet, std::vector<int> prefix, uint64_t seed);

    // letter at 1-based position k
    int letter(int k) const;
    std::string head(int k) const;  // first k letters as text
    void validate() const;
};

// 2^{-k} metric on code space, compared to the given depth.
double code_distance(const Address& s, const Address& o, int depth);

// f_{s_1}(f_{s_2}(... f_{s_depth}(x) ...)): the innermost letter is the
// deepest one, matching the composition f_{sigma|k} = f_{s1} ∘ ... ∘ f_{sk}.
Point fiber(const IFSSpec& ifs, const Address& address, int depth, const Point& x);

enum class FiberVerdict { PointFibered, NotPointFibered, Inconclusive };

struct FiberReport {
    FiberVerdict verdict = FiberVerdict::Inconclusive;
    int n_addresses = 0, n_points = 0, depth = 0;
    double tol = 0;
    double initial_diameter = 0;
    double final_max_diameter = 0;
    std::vector<double> max_diameter_by_depth;  // index k: max over addresses at depth k
    // witness for a negative verdict: the address and two starting points
    // whose images refuse to contract
    int witness_address = -1;
    std::string witness_prefix;
    Point witness_x0, witness_x1;
    std::string describe() const;
};

// Samples addresses and start points from the region and tracks the diameter
// of the composed images per depth. point_fibered when every sampled address
// contracts below tol at full depth; not_point_fibered needs a constructive
// non-shrinking witness; otherwise inconclusive.
FiberReport point_fibered_test(const IFSSpec& ifs, const CellSet& region, int n_addresses,
                               int n_points, int depth, double tol,
                               uint64_t seed = kCodingDefaultSeed);

struct CommuteReport {
    bool pass = false;
    double max_error = 0;
    double bound = 0;  // tol + truncation allowance
    int checks = 0;
    std::string summary;
};

// Finite-depth check of the coding-map diagram pi(n sigma) = f_n(pi(sigma)):
// both sides are evaluated from independent start points, so the error is
// bounded by tol plus the fibers' residual start-point dependence.
CommuteReport coding_commute_check(const IFSSpec& ifs, const FiberReport& fibers,
                                   const CellSet& region, int n_addresses, int depth,
                                   double tol, uint64_t seed = kCodingDefaultSeed);

// Seeded random-letter iteration; returns the points after burn_in along
// with the letter applied at each emitted step.
struct ChaosSample {
    Point point;
    int letter;
};
std::vector<ChaosSample> chaos_game(const IFSSpec& ifs, const Point& x0, long n_steps,
                                    long burn_in, uint64_t seed);

}  // namespace conleyifs
