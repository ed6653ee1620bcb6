#pragma once

#include <optional>
#include <string>

#include "conleyifs/relation.hpp"

namespace conleyifs {

struct BlockCheck {
    bool ok = false;
    CellSet violations;  // image cells outside interior(Q)
};

// Q is an attractor block when image(Q) is contained in the combinatorial
// interior of Q.
BlockCheck is_block(const TransitionRelation& rel, const CellSet& q);

// Largest invariant subset of region: the stabilized descent
// S_0 = region, S_{k+1} = image(S_k) ∩ region. Monotone for any region.
CellSet invariant_core(const TransitionRelation& rel, const CellSet& region);

// Stabilized iteration A_0 = Q, A_{k+1} = image(A_k) ∩ Q for a certified
// block Q; the result satisfies image(A) = A. Throws ContractError with the
// margin report when Q is not a block.
CellSet attractor_from_block(const TransitionRelation& rel, const CellSet& q);

// Union of the eventual cycle of S, image(S), image^2(S), ...;
// satisfies image(omega) = omega.
CellSet omega_limit(const TransitionRelation& rel, const CellSet& s);

struct FindBlockResult {
    bool ok = false;
    CellSet block;
    CellSet attractor;  // attractor_from_block(block) when ok
    std::string diagnostic;
};

// Attractor block for A inside the neighborhood N: grows the viability
// kernel (largest forward-invariant subset of N, the cell transcription of
// the backward preimage recursion) and then erodes to the maximal subset
// whose image stays in its own interior. Fails when no block for exactly A
// exists at this resolution.
FindBlockResult find_block(const TransitionRelation& rel, const CellSet& a, const CellSet& n);

// Cells from which every reachable recurrent strongly-connected component of
// the union graph lies inside A. Requires image(A) = A.
CellSet basin(const TransitionRelation& rel, const CellSet& a);

// Attractor of the reversed relation on the complement of the block Q.
// Requires an invertible IFS behind the relation.
CellSet dual_repeller(const TransitionRelation& rel, const CellSet& q);

enum class StrictVerdict { Strict, NotStrict, Inconclusive };

struct StrictReport {
    StrictVerdict verdict = StrictVerdict::Inconclusive;
    int witness_cell = -1;
    CellSet witness_omega;
    bool omega_missing_part = false;  // witness omega does not cover A
    bool omega_escapes = false;       // witness omega not contained in A
    int cells_checked = 0;
    bool exhaustive = false;
    std::string describe() const;
};

// Strictness probe: strict demands omega({c}) = A for every sampled cell of
// b. Cells outside A are sampled first so witnesses are off-attractor when
// violations exist. Requires image(A) = A and A ⊆ b.
StrictReport is_strict(const TransitionRelation& rel, const CellSet& a, const CellSet& b,
                       int sample_budget);

// Certifies that only the empty set and the full space can be attractor
// blocks: holds whenever the relation is a cell permutation and the grid
// neighbor graph is connected (any proper set then has boundary, while
// images preserve cardinality). Returns the reason, or nullopt when not
// certified by this criterion.
std::optional<std::string> block_impossibility_certificate(const TransitionRelation& rel);

struct ConleyRecord {
    CellSet block;
    CellSet attractor;
    CellSet basin_cells;
    std::optional<CellSet> dual;
    StrictReport strict;
    std::string provenance;
};

}  // namespace conleyifs
