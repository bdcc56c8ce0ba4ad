#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetalab/frames.hpp"
#include "thetalab/graded.hpp"

namespace thetalab {

// A wall: a cone in the dual plane orthogonal to a primitive normal n in N+,
// carrying a scattering term f, a power series in zeta^n with constant
// term 1.  ray_dir empty means the full line n-perp; otherwise the wall is
// the closed ray spanned by ray_dir.
struct Wall {
    NVec normal;
    std::optional<MVec> ray_dir; // primitive integer direction
    TruncatedSeries f;

    bool is_line() const { return !ray_dir.has_value(); }
};

// One ray through the origin with the product of all scattering terms whose
// wall contains that ray.  Line walls contribute to both of their rays.
struct RaySlice {
    MVec dir;          // primitive
    NVec normal;       // primitive, in N+
    NVec normal_circ;  // n°
    TruncatedSeries f; // merged scattering term
};

class ScatteringDiagram {
public:
    ScatteringDiagram(ExtendedExchangeMatrix btilde, std::int64_t order);

    const ExtendedExchangeMatrix &btilde() const { return btilde_; }
    std::int64_t order() const { return order_; }
    const std::vector<Wall> &walls() const { return walls_; }

    void add_wall(Wall w);

    // Rank-2 only: the merged per-ray view, sorted counterclockwise from the
    // direction (1, 0).
    std::vector<RaySlice> ray_slices() const;

    bool wall_added_at(std::int64_t degree) const;
    void record_wall_degree(std::int64_t degree);
    // No wall carries a term in the top two degrees of the completion.
    bool completion_stabilized() const;

    // Key for caching broken-line enumerations.
    std::string fingerprint() const;

    bool is_rank2() const { return btilde_.rank() == 2; }

private:
    ExtendedExchangeMatrix btilde_;
    std::int64_t order_;
    std::vector<Wall> walls_;
    std::vector<std::int64_t> degrees_with_new_walls_;
};

// A single crossing of a path through a wall ray; sign +1 means the crossing
// goes against the normal direction (exponent +<m, n°>), -1 with it.
struct Crossing {
    RaySlice wall;
    int sign;
};

// z^m |-> z^m f^{sign * <m, n°>}, extended to graded elements.
GradedElement wall_crossing(const GradedElement &x, const RaySlice &wall, int sign,
                            const ExtendedExchangeMatrix &B);
GradedElement wall_crossing(const GradedElement &x, const Wall &wall, int sign,
                            const ExtendedExchangeMatrix &B);

GradedElement path_ordered_product(const ScatteringDiagram &diagram,
                                   const std::vector<Crossing> &path, const GradedElement &x);

// The crossings of a full counterclockwise loop around the origin starting
// at base_dir (which must not be parallel to any wall ray).
std::vector<Crossing> loop_crossings(const ScatteringDiagram &diagram, const MVec &base_dir);

// Crossings of the straight segment from a to b, in order; throws
// GenericityError when the segment is non-generic.
std::vector<Crossing> straight_path_crossings(const ScatteringDiagram &diagram, const QVec &a,
                                              const QVec &b);

// True when the loop around the origin acts as the identity on z^{f_1} and
// z^{f_2} modulo degree > check_order.
bool loop_is_identity(const ScatteringDiagram &diagram, std::int64_t check_order);

// Consistent completion of the initial walls (e_i-perp, 1 + zeta_i) by
// outgoing rays, order by order up to zeta-degree D.  Rank 2 only.
ScatteringDiagram build_scattering_diagram(const ExtendedExchangeMatrix &btilde, std::int64_t D);

// The diagram for mu_k(btilde) in the primed variables: the wall
// (e_k-perp, 1+zeta_k) becomes (e_k-perp, 1+zeta'_k); every other wall is
// mapped by eta_k and its scattering term rewritten by the side-dependent
// substitution.
ScatteringDiagram mutate_diagram(const ScatteringDiagram &diagram, std::size_t k);

// Same-ray normal form for equivalence comparisons.
bool equivalent_diagrams(const ScatteringDiagram &a, const ScatteringDiagram &b);

struct CoefficientReport {
    bool nondegenerate = false;
    bool signed_at_depth = false;
    std::size_t depth = 0;
    // one entry per reduced sequence: (kseq, nondegenerate?, signs if any)
    struct FrameInfo {
        IndexSeq kseq;
        bool nondegenerate;
        std::optional<SignVector> signs;
    };
    std::vector<FrameInfo> frames;
    std::optional<IndexSeq> first_failure;
};

CoefficientReport coefficient_report(const ExtendedExchangeMatrix &btilde, std::size_t depth);

// Carries a diagram for btilde over to another extension of the same
// exchange matrix: wall terms are kept verbatim in zeta coordinates.
ScatteringDiagram change_coefficients(const ScatteringDiagram &diagram,
                                      const ExtendedExchangeMatrix &btilde_new);

} // namespace thetalab
