#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "thetalab/scattering.hpp"

namespace thetalab {

// One domain of linearity with its Laurent-monomial label c z^m sigma^n.
struct DomainLabel {
    Rational c;
    MVec m;
    NVec n;
    bool operator==(const DomainLabel &o) const = default;
};

// A bend: the point, the wall normal (in N+), the chosen term
// coeff * zeta^{nu * normal} of f^lambda.
struct BendRecord {
    QVec point;
    NVec wall_normal;
    std::int64_t nu;
    std::int64_t lambda;
    Rational term_coeff;
};

struct BrokenLine {
    MVec target_m; // the asymptotic direction vector m
    QVec endpoint;
    std::vector<DomainLabel> labels; // labels[0] is the unbounded domain
    std::vector<BendRecord> bends;   // bends[i] joins labels[i] and labels[i+1]

    const DomainLabel &final_label() const { return labels.back(); }
    // total zeta-degree of the accumulated bends
    std::int64_t bend_degree() const { return total_degree(labels.back().n); }
};

enum class Finiteness { CertifiedFiniteType, FiniteAtOrder, Truncated };
std::string finiteness_name(Finiteness f);

struct ThetaResult {
    PointedElement value; // z^m * F
    QVec Q;
    std::size_t broken_line_count = 0;
    Finiteness finiteness = Finiteness::Truncated;
    std::vector<BrokenLine> lines;
};

// All broken lines for m with endpoint Q and total bend degree <= D.
// Throws GenericityError when Q is on a wall or some solved bend geometry is
// degenerate for this Q.
std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram &diagram, const MVec &m,
                                               const QVec &Q, std::int64_t D);

// Re-checks the defining conditions of a broken line against a diagram,
// independently of the enumerator.
bool validate_broken_line(const ScatteringDiagram &diagram, const BrokenLine &line,
                          std::string *why = nullptr);

// Memoizing front end for enumeration and theta evaluation over one diagram.
class ThetaEngine {
public:
    explicit ThetaEngine(const ScatteringDiagram &diagram);

    const ScatteringDiagram &diagram() const { return diagram_; }

    const std::vector<BrokenLine> &enumerate(const MVec &m, const QVec &Q, std::int64_t D);

    // Theta at an explicit base point (no finiteness classification).
    ThetaResult theta(const MVec &m, const QVec &Q, std::int64_t D, bool classify = false);

    // Theta with the base point chosen deep in the positive chamber by a
    // deterministic perturbation schedule.
    ThetaResult theta_positive(const MVec &m, std::int64_t D, bool classify = true);

    // The base point the positive-chamber schedule settles on for order D.
    QVec positive_base_point(const MVec &m, std::int64_t D);

    Finiteness classify_finiteness(const MVec &m, std::int64_t D);

private:
    const ScatteringDiagram &diagram_;
    std::string fingerprint_; // part of every cache key
    std::map<std::string, std::vector<BrokenLine>> cache_;
    std::unique_ptr<ScatteringDiagram> extended_; // order D+1 rebuild for classification
};

// eta_k applied to a broken line: the curve maps pointwise, the labels by the
// side-dependent substitution followed by the sigma'_k power fixed by the
// asymptotic direction.  Domains are split at e_k-perp as needed.
BrokenLine mutate_broken_line(const BrokenLine &line, const SeedFrame &frame, std::size_t k);

// Theorem-of-two-mutations route: theta for eta_k(m) on the mutated
// coefficients, computed by substitution and monomial correction from theta
// for m.  When `verify` is set the result is compared against an independent
// enumeration on the mutated diagram (VerificationError on mismatch).
ThetaResult mutate_theta(ThetaEngine &engine, const MVec &m, std::size_t k, std::int64_t D,
                         bool verify = true);

// Applies the path-ordered product moving the base point of a theta function
// along a straight generic path.
ThetaResult transport_endpoint(const ScatteringDiagram &diagram, const ThetaResult &theta_at_q,
                               const QVec &new_Q);

Finiteness theta_finiteness(const ScatteringDiagram &diagram, const MVec &m, std::int64_t D);

} // namespace thetalab
