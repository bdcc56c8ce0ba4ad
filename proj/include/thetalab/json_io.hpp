#pragma once

#include "thetalab/bases.hpp"

// vendored single-header nlohmann::json
#include "json.hpp"

namespace thetalab {

using Json = nlohmann::ordered_json;

Json vec_to_json(const NVec &v);
Json qvec_to_json(const QVec &v);
NVec vec_from_json(const Json &j);
QVec qvec_from_json(const Json &j);

// {"I_uf": [...], "I_fr": [...], "entries": flat row-major ints, "d": [...]},
// columns ordered unfrozen-then-frozen.  Nested row arrays are accepted too.
Json matrix_to_json(const ExtendedExchangeMatrix &bt);
ExtendedExchangeMatrix matrix_from_json(const Json &j);

// {"order": D, "terms": [{"n": [...], "coeff": "p/q"}, ...]} in graded-lex order.
Json series_to_json(const TruncatedSeries &s);
TruncatedSeries series_from_json(const Json &j);

// {"order": D, "pieces": [{"m": [...], "terms": [...]}, ...]}
Json graded_to_json(const GradedElement &g);

Json diagram_to_json(const ScatteringDiagram &d);
ScatteringDiagram diagram_from_json(const Json &j);

// c z^m sigma^n in display order: coefficient, sigma part, z part.
std::string pretty_monomial(const Rational &c, const MVec &m, const NVec &n);

Json theta_to_json(const ThetaResult &t, const ExtendedExchangeMatrix &bt);
Json broken_line_to_json(const BrokenLine &l);
Json table_to_json(const StructureConstantTable &t);
Json expansion_to_json(const std::vector<ExpansionTerm> &terms);
Json verdict_to_json(const MembershipVerdict &v);
Json fan_to_json(const RationalFan2D &f);
RationalFan2D fan_from_json(const Json &j);

} // namespace thetalab
