#include "thetalab/scattering.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "thetalab/errors.hpp"
#include "thetalab/mutation.hpp"

namespace thetalab {

namespace {

std::int64_t cross2(const MVec &a, const MVec &b) { return a[0] * b[1] - a[1] * b[0]; }
std::int64_t dot2(const MVec &a, const MVec &b) { return a[0] * b[0] + a[1] * b[1]; }

// Counterclockwise angular comparison relative to a base direction.
struct CcwLess {
    MVec base;
    // angle class in [0, 2pi): 0 = base itself, 1 = (0,pi), 2 = pi, 3 = (pi,2pi)
    int cls(const MVec &v) const {
        std::int64_t cr = cross2(base, v);
        if (cr > 0) return 1;
        if (cr < 0) return 3;
        return dot2(base, v) > 0 ? 0 : 2;
    }
    bool operator()(const MVec &a, const MVec &b) const {
        int ca = cls(a), cb = cls(b);
        if (ca != cb) return ca < cb;
        return cross2(a, b) > 0;
    }
};

} // namespace

ScatteringDiagram::ScatteringDiagram(ExtendedExchangeMatrix btilde, std::int64_t order)
    : btilde_(std::move(btilde)), order_(order) {}

void ScatteringDiagram::add_wall(Wall w) {
    if (!is_primitive(w.normal) || !is_nonnegative(w.normal) || is_zero(w.normal))
        throw PreconditionError("wall normal must be primitive and in N+");
    if (w.f.constant_term() != 1)
        throw PreconditionError("scattering term must have constant term 1");
    walls_.push_back(std::move(w));
}

std::vector<RaySlice> ScatteringDiagram::ray_slices() const {
    if (!is_rank2()) throw PreconditionError("ray slices are defined in rank 2 only");
    std::map<MVec, RaySlice> by_dir;
    auto add_ray = [&](MVec dir, const NVec &normal, const TruncatedSeries &f) {
        auto it = by_dir.find(dir);
        if (it == by_dir.end()) {
            by_dir.emplace(dir, RaySlice{dir, normal, btilde_.n_circ(normal), f});
        } else {
            if (it->second.normal != normal)
                throw PreconditionError("two walls with different hyperplanes share a ray");
            it->second.f *= f;
        }
    };
    for (const auto &w : walls_) {
        if (w.is_line()) {
            // direction of n-perp: (n_2 d_1, -n_1 d_2), primitive
            MVec dir = {w.normal[1] * btilde_.d()[0], -w.normal[0] * btilde_.d()[1]};
            dir = primitive_part(dir);
            add_ray(dir, w.normal, w.f);
            add_ray(MVec{-dir[0], -dir[1]}, w.normal, w.f);
        } else {
            add_ray(*w.ray_dir, w.normal, w.f);
        }
    }
    std::vector<RaySlice> out;
    out.reserve(by_dir.size());
    for (auto &[dir, slice] : by_dir) out.push_back(std::move(slice));
    std::sort(out.begin(), out.end(),
              [cmp = CcwLess{MVec{1, 0}}](const RaySlice &a, const RaySlice &b) {
                  return cmp(a.dir, b.dir);
              });
    return out;
}

bool ScatteringDiagram::wall_added_at(std::int64_t degree) const {
    return std::find(degrees_with_new_walls_.begin(), degrees_with_new_walls_.end(), degree) !=
           degrees_with_new_walls_.end();
}

void ScatteringDiagram::record_wall_degree(std::int64_t degree) {
    degrees_with_new_walls_.push_back(degree);
}

bool ScatteringDiagram::completion_stabilized() const {
    return order_ >= 2 && !wall_added_at(order_) && !wall_added_at(order_ - 1);
}

std::string ScatteringDiagram::fingerprint() const {
    std::ostringstream os;
    os << btilde_.to_string() << "|D" << order_;
    for (const auto &w : walls_) {
        os << "|" << vec_to_string(w.normal);
        if (w.ray_dir) os << "@" << vec_to_string(*w.ray_dir);
        os << ":" << w.f.to_string();
    }
    return os.str();
}

GradedElement wall_crossing(const GradedElement &x, const RaySlice &wall, int sign,
                            const ExtendedExchangeMatrix &B) {
    GradedElement out(x.rank(), x.order());
    std::map<std::int64_t, TruncatedSeries> powers;
    for (const auto &[m, piece] : x.pieces()) {
        for (const auto &[n, c] : piece) {
            MVec q = add(m, B.row_times_B(n));
            std::int64_t e = sign * B.pairing_n_circ(q, wall.normal_circ);
            auto it = powers.find(e);
            if (it == powers.end()) it = powers.emplace(e, wall.f.pow(e)).first;
            for (const auto &[fe, fc] : it->second.terms()) out.add_term(m, add(n, fe), c * fc);
        }
    }
    return out;
}

GradedElement wall_crossing(const GradedElement &x, const Wall &wall, int sign,
                            const ExtendedExchangeMatrix &B) {
    RaySlice slice{wall.ray_dir ? *wall.ray_dir : MVec{}, wall.normal, B.n_circ(wall.normal), wall.f};
    return wall_crossing(x, slice, sign, B);
}

GradedElement path_ordered_product(const ScatteringDiagram &diagram,
                                   const std::vector<Crossing> &path, const GradedElement &x) {
    GradedElement out(x);
    for (const auto &c : path) out = wall_crossing(out, c.wall, c.sign, diagram.btilde());
    return out;
}

std::vector<Crossing> loop_crossings(const ScatteringDiagram &diagram, const MVec &base_dir) {
    auto slices = diagram.ray_slices();
    CcwLess cmp{base_dir};
    for (const auto &s : slices)
        if (cmp.cls(s.dir) == 0 || (cmp.cls(s.dir) == 2 && cross2(base_dir, s.dir) == 0))
            throw PreconditionError("loop base direction lies on a wall ray");
    std::sort(slices.begin(), slices.end(),
              [&](const RaySlice &a, const RaySlice &b) { return cmp(a.dir, b.dir); });
    std::vector<Crossing> out;
    out.reserve(slices.size());
    for (const auto &s : slices) {
        // Moving counterclockwise through the ray at direction w, the side
        // just before the crossing has sign -sgn(<rot90(w), n>); crossing
        // against the normal direction means that sign is positive.
        QVec wperp = {Rational(-s.dir[1]), Rational(s.dir[0])};
        Rational before = -diagram.btilde().pairing(wperp, s.normal);
        if (before == 0) throw PreconditionError("degenerate ray normal");
        out.push_back(Crossing{s, before > 0 ? 1 : -1});
    }
    return out;
}

std::vector<Crossing> straight_path_crossings(const ScatteringDiagram &diagram, const QVec &a,
                                              const QVec &b) {
    auto slices = diagram.ray_slices();
    const auto &B = diagram.btilde();
    QVec dir = qsub(b, a);
    struct Hit {
        Rational t;
        std::size_t idx;
        int sign;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const auto &s = slices[i];
        Rational la = B.pairing(a, s.normal), lb = B.pairing(b, s.normal);
        if (la == 0 || lb == 0) throw GenericityError("path endpoint lies on a wall hyperplane");
        if (sgn(la) == sgn(lb)) continue; // no hyperplane crossing
        Rational t = la / (la - lb); // crossing parameter in (0,1)
        QVec p = qadd(a, qscale(t, dir));
        if (qis_zero(p)) throw GenericityError("path passes through the origin");
        // on the ray itself? p = r * dir with r > 0
        Rational r = s.dir[0] != 0 ? p[0] / s.dir[0] : p[1] / s.dir[1];
        if ((s.dir[0] != 0 && p[1] != r * s.dir[1]) || (s.dir[1] != 0 && p[0] != r * s.dir[0]))
            continue; // crosses the hyperplane off this ray
        if (r < 0) continue;
        if (r == 0) throw GenericityError("path passes through the origin");
        // crossing against n when <., n> decreases through the wall
        hits.push_back(Hit{t, i, la > 0 ? 1 : -1});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit &x, const Hit &y) { return x.t < y.t; });
    for (std::size_t i = 0; i + 1 < hits.size(); ++i)
        if (hits[i].t == hits[i + 1].t) throw GenericityError("path meets two walls at one point");
    std::vector<Crossing> out;
    out.reserve(hits.size());
    for (const auto &h : hits) out.push_back(Crossing{slices[h.idx], h.sign});
    return out;
}

bool loop_is_identity(const ScatteringDiagram &diagram, std::int64_t check_order) {
    auto crossings = loop_crossings(diagram, MVec{1, 1});
    for (std::size_t i = 0; i < 2; ++i) {
        MVec f(2, 0);
        f[i] = 1;
        GradedElement zi = GradedElement::z_monomial(f, check_order);
        GradedElement image = path_ordered_product(diagram, crossings, zi);
        if (!(image == zi)) return false;
    }
    return true;
}

ScatteringDiagram build_scattering_diagram(const ExtendedExchangeMatrix &btilde, std::int64_t D) {
    if (btilde.rank() != 2)
        throw PreconditionError("scattering diagram construction is implemented for rank 2 only");
    if (D < 0) throw PreconditionError("order must be nonnegative");
    {
        // rows of btilde must be linearly independent
        bool indep = false;
        for (std::size_t j = 0; j < btilde.total() && !indep; ++j)
            for (std::size_t l = j + 1; l < btilde.total() && !indep; ++l)
                if (btilde.eps(0, j) * btilde.eps(1, l) - btilde.eps(0, l) * btilde.eps(1, j) != 0)
                    indep = true;
        if (!indep) throw PreconditionError("rows of the extended exchange matrix are dependent");
    }

    ScatteringDiagram diagram(btilde, D);
    for (std::size_t i = 0; i < 2; ++i) {
        NVec n = unit_vec(2, i);
        TruncatedSeries f = TruncatedSeries::one(2, D);
        f.set_coeff(n, 1);
        diagram.add_wall(Wall{n, std::nullopt, f});
    }

    const MVec base{1, 1};
    // Wall terms indexed by the outgoing ray they live on, keyed by primitive
    // normal; rebuilt into diagram walls after each degree.
    std::map<NVec, Wall> added;            // primitive normal -> ray wall
    std::vector<std::int64_t> new_degrees; // degrees that acquired wall terms

    auto rebuild = [&]() {
        ScatteringDiagram next(btilde, D);
        for (std::size_t i = 0; i < 2; ++i) {
            NVec n = unit_vec(2, i);
            TruncatedSeries f = TruncatedSeries::one(2, D);
            f.set_coeff(n, 1);
            next.add_wall(Wall{n, std::nullopt, f});
        }
        for (const auto &[n, w] : added) next.add_wall(w);
        for (auto deg : new_degrees) next.record_wall_degree(deg);
        return next;
    };

    for (std::int64_t deg = 2; deg <= D; ++deg) {
        auto crossings = loop_crossings(diagram, base);
        bool new_wall_this_degree = false;
        // Discrepancy of the loop on both basis monomials at this degree.
        for (std::size_t i = 0; i < 2; ++i) {
            MVec fi(2, 0);
            fi[i] = 1;
            GradedElement zi = GradedElement::z_monomial(fi, deg);
            GradedElement image = path_ordered_product(diagram, crossings, zi);
            image -= zi;
            for (const auto &[m, piece] : image.pieces()) {
                if (m != fi) throw VerificationError("loop image left the expected graded piece");
                for (const auto &[n, c] : piece) {
                    std::int64_t nd = total_degree(n);
                    if (nd < deg)
                        throw VerificationError(
                            "loop discrepancy below the current degree; completion is inconsistent");
                    if (nd > deg) continue;
                    // fix with a term on the outgoing ray of prim(n)
                    NVec nprim = primitive_part(n);
                    if (!is_nonnegative(nprim))
                        throw VerificationError("loop discrepancy with a non-positive exponent");
                    MVec nB = btilde.row_times_B(nprim);
                    if (is_zero(nB))
                        throw PreconditionError("cannot place an outgoing wall: nB = 0");
                    MVec ray = primitive_part(MVec{-nB[0], -nB[1]});
                    NVec ncirc = btilde.n_circ(nprim);
                    std::int64_t pair = btilde.pairing_n_circ(fi, ncirc);
                    if (pair == 0) continue; // the other basis monomial pins this term
                    // crossing sign of the outgoing ray within the loop
                    QVec wperp = {Rational(-ray[1]), Rational(ray[0])};
                    Rational before = -btilde.pairing(wperp, nprim);
                    int s = before > 0 ? 1 : -1;
                    Rational coeff = -c / (Rational(s) * Rational(pair));
                    auto it = added.find(nprim);
                    if (it == added.end()) {
                        TruncatedSeries f = TruncatedSeries::one(2, D);
                        f.set_coeff(n, coeff);
                        added.emplace(nprim, Wall{nprim, ray, f});
                        new_wall_this_degree = true;
                    } else {
                        if (it->second.f.coeff(n) != 0)
                            throw VerificationError("conflicting corrections for one wall term");
                        it->second.f.set_coeff(n, coeff);
                        new_wall_this_degree = true;
                    }
                }
            }
            if (new_wall_this_degree) {
                diagram = rebuild();
                crossings = loop_crossings(diagram, base);
            }
        }
        // the degree must now be clean
        auto check = loop_crossings(diagram, base);
        for (std::size_t i = 0; i < 2; ++i) {
            MVec fi(2, 0);
            fi[i] = 1;
            GradedElement zi = GradedElement::z_monomial(fi, deg);
            GradedElement image = path_ordered_product(diagram, check, zi);
            if (!(image == zi))
                throw VerificationError("completion failed to cancel the loop at degree " +
                                        std::to_string(deg));
        }
        if (new_wall_this_degree) {
            new_degrees.push_back(deg);
            diagram.record_wall_degree(deg);
        }
    }
    return diagram;
}

ScatteringDiagram mutate_diagram(const ScatteringDiagram &diagram, std::size_t k) {
    if (!diagram.is_rank2()) throw PreconditionError("diagram mutation is implemented for rank 2 only");
    const auto &bt = diagram.btilde();
    if (k >= bt.rank()) throw PreconditionError("mutation index must be unfrozen");
    auto signs = bt.frozen_row_signs();
    if (!signs)
        throw DegenerateCoefficientsError("diagram mutation requires signed coefficient data");

    ExtendedExchangeMatrix bt_next = bt.mutate(k);
    ScatteringDiagram out(bt_next, diagram.order());

    // The wall (e_k-perp, 1+zeta_k) becomes (e_k-perp, 1+zeta'_k).
    {
        NVec n = unit_vec(2, k);
        TruncatedSeries f = TruncatedSeries::one(2, diagram.order());
        f.set_coeff(n, 1);
        out.add_wall(Wall{n, std::nullopt, f});
    }

    std::map<MVec, Wall> mapped; // by ray dir
    for (const auto &s : diagram.ray_slices()) {
        int side = sgn(s.dir[k]);
        if (side == 0) {
            if (!(s.f.terms().size() == 2 && s.f.coeff(unit_vec(2, k)) == 1))
                throw PreconditionError("the e_k wall carries extra scattering terms");
            continue; // replaced above
        }
        // eta_k on the ray direction
        QVec image = eta_step(bt, k, to_qvec(s.dir));
        MVec dir = primitive_part(to_mvec(image));
        // normals transform by n |-> n + (-2 n_k + sum_i n_i [-side * eps_ik]_+) e_k
        NVec n_new(s.normal);
        std::int64_t extra = -2 * s.normal[k];
        for (std::size_t i = 0; i < 2; ++i) {
            if (i == k) continue;
            extra += s.normal[i] * std::max<std::int64_t>(-side * bt.eps(i, k), 0);
        }
        n_new[k] += extra;
        if (!is_nonnegative(n_new) || is_zero(n_new))
            throw VerificationError("mutated wall normal left N+");
        TruncatedSeries f_new(2, diagram.order());
        for (const auto &[e, c] : s.f.terms()) {
            if (is_zero(e)) {
                f_new.add_term(e, c);
                continue;
            }
            // e = j * normal; map to j * n_new
            std::int64_t j = 0;
            for (std::size_t i = 0; i < 2; ++i)
                if (s.normal[i] != 0) j = e[i] / s.normal[i];
            f_new.add_term(scale(j, n_new), c);
        }
        auto it = mapped.find(dir);
        if (it == mapped.end()) {
            mapped.emplace(dir, Wall{n_new, dir, f_new});
        } else {
            if (it->second.normal != n_new)
                throw VerificationError("two mutated walls share a ray with different normals");
            it->second.f *= f_new;
        }
    }
    // Reassemble opposite rays with equal data into lines; keep rays otherwise.
    std::vector<MVec> done;
    for (auto &[dir, w] : mapped) {
        if (std::find(done.begin(), done.end(), dir) != done.end()) continue;
        MVec opp{-dir[0], -dir[1]};
        auto oit = mapped.find(opp);
        if (oit != mapped.end() && oit->second.normal == w.normal && oit->second.f == w.f) {
            out.add_wall(Wall{w.normal, std::nullopt, w.f});
            done.push_back(opp);
        } else {
            out.add_wall(w);
        }
        done.push_back(dir);
    }
    return out;
}

bool equivalent_diagrams(const ScatteringDiagram &a, const ScatteringDiagram &b) {
    auto sa = a.ray_slices();
    auto sb = b.ray_slices();
    std::int64_t d = std::min(a.order(), b.order());
    auto normalize = [d](std::vector<RaySlice> &v) {
        v.erase(std::remove_if(v.begin(), v.end(),
                               [d](const RaySlice &s) { return s.f.truncated(d).is_one(); }),
                v.end());
    };
    normalize(sa);
    normalize(sb);
    if (sa.size() != sb.size()) return false;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        if (sa[i].dir != sb[i].dir || sa[i].normal != sb[i].normal) return false;
        if (!(sa[i].f.truncated(d) == sb[i].f.truncated(d))) return false;
    }
    return true;
}

CoefficientReport coefficient_report(const ExtendedExchangeMatrix &btilde, std::size_t depth) {
    CoefficientReport report;
    report.depth = depth;
    report.nondegenerate = btilde.nondegenerate_coefficients();
    report.signed_at_depth = true;
    for_each_reduced_sequence(btilde.rank(), 0, depth, [&](const IndexSeq &kseq) {
        auto bt = btilde.mutate_seq(kseq);
        CoefficientReport::FrameInfo info;
        info.kseq = kseq;
        info.nondegenerate = bt.nondegenerate_coefficients();
        info.signs = bt.frozen_row_signs();
        if ((!info.nondegenerate || !info.signs) && !report.first_failure) {
            report.signed_at_depth = false;
            report.first_failure = kseq;
        }
        if (!info.nondegenerate || !info.signs) report.signed_at_depth = false;
        report.frames.push_back(std::move(info));
        return true;
    });
    return report;
}

ScatteringDiagram change_coefficients(const ScatteringDiagram &diagram,
                                      const ExtendedExchangeMatrix &btilde_new) {
    if (!diagram.btilde().same_square(btilde_new) || diagram.btilde().d() != btilde_new.d())
        throw PreconditionError("coefficient change requires the same exchange matrix");
    if (!diagram.btilde().nondegenerate_coefficients())
        throw DegenerateCoefficientsError("source coefficients are degenerate");
    ScatteringDiagram out(btilde_new, diagram.order());
    for (const auto &w : diagram.walls()) out.add_wall(w);
    return out;
}

} // namespace thetalab
