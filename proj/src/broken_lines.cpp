#include "thetalab/broken_lines.hpp"

#include <algorithm>
#include <sstream>

#include "thetalab/errors.hpp"
#include "thetalab/mutation.hpp"

namespace thetalab {

namespace {

// Q must avoid every wall set (ray or line).
void require_generic_base(const std::vector<RaySlice> &slices, const QVec &Q) {
    if (qis_zero(Q)) throw GenericityError("base point at the origin");
    for (const auto &s : slices) {
        Rational r;
        if (s.dir[0] != 0) {
            r = Q[0] / s.dir[0];
            if (Q[1] != r * s.dir[1]) continue;
        } else {
            if (Q[0] != 0) continue;
            r = Q[1] / s.dir[1];
        }
        if (r >= 0) throw GenericityError("base point lies on a wall");
    }
}

bool segment_hits_origin(const QVec &a, const QVec &b) {
    // 0 in the open segment (a, b)
    QVec d = qsub(b, a);
    if (a[0] * d[1] - a[1] * d[0] != 0) return false;
    Rational t = d[0] != 0 ? -a[0] / d[0] : (d[1] != 0 ? -a[1] / d[1] : Rational(-1));
    return t > 0 && t < 1;
}

bool forward_ray_hits_origin(const QVec &p, const MVec &m) {
    // 0 on { p + u m : u > 0 }
    Rational c = p[0] * Rational(m[1]) - p[1] * Rational(m[0]);
    if (c != 0) return false;
    Rational u = m[0] != 0 ? -p[0] / Rational(m[0]) : (m[1] != 0 ? -p[1] / Rational(m[1]) : Rational(-1));
    return u > 0;
}

struct SearchContext {
    const ScatteringDiagram &diagram;
    const std::vector<RaySlice> &slices;
    std::int64_t D;
    MVec m;
    QVec Q;
    std::vector<BrokenLine> out;
    // power cache per (slice index, lambda)
    std::map<std::pair<std::size_t, std::int64_t>, TruncatedSeries> powers;

    const TruncatedSeries &wall_power(std::size_t idx, std::int64_t lambda) {
        auto key = std::make_pair(idx, lambda);
        auto it = powers.find(key);
        if (it == powers.end()) it = powers.emplace(key, slices[idx].f.pow(lambda)).first;
        return it->second;
    }
};

struct BackBend {
    std::size_t slice;
    std::int64_t nu;
    std::int64_t lambda;
    Rational coeff;
    QVec point;
};

// Backward search from the endpoint: chooses the latest bend first.  m_cur is
// the direction label of the segment arriving at `anchor`; `rem` is the bend
// budget still to consume on the way back to the unbounded domain.
void search(SearchContext &ctx, const QVec &anchor, const MVec &m_cur, const NVec &rem,
            std::vector<BackBend> &stack) {
    if (is_zero(rem)) {
        // unbounded domain: the ray from the earliest point in direction +m
        if (forward_ray_hits_origin(anchor, ctx.m))
            throw GenericityError("unbounded domain passes through the origin");
        BrokenLine line;
        line.target_m = ctx.m;
        line.endpoint = ctx.Q;
        line.labels.push_back(DomainLabel{1, ctx.m, zero_vec(2)});
        Rational c = 1;
        MVec m_lab = ctx.m;
        NVec n_lab = zero_vec(2);
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const auto &s = ctx.slices[it->slice];
            c *= it->coeff;
            m_lab = add(m_lab, scale(it->nu, ctx.diagram.btilde().row_times_B(s.normal)));
            n_lab = add(n_lab, scale(it->nu, s.normal));
            line.labels.push_back(DomainLabel{c, m_lab, n_lab});
            line.bends.push_back(BendRecord{it->point, s.normal, it->nu, it->lambda, it->coeff});
        }
        ctx.out.push_back(std::move(line));
        return;
    }
    for (std::size_t idx = 0; idx < ctx.slices.size(); ++idx) {
        const auto &s = ctx.slices[idx];
        std::int64_t nu_max = -1;
        for (std::size_t i = 0; i < 2; ++i) {
            if (s.normal[i] == 0) continue;
            std::int64_t q = rem[i] / s.normal[i];
            nu_max = nu_max < 0 ? q : std::min(nu_max, q);
        }
        for (std::int64_t nu = 1; nu <= nu_max; ++nu) {
            NVec dn = scale(nu, s.normal);
            if (!leq_componentwise(dn, rem)) break;
            MVec m_prev = sub(m_cur, scale(nu, ctx.diagram.btilde().row_times_B(s.normal)));
            std::int64_t pair = ctx.diagram.btilde().pairing_n_circ(m_prev, s.normal_circ);
            if (pair == 0) continue;
            std::int64_t lambda = pair < 0 ? -pair : pair;
            Rational coeff = ctx.wall_power(idx, lambda).coeff(dn);
            if (coeff == 0) continue;
            // bend point: p = anchor + tau * m_cur with p = r * dir, tau > 0, r > 0
            Rational det = Rational(s.dir[0]) * Rational(-m_cur[1]) -
                           Rational(-m_cur[0]) * Rational(s.dir[1]);
            if (det == 0) {
                if (ctx.diagram.btilde().pairing(anchor, s.normal) == 0)
                    throw GenericityError("segment rides a wall hyperplane");
                continue;
            }
            Rational r = (anchor[0] * Rational(-m_cur[1]) - Rational(-m_cur[0]) * anchor[1]) / det;
            Rational tau = (Rational(s.dir[0]) * anchor[1] - Rational(s.dir[1]) * anchor[0]) / det;
            if (r < 0 || tau <= 0) continue; // misses the ray: not a line
            if (r == 0) throw GenericityError("bend point at the origin");
            QVec p = {r * s.dir[0], r * s.dir[1]};
            if (segment_hits_origin(p, anchor))
                throw GenericityError("segment passes through the origin");
            stack.push_back(BackBend{idx, nu, lambda, coeff, p});
            search(ctx, p, m_prev, sub(rem, dn), stack);
            stack.pop_back();
        }
    }
}

std::vector<NVec> all_budgets(std::int64_t D) {
    std::vector<NVec> out;
    for (std::int64_t a = 0; a <= D; ++a)
        for (std::int64_t b = 0; a + b <= D; ++b) out.push_back(NVec{a, b});
    return out;
}

} // namespace

std::vector<BrokenLine> enumerate_broken_lines(const ScatteringDiagram &diagram, const MVec &m,
                                               const QVec &Q, std::int64_t D) {
    if (!diagram.is_rank2()) throw PreconditionError("broken lines are implemented in rank 2 only");
    if (m.size() != 2 || Q.size() != 2) throw PreconditionError("rank-2 vectors expected");
    if (is_zero(m)) throw PreconditionError("broken lines need m != 0; theta_0 = 1 by definition");
    auto slices = diagram.ray_slices();
    require_generic_base(slices, Q);

    SearchContext ctx{diagram, slices, D, m, Q, {}, {}};
    for (const auto &t : all_budgets(D)) {
        MVec m_final = add(m, diagram.btilde().row_times_B(t));
        std::vector<BackBend> stack;
        search(ctx, Q, m_final, t, stack);
    }
    // canonical order: by forward bend descriptor
    auto descriptor = [](const BrokenLine &l) {
        std::vector<std::int64_t> d;
        d.push_back(static_cast<std::int64_t>(l.bends.size()));
        for (const auto &b : l.bends) {
            d.push_back(b.wall_normal[0]);
            d.push_back(b.wall_normal[1]);
            d.push_back(b.nu);
        }
        return d;
    };
    std::sort(ctx.out.begin(), ctx.out.end(),
              [&](const BrokenLine &a, const BrokenLine &b) { return descriptor(a) < descriptor(b); });
    return ctx.out;
}

bool validate_broken_line(const ScatteringDiagram &diagram, const BrokenLine &line, std::string *why) {
    auto fail = [&](const std::string &msg) {
        if (why) *why = msg;
        return false;
    };
    const auto &B = diagram.btilde();
    auto slices = diagram.ray_slices();
    if (line.labels.size() != line.bends.size() + 1) return fail("label/bend count mismatch");
    if (line.labels[0].c != 1 || line.labels[0].m != line.target_m || !is_zero(line.labels[0].n))
        return fail("unbounded domain label must be z^m");
    // geometry: segment i runs from bends[i-1].point to bends[i].point with
    // velocity -labels[i].m; the final segment ends at the endpoint.
    for (std::size_t i = 0; i + 1 < line.bends.size(); ++i) {
        QVec d = qsub(line.bends[i + 1].point, line.bends[i].point);
        const MVec &mi = line.labels[i + 1].m;
        if (d[0] * Rational(-mi[1]) - d[1] * Rational(-mi[0]) != 0)
            return fail("segment direction differs from -m_L");
        Rational t = mi[0] != 0 ? d[0] / Rational(-mi[0]) : d[1] / Rational(-mi[1]);
        if (t <= 0) return fail("segment runs backward");
    }
    if (!line.bends.empty()) {
        QVec d = qsub(line.endpoint, line.bends.back().point);
        const MVec &mi = line.labels.back().m;
        if (d[0] * Rational(-mi[1]) - d[1] * Rational(-mi[0]) != 0)
            return fail("final segment direction differs from -m_L");
        Rational t = mi[0] != 0 ? d[0] / Rational(-mi[0]) : d[1] / Rational(-mi[1]);
        if (t <= 0) return fail("final segment runs backward");
        if (forward_ray_hits_origin(line.bends.front().point, line.target_m))
            return fail("unbounded domain hits the origin");
        for (std::size_t i = 0; i + 1 < line.bends.size(); ++i)
            if (segment_hits_origin(line.bends[i].point, line.bends[i + 1].point))
                return fail("segment hits the origin");
        if (segment_hits_origin(line.bends.back().point, line.endpoint))
            return fail("final segment hits the origin");
    }
    for (std::size_t i = 0; i < line.bends.size(); ++i) {
        const auto &bend = line.bends[i];
        const auto &before = line.labels[i];
        const auto &after = line.labels[i + 1];
        if (qis_zero(bend.point)) return fail("bend at the origin");
        // exactly one wall ray contains the bend point
        const RaySlice *hit = nullptr;
        for (const auto &s : slices) {
            Rational r;
            if (s.dir[0] != 0) {
                r = bend.point[0] / s.dir[0];
                if (bend.point[1] != r * s.dir[1]) continue;
            } else {
                if (bend.point[0] != 0) continue;
                r = bend.point[1] / s.dir[1];
            }
            if (r <= 0) continue;
            if (hit) return fail("bend point on two wall rays");
            hit = &s;
        }
        if (!hit) return fail("bend point is on no wall");
        if (hit->normal != bend.wall_normal) return fail("bend wall normal mismatch");
        std::int64_t pair = B.pairing_n_circ(before.m, hit->normal_circ);
        if (pair == 0) return fail("bend with <m_L, n> = 0");
        std::int64_t lambda = pair < 0 ? -pair : pair;
        if (lambda != bend.lambda) return fail("bend exponent mismatch");
        NVec dn = sub(after.n, before.n);
        if (dn != scale(bend.nu, hit->normal) || bend.nu < 1) return fail("bend exponent step mismatch");
        if (after.m != add(before.m, scale(bend.nu, B.row_times_B(hit->normal))))
            return fail("bend direction step mismatch");
        Rational coeff = hit->f.pow(lambda).coeff(dn);
        if (coeff == 0 || after.c != before.c * coeff) return fail("bend coefficient is not a term of f^lambda");
        if (coeff != bend.term_coeff) return fail("bend term coefficient mismatch");
    }
    return true;
}

std::string finiteness_name(Finiteness f) {
    switch (f) {
    case Finiteness::CertifiedFiniteType: return "certified-finite-type";
    case Finiteness::FiniteAtOrder: return "finite-at-order";
    case Finiteness::Truncated: return "truncated";
    }
    return "truncated";
}

ThetaEngine::ThetaEngine(const ScatteringDiagram &diagram)
    : diagram_(diagram), fingerprint_(diagram.fingerprint()) {}

const std::vector<BrokenLine> &ThetaEngine::enumerate(const MVec &m, const QVec &Q, std::int64_t D) {
    std::ostringstream key;
    key << fingerprint_ << "|" << vec_to_string(m) << "|" << vec_to_string(Q) << "|" << D;
    auto it = cache_.find(key.str());
    if (it == cache_.end())
        it = cache_.emplace(key.str(), enumerate_broken_lines(diagram_, m, Q, D)).first;
    return it->second;
}

ThetaResult ThetaEngine::theta(const MVec &m, const QVec &Q, std::int64_t D, bool classify) {
    ThetaResult res;
    res.Q = Q;
    if (is_zero(m)) {
        res.value = PointedElement{m, zero_vec(m.size()), TruncatedSeries::one(m.size(), D)};
        res.finiteness = Finiteness::CertifiedFiniteType;
        return res;
    }
    const auto &lines = enumerate(m, Q, D);
    TruncatedSeries F(2, D);
    for (const auto &l : lines) F.add_term(l.final_label().n, l.final_label().c);
    res.value = PointedElement{m, zero_vec(2), F};
    res.broken_line_count = lines.size();
    res.lines = lines;
    res.finiteness = classify ? classify_finiteness(m, D) : Finiteness::Truncated;
    return res;
}

QVec ThetaEngine::positive_base_point(const MVec &m, std::int64_t D) {
    // fixed interior point, halving offsets along a fixed direction on failure
    QVec q0{Rational(13, 4), Rational(9, 5)};
    QVec u{Rational(1), Rational(1, 3)};
    for (int attempt = 0; attempt < 60; ++attempt) {
        QVec Q = attempt == 0 ? q0 : qadd(q0, qscale(Rational(1, BigInt(1) << attempt), u));
        try {
            if (!is_zero(m)) enumerate(m, Q, D);
            return Q;
        } catch (const GenericityError &) {
            continue;
        }
    }
    throw GenericityError("no generic base point found in the positive chamber");
}

ThetaResult ThetaEngine::theta_positive(const MVec &m, std::int64_t D, bool classify) {
    return theta(m, positive_base_point(m, D), D, classify);
}

Finiteness ThetaEngine::classify_finiteness(const MVec &m, std::int64_t D) {
    if (!extended_ || extended_->order() != D + 1)
        extended_ = std::make_unique<ScatteringDiagram>(
            build_scattering_diagram(diagram_.btilde(), D + 1));
    ThetaEngine ext(*extended_);
    QVec Q = ext.positive_base_point(m, D + 1);
    const auto &lines_d = ext.enumerate(m, Q, D);
    const auto &lines_d1 = ext.enumerate(m, Q, D + 1);
    std::int64_t max_bend = 0;
    for (const auto &l : lines_d) max_bend = std::max(max_bend, l.bend_degree());
    bool closed = lines_d1.size() == lines_d.size() && max_bend < D;
    if (!closed) return Finiteness::Truncated;
    if (extended_->completion_stabilized()) return Finiteness::CertifiedFiniteType;
    return Finiteness::FiniteAtOrder;
}

Finiteness theta_finiteness(const ScatteringDiagram &diagram, const MVec &m, std::int64_t D) {
    if (is_zero(m)) return Finiteness::CertifiedFiniteType;
    ThetaEngine engine(diagram);
    return engine.classify_finiteness(m, D);
}

namespace {

// label rewrite for one domain lying weakly on side `side` of e_k-perp
DomainLabel rewrite_label(const DomainLabel &lab, const SeedFrame &frame, std::size_t k, int side,
                          std::int64_t post_exponent) {
    const auto &bt = frame.Btilde;
    const std::size_t r = bt.rank();
    const int sk = frame.signs[k];
    const std::int64_t a = lab.m[k];
    MVec m_new(lab.m);
    m_new[k] = -a;
    for (std::size_t j = 0; j < r; ++j) {
        if (j == k) continue;
        std::int64_t br = side < 0 ? std::max<std::int64_t>(-bt.eps(k, j), 0)
                                   : std::max<std::int64_t>(bt.eps(k, j), 0);
        m_new[j] += a * br;
    }
    NVec n_new(lab.n);
    std::int64_t nk = -lab.n[k];
    for (std::size_t i = 0; i < r; ++i) {
        if (i == k) continue;
        nk += lab.n[i] * std::max<std::int64_t>(sk * bt.eps(i, k), 0);
    }
    nk += side < 0 ? a * std::max(-sk, 0) : -a * std::max(sk, 0);
    nk += post_exponent;
    n_new[k] = nk;
    return DomainLabel{lab.c, m_new, n_new};
}

struct Piece {
    // bounded: [from, to]; first piece is unbounded with `to` its finite end
    bool unbounded;
    QVec from, to; // for unbounded, only `to` is meaningful
    DomainLabel label;
    int side; // sign of x_k on the interior
};

} // namespace

BrokenLine mutate_broken_line(const BrokenLine &line, const SeedFrame &frame, std::size_t k) {
    const auto &bt = frame.Btilde;
    auto eta = [&](const QVec &v) { return eta_step(bt, k, v); };

    // 1. cut the curve into labeled pieces split at e_k-perp
    std::vector<Piece> pieces;
    auto side_of = [&](const QVec &a, const QVec &b) {
        int s = sgn(a[k]);
        if (s == 0) s = sgn(b[k]);
        return s;
    };
    // unbounded piece(s): ray from p1 (or endpoint when straight) in direction +m
    QVec first_pt = line.bends.empty() ? line.endpoint : line.bends.front().point;
    {
        const MVec &m = line.target_m;
        Rational mk(m[k]);
        int far_side = m[k] != 0 ? sgn(m[k]) : sgn(first_pt[k]);
        if (far_side == 0) throw GenericityError("curve rides the mutation hyperplane");
        // does the ray cross x_k = 0 at u > 0?
        if (m[k] != 0) {
            Rational u = -first_pt[k] / mk;
            if (u > 0) {
                QVec cut = qadd(first_pt, qscale(u, to_qvec(m)));
                pieces.push_back(Piece{true, {}, cut, line.labels[0], far_side});
                pieces.push_back(Piece{false, cut, first_pt, line.labels[0], -far_side});
            } else {
                pieces.push_back(Piece{true, {}, first_pt, line.labels[0], far_side});
            }
        } else {
            pieces.push_back(Piece{true, {}, first_pt, line.labels[0], far_side});
        }
    }
    // bounded pieces
    for (std::size_t i = 0; i < line.bends.size(); ++i) {
        QVec a = line.bends[i].point;
        QVec b = i + 1 < line.bends.size() ? line.bends[i + 1].point : line.endpoint;
        const DomainLabel &lab = line.labels[i + 1];
        if (a[k] == 0 && b[k] == 0) throw GenericityError("segment rides the mutation hyperplane");
        if (sgn(a[k]) * sgn(b[k]) < 0) {
            Rational t = a[k] / (a[k] - b[k]);
            QVec cut = qadd(a, qscale(t, qsub(b, a)));
            pieces.push_back(Piece{false, a, cut, lab, sgn(a[k])});
            pieces.push_back(Piece{false, cut, b, lab, sgn(b[k])});
        } else {
            pieces.push_back(Piece{false, a, b, lab, side_of(a, b)});
        }
    }

    // 2. map geometry and labels
    const std::int64_t post = std::max<std::int64_t>(frame.signs[k] * line.target_m[k], 0);
    MVec m_target = to_mvec(eta(to_qvec(line.target_m)));
    std::vector<Piece> mapped;
    mapped.reserve(pieces.size());
    for (const auto &p : pieces) {
        Piece q(p);
        if (!q.unbounded) q.from = eta(q.from);
        q.to = eta(q.to);
        q.label = rewrite_label(p.label, frame, k, p.side, post);
        mapped.push_back(std::move(q));
    }

    // 3. merge equal-label neighbours, rebuild bends from label steps
    BrokenLine out;
    out.target_m = m_target;
    out.endpoint = eta(line.endpoint);
    out.labels.push_back(mapped[0].label);
    QVec junction = mapped[0].to;
    for (std::size_t i = 1; i < mapped.size(); ++i) {
        if (mapped[i].label == out.labels.back()) {
            junction = mapped[i].to;
            continue;
        }
        const DomainLabel &before = out.labels.back();
        const DomainLabel &after = mapped[i].label;
        NVec dn = sub(after.n, before.n);
        NVec normal = primitive_part(dn);
        std::int64_t nu = 0;
        for (std::size_t c = 0; c < normal.size(); ++c)
            if (normal[c] != 0) nu = dn[c] / normal[c];
        ExtendedExchangeMatrix bt_next = bt.mutate(k);
        std::int64_t pair = bt_next.pairing_n_circ(before.m, bt_next.n_circ(normal));
        std::int64_t lambda = pair < 0 ? -pair : pair;
        out.bends.push_back(BendRecord{junction, normal, nu, lambda, after.c / before.c});
        out.labels.push_back(after);
        junction = mapped[i].to;
    }
    return out;
}

ThetaResult mutate_theta(ThetaEngine &engine, const MVec &m, std::size_t k, std::int64_t D,
                         bool verify) {
    const auto &diagram = engine.diagram();
    SeedFrame frame = SeedFrame::at(diagram.btilde(), {});

    // The rewrite inverts zeta_k, so it is exact only on a complete
    // polynomial: escalate the working order until the enumeration closes.
    std::int64_t big = D;
    TruncatedSeries F_complete;
    bool closed = is_zero(m);
    if (closed) F_complete = TruncatedSeries::one(m.size(), D);
    for (int attempt = 0; attempt < 5 && !closed; ++attempt) {
        ScatteringDiagram wide = build_scattering_diagram(diagram.btilde(), big + 1);
        ThetaEngine probe(wide);
        QVec Q = probe.positive_base_point(m, big + 1);
        const auto &at_big = probe.enumerate(m, Q, big);
        const auto &beyond = probe.enumerate(m, Q, big + 1);
        std::int64_t max_bend = 0;
        for (const auto &l : at_big) max_bend = std::max(max_bend, l.bend_degree());
        if (beyond.size() == at_big.size() && max_bend < big) {
            TruncatedSeries F(m.size(), big);
            for (const auto &l : at_big) F.add_term(l.final_label().n, l.final_label().c);
            F_complete = F;
            closed = true;
        } else {
            big *= 2;
        }
    }
    if (!closed)
        throw PreconditionError(
            "theta is not a polynomial at any probed order; the mutation rewrite needs a "
            "complete series");

    GradedElement g = GradedElement::pointed(m, F_complete);
    GradedElement sub = substitute_mutation(g, frame, k);
    SeedFrame next = frame.advanced(k);
    std::int64_t e = std::max<std::int64_t>(frame.signs[k] * m[k], 0);
    if (e != 0) {
        NVec nk = zero_vec(m.size());
        nk[k] = e;
        sub = sub * GradedElement::sigma_term(next.Btilde, zero_vec(m.size()), nk, 1,
                                              F_complete.order());
    }

    MVec m_prime = mutation_map(diagram.btilde(), IndexSeq{k}, m);
    auto gvec = sub.g_vector();
    if (!gvec || *gvec != m_prime)
        throw VerificationError("mutated theta is not concentrated in the expected graded piece");
    auto blk = sub.block(m_prime);
    if (!is_nonnegative(blk.shift))
        throw VerificationError("mutated theta has negative zeta exponents");
    TruncatedSeries F = blk.series.shifted(blk.shift).truncated(D);

    ThetaResult res;
    res.value = PointedElement{m_prime, zero_vec(m.size()), F};
    res.finiteness = Finiteness::FiniteAtOrder;

    if (verify) {
        ScatteringDiagram mutated = mutate_diagram(diagram, k);
        ThetaEngine engine2(mutated);
        ThetaResult independent = engine2.theta_positive(m_prime, D, false);
        if (!(independent.value.F == F))
            throw VerificationError("substitution route and mutated-diagram route disagree");
        res.Q = independent.Q;
        res.broken_line_count = independent.broken_line_count;
        res.lines = independent.lines;
    }
    return res;
}

ThetaResult transport_endpoint(const ScatteringDiagram &diagram, const ThetaResult &theta_at_q,
                               const QVec &new_Q) {
    auto crossings = straight_path_crossings(diagram, theta_at_q.Q, new_Q);
    GradedElement g = theta_at_q.value.to_graded(diagram.btilde());
    GradedElement moved = path_ordered_product(diagram, crossings, g);
    auto gvec = moved.g_vector();
    if (!gvec) throw VerificationError("transported theta left its graded piece");
    auto blk = moved.block(*gvec);
    if (!is_nonnegative(blk.shift))
        throw VerificationError("transported theta has negative zeta exponents");
    ThetaResult res;
    res.value = PointedElement{*gvec, zero_vec(gvec->size()), blk.series.shifted(blk.shift)};
    res.Q = new_Q;
    res.finiteness = theta_at_q.finiteness;
    return res;
}

} // namespace thetalab
