#include "thetalab/json_io.hpp"

#include <sstream>

#include "thetalab/errors.hpp"

namespace thetalab {

Json vec_to_json(const NVec &v) {
    Json j = Json::array();
    for (auto x : v) j.push_back(x);
    return j;
}

Json qvec_to_json(const QVec &v) {
    Json j = Json::array();
    for (const auto &x : v) j.push_back(rational_to_string(x));
    return j;
}

NVec vec_from_json(const Json &j) {
    if (!j.is_array()) throw PreconditionError("expected an integer array");
    NVec v;
    for (const auto &x : j) {
        if (x.is_number_integer())
            v.push_back(x.get<std::int64_t>());
        else if (x.is_string())
            v.push_back(to_int64(rational_from_string(x.get<std::string>())));
        else
            throw PreconditionError("expected an integer array");
    }
    return v;
}

QVec qvec_from_json(const Json &j) {
    if (!j.is_array()) throw PreconditionError("expected a rational array");
    QVec v;
    for (const auto &x : j) {
        if (x.is_number_integer())
            v.emplace_back(x.get<std::int64_t>());
        else if (x.is_string())
            v.push_back(rational_from_string(x.get<std::string>()));
        else
            throw PreconditionError("expected a rational array");
    }
    return v;
}

Json matrix_to_json(const ExtendedExchangeMatrix &bt) {
    Json j;
    Json uf = Json::array(), fr = Json::array();
    for (int l : bt.uf_labels()) uf.push_back(l);
    for (int l : bt.fr_labels()) fr.push_back(l);
    j["I_uf"] = uf;
    j["I_fr"] = fr;
    Json entries = Json::array();
    for (std::size_t i = 0; i < bt.rank(); ++i)
        for (std::size_t k = 0; k < bt.total(); ++k) entries.push_back(bt.eps(i, k));
    j["entries"] = entries;
    j["d"] = vec_to_json(bt.d());
    return j;
}

ExtendedExchangeMatrix matrix_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("entries"))
        throw PreconditionError("matrix JSON needs an \"entries\" field");
    std::vector<int> uf, fr;
    if (j.contains("I_uf"))
        for (const auto &x : j.at("I_uf")) uf.push_back(x.get<int>());
    if (j.contains("I_fr"))
        for (const auto &x : j.at("I_fr")) fr.push_back(x.get<int>());
    const Json &e = j.at("entries");
    std::vector<std::vector<std::int64_t>> rows;
    if (!e.empty() && e.front().is_array()) {
        for (const auto &row : e) {
            std::vector<std::int64_t> r;
            for (const auto &x : row) r.push_back(x.get<std::int64_t>());
            rows.push_back(std::move(r));
        }
    } else {
        if (uf.empty()) throw PreconditionError("flat matrix entries need an I_uf list");
        std::size_t r = uf.size(), n = uf.size() + fr.size();
        if (e.size() != r * n) throw PreconditionError("matrix entry count mismatch");
        rows.assign(r, std::vector<std::int64_t>(n));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < n; ++k) rows[i][k] = e[i * n + k].get<std::int64_t>();
    }
    if (uf.empty()) {
        uf.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) uf[i] = static_cast<int>(i) + 1;
        std::size_t cols = rows.empty() ? 0 : rows[0].size();
        for (std::size_t i = rows.size(); i < cols; ++i) fr.push_back(static_cast<int>(i) + 1);
    }
    std::optional<std::vector<std::int64_t>> d;
    if (j.contains("d")) {
        d.emplace();
        for (const auto &x : j.at("d")) d->push_back(x.get<std::int64_t>());
    }
    return ExtendedExchangeMatrix(uf, fr, rows, d);
}

Json series_to_json(const TruncatedSeries &s) {
    Json j;
    j["order"] = s.order();
    Json terms = Json::array();
    for (const auto &[n, c] : s.terms()) {
        Json t;
        t["n"] = vec_to_json(n);
        t["coeff"] = rational_to_string(c);
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

TruncatedSeries series_from_json(const Json &j) {
    std::int64_t order = j.at("order").get<std::int64_t>();
    std::size_t rank = 0;
    if (!j.at("terms").empty()) rank = j.at("terms").front().at("n").size();
    TruncatedSeries s(rank, order);
    for (const auto &t : j.at("terms"))
        s.add_term(vec_from_json(t.at("n")), rational_from_string(t.at("coeff").get<std::string>()));
    return s;
}

Json graded_to_json(const GradedElement &g) {
    Json j;
    j["order"] = g.order();
    Json pieces = Json::array();
    for (const auto &[m, piece] : g.pieces()) {
        Json p;
        p["m"] = vec_to_json(m);
        Json terms = Json::array();
        for (const auto &[n, c] : piece) {
            Json t;
            t["n"] = vec_to_json(n);
            t["coeff"] = rational_to_string(c);
            terms.push_back(t);
        }
        p["terms"] = terms;
        pieces.push_back(p);
    }
    j["pieces"] = pieces;
    return j;
}

Json diagram_to_json(const ScatteringDiagram &d) {
    Json j;
    j["B"] = matrix_to_json(d.btilde());
    j["order"] = d.order();
    Json walls = Json::array();
    for (const auto &w : d.walls()) {
        Json wj;
        wj["n"] = vec_to_json(w.normal);
        wj["ray_dir"] = w.ray_dir ? vec_to_json(*w.ray_dir) : Json(nullptr);
        wj["f"] = series_to_json(w.f);
        walls.push_back(wj);
    }
    j["walls"] = walls;
    return j;
}

ScatteringDiagram diagram_from_json(const Json &j) {
    ScatteringDiagram d(matrix_from_json(j.at("B")), j.at("order").get<std::int64_t>());
    for (const auto &wj : j.at("walls")) {
        Wall w{vec_from_json(wj.at("n")),
               wj.at("ray_dir").is_null() ? std::nullopt
                                          : std::optional<MVec>(vec_from_json(wj.at("ray_dir"))),
               series_from_json(wj.at("f"))};
        d.add_wall(std::move(w));
    }
    return d;
}

std::string pretty_monomial(const Rational &c, const MVec &m, const NVec &n) {
    std::ostringstream os;
    bool printed = false;
    if (c != 1) {
        os << rational_to_string(c);
        printed = true;
    }
    auto emit = [&](const char *sym, const NVec &v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            if (printed) os << " ";
            os << sym << (i + 1);
            if (v[i] != 1) os << "^" << v[i];
            printed = true;
        }
    };
    emit("s", n);
    emit("z", m);
    if (!printed) os << "1";
    return os.str();
}

Json theta_to_json(const ThetaResult &t, const ExtendedExchangeMatrix &bt) {
    Json j;
    j["m"] = vec_to_json(t.value.m);
    j["Q"] = qvec_to_json(t.Q);
    j["order"] = t.value.F.order();
    j["broken_lines"] = t.broken_line_count;
    j["finiteness"] = finiteness_name(t.finiteness);
    j["F"] = series_to_json(t.value.F);
    Json pretty = Json::array();
    for (const auto &[n, c] : t.value.F.terms())
        pretty.push_back(pretty_monomial(c, add(t.value.m, bt.row_times_B(n)), n));
    j["monomials"] = pretty;
    return j;
}

Json broken_line_to_json(const BrokenLine &l) {
    Json j;
    j["m"] = vec_to_json(l.target_m);
    j["endpoint"] = qvec_to_json(l.endpoint);
    Json labels = Json::array();
    for (const auto &lab : l.labels) {
        Json d;
        d["c"] = rational_to_string(lab.c);
        d["m"] = vec_to_json(lab.m);
        d["n"] = vec_to_json(lab.n);
        d["monomial"] = pretty_monomial(lab.c, lab.m, lab.n);
        labels.push_back(d);
    }
    j["labels"] = labels;
    Json bends = Json::array();
    for (const auto &b : l.bends) {
        Json d;
        d["point"] = qvec_to_json(b.point);
        d["normal"] = vec_to_json(b.wall_normal);
        d["nu"] = b.nu;
        d["lambda"] = b.lambda;
        d["coeff"] = rational_to_string(b.term_coeff);
        bends.push_back(d);
    }
    j["bends"] = bends;
    return j;
}

Json table_to_json(const StructureConstantTable &t) {
    Json j;
    j["p1"] = vec_to_json(t.p1);
    j["p2"] = vec_to_json(t.p2);
    j["order"] = t.order;
    j["Q"] = qvec_to_json(t.Q);
    Json entries = Json::array();
    for (const auto &[m, s] : t.entries) {
        Json e;
        e["m"] = vec_to_json(m);
        e["series"] = series_to_json(s);
        entries.push_back(e);
    }
    j["entries"] = entries;
    return j;
}

Json expansion_to_json(const std::vector<ExpansionTerm> &terms) {
    Json arr = Json::array();
    for (const auto &t : terms) {
        Json e;
        e["m"] = vec_to_json(t.m);
        e["n"] = vec_to_json(t.n);
        e["coeff"] = rational_to_string(t.coeff);
        arr.push_back(e);
    }
    Json j;
    j["terms"] = arr;
    return j;
}

Json verdict_to_json(const MembershipVerdict &v) {
    Json j;
    switch (v.value) {
    case Membership::In: j["verdict"] = "in"; break;
    case Membership::Out: j["verdict"] = "out"; break;
    case Membership::InAtDepth: j["verdict"] = "in-at-depth"; break;
    }
    j["depth"] = v.depth;
    if (v.witness) {
        Json w = Json::array();
        for (auto k : *v.witness) w.push_back(k + 1);
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json fan_to_json(const RationalFan2D &f) {
    Json cones = Json::array();
    for (const auto &c : f.cones) {
        Json rays = Json::array();
        for (const auto &r : c.rays) rays.push_back(vec_to_json(r));
        Json cj;
        cj["rays"] = rays;
        cones.push_back(cj);
    }
    Json j;
    j["cones"] = cones;
    return j;
}

RationalFan2D fan_from_json(const Json &j) {
    RationalFan2D f;
    for (const auto &cj : j.at("cones")) {
        RationalFan2D::Cone cone;
        for (const auto &r : cj.at("rays")) cone.rays.push_back(vec_from_json(r));
        f.cones.push_back(std::move(cone));
    }
    return f;
}

} // namespace thetalab
