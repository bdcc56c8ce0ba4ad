#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thetalab/json_io.hpp"

namespace py = pybind11;
using namespace thetalab;

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

ExtendedExchangeMatrix matrix_from_arg(const Matrix &entries, bool principal) {
    return principal ? ExtendedExchangeMatrix::principal(entries)
                     : [&] {
                           std::size_t r = entries.size();
                           std::size_t n = entries.empty() ? 0 : entries[0].size();
                           std::vector<int> uf(r), fr;
                           for (std::size_t i = 0; i < r; ++i) uf[i] = static_cast<int>(i) + 1;
                           for (std::size_t i = r; i < n; ++i) fr.push_back(static_cast<int>(i) + 1);
                           return ExtendedExchangeMatrix(uf, fr, entries);
                       }();
}

IndexSeq kseq_from_arg(const std::vector<std::size_t> &kseq_1based) {
    IndexSeq out;
    for (auto k : kseq_1based) {
        if (k < 1) throw PreconditionError("mutation indices are 1-based");
        out.push_back(k - 1);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact rank-2 scattering diagrams, broken lines, and theta functions";

    py::register_exception<VerificationError>(m, "VerificationFailure");
    py::register_exception<PreconditionError>(m, "PreconditionViolation");

    m.def(
        "mutate_matrix",
        [](const Matrix &entries, std::size_t k) {
            auto bt = matrix_from_arg(entries, false);
            if (k < 1 || k > bt.rank()) throw PreconditionError("k is 1-based and unfrozen");
            auto mu = bt.mutate(k - 1);
            Matrix out(mu.rank());
            for (std::size_t i = 0; i < mu.rank(); ++i) out[i] = mu.row(i);
            return out;
        },
        py::arg("entries"), py::arg("k"),
        "Matrix mutation in direction k (1-based); rows = unfrozen indices.");

    m.def(
        "mutation_map",
        [](const Matrix &b, const std::vector<std::size_t> &kseq, const MVec &v) {
            return mutation_map(matrix_from_arg(b, false), kseq_from_arg(kseq), v);
        },
        py::arg("B"), py::arg("kseq"), py::arg("v"));

    m.def(
        "skew_symmetrizers",
        [](const Matrix &b) {
            auto d = minimal_skew_symmetrizers(b);
            if (!d) throw PreconditionError("matrix is not skew-symmetrizable");
            return *d;
        },
        py::arg("B"));

    m.def(
        "find_mutation_symmetries",
        [](const Matrix &b, std::size_t max_len) {
            auto syms = find_mutation_symmetries(matrix_from_arg(b, false), max_len);
            std::vector<std::vector<std::size_t>> out;
            for (const auto &s : syms) {
                std::vector<std::size_t> row;
                for (auto k : s) row.push_back(k + 1);
                out.push_back(row);
            }
            return out;
        },
        py::arg("B"), py::arg("max_len"));

    m.def(
        "scattering_diagram",
        [](const Matrix &b, std::int64_t order) {
            return diagram_to_json(build_scattering_diagram(matrix_from_arg(b, true), order))
                .dump();
        },
        py::arg("B"), py::arg("order"), "Diagram JSON for B with principal coefficients.");

    m.def(
        "theta",
        [](const Matrix &b, const MVec &m, std::int64_t order) {
            auto bt = matrix_from_arg(b, true);
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            return theta_to_json(engine.theta_positive(m, order), bt).dump();
        },
        py::arg("B"), py::arg("m"), py::arg("order"),
        "Theta function JSON with the base point deep in the positive chamber.");

    m.def(
        "mutate_theta",
        [](const Matrix &b, const MVec &m, std::size_t k, std::int64_t order) {
            auto bt = matrix_from_arg(b, true);
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            if (k < 1 || k > bt.rank()) throw PreconditionError("k is 1-based and unfrozen");
            auto res = mutate_theta(engine, m, k - 1, order, true);
            return theta_to_json(res, bt.mutate(k - 1)).dump();
        },
        py::arg("B"), py::arg("m"), py::arg("k"), py::arg("order"));

    m.def(
        "structure_constants",
        [](const Matrix &b, const MVec &p1, const MVec &p2, std::int64_t order) {
            auto bt = matrix_from_arg(b, true);
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            auto expansion = expand_product_in_theta_basis(engine, {{p1, 1}, {p2, 1}}, order);
            return expansion_to_json(expansion).dump();
        },
        py::arg("B"), py::arg("p1"), py::arg("p2"), py::arg("order"));

    m.def(
        "psi",
        [](const Matrix &btilde, const std::vector<std::size_t> &kseq, const NVec &n) {
            return psi(matrix_from_arg(btilde, false), kseq_from_arg(kseq), n);
        },
        py::arg("Btilde"), py::arg("kseq"), py::arg("n"));

    m.def(
        "n_set_membership",
        [](const Matrix &btilde, const MVec &m, const NVec &n, std::size_t depth) {
            return n_set_membership(matrix_from_arg(btilde, false), m, n, depth).to_string();
        },
        py::arg("Btilde"), py::arg("m"), py::arg("n"), py::arg("depth"));

    m.def(
        "dom_membership",
        [](const Matrix &btilde, const MVec &m, const MVec &p, std::size_t depth) {
            return dom_membership(matrix_from_arg(btilde, false), m, p, depth).to_string();
        },
        py::arg("Btilde"), py::arg("m"), py::arg("p"), py::arg("depth"));
}
