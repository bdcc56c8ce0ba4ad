// thetalab: exact computation of rank-2 cluster scattering diagrams, theta
// functions, structure constants, and their behavior under mutation.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "thetalab/json_io.hpp"
#include "thetalab/svg.hpp"

using namespace thetalab;

namespace {

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    return Json::parse(in);
}

// accepts JSON arrays and bare comma lists like "[13/4,9/5]" or "-2,3"
QVec parse_qvec(const std::string &text) {
    try {
        return qvec_from_json(Json::parse(text));
    } catch (const Json::exception &) {
        std::string body = text;
        if (!body.empty() && body.front() == '[') body = body.substr(1, body.size() - 2);
        QVec out;
        std::string token;
        std::istringstream in(body);
        while (std::getline(in, token, ',')) {
            token.erase(0, token.find_first_not_of(" \t"));
            token.erase(token.find_last_not_of(" \t") + 1);
            out.push_back(rational_from_string(token));
        }
        if (out.empty()) throw PreconditionError("empty vector: " + text);
        return out;
    }
}

MVec parse_vec(const std::string &text) { return to_mvec(parse_qvec(text)); }

IndexSeq parse_kseq(const std::string &text, std::size_t rank) {
    IndexSeq out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        long k = std::stol(token);
        if (k < 1 || static_cast<std::size_t>(k) > rank)
            throw PreconditionError("mutation index out of range: " + token);
        out.push_back(static_cast<std::size_t>(k - 1));
    }
    return out;
}

std::size_t default_depth() {
    if (const char *env = std::getenv("THETALAB_DEPTH")) {
        long v = std::stol(env);
        if (v >= 0) return static_cast<std::size_t>(v);
    }
    return 6;
}

ExtendedExchangeMatrix load_matrix(const std::string &b_path, const std::string &btilde_path,
                                   bool need_coefficients) {
    if (!btilde_path.empty()) return matrix_from_json(read_json_file(btilde_path));
    if (b_path.empty()) throw PreconditionError("one of --B or --Btilde is required");
    auto bt = matrix_from_json(read_json_file(b_path));
    if (need_coefficients && bt.frozen_count() == 0)
        // a bare exchange matrix gets principal coefficients
        return ExtendedExchangeMatrix::principal(bt.square_entries());
    return bt;
}

void emit(const Json &j, const std::string &out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"exact scattering diagrams, broken lines, and theta functions"};
    app.require_subcommand(1);

    std::string b_path, btilde_path, m_text, p_text, p1_text, p2_text, q_text, kseq_text,
        factors_text, fan_path, out_path, svg_path, n_text, k_text;
    std::int64_t order = 8;
    std::size_t depth = default_depth();
    std::int64_t range = 4;
    bool with_lines = false;

    auto add_matrix_opts = [&](CLI::App *cmd) {
        cmd->add_option("--B", b_path, "exchange matrix JSON file (principal coefficients assumed)");
        cmd->add_option("--Btilde", btilde_path, "extended exchange matrix JSON file");
    };

    auto *scat = app.add_subcommand("scat", "scattering diagram operations");
    auto *scat_build = scat->add_subcommand("build", "consistent completion up to the given order");
    add_matrix_opts(scat_build);
    scat_build->add_option("--order", order, "zeta-degree truncation order");
    scat_build->add_option("--out", out_path, "output file (default stdout)");

    auto *theta_cmd = app.add_subcommand("theta", "theta function via broken lines");
    add_matrix_opts(theta_cmd);
    theta_cmd->add_option("--m", m_text, "g-vector, e.g. \"[-2,3]\"")->required();
    theta_cmd->add_option("--order", order, "truncation order");
    theta_cmd->add_option("--Q", q_text, "base point (default: deep in the positive chamber)");
    theta_cmd->add_flag("--lines", with_lines, "include the broken lines");
    theta_cmd->add_option("--out", out_path, "output file");

    auto *mut_theta = app.add_subcommand("mutate-theta", "theta for the mutated coefficients");
    add_matrix_opts(mut_theta);
    mut_theta->add_option("--m", m_text)->required();
    mut_theta->add_option("--k", k_text, "mutation direction (1-based)")->required();
    mut_theta->add_option("--order", order);
    mut_theta->add_option("--out", out_path);

    auto *struct_cmd = app.add_subcommand("struct", "structure constants for a product of thetas");
    add_matrix_opts(struct_cmd);
    struct_cmd->add_option("--p1", p1_text)->required();
    struct_cmd->add_option("--p2", p2_text)->required();
    struct_cmd->add_option("--m", m_text, "single target g-vector (default: whole table)");
    struct_cmd->add_option("--Q", q_text, "fixed base point (default: the limit toward m)");
    struct_cmd->add_option("--order", order);
    struct_cmd->add_option("--out", out_path);

    auto *expand_cmd = app.add_subcommand("expand", "theta-basis expansion of a product");
    add_matrix_opts(expand_cmd);
    expand_cmd->add_option("--factors", factors_text, "[[m, power], ...] e.g. [[[-2,3],2]]")
        ->required();
    expand_cmd->add_option("--order", order);
    expand_cmd->add_option("--out", out_path);

    auto *nmset = app.add_subcommand("nmset", "N-set membership");
    add_matrix_opts(nmset);
    nmset->add_option("--m", m_text)->required();
    nmset->add_option("--n", n_text, "single vector (default: sweep entries <= range)");
    nmset->add_option("--kseq", kseq_text, "restrict to one sequence, e.g. \"1\" or \"2,1\"");
    nmset->add_option("--range", range, "sweep bound");
    nmset->add_option("--depth", depth);
    nmset->add_option("--out", out_path);

    auto *domregion = app.add_subcommand("domregion", "integral dominance region membership");
    add_matrix_opts(domregion);
    domregion->add_option("--m", m_text)->required();
    domregion->add_option("--p", p_text, "single vector (default: sweep |p - m| <= range)");
    domregion->add_option("--range", range);
    domregion->add_option("--depth", depth);
    domregion->add_option("--out", out_path);

    auto *basis_cmd = app.add_subcommand("basis", "ray-basis element and pointedness");
    add_matrix_opts(basis_cmd);
    basis_cmd->add_option("--m", m_text)->required();
    basis_cmd->add_option("--fan", fan_path, "fan JSON (default: finite-type fan of the diagram)");
    basis_cmd->add_option("--order", order);
    basis_cmd->add_option("--depth", depth, "pointedness check depth (clamped to 3)");
    basis_cmd->add_option("--out", out_path);

    auto *sym = app.add_subcommand("symmetries", "mutation symmetries of the exchange matrix");
    add_matrix_opts(sym);
    std::size_t max_len = 4;
    sym->add_option("--max-len", max_len);
    sym->add_option("--out", out_path);

    auto *render = app.add_subcommand("render", "SVG of the diagram and broken lines");
    add_matrix_opts(render);
    render->add_option("--m", m_text, "draw broken lines for this g-vector");
    render->add_option("--Q", q_text);
    render->add_option("--order", order);
    render->add_option("--svg", svg_path, "output SVG file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (scat_build->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, true);
            emit(diagram_to_json(build_scattering_diagram(bt, order)), out_path);
        } else if (theta_cmd->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, true);
            MVec m = parse_vec(m_text);
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            ThetaResult theta = q_text.empty() ? engine.theta_positive(m, order)
                                               : engine.theta(m, parse_qvec(q_text), order, true);
            Json j = theta_to_json(theta, bt);
            if (with_lines) {
                Json lines = Json::array();
                for (const auto &l : theta.lines) lines.push_back(broken_line_to_json(l));
                j["lines"] = lines;
            }
            emit(j, out_path);
        } else if (mut_theta->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, true);
            MVec m = parse_vec(m_text);
            IndexSeq ks = parse_kseq(k_text, bt.rank());
            if (ks.size() != 1) throw PreconditionError("--k takes a single direction");
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            auto res = mutate_theta(engine, m, ks[0], order, true);
            Json j = theta_to_json(res, bt.mutate(ks[0]));
            j["k"] = ks[0] + 1;
            j["source_m"] = vec_to_json(m);
            emit(j, out_path);
        } else if (struct_cmd->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, true);
            MVec p1 = parse_vec(p1_text), p2 = parse_vec(p2_text);
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            if (!q_text.empty()) {
                auto table = a_q_table(engine, p1, p2, parse_qvec(q_text), order);
                emit(table_to_json(table), out_path);
            } else if (!m_text.empty()) {
                MVec m = parse_vec(m_text);
                Json j;
                j["p1"] = vec_to_json(p1);
                j["p2"] = vec_to_json(p2);
                j["m"] = vec_to_json(m);
                j["series"] = series_to_json(a_limit(engine, p1, p2, m, order));
                emit(j, out_path);
            } else {
                // canonical table through the theta-basis expansion
                auto expansion = expand_product_in_theta_basis(engine, {{p1, 1}, {p2, 1}}, order);
                StructureConstantTable table{p1, p2, order, {}, {}};
                for (const auto &t : expansion) {
                    auto it = table.entries.find(t.m);
                    if (it == table.entries.end())
                        it = table.entries.emplace(t.m, TruncatedSeries(bt.rank(), order)).first;
                    it->second.add_term(t.n, t.coeff);
                }
                emit(table_to_json(table), out_path);
            }
        } else if (expand_cmd->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, true);
            Json fj = Json::parse(factors_text);
            std::vector<std::pair<MVec, std::int64_t>> factors;
            for (const auto &f : fj)
                factors.emplace_back(vec_from_json(f.at(0)), f.at(1).get<std::int64_t>());
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            auto expansion = expand_product_in_theta_basis(engine, factors, order);
            Json j = expansion_to_json(expansion);
            Json fb = Json::array();
            for (const auto &f : factors) {
                Json e;
                e["m"] = vec_to_json(f.first);
                e["power"] = f.second;
                fb.push_back(e);
            }
            j["factors"] = fb;
            emit(j, out_path);
        } else if (nmset->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, false);
            MVec m = parse_vec(m_text);
            std::optional<IndexSeq> only;
            if (!kseq_text.empty()) only = parse_kseq(kseq_text, bt.rank());
            auto verdict_for = [&](const NVec &n) -> Json {
                if (only) {
                    NVec nu = nu_map(bt, *only, m, n);
                    MVec lhs = sub(mutation_map(bt, *only, add(m, bt.row_times_B(n))),
                                   mutation_map(bt, *only, m));
                    bool in = is_nonnegative(nu) && lhs == bt.mutate_seq(*only).row_times_B(nu);
                    Json j;
                    j["verdict"] = in ? "in" : "out";
                    j["nu"] = vec_to_json(nu);
                    return j;
                }
                return verdict_to_json(n_set_membership(bt, m, n, depth));
            };
            Json j;
            j["m"] = vec_to_json(m);
            if (!n_text.empty()) {
                NVec n = vec_from_json(Json::parse(n_text));
                j["n"] = vec_to_json(n);
                j["result"] = verdict_for(n);
            } else {
                Json rows = Json::array();
                NVec n(bt.rank(), 0);
                while (true) {
                    Json row = verdict_for(n);
                    row["n"] = vec_to_json(n);
                    rows.push_back(row);
                    std::size_t i = 0;
                    while (i < n.size() && n[i] == range) n[i++] = 0;
                    if (i == n.size()) break;
                    ++n[i];
                }
                j["range"] = range;
                j["rows"] = rows;
            }
            emit(j, out_path);
        } else if (domregion->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, false);
            MVec m = parse_vec(m_text);
            Json j;
            j["m"] = vec_to_json(m);
            if (!p_text.empty()) {
                MVec p = parse_vec(p_text);
                j["p"] = vec_to_json(p);
                j["result"] = verdict_to_json(dom_membership(bt, m, p, depth));
            } else {
                Json rows = Json::array();
                MVec offset(bt.rank(), -range);
                while (true) {
                    MVec p = add(m, offset);
                    Json row = verdict_to_json(dom_membership(bt, m, p, depth));
                    row["p"] = vec_to_json(p);
                    rows.push_back(row);
                    std::size_t i = 0;
                    while (i < offset.size() && offset[i] == range) offset[i++] = -range;
                    if (i == offset.size()) break;
                    ++offset[i];
                }
                j["range"] = range;
                j["rows"] = rows;
            }
            emit(j, out_path);
        } else if (basis_cmd->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, true);
            MVec m = parse_vec(m_text);
            auto d = build_scattering_diagram(bt, order);
            ThetaEngine engine(d);
            RationalFan2D fan =
                fan_path.empty() ? finite_type_fan(d) : fan_from_json(read_json_file(fan_path));
            if (fan_path.empty() && !d.completion_stabilized())
                throw PreconditionError(
                    "diagram did not stabilize; supply --fan for non-finite type");
            auto rho = ray_basis_element(fan, engine, m, order);
            Json j;
            j["m"] = vec_to_json(rho.m);
            j["F"] = series_to_json(rho.F);
            j["fan"] = fan_to_json(fan);
            auto verdict = is_pointed_up_to_depth(rho.to_graded(bt), bt, std::min<std::size_t>(depth, 3),
                                                  order);
            j["pointed"] = verdict.pointed;
            emit(j, out_path);
        } else if (sym->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, false);
            auto found = find_mutation_symmetries(bt, max_len);
            Json arr = Json::array();
            for (const auto &kseq : found) {
                Json s = Json::array();
                for (auto k : kseq) s.push_back(k + 1);
                arr.push_back(s);
            }
            Json j;
            j["max_len"] = max_len;
            j["symmetries"] = arr;
            emit(j, out_path);
        } else if (render->parsed()) {
            auto bt = load_matrix(b_path, btilde_path, true);
            auto d = build_scattering_diagram(bt, order);
            std::vector<BrokenLine> lines;
            if (!m_text.empty()) {
                ThetaEngine engine(d);
                MVec m = parse_vec(m_text);
                ThetaResult theta = q_text.empty()
                                        ? engine.theta_positive(m, order, false)
                                        : engine.theta(m, parse_qvec(q_text), order, false);
                lines = theta.lines;
            }
            std::ofstream out(svg_path);
            if (!out) throw PreconditionError("cannot open " + svg_path);
            out << render_svg(d, lines);
            std::cout << svg_path << "\n";
        }
    } catch (const VerificationError &e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError &e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception &e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
