#include "thetalab/svg.hpp"

#include <algorithm>
#include <sstream>

#include "thetalab/errors.hpp"
#include "thetalab/json_io.hpp"

namespace thetalab {

namespace {

// exact rational -> fixed 4-decimal string, deterministic
std::string fixed4(const Rational &x) {
    BigInt scaled = num(x) * 10000;
    BigInt q = scaled / den(x); // truncation toward zero is fine for display
    bool neg = q < 0;
    BigInt a = neg ? -q : q;
    BigInt ip = a / 10000, fp = a % 10000;
    std::ostringstream os;
    if (neg) os << "-";
    os << ip << ".";
    std::string f = fp.str();
    os << std::string(4 - f.size(), '0') << f;
    return os.str();
}

struct Mapper {
    Rational view; // half-width in plane units
    int w, h;
    std::string x(const Rational &px) const { return fixed4((px / view + 1) * Rational(w, 2)); }
    std::string y(const Rational &py) const { return fixed4((1 - py / view) * Rational(h, 2)); }
};

Rational qmax(const Rational &a, const Rational &b) { return a < b ? b : a; }

} // namespace

std::string render_svg(const ScatteringDiagram &diagram, const std::vector<BrokenLine> &lines,
                       const RenderOptions &opts) {
    if (!diagram.is_rank2()) throw PreconditionError("SVG rendering is rank 2 only");

    Rational view = opts.view;
    if (view == 0) {
        view = 4;
        for (const auto &l : lines) {
            for (const auto &b : l.bends) {
                view = qmax(view, abs(b.point[0]));
                view = qmax(view, abs(b.point[1]));
            }
            view = qmax(view, abs(l.endpoint[0]));
            view = qmax(view, abs(l.endpoint[1]));
        }
        view = view * Rational(5, 4);
    }
    Mapper map{view, opts.width, opts.height};
    Rational edge = view; // clip rays at the viewport edge

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
        << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto clip_scale = [&](const MVec &dir) {
        Rational mx = qmax(abs(Rational(dir[0])), abs(Rational(dir[1])));
        return edge / mx;
    };

    for (const auto &s : diagram.ray_slices()) {
        Rational t = clip_scale(s.dir);
        QVec tip{t * s.dir[0], t * s.dir[1]};
        svg << "<line x1=\"" << map.x(0) << "\" y1=\"" << map.y(0) << "\" x2=\"" << map.x(tip[0])
            << "\" y2=\"" << map.y(tip[1]) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        if (opts.labels && !s.f.is_one()) {
            QVec at{tip[0] * Rational(4, 5), tip[1] * Rational(4, 5)};
            svg << "<text x=\"" << map.x(at[0]) << "\" y=\"" << map.y(at[1])
                << "\" font-size=\"11\" fill=\"black\">" << s.f.to_string("h") << "</text>\n";
        }
    }

    for (const auto &l : lines) {
        std::ostringstream pts;
        // unbounded end clipped at the viewport
        QVec first = l.bends.empty() ? l.endpoint : l.bends.front().point;
        Rational reach = qmax(abs(Rational(l.target_m[0])), abs(Rational(l.target_m[1])));
        Rational t = reach == 0 ? Rational(0) : Rational(3) * view / reach;
        QVec far{first[0] + t * l.target_m[0], first[1] + t * l.target_m[1]};
        pts << map.x(far[0]) << "," << map.y(far[1]);
        for (const auto &b : l.bends) pts << " " << map.x(b.point[0]) << "," << map.y(b.point[1]);
        pts << " " << map.x(l.endpoint[0]) << "," << map.y(l.endpoint[1]);
        svg << "<polyline points=\"" << pts.str()
            << "\" fill=\"none\" stroke=\"red\" stroke-width=\"1.2\"/>\n";
        if (opts.labels) {
            const auto &lab = l.final_label();
            QVec mid{(l.endpoint[0] + (l.bends.empty() ? far[0] : l.bends.back().point[0])) / 2,
                     (l.endpoint[1] + (l.bends.empty() ? far[1] : l.bends.back().point[1])) / 2};
            svg << "<text x=\"" << map.x(mid[0]) << "\" y=\"" << map.y(mid[1])
                << "\" font-size=\"10\" fill=\"red\">" << pretty_monomial(lab.c, lab.m, lab.n)
                << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace thetalab
