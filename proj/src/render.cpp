#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "rcontour.hpp"

namespace fkr {

namespace {

const char* kTypeFill[3] = {"#d9d9d9", "#f4a259", "#5b8e7d"};

struct Pt {
    double x, y;
};

Pt to_xy(PVertex v, double s) { return {s * (v.a - 0.5 * v.b), -s * (std::sqrt(3.0) / 2) * v.b}; }

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string rhombi_svg(const std::vector<Rhombus>& rhombi, const std::set<PEdge>& delta,
                       const std::set<PEdge>& omega, const SvgStyle& st) {
    double minx = std::numeric_limits<double>::max(), miny = minx, maxx = -minx, maxy = -minx;
    for (auto& r : rhombi)
        for (auto& c : r.corners()) {
            Pt p = to_xy(c, st.scale);
            minx = std::min(minx, p.x); maxx = std::max(maxx, p.x);
            miny = std::min(miny, p.y); maxy = std::max(maxy, p.y);
        }
    if (rhombi.empty()) minx = miny = maxx = maxy = 0;
    const double pad = st.scale * 0.5;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(minx - pad) << " " << num(miny - pad) << " "
       << num(maxx - minx + 2 * pad) << " " << num(maxy - miny + 2 * pad) << "\">\n";
    for (auto& r : rhombi) {
        os << "<polygon points=\"";
        auto c = r.corners();
        for (int i = 0; i < 4; ++i) {
            Pt p = to_xy(c[i], st.scale);
            os << (i ? " " : "") << num(p.x) << "," << num(p.y);
        }
        os << "\" fill=\"" << kTypeFill[r.type()] << "\" fill-opacity=\"0.8\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    }
    auto lines = [&](const std::set<PEdge>& es, const char* colour) {
        for (auto& e : es) {
            Pt p = to_xy(e.p, st.scale), q = to_xy(e.q, st.scale);
            os << "<line x1=\"" << num(p.x) << "\" y1=\"" << num(p.y) << "\" x2=\"" << num(q.x) << "\" y2=\""
               << num(q.y) << "\" stroke=\"" << colour << "\" stroke-width=\"3\"/>\n";
        }
    };
    if (st.highlight_edges) {
        lines(delta, "#c0392b");
        lines(omega, "#2e86c1");
    }
    os << "</svg>\n";
    return os.str();
}

std::string tiling_svg(const Tiling& t, const SvgStyle& st) {
    std::set<PEdge> delta;
    if (st.highlight_edges)
        for (auto& [e, n] : tiling_edges(t))
            if (classify_planar(t, e) == EdgeKind::Delta) delta.insert(e);
    return rhombi_svg(t.rhombi, delta, {}, st);
}

std::string interface_svg(const SpinConfig& c, const SvgStyle& st) {
    RConfiguration rc = rconfig_from_spins(c);
    std::vector<Rhombus> rs;
    std::set<PEdge> delta, omega;
    for (auto& f : rc.faces) {
        rs.push_back(project_face(f).rhombus);
        if (!st.highlight_edges) continue;
        for (auto& e : face_sides(f)) {
            EdgeKind k = classify_edge(rc.spin, e);
            if (k == EdgeKind::Delta) delta.insert(project_edge(e));
            if (k == EdgeKind::Omega) omega.insert(project_edge(e));
        }
    }
    return rhombi_svg(rs, delta, omega, st);
}

}  // namespace fkr
