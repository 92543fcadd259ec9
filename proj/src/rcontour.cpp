#include "rcontour.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "unionfind.hpp"

namespace fkr {

const char* edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::None: return "none";
        case EdgeKind::Good: return "good";
        case EdgeKind::Delta: return "delta";
        case EdgeKind::Omega: return "omega";
    }
    return "?";
}

std::array<Site, 4> sites_around_edge(const Edge3& e) {
    int i = (e.j + 1) % 3, l = (e.j + 2) % 3;
    Site c = e.c;
    return {c, c.shifted(i, -1), c.shifted(i, -1).shifted(l, -1), c.shifted(l, -1)};
}

std::array<Face, 4> faces_around_edge(const Edge3& e) {
    int i = (e.j + 1) % 3, l = (e.j + 2) % 3;
    auto s = sites_around_edge(e);
    return {Face{s[1], i}, Face{s[2], l}, Face{s[2], i}, Face{s[3], l}};
}

EdgeKind classify_edge(const SpinFn& spin, const Edge3& e) {
    auto s = sites_around_edge(e);
    int v[4];
    for (int q = 0; q < 4; ++q) v[q] = spin(s[q]);
    int changes = 0;
    for (int q = 0; q < 4; ++q) changes += v[q] != v[(q + 1) % 4];
    if (changes == 0) return EdgeKind::None;
    if (changes == 4) return EdgeKind::Omega;
    return (v[0] == v[2] || v[1] == v[3]) ? EdgeKind::Good : EdgeKind::Delta;
}

EdgeKind classify_planar(const Tiling& t, const PEdge& e) {
    std::vector<int> types;
    for (auto& r : t.rhombi)
        for (auto& s : r.sides())
            if (s == e) types.push_back(r.type());
    if (types.empty()) return EdgeKind::None;
    if (types.size() == 1) types.push_back(0);  // exterior is type 0
    return types[0] == types[1] ? EdgeKind::Good : EdgeKind::Delta;
}

bool is_lambda(const SpinFn& spin, Site k, int axis) {
    int a = spin(k.shifted(axis, -1)), b = spin(k), c = spin(k.shifted(axis, 1));
    return a == c && a != b;
}

std::array<Edge3, 4> face_sides(const Face& f) {
    Site C = f.corner();
    int j = (f.axis + 1) % 3, l = (f.axis + 2) % 3;
    return {Edge3{C, j}, Edge3{C, l}, Edge3{C.shifted(j, 1), l}, Edge3{C.shifted(l, 1), j}};
}

PEdge project_edge(const Edge3& e) { return PEdge::of(project(e.c), project(e.c.shifted(e.j, 1))); }

std::map<Triangle, int> RConfiguration::coverage() const {
    std::map<Triangle, int> cov;
    for (auto& f : faces)
        for (auto& t : project_face(f).rhombus.triangles()) cov[t]++;
    return cov;
}

SpinFn spin_from_heights(HeightMap h) {
    return [h = std::move(h)](Site k) {
        PVertex p = project(k);
        auto it = h.find(p);
        int H = it == h.end() ? staircase_height(p) : it->second;
        return k.sum() + 3 <= H ? -1 : 1;
    };
}

RConfiguration rconfig_from_tiling(const Tiling& t) {
    RConfiguration rc;
    rc.faces = tiling_to_interface(t);
    rc.spin = spin_from_heights(tiling_heights(t).h);
    return rc;
}

std::vector<Face> pinned_interface_faces(const SpinConfig& c) {
    const Volume& v = c.volume();
    std::vector<Face> faces;
    for (int i = 0; i < v.box_size(); ++i) {
        Site x = v.box_site(i);
        for (int ax = 0; ax < 3; ++ax) {
            Site y = x.shifted(ax, 1);
            if (v.in_box(y) && c.at_index(i) != c.spin(y)) faces.push_back({x, ax});
        }
    }
    UnionFind uf(int(faces.size()));
    std::map<Edge3, int> owner;
    for (int f = 0; f < int(faces.size()); ++f)
        for (auto& e : face_sides(faces[f])) {
            auto [it, fresh] = owner.emplace(e, f);
            if (!fresh) uf.unite(f, it->second);
        }
    std::set<int> pinned_roots;
    for (int f = 0; f < int(faces.size()); ++f)
        if (!v.contains(faces[f].lo) && !v.contains(faces[f].hi())) pinned_roots.insert(uf.find(f));
    std::vector<Face> out;
    for (int f = 0; f < int(faces.size()); ++f)
        if (pinned_roots.count(uf.find(f))) out.push_back(faces[f]);
    std::sort(out.begin(), out.end());
    return out;
}

RConfiguration rconfig_from_spins(const SpinConfig& c) {
    RConfiguration rc;
    rc.faces = pinned_interface_faces(c);
    rc.spin = [c](Site s) { return c.spin(s); };
    return rc;
}

Decomposition decompose(const RConfiguration& rc) {
    const auto& F = rc.faces;
    const int n = int(F.size());
    std::map<Face, int> fidx;
    for (int i = 0; i < n; ++i) fidx[F[i]] = i;
    auto cov = rc.coverage();
    std::vector<Rhombus> rh(n);
    std::vector<char> ovl(n, 0);
    for (int i = 0; i < n; ++i) {
        rh[i] = project_face(F[i]).rhombus;
        for (auto& t : rh[i].triangles()) ovl[i] = ovl[i] || cov[t] > 1;
    }

    std::map<Edge3, EdgeKind> kinds;
    for (auto& f : F)
        for (auto& e : face_sides(f))
            if (!kinds.count(e)) kinds[e] = classify_edge(rc.spin, e);

    auto incident = [&](const Edge3& e) {
        std::vector<int> inc;
        for (auto& f : faces_around_edge(e)) {
            auto it = fidx.find(f);
            if (it != fidx.end()) inc.push_back(it->second);
        }
        return inc;
    };

    const int EXT = n;
    UnionFind uf(n + 1);
    std::vector<char> linked(n + 1, 0);
    std::vector<Edge3> contour_edges;
    for (auto& [e, kind] : kinds) {
        auto inc = incident(e);
        bool flat = true;
        for (int i : inc) flat = flat && !ovl[i];
        if (kind == EdgeKind::Good && flat && inc.size() <= 2) {
            int other = inc.size() == 2 ? inc[1] : EXT;
            uf.unite(inc[0], other);
            linked[inc[0]] = linked[other] = 1;
        } else {
            contour_edges.push_back(e);
        }
    }

    Decomposition d;
    d.face_base.assign(n, -1);
    std::map<int, int> base_of_root;
    if (linked[EXT]) {
        base_of_root[uf.find(EXT)] = 0;
        d.bases.push_back({0, 0, true});
    }
    for (int i = 0; i < n; ++i) {
        if (!linked[i]) continue;
        int r = uf.find(i);
        auto [it, fresh] = base_of_root.emplace(r, int(d.bases.size()));
        if (fresh) d.bases.push_back({rh[i].type(), 0, false});
        BaseInfo& b = d.bases[it->second];
        if (rh[i].type() != b.type) {
            std::ostringstream os;
            os << "base mixes rhombus types " << b.type << " and " << rh[i].type() << " at face ("
               << F[i].lo.k1 << "," << F[i].lo.k2 << "," << F[i].lo.k3 << ";" << F[i].axis << ")";
            throw invariant_error(os.str());
        }
        b.size++;
        d.face_base[i] = it->second;
    }

    // Contours: connected pieces of the closed complement of the bases.
    std::map<PVertex, int> vid;
    UnionFind vuf;
    auto vertex = [&](PVertex p) {
        auto [it, fresh] = vid.emplace(p, 0);
        if (fresh) it->second = vuf.add();
        return it->second;
    };
    for (int i = 0; i < n; ++i) {
        if (d.face_base[i] >= 0) continue;
        auto c = rh[i].corners();
        int v0 = vertex(c[0]);
        for (int q = 1; q < 4; ++q) vuf.unite(v0, vertex(c[q]));
    }
    for (auto& e : contour_edges) {
        PEdge pe = project_edge(e);
        vuf.unite(vertex(pe.p), vertex(pe.q));
    }
    std::map<int, int> contour_of_root;
    for (auto& [p, id] : vid) {
        int r = vuf.find(id);
        auto [it, fresh] = contour_of_root.emplace(r, int(d.contours.size()));
        if (fresh) d.contours.emplace_back();
        d.contours[it->second].vertices.insert(p);
    }
    auto contour_of = [&](PVertex p) { return contour_of_root.at(vuf.find(vid.at(p))); };

    for (int i = 0; i < n; ++i) {
        if (d.face_base[i] >= 0) continue;
        RContour& c = d.contours[contour_of(rh[i].low())];
        c.faces.push_back(i);
        for (auto& s : rh[i].sides()) c.edges.insert(s);
        for (auto& t : rh[i].triangles()) c.triangles.insert(t);
    }
    for (auto& e : contour_edges) {
        PEdge pe = project_edge(e);
        d.contours[contour_of(pe.p)].edges.insert(pe);
    }

    // Overlapping subcontours: corner-connected groups of overlapping rhombi.
    std::vector<std::pair<int, int>> sub_of(n, {-1, -1});
    for (int ci = 0; ci < int(d.contours.size()); ++ci) {
        RContour& c = d.contours[ci];
        std::vector<int> ov;
        for (int i : c.faces)
            if (ovl[i]) ov.push_back(i);
        UnionFind suf(int(ov.size()));
        std::map<PVertex, int> owner;
        for (int q = 0; q < int(ov.size()); ++q)
            for (auto& p : rh[ov[q]].corners()) {
                auto [it, fresh] = owner.emplace(p, q);
                if (!fresh) suf.unite(q, it->second);
            }
        std::map<int, int> sub_index;
        for (int q = 0; q < int(ov.size()); ++q) {
            auto [it, fresh] = sub_index.emplace(suf.find(q), int(c.ov.size()));
            if (fresh) c.ov.emplace_back();
            OverlapSub& s = c.ov[it->second];
            s.faces.push_back(ov[q]);
            for (auto& t : rh[ov[q]].triangles()) s.support.insert(t);
            sub_of[ov[q]] = {ci, it->second};
        }
        for (auto& s : c.ov) {
            for (auto& t : s.support) s.overlap_sum += cov[t] - 1;
            s.a_ov = s.overlap_sum / 2.0;
        }
    }

    for (auto& e : contour_edges) {
        EdgeKind kind = kinds[e];
        if (kind != EdgeKind::Delta && kind != EdgeKind::Omega) continue;
        std::pair<int, int> target{-1, -1};
        for (int i : incident(e))
            if (ovl[i]) target = sub_of[i];
        if (target.first >= 0) {
            OverlapSub& s = d.contours[target.first].ov[target.second];
            (kind == EdgeKind::Delta ? s.delta : s.omega)++;
        } else {
            RContour& c = d.contours[contour_of(project_edge(e).p)];
            if (kind == EdgeKind::Delta) c.delta_st.insert(e);
            else c.omega_st++;
        }
    }

    for (int i = 0; i < n; ++i) {
        auto it = fidx.find(Face{F[i].lo.shifted(F[i].axis, 1), F[i].axis});
        if (it == fidx.end()) continue;
        int g = it->second;
        if (ovl[i] || ovl[g]) {
            auto [ci, si] = ovl[i] ? sub_of[i] : sub_of[g];
            d.contours[ci].ov[si].lambda++;
            continue;
        }
        bool done = false;
        for (int f : {i, g})
            for (auto& p : rh[f].corners())
                if (!done && vid.count(p)) {
                    d.contours[contour_of(p)].lambda_st++;
                    done = true;
                }
        if (!done) d.unassigned_links++;
    }
    return d;
}

int total_delta(const RContour& c) {
    int s = int(c.delta_st.size());
    for (auto& o : c.ov) s += o.delta;
    return s;
}

int total_omega(const RContour& c) {
    int s = c.omega_st;
    for (auto& o : c.ov) s += o.omega;
    return s;
}

int total_lambda(const RContour& c) {
    int s = c.lambda_st;
    for (auto& o : c.ov) s += o.lambda;
    return s;
}

double total_a_ov(const RContour& c) {
    double s = 0;
    for (auto& o : c.ov) s += o.a_ov;
    return s;
}

double f_energy(const RContour& c, const Coeffs& k) {
    const double U3 = k.U * k.U * k.U;
    return k.J2 * total_a_ov(c) + k.K2 * total_delta(c) + total_omega(c) / U3 + total_lambda(c) / (4 * U3);
}

int min_rhombus_cover(const std::set<Triangle>& support, int max_rhombi) {
    if (support.empty()) return 0;
    if (int(support.size()) > 2 * max_rhombi)
        throw cap_error("overlapping support of " + std::to_string(support.size()) +
                        " triangles exceeds the exact cover cap");
    std::vector<Triangle> tris(support.begin(), support.end());
    std::map<Triangle, int> idx;
    for (int i = 0; i < int(tris.size()); ++i) idx[tris[i]] = i;
    std::vector<std::vector<std::pair<int, int>>> options(tris.size());
    for (int i = 0; i < int(tris.size()); ++i)
        for (auto& r : rhombi_containing(tris[i])) {
            auto tt = r.triangles();
            if (idx.count(tt[0]) && idx.count(tt[1])) options[i].push_back({idx[tt[0]], idx[tt[1]]});
        }
    for (auto& o : options)
        if (o.empty()) throw invariant_error("support triangle not coverable by a rhombus inside the support");
    std::vector<int> hits(tris.size(), 0);
    int best = int(tris.size());
    std::function<void(int)> rec = [&](int used) {
        if (used >= best) return;
        int first = -1;
        for (int i = 0; i < int(tris.size()); ++i)
            if (!hits[i]) { first = i; break; }
        if (first < 0) { best = used; return; }
        for (auto [x, y] : options[first]) {
            hits[x]++; hits[y]++;
            rec(used + 1);
            hits[x]--; hits[y]--;
        }
    };
    rec(0);
    return best;
}

GeometricContour geometric_class(const RConfiguration& rc, const RContour& c) {
    GeometricContour g;
    std::set<int> ovf;
    for (auto& o : c.ov) ovf.insert(o.faces.begin(), o.faces.end());
    for (auto& e : c.delta_st) g.std_edges.insert(project_edge(e));
    for (int i : c.faces)
        if (!ovf.count(i)) g.std_rhombi.insert(project_face(rc.faces[i]).rhombus);
    for (auto& o : c.ov) g.supports.push_back(o.support);
    std::sort(g.supports.begin(), g.supports.end());
    for (auto& s : g.supports) g.r_ov.push_back(min_rhombus_cover(s));
    return g;
}

namespace {

Rhombus rhombus_of_type(const Triangle& t, int type) {
    for (auto& r : rhombi_containing(t))
        if (r.type() == type) return r;
    throw std::logic_error("no rhombus of the requested type");
}

std::array<Triangle, 6> triangles_at(PVertex v) {
    return {Triangle{v.a, v.b, 0}, Triangle{v.a - 1, v.b, 0}, Triangle{v.a - 1, v.b - 1, 0},
            Triangle{v.a, v.b, 1}, Triangle{v.a - 1, v.b - 1, 1}, Triangle{v.a, v.b - 1, 1}};
}

std::string describe(const Rhombus& r) {
    std::ostringstream os;
    os << "rhombus(axis " << r.axis << " at " << r.a << "," << r.b << " type " << r.type() << ")";
    return os.str();
}

std::vector<double> sorted_f(const Decomposition& d, const Coeffs& k, int skip) {
    std::vector<double> out;
    for (int i = 0; i < int(d.contours.size()); ++i)
        if (i != skip) out.push_back(f_energy(d.contours[i], k));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

RemovalResult dobrushin_remove(const Tiling& t, int contour_index, const Coeffs& k) {
    RConfiguration rc = rconfig_from_tiling(t);
    Decomposition dec = decompose(rc);
    if (contour_index < 0 || contour_index >= int(dec.contours.size()))
        throw config_error("contour index out of range");
    const RContour& Y = dec.contours[contour_index];

    // Owner rhombus of every triangle, with its base flag; an outer ring of type-0 rhombi closes
    // the region.
    std::map<Triangle, std::pair<Rhombus, bool>> owner;
    for (int i = 0; i < int(rc.faces.size()); ++i) {
        Rhombus r = project_face(rc.faces[i]).rhombus;
        for (auto& tr : r.triangles()) owner[tr] = {r, dec.face_base[i] >= 0};
    }
    std::set<Rhombus> ring;
    for (auto& v : region_vertices(t.region))
        for (auto& tr : triangles_at(v))
            if (!t.region.count(tr)) ring.insert(type0_rhombus(tr));
    for (auto& r : ring)
        for (auto& tr : r.triangles()) {
            if (t.region.count(tr)) throw config_error("region boundary is not compatible with a type-0 exterior");
            owner[tr] = {r, true};
        }

    // Regions cut out by the contour.
    std::vector<Triangle> tris;
    std::map<Triangle, int> idx;
    for (auto& [tr, o] : owner)
        if (!Y.triangles.count(tr)) {
            idx[tr] = int(tris.size());
            tris.push_back(tr);
        }
    UnionFind uf(int(tris.size()));
    for (int i = 0; i < int(tris.size()); ++i) {
        auto v = tris[i].vertices();
        for (auto& nb : triangle_neighbours(tris[i])) {
            auto it = idx.find(nb);
            if (it == idx.end()) continue;
            auto w = nb.vertices();
            std::vector<PVertex> shared;
            for (auto& p : v)
                if (std::find(w.begin(), w.end(), p) != w.end()) shared.push_back(p);
            if (!Y.edges.count(PEdge::of(shared[0], shared[1]))) uf.unite(i, it->second);
        }
    }
    const int exterior = uf.find(idx.at(*ring.begin()->triangles().begin()));

    std::map<int, std::set<int>> touching_types;  // component -> base types touching the contour
    std::map<int, std::vector<Triangle>> members;
    for (int i = 0; i < int(tris.size()); ++i) {
        int comp = uf.find(i);
        members[comp].push_back(tris[i]);
        auto& [r, base] = owner.at(tris[i]);
        if (!base) continue;
        for (auto& p : r.corners())
            if (Y.vertices.count(p)) touching_types[comp].insert(r.type());
    }
    auto single_type = [&](int comp, const char* what) {
        auto& s = touching_types[comp];
        if (s.size() != 1)
            throw invariant_error(std::string(what) + " region has " + std::to_string(s.size()) +
                                  " base types along the removed contour");
        return *s.begin();
    };
    const int outer = single_type(exterior, "outer");

    RemovalResult res;
    res.contours_before = int(dec.contours.size());
    std::map<Triangle, Rhombus> cover;
    auto place = [&](const Rhombus& r, const char* why) {
        for (auto& tr : r.triangles()) {
            auto it = cover.find(tr);
            if (it != cover.end() && !(it->second == r))
                throw invariant_error(std::string("removal conflict (") + why + "): " + describe(r) +
                                      " overlaps " + describe(it->second));
        }
        for (auto& tr : r.triangles()) cover[tr] = r;
    };

    std::vector<std::set<Triangle>> moved;
    for (auto& [comp, list] : members) {
        if (comp == exterior) continue;
        res.interiors++;
        int inner = single_type(comp, "inner");
        int dt = mod3(outer - inner);
        PVertex shift = dt == 0 ? PVertex{0, 0} : (dt == 2 ? PVertex{1, 1} : PVertex{-1, -1});
        if (dt) res.translated++;
        std::set<Rhombus> rs;
        for (auto& tr : list) rs.insert(owner.at(tr).first);
        std::set<Triangle> img;
        for (auto& r : rs) {
            Rhombus m = r.translated(shift);
            place(m, "translated interior");
            for (auto& tr : m.triangles()) img.insert(tr);
        }
        for (auto& prev : moved)
            for (auto& tr : img)
                if (prev.count(tr) && cover.at(tr).type() != outer)
                    throw invariant_error("translated interiors intersect away from the outer base type");
        moved.push_back(std::move(img));
    }
    {
        std::set<Rhombus> rs;
        for (auto& tr : members[exterior]) rs.insert(owner.at(tr).first);
        for (auto& r : rs) place(r, "exterior");
    }
    for (auto& [tr, o] : owner)
        if (!cover.count(tr)) place(rhombus_of_type(tr, outer), "fill");

    Tiling out;
    out.region = t.region;
    std::set<Rhombus> kept;
    for (auto& [tr, r] : cover) {
        if (t.region.count(tr)) {
            kept.insert(r);
        } else if (!(r == type0_rhombus(tr))) {
            throw invariant_error("removal pushed " + describe(r) + " outside the region");
        }
    }
    out.rhombi.assign(kept.begin(), kept.end());
    std::string why;
    if (!tiling_valid(out, &why)) throw invariant_error("removal produced an invalid tiling: " + why);

    Decomposition after = decompose(rconfig_from_tiling(out));
    res.contours_after = int(after.contours.size());
    res.f_before_others = sorted_f(dec, k, contour_index);
    res.f_after = sorted_f(after, k, -1);
    if (res.contours_after != res.contours_before - 1)
        throw invariant_error("contour count went from " + std::to_string(res.contours_before) + " to " +
                              std::to_string(res.contours_after));
    for (size_t i = 0; i < res.f_after.size(); ++i)
        if (std::abs(res.f_after[i] - res.f_before_others[i]) > 1e-12)
            throw invariant_error("energy of a remaining contour changed under removal");
    res.tiling = std::move(out);
    return res;
}

}  // namespace fkr
