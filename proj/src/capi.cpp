#include "fkrigid.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "bounds.hpp"
#include "commands.hpp"
#include "effective.hpp"
#include "errors.hpp"
#include "interface.hpp"
#include "quantum.hpp"

struct fkr_config {
    fkr::SpinConfig c;
};

struct fkr_tilings {
    std::vector<fkr::Tiling> t;
};

namespace {

thread_local std::string g_last_error;

template <class F>
fkr_status guard(F&& f) {
    try {
        g_last_error.clear();
        f();
        return FKR_OK;
    } catch (const fkr::Error& e) {
        g_last_error = e.what();
        return fkr_status(int(e.kind()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return FKR_ERR_GENERIC;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FKR_ERR_GENERIC;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw fkr::config_error(std::string("null argument: ") + what);
}

fkr::BC to_bc(fkr_bc b) {
    switch (b) {
        case FKR_BC_PLUS: return fkr::BC::HomPlus;
        case FKR_BC_MINUS: return fkr::BC::HomMinus;
        case FKR_BC_100: return fkr::BC::BC100;
        case FKR_BC_111: return fkr::BC::BC111;
    }
    throw fkr::config_error("unknown boundary condition");
}

fkr::Site site_of(const int* s) { return {s[0], s[1], s[2]}; }

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

extern "C" {

const char* fkr_version(void) { return fkr::kVersion; }
const char* fkr_last_error(void) { return g_last_error.c_str(); }
void fkr_string_free(char* s) { std::free(s); }

int fkr_plaquette_potential(int sx, int sy, int sz, int st) { return fkr::plaquette_potential(sx, sy, sz, st); }
int fkr_nnn_potential(int sx, int sz) { return fkr::nnn_potential(sx, sz); }

fkr_status fkr_config_create(const int dims[3], int shell, fkr_bc bc, fkr_config** out) {
    return guard([&] {
        need(dims, "dims");
        need(out, "out");
        *out = nullptr;
        for (int i = 0; i < 3; ++i)
            if (dims[i] < 1) throw fkr::config_error("dims must be positive");
        if (shell < 0) throw fkr::config_error("shell must be non-negative");
        fkr::Volume v = fkr::Volume::centered({dims[0], dims[1], dims[2]}, shell);
        *out = new fkr_config{fkr::SpinConfig(v, to_bc(bc))};
    });
}

void fkr_config_destroy(fkr_config* c) { delete c; }

fkr_status fkr_config_get(const fkr_config* c, const int site[3], int* spin) {
    return guard([&] {
        need(c, "config");
        need(site, "site");
        need(spin, "spin");
        *spin = c->c.spin(site_of(site));
    });
}

fkr_status fkr_config_set(fkr_config* c, const int site[3], int spin) {
    return guard([&] {
        need(c, "config");
        need(site, "site");
        if (spin != 1 && spin != -1) throw fkr::config_error("spin must be +1 or -1");
        fkr::Site s = site_of(site);
        if (!c->c.volume().contains(s)) throw fkr::config_error("site outside the dynamic volume");
        c->c.set(s, spin);
    });
}

fkr_status fkr_config_stagger(const fkr_config* c, fkr_config** out) {
    return guard([&] {
        need(c, "config");
        need(out, "out");
        *out = new fkr_config{fkr::stagger(c->c)};
    });
}

fkr_status fkr_config_energy(const fkr_config* c, double U, int order, double* energy) {
    return guard([&] {
        need(c, "config");
        need(energy, "energy");
        if (!(U > 0)) throw fkr::config_error("U must be positive");
        fkr::Coeffs k = fkr::Coeffs::from_U(U);
        if (order == 2) *energy = fkr::h2_relative_energy(c->c, k);
        else if (order == 4) *energy = fkr::h4_relative_energy(c->c, k);
        else throw fkr::config_error("order must be 2 or 4");
    });
}

fkr_status fkr_config_contours(const fkr_config* c, int corner_connectivity, int* count, int* faces) {
    return guard([&] {
        need(c, "config");
        auto cs = fkr::extract_contours(c->c, corner_connectivity != 0);
        int n = 0;
        for (auto& x : cs) n += x.area;
        if (count) *count = int(cs.size());
        if (faces) *faces = n;
    });
}

fkr_status fkr_connectivity_g(const int* sites, size_t n, int* g) {
    return guard([&] {
        need(sites, "sites");
        need(g, "g");
        std::vector<fkr::Site> v;
        for (size_t i = 0; i < n; ++i) v.push_back(site_of(sites + 3 * i));
        *g = fkr::connectivity_g(v);
    });
}

fkr_status fkr_effective_energy(const int* sites, const int* W, size_t n, double U, double beta, double t,
                                double* value) {
    return guard([&] {
        need(sites, "sites");
        need(W, "W");
        need(value, "value");
        std::vector<fkr::Site> v;
        std::vector<int> w;
        for (size_t i = 0; i < n; ++i) {
            v.push_back(site_of(sites + 3 * i));
            if (W[i] != 0 && W[i] != 1) throw fkr::config_error("occupations must be 0 or 1");
            w.push_back(W[i]);
        }
        fkr::QLattice lat(v);
        if (lat.size() > fkr::kMaxDenseSites) throw fkr::cap_error("cluster exceeds the dense-site cap");
        *value = fkr::effective_energy(lat, w, fkr::FKParams::half_filled(U, beta, t));
    });
}

fkr_status fkr_tilings_hexagon(int side, fkr_tilings** out) {
    return guard([&] {
        need(out, "out");
        *out = nullptr;
        if (side < 0) throw fkr::config_error("side must be non-negative");
        auto t = fkr::enumerate_tilings(fkr::hexagon_region(side, {0, 0}));
        *out = new fkr_tilings{std::move(t)};
    });
}

size_t fkr_tilings_count(const fkr_tilings* t) { return t ? t->t.size() : 0; }

fkr_status fkr_tilings_rhombi(const fkr_tilings* t, size_t index, int* out, size_t cap, size_t* n) {
    return guard([&] {
        need(t, "tilings");
        if (index >= t->t.size()) throw fkr::config_error("tiling index out of range");
        const auto& rs = t->t[index].rhombi;
        if (n) *n = rs.size();
        if (!out) return;
        for (size_t i = 0; i < rs.size() && i < cap; ++i) {
            out[3 * i] = rs[i].axis;
            out[3 * i + 1] = rs[i].a;
            out[3 * i + 2] = rs[i].b;
        }
    });
}

void fkr_tilings_destroy(fkr_tilings* t) { delete t; }

fkr_status fkr_polymer(double C1, double C2, double lambda, double b, fkr_polymer_report* out) {
    return guard([&] {
        need(out, "out");
        fkr::PolymerInputs in;
        in.C1 = C1;
        in.C2 = C2;
        in.lambda = lambda;
        in.b = b;
        fkr::ConvergenceReport r = fkr::polymer_report(in);
        out->k0 = r.k0;
        out->beta = r.beta;
        out->alpha = r.alpha;
        out->a0 = r.a0;
        out->a1 = r.a1;
        out->q = r.q;
        out->zpol_bound = r.Zpol_bound;
        out->zpol_available = r.Zpol_available;
        out->cond1 = r.cond1;
        out->cond2 = r.cond2;
        out->cond4 = r.cond4;
    });
}

fkr_status fkr_find_b0(double C1, double C2, double lambda, double* b0, double* lambda0) {
    return guard([&] {
        fkr::B0Result r = fkr::find_b0(C1, C2, lambda);
        if (lambda0) *lambda0 = r.lambda0;
        if (!r.found) throw fkr::config_error(r.note.empty() ? "no admissible b0" : r.note);
        if (b0) *b0 = r.b0;
    });
}

fkr_status fkr_cj(int d, double t, double U, double beta, double c, double* tail, int* convergent) {
    return guard([&] {
        fkr::CjReport r = fkr::cj_sequence(d, t, U, beta, c);
        if (tail) *tail = r.tail_closed;
        if (convergent) *convergent = r.convergent;
    });
}

fkr_status fkr_run_command(const char* command, const char* config_json, const char* out_dir, int seed_given,
                           uint64_t seed, char** summary_json) {
    return guard([&] {
        need(command, "command");
        need(config_json, "config_json");
        if (summary_json) *summary_json = nullptr;
        std::optional<uint64_t> s;
        if (seed_given) s = seed;
        std::string res = fkr::run_command(command, config_json, out_dir ? out_dir : ".", s);
        if (summary_json) *summary_json = dup(res);
    });
}

}  // extern "C"
