#ifndef FKRIGID_H
#define FKRIGID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FKR_API __declspec(dllexport)
#else
#define FKR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    FKR_OK = 0,
    FKR_ERR_GENERIC = 1,
    FKR_ERR_CONFIG = 2,
    FKR_ERR_CAP = 3,
    FKR_ERR_INVARIANT = 4
} fkr_status;

typedef enum { FKR_BC_PLUS = 0, FKR_BC_MINUS = 1, FKR_BC_100 = 2, FKR_BC_111 = 3 } fkr_bc;

typedef struct fkr_config fkr_config;
typedef struct fkr_tilings fkr_tilings;

FKR_API const char* fkr_version(void);
/* Message of the last failure on this thread; empty when none. */
FKR_API const char* fkr_last_error(void);
FKR_API void fkr_string_free(char* s);

/* Local potentials of the truncated model. */
FKR_API int fkr_plaquette_potential(int sx, int sy, int sz, int st);
FKR_API int fkr_nnn_potential(int sx, int sz);

/* Spin box: dims sites per axis, surrounded by `shell` frozen layers set by the boundary condition. */
FKR_API fkr_status fkr_config_create(const int dims[3], int shell, fkr_bc bc, fkr_config** out);
FKR_API void fkr_config_destroy(fkr_config* c);
FKR_API fkr_status fkr_config_get(const fkr_config* c, const int site[3], int* spin);
/* Only sites inside the dynamic volume may be set. */
FKR_API fkr_status fkr_config_set(fkr_config* c, const int site[3], int spin);
/* New handle in the other frame (sublattice sign change). */
FKR_API fkr_status fkr_config_stagger(const fkr_config* c, fkr_config** out);
/* order 2 or 4; energy relative to the uniform plus state, frozen shell included. */
FKR_API fkr_status fkr_config_energy(const fkr_config* c, double U, int order, double* energy);
/* Number of contours and their total face count. */
FKR_API fkr_status fkr_config_contours(const fkr_config* c, int corner_connectivity, int* count, int* faces);

/* Cluster size measure n(B) - 1 for nearest-neighbour connected sets (n x 3 ints). */
FKR_API fkr_status fkr_connectivity_g(const int* sites, size_t n, int* g);
/* Effective ion energy of the occupation W (0/1 per site) on an open cluster. */
FKR_API fkr_status fkr_effective_energy(const int* sites, const int* W, size_t n, double U, double beta, double t,
                                        double* value);

FKR_API fkr_status fkr_tilings_hexagon(int side, fkr_tilings** out);
FKR_API size_t fkr_tilings_count(const fkr_tilings* t);
/* Writes up to cap rhombi as (axis, a, b) triples; *n receives the rhombus count. */
FKR_API fkr_status fkr_tilings_rhombi(const fkr_tilings* t, size_t index, int* out, size_t cap, size_t* n);
FKR_API void fkr_tilings_destroy(fkr_tilings* t);

typedef struct {
    int k0;
    double beta, alpha, a0, a1, q, zpol_bound;
    int zpol_available;
    int cond1, cond2, cond4;
} fkr_polymer_report;

FKR_API fkr_status fkr_polymer(double C1, double C2, double lambda, double b, fkr_polymer_report* out);
FKR_API fkr_status fkr_find_b0(double C1, double C2, double lambda, double* b0, double* lambda0);
/* Tail sum over j >= 2 of the hopping-expansion sequence; *convergent set when the ratio is below one. */
FKR_API fkr_status fkr_cj(int d, double t, double U, double beta, double c, double* tail, int* convergent);

/* Runs a CLI command with a JSON config, writing into out_dir. *summary_json receives a string that
   must be released with fkr_string_free. */
FKR_API fkr_status fkr_run_command(const char* command, const char* config_json, const char* out_dir, int seed_given,
                                   uint64_t seed, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
