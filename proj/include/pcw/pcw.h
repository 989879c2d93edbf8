/* C interface to the proof-complexity workbench.
 *
 * Objects are opaque handles released with their *_free function. Every
 * fallible call returns a pcw_status; on failure pcw_last_error() describes
 * the problem (thread-local, valid until the next call on that thread).
 * Strings returned through char** are owned by the caller and released with
 * pcw_string_free. Reports are JSON documents.
 */
#ifndef PCW_PCW_H
#define PCW_PCW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PCW_API __declspec(dllexport)
#else
#define PCW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcw_status {
  PCW_OK = 0,
  PCW_ERR_INVALID_ARGUMENT = 1,
  PCW_ERR_PARSE = 2,
  PCW_ERR_CAP_EXCEEDED = 3,
  PCW_ERR_PRECONDITION = 4,
  PCW_ERR_IO = 5,
  PCW_ERR_INTERNAL = 6
} pcw_status;

typedef enum pcw_mode { PCW_MODE_AUTO = 0, PCW_MODE_EXACT = 1, PCW_MODE_SAMPLED = 2 } pcw_mode;
typedef enum pcw_side { PCW_SIDE_X = 0, PCW_SIDE_Y = 1 } pcw_side;

PCW_API const char* pcw_version(void);
PCW_API const char* pcw_last_error(void);
PCW_API const char* pcw_status_name(pcw_status s);
PCW_API void pcw_string_free(char* s);

/* Limits on exhaustive work. */
typedef struct pcw_caps {
  int max_side_vars;        /* rectangle materialisation, extraction: 2^n1, 2^n2 (default 12) */
  int max_depth;            /* protocol depth (default 24) */
  int max_brute_force_vars; /* DPLL / brute-force satisfiability (default 24) */
  int max_separation_vars;  /* separation check per side (default 20) */
} pcw_caps;

PCW_API void pcw_caps_default(pcw_caps* caps);

/* ---- formulas and partitions -------------------------------------------- */

typedef struct pcw_formula pcw_formula;
typedef struct pcw_partition pcw_partition;

PCW_API pcw_status pcw_formula_from_dimacs(const char* text, pcw_formula** out);
PCW_API pcw_status pcw_formula_read(const char* path, pcw_formula** out);
PCW_API void pcw_formula_free(pcw_formula* f);
PCW_API int pcw_formula_num_vars(const pcw_formula* f);
PCW_API size_t pcw_formula_num_clauses(const pcw_formula* f);
PCW_API pcw_status pcw_formula_to_dimacs(const pcw_formula* f, char** out);

/* "alternating" (odd variables to X) or "x:1,3-5 y:2" with 1-based variables
 * and a-b ranges; an omitted y list means every other variable. */
PCW_API pcw_status pcw_partition_parse(const char* spec, int num_vars, pcw_partition** out);
PCW_API void pcw_partition_free(pcw_partition* p);
PCW_API pcw_status pcw_partition_to_string(const pcw_partition* p, char** out);

/* ---- cutting planes ------------------------------------------------------ */

/* Checks a proof in the text format against the formula's clause system.
 * *is_refutation is set to 1 iff every line is valid and one reads 0 >= b,
 * b >= 1. */
PCW_API pcw_status pcw_check_cp_proof(const pcw_formula* f, const char* proof_text, char** report_json,
                                      int* is_refutation);

/* ---- circuits ------------------------------------------------------------ */

typedef struct pcw_circuit pcw_circuit;

PCW_API pcw_status pcw_circuit_from_text(const char* text, pcw_circuit** out);
PCW_API pcw_status pcw_circuit_read(const char* path, pcw_circuit** out);
PCW_API void pcw_circuit_free(pcw_circuit* c);
PCW_API size_t pcw_circuit_num_gates(const pcw_circuit* c);
PCW_API pcw_status pcw_circuit_to_text(const pcw_circuit* c, char** out);

/* Refutes f by DPLL, turns the resolution refutation into a CC_2 refutation
 * and compiles it. caps may be NULL for defaults. A satisfiable formula gives
 * PCW_ERR_PRECONDITION; the satisfying assignment is in pcw_last_error(). */
PCW_API pcw_status pcw_compile_resolution(const pcw_formula* f, const pcw_partition* p, const pcw_caps* caps,
                                          pcw_circuit** out, char** report_json);

/* Compiles a cutting planes refutation. weight_bound <= 0 means n^3. */
PCW_API pcw_status pcw_compile_cp_proof(const pcw_formula* f, const pcw_partition* p, const char* proof_text,
                                        int64_t weight_bound, const pcw_caps* caps, pcw_circuit** out,
                                        char** report_json);

/* *pass = 1 iff the circuit accepts every U(x) and rejects every V(y). */
PCW_API pcw_status pcw_verify_separation(const pcw_circuit* c, const pcw_formula* f, const pcw_partition* p,
                                         const pcw_caps* caps, char** report_json, int* pass);

/* Extracts the CC_2 refutation; *pass = 1 iff all its checks hold.
 * Requires a separating circuit (PCW_ERR_PRECONDITION otherwise). */
PCW_API pcw_status pcw_extract_cc2(const pcw_circuit* c, const pcw_formula* f, const pcw_partition* p,
                                   const pcw_caps* caps, char** report_json, int* pass);

/* compile -> verify separation -> extract, plus the per-line correctness
 * check. proof_text may be NULL (resolution by DPLL). */
PCW_API pcw_status pcw_roundtrip(const pcw_formula* f, const pcw_partition* p, const char* proof_text,
                                 int64_t weight_bound, const pcw_caps* caps, char** report_json, int* pass);

/* ---- random formulas and lemma checks ------------------------------------ */

typedef struct pcw_dist_params {
  int m;
  int n; /* variables per side for tensor samples */
  int d;
  uint64_t seed;
  int tensor; /* nonzero: F(m,n,d) tensor F(m,n,d) over 2n variables */
} pcw_dist_params;

/* partition_out may be NULL; for tensor samples it receives X = 1..n. */
PCW_API pcw_status pcw_sample_formula(const pcw_dist_params* params, pcw_formula** out,
                                      pcw_partition** partition_out);

PCW_API pcw_status pcw_stats_unsat_rate(const pcw_dist_params* params, size_t samples, const pcw_caps* caps,
                                        char** report_json, double* rate);

/* epsilon is a fraction "p/q"; s_max <= 0 selects floor(n/(e d^2)). */
PCW_API pcw_status pcw_stats_expansion(const pcw_formula* f, const char* epsilon, int s_max, pcw_mode mode,
                                       uint64_t trials, uint64_t seed, char** report_json, int* pass);

PCW_API pcw_status pcw_stats_profiles(const pcw_formula* f, pcw_mode mode, uint64_t pairs, uint64_t seed,
                                      char** report_json, int* distinct);

/* Profiles of one side's assignments (the Y side decides injectivity of V). */
PCW_API pcw_status pcw_stats_side_profiles(const pcw_formula* f, const pcw_partition* p, pcw_side side,
                                           pcw_mode mode, uint64_t pairs, uint64_t seed, char** report_json,
                                           int* distinct);

/* partition_out may be NULL. */
PCW_API pcw_status pcw_stats_heavy_partition(const pcw_formula* f, const char* epsilon, uint64_t max_trials,
                                             uint64_t seed, char** report_json, int* accepted,
                                             pcw_partition** partition_out);

PCW_API pcw_status pcw_stats_heavy_sat(const pcw_formula* f, const pcw_partition* p, pcw_side side,
                                       const char* epsilon, pcw_mode mode, uint64_t trials, uint64_t seed,
                                       char** report_json, double* fraction);

#ifdef __cplusplus
}
#endif

#endif /* PCW_PCW_H */
