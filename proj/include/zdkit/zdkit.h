#ifndef ZDKIT_H
#define ZDKIT_H

/* C interface to zdkit. Every call returns a zd_status; on failure the
 * thread's last error message is available from zd_last_error(). Handles are
 * opaque and owned by the caller. Strings returned through char** are
 * allocated by the library and released with zd_string_free. Player and
 * strategy indices are 1-based. Matrices cross the boundary row-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ZDKIT_BUILDING)
#define ZD_API __declspec(dllexport)
#else
#define ZD_API __declspec(dllimport)
#endif
#else
#define ZD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zd_status {
  ZD_OK = 0,
  ZD_INVALID_ARGUMENT = 1, /* null pointer, short buffer */
  ZD_DOMAIN = 2,
  ZD_DIMENSION = 3,
  ZD_VALIDATION = 4,
  ZD_ANALYSIS = 5,
  ZD_NUMERIC = 6,
  ZD_CAPACITY = 7,
  ZD_PARSE = 8,
  ZD_IO = 9,
  ZD_INTERNAL = 10
} zd_status;

typedef struct zd_matrix zd_matrix;
typedef struct zd_game zd_game;
typedef struct zd_assignment zd_assignment;
typedef struct zd_rules zd_rules;
typedef struct zd_network zd_network;

ZD_API const char* zd_last_error(void);
ZD_API const char* zd_status_name(zd_status status);
ZD_API const char* zd_version(void);
ZD_API void zd_string_free(char* s);

/* matrices */
ZD_API zd_status zd_matrix_create(size_t rows, size_t cols, const double* entries, zd_matrix** out);
ZD_API zd_status zd_matrix_identity(size_t n, zd_matrix** out);
ZD_API void zd_matrix_destroy(zd_matrix* m);
ZD_API zd_status zd_matrix_shape(const zd_matrix* m, size_t* rows, size_t* cols);
ZD_API zd_status zd_matrix_copy(const zd_matrix* m, double* out, size_t capacity);
ZD_API zd_status zd_stp(const zd_matrix* a, const zd_matrix* b, zd_matrix** out);
ZD_API zd_status zd_kron(const zd_matrix* a, const zd_matrix* b, zd_matrix** out);
ZD_API zd_status zd_khatri_rao(const zd_matrix* a, const zd_matrix* b, zd_matrix** out);
ZD_API zd_status zd_matrix_load(const char* path, zd_matrix** out);
ZD_API zd_status zd_matrix_to_json(const zd_matrix* m, char** json);

typedef struct zd_markov_summary {
  int primitive;
  size_t witness;
  size_t rank_defect;
  int limit_converged;
  int limit_identical_columns;
  int has_stationary;
} zd_markov_summary;

/* Primitivity, rank defect, stationary vector and power limit of a column-stochastic L.
 * json (optional) receives the full report. */
ZD_API zd_status zd_analyze(const zd_matrix* l, zd_markov_summary* summary, char** json);
/* Unique stationary vector written to out (length kappa). */
ZD_API zd_status zd_stationary(const zd_matrix* l, double* out, size_t capacity);

/* games: {players, strategy_counts, payoffs, labels?} */
ZD_API zd_status zd_game_load(const char* path, zd_game** out);
ZD_API zd_status zd_game_parse(const char* json, zd_game** out);
ZD_API void zd_game_destroy(zd_game* g);
ZD_API zd_status zd_game_players(const zd_game* g, int* players, size_t* profiles);
ZD_API zd_status zd_game_strategy_count(const zd_game* g, int player, int* count);
/* Profiles in which player plays strategy, ascending. count receives the set size. */
ZD_API zd_status zd_game_phi(const zd_game* g, int player, int strategy, size_t* out, size_t capacity, size_t* count);
ZD_API zd_status zd_game_xi(const zd_game* g, int player, int strategy, double* out, size_t capacity);
ZD_API zd_status zd_game_to_json(const zd_game* g, char** json);

/* One designed row: a_1 Ec_1 + ... + a_n Ec_n + a_0 = 0 via strategy's row with factor mu.
 * auto_mu != 0 ignores mu and picks one inside the feasible interval. */
typedef struct zd_relation {
  int strategy;
  const double* coeffs;
  size_t coeff_count;
  double constant;
  double mu;
  int auto_mu;
} zd_relation;

ZD_API zd_status zd_design(const zd_game* g, int designer, const zd_relation* relations, size_t count,
                           zd_assignment** out);
/* Text relations:
 *   <row>:pin:<player>:<value>
 *   <row>:extort:<player>:<factor>:<reference>
 *   <row>:linear:<a_1>,...,<a_n>:<a_0>
 * mus holds mu_count entries ("auto" or a number); a single entry applies to every relation. */
ZD_API zd_status zd_design_from_specs(const zd_game* g, int designer, const char* const* specs, size_t count,
                                      const char* const* mus, size_t mu_count, zd_assignment** out);
/* Feasible mu range for one relation; lo/hi may be -inf/+inf. */
ZD_API zd_status zd_mu_interval(const zd_game* g, int designer, const zd_relation* relation, double* lo, double* hi);

ZD_API zd_status zd_assignment_load(const char* path, zd_assignment** out);
ZD_API zd_status zd_assignment_parse(const char* json, zd_assignment** out);
ZD_API void zd_assignment_destroy(zd_assignment* a);
ZD_API zd_status zd_assignment_to_json(const zd_assignment* a, char** json);
ZD_API zd_status zd_assignment_designer(const zd_assignment* a, int* designer);
ZD_API zd_status zd_assignment_save(const zd_assignment* a, const char* path);
/* Row of the designer's full rule (length kappa). */
ZD_API zd_status zd_assignment_row(const zd_assignment* a, int strategy, double* out, size_t capacity);
/* json (optional) lists violations, warnings and mu values. */
ZD_API zd_status zd_assignment_rationality(const zd_assignment* a, int* rational, char** json);

/* opponent rules: {rules: [{player, matrix}]} */
ZD_API zd_status zd_rules_load(const char* path, zd_rules** out);
ZD_API zd_status zd_rules_parse(const char* json, zd_rules** out);
/* Interior random rules for every player except designer. */
ZD_API zd_status zd_rules_random(const zd_game* g, int designer, uint64_t seed, zd_rules** out);
ZD_API void zd_rules_destroy(zd_rules* r);
ZD_API zd_status zd_rules_to_json(const zd_rules* r, char** json);

ZD_API zd_status zd_transition_matrix(const zd_game* g, const zd_assignment* a, const zd_rules* opponents,
                                      zd_matrix** out);
/* Effectiveness against given opponents. A non-effective design is not an error. */
ZD_API zd_status zd_verify(const zd_game* g, const zd_assignment* a, const zd_rules* opponents, double tol,
                           int* effective, char** json);
/* trials independent random interior opponent sets drawn from seed. */
ZD_API zd_status zd_verify_random(const zd_game* g, const zd_assignment* a, size_t trials, uint64_t seed, double tol,
                                  int* all_effective, char** json);

/* Samples steps transitions of L from start (1-based) and compares visit frequencies with the
 * stationary vector at z standard errors. With a game, empirical expected payoffs are reported;
 * with an assignment too, the designed relations are evaluated on them. */
ZD_API zd_status zd_simulate(const zd_matrix* l, const zd_game* g, const zd_assignment* a, size_t start, size_t steps,
                             uint64_t seed, double z, int* pass, char** json);

/* networks: {nodes, edges, base_game: {k, payoff_bimatrix, labels?}} */
ZD_API zd_status zd_network_load(const char* path, zd_network** out);
ZD_API zd_status zd_network_parse(const char* json, zd_network** out);
ZD_API void zd_network_destroy(zd_network* n);
/* Two-player game of node against its fictitious opponent. json (optional) describes the reduction. */
ZD_API zd_status zd_neg_reduce(const zd_network* n, const char* node, zd_game** out, char** json);

#ifdef __cplusplus
}
#endif

#endif
