/* Exercises the shared library strictly through its C header. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "zdkit/zdkit.h"

static int failures = 0;

#define EXPECT(cond)                                                 \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                    \
    }                                                                \
  } while (0)

#define EXPECT_OK(call)                                                                         \
  do {                                                                                          \
    zd_status s_ = (call);                                                                      \
    if (s_ != ZD_OK) {                                                                          \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call, zd_status_name(s_), zd_last_error()); \
      ++failures;                                                                               \
    }                                                                                           \
  } while (0)

static const char* kPinningGame =
    "{\"players\": 3, \"strategy_counts\": [2, 3, 2], \"payoffs\": ["
    "[-3, -0.5, 6, 9, 8, 7, -4, -4.5, 5, 6.5, 5, 7],"
    "[4, -1, -5, 7.5, 2, 3.5, 8, -4, 5, 8, 9, -2],"
    "[9, 5, -6, -5.5, 5.5, 8, 8.5, 5.5, 0, -3.5, 4.5, 7]]}";

static void test_matrices(void) {
  const double a_entries[] = {1, 2, 3, 4};
  const double b_entries[] = {1, 0};
  zd_matrix* a = NULL;
  zd_matrix* b = NULL;
  zd_matrix* c = NULL;
  size_t rows = 0, cols = 0;
  double out[4];

  EXPECT_OK(zd_matrix_create(2, 2, a_entries, &a));
  EXPECT_OK(zd_matrix_create(2, 1, b_entries, &b));
  EXPECT_OK(zd_stp(a, b, &c));
  EXPECT_OK(zd_matrix_shape(c, &rows, &cols));
  EXPECT(rows == 2 && cols == 1);
  EXPECT_OK(zd_matrix_copy(c, out, 4));
  EXPECT(out[0] == 1 && out[1] == 3);
  zd_matrix_destroy(c);

  EXPECT_OK(zd_kron(a, b, &c));
  EXPECT_OK(zd_matrix_shape(c, &rows, &cols));
  EXPECT(rows == 4 && cols == 2);
  zd_matrix_destroy(c);

  EXPECT(zd_khatri_rao(a, b, &c) == ZD_DIMENSION);
  EXPECT(strlen(zd_last_error()) > 0);
  EXPECT(zd_matrix_copy(a, out, 3) == ZD_INVALID_ARGUMENT);
  EXPECT(zd_matrix_create(2, 2, NULL, &c) == ZD_INVALID_ARGUMENT);
  EXPECT(zd_matrix_load("/nonexistent/zdkit.json", &c) == ZD_IO);
  zd_matrix_destroy(a);
  zd_matrix_destroy(b);
}

static void test_analyze(void) {
  const double l_entries[] = {0.5, 0.25, 0.5, 0.75};
  zd_matrix* l = NULL;
  zd_markov_summary summary;
  double u[2];
  char* json = NULL;
  EXPECT_OK(zd_matrix_create(2, 2, l_entries, &l));
  EXPECT_OK(zd_analyze(l, &summary, &json));
  EXPECT(summary.primitive && summary.witness == 1 && summary.rank_defect == 1 && summary.has_stationary);
  EXPECT(json != NULL && strstr(json, "\"primitive\":true") != NULL);
  zd_string_free(json);
  EXPECT_OK(zd_stationary(l, u, 2));
  EXPECT(fabs(u[0] - 1.0 / 3.0) < 1e-14 && fabs(u[1] - 2.0 / 3.0) < 1e-14);
  zd_matrix_destroy(l);
}

static void test_game_and_design(void) {
  zd_game* g = NULL;
  zd_assignment* a = NULL;
  zd_assignment* back = NULL;
  int players = 0, rational = 0, effective = 0, designer = 0;
  size_t profiles = 0, count = 0;
  size_t phi[12];
  double row[12];
  char* json = NULL;
  const char* specs[] = {"1:pin:1:4", "2:pin:3:3"};
  const char* mus[] = {"0.1"};
  const double expected1[] = {0.3, 0.55, 0.2, 0.5, 0.4, 0.3, 0.2, 0.15, 0.1, 0.25, 0.1, 0.3};
  int i;

  EXPECT_OK(zd_game_parse(kPinningGame, &g));
  EXPECT_OK(zd_game_players(g, &players, &profiles));
  EXPECT(players == 3 && profiles == 12);
  EXPECT_OK(zd_game_phi(g, 2, 2, phi, 12, &count));
  EXPECT(count == 4 && phi[0] == 3 && phi[1] == 4 && phi[2] == 9 && phi[3] == 10);

  EXPECT_OK(zd_design_from_specs(g, 2, specs, 2, mus, 1, &a));
  EXPECT_OK(zd_assignment_row(a, 1, row, 12));
  for (i = 0; i < 12; ++i) EXPECT(fabs(row[i] - expected1[i]) < 1e-12);
  EXPECT_OK(zd_assignment_rationality(a, &rational, NULL));
  EXPECT(rational);
  EXPECT_OK(zd_assignment_designer(a, &designer));
  EXPECT(designer == 2);

  EXPECT_OK(zd_assignment_to_json(a, &json));
  EXPECT_OK(zd_assignment_parse(json, &back));
  zd_string_free(json);
  EXPECT_OK(zd_assignment_row(back, 2, row, 12));
  EXPECT(fabs(row[0] - 0.6) < 1e-12);
  zd_assignment_destroy(back);

  EXPECT_OK(zd_verify_random(g, a, 5, 99, 1e-8, &effective, NULL));
  EXPECT(effective);
  zd_assignment_destroy(a);

  {
    const char* zero[] = {"0"};
    EXPECT(zd_design_from_specs(g, 2, specs, 1, zero, 1, &a) == ZD_DOMAIN);
    EXPECT(strstr(zd_last_error(), "nonzero") != NULL);
  }
  {
    const char* three[] = {"1:pin:1:4", "2:pin:3:3", "3:pin:1:1"};
    EXPECT(zd_design_from_specs(g, 2, three, 3, mus, 1, &a) == ZD_DOMAIN);
  }
  {
    const char* bad[] = {"1:pin:one:4"};
    EXPECT(zd_design_from_specs(g, 2, bad, 1, mus, 1, &a) == ZD_PARSE);
  }
  {
    const double coeffs[] = {1, 0, 0};
    zd_relation rel = {1, coeffs, 3, -4.0, 0.0, 1};
    double lo = 0, hi = 0;
    EXPECT_OK(zd_mu_interval(g, 2, &rel, &lo, &hi));
    EXPECT(lo <= 0 && hi > 0.1);
    EXPECT_OK(zd_design(g, 2, &rel, 1, &a));
    EXPECT_OK(zd_assignment_rationality(a, &rational, NULL));
    EXPECT(rational);
    zd_assignment_destroy(a);
  }
  zd_game_destroy(g);
}

static void test_errors(void) {
  zd_game* g = NULL;
  zd_network* n = NULL;
  zd_game* reduced = NULL;
  char* json = NULL;
  EXPECT(zd_game_parse("{\"players\": 2, \"strategy_counts\": [2, 2]}", &g) == ZD_PARSE);
  EXPECT(strstr(zd_last_error(), "missing field 'payoffs'") != NULL);
  EXPECT(zd_game_parse("{not json", &g) == ZD_PARSE);
  EXPECT(zd_game_load(NULL, &g) == ZD_INVALID_ARGUMENT);

  EXPECT_OK(zd_network_parse("{\"nodes\": [\"A\", \"B\", \"C\"], \"edges\": [[\"A\", \"B\"], [\"A\", \"C\"]],"
                             " \"base_game\": {\"k\": 2, \"payoff_bimatrix\": [[[3, 3], [0, 5]], [[5, 0], [1, 1]]]}}",
                             &n));
  EXPECT_OK(zd_neg_reduce(n, "A", &reduced, &json));
  EXPECT(strstr(json, "\"degree\":2") != NULL);
  zd_string_free(json);
  zd_game_destroy(reduced);
  EXPECT(zd_neg_reduce(n, "Q", &reduced, NULL) == ZD_DOMAIN);
  zd_network_destroy(n);
  EXPECT(strcmp(zd_status_name(ZD_ANALYSIS), "analysis error") == 0);
  EXPECT(strlen(zd_version()) > 0);
}

int main(void) {
  test_matrices();
  test_analyze();
  test_game_and_design();
  test_errors();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
