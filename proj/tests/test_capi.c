/* Exercises the C interface from plain C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "pcw/pcw.h"

static int failures = 0;

#define CHECK(cond)                                               \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: CHECK(%s) failed: %s\n", __FILE__, \
              __LINE__, #cond, pcw_last_error());                 \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* complete2 = "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n";

static void test_errors(void) {
  pcw_formula* f = NULL;
  CHECK(pcw_formula_from_dimacs("p cnf 2 1\n3 0\n", &f) == PCW_ERR_PARSE);
  CHECK(f == NULL);
  CHECK(strstr(pcw_last_error(), "line 2") != NULL);
  CHECK(pcw_formula_read("/nonexistent/file.cnf", &f) == PCW_ERR_IO);
  CHECK(pcw_formula_from_dimacs(NULL, &f) == PCW_ERR_INVALID_ARGUMENT);
  CHECK(strcmp(pcw_status_name(PCW_ERR_CAP_EXCEEDED), "cap exceeded") == 0);
  CHECK(pcw_version() != NULL && strlen(pcw_version()) > 0);
}

static void test_roundtrip(void) {
  pcw_formula* f = NULL;
  pcw_partition* p = NULL;
  pcw_circuit* c = NULL;
  char* report = NULL;
  char* text = NULL;
  int pass = 0;
  pcw_caps caps;

  CHECK(pcw_formula_from_dimacs(complete2, &f) == PCW_OK);
  CHECK(pcw_formula_num_vars(f) == 2);
  CHECK(pcw_formula_num_clauses(f) == 4);
  CHECK(pcw_partition_parse("x:1 y:2", 2, &p) == PCW_OK);
  CHECK(pcw_partition_to_string(p, &text) == PCW_OK);
  pcw_string_free(text);

  pcw_caps_default(&caps);
  CHECK(caps.max_side_vars == 12);
  CHECK(pcw_compile_resolution(f, p, &caps, &c, &report) == PCW_OK);
  CHECK(report != NULL && strstr(report, "\"length\": 7") != NULL);
  pcw_string_free(report);
  CHECK(pcw_circuit_num_gates(c) > 0);

  CHECK(pcw_verify_separation(c, f, p, NULL, &report, &pass) == PCW_OK);
  CHECK(pass == 1);
  pcw_string_free(report);
  CHECK(pcw_extract_cc2(c, f, p, NULL, &report, &pass) == PCW_OK);
  CHECK(pass == 1);
  pcw_string_free(report);

  CHECK(pcw_circuit_to_text(c, &text) == PCW_OK);
  {
    pcw_circuit* again = NULL;
    CHECK(pcw_circuit_from_text(text, &again) == PCW_OK);
    CHECK(pcw_circuit_num_gates(again) == pcw_circuit_num_gates(c));
    pcw_circuit_free(again);
  }
  pcw_string_free(text);

  CHECK(pcw_roundtrip(f, p, NULL, 0, NULL, &report, &pass) == PCW_OK);
  CHECK(pass == 1);
  pcw_string_free(report);

  {
    pcw_circuit* zero = NULL;
    CHECK(pcw_circuit_from_text("g1 = const0\noutput g1\n", &zero) == PCW_OK);
    CHECK(pcw_verify_separation(zero, f, p, NULL, &report, &pass) == PCW_OK);
    CHECK(pass == 0);
    pcw_string_free(report);
    CHECK(pcw_extract_cc2(zero, f, p, NULL, &report, &pass) == PCW_ERR_PRECONDITION);
    pcw_circuit_free(zero);
  }

  pcw_circuit_free(c);
  pcw_partition_free(p);
  pcw_formula_free(f);
}

static void test_cp_and_caps(void) {
  pcw_formula* f = NULL;
  pcw_partition* p = NULL;
  char* report = NULL;
  int refutes = 0;
  pcw_caps caps;

  CHECK(pcw_formula_from_dimacs("p cnf 1 2\n1 0\n-1 0\n", &f) == PCW_OK);
  CHECK(pcw_check_cp_proof(f, "1: 1 >= 1 ; hyp 1\n2: -1 >= 0 ; hyp 2\n3: 0 >= 1 ; add 1 2\n", &report, &refutes) ==
        PCW_OK);
  CHECK(refutes == 1);
  pcw_string_free(report);
  CHECK(pcw_check_cp_proof(f, "1: 1 >= 1 ; hyp 1\n2: -1 >= 0 ; hyp 2\n3: 0 >= 2 ; add 1 2\n", &report, &refutes) ==
        PCW_OK);
  CHECK(refutes == 0);
  pcw_string_free(report);
  CHECK(pcw_check_cp_proof(f, "1: 1 >= 1 ; frob\n", &report, &refutes) == PCW_ERR_PARSE);
  pcw_formula_free(f);

  /* satisfiable formula: precondition error naming a witness */
  CHECK(pcw_formula_from_dimacs("p cnf 2 1\n1 2 0\n", &f) == PCW_OK);
  CHECK(pcw_partition_parse("alternating", 2, &p) == PCW_OK);
  CHECK(pcw_roundtrip(f, p, NULL, 0, NULL, &report, &refutes) == PCW_ERR_PRECONDITION);
  CHECK(strstr(pcw_last_error(), "witness") != NULL);
  pcw_caps_default(&caps);
  caps.max_brute_force_vars = 1;
  CHECK(pcw_roundtrip(f, p, NULL, 0, &caps, &report, &refutes) == PCW_ERR_CAP_EXCEEDED);
  pcw_partition_free(p);
  pcw_formula_free(f);
}

static void test_random_lab(void) {
  pcw_dist_params params = {384, 8, 2, 1, 1};
  pcw_formula* f = NULL;
  pcw_partition* p = NULL;
  char* report = NULL;
  double rate = 0;
  int flag = 0;

  CHECK(pcw_stats_unsat_rate(&params, 20, NULL, &report, &rate) == PCW_OK);
  CHECK(rate >= 0.9);
  pcw_string_free(report);

  CHECK(pcw_sample_formula(&params, &f, &p) == PCW_OK);
  CHECK(pcw_formula_num_vars(f) == 16);
  CHECK(pcw_stats_side_profiles(f, p, PCW_SIDE_Y, PCW_MODE_EXACT, 0, 1, &report, &flag) == PCW_OK);
  pcw_string_free(report);
  CHECK(pcw_stats_heavy_sat(f, p, PCW_SIDE_X, "1/4", PCW_MODE_AUTO, 1000, 1, &report, &rate) == PCW_OK);
  CHECK(rate >= 0 && rate <= 1);
  pcw_string_free(report);
  CHECK(pcw_stats_expansion(f, "1/2", 2, PCW_MODE_AUTO, 100, 1, &report, &flag) == PCW_OK);
  pcw_string_free(report);
  CHECK(pcw_stats_expansion(f, "0", 2, PCW_MODE_AUTO, 100, 1, &report, &flag) == PCW_ERR_INVALID_ARGUMENT);
  pcw_partition_free(p);
  pcw_formula_free(f);

  params.tensor = 0;
  params.m = 200;
  params.n = 40;
  params.d = 8;
  CHECK(pcw_sample_formula(&params, &f, NULL) == PCW_OK);
  CHECK(pcw_stats_heavy_partition(f, "1/4", 100, 3, &report, &flag, &p) == PCW_OK);
  CHECK(p != NULL);
  pcw_string_free(report);
  pcw_partition_free(p);
  pcw_formula_free(f);
}

int main(void) {
  test_errors();
  test_roundtrip();
  test_cp_and_caps();
  test_random_lab();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
