#include <assert.h>
#include <math.h>
#include <stdio.h>
#include "mho.h"

int main(void) {
  double v = 0.0;
  assert(mho_binary_entropy(0.5, &v) == MHO_STATUS_OK && v == 1.0);
  assert(mho_binary_entropy(1.5, &v) == MHO_STATUS_INVALID_ARGUMENT);
  printf("error: %s\n", mho_last_error_message());

  double pairs[4] = {0.2, 0.0, 0.3, 0.0};
  assert(mho_phi(pairs, 2, &v) == MHO_STATUS_OK);
  assert(fabs(v - 0.6451769718917554) < 1e-12);

  double p[1] = {0.2}, caps[1] = {0.03};
  MhoRegion *region = NULL;
  assert(mho_region_build(MHO_REGION_KIND_OUTER, 2, p, caps, 0.0, &region) == MHO_STATUS_OK);
  double low[1] = {0.1};
  assert(mho_region_min_rate1(region, low, 1, &v) == MHO_STATUS_INFEASIBLE);
  assert(isinf(v));
  double full[1] = {1.0};
  assert(mho_region_min_rate1(region, full, 1, &v) == MHO_STATUS_OK);
  assert(fabs(v - 0.7219280948873623) < 1e-12);
  int inside = 0;
  double tuple[2] = {0.9, 0.9};
  assert(mho_region_contains(region, tuple, 2, 1e-9, &inside) == MHO_STATUS_OK && inside == 1);
  mho_region_free(region);

  assert(mho_region_build(MHO_REGION_KIND_WEAK, 2, p, NULL, 0.0, &region) == MHO_STATUS_OK);
  assert(mho_region_min_rate1(region, full, 1, &v) == MHO_STATUS_OK);
  assert(fabs(v - 0.7219280948873623) < 1e-12);
  mho_region_free(region);
  mho_region_free(NULL);

  puts("C smoke test passed");
  return 0;
}
