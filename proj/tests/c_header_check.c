/* Compiles the public header as C and exercises a few calls. */
#include <stdio.h>
#include <string.h>

#include "tsbib/tsbib.h"

int main(void) {
  double stat = 0.0, p = 0.0;
  char out[4];
  const double raw[] = {0.0, 0.0, 3.0};
  tsbib_config* config = NULL;

  if (tsbib_config_create(&config) != TSBIB_OK) return 1;
  tsbib_config_destroy(config);
  if (tsbib_chi_squared_2x2(10, 20, 20, 10, 0, &stat, &p) != TSBIB_OK) return 1;
  if (tsbib_symbolize(raw, 3, 30.0, 5.0, out, sizeof out) != TSBIB_OK || strcmp(out, "0U") != 0) return 1;
  printf("tsbib %s: chi2=%.4f p=%.6f symbols=%s\n", tsbib_version(), stat, p, out);
  return 0;
}
