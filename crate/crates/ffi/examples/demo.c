/* Designs one wave, prints lambda_{2,0} and runs a small UWVF solve. */
#include <stdio.h>

#include "gpw.h"

int main(void) {
  GpwField *field = NULL;
  GpwWave *wave = NULL;
  double re = 0.0, im = 0.0, err = 0.0, cond = 0.0;

  if (gpw_field_affine(1.0, 0.0, -1.0, &field) != GPW_STATUS_OK) return 1;
  if (gpw_wave_design(field, 2.0, 1.0, 3, 0.0, GPW_NORM_CONST, 0.0, 0.0, &wave) != GPW_STATUS_OK) {
    fprintf(stderr, "%s\n", gpw_last_error());
    return 1;
  }
  gpw_wave_lambda(wave, 2, 0, &re, &im);
  printf("lambda20 %g %g\n", re, im);

  if (gpw_wave_design(field, 1.0, 1.0, 3, 0.0, GPW_NORM_BETA, 0.0, 0.0, &wave) == GPW_STATUS_ZERO_LOCAL_WAVENUMBER)
    printf("rejected: %s\n", gpw_last_error());

  if (gpw_uwvf_airy(9, 2, 2, GPW_NORM_BETA, GPW_QUAD_WEDDLE7, 1.0, &err, &cond) != GPW_STATUS_OK) return 1;
  printf("uwvf %.3e %.3e\n", err, cond);

  gpw_wave_free(wave);
  gpw_field_free(field);
  return 0;
}
