#include <stdio.h>
#include <string.h>
#include "howe3.h"

int main(void) {
    Howe3Report *r = NULL;
    if (howe3_enumerate(23, HOWE3_KIND_HOWE_TYPE, 1, &r) != HOWE3_STATUS_OK) {
        fprintf(stderr, "%s\n", howe3_last_error());
        return 1;
    }
    uint64_t n = 0;
    howe3_report_tally(r, "total", 0, &n);
    printf("p=%llu total=%llu tally=%llu\n", (unsigned long long)howe3_report_p(r),
           (unsigned long long)howe3_report_total(r), (unsigned long long)n);
    char *s = NULL;
    if (howe3_report_curve(r, 0, &s) == HOWE3_STATUS_OK) {
        printf("first=%s\n", s);
        howe3_string_free(s);
    }
    howe3_report_free(r);

    Howe3Status st = howe3_enumerate(21, HOWE3_KIND_OORT_TYPE, 1, &r);
    printf("status=%d error=%s\n", (int)st, howe3_last_error());
    return st == HOWE3_STATUS_INVALID_INPUT ? 0 : 1;
}
