/*
 * File-driven I/O harness for generated network artifacts.
 *
 * Usage: harness <input.csv> <output.csv>
 *
 * Reads one CSV row of NET_INPUT_DIM raw input values per control tick,
 * calls net_step() once per row, and writes one CSV row per tick holding
 * NET_OUTPUT_DIM outputs followed by NET_NUM_SPIKE_LAYERS per-layer spike
 * counts. Floating-point text uses 17 significant digits so every value
 * round-trips exactly. Exit status 0 on success, nonzero with a line
 * diagnostic on malformed input.
 *
 * No heap allocation happens after initialization: line and I/O buffers
 * are static and stdio buffering is pinned to static storage. Compile
 * with -DHARNESS_ALLOC_GUARD to abort on any allocation inside the step
 * loop (instrumentation build).
 */

#include <errno.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "net_artifact.h"

#define LINE_CAP 8192

static char line_buf[LINE_CAP];
static char in_io_buf[1 << 16];
static char out_io_buf[1 << 16];

#ifdef HARNESS_ALLOC_GUARD
/* Interpose the allocator: any allocation while the guard is armed is a
 * contract violation of the step loop. */
extern void *__libc_malloc(size_t size);
extern void *__libc_calloc(size_t n, size_t size);
extern void *__libc_realloc(void *ptr, size_t size);
extern void __libc_free(void *ptr);

static int guard_armed = 0;

static void guard_trip(const char *what) {
    if (guard_armed) {
        fprintf(stderr, "alloc guard tripped: %s inside step loop\n", what);
        _Exit(98);
    }
}

void *malloc(size_t size) { guard_trip("malloc"); return __libc_malloc(size); }
void *calloc(size_t n, size_t size) { guard_trip("calloc"); return __libc_calloc(n, size); }
void *realloc(void *ptr, size_t size) { guard_trip("realloc"); return __libc_realloc(ptr, size); }
void free(void *ptr) { guard_trip("free"); __libc_free(ptr); }

#define GUARD_ARM() (guard_armed = 1)
#define GUARD_DISARM() (guard_armed = 0)
#else
#define GUARD_ARM() ((void)0)
#define GUARD_DISARM() ((void)0)
#endif

static int parse_row(char *text, float *values, int expected, long line_no) {
    char *cursor = text;
    for (int k = 0; k < expected; ++k) {
        char *end = NULL;
        errno = 0;
        double v = strtod(cursor, &end);
        if (end == cursor || errno == ERANGE) {
            fprintf(stderr, "line %ld: bad field %d\n", line_no, k + 1);
            return -1;
        }
        values[k] = (float)v;
        cursor = end;
        while (*cursor == ' ' || *cursor == '\t') {
            ++cursor;
        }
        if (k < expected - 1) {
            if (*cursor != ',') {
                fprintf(stderr, "line %ld: expected %d fields\n", line_no,
                        expected);
                return -1;
            }
            ++cursor;
        }
    }
    while (*cursor == ' ' || *cursor == '\t' || *cursor == '\r'
           || *cursor == '\n') {
        ++cursor;
    }
    if (*cursor != '\0') {
        fprintf(stderr, "line %ld: trailing junk after %d fields\n", line_no,
                expected);
        return -1;
    }
    return 0;
}

static int row_is_blank(const char *text) {
    for (; *text; ++text) {
        if (*text != ' ' && *text != '\t' && *text != '\r'
            && *text != '\n') {
            return 0;
        }
    }
    return 1;
}

int main(int argc, char **argv) {
    if (argc != 3) {
        fprintf(stderr, "usage: %s <input.csv> <output.csv>\n", argv[0]);
        return 2;
    }
    FILE *in = fopen(argv[1], "r");
    if (!in) {
        fprintf(stderr, "cannot open %s\n", argv[1]);
        return 2;
    }
    FILE *out = fopen(argv[2], "w");
    if (!out) {
        fprintf(stderr, "cannot open %s\n", argv[2]);
        fclose(in);
        return 2;
    }
    setvbuf(in, in_io_buf, _IOFBF, sizeof in_io_buf);
    setvbuf(out, out_io_buf, _IOFBF, sizeof out_io_buf);

    net_init();

    float inputs[NET_INPUT_DIM];
    float outputs[NET_OUTPUT_DIM];
    unsigned counts[NET_NUM_SPIKE_LAYERS];
    long line_no = 0;
    int status = 0;

    GUARD_ARM();
    while (fgets(line_buf, sizeof line_buf, in)) {
        ++line_no;
        size_t len = strlen(line_buf);
        if (len + 1 == sizeof line_buf && line_buf[len - 1] != '\n') {
            GUARD_DISARM();
            fprintf(stderr, "line %ld: longer than %d bytes\n", line_no,
                    LINE_CAP);
            status = 1;
            break;
        }
        if (row_is_blank(line_buf)) {
            continue;
        }
        if (parse_row(line_buf, inputs, NET_INPUT_DIM, line_no) != 0) {
            GUARD_DISARM();
            status = 1;
            break;
        }
        net_step(inputs, outputs, counts);
        for (int k = 0; k < NET_OUTPUT_DIM; ++k) {
            fprintf(out, "%.17g,", (double)outputs[k]);
        }
        for (int k = 0; k < NET_NUM_SPIKE_LAYERS; ++k) {
            fprintf(out, k + 1 < NET_NUM_SPIKE_LAYERS ? "%u," : "%u",
                    counts[k]);
        }
        fputc('\n', out);
    }
    GUARD_DISARM();

    fclose(in);
    if (fclose(out) != 0) {
        fprintf(stderr, "write failure on %s\n", argv[2]);
        return 2;
    }
    return status;
}
