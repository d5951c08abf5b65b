#ifndef HOPF_KH_H
#define HOPF_KH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define HK_OK 0

#define HK_NULL_POINTER 1

#define HK_INVALID_UTF8 2

#define HK_PARSE_ERROR 3

#define HK_INVALID_ARGUMENT 4

#define HK_COMPUTATION_ERROR 5

#define HK_PANIC 6

#define HK_COEFF_Z 0

#define HK_COEFF_F2 1

#define HK_COEFF_Q 2

/**
 * Opaque link diagram.
 */
typedef struct HkDiagram HkDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a PD code, diagram JSON, or library name.
 *
 * # Safety
 * `input` must be a NUL-terminated string and `out` a valid pointer.
 */
int hk_diagram_parse(const char *input, struct HkDiagram **out);

/**
 * Looks up a built-in diagram by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
int hk_library_diagram(const char *name, struct HkDiagram **out);

/**
 * # Safety
 * `d` must come from this library and not be freed twice. Null is ignored.
 */
void hk_diagram_free(struct HkDiagram *d);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int hk_diagram_component_count(const struct HkDiagram *d, uintptr_t *out);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int hk_linking_number(const struct HkDiagram *d, uintptr_t i, uintptr_t j, int64_t *out);

/**
 * Khovanov homology as JSON. `component < 0` picks the distinguished
 * component when `reduced` is set.
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int hk_kh_json(const struct HkDiagram *d, int coeff, bool reduced, int32_t component, char **out);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int hk_jones_json(const struct HkDiagram *d, char **out);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int hk_alexander_json(const struct HkDiagram *d, char **out);

/**
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int hk_koszul_bound(const struct HkDiagram *d, uintptr_t *out);

/**
 * Detection certificate as JSON.
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int hk_detect_json(const struct HkDiagram *d, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void hk_string_free(char *s);

/**
 * Message for the last failing call on this thread, empty after success.
 * Valid until the next call on the same thread.
 */
const char *hk_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HOPF_KH_H */
